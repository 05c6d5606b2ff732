#include "hermes/http.hpp"

#include <httplib.h>

#include "hermes/util.hpp"

namespace hermes {

HttpResponse HttpTransport::get(const std::string& path,
                                const std::map<std::string, std::string>& headers) {
    return request("GET", path, headers, "", "");
}

HttpResponse HttpTransport::post(const std::string& path, const std::string& body,
                                 const std::map<std::string, std::string>& headers,
                                 const std::string& content_type) {
    return request("POST", path, headers, body, content_type);
}

HttpResponse HttpTransport::put(const std::string& path, const std::string& body,
                                const std::map<std::string, std::string>& headers,
                                const std::string& content_type) {
    return request("PUT", path, headers, body, content_type);
}

HttplibTransport::HttplibTransport(std::string base_url)
    : base_url_(std::move(base_url)) {}

HttplibTransport::~HttplibTransport() = default;

void HttplibTransport::set_default_header(const std::string& key,
                                          const std::string& value) {
    default_headers_[key] = value;
}

HttpResponse HttplibTransport::request(
    const std::string& method, const std::string& path,
    const std::map<std::string, std::string>& headers, const std::string& body,
    const std::string& content_type) {
    httplib::Client client(base_url_);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);

    httplib::Headers merged;
    for (const auto& [k, v] : default_headers_) merged.emplace(k, v);
    for (const auto& [k, v] : headers) merged.emplace(k, v);

    httplib::Result result;
    std::string ct = content_type.empty() ? "application/octet-stream" : content_type;
    if (method == "GET") {
        result = client.Get(path, merged);
    } else if (method == "POST") {
        result = client.Post(path, merged, body, ct);
    } else if (method == "PUT") {
        result = client.Put(path, merged, body, ct);
    } else if (method == "DELETE") {
        result = client.Delete(path, merged);
    } else {
        throw Error(ErrorKind::http, "unsupported HTTP method " + method);
    }

    if (!result) {
        throw Error(ErrorKind::http, "transport failure for " + method + " " +
                                         base_url_ + path + ": " +
                                         httplib::to_string(result.error()));
    }
    HttpResponse response;
    response.status = result->status;
    response.body = result->body;
    for (const auto& [k, v] : result->headers) response.headers[k] = v;
    return response;
}

}  // namespace hermes
