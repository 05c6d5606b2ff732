#pragma once

#include <map>
#include <memory>
#include <string>

namespace hermes {

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;
    std::string body;

    bool ok() const { return status >= 200 && status < 300; }
};

// Minimal transport seam so clients can be pointed at the simulator, a
// live service, or a test double.
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse request(const std::string& method, const std::string& path,
                                 const std::map<std::string, std::string>& headers,
                                 const std::string& body,
                                 const std::string& content_type) = 0;

    HttpResponse get(const std::string& path,
                     const std::map<std::string, std::string>& headers = {});
    HttpResponse post(const std::string& path, const std::string& body,
                      const std::map<std::string, std::string>& headers = {},
                      const std::string& content_type = "application/json");
    HttpResponse put(const std::string& path, const std::string& body,
                     const std::map<std::string, std::string>& headers = {},
                     const std::string& content_type = "application/json");
};

// cpp-httplib backed transport. Extra headers are sent with every request
// (used by tests for fault injection).
class HttplibTransport : public HttpTransport {
public:
    explicit HttplibTransport(std::string base_url);
    ~HttplibTransport() override;

    void set_default_header(const std::string& key, const std::string& value);
    const std::string& base_url() const { return base_url_; }

    HttpResponse request(const std::string& method, const std::string& path,
                         const std::map<std::string, std::string>& headers,
                         const std::string& body,
                         const std::string& content_type) override;

private:
    std::string base_url_;
    std::map<std::string, std::string> default_headers_;
};

}  // namespace hermes
