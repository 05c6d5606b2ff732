#include "hermes/util.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace hermes::util {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::io, "cannot read file: " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::io, "cannot write file: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw Error(ErrorKind::io, "write failed: " + path.string());
    }
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    static std::mt19937_64 rng{std::random_device{}()};
    fs::path tmp = path;
    tmp += ".tmp" + std::to_string(rng());
    write_file(tmp, content);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::io, "atomic rename failed: " + path.string());
    }
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> out;
    size_t start = 0;
    for (size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '\n') {
            std::string_view line = s.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            out.emplace_back(line);
            start = i + 1;
        }
    }
    if (!s.empty() && s.back() == '\n') out.pop_back();
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool in_ws = true;  // also strips leading whitespace
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_ws) out += ' ';
            in_ws = true;
        } else {
            out += c;
            in_ws = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::string fold_diacritics(std::string_view s) {
    static const std::map<std::string, std::string> folds = {
        {"à", "a"}, {"á", "a"}, {"â", "a"}, {"ã", "a"},
        {"ä", "a"}, {"å", "a"}, {"æ", "ae"}, {"ç", "c"},
        {"è", "e"}, {"é", "e"}, {"ê", "e"}, {"ë", "e"},
        {"ì", "i"}, {"í", "i"}, {"î", "i"}, {"ï", "i"},
        {"ð", "d"}, {"ñ", "n"}, {"ò", "o"}, {"ó", "o"},
        {"ô", "o"}, {"õ", "o"}, {"ö", "o"}, {"ø", "o"},
        {"ù", "u"}, {"ú", "u"}, {"û", "u"}, {"ü", "u"},
        {"ý", "y"}, {"ÿ", "y"}, {"ß", "ss"},
        {"À", "a"}, {"Á", "a"}, {"Â", "a"}, {"Ã", "a"},
        {"Ä", "a"}, {"Å", "a"}, {"Æ", "ae"}, {"Ç", "c"},
        {"È", "e"}, {"É", "e"}, {"Ê", "e"}, {"Ë", "e"},
        {"Ì", "i"}, {"Í", "i"}, {"Î", "i"}, {"Ï", "i"},
        {"Ñ", "n"}, {"Ò", "o"}, {"Ó", "o"}, {"Ô", "o"},
        {"Õ", "o"}, {"Ö", "o"}, {"Ø", "o"}, {"Ù", "u"},
        {"Ú", "u"}, {"Û", "u"}, {"Ü", "u"}, {"Ý", "y"},
        {"ć", "c"}, {"č", "c"}, {"ę", "e"}, {"ě", "e"},
        {"ł", "l"}, {"ń", "n"}, {"ř", "r"}, {"ś", "s"},
        {"š", "s"}, {"ź", "z"}, {"ż", "z"}, {"ž", "z"},
        {"œ", "oe"}, {"Œ", "oe"},
    };
    std::string out;
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        size_t len = 1;
        if ((c & 0x80) != 0) {
            if ((c & 0xE0) == 0xC0) len = 2;
            else if ((c & 0xF0) == 0xE0) len = 3;
            else if ((c & 0xF8) == 0xF0) len = 4;
            if (i + len > s.size()) len = 1;
            std::string seq(s.substr(i, len));
            auto it = folds.find(seq);
            out += (it != folds.end()) ? it->second : seq;
        } else {
            out += static_cast<char>(c);
        }
        i += len;
    }
    return out;
}

std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    EVP_DigestUpdate(ctx, bytes.data(), bytes.size());
    EVP_DigestFinal_ex(ctx, digest.data(), &len);
    EVP_MD_CTX_free(ctx);
    static const char hexd[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += hexd[digest[i] >> 4];
        out += hexd[digest[i] & 0xF];
    }
    return out;
}

namespace {

bool glob_match_impl(std::string_view pat, std::string_view path) {
    if (pat.empty()) return path.empty();
    if (pat.substr(0, 2) == "**") {
        std::string_view rest = pat.substr(2);
        if (!rest.empty() && rest.front() == '/') {
            // "**/x" also matches "x" at the current level
            if (glob_match_impl(rest.substr(1), path)) return true;
        }
        for (size_t i = 0; i <= path.size(); ++i) {
            if (glob_match_impl(rest, path.substr(i))) return true;
        }
        return false;
    }
    if (path.empty()) return false;
    char pc = pat.front();
    if (pc == '*') {
        for (size_t i = 0; i <= path.size(); ++i) {
            if (i > 0 && path[i - 1] == '/') break;  // single star stops at '/'
            if (glob_match_impl(pat.substr(1), path.substr(i))) return true;
        }
        return false;
    }
    if (pc == '?') {
        if (path.front() == '/') return false;
        return glob_match_impl(pat.substr(1), path.substr(1));
    }
    if (pc != path.front()) return false;
    return glob_match_impl(pat.substr(1), path.substr(1));
}

}  // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
    if (pattern == "**") return true;
    return glob_match_impl(pattern, path);
}

std::vector<std::string> text_tokens(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

double token_containment(const std::vector<std::string>& reference,
                         const std::vector<std::string>& candidate) {
    if (reference.empty()) return 0.0;
    std::map<std::string, int> have;
    for (const auto& t : candidate) ++have[t];
    size_t hit = 0;
    for (const auto& t : reference) {
        auto it = have.find(t);
        if (it != have.end() && it->second > 0) {
            --it->second;
            ++hit;
        }
    }
    return static_cast<double>(hit) / static_cast<double>(reference.size());
}

bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    int month = (s[5] - '0') * 10 + (s[6] - '0');
    int day = (s[8] - '0') * 10 + (s[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::optional<std::string> normalize_date(std::string_view s) {
    std::string t = trim(s);
    if (t.size() >= 10 && is_iso_date(std::string_view(t).substr(0, 10))) {
        // bare date or timestamp prefix
        if (t.size() == 10 || t[10] == 'T' || t[10] == ' ') {
            return t.substr(0, 10);
        }
    }
    // Y/M/D and Y.M.D variants
    for (char sep : {'/', '.'}) {
        auto parts = split(t, sep);
        if (parts.size() == 3 && parts[0].size() == 4) {
            auto pad = [](const std::string& p) {
                return p.size() == 1 ? "0" + p : p;
            };
            std::string iso = parts[0] + "-" + pad(parts[1]) + "-" + pad(parts[2]);
            if (is_iso_date(iso)) return iso;
        }
    }
    return std::nullopt;
}

std::string normalize_orcid(std::string_view id) {
    std::string t = trim(id);
    for (std::string_view prefix : {"https://orcid.org/", "http://orcid.org/", "orcid.org/"}) {
        if (t.size() > prefix.size() && to_lower(t.substr(0, prefix.size())) == prefix) {
            t = t.substr(prefix.size());
            break;
        }
    }
    return t;
}

bool valid_orcid(std::string_view id) {
    std::string t = normalize_orcid(id);
    if (t.size() != 19) return false;
    // 0000-0002-1825-0097 layout with ISO 7064 11,2 check digit
    int total = 0;
    int digits = 0;
    for (size_t i = 0; i < 19; ++i) {
        if (i == 4 || i == 9 || i == 14) {
            if (t[i] != '-') return false;
            continue;
        }
        ++digits;
        if (digits == 16) {
            int check = (t[i] == 'X' || t[i] == 'x') ? 10 : t[i] - '0';
            if (check < 0 || check > 10) return false;
            int expected = (12 - (total % 11)) % 11;
            return check == expected;
        }
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        total = (total + (t[i] - '0')) * 2;
    }
    return false;
}

bool looks_like_doi(std::string_view s) {
    if (s.substr(0, 3) != "10.") return false;
    size_t slash = s.find('/');
    if (slash == std::string_view::npos || slash + 1 >= s.size()) return false;
    for (size_t i = 3; i < slash; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])) && s[i] != '.') return false;
    }
    return true;
}

}  // namespace hermes::util
