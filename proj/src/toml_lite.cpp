#include "hermes/toml_lite.hpp"

#include <cctype>
#include <cstdlib>

#include "hermes/util.hpp"

namespace hermes::toml {

using nlohmann::json;

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    json parse_document() {
        json root = json::object();
        json* current = &root;
        while (!at_end()) {
            skip_ws_and_comments(true);
            if (at_end()) break;
            if (peek() == '[') {
                current = parse_table_header(root);
            } else {
                parse_key_value(*current);
                expect_line_end();
            }
        }
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorKind::parse,
                    "toml parse error at line " + std::to_string(line_) +
                        ", column " + std::to_string(column()) + ": " + message);
    }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            line_start_ = pos_;
        }
        return c;
    }

    size_t column() const { return pos_ - line_start_ + 1; }

    void skip_ws_and_comments(bool cross_lines) {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r') {
                advance();
            } else if (c == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else if (c == '\n' && cross_lines) {
                advance();
            } else {
                break;
            }
        }
    }

    void expect_line_end() {
        skip_ws_and_comments(false);
        if (at_end()) return;
        if (peek() != '\n') fail("expected end of line");
        advance();
    }

    std::string parse_bare_or_quoted_key() {
        skip_ws_and_comments(false);
        if (at_end()) fail("expected key");
        char c = peek();
        if (c == '"' || c == '\'') return parse_string();
        std::string key;
        while (!at_end()) {
            c = peek();
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
                key += advance();
            } else {
                break;
            }
        }
        if (key.empty()) fail("expected key");
        return key;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> parts{parse_bare_or_quoted_key()};
        skip_ws_and_comments(false);
        while (!at_end() && peek() == '.') {
            advance();
            parts.push_back(parse_bare_or_quoted_key());
            skip_ws_and_comments(false);
        }
        return parts;
    }

    json* parse_table_header(json& root) {
        advance();  // '['
        bool array_of_tables = false;
        if (!at_end() && peek() == '[') {
            advance();
            array_of_tables = true;
        }
        auto parts = parse_dotted_key();
        skip_ws_and_comments(false);
        if (at_end() || peek() != ']') fail("expected ']'");
        advance();
        if (array_of_tables) {
            if (at_end() || peek() != ']') fail("expected ']]'");
            advance();
        }
        expect_line_end();

        json* node = &root;
        for (size_t i = 0; i < parts.size(); ++i) {
            const std::string& key = parts[i];
            bool last = i + 1 == parts.size();
            if (last && array_of_tables) {
                if (!node->contains(key)) (*node)[key] = json::array();
                json& arr = (*node)[key];
                if (!arr.is_array()) fail("key '" + key + "' is not an array of tables");
                arr.push_back(json::object());
                return &arr.back();
            }
            if (!node->contains(key)) (*node)[key] = json::object();
            json& next = (*node)[key];
            if (next.is_array()) {
                if (next.empty()) fail("empty table array '" + key + "'");
                node = &next.back();
            } else if (next.is_object()) {
                node = &next;
            } else {
                fail("key '" + key + "' is not a table");
            }
        }
        return node;
    }

    void parse_key_value(json& table) {
        auto parts = parse_dotted_key();
        skip_ws_and_comments(false);
        if (at_end() || peek() != '=') fail("expected '='");
        advance();
        skip_ws_and_comments(false);
        json value = parse_value();

        json* node = &table;
        for (size_t i = 0; i + 1 < parts.size(); ++i) {
            if (!node->contains(parts[i])) (*node)[parts[i]] = json::object();
            node = &(*node)[parts[i]];
            if (!node->is_object()) fail("key '" + parts[i] + "' is not a table");
        }
        if (node->contains(parts.back())) fail("duplicate key '" + parts.back() + "'");
        (*node)[parts.back()] = std::move(value);
    }

    json parse_value() {
        if (at_end()) fail("expected value");
        char c = peek();
        if (c == '"' || c == '\'') return parse_string();
        if (c == '[') return parse_array();
        if (c == '{') return parse_inline_table();
        return parse_scalar();
    }

    std::string parse_string() {
        char quote = advance();
        bool multiline = false;
        if (pos_ + 1 < text_.size() && text_[pos_] == quote && text_[pos_ + 1] == quote) {
            advance();
            advance();
            multiline = true;
            if (!at_end() && peek() == '\n') advance();  // trim first newline
        }
        std::string out;
        while (true) {
            if (at_end()) fail("unterminated string");
            char c = advance();
            if (c == quote) {
                if (!multiline) break;
                if (pos_ + 1 < text_.size() && text_[pos_] == quote && text_[pos_ + 1] == quote) {
                    advance();
                    advance();
                    break;
                }
                out += c;
                continue;
            }
            if (quote == '"' && c == '\\') {
                if (at_end()) fail("dangling escape");
                char e = advance();
                switch (e) {
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'f': out += '\f'; break;
                    case 'b': out += '\b'; break;
                    case '\n':
                        // line-ending backslash in multiline strings
                        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\n' || peek() == '\r')) advance();
                        break;
                    case 'u':
                    case 'U': {
                        size_t n = (e == 'u') ? 4 : 8;
                        if (pos_ + n > text_.size()) fail("truncated unicode escape");
                        std::string hex(text_.substr(pos_, n));
                        for (size_t i = 0; i < n; ++i) advance();
                        unsigned long cp = std::strtoul(hex.c_str(), nullptr, 16);
                        append_utf8(out, cp);
                        break;
                    }
                    default: fail(std::string("unknown escape \\") + e);
                }
                continue;
            }
            if (!multiline && c == '\n') fail("unterminated string");
            out += c;
        }
        return out;
    }

    static void append_utf8(std::string& out, unsigned long cp) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    json parse_array() {
        advance();  // '['
        json arr = json::array();
        while (true) {
            skip_ws_and_comments(true);
            if (at_end()) fail("unterminated array");
            if (peek() == ']') {
                advance();
                break;
            }
            arr.push_back(parse_value());
            skip_ws_and_comments(true);
            if (!at_end() && peek() == ',') {
                advance();
            } else if (!at_end() && peek() == ']') {
                advance();
                break;
            } else if (at_end()) {
                fail("unterminated array");
            } else {
                fail("expected ',' or ']' in array");
            }
        }
        return arr;
    }

    json parse_inline_table() {
        advance();  // '{'
        json table = json::object();
        skip_ws_and_comments(false);
        if (!at_end() && peek() == '}') {
            advance();
            return table;
        }
        while (true) {
            parse_key_value(table);
            skip_ws_and_comments(false);
            if (at_end()) fail("unterminated inline table");
            if (peek() == ',') {
                advance();
                continue;
            }
            if (peek() == '}') {
                advance();
                break;
            }
            fail("expected ',' or '}' in inline table");
        }
        return table;
    }

    json parse_scalar() {
        std::string raw;
        while (!at_end()) {
            char c = peek();
            if (c == '\n' || c == '#' || c == ',' || c == ']' || c == '}') break;
            raw += advance();
        }
        std::string token = util::trim(raw);
        if (token.empty()) fail("expected value");
        if (token == "true") return true;
        if (token == "false") return false;

        bool numeric = true;
        bool is_float = false;
        for (size_t i = 0; i < token.size(); ++i) {
            char c = token[i];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') continue;
            if ((c == '+' || c == '-') && i == 0) continue;
            if (c == '.' || c == 'e' || c == 'E') {
                is_float = true;
                continue;
            }
            numeric = false;
            break;
        }
        if (numeric) {
            std::string digits;
            for (char c : token) {
                if (c != '_') digits += c;
            }
            // date-like values (1979-05-27) fall through to string below
            if (is_float) {
                char* end = nullptr;
                double v = std::strtod(digits.c_str(), &end);
                if (end && *end == '\0') return v;
            } else {
                char* end = nullptr;
                long long v = std::strtoll(digits.c_str(), &end, 10);
                if (end && *end == '\0') return v;
            }
        }
        // dates, times and anything else TOML-ish stay verbatim strings
        return token;
    }

    std::string_view text_;
    size_t pos_ = 0;
    size_t line_ = 1;
    size_t line_start_ = 0;
};

void serialize_value(const json& v, std::string& out) {
    switch (v.type()) {
        case json::value_t::string: {
            std::string escaped;
            for (char c : v.get<std::string>()) {
                switch (c) {
                    case '"': escaped += "\\\""; break;
                    case '\\': escaped += "\\\\"; break;
                    case '\n': escaped += "\\n"; break;
                    case '\t': escaped += "\\t"; break;
                    case '\r': escaped += "\\r"; break;
                    default: escaped += c;
                }
            }
            out += '"' + escaped + '"';
            break;
        }
        case json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            break;
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ", ";
                first = false;
                serialize_value(item, out);
            }
            out += ']';
            break;
        }
        case json::value_t::object: {
            out += "{ ";
            bool first = true;
            for (const auto& [k, item] : v.items()) {
                if (!first) out += ", ";
                first = false;
                out += k + " = ";
                serialize_value(item, out);
            }
            out += " }";
            break;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

json parse(std::string_view text) {
    return Parser(text).parse_document();
}

json parse_file(const std::filesystem::path& path) {
    return parse(util::read_file(path));
}

std::string serialize(const json& doc) {
    std::string out;
    // scalars and plain arrays first, then subtables
    for (const auto& [key, value] : doc.items()) {
        bool is_table = value.is_object();
        bool is_table_array = value.is_array() && !value.empty() && value.front().is_object();
        if (is_table || is_table_array) continue;
        out += key + " = ";
        serialize_value(value, out);
        out += '\n';
    }
    for (const auto& [key, value] : doc.items()) {
        if (value.is_object()) {
            out += "\n[" + key + "]\n";
            for (const auto& [k, v] : value.items()) {
                out += k + " = ";
                serialize_value(v, out);
                out += '\n';
            }
        } else if (value.is_array() && !value.empty() && value.front().is_object()) {
            for (const auto& item : value) {
                out += "\n[[" + key + "]]\n";
                for (const auto& [k, v] : item.items()) {
                    out += k + " = ";
                    serialize_value(v, out);
                    out += '\n';
                }
            }
        }
    }
    return out;
}

}  // namespace hermes::toml
