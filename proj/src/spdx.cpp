#include "hermes/spdx.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>

#include "hermes/util.hpp"
#include "hermes_data.hpp"

namespace hermes::spdx {

namespace {

using hermes::util::to_lower;
using hermes::util::trim;

const std::vector<std::string>& id_list() {
    static const std::vector<std::string> ids = {
        "0BSD",
        "AGPL-3.0-only",
        "AGPL-3.0-or-later",
        "Apache-1.1",
        "Apache-2.0",
        "Artistic-2.0",
        "BSD-2-Clause",
        "BSD-3-Clause",
        "BSD-3-Clause-Clear",
        "BSL-1.0",
        "CC-BY-4.0",
        "CC-BY-SA-4.0",
        "CC0-1.0",
        "CECILL-2.1",
        "EPL-1.0",
        "EPL-2.0",
        "EUPL-1.2",
        "GFDL-1.3-only",
        "GPL-2.0-only",
        "GPL-2.0-or-later",
        "GPL-3.0-only",
        "GPL-3.0-or-later",
        "ISC",
        "LGPL-2.1-only",
        "LGPL-2.1-or-later",
        "LGPL-3.0-only",
        "LGPL-3.0-or-later",
        "MIT",
        "MIT-0",
        "MPL-2.0",
        "Unlicense",
        "WTFPL",
        "Zlib",
    };
    return ids;
}

// Lowercased alias or long-form name -> canonical id. Legacy un-suffixed
// GPL family ids map to the "-only" form.
const std::map<std::string, std::string>& alias_table() {
    static const std::map<std::string, std::string> table = {
        {"agpl-3.0", "AGPL-3.0-only"},
        {"apache 2.0", "Apache-2.0"},
        {"apache license 2.0", "Apache-2.0"},
        {"apache license version 2.0", "Apache-2.0"},
        {"apache license, version 2.0", "Apache-2.0"},
        {"apache software license", "Apache-2.0"},
        {"apache-2", "Apache-2.0"},
        {"bsd 2-clause license", "BSD-2-Clause"},
        {"bsd 3-clause license", "BSD-3-Clause"},
        {"bsd license", "BSD-3-Clause"},
        {"creative commons attribution 4.0 international", "CC-BY-4.0"},
        {"eclipse public license 1.0", "EPL-1.0"},
        {"eclipse public license 2.0", "EPL-2.0"},
        {"eclipse public license - v 2.0", "EPL-2.0"},
        {"european union public licence 1.2", "EUPL-1.2"},
        {"gnu affero general public license v3.0", "AGPL-3.0-only"},
        {"gnu general public license v2.0", "GPL-2.0-only"},
        {"gnu general public license v3.0", "GPL-3.0-only"},
        {"gnu general public license version 2", "GPL-2.0-only"},
        {"gnu general public license version 3", "GPL-3.0-only"},
        {"gnu gpl v3", "GPL-3.0-only"},
        {"gnu lesser general public license v2.1", "LGPL-2.1-only"},
        {"gnu lesser general public license v3.0", "LGPL-3.0-only"},
        {"gpl-2.0", "GPL-2.0-only"},
        {"gpl-3.0", "GPL-3.0-only"},
        {"gplv2", "GPL-2.0-only"},
        {"gplv3", "GPL-3.0-only"},
        {"isc license", "ISC"},
        {"lgpl-2.1", "LGPL-2.1-only"},
        {"lgpl-3.0", "LGPL-3.0-only"},
        {"mit license", "MIT"},
        {"mozilla public license 2.0", "MPL-2.0"},
        {"new bsd license", "BSD-3-Clause"},
        {"simplified bsd license", "BSD-2-Clause"},
        {"the apache software license, version 2.0", "Apache-2.0"},
        {"the mit license", "MIT"},
        {"the unlicense", "Unlicense"},
        {"zlib license", "Zlib"},
    };
    return table;
}

bool id_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.';
}

std::vector<std::string> tokenize_expression(std::string_view expr) {
    std::vector<std::string> tokens;
    size_t i = 0;
    while (i < expr.size()) {
        char c = expr[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(' || c == ')' || c == '+') {
            tokens.emplace_back(1, c);
            ++i;
        } else if (id_char(c)) {
            size_t j = i;
            while (j < expr.size() && id_char(expr[j])) ++j;
            tokens.emplace_back(expr.substr(i, j - i));
            i = j;
        } else {
            tokens.emplace_back("\x01");  // invalid marker
            ++i;
        }
    }
    return tokens;
}

// recursive descent over: expr := term ((AND|OR) term)*
//                         term := id [+] [WITH id] | ( expr )
class ExpressionParser {
public:
    explicit ExpressionParser(std::vector<std::string> tokens)
        : tokens_(std::move(tokens)) {}

    bool parse() { return expression() && pos_ == tokens_.size(); }

private:
    bool expression() {
        if (!term()) return false;
        while (pos_ < tokens_.size() &&
               (tokens_[pos_] == "AND" || tokens_[pos_] == "OR")) {
            ++pos_;
            if (!term()) return false;
        }
        return true;
    }

    bool term() {
        if (pos_ >= tokens_.size()) return false;
        if (tokens_[pos_] == "(") {
            ++pos_;
            if (!expression()) return false;
            if (pos_ >= tokens_.size() || tokens_[pos_] != ")") return false;
            ++pos_;
            return true;
        }
        if (!plain_id(tokens_[pos_])) return false;
        ++pos_;
        if (pos_ < tokens_.size() && tokens_[pos_] == "+") ++pos_;
        if (pos_ < tokens_.size() && tokens_[pos_] == "WITH") {
            ++pos_;
            if (pos_ >= tokens_.size() || !plain_id(tokens_[pos_])) return false;
            ++pos_;
        }
        return true;
    }

    static bool plain_id(const std::string& token) {
        if (token.empty() || token == "\x01") return false;
        if (token == "AND" || token == "OR" || token == "WITH") return false;
        return std::all_of(token.begin(), token.end(), id_char);
    }

    std::vector<std::string> tokens_;
    size_t pos_ = 0;
};

// Drops copyright lines (they carry holder names, not license identity)
// and tokenizes the rest.
std::vector<std::string> license_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& line : util::split_lines(std::string(text))) {
        std::string lowered = to_lower(trim(line));
        if (lowered.rfind("copyright", 0) == 0 || lowered.rfind("(c)", 0) == 0) {
            continue;
        }
        auto tokens = util::text_tokens(line);
        out.insert(out.end(), tokens.begin(), tokens.end());
    }
    return out;
}

struct Reference {
    std::string id;
    std::vector<std::string> tokens;
};

const std::vector<Reference>& reference_corpus() {
    static const std::vector<Reference> corpus = [] {
        std::vector<Reference> refs;
        for (const auto& [id, text] : data::license_texts) {
            refs.push_back({std::string(id), license_tokens(text)});
        }
        return refs;
    }();
    return corpus;
}

}  // namespace

bool valid_expression(std::string_view expression) {
    std::string t = trim(expression);
    if (t.empty()) return false;
    return ExpressionParser(tokenize_expression(t)).parse();
}

std::optional<std::string> canonical_id(std::string_view id) {
    std::string lowered = to_lower(trim(id));
    for (const auto& known : id_list()) {
        if (to_lower(known) == lowered) return known;
    }
    return std::nullopt;
}

std::optional<std::string> from_alias(std::string_view name_or_slug) {
    std::string cleaned = util::collapse_whitespace(to_lower(name_or_slug));
    while (!cleaned.empty() && (cleaned.back() == '.' || cleaned.back() == ',')) {
        cleaned.pop_back();
    }
    if (auto exact = canonical_id(cleaned)) return exact;
    auto it = alias_table().find(cleaned);
    if (it != alias_table().end()) return it->second;
    return std::nullopt;
}

std::string strip_spdx_url(std::string_view value) {
    std::string t = trim(value);
    for (std::string_view prefix :
         {"https://spdx.org/licenses/", "http://spdx.org/licenses/",
          "https://opensource.org/licenses/", "https://opensource.org/license/"}) {
        if (t.size() > prefix.size() &&
            to_lower(t.substr(0, prefix.size())) == prefix) {
            t = t.substr(prefix.size());
            break;
        }
    }
    for (std::string_view suffix : {".html", ".json", ".txt"}) {
        if (t.size() > suffix.size() && t.ends_with(suffix)) {
            t = t.substr(0, t.size() - suffix.size());
        }
    }
    while (!t.empty() && t.back() == '/') t.pop_back();
    return t;
}

std::optional<TextMatch> identify_text(std::string_view license_text,
                                       double threshold) {
    auto candidate = license_tokens(license_text);
    if (candidate.empty()) return std::nullopt;
    TextMatch best;
    size_t best_len = 0;
    for (const auto& ref : reference_corpus()) {
        double score = util::token_containment(ref.tokens, candidate);
        // prefer the longer (more specific) reference on near ties
        if (score > best.score + 1e-9 ||
            (score > best.score - 1e-9 && ref.tokens.size() > best_len)) {
            best.id = ref.id;
            best.score = score;
            best_len = ref.tokens.size();
        }
    }
    if (best.score + 1e-12 < threshold) return std::nullopt;
    return best;
}

const std::vector<std::string>& known_ids() { return id_list(); }

}  // namespace hermes::spdx
