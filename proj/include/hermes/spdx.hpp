#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hermes::spdx {

// Grammar check for SPDX license expressions: identifiers, "+", WITH,
// AND/OR, parentheses. Does not require identifiers to be on the license
// list (new ids appear between releases).
bool valid_expression(std::string_view expression);

// Canonical casing for a known id ("mit" -> "MIT"); nullopt when unknown.
std::optional<std::string> canonical_id(std::string_view id);

// Resolves platform slugs and long-form license names against the alias
// table ("apache-2.0", "Apache License, Version 2.0" -> "Apache-2.0").
std::optional<std::string> from_alias(std::string_view name_or_slug);

// Extracts the id from an SPDX URL ("https://spdx.org/licenses/MIT" or
// ".../MIT.html"); bare ids pass through unchanged.
std::string strip_spdx_url(std::string_view value);

// Nearest bundled reference text by normalized token containment.
struct TextMatch {
    std::string id;
    double score = 0.0;
};
std::optional<TextMatch> identify_text(std::string_view license_text,
                                       double threshold = 0.9);

const std::vector<std::string>& known_ids();

}  // namespace hermes::spdx
