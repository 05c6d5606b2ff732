#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hermes {

enum class ErrorKind {
    usage,       // bad invocation or configuration supplied by the user
    parse,       // malformed input document
    validation,  // well-formed input violating a contract
    io,          // filesystem failure
    auth,        // credential resolution or rejection
    http,        // transport-level failure
    deposit,     // target-side rejection mid state machine
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

namespace util {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);
// write-temp-then-rename so readers never observe a partial file
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string collapse_whitespace(std::string_view s);

// Replaces common accented Latin code points with their ASCII base letter.
// Unknown sequences pass through unchanged.
std::string fold_diacritics(std::string_view s);

std::string sha256_hex(std::string_view bytes);

// Shell-style matching with "**" crossing directory separators.
bool glob_match(std::string_view pattern, std::string_view path);

// Lowercased alphanumeric tokens; everything else is a separator.
std::vector<std::string> text_tokens(std::string_view s);

// Fraction of reference tokens (with multiplicity) found in the candidate.
double token_containment(const std::vector<std::string>& reference,
                         const std::vector<std::string>& candidate);

bool is_iso_date(std::string_view s);
// Accepts ISO dates, ISO timestamps (truncated), and Y/M/D variants.
std::optional<std::string> normalize_date(std::string_view s);

bool valid_orcid(std::string_view id);
// Strips a https://orcid.org/ prefix if present; returns the bare iD.
std::string normalize_orcid(std::string_view id);

bool looks_like_doi(std::string_view s);

}  // namespace util
}  // namespace hermes
