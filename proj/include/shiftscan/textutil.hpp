#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace shiftscan {

/// Lowercase a UTF-8 string. Covers ASCII, Latin-1, Latin Extended-A, Greek
/// and the full Cyrillic block including historical letters, which is what
/// tagged Russian corpora need. Unmapped codepoints pass through unchanged.
std::string utf8_lower(std::string_view s);

/// Split on a single separator character; no empty-field collapsing.
std::vector<std::string> split(std::string_view s, char sep);

/// Split on runs of spaces, dropping empty fields.
std::vector<std::string> split_ws(std::string_view s);

/// Fixed 6-decimal formatting used by every text format in the toolkit.
std::string format_fixed6(double v);

}  // namespace shiftscan
