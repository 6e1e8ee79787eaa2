#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace path2vec {

inline constexpr std::string_view kVersion = "0.1.0";

using NodeId = std::uint32_t;

// Shortest double rendering that parses back to the identical value.
std::string format_exact(double value);

// 6 significant digits, the precision used by the word2vec text format.
std::string format_short(double value);

// Full-token double parse; throws std::runtime_error on garbage or trailing junk.
double parse_double(std::string_view token, std::string_view context);

// Splits on single TAB characters; empty fields are preserved.
std::vector<std::string_view> split_tabs(std::string_view line);

// True for comment lines (leading '#') after the directive check is done.
bool is_comment(std::string_view line);

// Strips one trailing '\r' so CRLF input behaves like LF.
std::string_view strip_cr(std::string_view line);

// Label -> id lookup table over an external label vector.
std::unordered_map<std::string_view, NodeId> build_label_index(std::span<const std::string> labels);

// FNV-1a 64-bit digest of a whole file, as 16 hex chars. Used by run manifests
// to detect input changes; not a cryptographic hash.
std::uint64_t fnv1a64(std::istream& in);
std::string fnv1a64_hex(const std::string& path);

}  // namespace path2vec
