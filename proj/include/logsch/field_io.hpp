#pragma once

// LSEF1 field files.
//
//   line 1: "LSEF1\n"
//   line 2: "<dim> <points> <half_width>\n"  (half_width as shortest round-trip decimal)
//   payload: points^dim little-endian IEEE-754 doubles, row-major, last axis fastest.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>

#include "logsch/grid.hpp"

namespace logsch {

class FieldFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string encode_field(const Grid& g, const Field& u);
/// Throws FieldFormatError on bad magic, malformed header or truncated payload.
std::pair<Grid, Field> decode_field(const std::string& bytes);

/// Writes to a sibling temp file and renames it into place. Throws
/// std::runtime_error when the file cannot be written.
void write_field(const std::filesystem::path& path, const Grid& g, const Field& u);
std::pair<Grid, Field> read_field(const std::filesystem::path& path);

/// Atomic text write (temp file + rename).
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace logsch
