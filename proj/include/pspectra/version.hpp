#pragma once

namespace pspectra {

inline constexpr const char* kVersion = "1.0.0";

// Version of the binary table-cache layout; bump on any layout change.
inline constexpr unsigned kTableFormatVersion = 1;

}  // namespace pspectra
