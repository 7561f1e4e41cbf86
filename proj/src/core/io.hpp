#pragma once

#include <string>

namespace mqsum {

// Writes content to path via a sibling temp file plus rename, so readers
// never observe a half-written file. Throws Error(Errc::io) on failure.
void atomic_write(const std::string& path, const std::string& content);

// Reads a whole file; throws Error(Errc::io) when it cannot be opened.
std::string read_file(const std::string& path);

} // namespace mqsum
