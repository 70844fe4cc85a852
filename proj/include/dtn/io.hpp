#pragma once

#include <string>

namespace dtn {

// Shortest round-trippable decimal for CSV output ("%.12g"); keeps exports
// byte-identical across runs and platforms.
std::string fmt_g12(double v);

// Write via a temp file in the same directory, then rename over the target,
// so readers never observe a half-written file.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

} // namespace dtn
