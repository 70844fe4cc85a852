#pragma once

#include <cstdint>
#include <string>

#include "dtn/trace.hpp"

namespace dtn::cli {

// Full command-line entry point. Exit codes: 0 success, 1 a validation
// threshold was not met, 2 bad usage or unreadable input.
int dispatch(int argc, const char* const* argv);

// Synthesise a trace from "kind:key=val,key=val" (kinds: homogeneous,
// cyclic, clustered); `seed` applies unless the spec carries its own.
ContactTrace trace_from_spec(const std::string& spec, std::uint64_t seed);

} // namespace dtn::cli
