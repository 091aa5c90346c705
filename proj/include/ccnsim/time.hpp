#pragma once

#include <cstdint>
#include <limits>

namespace ccnsim {

// Simulated time, integer microseconds. Integer arithmetic keeps event
// ordering exact across runs.
using SimTime = std::int64_t;

inline constexpr SimTime kNever = std::numeric_limits<SimTime>::max();

constexpr SimTime usec(std::int64_t n) { return n; }
constexpr SimTime msec(std::int64_t n) { return n * 1000; }
constexpr SimTime sec(std::int64_t n) { return n * 1000000; }

constexpr double to_ms(SimTime t) { return static_cast<double>(t) / 1000.0; }
constexpr SimTime from_ms(double ms) { return static_cast<SimTime>(ms * 1000.0); }

}  // namespace ccnsim
