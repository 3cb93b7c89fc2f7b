#pragma once

#include <cstdint>

namespace splinewave::opcount {

/// Thread-local floating-point operation tally.  The transform routines add
/// their inner-loop work here so tests can check how cost scales with grid
/// size; absolute constants are not calibrated.

namespace detail {
inline thread_local std::uint64_t counter = 0;
}

inline void reset() { detail::counter = 0; }
inline std::uint64_t get() { return detail::counter; }
inline void add(std::uint64_t n) { detail::counter += n; }

} // namespace splinewave::opcount
