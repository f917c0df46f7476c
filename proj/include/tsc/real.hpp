#pragma once

#include <string>

namespace tsc {

/// Working scalar for the whole library. Extended precision keeps the
/// lattice identities and cross-route comparisons well below the 1e-12
/// tolerances used throughout.
using Real = long double;

/// Integer power evaluated by a fixed multiplication chain: k >= 0 multiplies
/// up from 1, k < 0 divides down from 1. Every caller that needs base^k gets
/// bit-identical values, so iterated jump operations do not drift.
Real power_int(Real base, long k);

/// Renders v with an explicit significant-digit count (clamped to [1, 21]).
std::string format_real(Real v, int digits);

} // namespace tsc
