#include "tsc/real.hpp"

#include <algorithm>
#include <cstdio>

namespace tsc {

Real power_int(Real base, long k) {
    Real r = 1.0L;
    if (k >= 0) {
        for (long i = 0; i < k; ++i) r *= base;
    } else {
        for (long i = 0; i < -k; ++i) r /= base;
    }
    return r;
}

std::string format_real(Real v, int digits) {
    digits = std::clamp(digits, 1, 21);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*Lg", digits, v);
    return buf;
}

} // namespace tsc
