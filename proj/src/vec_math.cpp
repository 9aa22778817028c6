#include "bqamd/vec_math.hpp"

#include <cmath>

namespace bqamd {

void vec_sincos(const double* ang, double* s, double* c, long n) {
    for (long i = 0; i < n; ++i) s[i] = std::sin(ang[i]);
    for (long i = 0; i < n; ++i) c[i] = std::cos(ang[i]);
}

} // namespace bqamd
