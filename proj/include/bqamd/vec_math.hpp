#pragma once

namespace bqamd {

// Elementwise s[i] = sin(ang[i]), c[i] = cos(ang[i]). Lives in its own
// translation unit so the build can enable the vectorized libm path for just
// this loop.
void vec_sincos(const double* ang, double* s, double* c, long n);

} // namespace bqamd
