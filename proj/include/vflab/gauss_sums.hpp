#pragma once

#include <complex>
#include <cstdint>

namespace vflab {

// G(a, b, q) = sum_{l=0}^{q-1} exp(2*pi*i*(a*l^2 + b*l)/q), by direct summation.
// The integer phase is reduced mod q before any floating-point work, so each
// term is an exact root of unity. q is capped at 10^4.
std::complex<double> gauss_sum(long long a, long long b, long long q);

}  // namespace vflab
