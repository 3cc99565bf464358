#include "vflab/gauss_sums.hpp"

#include <cmath>
#include <stdexcept>

namespace vflab {

std::complex<double> gauss_sum(long long a, long long b, long long q) {
  if (q < 1) throw std::invalid_argument("gauss_sum: q must be >= 1");
  if (q > 10000) throw std::invalid_argument("gauss_sum: q capped at 10^4");

  const double w = 2.0 * M_PI / double(q);
  auto modq = [q](long long v) { long long r = v % q; return r < 0 ? r + q : r; };

  double re = 0, im = 0;
  for (long long l = 0; l < q; ++l) {
    // a*l^2 with |a| reduced first keeps everything well inside int64.
    const long long r = modq(modq(a) * modq(l * l % q) % q + modq(b) * l % q);
    re += std::cos(w * double(r));
    im += std::sin(w * double(r));
  }
  return {re, im};
}

}  // namespace vflab
