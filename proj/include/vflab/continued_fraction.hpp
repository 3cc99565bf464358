#pragma once

#include <cstdint>
#include <vector>

namespace vflab {

// Continued-fraction expansion of a floating-point input, computed with exact
// integer recurrences on the dyadic rational that the double encodes. The
// surrogate numerator/denominator are reported so downstream consumers know
// exactly which rational was expanded.
struct ContinuedFractionExpansion {
  double t = 0;                       // the input value
  long long surrogate_num = 0;        // exact dyadic surrogate: t = num/den
  unsigned long long surrogate_den = 1;
  bool exhausted = false;             // expansion terminated (input rational at double precision)
  std::vector<long long> quotients;   // a_0, a_1, ...
  std::vector<long long> p;           // convergent numerators
  std::vector<long long> q;           // convergent denominators (strictly increasing)
  std::vector<double> mu;             // per-convergent exponents: |t - p_n/q_n| = q_n^{-mu_n}

  // |t - p_n/q_n| computed exactly from the surrogate.
  double error(int n) const;
};

ContinuedFractionExpansion continued_fraction(double t, int depth);

}  // namespace vflab
