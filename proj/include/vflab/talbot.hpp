#pragma once

#include <vector>

#include "vflab/coeff_evolution.hpp"
#include "vflab/sequence.hpp"

namespace vflab {

// One atom of the fractional-revival comb in the unit cell [0, 1):
// location m/q, weight G(-p, m, q)/q.
struct CombAtom {
  long long m;
  double location;
  cplx weight;
};

// e^{it\Delta} applied to the integer Dirac comb at t = p/(2 pi q): the q
// atoms per unit cell with Gauss-sum weights.
std::vector<CombAtom> dirac_comb_evolution(const RationalTime& rt);

// A 2pi-periodic Fourier-side profile hat{u0}(xi) = sum_k alpha_k e^{ik xi},
// declared to be supported (mod 2pi) in the ball B(0, radius).
class PeriodicFourierProfile {
 public:
  PeriodicFourierProfile(ComplexSeq alpha, double radius);

  cplx hat(double xi) const;
  double radius() const { return radius_; }
  const ComplexSeq& coefficients() const { return alpha_; }

  // sup of |hat| sampled outside B(0, radius) mod 2pi (support validator)
  double max_outside_support(int samples = 8192) const;

 private:
  ComplexSeq alpha_;
  double radius_;
};

// Smooth compactly supported bump profile exp(-1/(1-(xi/radius)^2)^flat),
// truncated to the given band and normalized to weighted l^{2,s} size eps.
PeriodicFourierProfile bump_profile(double radius, double s, double eps, int band = -1,
                                    double flat = 2.0);

// Free evolution of u0 = sum alpha_k delta_k under the pinned kernel:
// u(t,x) = sum_k alpha_k e^{i(x-k)^2/(4t)}/sqrt(t).
cplx free_evolution_direct(const ComplexSeq& alpha, double t, double x);
std::vector<cplx> free_evolution_direct(const ComplexSeq& alpha, double t,
                                        const std::vector<double>& xs,
                                        bool parallel = true);

// Closed-form evaluation of the free evolution at the rational time
// t = p/(2 pi q), q odd, for profiles supported in B(0, r), r < pi/p:
//   u(x) = (e^{i pi/4}/sqrt(pi)) (1/(2 t q)) sum_j G(-p, j, q)
//          hat{u0}(zeta_j) e^{-i t zeta_j^2 - i x zeta_j},
// zeta_j = -(x + j/q) pi q / p, summed over the (at most two) j with zeta_j
// inside the support. The modulus is (sqrt(pi) sqrt(q)/p) |hat{u0}(zeta_x)|,
// 1/q-periodic in x, and vanishes for d(x, Z/q) > r p/(pi q).
cplx linear_talbot_eval(const PeriodicFourierProfile& prof, const RationalTime& rt,
                        double x);

// Concentration family built from f^lambda(xi) = lambda psi(lambda xi):
// the evolved value at 0 against the single-atom evolution, both by direct
// computation. The ratio grows linearly in lambda.
struct ConcentrationResult {
  double numerator = 0;
  double denominator = 0;
  double ratio = 0;
};
ConcentrationResult concentration_family(double lambda, const RationalTime& rt,
                                         int band_per_lambda = 48);

// Gaussian-regularized two-sided check of the theta-function identity
//   sum_k e^{i 4 pi^2 t k^2} = (e^{i pi/4}/(2 sqrt(pi t))) sum_j e^{-i j^2/(4t)}:
// both sides carry the exact complex-Gaussian regularization e^{-eps k^2},
// truncations chosen so each tail is below tail_bound.
struct PoissonCheck {
  double residual = 0;
  double eps = 0;
  long long K = 0, J = 0;
  cplx lhs, rhs;
};
PoissonCheck poisson_identity_check(double t, double eps = 1e-3,
                                    double tail_bound = 1e-9);

// Full pipeline for the nonlinear revival bound: evolve the profile's
// coefficients from a small anchor time to t = p/(2 pi q) and measure the
// field away from the concentration lattice.
struct NonlinearTalbotResult {
  double eps = 0;               // l^{2,s} size of the data
  double smallness = 0;         // eps^2 sqrt(q) log q (hypothesis < 1/2)
  double off_lattice_max = 0;   // max |u(t_pq, x)| over d(x, Z/q) > eta/q
  double linear_off_lattice_max = 0;  // same with frozen coefficients
  std::vector<double> xs;
  std::vector<double> abs_u;
};
NonlinearTalbotResult nonlinear_talbot_profile(const PeriodicFourierProfile& prof,
                                               const RationalTime& rt, double eta,
                                               double t_anchor = 1e-3,
                                               double tol = 1e-10, int grid = 2048);

}  // namespace vflab
