#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace vflab {

using cplx = std::complex<double>;

// Finitely supported doubly indexed complex sequence {a_k}, k in [-K, K].
// Values outside the band are identically zero.
class ComplexSeq {
 public:
  ComplexSeq() = default;
  explicit ComplexSeq(int band) : band_(band), v_(2 * band + 1) {
    if (band < 0) throw std::invalid_argument("ComplexSeq: band must be >= 0");
  }
  ComplexSeq(int band, std::vector<cplx> values) : band_(band), v_(std::move(values)) {
    if ((int)v_.size() != 2 * band + 1)
      throw std::invalid_argument("ComplexSeq: size must be 2*band+1");
  }

  int band() const { return band_; }
  int size() const { return (int)v_.size(); }

  cplx operator[](int k) const {
    if (k < -band_ || k > band_) return {0, 0};
    return v_[k + band_];
  }
  cplx& at(int k) {
    assert(k >= -band_ && k <= band_);
    return v_[k + band_];
  }

  const std::vector<cplx>& raw() const { return v_; }
  std::vector<cplx>& raw() { return v_; }

  // Support can only shrink to zero values; growing returns a rebanded copy.
  ComplexSeq rebanded(int new_band) const {
    ComplexSeq out(new_band);
    for (int k = -band_; k <= band_; ++k)
      if (k >= -new_band && k <= new_band) out.at(k) = (*this)[k];
    return out;
  }

  double mass() const {  // sum of |a_k|^2
    double m = 0;
    for (const auto& z : v_) m += std::norm(z);
    return m;
  }

 private:
  int band_ = 0;
  std::vector<cplx> v_{cplx{0, 0}};
};

// (sum_k <k>^{2s} |a_k|^2)^{1/2} with the weight <k> = (1+k^2)^{1/2}.
inline double weighted_norm(const ComplexSeq& seq, double s) {
  if (s < 0) throw std::invalid_argument("weighted_norm: s must be >= 0");
  double acc = 0;
  for (int k = -seq.band(); k <= seq.band(); ++k) {
    const double jb = 1.0 + double(k) * double(k);
    acc += std::pow(jb, s) * std::norm(seq[k]);
  }
  return std::sqrt(acc);
}

// Rational multiple of the revival unit: physical time t = p/(2*pi*q), gcd(p,q)=1.
struct RationalTime {
  long long p = 0;
  long long q = 1;

  RationalTime(long long p_, long long q_) : p(p_), q(q_) {
    if (q <= 0) throw std::invalid_argument("RationalTime: q must be positive");
    if (p < 0) throw std::invalid_argument("RationalTime: p must be nonnegative");
    long long g = std::gcd(p, q);
    if (g > 1) { p /= g; q /= g; }
  }

  double value() const { return double(p) / (2.0 * M_PI * double(q)); }
};

}  // namespace vflab
