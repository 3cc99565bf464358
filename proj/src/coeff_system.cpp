#include "vflab/coeff_system.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace vflab {

ResonantPartition resonant_partition(int k, int band) {
  ResonantPartition out;
  for (int j1 = -band; j1 <= band; ++j1)
    for (int j2 = -band; j2 <= band; ++j2) {
      const int j3 = k - j1 + j2;
      if (j3 < -band || j3 > band) continue;
      const long long omega = (long long)k * k - (long long)j1 * j1 +
                              (long long)j2 * j2 - (long long)j3 * j3;
      if (omega == 0)
        out.resonant.push_back({j1, j2, j3});
      else
        out.nonresonant.push_back({j1, j2, j3, omega,
                                   (long long)(k - j1) * (long long)(j1 - j2)});
    }
  return out;
}

TripleTable::TripleTable(int band) : band_(band) {
  if (band < 0) throw std::invalid_argument("TripleTable: band must be >= 0");
  const int n = 2 * band + 1;
  k_offset_.assign(n + 1, 0);
  pair_offset_.assign(n + 1, 0);

  for (int kidx = 0; kidx < n; ++kidx) {
    const int k = kidx - band;
    // group this k's pairs by m
    std::map<long long, std::vector<std::pair<int, int>>> by_m;
    for (int j1 = -band; j1 <= band; ++j1) {
      if (j1 == k) continue;  // resonant family (k, j, j)
      for (int j2 = -band; j2 <= band; ++j2) {
        if (j2 == j1) continue;  // resonant family (j, j, k)
        const int j3 = k - j1 + j2;
        if (j3 < -band || j3 > band) continue;
        const long long m = (long long)(k - j1) * (long long)(j1 - j2);
        by_m[m].emplace_back(j1, j2);
      }
    }
    for (auto& [m, pairs] : by_m) {
      m_of_slot_.push_back(m);
      m_max_ = std::max(m_max_, std::llabs(m));
      const int slot = (int)m_of_slot_.size() - 1;
      for (auto& [j1, j2] : pairs) {
        j1_.push_back(j1 + band);
        j2_.push_back(j2 + band);
        j3_.push_back(k - j1 + j2 + band);
        slot_.push_back(slot);
      }
    }
    k_offset_[kidx + 1] = (int)m_of_slot_.size();
    pair_offset_[kidx + 1] = (int)j1_.size();
  }
}

void TripleTable::accumulate(const cplx* A, cplx* S_flat, bool parallel) const {
  const int n = modes();
  parallel = parallel && n >= 16 && pair_count() > 20000;
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
#endif
  for (int kidx = 0; kidx < n; ++kidx) {
    for (int s = k_offset_[kidx]; s < k_offset_[kidx + 1]; ++s) S_flat[s] = {0, 0};
    for (int p = pair_offset_[kidx]; p < pair_offset_[kidx + 1]; ++p)
      S_flat[slot_[p]] += A[j1_[p]] * std::conj(A[j2_[p]]) * A[j3_[p]];
  }
  (void)parallel;
}

void TripleTable::contract(const cplx* S_flat, const cplx* weight_by_m,
                           cplx* out, bool parallel) const {
  const int n = modes();
  parallel = parallel && n >= 16 && pair_count() > 20000;
  const long long moff = m_max_;
#ifdef VFLAB_OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
  for (int kidx = 0; kidx < n; ++kidx) {
    cplx acc{0, 0};
    for (int s = k_offset_[kidx]; s < k_offset_[kidx + 1]; ++s)
      acc += S_flat[s] * weight_by_m[m_of_slot_[s] + moff];
    out[kidx] = acc;
  }
  (void)parallel;
}

void TripleTable::direct_sum(const cplx* A, const cplx* weight_by_m,
                             cplx* out) const {
  const int n = modes();
  const long long moff = m_max_;
  for (int kidx = 0; kidx < n; ++kidx) {
    cplx acc{0, 0};
    for (int p = pair_offset_[kidx]; p < pair_offset_[kidx + 1]; ++p) {
      const long long m = m_of_slot_[slot_[p]];
      acc += A[j1_[p]] * std::conj(A[j2_[p]]) * A[j3_[p]] * weight_by_m[m + moff];
    }
    out[kidx] = acc;
  }
}

namespace {
inline cplx resonant_rhs(const cplx* A, int kidx, double mass2) {
  // A_k * (2M - |A_k|^2)
  return A[kidx] * (mass2 - std::norm(A[kidx]));
}
}  // namespace

ComplexSeq system_rhs(double t, const ComplexSeq& A, const TripleTable& table,
                      bool parallel) {
  if (t <= 0) throw std::invalid_argument("system_rhs: t must be positive");
  if (table.band() != A.band()) throw std::invalid_argument("system_rhs: band mismatch");
  const int n = table.modes();
  const long long mm = table.m_max();

  std::vector<cplx> weights(2 * mm + 1);
  for (long long m = -mm; m <= mm; ++m)
    weights[m + mm] = std::polar(1.0, -double(m) / (2.0 * t));  // exp(-i*2m/(4t))

  std::vector<cplx> S(table.s_size()), osc(n);
  table.accumulate(A.raw().data(), S.data(), parallel);
  table.contract(S.data(), weights.data(), osc.data(), parallel);

  const double mass2 = 2.0 * A.mass();
  ComplexSeq out(A.band());
  const cplx i_over_t(0, 1.0 / t);
  for (int kidx = 0; kidx < n; ++kidx)
    out.raw()[kidx] = i_over_t * (osc[kidx] + resonant_rhs(A.raw().data(), kidx, mass2));
  return out;
}

ComplexSeq system_rhs_bruteforce(double t, const ComplexSeq& A) {
  if (t <= 0) throw std::invalid_argument("system_rhs_bruteforce: t must be positive");
  const int band = A.band();
  ComplexSeq out(band);
  for (int k = -band; k <= band; ++k) {
    cplx acc{0, 0};
    for (int j1 = -band; j1 <= band; ++j1)
      for (int j2 = -band; j2 <= band; ++j2) {
        const int j3 = k - j1 + j2;
        if (j3 < -band || j3 > band) continue;
        const long long omega = (long long)k * k - (long long)j1 * j1 +
                                (long long)j2 * j2 - (long long)j3 * j3;
        if (omega == 0)
          acc += A[j1] * std::conj(A[j2]) * A[j3];
        else
          acc += A[j1] * std::conj(A[j2]) * A[j3] *
                 std::polar(1.0, -double(omega) / (4.0 * t));
      }
    out.at(k) = cplx(0, 1.0 / t) * acc;
  }
  return out;
}

}  // namespace vflab
