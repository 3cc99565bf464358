#pragma once

#include <cstdint>
#include <vector>

#include "vflab/sequence.hpp"

namespace vflab {

// One nonresonant frequency triple (j1, j2, j3) for output mode k:
//   k - j1 + j2 - j3 = 0,  omega = k^2 - j1^2 + j2^2 - j3^2 != 0.
// On the constraint set omega factors as 2*(k-j1)*(j1-j2) =: 2*m.
struct NonresonantTriple {
  int j1, j2, j3;
  long long omega;
  long long m;
};

struct ResonantTriple {
  int j1, j2, j3;
};

struct ResonantPartition {
  std::vector<ResonantTriple> resonant;
  std::vector<NonresonantTriple> nonresonant;
};

// Exhaustive partition of all (j1,j2,j3) in band^3 with k-j1+j2-j3 = 0.
ResonantPartition resonant_partition(int k, int band);

// Precomputed pair tables for the cubic interaction sums. For every k and
// every factor value m, S_{k,m}(A) = sum over pairs (j1,j2) in Lambda_{k,m}
// of A_{j1} * conj(A_{j2}) * A_{j3}. The tables group pairs by m so that an
// accumulation pass can be contracted against any per-m weight array.
class TripleTable {
 public:
  explicit TripleTable(int band);

  int band() const { return band_; }
  long long m_max() const { return m_max_; }
  int modes() const { return 2 * band_ + 1; }

  // Flattened compact S-array: one slot per (k, distinct m). Size:
  int s_size() const { return (int)m_of_slot_.size(); }
  int slot_begin(int kidx) const { return k_offset_[kidx]; }
  int slot_end(int kidx) const { return k_offset_[kidx + 1]; }
  long long slot_m(int slot) const { return m_of_slot_[slot]; }

  // S_flat[slot] accumulated from A (size modes(), index k+band).
  void accumulate(const cplx* A, cplx* S_flat, bool parallel) const;

  // out[kidx] = sum over slots of S_flat[slot] * weight_by_m[m + m_max]
  void contract(const cplx* S_flat, const cplx* weight_by_m, cplx* out,
                bool parallel) const;

  // Reference path: direct triple loop, no tables, no grouping. Serial.
  void direct_sum(const cplx* A, const cplx* weight_by_m, cplx* out) const;

  size_t pair_count() const { return j1_.size(); }

 private:
  int band_;
  long long m_max_ = 0;
  // per-pair data, ordered by k then by slot
  std::vector<int32_t> j1_, j2_, j3_;     // array indices (already offset by band)
  std::vector<int32_t> slot_;             // compact S index
  std::vector<int32_t> pair_offset_;      // per-k range into pair arrays
  std::vector<int32_t> k_offset_;         // per-k range into slots
  std::vector<int64_t> m_of_slot_;
};

// Time-domain right-hand side of the coefficient system,
//   dA_k/dt = (i/t) [ sum_{NR_k} exp(-i*omega/(4t)) A_{j1} conj(A_{j2}) A_{j3}
//                     + A_k (2*M - |A_k|^2) ],   M = sum_j |A_j|^2.
// A single mode solves A(t) = alpha * exp(i*|alpha|^2 * log t).
ComplexSeq system_rhs(double t, const ComplexSeq& A, const TripleTable& table,
                      bool parallel = true);

// Brute-force evaluation of the same right-hand side (independent oracle).
ComplexSeq system_rhs_bruteforce(double t, const ComplexSeq& A);

}  // namespace vflab
