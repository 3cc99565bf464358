#include "vflab/fitting.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace vflab {

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit: need >= 2 matching samples");
  const double n = (double)x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double pred = f.slope * x[i] + f.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

LinearFit proportional_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty())
    throw std::invalid_argument("proportional_fit: need matching samples");
  double sxy = 0, sxx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += x[i] * y[i];
    sxx += x[i] * x[i];
    sy += y[i];
  }
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = 0;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / (double)x.size();
  for (size_t i = 0; i < x.size(); ++i) {
    ss_res += (y[i] - f.slope * x[i]) * (y[i] - f.slope * x[i]);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

namespace {

// Jacobi eigenvalue iteration for a symmetric 4x4; returns the eigenvector of
// the largest eigenvalue.
std::array<double, 4> max_eigenvector4(std::array<std::array<double, 4>, 4> N) {
  std::array<std::array<double, 4>, 4> V{};
  for (int i = 0; i < 4; ++i) V[i][i] = 1;
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += N[p][q] * N[p][q];
    if (off < 1e-26) break;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) {
        if (std::fabs(N[p][q]) < 1e-300) continue;
        const double theta = (N[q][q] - N[p][p]) / (2 * N[p][q]);
        const double sgn = theta >= 0 ? 1.0 : -1.0;
        const double tt = sgn / (std::fabs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1.0 / std::sqrt(tt * tt + 1), s = tt * c;
        for (int i = 0; i < 4; ++i) {
          const double nip = N[i][p], niq = N[i][q];
          N[i][p] = c * nip - s * niq;
          N[i][q] = s * nip + c * niq;
        }
        for (int i = 0; i < 4; ++i) {
          const double npi = N[p][i], nqi = N[q][i];
          N[p][i] = c * npi - s * nqi;
          N[q][i] = s * npi + c * nqi;
        }
        for (int i = 0; i < 4; ++i) {
          const double vip = V[i][p], viq = V[i][q];
          V[i][p] = c * vip - s * viq;
          V[i][q] = s * vip + c * viq;
        }
      }
  }
  int best = 0;
  for (int i = 1; i < 4; ++i)
    if (N[i][i] > N[best][best]) best = i;
  return {V[0][best], V[1][best], V[2][best], V[3][best]};
}

Mat3 quat_to_mat(const std::array<double, 4>& q) {
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  Mat3 R;
  R.a = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
         2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
  return R;
}

Mat3 horn_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  double S[3][3] = {};
  for (size_t i = 0; i < a.size(); ++i) {
    const double av[3] = {a[i].x, a[i].y, a[i].z};
    const double bv[3] = {b[i].x, b[i].y, b[i].z};
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) S[r][c] += av[r] * bv[c];
  }
  std::array<std::array<double, 4>, 4> N{};
  N[0][0] = S[0][0] + S[1][1] + S[2][2];
  N[0][1] = N[1][0] = S[1][2] - S[2][1];
  N[0][2] = N[2][0] = S[2][0] - S[0][2];
  N[0][3] = N[3][0] = S[0][1] - S[1][0];
  N[1][1] = S[0][0] - S[1][1] - S[2][2];
  N[1][2] = N[2][1] = S[0][1] + S[1][0];
  N[1][3] = N[3][1] = S[2][0] + S[0][2];
  N[2][2] = -S[0][0] + S[1][1] - S[2][2];
  N[2][3] = N[3][2] = S[1][2] + S[2][1];
  N[3][3] = -S[0][0] - S[1][1] + S[2][2];
  return quat_to_mat(max_eigenvector4(N));
}

}  // namespace

Mat3 best_rotation(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("best_rotation: need matching nonempty sets");
  return horn_rotation(a, b);
}

Mat3 best_orthogonal(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  const Mat3 R = best_rotation(a, b);
  std::vector<Vec3> am(a);
  for (auto& v : am) v.z = -v.z;
  Mat3 Rm = best_rotation(am, b);
  Mat3 refl;
  refl.a = {1, 0, 0, 0, 1, 0, 0, 0, -1};
  const Mat3 O = Rm * refl;
  double er = 0, eo = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    er += dot(R * a[i] - b[i], R * a[i] - b[i]);
    eo += dot(O * a[i] - b[i], O * a[i] - b[i]);
  }
  return er <= eo ? R : O;
}

RigidMotion best_rigid_motion(const std::vector<Vec3>& a, const std::vector<Vec3>& b,
                              bool allow_reflection) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("best_rigid_motion: need matching nonempty sets");
  Vec3 ca{0, 0, 0}, cb{0, 0, 0};
  for (size_t i = 0; i < a.size(); ++i) {
    ca += a[i];
    cb += b[i];
  }
  ca *= 1.0 / (double)a.size();
  cb *= 1.0 / (double)a.size();
  std::vector<Vec3> a0(a.size()), b0(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    a0[i] = a[i] - ca;
    b0[i] = b[i] - cb;
  }
  RigidMotion m;
  m.R = allow_reflection ? best_orthogonal(a0, b0) : best_rotation(a0, b0);
  m.d = cb - m.R * ca;
  return m;
}

}  // namespace vflab
