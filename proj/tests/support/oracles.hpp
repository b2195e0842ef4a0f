#ifndef ZONOVOL_TESTS_ORACLES_HPP_
#define ZONOVOL_TESTS_ORACLES_HPP_

// Reference computations used only by the tests.  None of these call into
// the library's volume code.

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

__extension__ typedef __float128 Quad;

using Rng = std::mt19937_64;

/// Sorted spectrum drawn uniformly from (lo, hi) with pairwise gap >= gap.
inline std::vector<double> spectrum(Rng& rng, int n, double lo = 0.05, double hi = 0.95,
                                    double gap = 0.02) {
  std::uniform_real_distribution<double> u(lo, hi);
  for (;;) {
    std::vector<double> l(static_cast<std::size_t>(n));
    for (double& x : l) x = u(rng);
    std::sort(l.begin(), l.end());
    bool ok = true;
    for (std::size_t i = 1; i < l.size(); ++i) ok = ok && (l[i] - l[i - 1] >= gap);
    if (ok) return l;
  }
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index i = 0; i < M.size(); ++i) M.data()[i] = u(rng);
  return M;
}

/// [beta_i * l_i^k], k = 0..N-1.
inline Eigen::MatrixXd power_matrix(const std::vector<double>& l, int N,
                                    const std::vector<double>& beta = {}) {
  Eigen::MatrixXd P(static_cast<Eigen::Index>(l.size()), N);
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double b = beta.empty() ? 1.0 : beta[i];
    for (int k = 0; k < N; ++k) P(static_cast<Eigen::Index>(i), k) = b * std::pow(l[i], k);
  }
  return P;
}

/// Sum of |det| over all n-column subsets, by walking a selection mask.
inline double det_sum(const Eigen::MatrixXd& Z) {
  const auto n = Z.rows();
  const auto m = Z.cols();
  if (n > m) return 0.0;
  std::vector<bool> pick(static_cast<std::size_t>(m), false);
  std::fill(pick.begin(), pick.begin() + n, true);
  double total = 0.0;
  Eigen::MatrixXd S(n, n);
  do {
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (pick[static_cast<std::size_t>(j)]) S.col(c++) = Z.col(j);
    }
    total += std::abs(S.fullPivLu().determinant());
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return total;
}

inline double symmetric_det_sum(const Eigen::MatrixXd& Z) {
  return std::ldexp(det_sum(Z), static_cast<int>(Z.rows()));
}

inline Quad qpow(Quad x, int N) {
  Quad r = 1;
  for (int k = 0; k < N; ++k) r *= x;
  return r;
}

/// Distribution factor written out for one to three eigenvalues.
inline Quad phi1(Quad a) { return 1 / (1 - a); }
inline Quad phi2(Quad a, Quad b) { return (b - a) / (1 - a * b) * phi1(a) * phi1(b); }
inline Quad phi3(Quad a, Quad b, Quad c) {
  return (b - a) / (1 - a * b) * (c - a) / (1 - a * c) * (c - b) / (1 - b * c) * phi1(a) *
         phi1(b) * phi1(c);
}

/// The printed two-eigenvalue closed form, second line.
inline double closed_form_2(double l1, double l2, int N) {
  const Quad a = l1, b = l2;
  const Quad aN = qpow(a, N), bN = qpow(b, N);
  const Quad v = (b - a) * (1 - aN * bN) / ((1 - a) * (1 - b) * (1 - a * b)) +
                 (aN - bN) / ((1 - a) * (1 - b));
  return static_cast<double>(v);
}

/// The printed three-eigenvalue closed form, grouped line.
inline double closed_form_3(double l1, double l2, double l3, int N) {
  const Quad a = l1, b = l2, c = l3;
  const Quad aN = qpow(a, N), bN = qpow(b, N), cN = qpow(c, N);
  const Quad v = (1 + aN * bN * cN) * phi3(a, b, c) - (aN + bN * cN) * phi1(a) * phi2(b, c) +
                 (bN + aN * cN) * phi1(b) * phi2(a, c) - (cN + aN * bN) * phi1(c) * phi2(a, b);
  return static_cast<double>(v);
}

inline double vandermonde(const std::vector<double>& l) {
  double p = 1.0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    for (std::size_t k = i + 1; k < l.size(); ++k) p *= l[k] - l[i];
  }
  return p;
}

/// Left Riemann sum of int_0^T e^{l t} dt.
inline double riemann_exp(double l, double T, double dt) {
  const auto K = static_cast<long long>(std::ceil(T / dt - 1e-9));
  double s = 0.0;
  for (long long k = 0; k < K; ++k) s += std::exp(l * k * dt) * dt;
  return s;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle

#endif  // ZONOVOL_TESTS_ORACLES_HPP_
