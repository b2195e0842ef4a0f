#include "zonovol/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "zonovol/zonotope.hpp"

namespace zonovol {

namespace {

void finish(VolumeReport& r, const EigenStructure& eig, Expansion e) {
  r.normalized_sum = e.sum;
  if (e.sum < 0.0) r.diagnostics.emplace_back("signed sum is negative; volume is its magnitude");
  if (eig.prefactor() == 0.0) r.diagnostics.emplace_back("uncontrollable mode: some beta_i = 0");
  r.volume = std::ldexp(eig.prefactor(), eig.size()) * std::abs(e.sum);
  r.terms = std::move(e.terms);
}

}  // namespace

ContinuousModel::ContinuousModel(Matrix A, Matrix B, double T)
    : model_(std::move(A), std::move(B)), T_(T) {
  if (!std::isfinite(T) || T < 0.0) throw ArgumentError("horizon T must be finite and >= 0");
}

VolumeReport narrow_volume_analytic(const EigenStructure& eig, int N, const Tolerances& tol) {
  for (double l : eig.lambdas) {
    if (l == 0.0) {
      throw DomainError("narrow region needs nonzero eigenvalues (inverse powers)",
                        SpectrumClass::MixedSign);
    }
  }
  VolumeReport r;
  r.route = Route::Analytic;
  r.spectrum = classify_spectrum(eig.lambdas, TimeDomain::Discrete, tol);
  finish(r, eig, narrow_volume_sum(eig.lambdas, N, tol));
  bool sub_unit = false;
  for (double l : eig.lambdas) sub_unit = sub_unit || l < 1.0;
  if (sub_unit) r.diagnostics.emplace_back("eigenvalue below 1: narrow region grows without bound in N");
  return r;
}

VolumeReport negative_spectrum_volume(const EigenStructure& eig, int N, const Tolerances& tol) {
  VolumeReport r;
  r.route = Route::Analytic;
  r.spectrum = classify_spectrum(eig.lambdas, TimeDomain::Discrete, tol);
  finish(r, eig, negative_volume_sum(eig.lambdas, N, tol));
  return r;
}

VolumeReport ct_volume_analytic(const EigenStructure& eig, double T, const Tolerances& tol) {
  VolumeReport r;
  r.route = Route::Analytic;
  r.spectrum = classify_spectrum(eig.lambdas, TimeDomain::Continuous, tol);
  finish(r, eig, ct_volume_sum(eig.lambdas, T, tol));
  return r;
}

VolumeReport ct_volume_analytic(const ContinuousModel& model, const Tolerances& tol) {
  Diagonalization d = diagonalize(model.as_state_space(), TimeDomain::Continuous, tol);
  if (!d.structure) {
    throw DomainError(std::string(to_string(d.spectrum)) + ": no real diagonal form",
                      d.spectrum);
  }
  return ct_volume_analytic(*d.structure, model.T(), tol);
}

Matrix expm_diagonalizable(const Matrix& A, double t, const Tolerances& tol) {
  if (A.rows() < 1 || A.rows() != A.cols()) throw ArgumentError("matrix must be square");
  Eigen::EigenSolver<Matrix> solver(A, true);
  if (solver.info() != Eigen::Success) throw DomainError("eigen-decomposition failed");
  const Eigen::VectorXcd values = solver.eigenvalues();
  double rho = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) rho = std::max(rho, std::abs(values[i]));
  std::vector<double> re;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values[i].imag()) > tol.eps_complex * std::max(rho, 1.0)) {
      throw DomainError("Complex: matrix exponential needs a real spectrum",
                        SpectrumClass::Complex);
    }
    re.push_back(values[i].real());
  }
  std::sort(re.begin(), re.end());
  for (std::size_t i = 1; i < re.size(); ++i) {
    if (re[i] - re[i - 1] < tol.eps_distinct * std::max(rho, 1.0)) {
      throw DomainError("Degenerate: matrix exponential needs distinct eigenvalues",
                        SpectrumClass::Degenerate);
    }
  }
  const Matrix V = solver.eigenvectors().real();
  Vector e(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) e[i] = std::exp(values[i].real() * t);
  return V * e.asDiagonal() * V.fullPivLu().inverse();
}

double ct_discretized_oracle(const ContinuousModel& model, double dt,
                             const OracleOptions& options, const Tolerances& tol) {
  if (!std::isfinite(dt) || dt <= 0.0) throw ArgumentError("dt must be positive");
  if (dt >= model.T()) throw ArgumentError("dt must be smaller than the horizon T");
  const auto K = static_cast<long long>(std::ceil(model.T() / dt * (1.0 - 1e-12)));
  const int n = model.states();
  const int r = static_cast<int>(model.B().cols());
  const std::uint64_t count = determinant_count(static_cast<int>(K * r), n);
  if (options.budget != 0 && count > options.budget) {
    throw ArgumentError("discretized oracle needs " + std::to_string(count) +
                        " determinants, over the budget; use a larger dt or smaller n");
  }

  // One exponential step, reused: g_{k+1} = exp(A dt) g_k.
  const Matrix step = expm_diagonalizable(model.A(), dt, tol);
  Matrix G(n, K * r);
  G.leftCols(r) = model.B() * dt;
  for (long long k = 1; k < K; ++k) {
    G.middleCols(k * r, r).noalias() = step * G.middleCols((k - 1) * r, r);
  }
  return symmetric_volume(G, {options.threads, options.budget});
}

double narrow_via_relation(const StateSpaceModel& model, int N, Route route,
                           const Tolerances& tol) {
  const StateSpaceModel inv = inverse_model(model);
  const double det = std::abs(model.A().fullPivLu().determinant());
  return full_volume(inv, N, route, tol).volume / det;
}

VolumeReport narrow_volume(const StateSpaceModel& model, int N, Route route,
                           const Tolerances& tol) {
  if (N < 1) throw ArgumentError("horizon N must be at least 1");
  auto direct = [&] {
    VolumeReport r;
    r.route = Route::Direct;
    r.volume = symmetric_volume(narrow_generators(model, N));
    return r;
  };
  if (route == Route::Direct) return direct();
  if (route != Route::Auto && route != Route::Analytic) {
    throw ArgumentError("narrow region supports the auto, direct and analytic routes");
  }
  if (model.inputs() != 1) {
    if (route == Route::Auto) return direct();
    throw ArgumentError("analytic narrow route needs a single-input model");
  }
  Diagonalization d = diagonalize(model, TimeDomain::Discrete, tol);
  const bool admissible = d.structure && d.spectrum == SpectrumClass::AllPositiveDistinct &&
                          N >= model.states();
  if (!admissible) {
    if (route == Route::Auto) {
      VolumeReport r = direct();
      r.spectrum = d.spectrum;
      return r;
    }
    if (!d.structure) {
      throw DomainError(std::string(to_string(d.spectrum)) + ": no real diagonal form",
                        d.spectrum);
    }
  }
  return narrow_volume_analytic(*d.structure, N, tol);
}

}  // namespace zonovol
