#include "zonovol/ldt_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace zonovol {

namespace {

double spectral_radius(std::span<const double> lambdas) {
  double rho = 0.0;
  for (double l : lambdas) rho = std::max(rho, std::abs(l));
  return rho;
}

double distinct_threshold(double rho, const Tolerances& tol) {
  return tol.eps_distinct * (rho > 0.0 ? rho : 1.0);
}

double inf_norm(const Matrix& M) {
  return M.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

StateSpaceModel::StateSpaceModel(Matrix A, Matrix B) : A_(std::move(A)), B_(std::move(B)) {
  if (A_.rows() < 1 || A_.rows() != A_.cols()) {
    throw ArgumentError("state matrix A must be square and non-empty");
  }
  if (B_.rows() != A_.rows() || B_.cols() < 1) {
    throw ArgumentError("input matrix B must have as many rows as A and at least one column");
  }
  if (!A_.allFinite() || !B_.allFinite()) {
    throw ArgumentError("model matrices have non-finite entries");
  }
}

double EigenStructure::prefactor() const {
  double p = det_wd_inv_abs;
  for (double b : betas) p *= std::abs(b);
  return p;
}

EigenStructure EigenStructure::from_spectrum(std::vector<double> lambdas,
                                             std::vector<double> betas) {
  if (lambdas.empty() || lambdas.size() != betas.size()) {
    throw ArgumentError("spectral model needs equally sized, non-empty lambda and beta lists");
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!std::isfinite(lambdas[i]) || !std::isfinite(betas[i])) {
      throw ArgumentError("spectral model has non-finite entries");
    }
  }
  std::vector<std::size_t> order(lambdas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lambdas[a] < lambdas[b]; });
  EigenStructure eig;
  const auto n = static_cast<Eigen::Index>(lambdas.size());
  eig.Wd = Matrix::Identity(n, n);
  for (std::size_t k : order) {
    eig.lambdas.push_back(lambdas[k]);
    eig.betas.push_back(betas[k]);
  }
  eig.det_wd_inv_abs = 1.0;
  return eig;
}

SpectrumClass classify_spectrum(std::span<const double> lambdas, TimeDomain domain,
                                const Tolerances& tol) {
  if (lambdas.empty()) throw ArgumentError("empty spectrum");
  for (double l : lambdas) {
    if (!std::isfinite(l)) throw ArgumentError("spectrum has non-finite entries");
  }
  std::vector<double> sorted(lambdas.begin(), lambdas.end());
  std::sort(sorted.begin(), sorted.end());

  const double eps_d = distinct_threshold(spectral_radius(sorted), tol);
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] < eps_d) return SpectrumClass::Degenerate;
  }

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (domain == TimeDomain::Discrete) {
      if (std::abs(1.0 - std::abs(sorted[i])) < tol.eps_sing) {
        return SpectrumClass::NearSingularFactor;
      }
    } else if (std::abs(sorted[i]) < tol.eps_sing) {
      return SpectrumClass::NearSingularFactor;
    }
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      const double d = domain == TimeDomain::Discrete ? 1.0 - sorted[i] * sorted[j]
                                                      : sorted[i] + sorted[j];
      if (std::abs(d) < tol.eps_sing) return SpectrumClass::NearSingularFactor;
    }
  }

  if (sorted.front() > 0.0) return SpectrumClass::AllPositiveDistinct;
  if (sorted.back() < 0.0) return SpectrumClass::AllNegativeDistinct;
  return SpectrumClass::MixedSign;
}

Matrix reachability_generators(const StateSpaceModel& model, int N) {
  if (N < 1) throw ArgumentError("horizon N must be at least 1");
  const auto n = model.states();
  const auto r = model.inputs();
  Matrix P(n, static_cast<Eigen::Index>(r) * N);
  P.leftCols(r) = model.B();
  for (int k = 1; k < N; ++k) {
    P.middleCols(static_cast<Eigen::Index>(k) * r, r).noalias() =
        model.A() * P.middleCols(static_cast<Eigen::Index>(k - 1) * r, r);
  }
  return P;
}

bool is_numerically_singular(const Matrix& M, double eps) {
  const double norm = inf_norm(M);
  if (norm == 0.0) return true;
  const double det = M.fullPivLu().determinant();
  return std::abs(det) / std::pow(norm, static_cast<double>(M.rows())) <= eps;
}

StateSpaceModel inverse_model(const StateSpaceModel& model) {
  if (is_numerically_singular(model.A(), Tolerances{}.eps_sing)) {
    throw DomainError("narrow region undefined for singular A");
  }
  return StateSpaceModel(model.A().fullPivLu().inverse(), model.B());
}

Matrix narrow_generators(const StateSpaceModel& model, int N) {
  if (N < 1) throw ArgumentError("horizon N must be at least 1");
  const Matrix Ainv = inverse_model(model).A();
  const auto r = model.inputs();
  Matrix P(model.states(), static_cast<Eigen::Index>(r) * N);
  P.rightCols(r).noalias() = Ainv * model.B();
  for (int k = N - 2; k >= 0; --k) {
    P.middleCols(static_cast<Eigen::Index>(k) * r, r).noalias() =
        Ainv * P.middleCols(static_cast<Eigen::Index>(k + 1) * r, r);
  }
  return P;
}

Diagonalization diagonalize(const StateSpaceModel& model, TimeDomain domain,
                            const Tolerances& tol) {
  if (model.inputs() != 1) {
    throw ArgumentError("the analytic path needs a single-input model (B must be n x 1)");
  }
  const int n = model.states();
  Eigen::EigenSolver<Matrix> solver(model.A().transpose(), true);
  if (solver.info() != Eigen::Success) {
    throw DomainError("eigen-decomposition failed to converge");
  }
  const Eigen::VectorXcd values = solver.eigenvalues();
  const Eigen::MatrixXcd vectors = solver.eigenvectors();

  double rho = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) rho = std::max(rho, std::abs(values[i]));
  const double eps_d = distinct_threshold(rho, tol);

  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double im = std::abs(values[i].imag());
    if (im > tol.eps_complex * rho) {
      // A split repeated root shows up as a narrow conjugate pair.
      const SpectrumClass cls =
          2.0 * im < eps_d ? SpectrumClass::Degenerate : SpectrumClass::Complex;
      return {std::nullopt, cls};
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return values[a].real() < values[b].real();
  });

  EigenStructure eig;
  eig.Wd.resize(n, n);
  for (int row = 0; row < n; ++row) {
    const Eigen::Index k = order[static_cast<std::size_t>(row)];
    eig.lambdas.push_back(values[k].real());
    Vector q = vectors.col(k).real();
    const double norm = q.norm();
    if (norm == 0.0) return {std::nullopt, SpectrumClass::Degenerate};
    q /= norm;
    Eigen::Index big = 0;
    q.cwiseAbs().maxCoeff(&big);
    if (q[big] < 0.0) q = -q;
    eig.Wd.row(row) = q.transpose();
  }

  for (std::size_t i = 1; i < eig.lambdas.size(); ++i) {
    if (eig.lambdas[i] - eig.lambdas[i - 1] < eps_d) {
      return {std::nullopt, SpectrumClass::Degenerate};
    }
  }

  const double det = eig.Wd.fullPivLu().determinant();
  if (std::abs(det) <= tol.eps_sing) return {std::nullopt, SpectrumClass::Degenerate};
  eig.det_wd_inv_abs = 1.0 / std::abs(det);

  const Vector beta = eig.Wd * model.B().col(0);
  eig.betas.assign(beta.data(), beta.data() + beta.size());

  const SpectrumClass cls = classify_spectrum(eig.lambdas, domain, tol);
  return {std::move(eig), cls};
}

double volume_under_transform(double vol, const Matrix& W) {
  if (W.rows() < 1 || W.rows() != W.cols()) {
    throw ArgumentError("transform W must be square and non-empty");
  }
  if (!W.allFinite()) throw ArgumentError("transform W has non-finite entries");
  if (is_numerically_singular(W, Tolerances{}.eps_sing)) {
    throw ArgumentError("transform W is singular");
  }
  return std::abs(W.fullPivLu().determinant()) * vol;
}

StateSpaceModel transform_model(const StateSpaceModel& model, const Matrix& W) {
  if (W.rows() != model.states() || W.cols() != model.states()) {
    throw ArgumentError("transform W must be n x n");
  }
  if (is_numerically_singular(W, Tolerances{}.eps_sing)) {
    throw ArgumentError("transform W is singular");
  }
  const auto lu = W.fullPivLu();
  return StateSpaceModel(W * model.A() * lu.inverse(), W * model.B());
}

}  // namespace zonovol
