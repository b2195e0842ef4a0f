#ifndef ZONOVOL_LDT_MODEL_HPP_
#define ZONOVOL_LDT_MODEL_HPP_

#include <optional>
#include <span>
#include <vector>

#include "zonovol/errors.hpp"
#include "zonovol/zonotope.hpp"

namespace zonovol {

/// x_{k+1} = A x_k + B u_k with ||u_k||_inf <= 1.
class StateSpaceModel {
 public:
  StateSpaceModel(Matrix A, Matrix B);

  const Matrix& A() const noexcept { return A_; }
  const Matrix& B() const noexcept { return B_; }
  int states() const noexcept { return static_cast<int>(A_.rows()); }
  int inputs() const noexcept { return static_cast<int>(B_.cols()); }

 private:
  Matrix A_;
  Matrix B_;
};

enum class TimeDomain { Discrete, Continuous };

/// Diagonal coordinates of a single-input model: W_d A W_d^{-1} = diag(lambdas),
/// W_d b = betas.  Rows of W_d are left eigenvectors; eigenvalues ascending.
struct EigenStructure {
  std::vector<double> lambdas;
  Matrix Wd;
  std::vector<double> betas;
  double det_wd_inv_abs = 1.0;

  int size() const noexcept { return static_cast<int>(lambdas.size()); }

  /// |det(W_d^{-1}) * prod(beta_i)|, the coordinate prefactor of every
  /// eigen-based volume formula.
  double prefactor() const;

  /// Spectral form (W_d = I): the model diag(lambdas), b = betas.  Pairs are
  /// sorted by eigenvalue.
  static EigenStructure from_spectrum(std::vector<double> lambdas,
                                      std::vector<double> betas);
};

/// Outcome of diagonalize: `structure` is empty when the spectrum is Complex
/// or Degenerate, otherwise present with `spectrum` describing it.
struct Diagonalization {
  std::optional<EigenStructure> structure;
  SpectrumClass spectrum;
};

/// Priority Complex > Degenerate > NearSingularFactor > MixedSign >
/// AllNegativeDistinct / AllPositiveDistinct.  Real inputs are never Complex.
SpectrumClass classify_spectrum(std::span<const double> lambdas, TimeDomain domain,
                                const Tolerances& tol = {});

/// P_N = [B, AB, ..., A^{N-1}B].
Matrix reachability_generators(const StateSpaceModel& model, int N);

/// [A^{-N}B, A^{-N+1}B, ..., A^{-1}B].  DomainError when A is singular.
Matrix narrow_generators(const StateSpaceModel& model, int N);

/// Single-input diagonalization.  ArgumentError for r != 1.
Diagonalization diagonalize(const StateSpaceModel& model,
                            TimeDomain domain = TimeDomain::Discrete,
                            const Tolerances& tol = {});

/// |det W| * vol.  ArgumentError when W is singular.
double volume_under_transform(double vol, const Matrix& W);

/// The model in coordinates x' = W x: (W A W^{-1}, W B).
StateSpaceModel transform_model(const StateSpaceModel& model, const Matrix& W);

/// The model with state matrix A^{-1}.  DomainError when A is singular.
StateSpaceModel inverse_model(const StateSpaceModel& model);

/// True when |det M| / ||M||^n is at most eps (or M is zero).
bool is_numerically_singular(const Matrix& M, double eps);

}  // namespace zonovol

#endif  // ZONOVOL_LDT_MODEL_HPP_
