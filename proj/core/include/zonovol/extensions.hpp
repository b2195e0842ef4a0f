#ifndef ZONOVOL_EXTENSIONS_HPP_
#define ZONOVOL_EXTENSIONS_HPP_

#include <cstdint>

#include "zonovol/analytic.hpp"
#include "zonovol/errors.hpp"
#include "zonovol/ldt_model.hpp"

namespace zonovol {

/// dx/dt = A x + B u on [0, T] with ||u(t)||_inf <= 1.
class ContinuousModel {
 public:
  ContinuousModel(Matrix A, Matrix B, double T);

  const Matrix& A() const noexcept { return model_.A(); }
  const Matrix& B() const noexcept { return model_.B(); }
  double T() const noexcept { return T_; }
  int states() const noexcept { return model_.states(); }
  const StateSpaceModel& as_state_space() const noexcept { return model_; }

 private:
  StateSpaceModel model_;
  double T_;
};

/// Volume of the N-step narrow (recover) region from the eigen structure of
/// A.  Needs 0 < l_1 < ... < l_n and N >= n.
VolumeReport narrow_volume_analytic(const EigenStructure& eig, int N,
                                    const Tolerances& tol = {});

/// Finite-time volume for l_1 < ... < l_n < 0.
VolumeReport negative_spectrum_volume(const EigenStructure& eig, int N,
                                      const Tolerances& tol = {});

/// Continuous-time volume.  The signed expansion is reported in
/// normalized_sum; the volume is its magnitude, with a diagnostic when the
/// signed sum is negative.
VolumeReport ct_volume_analytic(const ContinuousModel& model, const Tolerances& tol = {});
VolumeReport ct_volume_analytic(const EigenStructure& eig, double T, const Tolerances& tol = {});

/// exp(A t) through the eigendecomposition.  DomainError unless the
/// spectrum is real and distinct.
Matrix expm_diagonalizable(const Matrix& A, double t, const Tolerances& tol = {});

struct OracleOptions {
  /// Largest admissible determinant count of the discretized sum.
  std::uint64_t budget = 500'000'000;
  unsigned threads = 1;
};

/// Left Riemann discretization: generators exp(A k dt) B dt for
/// k = 0 .. ceil(T/dt) - 1, volume by the determinant sum.
double ct_discretized_oracle(const ContinuousModel& model, double dt,
                             const OracleOptions& options = {}, const Tolerances& tol = {});

/// |det A|^{-1} times the reachable volume of the model with A^{-1}.
double narrow_via_relation(const StateSpaceModel& model, int N, Route route = Route::Auto,
                           const Tolerances& tol = {});

/// Narrow region volume by the requested route.  Direct uses the generator
/// oracle; analytic/auto (positive distinct spectrum) the closed form.
VolumeReport narrow_volume(const StateSpaceModel& model, int N, Route route = Route::Auto,
                           const Tolerances& tol = {});

}  // namespace zonovol

#endif  // ZONOVOL_EXTENSIONS_HPP_
