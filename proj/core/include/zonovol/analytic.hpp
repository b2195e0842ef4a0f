#ifndef ZONOVOL_ANALYTIC_HPP_
#define ZONOVOL_ANALYTIC_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zonovol/errors.hpp"
#include "zonovol/ldt_model.hpp"
#include "zonovol/zonotope.hpp"

namespace zonovol {

// Eigenvalue subsets in this header are 1-based positions into an ascending
// spectrum: (j_1 < ... < j_s) with 1 <= j_i <= n.  The empty subset is
// allowed everywhere and contributes the neutral factor 1.

/// Per-eigenvalue factor and pairwise factor family of a distribution factor.
///   DiscretePositive: prod (l_k - l_i)/(1 - l_i l_k) * prod 1/(1 - l_i)
///   DiscreteNegative: prod (l_k - l_i)/(1 - l_i l_k) * prod 1/(1 + l_i)
///   Continuous:       prod (l_k - l_i)/(-(l_i + l_k)) * prod 1/l_i
/// Pairs run over i < k in list order.
enum class PhiMode { DiscretePositive, DiscreteNegative, Continuous };

/// Power factor: prod l^N, prod |l|^N, or exp(T * sum l).
enum class PowerMode { Discrete, DiscreteAbs, Continuous };

/// Distribution factor of the listed eigenvalues.  Empty list gives 1.
/// SingularFactorError names the pair (1-based) whose denominator vanishes.
double phi_factor(std::span<const double> lambdas, PhiMode mode, const Tolerances& tol = {});

/// Power factor with integer (possibly negative) N for the discrete modes and
/// horizon T >= 0 for the continuous mode.  Evaluated in log space; throws
/// DomainError when the result is not finite.
double upsilon_power(std::span<const double> lambdas, double horizon, PowerMode mode);

/// (-1)^((n+1)s - sum j_i).
int sign_coefficient(const IndexTuple& subset, int n);

/// det[lambda_i^{exponent_k}].  Exponents strictly increasing and >= 0.
double quasi_vandermonde(std::span<const double> lambdas, std::span<const int> exponents);

/// V_N by the O(2^n N) dynamic programme over the recursion on
/// deleted-eigenvalue sequences.  No factor denominators are involved.
double recursive_volume_sum(std::span<const double> lambdas, int N, const Tolerances& tol = {});

/// One summand c * Upsilon * Phi(subset) * Phi(complement).
struct SubsetTerm {
  IndexTuple subset;
  int sign = 1;
  double upsilon_pow = 1.0;
  double phi_in = 1.0;
  double phi_out = 1.0;
  double value = 0.0;
};

enum class CoefficientRule {
  /// (-1)^((n+1)s - sum j)
  Standard,
  /// (-1)^(sum j): the standard rule after mapping lambda -> |lambda|,
  /// which reverses the index order of a negative spectrum.
  Reversed,
};

/// How to evaluate a subset expansion sum_s sum_J c_J Upsilon_J Phi_J Phi_{n\J}.
struct ExpansionSpec {
  PhiMode phi = PhiMode::DiscretePositive;
  PowerMode power = PowerMode::Discrete;
  double horizon = 0.0;
  CoefficientRule coefficient = CoefficientRule::Standard;
};

struct Expansion {
  double sum = 0.0;
  std::vector<SubsetTerm> terms;  ///< by subset size, then lexicographic
  bool log_space = false;
};

/// Generic evaluator shared by the finite, narrow, negative and
/// continuous-time expansions.  Terms are evaluated in log-magnitude form
/// when n >= 12 or a power would under/overflow, and summed with
/// compensation.
Expansion expansion_sum(std::span<const double> lambdas, const ExpansionSpec& spec,
                        const Tolerances& tol = {});

/// Finite-time expansion for 0 < l_1 < ... < l_n, N >= n.  Cost independent
/// of N.  DomainError (with the SpectrumClass) on hypothesis violations.
Expansion analytic_volume_sum(std::span<const double> lambdas, int N, const Tolerances& tol = {});

/// The same value by the complement-indexed sum.
double analytic_volume_sum_complement(std::span<const double> lambdas, int N,
                                      const Tolerances& tol = {});

/// The same value by the grouped form {sum c Upsilon F_J^{n\J}} * Phi_{1..n}.
double analytic_volume_sum_grouped(std::span<const double> lambdas, int N,
                                   const Tolerances& tol = {});

/// Limit N -> infinity for |l_i| < 1, same sign, distinct.
double infinite_volume_sum(std::span<const double> lambdas, const Tolerances& tol = {});

/// Expansion for l_1 < ... < l_n < 0 (powers |l|^N, factors 1/(1 + l)).
Expansion negative_volume_sum(std::span<const double> lambdas, int N, const Tolerances& tol = {});

/// Narrow-region expansion (powers l^{-N}) for 0 < l_1 < ... < l_n.  The
/// signed sum may be negative; its magnitude is the normalized volume.
Expansion narrow_volume_sum(std::span<const double> lambdas, int N, const Tolerances& tol = {});

/// Continuous-time expansion with Upsilon = exp(T sum l).  Signed.
Expansion ct_volume_sum(std::span<const double> lambdas, double T, const Tolerances& tol = {});

enum class Route { Auto, Direct, Recursive, Analytic, Infinite };

std::string_view to_string(Route route) noexcept;

struct VolumeReport {
  double volume = 0.0;
  /// V_N, the spectrum-only factor.  Empty when no eigen structure exists.
  std::optional<double> normalized_sum;
  Route route = Route::Direct;
  std::vector<SubsetTerm> terms;
  std::optional<SpectrumClass> spectrum;
  std::vector<std::string> diagnostics;
};

/// Volume of the N-step reachable region.  Auto picks analytic when the
/// spectrum is same-sign and distinct, recursive when only a factor is near
/// singular, direct otherwise.
VolumeReport full_volume(const StateSpaceModel& model, int N, Route route = Route::Auto,
                         const Tolerances& tol = {});
VolumeReport full_volume(const EigenStructure& eig, int N, Route route = Route::Auto,
                         const Tolerances& tol = {});

/// Infinite-time reachable volume, 2^n * prefactor * Phi.
VolumeReport infinite_volume(const EigenStructure& eig, const Tolerances& tol = {});

/// (1 - prod l) Phi_{1..n} - sum_k (-1)^(1+k) prod_{i != k} l_i Phi_{1..n \ k}.
double lemma2_residual(std::span<const double> lambdas, const Tolerances& tol = {});

/// Residuals (left minus right) of the three substitution identities of the
/// distribution factor Phi_L, L = {lambdas[k-1] : k in members}:
///   equal:      Phi_L at l_j := l_i
///   unit:       (1 - l_i) Phi_L at l_i := 1
///   reciprocal: (1 - l_i l_j) Phi_L at l_j := 1 / l_i   (requires i < j)
/// Removable zeros are cancelled symbolically before substituting.
/// Indices are 1-based into `lambdas`.
struct Lemma3Residuals {
  double equal = 0.0;
  double unit = 0.0;
  double reciprocal = 0.0;
};

double lemma3_equal_residual(std::span<const double> lambdas, const IndexTuple& members, int i,
                             int j, const Tolerances& tol = {});
double lemma3_unit_residual(std::span<const double> lambdas, const IndexTuple& members, int i,
                            const Tolerances& tol = {});
double lemma3_reciprocal_residual(std::span<const double> lambdas, const IndexTuple& members,
                                  int i, int j, const Tolerances& tol = {});
Lemma3Residuals lemma3_residuals(std::span<const double> lambdas, const IndexTuple& members,
                                 int i, int j, const Tolerances& tol = {});

}  // namespace zonovol

#endif  // ZONOVOL_ANALYTIC_HPP_
