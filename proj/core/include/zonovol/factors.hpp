#ifndef ZONOVOL_FACTORS_HPP_
#define ZONOVOL_FACTORS_HPP_

#include <span>
#include <string>
#include <vector>

#include "zonovol/errors.hpp"
#include "zonovol/ldt_model.hpp"
#include "zonovol/zonotope.hpp"

namespace zonovol {

/// Eigenvalue indices (1-based, ascending spectrum) above and below the
/// partition threshold: 1 for discrete time, 0 for continuous time.
struct Partition {
  IndexTuple plus;
  IndexTuple minus;
};

struct ShapeFactor {
  double F1 = 1.0;
  double F1_plus = 1.0;
  double F1_minus = 1.0;
  /// Symmetric matrix of |pairwise factors|; zero diagonal.  Pairs straddling
  /// the partition whose factor is singular hold +inf.
  Matrix pairs;
  Partition partition;
};

/// Shape (pole distribution) factor.  Discrete pairs use
/// |(l_j - l_i)/(1 - l_i l_j)|, continuous pairs |(l_j - l_i)/(l_i + l_j)|,
/// multiplied within each side of the partition.
ShapeFactor shape_factor(std::span<const double> lambdas, TimeDomain domain,
                         const Tolerances& tol = {});

/// prod_{j in subset} prod_{k in complement} (1 - l_j l_k)/(l_k - l_j).
/// Index sets are 1-based and must be disjoint.
double cross_factor(const IndexTuple& subset, const IndexTuple& complement,
                    std::span<const double> lambdas, const Tolerances& tol = {});

struct Horizon {
  enum class Kind { Finite, Infinite, Narrow, Continuous };
  Kind kind = Kind::Infinite;
  double value = 0.0;  ///< N for Finite/Narrow, T for Continuous

  static Horizon finite(int N) { return {Kind::Finite, static_cast<double>(N)}; }
  static Horizon infinite() { return {Kind::Infinite, 0.0}; }
  static Horizon narrow(int N) { return {Kind::Narrow, static_cast<double>(N)}; }
  static Horizon continuous(double T) { return {Kind::Continuous, T}; }
};

std::string_view to_string(Horizon::Kind kind) noexcept;

/// Side lengths F2_i of the circumscribed rhombohedron in eigen coordinates.
///   Infinite:   |b_i| / (1 - |l_i|)
///   Finite:     |b_i| |1 - |l_i|^N| / |1 - |l_i||
///   Narrow:     |b_i| |1 - |l_i|^{-N}| / |1 - |l_i||
///   Continuous: |b_i| |1 - exp(l_i T)| / |l_i|
std::vector<double> side_lengths(const EigenStructure& eig, Horizon horizon,
                                 const Tolerances& tol = {});

/// F3_i = |q_i b| with unit-norm rows q_i.
std::vector<double> modal_controllability(const EigenStructure& eig);

struct FactorReport {
  ShapeFactor shape;
  std::vector<double> F2;
  std::vector<double> F3;
  Horizon horizon;
  std::string normalization = "unit-norm left eigenvector rows";
};

FactorReport capability_factors(const EigenStructure& eig, Horizon horizon,
                                const Tolerances& tol = {});

/// Subset J maximizing |Upsilon_J^N Phi_J Phi_{n\J}| over the finite-time
/// expansion of a positive spectrum.
IndexTuple dominant_subset(std::span<const double> lambdas, int N, const Tolerances& tol = {});

}  // namespace zonovol

#endif  // ZONOVOL_FACTORS_HPP_
