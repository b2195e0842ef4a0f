#include "zonovol/factors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "zonovol/analytic.hpp"

namespace zonovol {

namespace {

std::string pair_label(int i, int j) {
  return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
}

void check_sorted_distinct(std::span<const double> l, TimeDomain domain, const Tolerances& tol) {
  if (l.empty()) throw ArgumentError("empty spectrum");
  for (std::size_t i = 1; i < l.size(); ++i) {
    if (l[i] < l[i - 1]) throw ArgumentError("eigenvalues must be sorted ascending");
  }
  if (classify_spectrum(l, domain, tol) == SpectrumClass::Degenerate) {
    throw DomainError("Degenerate: repeated eigenvalues", SpectrumClass::Degenerate);
  }
}

}  // namespace

ShapeFactor shape_factor(std::span<const double> lambdas, TimeDomain domain,
                         const Tolerances& tol) {
  check_sorted_distinct(lambdas, domain, tol);
  const double threshold = domain == TimeDomain::Discrete ? 1.0 : 0.0;
  const int n = static_cast<int>(lambdas.size());

  ShapeFactor out;
  std::vector<int> side(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double l = lambdas[static_cast<std::size_t>(i)];
    if (std::abs(l - threshold) < tol.eps_sing) {
      throw SingularFactorError("NearSingularFactor: eigenvalue " + std::to_string(i + 1) +
                                    " sits on the partition threshold",
                                i + 1, 0);
    }
    side[static_cast<std::size_t>(i)] = l > threshold ? 1 : -1;
    (l > threshold ? out.partition.plus : out.partition.minus).push_back(i + 1);
  }

  out.pairs = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double li = lambdas[static_cast<std::size_t>(i)];
      const double lj = lambdas[static_cast<std::size_t>(j)];
      const double den = domain == TimeDomain::Discrete ? 1.0 - li * lj : li + lj;
      const bool same = side[static_cast<std::size_t>(i)] == side[static_cast<std::size_t>(j)];
      double f = std::numeric_limits<double>::infinity();
      if (std::abs(den) < tol.eps_sing) {
        if (same) {
          throw SingularFactorError("NearSingularFactor: singular pair factor at eigenvalue pair " +
                                        pair_label(i + 1, j + 1),
                                    i + 1, j + 1);
        }
      } else {
        f = std::abs((lj - li) / den);
      }
      out.pairs(i, j) = f;
      out.pairs(j, i) = f;
      if (same) {
        (side[static_cast<std::size_t>(i)] > 0 ? out.F1_plus : out.F1_minus) *= f;
      }
    }
  }
  out.F1 = out.F1_plus * out.F1_minus;
  return out;
}

double cross_factor(const IndexTuple& subset, const IndexTuple& complement,
                    std::span<const double> lambdas, const Tolerances& tol) {
  const int n = static_cast<int>(lambdas.size());
  for (const IndexTuple* set : {&subset, &complement}) {
    for (int k : *set) {
      if (k < 1 || k > n) throw ArgumentError("index out of range in cross factor");
    }
  }
  for (int j : subset) {
    if (std::find(complement.begin(), complement.end(), j) != complement.end()) {
      throw ArgumentError("cross factor needs disjoint index sets");
    }
  }
  double p = 1.0;
  for (int j : subset) {
    const double lj = lambdas[static_cast<std::size_t>(j - 1)];
    for (int k : complement) {
      const double lk = lambdas[static_cast<std::size_t>(k - 1)];
      const double den = lk - lj;
      if (std::abs(den) < tol.eps_sing) {
        throw SingularFactorError("singular cross factor at eigenvalue pair " +
                                      pair_label(std::min(j, k), std::max(j, k)),
                                  std::min(j, k), std::max(j, k));
      }
      p *= (1.0 - lj * lk) / den;
    }
  }
  return p;
}

std::string_view to_string(Horizon::Kind kind) noexcept {
  switch (kind) {
    case Horizon::Kind::Finite:
      return "finite";
    case Horizon::Kind::Infinite:
      return "infinite";
    case Horizon::Kind::Narrow:
      return "narrow";
    case Horizon::Kind::Continuous:
      return "continuous";
  }
  return "unknown";
}

std::vector<double> side_lengths(const EigenStructure& eig, Horizon horizon,
                                 const Tolerances& tol) {
  const std::string kind(to_string(horizon.kind));
  if (horizon.kind == Horizon::Kind::Finite || horizon.kind == Horizon::Kind::Narrow) {
    if (horizon.value < 1.0 || horizon.value != std::floor(horizon.value)) {
      throw ArgumentError("horizon N must be a positive integer");
    }
  }
  if (horizon.kind == Horizon::Kind::Continuous &&
      (!std::isfinite(horizon.value) || horizon.value < 0.0)) {
    throw ArgumentError("horizon T must be finite and >= 0");
  }

  std::vector<double> out;
  out.reserve(eig.lambdas.size());
  for (std::size_t i = 0; i < eig.lambdas.size(); ++i) {
    const double l = eig.lambdas[i];
    const double a = std::abs(l);
    const double b = std::abs(eig.betas[i]);
    auto reject = [&](const char* why) {
      throw DomainError(kind + " side length undefined for mode " + std::to_string(i + 1) +
                            ": " + why,
                        SpectrumClass::NearSingularFactor);
    };
    double f = 0.0;
    switch (horizon.kind) {
      case Horizon::Kind::Infinite:
        if (a >= 1.0 - tol.eps_sing) reject("|lambda| >= 1");
        f = b / (1.0 - a);
        break;
      case Horizon::Kind::Finite:
        if (std::abs(1.0 - a) < tol.eps_sing) reject("|lambda| = 1");
        f = b * std::abs(1.0 - std::pow(a, horizon.value)) / std::abs(1.0 - a);
        break;
      case Horizon::Kind::Narrow:
        if (a < tol.eps_sing) reject("lambda = 0");
        if (std::abs(1.0 - a) < tol.eps_sing) reject("|lambda| = 1");
        f = b * std::abs(1.0 - std::pow(a, -horizon.value)) / std::abs(1.0 - a);
        break;
      case Horizon::Kind::Continuous:
        if (a < tol.eps_sing) reject("lambda = 0");
        f = b * std::abs(1.0 - std::exp(l * horizon.value)) / a;
        break;
    }
    out.push_back(f);
  }
  return out;
}

std::vector<double> modal_controllability(const EigenStructure& eig) {
  std::vector<double> out;
  out.reserve(eig.betas.size());
  for (double b : eig.betas) out.push_back(std::abs(b));
  return out;
}

FactorReport capability_factors(const EigenStructure& eig, Horizon horizon,
                                const Tolerances& tol) {
  FactorReport r;
  r.horizon = horizon;
  const TimeDomain domain =
      horizon.kind == Horizon::Kind::Continuous ? TimeDomain::Continuous : TimeDomain::Discrete;
  r.shape = shape_factor(eig.lambdas, domain, tol);
  r.F2 = side_lengths(eig, horizon, tol);
  r.F3 = modal_controllability(eig);
  return r;
}

IndexTuple dominant_subset(std::span<const double> lambdas, int N, const Tolerances& tol) {
  if (N < 1) throw ArgumentError("horizon N must be at least 1");
  check_sorted_distinct(lambdas, TimeDomain::Discrete, tol);
  if (lambdas.front() <= 0.0) {
    throw DomainError("dominant subset needs a positive spectrum",
                      classify_spectrum(lambdas, TimeDomain::Discrete, tol));
  }
  const int n = static_cast<int>(lambdas.size());
  IndexTuple best;
  double best_log = -std::numeric_limits<double>::infinity();
  for (int s = 0; s <= n; ++s) {
    for (const IndexTuple& subset : enumerate_subsets(1, n, s)) {
      std::vector<double> in;
      std::vector<double> out;
      std::size_t p = 0;
      double log_up = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double l = lambdas[static_cast<std::size_t>(j - 1)];
        if (p < subset.size() && subset[p] == j) {
          in.push_back(l);
          log_up += N * std::log(l);
          ++p;
        } else {
          out.push_back(l);
        }
      }
      const double mag = std::abs(phi_factor(in, PhiMode::DiscretePositive, tol) *
                                  phi_factor(out, PhiMode::DiscretePositive, tol));
      const double score = log_up + std::log(mag);
      if (score > best_log) {
        best_log = score;
        best = subset;
      }
    }
  }
  return best;
}

}  // namespace zonovol
