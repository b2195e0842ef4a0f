#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "commands.hpp"
#include "json_writer.hpp"
#include "zonovol/analytic.hpp"
#include "zonovol/ldt_model.hpp"
#include "zonovol/zonotope.hpp"

namespace zonovol::cli {

namespace {

using Rng = std::mt19937_64;

constexpr double kLo = 0.05;
constexpr double kHi = 0.95;
constexpr double kMinGap = 0.02;
constexpr double kRel = 1e-9;

std::vector<double> random_spectrum(Rng& rng, int n) {
  std::uniform_real_distribution<double> u(kLo, kHi);
  for (;;) {
    std::vector<double> l(static_cast<std::size_t>(n));
    for (double& x : l) x = u(rng);
    std::sort(l.begin(), l.end());
    bool ok = true;
    for (std::size_t i = 1; i < l.size(); ++i) ok = ok && l[i] - l[i - 1] >= kMinGap;
    if (ok) return l;
  }
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

std::string list(const std::vector<double>& v) {
  std::ostringstream s;
  s << "[";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << format_number(v[i]);
  s << "]";
  return s.str();
}

std::string list(const IndexTuple& v) {
  std::ostringstream s;
  s << "(";
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? ", " : "") << v[i];
  s << ")";
  return s.str();
}

Matrix power_matrix(const std::vector<double>& l, int N) {
  Matrix P(static_cast<Eigen::Index>(l.size()), N);
  for (std::size_t i = 0; i < l.size(); ++i) {
    double p = 1.0;
    for (int k = 0; k < N; ++k, p *= l[i]) P(static_cast<Eigen::Index>(i), k) = p;
  }
  return P;
}

bool close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// A trial returns an empty string on success, otherwise the counterexample.
using Trial = std::function<std::string(Rng&)>;

std::string lemma1(Rng& rng) {
  const int n = uniform_int(rng, 1, 5);
  const auto l = random_spectrum(rng, n);
  std::vector<int> pool(static_cast<std::size_t>(2 * n + 4));
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
  std::shuffle(pool.begin(), pool.end(), rng);
  std::vector<int> e(pool.begin(), pool.begin() + n);
  std::sort(e.begin(), e.end());
  const double d = quasi_vandermonde(l, e);
  if (d > 0.0) return {};
  return "lambda=" + list(l) + " exponents=" + list(IndexTuple(e.begin(), e.end())) +
         " det=" + format_number(d);
}

std::string lemma2(Rng& rng) {
  const auto l = random_spectrum(rng, uniform_int(rng, 1, 5));
  const double r = lemma2_residual(l);
  if (std::abs(r) < 1e-11) return {};
  return "lambda=" + list(l) + " residual=" + format_number(r);
}

std::string lemma3(Rng& rng) {
  const int n = uniform_int(rng, 2, 5);
  const auto l = random_spectrum(rng, n);
  IndexTuple members;
  for (int k = 1; k <= n; ++k) {
    if (uniform_int(rng, 0, 1)) members.push_back(k);
  }
  const int i = uniform_int(rng, 1, n - 1);
  const int j = uniform_int(rng, i + 1, n);
  const Lemma3Residuals r = lemma3_residuals(l, members, i, j);
  const double worst = std::max({std::abs(r.equal), std::abs(r.unit), std::abs(r.reciprocal)});
  if (worst < 1e-11) return {};
  return "lambda=" + list(l) + " members=" + list(members) + " i=" + std::to_string(i) +
         " j=" + std::to_string(j) + " residual=" + format_number(worst);
}

std::string routes(Rng& rng) {
  const int n = uniform_int(rng, 1, 5);
  const auto l = random_spectrum(rng, n);
  const int N = uniform_int(rng, n, 12);
  const double direct = unit_cube_volume(power_matrix(l, N));
  const double analytic = analytic_volume_sum(l, N).sum;
  const double recursive = recursive_volume_sum(l, N);
  if (close(analytic, direct, kRel) && close(recursive, direct, kRel)) return {};
  return "lambda=" + list(l) + " N=" + std::to_string(N) + " direct=" + format_number(direct) +
         " analytic=" + format_number(analytic) + " recursive=" + format_number(recursive);
}

std::string forms(Rng& rng) {
  const int n = uniform_int(rng, 1, 5);
  const auto l = random_spectrum(rng, n);
  const int N = uniform_int(rng, n, 12);
  const double a = analytic_volume_sum(l, N).sum;
  const double b = analytic_volume_sum_complement(l, N);
  const double c = analytic_volume_sum_grouped(l, N);
  if (close(a, b, kRel) && close(a, c, kRel)) return {};
  return "lambda=" + list(l) + " N=" + std::to_string(N) + " forms=" +
         list(std::vector<double>{a, b, c});
}

std::string monotone(Rng& rng) {
  const int n = uniform_int(rng, 1, 5);
  const auto l = random_spectrum(rng, n);
  const int N = uniform_int(rng, n, 30);
  const double a = analytic_volume_sum(l, N).sum;
  const double b = analytic_volume_sum(l, N + 1).sum;
  if (b >= a * (1.0 - 1e-12)) return {};
  return "lambda=" + list(l) + " N=" + std::to_string(N);
}

std::string duality(Rng& rng) {
  const int n = uniform_int(rng, 1, 3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix A(n, n);
  do {
    for (Eigen::Index i = 0; i < A.size(); ++i) A.data()[i] = 0.5 * u(rng);
    A += Matrix::Identity(n, n);
  } while (std::abs(A.determinant()) < 0.1);
  Matrix B(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) B(i, 0) = u(rng);
  const int N = uniform_int(rng, 1, 8);
  const StateSpaceModel model(A, B);
  const StateSpaceModel inv = inverse_model(model);
  const double det = std::abs(A.determinant());
  // narrow(A) = |det A|^-1 broad(A^-1);  narrow(A^-1) = |det A| broad(A)
  const double n1 = symmetric_volume(narrow_generators(model, N));
  const double b1 = symmetric_volume(reachability_generators(inv, N)) / det;
  const double n2 = symmetric_volume(narrow_generators(inv, N));
  const double b2 = symmetric_volume(reachability_generators(model, N)) * det;
  const double scale = std::max({n1, b1, n2, b2, 1e-300});
  if (std::abs(n1 - b1) <= kRel * scale && std::abs(n2 - b2) <= kRel * scale) return {};
  std::ostringstream s;
  s << "rel=" << std::max(std::abs(n1 - b1), std::abs(n2 - b2)) / scale << " A=" << A.format(Eigen::IOFormat(17, Eigen::DontAlignCols, ", ", "; ", "", "", "[", "]"))
    << " N=" << N;
  return s.str();
}

// Fixed case with l_1 l_2 = 1: the closed form must refuse and the fallback
// route must still match the oracle.
std::string singular_gate(Rng& rng) {
  const int N = uniform_int(rng, 2, 10);
  const EigenStructure eig = EigenStructure::from_spectrum({0.5, 2.0}, {1.0, 1.0});
  try {
    (void)full_volume(eig, N, Route::Analytic);
    return "analytic route accepted lambda=(0.5, 2) N=" + std::to_string(N);
  } catch (const DomainError&) {
  }
  const VolumeReport fallback = full_volume(eig, N, Route::Auto);
  const double direct = full_volume(eig, N, Route::Direct).volume;
  if (fallback.route != Route::Direct && close(fallback.volume, direct, kRel)) return {};
  return "fallback mismatch lambda=(0.5, 2) N=" + std::to_string(N);
}

struct Property {
  const char* name;
  Trial run;
};

}  // namespace

int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.trials < 1) throw UsageError("--trials must be at least 1");
  const std::vector<Property> props = {
      {"lemma1_positivity", lemma1}, {"lemma2_residual", lemma2},
      {"lemma3_residuals", lemma3},  {"route_equivalence", routes},
      {"form_equivalence", forms},   {"monotone_in_N", monotone},
      {"duality", duality},          {"singular_gate", singular_gate},
  };

  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  bool all_ok = true;
  for (std::size_t p = 0; p < props.size(); ++p) {
    // Independent stream per property, so adding one leaves the others intact.
    Rng rng(cfg.seed * 0x9E3779B97F4A7C15ull + p);
    int passed = 0;
    int failed = 0;
    std::string first;
    int first_trial = -1;
    for (int t = 0; t < cfg.trials; ++t) {
      std::string bad;
      try {
        bad = props[p].run(rng);
      } catch (const std::exception& e) {
        bad = std::string("exception: ") + e.what();
      }
      if (bad.empty()) {
        ++passed;
      } else {
        if (failed++ == 0) {
          first = bad;
          first_trial = t;
        }
      }
    }
    if (failed) {
      all_ok = false;
      err << "check failed: " << props[p].name << " seed=" << cfg.seed
          << " trial=" << first_trial << " " << first << "\n";
    }
    results.push_back({{"property", props[p].name}, {"passed", passed}, {"failed", failed}});
  }

  if (cfg.format == Format::Csv) {
    out << "property_index,passed,failed\n";
    for (std::size_t p = 0; p < results.size(); ++p) {
      out << p << "," << results[p]["passed"].get<int>() << "," << results[p]["failed"].get<int>()
          << "\n";
    }
  } else {
    nlohmann::ordered_json j;
    j["command"] = "check";
    j["seed"] = cfg.seed;
    j["trials"] = cfg.trials;
    j["properties"] = results;
    j["ok"] = all_ok;
    write_json(out, j);
  }
  return all_ok ? kOk : kCheckFailed;
}

}  // namespace zonovol::cli
