#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "json_writer.hpp"
#include "model_io.hpp"
#include "zonovol/extensions.hpp"
#include "zonovol/factors.hpp"

namespace zonovol::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_number(double v) { return std::isfinite(v) ? format_number(v) : "nan"; }

void csv_row(std::ostream& out, const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ",";
    out << csv_number(values[i]);
  }
  out << "\n";
}

ordered_json number_or_null(std::optional<double> v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

TimeDomain domain_of(Mode mode) {
  return mode == Mode::Continuous ? TimeDomain::Continuous : TimeDomain::Discrete;
}

// Eigen structure of a loaded model; spectral files skip the decomposition.
Diagonalization eigen_of(const LoadedModel& m, TimeDomain domain, const Tolerances& tol) {
  if (m.spectral) return {m.spectral, classify_spectrum(m.spectral->lambdas, domain, tol)};
  return diagonalize(m.model, domain, tol);
}

const EigenStructure& require_structure(const Diagonalization& d) {
  if (!d.structure) {
    throw DomainError(std::string(to_string(d.spectrum)) + ": no real diagonal form",
                      d.spectrum);
  }
  return *d.structure;
}

int require_N(const RunConfig& cfg) {
  if (!cfg.N) throw UsageError("--N is required in " + std::string(to_string(cfg.mode)) + " mode");
  return *cfg.N;
}

double require_T(const RunConfig& cfg) {
  if (!cfg.T) throw UsageError("--T is required in continuous mode");
  return *cfg.T;
}

VolumeReport narrow_report(const LoadedModel& m, int N, Route route, const Tolerances& tol) {
  if (route == Route::Recursive) {
    throw UsageError("narrow mode supports the auto, direct and analytic routes");
  }
  if (!m.spectral || route == Route::Direct) return narrow_volume(m.model, N, route, tol);
  const EigenStructure& eig = *m.spectral;
  const SpectrumClass cls = classify_spectrum(eig.lambdas, TimeDomain::Discrete, tol);
  if (route == Route::Auto && (cls != SpectrumClass::AllPositiveDistinct || N < eig.size())) {
    VolumeReport r = narrow_volume(m.model, N, Route::Direct, tol);
    r.spectrum = cls;
    return r;
  }
  return narrow_volume_analytic(eig, N, tol);
}

VolumeReport continuous_report(const LoadedModel& m, const RunConfig& cfg) {
  const double T = require_T(cfg);
  if (cfg.route == Route::Recursive) {
    throw UsageError("continuous mode supports the auto, direct and analytic routes");
  }
  if (cfg.route == Route::Direct) {
    if (!cfg.dt) throw UsageError("the direct route in continuous mode needs --dt");
    VolumeReport r;
    r.route = Route::Direct;
    r.volume = ct_discretized_oracle(ContinuousModel(m.model.A(), m.model.B(), T), *cfg.dt,
                                     {cfg.budget, 1}, cfg.tol);
    r.diagnostics.emplace_back("left Riemann discretization with dt = " + format_number(*cfg.dt));
    return r;
  }
  if (m.model.inputs() != 1) {
    throw ArgumentError("the continuous-time analytic route needs a single-input model");
  }
  return ct_volume_analytic(require_structure(eigen_of(m, TimeDomain::Continuous, cfg.tol)), T,
                            cfg.tol);
}

VolumeReport compute(const LoadedModel& m, const RunConfig& cfg, int N) {
  switch (cfg.mode) {
    case Mode::Continuous:
      return continuous_report(m, cfg);
    case Mode::Narrow:
      return narrow_report(m, N, cfg.route, cfg.tol);
    case Mode::Negative: {
      const Diagonalization d = eigen_of(m, TimeDomain::Discrete, cfg.tol);
      if (d.spectrum != SpectrumClass::AllNegativeDistinct) {
        throw DomainError(std::string(to_string(d.spectrum)) +
                              ": negative mode needs distinct negative eigenvalues",
                          d.spectrum);
      }
      return full_volume(*d.structure, N, cfg.route, cfg.tol);
    }
    case Mode::Discrete:
      break;
  }
  if (m.spectral) return full_volume(*m.spectral, N, cfg.route, cfg.tol);
  return full_volume(m.model, N, cfg.route, cfg.tol);
}

ordered_json terms_json(const std::vector<SubsetTerm>& terms) {
  ordered_json arr = ordered_json::array();
  for (const auto& t : terms) {
    arr.push_back({{"subset", t.subset},
                   {"sign", t.sign},
                   {"upsilon", t.upsilon_pow},
                   {"phi_in", t.phi_in},
                   {"phi_out", t.phi_out},
                   {"value", t.value}});
  }
  return arr;
}

ordered_json report_json(const VolumeReport& r) {
  ordered_json j;
  j["route"] = std::string(to_string(r.route));
  j["spectrum"] = r.spectrum ? ordered_json(std::string(to_string(*r.spectrum)))
                             : ordered_json(nullptr);
  j["volume"] = r.volume;
  j["normalized_sum"] = number_or_null(r.normalized_sum);
  j["terms"] = terms_json(r.terms);
  j["diagnostics"] = r.diagnostics;
  return j;
}

// Normalized volume V = volume / (2^n prefactor) when an eigen structure exists.
std::optional<double> normalized(const VolumeReport& r, const std::optional<EigenStructure>& eig) {
  if (!eig) return r.normalized_sum ? std::optional(std::abs(*r.normalized_sum)) : std::nullopt;
  const double scale = std::ldexp(eig->prefactor(), eig->size());
  if (scale == 0.0) return std::nullopt;
  return r.volume / scale;
}

// Large-N limit of the normalized sum, when it exists.
std::optional<double> asymptote(const std::optional<EigenStructure>& eig, Mode mode,
                                const Tolerances& tol) {
  if (!eig) return std::nullopt;
  const std::vector<double>& l = eig->lambdas;
  try {
    if (mode == Mode::Narrow) {
      if (l.front() <= 1.0) return std::nullopt;
      std::vector<double> inv;
      double prod = 1.0;
      for (auto it = l.rbegin(); it != l.rend(); ++it) {
        inv.push_back(1.0 / *it);
        prod *= *it;
      }
      return infinite_volume_sum(inv, tol) / prod;
    }
    for (double x : l) {
      if (std::abs(x) >= 1.0) return std::nullopt;
    }
    return infinite_volume_sum(l, tol);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

template <typename F>
double median_seconds(int reps, F&& f) {
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) {
    const auto start = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

}  // namespace

std::string_view to_string(Mode mode) noexcept {
  switch (mode) {
    case Mode::Discrete:
      return "discrete";
    case Mode::Narrow:
      return "narrow";
    case Mode::Negative:
      return "negative";
    case Mode::Continuous:
      return "continuous";
  }
  return "unknown";
}

int cmd_volume(const RunConfig& cfg, std::ostream& out) {
  const LoadedModel m = load_model(cfg.model_path);
  const int N = cfg.mode == Mode::Continuous ? 0 : require_N(cfg);
  const VolumeReport r = compute(m, cfg, N);

  if (cfg.format == Format::Csv) {
    out << (cfg.mode == Mode::Continuous ? "T" : "N") << ",volume,normalized_sum\n";
    csv_row(out, {cfg.mode == Mode::Continuous ? *cfg.T : static_cast<double>(N), r.volume,
                  r.normalized_sum.value_or(kNaN)});
    return 0;
  }
  ordered_json j;
  j["command"] = "volume";
  j["mode"] = std::string(to_string(cfg.mode));
  if (cfg.mode == Mode::Continuous) {
    j["T"] = *cfg.T;
  } else {
    j["N"] = N;
  }
  const ordered_json body = report_json(r);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  write_json(out, j);
  return 0;
}

int cmd_factors(const RunConfig& cfg, std::ostream& out) {
  const LoadedModel m = load_model(cfg.model_path);
  Horizon h = Horizon::infinite();
  switch (cfg.mode) {
    case Mode::Continuous:
      h = Horizon::continuous(require_T(cfg));
      break;
    case Mode::Narrow:
      h = Horizon::narrow(require_N(cfg));
      break;
    default:
      if (cfg.N) h = Horizon::finite(*cfg.N);
  }
  const Diagonalization d = eigen_of(m, domain_of(cfg.mode), cfg.tol);
  const EigenStructure& eig = require_structure(d);
  const FactorReport f = capability_factors(eig, h, cfg.tol);

  if (cfg.format == Format::Csv) {
    out << "i,lambda,beta,F1,F2,F3\n";
    for (int i = 0; i < eig.size(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      csv_row(out, {static_cast<double>(i + 1), eig.lambdas[k], eig.betas[k], f.shape.F1,
                    f.F2[k], f.F3[k]});
    }
    return 0;
  }
  ordered_json pairs = ordered_json::array();
  for (Eigen::Index i = 0; i < f.shape.pairs.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index k = 0; k < f.shape.pairs.cols(); ++k) row.push_back(f.shape.pairs(i, k));
    pairs.push_back(row);
  }
  ordered_json j;
  j["command"] = "factors";
  j["horizon"] = {{"kind", std::string(to_string(h.kind))}, {"value", h.value}};
  j["spectrum"] = std::string(to_string(d.spectrum));
  j["lambda"] = eig.lambdas;
  j["beta"] = eig.betas;
  j["F1"] = f.shape.F1;
  j["F1_plus"] = f.shape.F1_plus;
  j["F1_minus"] = f.shape.F1_minus;
  j["partition"] = {{"plus", f.shape.partition.plus}, {"minus", f.shape.partition.minus}};
  j["F1_pairs"] = pairs;
  j["F2"] = f.F2;
  j["F3"] = f.F3;
  j["normalization"] = f.normalization;
  write_json(out, j);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.mode == Mode::Continuous) throw UsageError("sweep runs over discrete horizons only");
  if (!cfg.to || *cfg.to < cfg.from) {
    throw UsageError("empty sweep range: --from must not exceed --to");
  }
  const LoadedModel m = load_model(cfg.model_path);
  std::optional<EigenStructure> eig = m.spectral;
  if (!eig && m.model.inputs() == 1) eig = diagonalize(m.model, TimeDomain::Discrete, cfg.tol).structure;
  const std::optional<double> phi = asymptote(eig, cfg.mode, cfg.tol);

  ordered_json rows = ordered_json::array();
  if (cfg.format == Format::Csv) {
    out << "N,V_N,volume" << (phi ? ",phi_inf,tail" : "") << "\n";
  }
  for (int N = cfg.from; N <= *cfg.to; ++N) {
    const VolumeReport r = compute(m, cfg, N);
    const double v = normalized(r, eig).value_or(kNaN);
    if (cfg.format == Format::Csv) {
      std::vector<double> row{static_cast<double>(N), v, r.volume};
      if (phi) {
        row.push_back(*phi);
        row.push_back(std::abs(v - *phi));
      }
      csv_row(out, row);
      continue;
    }
    ordered_json row;
    row["N"] = N;
    row["V_N"] = v;
    row["volume"] = r.volume;
    row["route"] = std::string(to_string(r.route));
    if (phi) {
      row["phi_inf"] = *phi;
      row["tail"] = std::abs(v - *phi);
    }
    rows.push_back(row);
  }
  if (cfg.format == Format::Json) {
    ordered_json j;
    j["command"] = "sweep";
    j["mode"] = std::string(to_string(cfg.mode));
    j["rows"] = rows;
    write_json(out, j);
  }
  return 0;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  if (cfg.mode != Mode::Discrete) throw UsageError("bench runs in discrete mode only");
  const LoadedModel m = load_model(cfg.model_path);
  const EigenStructure eig = require_structure(eigen_of(m, TimeDomain::Discrete, cfg.tol));
  const SpectrumClass cls = classify_spectrum(eig.lambdas, TimeDomain::Discrete, cfg.tol);
  if (cls != SpectrumClass::AllPositiveDistinct) {
    throw DomainError(std::string(to_string(cls)) + ": bench needs a spectrum admissible for "
                      "every route", cls);
  }
  const int n = eig.size();
  const int top = cfg.N.value_or(32);
  std::vector<int> ladder;
  for (int N = 8; N <= top; N *= 2) {
    if (N >= n) ladder.push_back(N);
  }
  if (ladder.empty()) ladder.push_back(std::max(top, n));

  ordered_json rows = ordered_json::array();
  if (cfg.format == Format::Csv) {
    out << "N,determinant_count,direct_seconds,recursive_seconds,analytic_seconds,direct_skipped\n";
  }
  volatile double sink = 0.0;
  for (int N : ladder) {
    const std::uint64_t count = determinant_count(N, n);
    const bool skip = cfg.budget != 0 && count > cfg.budget;
    const double direct =
        skip ? kNaN : median_seconds(cfg.reps, [&] {
          sink = sink + full_volume(eig, N, Route::Direct, cfg.tol).volume;
        });
    const double recursive = median_seconds(cfg.reps, [&] {
      sink = sink + recursive_volume_sum(eig.lambdas, N, cfg.tol);
    });
    const double analytic = median_seconds(cfg.reps, [&] {
      sink = sink + analytic_volume_sum(eig.lambdas, N, cfg.tol).sum;
    });
    if (cfg.format == Format::Csv) {
      csv_row(out, {static_cast<double>(N), static_cast<double>(count), direct, recursive,
                    analytic, skip ? 1.0 : 0.0});
      continue;
    }
    ordered_json row;
    row["N"] = N;
    row["determinant_count"] = count;
    row["direct_seconds"] = skip ? ordered_json(nullptr) : ordered_json(direct);
    row["recursive_seconds"] = recursive;
    row["analytic_seconds"] = analytic;
    row["direct_skipped"] = skip;
    rows.push_back(row);
  }
  if (cfg.format == Format::Json) {
    ordered_json j;
    j["command"] = "bench";
    j["n"] = n;
    j["reps"] = cfg.reps;
    j["budget"] = cfg.budget;
    j["rows"] = rows;
    write_json(out, j);
  }
  return 0;
}

}  // namespace zonovol::cli
