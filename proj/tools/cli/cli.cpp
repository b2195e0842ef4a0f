#include "cli.hpp"

#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "model_io.hpp"

namespace zonovol::cli {

namespace {

const std::map<std::string, Route> kRoutes = {{"auto", Route::Auto},
                                              {"direct", Route::Direct},
                                              {"recursive", Route::Recursive},
                                              {"analytic", Route::Analytic}};
const std::map<std::string, Mode> kModes = {{"discrete", Mode::Discrete},
                                            {"narrow", Mode::Narrow},
                                            {"negative", Mode::Negative},
                                            {"continuous", Mode::Continuous}};
const std::map<std::string, Format> kFormats = {{"json", Format::Json}, {"csv", Format::Csv}};

struct Flags {
  RunConfig cfg;
  std::string route = "auto";
  std::string mode = "discrete";
  std::string format = "json";
  int N = 0;
  double T = 0.0;
  double dt = 0.0;
  int to = 0;
};

void add_model_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--model", f.cfg.model_path, "Model file (JSON)")->required();
  sub->add_option("--mode", f.mode, "discrete, narrow, negative or continuous")
      ->check(CLI::IsMember({"discrete", "narrow", "negative", "continuous"}));
  sub->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--eps-distinct", f.cfg.tol.eps_distinct, "Distinctness tolerance")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--eps-sing", f.cfg.tol.eps_sing, "Singular-factor tolerance")
      ->check(CLI::NonNegativeNumber);
}

void add_route_flag(CLI::App* sub, Flags& f) {
  sub->add_option("--route", f.route, "auto, direct, recursive or analytic")
      ->check(CLI::IsMember({"auto", "direct", "recursive", "analytic"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Volumes of reachable and controllable regions of linear systems", "zonovol"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* volume = app.add_subcommand("volume", "Region volume by the chosen route");
  add_model_flags(volume, f);
  add_route_flag(volume, f);
  CLI::Option* vN = volume->add_option("--N", f.N, "Horizon (steps)")->check(CLI::PositiveNumber);
  CLI::Option* vT = volume->add_option("--T", f.T, "Horizon (time)")->check(CLI::NonNegativeNumber);
  CLI::Option* vdt = volume->add_option("--dt", f.dt, "Discretization step of the CT oracle")
                         ->check(CLI::PositiveNumber);
  volume->add_option("--budget", f.cfg.budget, "Determinant budget of the CT oracle");

  CLI::App* factors = app.add_subcommand("factors", "Capability factor report");
  add_model_flags(factors, f);
  CLI::Option* fN = factors->add_option("--N", f.N, "Horizon; omit for infinite time")
                        ->check(CLI::PositiveNumber);
  CLI::Option* fT = factors->add_option("--T", f.T, "Horizon (time)")->check(CLI::NonNegativeNumber);

  CLI::App* sweep = app.add_subcommand("sweep", "Volume over a range of horizons");
  add_model_flags(sweep, f);
  add_route_flag(sweep, f);
  sweep->add_option("--from", f.cfg.from, "First N")->check(CLI::PositiveNumber);
  CLI::Option* sto = sweep->add_option("--to", f.to, "Last N")->required();

  CLI::App* bench = app.add_subcommand("bench", "Time the direct, recursive and analytic routes");
  add_model_flags(bench, f);
  CLI::Option* bN = bench->add_option("--N", f.N, "Largest N of the ladder 8, 16, ...")
                        ->check(CLI::PositiveNumber);
  bench->add_option("--reps", f.cfg.reps, "Repetitions per timing")->check(CLI::PositiveNumber);
  bench->add_option("--budget", f.cfg.budget, "Direct-route determinant budget");

  CLI::App* check = app.add_subcommand("check", "Randomized identity and route cross-checks");
  check->add_option("--seed", f.cfg.seed, "Random seed");
  check->add_option("--trials", f.cfg.trials, "Trials per property");
  check->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  check->add_option("--eps-distinct", f.cfg.tol.eps_distinct, "Distinctness tolerance");
  check->add_option("--eps-sing", f.cfg.tol.eps_sing, "Singular-factor tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  RunConfig& cfg = f.cfg;
  cfg.route = kRoutes.at(f.route);
  cfg.mode = kModes.at(f.mode);
  cfg.format = kFormats.at(f.format);
  if ((volume->parsed() && vN->count()) || (factors->parsed() && fN->count()) ||
      (bench->parsed() && bN->count())) {
    cfg.N = f.N;
  }
  if ((volume->parsed() && vT->count()) || (factors->parsed() && fT->count())) cfg.T = f.T;
  if (volume->parsed() && vdt->count()) cfg.dt = f.dt;
  if (sweep->parsed() && sto->count()) cfg.to = f.to;

  try {
    if (volume->parsed()) return cmd_volume(cfg, out);
    if (factors->parsed()) return cmd_factors(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    if (bench->parsed()) return cmd_bench(cfg, out);
    return cmd_check(cfg, out, err);
  } catch (const ModelFormatError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::string msg = e.what();
    if (const auto cls = e.spectrum_class()) {
      const std::string name(to_string(*cls));
      if (msg.find(name) == std::string::npos) msg = name + ": " + msg;
    }
    err << "error: " << msg << "\n";
    return kDomain;
  }
}

}  // namespace zonovol::cli
