#ifndef ZONOVOL_TOOLS_COMMANDS_HPP_
#define ZONOVOL_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "zonovol/analytic.hpp"
#include "zonovol/errors.hpp"

namespace zonovol::cli {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { Discrete, Narrow, Negative, Continuous };
enum class Format { Json, Csv };

struct RunConfig {
  std::string model_path;
  std::optional<int> N;
  std::optional<double> T;
  std::optional<double> dt;
  Route route = Route::Auto;
  Mode mode = Mode::Discrete;
  Format format = Format::Json;
  Tolerances tol;
  std::uint64_t seed = 1;
  int trials = 100;
  int from = 1;
  std::optional<int> to;
  int reps = 5;
  std::uint64_t budget = 10'000'000;
};

std::string_view to_string(Mode mode) noexcept;

int cmd_volume(const RunConfig& cfg, std::ostream& out);
int cmd_factors(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_bench(const RunConfig& cfg, std::ostream& out);
int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace zonovol::cli

#endif  // ZONOVOL_TOOLS_COMMANDS_HPP_
