// Command-line front end.
//
// Settings come from three layers: built-in defaults, an optional config file
// (--config, flat "key = value" lines, '#' comments) and command-line flags,
// with flags winning. Config keys are the long flag names without the leading
// dashes; '_' and '-' are interchangeable.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ricker/center_manifold.hpp"
#include "ricker/model.hpp"

namespace ricker::cli {

enum class Command {
  simulate,
  fixed_points,
  stability,
  global_check,
  nullcline_verify,
  flip,
  sweep,
  lyapunov,
  detect_period,
  thresholds,
};

std::string to_string(Command c);
std::optional<Command> parse_command(const std::string& name);

/// Whether the command evaluates the model at a single r (and so needs r in --params).
bool needs_r(Command c);

enum class OutputFormat { csv, json };

/// Invalid invocation. The message names the offending flag; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter values from --params; "skip" leaves a slot empty. "r0" is accepted for r.
struct ParamSpec {
  std::optional<double> r;
  std::optional<double> b0;
  std::optional<double> gamma;
  std::optional<double> c;
  std::optional<double> s;
};

ParamSpec parse_params(const std::string& text);

/// A fully resolved invocation; every field has its per-command default applied.
struct RunConfig {
  Command command = Command::simulate;
  ParamSpec params;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> output_path;

  State start = State{1.0, 1.0};
  std::size_t n = 200;
  std::size_t transient = 0;

  double r_from = 0.0;
  double r_to = 0.0;
  bool r_range_default = true;  ///< thresholds: derive the range from the flip point
  std::size_t steps = 201;
  std::size_t samples = 100;
  std::size_t threads = 1;
  bool with_lyapunov = false;
  std::size_t lyapunov_n = 100000;
  std::size_t lyapunov_transient = 100000;

  std::size_t cap = 64;
  double tol = 1e-6;
  double newton_tol = 1e-11;

  std::size_t levels = 10000;
  double level_tol = 1e-10;

  Sigma2Convention sigma2 = kDefaultSigma2;
  std::optional<std::pair<double, double>> bracket;
  bool verify = false;
  double delta = 0.05;

  double grid_step = 1e-3;
  std::size_t max_period = 16;
  double r_tol = 1e-5;
  double lambda_min = 0.01;

  /// Model parameters; throws UsageError naming --params when a value is
  /// missing or out of range.
  ModelParams model() const;
  Coefficients coefficients() const;
};

/// --help was requested; the text is the usage message.
struct HelpRequested {
  std::string text;
};

/// Parses argv (argv[0] is the program name). Throws UsageError.
std::variant<RunConfig, HelpRequested> parse_args(const std::vector<std::string>& args);

/// Reads a config file into key/value pairs. Throws UsageError on syntax
/// errors and std::ios_base::failure when the file cannot be read.
std::map<std::string, std::string> read_config(const std::string& path);

/// Runs the analysis and writes the result to `out`. Returns the exit code:
/// 0 success, 1 analysis failure (message on `err`).
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full entry point: parse, run, write to stdout or --output. Exit codes
/// 0 success, 1 analysis failure, 2 usage error, 3 I/O failure.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ricker::cli
