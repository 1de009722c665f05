#include "ricker/cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>

#include "ricker/fixed_points.hpp"
#include "ricker/io.hpp"
#include "ricker/nullclines.hpp"
#include "ricker/orbit_analysis.hpp"

namespace ricker::cli {

namespace {

struct OptionSpec {
  const char* key;
  const char* help;
  bool is_flag = false;
};

// Every accepted setting. Flag --key and config key `key` are the same setting.
const std::vector<OptionSpec> kOptions = {
    {"params", "model parameters: r=..,b0=..,gamma=..,c=..,s=.. (r0 alias; value 'skip' leaves it unset)"},
    {"format", "csv or json (default: json for flip, csv otherwise)"},
    {"output", "write to this file instead of stdout"},
    {"start", "initial state x,y (default 1,1)"},
    {"n", "iterates to record (simulate: 200, lyapunov: 1000000)"},
    {"transient", "iterates discarded first (simulate: 0, thresholds: 100000, others: 10000)"},
    {"r-from", "lower end of the r range (sweep: 2.5, thresholds: r* - 0.05)"},
    {"r-to", "upper end of the r range (sweep: 3.5, thresholds: r* + 0.6)"},
    {"steps", "r grid points in a sweep (default 201)"},
    {"samples", "attractor samples kept per sweep row (default 100)"},
    {"threads", "worker threads for sweep (default 1)"},
    {"with-lyapunov", "sweep: also estimate lambda1 per row", true},
    {"lyapunov-n", "iterates per lambda1 estimate in sweep/thresholds (100000 / 200000)"},
    {"lyapunov-transient", "thresholds: transient before the chaos lambda1 estimate (default 100000)"},
    {"cap", "largest period searched (default 64)"},
    {"tol", "recurrence tolerance for period detection (default 1e-6)"},
    {"newton-tol", "Newton refinement tolerance for cycles (default 1e-11)"},
    {"levels", "nullcline-verify: maximum rectangle levels (default 10000)"},
    {"level-tol", "nullcline-verify: gap at which iteration stops (default 1e-10)"},
    {"sigma2", "flip: sigma2 convention leading_cubic|normal_form|coefficient_form|printed_grouping"},
    {"bracket", "flip: r search bracket lo,hi (default r_min + 1e-6, r_min + 50)"},
    {"verify", "flip: confirm the classification by simulation", true},
    {"delta", "flip: distance from r* used by --verify (default 0.05)"},
    {"grid-step", "thresholds: r scan spacing (default 0.001)"},
    {"max-period", "thresholds: largest period whose doubling is reported (default 16)"},
    {"r-tol", "thresholds: bisection width (default 1e-5)"},
    {"lambda-min", "thresholds: lambda1 above which a point counts as chaotic (default 0.01)"},
};

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return key;
}

bool known_key(const std::string& key) {
  if (key == "command") return true;
  return std::any_of(kOptions.begin(), kOptions.end(), [&](const OptionSpec& o) { return key == o.key; });
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& flag, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (t.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw UsageError(flag + ": expected a finite number, got '" + text + "'");
  return v;
}

std::size_t parse_count(const std::string& flag, const std::string& text, std::size_t min_value) {
  const std::string t = trim(text);
  double as_double = 0.0;
  std::size_t v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    // Accept integral values written in scientific notation, e.g. 1e6.
    as_double = parse_double(flag, text);
    if (as_double < 0 || as_double != std::floor(as_double) || as_double > 1e15)
      throw UsageError(flag + ": expected a non-negative integer, got '" + text + "'");
    v = static_cast<std::size_t>(as_double);
  }
  if (v < min_value)
    throw UsageError(flag + ": must be at least " + std::to_string(min_value) + ", got '" + text + "'");
  return v;
}

double parse_positive(const std::string& flag, const std::string& text) {
  const double v = parse_double(flag, text);
  if (!(v > 0.0)) throw UsageError(flag + ": must be positive, got '" + text + "'");
  return v;
}

std::pair<double, double> parse_pair(const std::string& flag, const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw UsageError(flag + ": expected two comma-separated numbers, got '" + text + "'");
  return {parse_double(flag, text.substr(0, comma)), parse_double(flag, text.substr(comma + 1))};
}

bool parse_bool(const std::string& flag, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw UsageError(flag + ": expected true or false, got '" + text + "'");
}

void require_param(const std::optional<double>& v, const char* name) {
  if (!v) throw UsageError(std::string("--params: missing parameter '") + name + "'");
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::fixed_points: return "fixed-points";
    case Command::stability: return "stability";
    case Command::global_check: return "global-check";
    case Command::nullcline_verify: return "nullcline-verify";
    case Command::flip: return "flip";
    case Command::sweep: return "sweep";
    case Command::lyapunov: return "lyapunov";
    case Command::detect_period: return "detect-period";
    case Command::thresholds: return "thresholds";
  }
  return "unknown";
}

std::optional<Command> parse_command(const std::string& name) {
  for (auto c : {Command::simulate, Command::fixed_points, Command::stability, Command::global_check,
                 Command::nullcline_verify, Command::flip, Command::sweep, Command::lyapunov,
                 Command::detect_period, Command::thresholds})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

bool needs_r(Command c) {
  return c != Command::flip && c != Command::sweep && c != Command::thresholds;
}

ParamSpec parse_params(const std::string& text) {
  ParamSpec spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw UsageError("--params: expected name=value, got '" + item + "'");
    const std::string name = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    std::optional<double>* slot = nullptr;
    if (name == "r" || name == "r0") slot = &spec.r;
    else if (name == "b0") slot = &spec.b0;
    else if (name == "gamma") slot = &spec.gamma;
    else if (name == "c") slot = &spec.c;
    else if (name == "s") slot = &spec.s;
    else throw UsageError("--params: unknown parameter '" + name + "'");
    if (value == "skip") slot->reset();
    else *slot = parse_double("--params " + name, value);
  }
  return spec;
}

Coefficients RunConfig::coefficients() const {
  require_param(params.b0, "b0");
  require_param(params.gamma, "gamma");
  require_param(params.c, "c");
  require_param(params.s, "s");
  try {
    return Coefficients(*params.b0, *params.gamma, *params.c, *params.s);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--params: ") + e.what());
  }
}

ModelParams RunConfig::model() const {
  const Coefficients k = coefficients();
  require_param(params.r, "r");
  try {
    return ModelParams(*params.r, k);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--params: ") + e.what());
  }
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open config file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "--config " + path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw UsageError(where + ": expected 'key = value'");
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    if (!known_key(key)) throw UsageError(where + ": unknown key '" + key + "'");
    if (key == "config") throw UsageError(where + ": config files cannot nest");
    out[key] = trim(line.substr(eq + 1));
  }
  if (in.bad()) throw std::ios_base::failure("error reading config file '" + path + "'");
  return out;
}

std::variant<RunConfig, HelpRequested> parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Ricker predator-prey map: simulation, stability and bifurcation analysis",
               args.empty() ? "ricker_cli" : args.front()};
  std::string command_name;
  std::string config_path;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, bool> flag_switches;

  app.add_option("command", command_name,
                 "simulate | fixed-points | stability | global-check | nullcline-verify | flip | "
                 "sweep | lyapunov | detect-period | thresholds");
  app.add_option("--config", config_path, "read settings from a key = value file");
  for (const auto& o : kOptions) {
    const std::string name = std::string("--") + o.key;
    if (o.is_flag) app.add_flag(name, flag_switches[o.key], o.help);
    else app.add_option(name, flag_values[o.key], o.help);
  }

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    return HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  std::map<std::string, std::string> settings;
  if (app.count("--config")) {
    try {
      settings = read_config(config_path);
    } catch (const std::ios_base::failure& e) {
      throw UsageError(std::string("--config: ") + e.what());
    }
  }
  for (const auto& o : kOptions) {
    const std::string name = std::string("--") + o.key;
    if (!app.count(name)) continue;
    settings[o.key] = o.is_flag ? "true" : flag_values[o.key];
  }
  if (app.count("command")) settings["command"] = command_name;

  auto has = [&](const char* key) { return settings.count(key) > 0; };
  auto get = [&](const char* key) { return settings.at(key); };
  auto flag = [](const char* key) { return std::string("--") + key; };

  RunConfig cfg;
  if (!has("command")) throw UsageError("command: missing subcommand (see --help)");
  const auto cmd = parse_command(get("command"));
  if (!cmd) throw UsageError("command: unknown subcommand '" + get("command") + "'");
  cfg.command = *cmd;

  if (!has("params")) throw UsageError("--params: missing (expected r=..,b0=..,gamma=..,c=..,s=..)");
  cfg.params = parse_params(get("params"));
  if (needs_r(cfg.command)) cfg.model();
  else cfg.coefficients();

  cfg.format = cfg.command == Command::flip ? OutputFormat::json : OutputFormat::csv;
  if (has("format")) {
    const std::string f = get("format");
    if (f == "csv") cfg.format = OutputFormat::csv;
    else if (f == "json") cfg.format = OutputFormat::json;
    else throw UsageError("--format: expected csv or json, got '" + f + "'");
  }
  if (has("output")) {
    if (get("output").empty()) throw UsageError("--output: empty path");
    cfg.output_path = get("output");
  }

  // Per-command defaults.
  switch (cfg.command) {
    case Command::simulate:
      cfg.n = 200;
      cfg.transient = 0;
      break;
    case Command::lyapunov:
      cfg.n = 1000000;
      cfg.transient = 10000;
      break;
    case Command::thresholds:
      cfg.transient = 100000;
      cfg.lyapunov_n = 200000;
      break;
    case Command::sweep:
      cfg.r_from = 2.5;
      cfg.r_to = 3.5;
      cfg.transient = 10000;
      break;
    default:
      cfg.transient = 10000;
      break;
  }

  if (has("start")) {
    const auto [x, y] = parse_pair("--start", get("start"));
    if (x < 0 || y < 0) throw UsageError("--start: densities must be non-negative");
    cfg.start = {x, y};
  }
  if (has("n")) cfg.n = parse_count("--n", get("n"), cfg.command == Command::lyapunov ? 10000 : 1);
  if (has("transient")) cfg.transient = parse_count("--transient", get("transient"), 0);
  if (has("r-from")) {
    cfg.r_from = parse_double(flag("r-from"), get("r-from"));
    cfg.r_range_default = false;
  }
  if (has("r-to")) {
    cfg.r_to = parse_double(flag("r-to"), get("r-to"));
    cfg.r_range_default = false;
  }
  if (cfg.command == Command::thresholds && has("r-from") != has("r-to"))
    throw UsageError("--r-from: thresholds needs both --r-from and --r-to, or neither");
  if (!cfg.r_range_default && !(cfg.r_from < cfg.r_to))
    throw UsageError("--r-to: must exceed --r-from");
  if (has("steps")) cfg.steps = parse_count("--steps", get("steps"), 2);
  if (has("samples")) cfg.samples = parse_count("--samples", get("samples"), 0);
  if (has("threads")) cfg.threads = parse_count("--threads", get("threads"), 1);
  if (has("with-lyapunov")) cfg.with_lyapunov = parse_bool("--with-lyapunov", get("with-lyapunov"));
  if (has("lyapunov-n")) cfg.lyapunov_n = parse_count("--lyapunov-n", get("lyapunov-n"), 10000);
  if (has("lyapunov-transient"))
    cfg.lyapunov_transient = parse_count("--lyapunov-transient", get("lyapunov-transient"), 0);
  if (has("cap")) cfg.cap = parse_count("--cap", get("cap"), 1);
  if (has("tol")) cfg.tol = parse_positive("--tol", get("tol"));
  if (has("newton-tol")) cfg.newton_tol = parse_positive("--newton-tol", get("newton-tol"));
  if (has("levels")) cfg.levels = parse_count("--levels", get("levels"), 1);
  if (has("level-tol")) cfg.level_tol = parse_positive("--level-tol", get("level-tol"));
  if (has("sigma2")) {
    const auto conv = parse_sigma2_convention(get("sigma2"));
    if (!conv) throw UsageError("--sigma2: unknown convention '" + get("sigma2") + "'");
    cfg.sigma2 = *conv;
  }
  if (has("bracket")) {
    cfg.bracket = parse_pair("--bracket", get("bracket"));
    if (!(cfg.bracket->first < cfg.bracket->second))
      throw UsageError("--bracket: lower end must be below upper end");
  }
  if (has("verify")) cfg.verify = parse_bool("--verify", get("verify"));
  if (has("delta")) cfg.delta = parse_positive("--delta", get("delta"));
  if (has("grid-step")) cfg.grid_step = parse_positive("--grid-step", get("grid-step"));
  if (has("max-period")) cfg.max_period = parse_count("--max-period", get("max-period"), 1);
  if (has("r-tol")) cfg.r_tol = parse_positive("--r-tol", get("r-tol"));
  if (has("lambda-min")) cfg.lambda_min = parse_double("--lambda-min", get("lambda-min"));
  return cfg;
}

namespace {

struct Output {
  Json json;
  CsvTable csv;
};

PeriodOptions period_options(const RunConfig& cfg) {
  PeriodOptions po;
  po.transient = cfg.transient;
  po.cap = cfg.cap;
  po.tol = cfg.tol;
  po.newton_tol = cfg.newton_tol;
  return po;
}

Output run_simulate(const RunConfig& cfg, std::ostream&) {
  const ModelParams params = cfg.model();
  const Orbit orbit = iterate(params, cfg.start, cfg.n, cfg.transient);
  Output o;
  o.csv.header = {"k", "x", "y"};
  Json samples = Json::array();
  for (std::size_t i = 0; i < orbit.samples.size(); ++i) {
    const std::size_t k = orbit.transient_discarded + i + 1;
    const State s = orbit.samples[i];
    o.csv.add({csv_cell(k), csv_cell(s.x), csv_cell(s.y)});
    samples.push_back(Json{{"k", k}, {"x", s.x}, {"y", s.y}});
  }
  o.json["params"] = to_json(params);
  o.json["start"] = to_json(cfg.start);
  o.json["transient"] = orbit.transient_discarded;
  o.json["samples"] = samples;
  return o;
}

Output run_fixed_points(const RunConfig& cfg, std::ostream&) {
  const ModelParams params = cfg.model();
  Output o;
  o.csv.header = {"kind", "x", "y", "residual"};
  Json points = Json::array();
  auto add = [&](const char* kind, double x, double y, double residual) {
    o.csv.add({kind, csv_cell(x), csv_cell(y), csv_cell(residual)});
    points.push_back(Json{{"kind", kind}, {"x", x}, {"y", y}, {"residual", residual}});
  };
  add("trivial", 0.0, 0.0, 0.0);
  if (params.r() > 0.0) add("predator_free", params.r(), 0.0, 0.0);
  std::optional<PositiveFixedPoint> p;
  try {
    p = solve_positive(params);
  } catch (const NoPositiveFixedPoint&) {
  }
  if (p) add("positive", p->x_star, p->y_star, p->residual);
  const auto r_min = existence_threshold(params.coefficients());
  o.json["params"] = to_json(params);
  o.json["r_min"] = r_min ? Json(*r_min) : Json(nullptr);
  o.json["fixed_points"] = points;
  return o;
}

Output run_stability(const RunConfig& cfg, std::ostream&) {
  const ModelParams params = cfg.model();
  Output o;
  o.csv.header = {"kind", "x", "y", "trace", "det", "jury_a", "jury_b", "jury_c",
                  "classification", "non_hyperbolic", "globally_stable"};
  Json reports = Json::array();
  auto add = [&](const char* kind, State p, const StabilityReport& r) {
    o.csv.add({kind, csv_cell(p.x), csv_cell(p.y), csv_cell(r.trace), csv_cell(r.det), csv_cell(r.jury_a),
               csv_cell(r.jury_b), csv_cell(r.jury_c), to_string(r.classification),
               csv_cell(r.non_hyperbolic), csv_cell(r.globally_stable)});
    Json j = Json{{"kind", kind}, {"x", p.x}, {"y", p.y}};
    j.update(to_json(r));
    reports.push_back(j);
  };
  add("trivial", {0.0, 0.0}, classify_trivial(params));
  if (params.r() > 0.0) add("predator_free", {params.r(), 0.0}, classify_predator_free(params));
  try {
    const PositiveFixedPoint p = solve_positive(params);
    add("positive", p.state(), classify_positive(params, p));
  } catch (const NoPositiveFixedPoint&) {
  }
  o.json["params"] = to_json(params);
  o.json["fixed_points"] = reports;
  return o;
}

Output run_global_check(const RunConfig& cfg, std::ostream&) {
  const ModelParams params = cfg.model();
  const Coefficients& k = params.coefficients();
  const PositiveFixedPoint p = solve_positive(params);
  const auto r_min = existence_threshold(k);
  const double local_threshold = local_criterion_threshold(k);
  const bool local_ok = sufficient_local_criterion(params);
  const double margin = global_inequality_margin(params);
  const bool global_ok = global_stability_criterion(params);
  const double bound = corollary_bound(k, params.r());
  const auto window = corollary_sufficient_window(k);

  Output o;
  o.csv.header = {"r", "r_min", "x_star", "y_star", "local_threshold", "sufficient_local",
                  "global_margin", "global_criterion", "corollary_bound", "window_lo", "window_hi"};
  o.csv.add({csv_cell(params.r()), csv_cell(r_min), csv_cell(p.x_star), csv_cell(p.y_star),
             csv_cell(local_threshold), csv_cell(local_ok), csv_cell(margin), csv_cell(global_ok),
             csv_cell(bound), window ? csv_cell(window->lo) : "", window ? csv_cell(window->hi) : ""});
  o.json["params"] = to_json(params);
  o.json["r_min"] = r_min ? Json(*r_min) : Json(nullptr);
  o.json["fixed_point"] = to_json(p);
  o.json["local_threshold"] = local_threshold;
  o.json["sufficient_local"] = local_ok;
  o.json["global_margin"] = margin;
  o.json["global_criterion"] = global_ok;
  o.json["corollary_bound"] = std::isfinite(bound) ? Json(bound) : Json(nullptr);
  o.json["corollary_window"] = to_json(window);
  return o;
}

Output run_nullcline_verify(const RunConfig& cfg, std::ostream& err) {
  const ModelParams params = cfg.model();
  const NullclineSet ncs(params);
  const RectangleSequence seq = rectangle_iteration(ncs, cfg.levels, cfg.level_tol);
  const State p{ncs.x_star(), ncs.y_star()};
  bool nested = true;
  bool contains_p = true;
  for (std::size_t i = 0; i < seq.levels.size(); ++i) {
    const RectangleLevel& l = seq.levels[i];
    if (!l.contains(p, 1e-12)) contains_p = false;
    if (i > 0) {
      const RectangleLevel& prev = seq.levels[i - 1];
      const double slack = 1e-12;
      if (l.am < prev.am - slack || l.aM > prev.aM + slack || l.bm < prev.bm - slack ||
          l.bM > prev.bM + slack)
        nested = false;
    }
  }
  if (!seq.converged)
    err << "nullcline-verify: rectangles did not shrink to the fixed point within " << seq.levels.size()
        << " levels (final gap " << format_number(seq.final_gap) << ")\n";

  Output o;
  o.csv.header = {"level", "a_min", "a_max", "b_min", "b_max", "gap"};
  for (std::size_t i = 0; i < seq.levels.size(); ++i) {
    const RectangleLevel& l = seq.levels[i];
    o.csv.add({csv_cell(i), csv_cell(l.am), csv_cell(l.aM), csv_cell(l.bm), csv_cell(l.bM), csv_cell(l.gap())});
  }
  o.json["params"] = to_json(params);
  o.json["x_star"] = ncs.x_star();
  o.json["y_star"] = ncs.y_star();
  o.json["x_hat"] = ncs.x_hat();
  o.json["y_lower"] = ncs.y_lower();
  o.json["nested"] = nested;
  o.json["contains_fixed_point"] = contains_p;
  o.json.update(to_json(seq));
  return o;
}

Output run_flip(const RunConfig& cfg, std::ostream&) {
  const Coefficients k = cfg.coefficients();
  const FlipReport f = flip_coefficients(k, cfg.sigma2, cfg.bracket);
  Output o;
  o.csv.header = {"r_star", "det_j", "second_eigenvalue", "x_star", "y_star", "sigma1",
                  "sigma2", "sigma2_convention", "classification"};
  o.csv.add({csv_cell(f.r_star), csv_cell(f.det_j), csv_cell(-f.det_j), csv_cell(f.x_star),
             csv_cell(f.y_star), csv_cell(f.sigma1), csv_cell(f.sigma2), to_string(f.sigma2_convention),
             to_string(f.classification)});
  o.json["coefficients"] = to_json(k);
  o.json.update(to_json(f));
  if (cfg.verify) o.json["verification"] = to_json(verify_flip_by_simulation(k, f, cfg.delta, cfg.tol));
  return o;
}

Output run_sweep(const RunConfig& cfg, std::ostream& err) {
  const Coefficients k = cfg.coefficients();
  SweepOptions so;
  so.transient = cfg.transient;
  so.start = cfg.start;
  so.with_lyapunov = cfg.with_lyapunov;
  so.lyapunov_n = cfg.lyapunov_n;
  so.period = period_options(cfg);
  so.threads = cfg.threads;
  const auto rows = sweep(k, cfg.r_from, cfg.r_to, cfg.steps, cfg.samples, so);

  Output o;
  o.csv.header = {"r", "x", "y", "period", "lambda1"};
  Json jrows = Json::array();
  for (const auto& row : rows) {
    if (!row.error.empty()) err << "sweep: r = " << format_number(row.r) << ": " << row.error << '\n';
    if (row.attractor_samples.empty())
      o.csv.add({csv_cell(row.r), "", "", csv_cell(row.period), csv_cell(row.lambda1)});
    for (const State& s : row.attractor_samples)
      o.csv.add({csv_cell(row.r), csv_cell(s.x), csv_cell(s.y), csv_cell(row.period), csv_cell(row.lambda1)});
    jrows.push_back(to_json(row));
  }
  o.json["coefficients"] = to_json(k);
  o.json["r_from"] = cfg.r_from;
  o.json["r_to"] = cfg.r_to;
  o.json["steps"] = cfg.steps;
  o.json["transient"] = cfg.transient;
  o.json["rows"] = jrows;
  return o;
}

Output run_lyapunov(const RunConfig& cfg, std::ostream&) {
  const ModelParams params = cfg.model();
  const LyapunovEstimate e = lyapunov1(params, cfg.start, cfg.n, cfg.transient);
  Output o;
  o.csv.header = {"r", "lambda1", "n", "transient", "degenerate"};
  o.csv.add({csv_cell(params.r()), csv_cell(e.lambda1), csv_cell(e.n), csv_cell(e.transient),
             csv_cell(e.degenerate)});
  o.json["params"] = to_json(params);
  o.json["start"] = to_json(cfg.start);
  o.json.update(to_json(e));
  return o;
}

Output run_detect_period(const RunConfig& cfg, std::ostream&) {
  const ModelParams params = cfg.model();
  const PeriodResult res = detect_period(params, cfg.start, period_options(cfg));
  Output o;
  o.csv.header = {"r", "period", "index", "x", "y", "residual", "refined", "spectral_radius"};
  if (res.period) {
    for (std::size_t i = 0; i < res.cycle.size(); ++i)
      o.csv.add({csv_cell(params.r()), csv_cell(res.period), csv_cell(i), csv_cell(res.cycle[i].x),
                 csv_cell(res.cycle[i].y), csv_cell(res.residual), csv_cell(res.refined),
                 csv_cell(res.spectral_radius)});
  } else {
    o.csv.add({csv_cell(params.r()), "", "", csv_cell(res.representative.x), csv_cell(res.representative.y),
               csv_cell(res.residual), csv_cell(res.refined), ""});
  }
  o.json["params"] = to_json(params);
  o.json["start"] = to_json(cfg.start);
  o.json["transient"] = cfg.transient;
  o.json["cap"] = cfg.cap;
  o.json.update(to_json(res));
  return o;
}

Output run_thresholds(const RunConfig& cfg, std::ostream&) {
  const Coefficients k = cfg.coefficients();
  double r_from = cfg.r_from;
  double r_to = cfg.r_to;
  if (cfg.r_range_default) {
    const double r_star = find_flip_r(k).r_star;
    r_from = r_star - 0.05;
    r_to = r_star + 0.6;
  }
  ChaosOptions co;
  co.period = period_options(cfg);
  co.start = cfg.start;
  co.lyapunov_n = cfg.lyapunov_n;
  co.lyapunov_transient = cfg.lyapunov_transient;
  co.lambda_min = cfg.lambda_min;
  co.r_tol = cfg.r_tol;
  const auto steps = cascade_thresholds(k, r_from, r_to, cfg.grid_step, cfg.max_period, co);

  Output o;
  o.csv.header = {"transition", "from_period", "to_period", "threshold"};
  Json jsteps = Json::array();
  for (const auto& s : steps) {
    if (s.from_period == 0) {
      o.csv.add({"chaos_onset", "", "", csv_cell(s.threshold)});
      jsteps.push_back(Json{{"transition", "chaos_onset"},
                            {"from_period", nullptr},
                            {"to_period", nullptr},
                            {"threshold", s.threshold}});
    } else {
      o.csv.add({"period_doubling", csv_cell(s.from_period), csv_cell(2 * s.from_period), csv_cell(s.threshold)});
      jsteps.push_back(Json{{"transition", "period_doubling"},
                            {"from_period", s.from_period},
                            {"to_period", 2 * s.from_period},
                            {"threshold", s.threshold}});
    }
  }
  o.json["coefficients"] = to_json(k);
  o.json["r_from"] = r_from;
  o.json["r_to"] = r_to;
  o.json["grid_step"] = cfg.grid_step;
  o.json["transient"] = cfg.transient;
  o.json["steps"] = jsteps;
  return o;
}

Output dispatch(const RunConfig& cfg, std::ostream& err) {
  switch (cfg.command) {
    case Command::simulate: return run_simulate(cfg, err);
    case Command::fixed_points: return run_fixed_points(cfg, err);
    case Command::stability: return run_stability(cfg, err);
    case Command::global_check: return run_global_check(cfg, err);
    case Command::nullcline_verify: return run_nullcline_verify(cfg, err);
    case Command::flip: return run_flip(cfg, err);
    case Command::sweep: return run_sweep(cfg, err);
    case Command::lyapunov: return run_lyapunov(cfg, err);
    case Command::detect_period: return run_detect_period(cfg, err);
    case Command::thresholds: return run_thresholds(cfg, err);
  }
  throw std::logic_error("unhandled command");
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Output o;
  try {
    o = dispatch(cfg, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << to_string(cfg.command) << ": " << e.what() << '\n';
    return 1;
  }
  if (cfg.format == OutputFormat::csv) {
    write_csv(out, o.csv);
  } else {
    Json doc = json_document(to_string(cfg.command));
    doc.update(o.json);
    write_json(out, doc);
  }
  return 0;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    auto parsed = parse_args(args);
    if (auto* help = std::get_if<HelpRequested>(&parsed)) {
      out << help->text;
      return out ? 0 : 3;
    }
    cfg = std::get<RunConfig>(parsed);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream buffer;
  const int code = run(cfg, buffer, err);
  if (code != 0) return code;

  if (cfg.output_path) {
    std::ofstream file(*cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "i/o error: cannot open '" << *cfg.output_path << "' for writing\n";
      return 3;
    }
    file << buffer.str();
    file.close();
    if (!file) {
      err << "i/o error: write to '" << *cfg.output_path << "' failed\n";
      return 3;
    }
  } else {
    out << buffer.str();
    out.flush();
    if (!out) {
      err << "i/o error: write to standard output failed\n";
      return 3;
    }
  }
  return 0;
}

}  // namespace ricker::cli
