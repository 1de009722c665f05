#include "ricker/io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace ricker {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

std::string csv_cell(double v) { return format_number(v); }
std::string csv_cell(std::size_t v) { return std::to_string(v); }
std::string csv_cell(bool v) { return v ? "true" : "false"; }

std::string csv_cell(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string csv_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }
std::string csv_cell(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header.size()) throw std::logic_error("CSV row width does not match header");
  rows.push_back(std::move(row));
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json complex_json(const std::complex<double>& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json monomials_json(const std::map<MonomialIndex, double>& m) {
  Json out = Json::object();
  for (const auto& [idx, v] : m) out[monomial_key(idx)] = v;
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table) {
  write_line(out, table.header);
  for (const auto& row : table.rows) write_line(out, row);
}

void write_json(std::ostream& out, const Json& doc) { out << doc.dump(2) << '\n'; }

Json json_document(const std::string& command) {
  Json doc = Json::object();
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

std::string monomial_key(const MonomialIndex& idx) {
  return std::to_string(idx[0]) + "_" + std::to_string(idx[1]) + "_" + std::to_string(idx[2]);
}

Json to_json(const Coefficients& k) {
  return Json{{"b0", k.b0()}, {"gamma", k.gamma()}, {"c", k.c()}, {"s", k.s()}};
}

Json to_json(const ModelParams& p) {
  Json out = Json{{"r", p.r()}};
  out.update(to_json(p.coefficients()));
  return out;
}

Json to_json(State s) { return Json{{"x", s.x}, {"y", s.y}}; }

Json to_json(const PositiveFixedPoint& p) {
  return Json{{"x_star", p.x_star},
              {"y_star", p.y_star},
              {"residual", p.residual},
              {"bracket", Json::array({p.bracket.first, p.bracket.second})}};
}

Json to_json(const StabilityReport& r) {
  return Json{{"trace", r.trace},
              {"det", r.det},
              {"jury_a", r.jury_a},
              {"jury_b", r.jury_b},
              {"jury_c", r.jury_c},
              {"classification", to_string(r.classification)},
              {"non_hyperbolic", r.non_hyperbolic},
              {"globally_stable", r.globally_stable},
              {"eigenvalues", Json::array({complex_json(r.eigenvalues[0]), complex_json(r.eigenvalues[1])})}};
}

Json to_json(const RectangleLevel& l) {
  return Json{{"a_min", l.am}, {"a_max", l.aM}, {"b_min", l.bm}, {"b_max", l.bM}, {"gap", l.gap()}};
}

Json to_json(const RectangleSequence& seq) {
  Json levels = Json::array();
  for (const auto& l : seq.levels) levels.push_back(to_json(l));
  return Json{{"converged", seq.converged}, {"final_gap", seq.final_gap}, {"levels", levels}};
}

Json to_json(const PeriodResult& r) {
  Json cycle = Json::array();
  for (const auto& s : r.cycle) cycle.push_back(to_json(s));
  return Json{{"period", optional_json(r.period)},
              {"representative", to_json(r.representative)},
              {"residual", r.residual},
              {"refined", r.refined},
              {"spectral_radius", r.spectral_radius},
              {"cycle", cycle}};
}

Json to_json(const LyapunovEstimate& e) {
  return Json{{"lambda1", e.lambda1}, {"n", e.n}, {"transient", e.transient}, {"degenerate", e.degenerate}};
}

Json to_json(const SweepRow& row) {
  Json samples = Json::array();
  for (const auto& s : row.attractor_samples) samples.push_back(to_json(s));
  Json out = Json{{"r", row.r},
                  {"attractor_samples", samples},
                  {"period", optional_json(row.period)},
                  {"lambda1", optional_json(row.lambda1)},
                  {"kind", to_string(row.kind)}};
  if (!row.error.empty()) out["error"] = row.error;
  return out;
}

Json to_json(const FlipReport& f) {
  const Sigma2Variants& v = f.sigma2_variants;
  return Json{{"r_star", f.r_star},
              {"det_j", f.det_j},
              {"second_eigenvalue", -f.det_j},
              {"x_star", f.x_star},
              {"y_star", f.y_star},
              {"eta", Json::array({f.eta[0], f.eta[1], f.eta[2], f.eta[3]})},
              {"d", Json::array({f.d[0], f.d[1], f.d[2]})},
              {"a1", f.a1},
              {"a2", f.a2},
              {"sigma1", f.sigma1},
              {"sigma2", f.sigma2},
              {"sigma2_convention", to_string(f.sigma2_convention)},
              {"sigma2_variants",
               Json{{"normal_form", v.normal_form},
                    {"coefficient_form", v.coefficient_form},
                    {"printed_grouping", v.printed_grouping},
                    {"leading_cubic", v.leading_cubic}}},
              {"sigma2_sign_consistent", f.sigma2_sign_consistent},
              {"classification", to_string(f.classification)},
              {"alphas", monomials_json(f.alphas)},
              {"betas", monomials_json(f.betas)},
              {"partials", Json{{"i", monomials_json(f.partials.i)}, {"j", monomials_json(f.partials.j)}}}};
}

Json to_json(const FlipVerification& v) {
  return Json{{"ok", v.ok},
              {"cycle_side", v.cycle_side},
              {"period_cycle_side", optional_json(v.period_cycle_side)},
              {"period_other_side", optional_json(v.period_other_side)},
              {"amplitude", v.amplitude},
              {"amplitude_quarter", v.amplitude_quarter},
              {"amplitude_ratio", v.amplitude_ratio},
              {"predicted_amplitude", v.predicted_amplitude},
              {"diagnostics", v.diagnostics}};
}

Json to_json(const std::optional<Interval>& w) {
  if (!w) return nullptr;
  return Json{{"lo", w->lo}, {"hi", w->hi}, {"lo_open", w->lo_open}, {"hi_open", w->hi_open}};
}

}  // namespace ricker
