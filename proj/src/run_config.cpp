#include "pdc/run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pdc/errors.hpp"

namespace pdc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view s) {
  s = trim(s);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  return x;
}

std::uint64_t parse_uint(std::string_view s) {
  s = trim(s);
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec == std::errc{} && ptr == s.data() + s.size() && !s.empty()) return x;
  // Accept integral scientific notation such as 2e6.
  const double d = parse_double(s);
  if (!(d >= 0.0) || d != std::floor(d) || d > 1.8e19)
    throw std::invalid_argument("not a non-negative integer: '" + std::string(s) + "'");
  return static_cast<std::uint64_t>(d);
}

std::vector<double> parse_list(std::string_view s) {
  std::vector<double> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(parse_double(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

SellmeierCoefficients parse_sellmeier(std::string_view s) {
  const auto v = parse_list(s);
  if (v.size() != 4) throw std::invalid_argument("expected four coefficients A, B, C, D");
  return {v[0], v[1], v[2], v[3]};
}

std::string format_sellmeier(const SellmeierCoefficients& c) {
  return format_double(c.a) + ", " + format_double(c.b) + ", " + format_double(c.c) + ", " + format_double(c.d);
}

template <class Enum>
Enum parse_enum(std::string_view s, std::initializer_list<std::pair<std::string_view, Enum>> table) {
  for (const auto& [name, value] : table)
    if (s == name) return value;
  std::string allowed;
  for (const auto& [name, value] : table) allowed += (allowed.empty() ? "" : "|") + std::string(name);
  throw std::invalid_argument("'" + std::string(s) + "' is not one of " + allowed);
}

Dimension parse_dimension(std::string_view s) {
  return parse_enum<Dimension>(s, {{"1", Dimension::One}, {"2", Dimension::Two}, {"3", Dimension::Three},
                                   {"1d", Dimension::One}, {"2d", Dimension::Two}, {"3d", Dimension::Three}});
}

PhaseMatchKind parse_phase_match(std::string_view s) {
  return parse_enum<PhaseMatchKind>(s, {{"exact", PhaseMatchKind::Exact}, {"quadratic", PhaseMatchKind::Quadratic}});
}

Method parse_method(std::string_view s) {
  return parse_enum<Method>(s, {{"mc_exact", Method::McExact},
                                {"npwpa_integral", Method::NpwpaIntegral},
                                {"analytic_box", Method::AnalyticBox}});
}

SweepAxis parse_axis(std::string_view s) {
  return parse_enum<SweepAxis>(s, {{"none", SweepAxis::None},
                                   {"omega_max_norm", SweepAxis::OmegaMaxNorm},
                                   {"qmax_norm", SweepAxis::QmaxNorm},
                                   {"joint_norm", SweepAxis::JointNorm},
                                   {"beta", SweepAxis::Beta},
                                   {"sigma_um", SweepAxis::SigmaUm},
                                   {"tau_fs", SweepAxis::TauFs}});
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"model.dimension", [](RunConfig& c, std::string_view v) { c.dimension = parse_dimension(v); }},
      {"model.phase_matching", [](RunConfig& c, std::string_view v) { c.phase_matching = parse_phase_match(v); }},
      {"model.method", [](RunConfig& c, std::string_view v) { c.method = parse_method(v); }},
      {"model.alpha", [](RunConfig& c, std::string_view v) { c.alpha = parse_double(v); }},
      {"crystal.length_mm", [](RunConfig& c, std::string_view v) { c.crystal.length_mm = parse_double(v); }},
      {"crystal.pump_wavelength_nm",
       [](RunConfig& c, std::string_view v) { c.crystal.pump_wavelength_nm = parse_double(v); }},
      {"crystal.theta_deg", [](RunConfig& c, std::string_view v) { c.crystal.tuning = PumpAngle{parse_double(v)}; }},
      {"crystal.delta0_lc",
       [](RunConfig& c, std::string_view v) { c.crystal.tuning = CollinearMismatch{parse_double(v)}; }},
      {"crystal.sellmeier_o",
       [](RunConfig& c, std::string_view v) {
         c.crystal.sellmeier.ordinary = parse_sellmeier(v);
         c.crystal.sellmeier.name = "custom";
       }},
      {"crystal.sellmeier_e",
       [](RunConfig& c, std::string_view v) {
         c.crystal.sellmeier.extraordinary = parse_sellmeier(v);
         c.crystal.sellmeier.name = "custom";
       }},
      {"pump.sigma_um", [](RunConfig& c, std::string_view v) { c.pump.sigma_um = parse_double(v); }},
      {"pump.tau_fs", [](RunConfig& c, std::string_view v) { c.pump.tau_fs = parse_double(v); }},
      {"pump.gain", [](RunConfig& c, std::string_view v) { c.pump.gain = parse_double(v); }},
      {"limits.qmax_norm", [](RunConfig& c, std::string_view v) { c.q_max = {parse_double(v), true}; }},
      {"limits.qmax_per_um", [](RunConfig& c, std::string_view v) { c.q_max = {parse_double(v), false}; }},
      {"limits.omega_max_norm", [](RunConfig& c, std::string_view v) { c.omega_max = {parse_double(v), true}; }},
      {"limits.omega_max_rad_per_s",
       [](RunConfig& c, std::string_view v) { c.omega_max = {parse_double(v), false}; }},
      {"mc.samples_n", [](RunConfig& c, std::string_view v) { c.mc.samples_n = parse_uint(v); }},
      {"mc.samples_b", [](RunConfig& c, std::string_view v) { c.mc.samples_b = parse_uint(v); }},
      {"mc.seed", [](RunConfig& c, std::string_view v) { c.mc.seed = parse_uint(v); }},
      {"mc.shards",
       [](RunConfig& c, std::string_view v) {
         const auto s = parse_uint(v);
         if (s == 0 || s > 1u << 20) throw std::invalid_argument("shards must be in [1, 2^20]");
         c.mc.shards = static_cast<std::uint32_t>(s);
       }},
      {"sweep.axis", [](RunConfig& c, std::string_view v) { c.axis = parse_axis(v); }},
      {"sweep.values", [](RunConfig& c, std::string_view v) { c.values = parse_list(v); }},
      {"output.csv",
       [](RunConfig& c, std::string_view v) {
         if (v.empty()) throw std::invalid_argument("empty path");
         c.csv = std::string(v);
       }},
  };
  return table;
}

void check_semantics(const RunConfig& c, std::vector<std::string>& issues) {
  auto positive = [&](double x, const char* key) {
    if (!(x > 0.0) || !std::isfinite(x)) issues.push_back(std::string(key) + ": must be positive and finite");
  };
  positive(c.alpha, "model.alpha");
  positive(c.crystal.length_mm, "crystal.length_mm");
  positive(c.crystal.pump_wavelength_nm, "crystal.pump_wavelength_nm");
  positive(c.pump.sigma_um, "pump.sigma_um");
  positive(c.pump.tau_fs, "pump.tau_fs");
  positive(c.pump.gain, "pump.gain");
  if (!(c.q_max.value > 0.0)) issues.push_back("limits.qmax: must be positive");
  if (!(c.omega_max.value > 0.0)) issues.push_back("limits.omega_max: must be positive");
  if (c.mc.samples_n < mc::kMinSamples) issues.push_back("mc.samples_n: below the minimum of 10000");
  if (c.mc.samples_b < mc::kMinSamples) issues.push_back("mc.samples_b: below the minimum of 10000");
  if (c.axis == SweepAxis::None && !c.values.empty()) issues.push_back("sweep.values: given without sweep.axis");
  if (c.axis != SweepAxis::None && c.values.empty()) issues.push_back("sweep.values: empty grid");
  for (double v : c.values)
    if (!(v > 0.0) || !std::isfinite(v)) {
      issues.push_back("sweep.values: every value must be positive and finite");
      break;
    }
  const bool normalized_axis = c.axis == SweepAxis::OmegaMaxNorm || c.axis == SweepAxis::QmaxNorm ||
                               c.axis == SweepAxis::JointNorm;
  if (normalized_axis && c.dimension == Dimension::One && c.axis == SweepAxis::QmaxNorm)
    issues.push_back("sweep.axis: qmax_norm has no effect in 1D");
  if (normalized_axis && c.dimension == Dimension::Two && c.axis == SweepAxis::OmegaMaxNorm)
    issues.push_back("sweep.axis: omega_max_norm has no effect in 2D");
  if (c.method == Method::AnalyticBox && c.phase_matching == PhaseMatchKind::Exact)
    issues.push_back("model.method: analytic_box needs phase_matching = quadratic");
}

}  // namespace

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::OmegaMaxNorm: return "omega_max_norm";
    case SweepAxis::QmaxNorm: return "qmax_norm";
    case SweepAxis::JointNorm: return "joint_norm";
    case SweepAxis::Beta: return "beta";
    case SweepAxis::SigmaUm: return "sigma_um";
    case SweepAxis::TauFs: return "tau_fs";
  }
  return "none";
}

bool RunConfig::operator==(const RunConfig& o) const {
  return dimension == o.dimension && phase_matching == o.phase_matching && method == o.method &&
         alpha == o.alpha && crystal == o.crystal && pump == o.pump && q_max == o.q_max &&
         omega_max == o.omega_max && mc.samples_n == o.mc.samples_n && mc.samples_b == o.mc.samples_b &&
         mc.seed == o.mc.seed && mc.shards == o.mc.shards && axis == o.axis && values == o.values && csv == o.csv;
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::vector<std::string> issues;
  std::set<std::string, std::less<>> seen;
  bool angle = false;
  bool mismatch = false;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back(where + "expected 'section.key = value'");
      continue;
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) {
      issues.push_back(where + "unknown key '" + std::string(key) + "'");
      continue;
    }
    if (!seen.insert(std::string(key)).second) {
      issues.push_back(where + "duplicate key '" + std::string(key) + "'");
      continue;
    }
    angle = angle || key == "crystal.theta_deg";
    mismatch = mismatch || key == "crystal.delta0_lc";
    try {
      it->second(c, value);
    } catch (const std::invalid_argument& e) {
      issues.push_back(where + std::string(key) + ": " + e.what());
    }
  }
  if (angle && mismatch) issues.push_back("crystal: give either theta_deg or delta0_lc, not both");
  if (seen.contains("limits.qmax_norm") && seen.contains("limits.qmax_per_um"))
    issues.push_back("limits: give either qmax_norm or qmax_per_um, not both");
  if (seen.contains("limits.omega_max_norm") && seen.contains("limits.omega_max_rad_per_s"))
    issues.push_back("limits: give either omega_max_norm or omega_max_rad_per_s, not both");
  check_semantics(c, issues);
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot read config '" + path.string() + "'"});
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  auto put = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
  put("model.dimension", std::to_string(to_int(c.dimension)));
  put("model.phase_matching", to_string(c.phase_matching));
  put("model.method", to_string(c.method));
  put("model.alpha", format_double(c.alpha));
  put("crystal.length_mm", format_double(c.crystal.length_mm));
  put("crystal.pump_wavelength_nm", format_double(c.crystal.pump_wavelength_nm));
  if (const auto* a = std::get_if<PumpAngle>(&c.crystal.tuning))
    put("crystal.theta_deg", format_double(a->degrees));
  else
    put("crystal.delta0_lc", format_double(std::get<CollinearMismatch>(c.crystal.tuning).delta0_lc));
  if (c.crystal.sellmeier != SellmeierSet::bbo()) {
    put("crystal.sellmeier_o", format_sellmeier(c.crystal.sellmeier.ordinary));
    put("crystal.sellmeier_e", format_sellmeier(c.crystal.sellmeier.extraordinary));
  }
  put("pump.sigma_um", format_double(c.pump.sigma_um));
  put("pump.tau_fs", format_double(c.pump.tau_fs));
  put("pump.gain", format_double(c.pump.gain));
  put(c.q_max.normalized ? "limits.qmax_norm" : "limits.qmax_per_um", format_double(c.q_max.value));
  put(c.omega_max.normalized ? "limits.omega_max_norm" : "limits.omega_max_rad_per_s",
      format_double(c.omega_max.value));
  put("mc.samples_n", std::to_string(c.mc.samples_n));
  put("mc.samples_b", std::to_string(c.mc.samples_b));
  put("mc.seed", std::to_string(c.mc.seed));
  put("mc.shards", std::to_string(c.mc.shards));
  put("sweep.axis", to_string(c.axis));
  if (!c.values.empty()) {
    std::string list;
    for (double v : c.values) list += (list.empty() ? "" : ", ") + format_double(v);
    put("sweep.values", list);
  }
  put("output.csv", c.csv);
  return out.str();
}

std::vector<double> sweep_points(const RunConfig& c) {
  if (c.axis == SweepAxis::None) return {std::numeric_limits<double>::quiet_NaN()};
  return c.values;
}

ModelSpec model_at(const RunConfig& c, double v) {
  ModelSpec spec;
  spec.dimension = c.dimension;
  spec.phase_matching = c.phase_matching;
  spec.method = c.method;
  spec.alpha = c.alpha;
  spec.crystal = c.crystal;
  spec.pump = c.pump;
  const DispersionScales sc = derive_scales(c.crystal);
  Cutoff q = c.q_max;
  Cutoff w = c.omega_max;
  switch (c.axis) {
    case SweepAxis::None: break;
    case SweepAxis::OmegaMaxNorm: w = {v, true}; break;
    case SweepAxis::QmaxNorm: q = {v, true}; break;
    case SweepAxis::JointNorm: q = w = {v, true}; break;
    case SweepAxis::Beta: spec.pump = pump_for_beta(v, sc, c.pump.gain); break;
    case SweepAxis::SigmaUm: spec.pump.sigma_um = v; break;
    case SweepAxis::TauFs: spec.pump.tau_fs = v; break;
  }
  spec.limits.q_max = q.normalized ? q.value * sc.q0_per_um : q.value;
  spec.limits.omega_max = w.normalized ? w.value * sc.omega0_rad_per_s : w.value;
  return spec;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig3a", "fig4", "fig5", "fig6", "fig7", "fig8"};
  return names;
}

RunConfig preset(std::string_view name) {
  RunConfig c;
  c.crystal.tuning = CollinearMismatch{0.0};
  c.pump = {600.0, 1000.0, 1e-3};
  c.csv = std::string(name) + ".csv";
  if (name == "fig3a") {
    c.phase_matching = PhaseMatchKind::Quadratic;
    c.axis = SweepAxis::OmegaMaxNorm;
    c.values = {0.5, 1, 1.5, 2, 3, 4};
  } else if (name == "fig4") {
    c.phase_matching = PhaseMatchKind::Exact;
    c.omega_max = {4.0, true};
    c.axis = SweepAxis::Beta;
    c.values = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1, 2, 5, 10};
  } else if (name == "fig5") {
    c.dimension = Dimension::Two;
    c.phase_matching = PhaseMatchKind::Exact;
    c.axis = SweepAxis::QmaxNorm;
    c.values = {0.5, 1, 1.5, 2, 2.5, 3, 4, 5};
  } else if (name == "fig6" || name == "fig8") {
    c.phase_matching = PhaseMatchKind::Exact;
    c.crystal.tuning = CollinearMismatch{23.38};
    c.omega_max = {4.0, true};
    c.axis = SweepAxis::QmaxNorm;
    c.values = {0.5, 1, 2, 3, 4, 4.835, 6, 7};
  } else if (name == "fig7") {
    c.method = Method::AnalyticBox;
    c.axis = SweepAxis::JointNorm;
    c.values = {0.3, 0.5, 1, 1.5, 2, 2.5, 3, 3.5, 4};
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError({"unknown preset '" + std::string(name) + "' (known: " + known + ")"});
  }
  return c;
}

}  // namespace pdc
