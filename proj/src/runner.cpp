#include "pdc/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pdc/errors.hpp"

#ifndef PDC_VERSION
#define PDC_VERSION "dev"
#endif

namespace pdc {

namespace {

using nlohmann::json;

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t start = 0;
  // A trailing fragment without newline is an interrupted write and is dropped.
  for (std::size_t nl = text.find('\n'); nl != std::string::npos; nl = text.find('\n', start)) {
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError({"cannot write '" + tmp.string() + "'"});
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

json row_json(const RunRow& r, std::size_t index) {
  return {{"index", index},
          {"sweep_value", format_double(r.sweep_value)},
          {"seed", r.seed},
          {"flags", r.result.flags},
          {"npwpa", {{"satisfied", r.result.npwpa.satisfied},
                     {"marginal", r.result.npwpa.marginal},
                     {"temporal_margin", r.result.npwpa.temporal_margin},
                     {"spatial_margin", r.result.npwpa.spatial_margin}}},
          {"B_imag", format_double(r.result.B_imag)},
          {"N_err", format_double(r.result.N_err)},
          {"B_err", format_double(r.result.B_err)}};
}

json metadata(const RunConfig& config, const json& rows) {
  json seeds = json::array();
  const auto points = sweep_points(config);
  for (std::size_t i = 0; i < points.size(); ++i) seeds.push_back(point_seed(config, i));
  json m = {{"version", version()},
            {"config", serialize(config)},
            {"point_seeds", seeds},
            {"gain", format_double(config.pump.gain)},
            {"rows", rows}};
  if (config.pump.gain > kGainWarningThreshold)
    m["warnings"] = {"gain above the first-order validity threshold"};
  return m;
}

void write_factorized(const RunConfig& config, const std::filesystem::path& csv) {
  ModelSpec base = model_at(config, config.values.front());
  const auto rows = factorizability_gap(base, config.values);
  std::ostringstream out;
  out << "bandwidth_norm,K3D,K1D,K2D,product,ratio\n";
  for (const auto& r : rows)
    out << format_double(r.bandwidth) << ',' << format_double(r.k3d) << ',' << format_double(r.k1d) << ','
        << format_double(r.k2d) << ',' << format_double(r.product) << ',' << format_double(r.ratio) << '\n';
  write_atomic(factorized_path(csv), out.str());
}

}  // namespace

std::string version() { return PDC_VERSION; }

std::uint64_t point_seed(const RunConfig& config, std::size_t index) {
  return mc::mix_seed(config.mc.seed, index);
}

std::filesystem::path metadata_path(const std::filesystem::path& csv) { return csv.string() + ".meta.json"; }

std::filesystem::path factorized_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".factorized.csv");
  return p;
}

std::string csv_row(const RunRow& r) {
  std::ostringstream out;
  out << format_double(r.sweep_value) << ',' << format_double(r.result.K) << ',' << format_double(r.result.K_err)
      << ',' << format_double(r.result.N_rel) << ',' << format_double(r.result.B_rel) << ','
      << to_string(r.result.method) << ',' << to_int(r.result.dimension) << ',' << format_double(r.beta) << ','
      << (r.result.npwpa.satisfied ? 1 : 0) << ',' << r.seed << ',' << format_double(r.wall_ms);
  return out.str();
}

RunSummary run_sweep(const RunConfig& config, const RunOptions& options) {
  RunSummary summary;
  summary.csv = config.csv;
  summary.metadata = metadata_path(summary.csv);
  const auto points = sweep_points(config);
  // Resolve every point before touching the output so a bad grid leaves nothing behind.
  std::vector<ModelSpec> specs;
  for (double v : points) {
    specs.push_back(model_at(config, v));
    SchmidtModel{specs.back()};
  }

  json rows = json::array();
  std::size_t done = 0;
  if (std::filesystem::exists(summary.csv)) {
    if (!std::filesystem::exists(summary.metadata))
      throw ConfigError({"output '" + summary.csv.string() + "' exists without metadata; refusing to overwrite"});
    json old;
    try {
      std::ifstream in(summary.metadata);
      old = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError({"unreadable metadata '" + summary.metadata.string() + "': " + e.what()});
    }
    if (old.value("config", "") != serialize(config))
      throw ConfigError({"output '" + summary.csv.string() +
                         "' was produced by a different config; remove it or change output.csv"});
    const auto lines = read_lines(summary.csv);
    if (lines.empty() || lines.front() != kCsvHeader)
      throw ConfigError({"output '" + summary.csv.string() + "' has an unexpected header"});
    done = std::min(lines.size() - 1, points.size());
    for (std::size_t i = 0; i < done; ++i) {
      const auto& line = lines[i + 1];
      if (line.substr(0, line.find(',')) != format_double(points[i]))
        throw ConfigError({"output row " + std::to_string(i + 1) + " does not match the sweep grid"});
    }
    const json& old_rows = old.at("rows");
    for (std::size_t i = 0; i < done && i < old_rows.size(); ++i) rows.push_back(old_rows[i]);
    // Rewrite exactly the completed rows, discarding any interrupted tail.
    std::ostringstream keep;
    for (std::size_t i = 0; i < done + 1; ++i) keep << lines[i] << '\n';
    write_atomic(summary.csv, keep.str());
  } else {
    if (summary.csv.has_parent_path()) std::filesystem::create_directories(summary.csv.parent_path());
    write_atomic(summary.csv, std::string(kCsvHeader) + "\n");
  }
  summary.resumed = done;
  write_atomic(summary.metadata, metadata(config, rows).dump(2) + "\n");

  std::ofstream csv(summary.csv, std::ios::binary | std::ios::app);
  if (!csv) throw ConfigError({"cannot append to '" + summary.csv.string() + "'"});
  for (std::size_t i = done; i < points.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    RunRow row;
    row.sweep_value = points[i];
    row.seed = point_seed(config, i);
    const ModelSpec& spec = specs[i];
    const SchmidtModel model(spec);
    McParams params = config.mc;
    params.seed = row.seed;
    row.result = evaluate(model, params);
    row.beta = beta_parameter(spec.pump, model.scales());
    if (options.record_timing)
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    csv << csv_row(row) << '\n' << std::flush;
    rows.push_back(row_json(row, i));
    write_atomic(summary.metadata, metadata(config, rows).dump(2) + "\n");
    ++summary.computed;
    if (options.on_row) options.on_row(row);
  }
  if (config.axis == SweepAxis::JointNorm && config.method == Method::AnalyticBox &&
      config.dimension == Dimension::Three)
    write_factorized(config, summary.csv);
  return summary;
}

}  // namespace pdc
