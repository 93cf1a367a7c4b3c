// Command-line front end: predict, rank, reproduce, convert-wide.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "tensorrank/error.hpp"
#include "tensorrank/experiments/golden.hpp"
#include "tensorrank/experiments/reproduce.hpp"
#include "tensorrank/ingest.hpp"
#include "tensorrank/pipeline.hpp"

namespace fs = std::filesystem;
using namespace tensorrank;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

/// Error tagged with the pipeline stage that raised it.
struct StageError {
  std::string stage;
  std::string message;
  bool validation;
};

template <typename F>
auto stage(std::string_view name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw StageError{std::string(name), e.what(), true};
  } catch (const std::exception& e) {
    throw StageError{std::string(name), e.what(), false};
  }
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StageError{"io", "cannot write '" + path + "'", true};
  out << text;
}

struct Inputs {
  DecisionTensor data;
  ResolvedRun run;
};

Inputs load(const std::string& data_path, const std::string& config_path) {
  auto data = stage("ingest", [&] { return parse_timeseries_csv(fs::path(data_path)); });
  auto cfg = stage("ingest", [&] {
    return config_path.empty() ? RunConfig{} : parse_config(fs::path(config_path));
  });
  auto run = stage("ingest", [&] { return resolve(cfg, data); });
  return {std::move(data), std::move(run)};
}

std::string svg_bars(const RankResult& rank, const std::string& title) {
  const double width = 640, bar_h = 28, top = 40, left = 150, span = 420;
  std::ostringstream os;
  const double height = top + bar_h * static_cast<double>(rank.ordering.size()) + 20;
  double lo = 0.0, hi = 0.0;
  for (double s : rank.scores) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const double range = hi - lo > 0 ? hi - lo : 1.0;
  const double zero = left + span * (0.0 - lo) / range;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  os << "<text x=\"10\" y=\"22\" font-size=\"15\">" << title << "</text>\n";
  os << "<line x1=\"" << zero << "\" y1=\"" << top - 6 << "\" x2=\"" << zero << "\" y2=\""
     << height - 14 << "\" stroke=\"#444\"/>\n";
  for (std::size_t p = 0; p < rank.ordering.size(); ++p) {
    const auto i = rank.ordering[p];
    const double s = rank.scores[i];
    const double x = left + span * (std::min(s, 0.0) - lo) / range;
    const double w = span * std::abs(s) / range;
    const double y = top + bar_h * static_cast<double>(p);
    os << "<text x=\"10\" y=\"" << y + 18 << "\">" << p + 1 << ". " << rank.alternatives[i]
       << "</text>\n";
    os << "<rect x=\"" << x << "\" y=\"" << y + 4 << "\" width=\"" << w << "\" height=\""
       << bar_h - 8 << "\" fill=\"" << (s >= 0 ? "#3b7dd8" : "#d8643b") << "\"/>\n";
    os << "<text x=\"" << left + span + 8 << "\" y=\"" << y + 18 << "\">" << s << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

int cmd_predict(const std::string& data_path, const std::string& config_path,
                const std::string& out_path, const std::string& format,
                std::string diagnostics_path) {
  auto [data, run] = load(data_path, config_path);
  const auto fmt = stage("cli", [&] { return parse_format(format); });
  auto report = stage("predict", [&] { return predict_from_cutoff(data, run); });
  write_output(out_path, emit_tensor(report.predictions, fmt));
  if (diagnostics_path.empty() && !out_path.empty() && out_path != "-") {
    diagnostics_path = out_path + ".diagnostics.jsonl";
  }
  if (!diagnostics_path.empty()) {
    write_output(diagnostics_path, emit_diagnostics(report, Format::JsonLines));
  }
  return 0;
}

struct RankOptions {
  std::string data;
  std::string config;
  std::string method;
  std::string source = "predicted";
  std::string format = "table";
  std::string out;
  std::string intermediates_dir;
  std::string plot;
  bool emit_intermediates = false;
};

int cmd_rank(const RankOptions& o) {
  auto [data, run] = load(o.data, o.config);
  const auto fmt = stage("cli", [&] { return parse_format(o.format); });
  const auto source = stage("cli", [&] { return parse_source(o.source); });
  const auto method = o.method.empty() ? run.method : stage("cli", [&] { return parse_method(o.method); });

  auto result = stage("mcda", [&] { return run_pipeline(data, run, source, method); });

  std::string text;
  auto section = [&](const std::string& name, const std::string& body) {
    if (fmt == Format::Table) text += "## " + name + "\n";
    text += body;
    if (fmt == Format::Table) text += "\n";
  };
  if (o.emit_intermediates) {
    if (result.series) section("series", emit_tensor(*result.series, fmt));
    if (result.features) section("features", emit_features(*result.features, fmt));
    if (result.preference) {
      section("preference", emit_preference(*result.preference, data.alternatives(), fmt));
    }
  }
  for (const auto& [label, rank] : result.rankings) {
    section("ranking " + label, emit_rank(rank, fmt));
  }
  write_output(o.out, text);

  if (!o.intermediates_dir.empty()) {
    fs::create_directories(o.intermediates_dir);
    const fs::path dir(o.intermediates_dir);
    if (result.series) write_output((dir / "series.csv").string(), emit_tensor(*result.series, Format::Csv));
    if (result.features) {
      write_output((dir / "features.csv").string(), emit_features(*result.features, Format::Csv));
    }
    if (result.preference) {
      write_output((dir / "preference.csv").string(),
                   emit_preference(*result.preference, data.alternatives(), Format::Csv));
    }
    if (result.prediction) {
      write_output((dir / "diagnostics.jsonl").string(),
                   emit_diagnostics(*result.prediction, Format::JsonLines));
    }
    for (const auto& [label, rank] : result.rankings) {
      write_output((dir / ("ranking_" + label + ".csv")).string(), emit_rank(rank, Format::Csv));
    }
  }
  if (!o.plot.empty()) {
    const auto& first = result.rankings.front();
    write_output(o.plot, svg_bars(first.rank, std::string(to_string(method)) + " / " +
                                                  std::string(to_string(source)) + " (" +
                                                  first.label + ")"));
  }
  return 0;
}

int cmd_reproduce(const std::string& data_path, const std::string& config_path,
                  const std::string& golden_dir, const std::string& out_dir) {
  if (!fs::exists(data_path)) {
    throw StageError{"experiments",
                     "dataset not found at '" + data_path +
                         "'; see experiments/data/imf/README.md for how to provide it",
                     true};
  }
  auto [data, run] = load(data_path, config_path);
  auto tables = stage("experiments", [&] { return experiments::load_published_tables(golden_dir); });
  auto repro = stage("experiments", [&] { return experiments::reproduce(data, run); });
  // Data with other ids still gets its rankings reported; only the
  // comparison against the published tables is skipped.
  std::string text;
  try {
    text = experiments::evaluate(repro, tables).text(tables);
  } catch (const ValidationError& e) {
    text = experiments::uncompared_report(repro, e.what());
  }

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_output((dir / "report.md").string(), text);
  write_output((dir / "forecast_rls.csv").string(), emit_tensor(repro.rls.predictions, Format::Csv));
  write_output((dir / "forecast_nlms.csv").string(), emit_tensor(repro.nlms.predictions, Format::Csv));
  write_output((dir / "features_forecast_rls.csv").string(), emit_features(repro.predicted_features, Format::Csv));
  write_output((dir / "features_forecast_nlms.csv").string(), emit_features(repro.nlms_features, Format::Csv));
  write_output((dir / "features_actual.csv").string(), emit_features(repro.actual_features, Format::Csv));
  write_output((dir / "features_past_window.csv").string(), emit_features(repro.past_features, Format::Csv));
  write_output((dir / "diagnostics_rls.jsonl").string(), emit_diagnostics(repro.rls, Format::JsonLines));
  std::string rankings;
  for (const auto& [id, rank] : repro.rankings) {
    std::istringstream lines(emit_rank(rank, Format::JsonLines));
    for (std::string line; std::getline(lines, line);) {
      rankings += "{\"id\":\"" + id + "\"," + line.substr(1) + "\n";
    }
  }
  write_output((dir / "rankings.jsonl").string(), rankings);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank alternatives from forecast criterion time series"};
  app.require_subcommand(1);

  std::string data, config, out, format = "csv", diagnostics;
  auto* predict = app.add_subcommand("predict", "Forecast every (alternative, criterion) series");
  predict->add_option("--data", data, "Long-format CSV (alternative,criterion,time,value)")->required();
  predict->add_option("--config", config, "YAML run configuration");
  predict->add_option("--out", out, "Output file (default: standard output)");
  predict->add_option("--format", format, "csv | json-lines | table");
  predict->add_option("--diagnostics", diagnostics, "Error-trace output (json-lines)");

  RankOptions ro;
  auto* rank = app.add_subcommand("rank", "Rank alternatives");
  rank->add_option("--data", ro.data, "Long-format CSV")->required();
  rank->add_option("--config", ro.config, "YAML run configuration");
  rank->add_option("--method", ro.method, "promethee-tensor | promethee-matrix | topsis-tensor");
  rank->add_option("--source", ro.source, "predicted | past-window | current | actual");
  rank->add_option("--format", ro.format, "table | csv | json-lines");
  rank->add_option("--out", ro.out, "Output file (default: standard output)");
  rank->add_flag("--emit-intermediates", ro.emit_intermediates, "Also print series, features and pi");
  rank->add_option("--intermediates-dir", ro.intermediates_dir, "Write each intermediate to its own CSV");
  rank->add_option("--plot", ro.plot, "Write an SVG bar chart of the scores");

  std::string repro_data = experiments::default_dataset_path().string();
  std::string repro_config = TENSORRANK_PUBLISHED_CONFIG;
  std::string golden_dir = experiments::default_golden_dir().string();
  std::string out_dir;
  auto* reproduce = app.add_subcommand("reproduce", "Run every published strategy and compare");
  reproduce->add_option("--data", repro_data, "Long-format CSV of the IMF panel");
  reproduce->add_option("--config", repro_config, "YAML run configuration");
  reproduce->add_option("--golden-dir", golden_dir, "Checksummed fixture directory");
  reproduce->add_option("--out-dir", out_dir, "Report directory")->required();

  std::string wide_in, wide_out;
  auto* convert = app.add_subcommand("convert-wide", "Convert a wide per-year CSV to the long layout");
  convert->add_option("--input", wide_in, "Wide CSV (alternative,criterion,<year>...)")->required();
  convert->add_option("--out", wide_out, "Output file (default: standard output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*predict) return cmd_predict(data, config, out, format, diagnostics);
    if (*rank) return cmd_rank(ro);
    if (*reproduce) return cmd_reproduce(repro_data, repro_config, golden_dir, out_dir);
    if (*convert) {
      std::ifstream in(wide_in);
      if (!in) throw StageError{"ingest", "cannot open '" + wide_in + "'", true};
      write_output(wide_out, stage("ingest", [&] { return convert_wide_csv(in, wide_in); }));
      return 0;
    }
  } catch (const StageError& e) {
    std::cerr << "tensorrank: " << e.stage << ": " << e.message << "\n";
    return e.validation ? kExitValidation : kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "tensorrank: internal: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
