// banditvn command line: run, verify, fit, plot.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "banditvn/config_json.hpp"
#include "banditvn/csv.hpp"
#include "banditvn/error.hpp"
#include "banditvn/fit.hpp"
#include "banditvn/harness.hpp"
#include "banditvn/svg.hpp"
#include "banditvn/verify.hpp"

namespace fs = std::filesystem;
using namespace banditvn;

namespace {

int cmd_run(const std::string& config_path, const std::string& out_dir) {
  const harness::ExperimentConfig config = config::load_config(config_path);
  const harness::ExperimentResult result = harness::run_experiment(config);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());
  const fs::path out(out_dir);
  csv::emit_trace_csv(result.runs, out / "trace.csv");
  csv::emit_aggregate_csv(result.aggregate, out / "aggregate.csv");
  csv::write_file_atomic(out / "run_status.csv", csv::run_status_csv(result.runs));
  csv::write_file_atomic(out / "config.json", config::dump_config(config));

  std::size_t failed = 0;
  for (const auto& r : result.runs) {
    if (r.status != harness::RunStatus::Ok) {
      ++failed;
      std::cerr << "run " << r.run_id << " failed: " << r.message << '\n';
    }
  }
  const double final_regret =
      result.aggregate.rows.empty() ? 0.0 : result.aggregate.rows.back().mean_cum_regret;
  std::printf("runs=%zu failed=%zu batches=%zu mean_final_regret=%.6g out=%s\n", config.runs,
              failed, config.horizon_batches, final_regret, out_dir.c_str());
  return failed == config.runs ? 1 : 0;
}

int cmd_verify(const std::string& config_path) {
  const harness::ExperimentConfig config = config::load_config(config_path);
  const verify::VerifyReport report = verify::verify(config);
  std::fputs(verify::format_report(report).c_str(), stdout);
  return report.passed() ? 0 : 1;
}

int cmd_fit(const std::string& input, const std::string& column, const std::string& model_name,
            double from, double to) {
  const fit::Model model = fit::parse_model(model_name);
  const csv::Table table = csv::read_table(input);
  const fit::FitResult r = fit::fit_curve(table, column, model, from, to);
  std::printf("model=%s column=%s range=[%g, %g] points=%zu\n",
              std::string(fit::to_string(model)).c_str(), column.c_str(), from, to, r.points);
  if (model == fit::Model::PowerLaw) {
    std::printf("a=%.10g p=%.10g r2=%.6f\n", r.params[0], r.params[1], r.r_squared);
  } else {
    std::printf("coefficient=%.10g r2=%.6f\n", r.params[0], r.r_squared);
  }
  return 0;
}

std::vector<std::string> split_columns(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int cmd_plot(const std::string& input, const std::string& columns, const std::string& out,
             bool log_x, bool log_y) {
  const csv::Table table = csv::read_table(input);
  svg::PlotOptions opts;
  opts.columns = split_columns(columns);
  opts.log_x = log_x;
  opts.log_y = log_y;
  opts.title = fs::path(input).filename().string();
  svg::emit_svg(table, opts, out);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear bandits on the unit sphere with vanishing noise"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto* run = app.add_subcommand("run", "Run a seeded multi-run experiment and write CSV traces");
  run->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  std::string verify_config;
  auto* ver = app.add_subcommand("verify", "Check the deterministic invariants on every batch");
  ver->add_option("--config", verify_config, "Experiment config (JSON)")->required();

  std::string fit_input, fit_column, fit_model;
  double fit_from = 0.0, fit_to = 0.0;
  auto* fitc = app.add_subcommand("fit", "Fit a scaling law to an aggregate column");
  fitc->add_option("--input", fit_input, "Aggregate CSV")->required();
  fitc->add_option("--column", fit_column, "Column to fit")->required();
  fitc->add_option("--model", fit_model, "powerlaw | polylog | linear | quadratic")->required();
  fitc->add_option("--from", fit_from, "First batch index in range")->required();
  fitc->add_option("--to", fit_to, "Last batch index in range")->required();

  std::string plot_input, plot_columns, plot_out;
  bool log_x = false, log_y = false;
  auto* plot = app.add_subcommand("plot", "Render aggregate columns as an SVG line chart");
  plot->add_option("--input", plot_input, "Aggregate CSV")->required();
  plot->add_option("--columns", plot_columns, "Comma-separated column names")->required();
  plot->add_option("--out", plot_out, "Output SVG path")->required();
  plot->add_flag("--log-x", log_x, "Logarithmic x axis");
  plot->add_flag("--log-y", log_y, "Logarithmic y axis");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir);
    if (*ver) return cmd_verify(verify_config);
    if (*fitc) return cmd_fit(fit_input, fit_column, fit_model, fit_from, fit_to);
    if (*plot) return cmd_plot(plot_input, plot_columns, plot_out, log_x, log_y);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
