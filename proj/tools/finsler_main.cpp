#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finsler/acceptance.hpp"
#include "finsler/config.hpp"
#include "finsler/report.hpp"

namespace {

struct Options {
  std::string metric;
  std::vector<std::string> params;
  std::string config;
  std::string out;
  std::string quantity;
  std::uint64_t seed = 42;
};

finsler::RunConfig build_config(const Options& o) {
  finsler::RunConfig cfg;
  if (!o.config.empty()) cfg = finsler::load_config(o.config);
  if (!o.metric.empty()) {
    cfg.metric_name = o.metric;
    cfg.custom.reset();
  }
  for (const auto& p : o.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) finsler::fail(finsler::Errc::config, "--param expects key=value, got " + p);
    try {
      std::size_t used = 0;
      const double v = std::stod(p.substr(eq + 1), &used);
      if (used != p.size() - eq - 1) throw std::invalid_argument(p);
      cfg.metric_params[p.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      finsler::fail(finsler::Errc::config, "--param value is not a number: " + p);
    }
  }
  if (cfg.metric_name.empty() && !cfg.custom) finsler::fail(finsler::Errc::config, "no metric given (--metric or --config)");
  if (!o.out.empty()) cfg.out_path = o.out;
  cfg.seed = o.seed;
  return cfg;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) finsler::fail(finsler::Errc::config, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature of (alpha, beta)-metrics"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--metric", o.metric, "catalog metric name");
    sub->add_option("--param", o.params, "metric parameter key=value (repeatable)");
    sub->add_option("--config", o.config, "JSON run configuration");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--seed", o.seed, "seed for randomized suites")->capture_default_str();
  };
  auto* report = app.add_subcommand("report", "per-sample curvature report as JSON");
  add_common(report);
  auto* table = app.add_subcommand("table", "component table as CSV");
  add_common(table);
  table->add_option("--quantity", o.quantity, "quantity to tabulate")->required();
  auto* classify = app.add_subcommand("classify", "metric classification as JSON");
  add_common(classify);
  auto* check = app.add_subcommand("check", "run the acceptance suite");
  check->add_option("--seed", o.seed, "seed for randomized suites")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return finsler::run_acceptance(std::cout, o.seed) ? 0 : 1;
    const finsler::RunConfig cfg = build_config(o);
    const finsler::ResolvedRun run = finsler::resolve(cfg);
    if (report->parsed()) emit(finsler::cmd_report(run).dump(2) + "\n", cfg.out_path);
    else if (classify->parsed()) emit(finsler::cmd_classify(run).dump(2) + "\n", cfg.out_path);
    else if (table->parsed()) emit(finsler::cmd_table(run, o.quantity), cfg.out_path);
  } catch (const finsler::Error& e) {
    std::cerr << "error [" << finsler::to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
