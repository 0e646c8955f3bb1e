#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "finsler/catalog.hpp"
#include "finsler/classify.hpp"

namespace finsler {

struct CustomMetricConfig {
  int dim = 2;
  std::vector<std::string> a;  // row-major
  std::vector<std::string> b;
  ParamMap params;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct RunConfig {
  std::string metric_name;
  ParamMap metric_params;
  std::optional<CustomMetricConfig> custom;
  std::optional<nlohmann::json> phi;
  std::vector<int> grid_counts;  // empty: 5 per axis
  std::optional<Eigen::VectorXd> grid_lower;
  std::optional<Eigen::VectorXd> grid_upper;
  double grid_margin = 0.05;
  int directions = 16;
  Tolerances tol;
  std::string out_path;
  std::string format;
  std::uint64_t seed = 42;
};

/// Validates a schema-1 config; unknown fields raise Errc::config with their path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

PhiFamily parse_phi(const nlohmann::json& j, const std::string& path = "$.phi");

struct ResolvedRun {
  std::string name;
  ParamMap params;
  MetricSpec metric;
  PhiFamily phi;
  std::vector<Eigen::VectorXd> grid;
  std::vector<Eigen::VectorXd> dirs;
  Tolerances tol;
};

ResolvedRun resolve(const RunConfig& cfg);

}  // namespace finsler
