#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "finsler/geometry.hpp"
#include "finsler/phi.hpp"

namespace finsler {

using ParamMap = std::map<std::string, double>;

struct CatalogEntry {
  std::string name;
  std::string description;
  ParamMap params;
  MetricSpec metric;
  PhiFamily phi;
};

/// Names: euclid, euclid_randers, lie_group, fish_tank, mw, sphere_randers,
/// bao_shen, proj_sphere_killing (case-insensitive).
CatalogEntry get_metric(const std::string& name, const ParamMap& params = {});
std::vector<std::string> catalog_names();

/// Metric from expression strings in x1..xn and p1..p9; `a` is row-major n x n.
MetricSpec custom_metric(const std::string& name, int dim, const std::vector<std::string>& a,
                         const std::vector<std::string>& b, const ParamMap& params, ChartDomain domain);

struct ZermeloData {
  int dim = 2;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> h;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> W;
};

struct RandersData {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

/// a = (lambda h + W_ W_^T)/lambda^2, b = -W_/lambda with W_ = h W, lambda = 1 - |W|_h^2.
RandersData zermelo_to_randers(const ZermeloData& z, const Eigen::VectorXd& x);
MetricSpec zermelo_metric(const ZermeloData& z, const std::string& name, ChartDomain domain);

/// h(y/F - W, y/F - W) - 1 for F = alpha + beta from the navigation data.
double navigation_residual(const ZermeloData& z, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace finsler
