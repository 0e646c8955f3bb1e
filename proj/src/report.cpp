#include "finsler/report.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "finsler/finsler_metric.hpp"
#include "finsler/spray.hpp"

namespace finsler {
namespace {

using nlohmann::json;
using Eigen::MatrixXd;
using Eigen::VectorXd;

json vec(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json mat(const MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json error_json(const Error& e) { return json{{"code", to_string(e.code())}, {"message", e.what()}}; }

}  // namespace

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json to_json(const PredicateVerdict& v) {
  json j{{"verdict", v.verdict}, {"residual", v.residual}, {"threshold", v.threshold}, {"n_samples", v.n_samples}};
  if (!v.details.empty()) j["details"] = v.details;
  return j;
}

json to_json(const ClassificationReport& r) {
  json j;
  if (r.gb) j["gb"] = to_json(*r.gb);
  if (r.killing_cl) j["killing_cl"] = to_json(*r.killing_cl);
  if (r.randers_s0) j["randers_s0"] = to_json(*r.randers_s0);
  if (r.flags) {
    j["berwald"] = to_json(r.flags->berwald);
    j["landsberg"] = to_json(r.flags->landsberg);
    j["douglas"] = to_json(r.flags->douglas);
    j["s_zero"] = to_json(r.flags->s_zero);
    j["riemannian"] = to_json(r.flags->riemannian);
    j["k_flat"] = to_json(r.flags->k_flat);
    if (r.flags->k_constant) j["k_constant"] = to_json(*r.flags->k_constant);
    j["n_singular_samples"] = r.flags->n_singular;
  }
  if (r.unicorn_fit)
    j["unicorn_fit"] = json{{"k", r.unicorn_fit->k},
                            {"q", r.unicorn_fit->q},
                            {"rms", r.unicorn_fit->rms},
                            {"n_samples", r.unicorn_fit->n_samples}};
  j["verdict"] = to_string(r.verdict);
  j["grid"] = json{{"n_points", r.n_points}, {"n_directions", r.n_directions}};
  return j;
}

json cmd_classify(const ResolvedRun& run) {
  const ClassificationReport r = classify(run.metric, run.phi, run.grid, run.dirs, run.tol);
  json j = to_json(r);
  j["metric"] = run.name;
  j["params"] = run.params;
  j["phi"] = run.phi.name();
  return j;
}

json cmd_report(const ResolvedRun& run) {
  const MetricSpec& m = run.metric;
  const PhiFamily& f = run.phi;
  json samples = json::array();
  for (std::size_t p = 0; p < run.grid.size(); ++p) {
    const VectorXd& x = run.grid[p];
    std::optional<VectorXd> grad;
    bool approximate = false;
    std::optional<Error> grad_error;
    try {
      grad = log_sigma_gradient(m, f, x, &approximate);
    } catch (const Error& e) {
      grad_error = e;
    }
    for (std::size_t d = 0; d < run.dirs.size(); ++d) {
      json rec{{"point", p}, {"direction", d}, {"x", vec(x)}};
      try {
        if (grad_error) throw *grad_error;
        const double F0 = finsler_eval(m, f, x, run.dirs[d]);
        const VectorXd y = run.dirs[d] / F0;
        rec["y"] = vec(y);
        BundleOptions opts;
        opts.with_h = false;
        opts.log_sigma_grad = grad;
        const CurvatureBundle cb = curvature_bundle(m, f, x, y, opts);
        rec["F"] = cb.fd.F;
        rec["g"] = mat(cb.fd.g);
        rec["C_norm"] = max_abs(cb.fd.C);
        rec["G"] = vec(cb.spray.G);
        rec["B_norm"] = max_abs(cb.B);
        rec["E_norm"] = cb.E.cwiseAbs().maxCoeff();
        rec["L_norm"] = max_abs(cb.L);
        rec["D_norm"] = max_abs(cb.D);
        if (cb.K) rec["K"] = *cb.K;
        rec["S_def"] = cb.S;
        if (cb.S_formula) rec["S_formula"] = cb.S_formula->S;
        rec["sigma_approximate"] = approximate;
      } catch (const Error& e) {
        rec["error"] = error_json(e);
      }
      samples.push_back(std::move(rec));
    }
  }
  json j;
  j["metric"] = run.name;
  j["params"] = run.params;
  j["phi"] = run.phi.name();
  j["dim"] = m.dim;
  j["samples"] = std::move(samples);
  try {
    j["classification"] = to_json(classify(m, f, run.grid, run.dirs, run.tol));
  } catch (const Error& e) {
    j["classification"] = json{{"error", error_json(e)}};
  }
  return j;
}

std::vector<std::string> table_quantities() {
  return {"a", "b_form", "gamma", "r", "s", "r_i", "s_i", "bnorm", "Q", "G", "B", "E", "L", "D", "R", "K", "S", "H",
          "sigma"};
}

namespace {

struct Column {
  std::vector<std::string> names;
  std::function<std::vector<double>(const VectorXd& x, const VectorXd& y)> eval;
  bool directional = false;
};

std::string idx(std::initializer_list<int> ids) {
  std::string s;
  for (int i : ids) s += std::to_string(i + 1);
  return s;
}

std::vector<double> flat(const MatrixXd& m) {
  std::vector<double> v;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v.push_back(m(i, j));
  return v;
}

std::vector<double> flat(const VectorXd& m) { return std::vector<double>(m.data(), m.data() + m.size()); }

}  // namespace

std::string cmd_table(const ResolvedRun& run, const std::string& q) {
  const MetricSpec& m = run.metric;
  const PhiFamily& f = run.phi;
  const int n = m.dim;
  Column col;
  auto names2 = [&](const std::string& p) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v.push_back(p + "_" + idx({i, j}));
    return v;
  };
  auto names1 = [&](const std::string& p) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(p + "_" + idx({i}));
    return v;
  };
  auto names3 = [&](const std::string& p, bool upper) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          v.push_back(upper ? p + "_" + idx({i}) + "_" + idx({j, k}) : p + "_" + idx({i, j, k}));
    return v;
  };
  auto names4 = [&](const std::string& p) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) v.push_back(p + "_" + idx({i}) + "_" + idx({j, k, l}));
    return v;
  };
  auto t3 = [n](const Tensor3& t) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) v.push_back(t(i, j, k));
    return v;
  };
  auto t4 = [n](const Tensor4& t) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) v.push_back(t(i, j, k, l));
    return v;
  };
  std::map<VectorXd const*, VectorXd> grads;
  auto grad_at = [&](const VectorXd& x) {
    auto it = grads.find(&x);
    if (it == grads.end()) it = grads.emplace(&x, log_sigma_gradient(m, f, x)).first;
    return it->second;
  };

  if (q == "a") col = {names2("a"), [&](const VectorXd& x, const VectorXd&) { return flat(m.a(x)); }};
  else if (q == "b_form") col = {names1("b"), [&](const VectorXd& x, const VectorXd&) { return flat(m.b_form(x)); }};
  else if (q == "gamma")
    col = {names3("gamma", true), [&](const VectorXd& x, const VectorXd&) { return t3(christoffels(m, x)); }};
  else if (q == "r")
    col = {names2("r"), [&](const VectorXd& x, const VectorXd&) { return flat(beta_derivatives(m, x).r); }};
  else if (q == "s")
    col = {names2("s"), [&](const VectorXd& x, const VectorXd&) { return flat(beta_derivatives(m, x).s); }};
  else if (q == "r_i")
    col = {names1("r"), [&](const VectorXd& x, const VectorXd&) { return flat(beta_derivatives(m, x).r_i); }};
  else if (q == "s_i")
    col = {names1("s"), [&](const VectorXd& x, const VectorXd&) { return flat(beta_derivatives(m, x).s_i); }};
  else if (q == "bnorm")
    col = {{"bnorm"}, [&](const VectorXd& x, const VectorXd&) { return std::vector<double>{point_frame(m, x).b_norm}; }};
  else if (q == "sigma")
    col = {{"sigma"}, [&](const VectorXd& x, const VectorXd&) { return std::vector<double>{sigma_bh(m, f, x).sigma}; }};
  else if (q == "Q")
    col = {{"s", "Q"},
           [&](const VectorXd& x, const VectorXd& y) {
             const PointFrame pf = point_frame(m, x);
             const double s = pf.b_lower.dot(y) / std::sqrt(y.dot(pf.a * y));
             return std::vector<double>{s, ab_scalars(f, pf.b_norm, s, n).Q};
           },
           true};
  else if (q == "G")
    col = {names1("G"), [&](const VectorXd& x, const VectorXd& y) { return flat(spray_generic(m, f, x, y)); }, true};
  else if (q == "B")
    col = {names4("B"), [&](const VectorXd& x, const VectorXd& y) { return t4(berwald(m, f, x, y).B); }, true};
  else if (q == "E")
    col = {names2("E"), [&](const VectorXd& x, const VectorXd& y) { return flat(berwald(m, f, x, y).E); }, true};
  else if (q == "L")
    col = {names3("L", false),
           [&](const VectorXd& x, const VectorXd& y) {
             return t3(landsberg(fundamental(m, f, x, y), berwald(m, f, x, y).B));
           },
           true};
  else if (q == "D")
    col = {names4("D"), [&](const VectorXd& x, const VectorXd& y) { return t4(douglas(m, f, x, y)); }, true};
  else if (q == "R") {
    std::vector<std::string> names;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) names.push_back("R_" + idx({i}) + "_" + idx({k}));
    col = {names,
           [&](const VectorXd& x, const VectorXd& y) {
             VectorXd u = VectorXd::Zero(n);
             u((std::abs(y(0)) < std::abs(y(1))) ? 0 : 1) = 1.0;
             return flat(riemann_flag(m, f, x, y, u).R);
           },
           true};
  } else if (q == "K") {
    if (n != 2) fail(Errc::dimension_mismatch, "scalar flag curvature is tabulated for n = 2");
    col = {{"K"},
           [&](const VectorXd& x, const VectorXd& y) {
             return std::vector<double>{riemann_flag(m, f, x, y, VectorXd{{-y(1), y(0)}}).K};
           },
           true};
  } else if (q == "S")
    col = {{"S"},
           [&](const VectorXd& x, const VectorXd& y) { return std::vector<double>{s_curvature_def(m, f, x, y, grad_at(x))}; },
           true};
  else if (q == "H")
    col = {names2("H"), [&](const VectorXd& x, const VectorXd& y) { return flat(h_curvature(m, f, x, y)); }, true};
  else
    fail(Errc::unknown_quantity, "unknown table quantity '" + q + "'");

  std::ostringstream out;
  std::vector<std::string> header;
  for (int i = 0; i < n; ++i) header.push_back("x" + std::to_string(i + 1));
  if (col.directional)
    for (int i = 0; i < n; ++i) header.push_back("y" + std::to_string(i + 1));
  header.insert(header.end(), col.names.begin(), col.names.end());
  header.push_back("error");
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_field(header[i]);
  out << "\r\n";
  auto row = [&](const VectorXd& x, const VectorXd* y) {
    std::vector<std::string> cells;
    for (int i = 0; i < n; ++i) cells.push_back(num(x(i)));
    if (y)
      for (int i = 0; i < n; ++i) cells.push_back(num((*y)(i)));
    try {
      const auto vals = col.eval(x, y ? *y : VectorXd());
      for (double v : vals) cells.push_back(num(v));
      cells.push_back("");
    } catch (const Error& e) {
      for (std::size_t i = 0; i < col.names.size(); ++i) cells.push_back("");
      cells.push_back(std::string(to_string(e.code())) + ": " + e.what());
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_field(cells[i]);
    out << "\r\n";
  };
  for (const auto& x : run.grid) {
    if (!col.directional) {
      row(x, nullptr);
      continue;
    }
    for (const auto& d : run.dirs) {
      VectorXd y = d;
      try {
        y = d / finsler_eval(m, f, x, d);
      } catch (const Error&) {
      }
      row(x, &y);
    }
  }
  return out.str();
}

}  // namespace finsler
