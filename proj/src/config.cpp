#include "finsler/config.hpp"

#include <fstream>
#include <set>

namespace finsler {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& msg) { fail(Errc::config, path + ": " + msg); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) bad(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) bad(path + "." + it.key(), "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

ParamMap params_of(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object of numbers");
  ParamMap p;
  for (auto it = j.begin(); it != j.end(); ++it) p[it.key()] = number(it.value(), path + "." + it.key());
  return p;
}

Eigen::VectorXd vector_of(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

std::string expr_string(const json& j, const std::string& path) {
  if (j.is_number()) return j.dump();
  return text(j, path);
}

}  // namespace

PhiFamily parse_phi(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("variant")) bad(path, "expected an object with a variant");
  const std::string v = text(j["variant"], path + ".variant");
  if (v == "randers") {
    only_keys(j, path, {"variant"});
    return PhiFamily::randers();
  }
  if (v == "riemann_sqrt") {
    only_keys(j, path, {"variant", "k"});
    return PhiFamily::riemann_sqrt(j.contains("k") ? number(j["k"], path + ".k") : 1.0);
  }
  if (v == "unicorn") {
    only_keys(j, path, {"variant", "b0", "k", "q", "c", "margin"});
    UnicornParams p;
    if (j.contains("b0")) p.b0 = number(j["b0"], path + ".b0");
    if (j.contains("k")) p.k = number(j["k"], path + ".k");
    if (j.contains("q")) p.q = number(j["q"], path + ".q");
    if (j.contains("c")) p.c = number(j["c"], path + ".c");
    if (j.contains("margin")) p.margin = number(j["margin"], path + ".margin");
    return PhiFamily::unicorn(p);
  }
  if (v == "custom") {
    only_keys(j, path, {"variant", "expr", "params"});
    if (!j.contains("expr")) bad(path + ".expr", "missing");
    ParamMap p = j.contains("params") ? params_of(j["params"], path + ".params") : ParamMap{};
    return PhiFamily::custom(text(j["expr"], path + ".expr"), p);
  }
  bad(path + ".variant", "unknown phi variant '" + v + "'");
}

RunConfig parse_config(const json& j) {
  only_keys(j, "$", {"schema", "metric", "phi", "grid", "directions", "tolerances", "output", "seed"});
  if (!j.contains("schema")) bad("$.schema", "missing");
  if (integer(j["schema"], "$.schema") != 1) bad("$.schema", "unsupported schema version");
  RunConfig c;
  if (!j.contains("metric")) bad("$.metric", "missing");
  const json& m = j["metric"];
  only_keys(m, "$.metric", {"name", "params", "custom"});
  if (m.contains("custom")) {
    const json& cj = m["custom"];
    only_keys(cj, "$.metric.custom", {"dim", "a", "b", "params", "domain"});
    CustomMetricConfig cm;
    cm.dim = cj.contains("dim") ? integer(cj["dim"], "$.metric.custom.dim") : 2;
    if (cm.dim < 2 || cm.dim > 3) bad("$.metric.custom.dim", "must be 2 or 3");
    if (!cj.contains("a") || !cj["a"].is_array() || static_cast<int>(cj["a"].size()) != cm.dim)
      bad("$.metric.custom.a", "expected an n x n array of expressions");
    for (int i = 0; i < cm.dim; ++i) {
      const json& row = cj["a"][i];
      const std::string rp = "$.metric.custom.a[" + std::to_string(i) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != cm.dim) bad(rp, "expected a row of n expressions");
      for (int k = 0; k < cm.dim; ++k) cm.a.push_back(expr_string(row[k], rp + "[" + std::to_string(k) + "]"));
    }
    if (!cj.contains("b") || !cj["b"].is_array() || static_cast<int>(cj["b"].size()) != cm.dim)
      bad("$.metric.custom.b", "expected n expressions");
    for (int i = 0; i < cm.dim; ++i)
      cm.b.push_back(expr_string(cj["b"][i], "$.metric.custom.b[" + std::to_string(i) + "]"));
    if (cj.contains("params")) cm.params = params_of(cj["params"], "$.metric.custom.params");
    cm.lower = Eigen::VectorXd::Constant(cm.dim, -1.0);
    cm.upper = Eigen::VectorXd::Constant(cm.dim, 1.0);
    if (cj.contains("domain")) {
      const json& d = cj["domain"];
      only_keys(d, "$.metric.custom.domain", {"lower", "upper"});
      if (d.contains("lower")) cm.lower = vector_of(d["lower"], "$.metric.custom.domain.lower");
      if (d.contains("upper")) cm.upper = vector_of(d["upper"], "$.metric.custom.domain.upper");
      if (cm.lower.size() != cm.dim || cm.upper.size() != cm.dim) bad("$.metric.custom.domain", "bounds need n entries");
      if ((cm.upper - cm.lower).minCoeff() <= 0.0) bad("$.metric.custom.domain", "upper must exceed lower");
    }
    c.metric_name = m.contains("name") ? text(m["name"], "$.metric.name") : "custom";
    c.custom = cm;
  } else {
    if (!m.contains("name")) bad("$.metric.name", "missing");
    c.metric_name = text(m["name"], "$.metric.name");
    if (m.contains("params")) c.metric_params = params_of(m["params"], "$.metric.params");
  }
  if (j.contains("phi")) {
    parse_phi(j["phi"]);
    c.phi = j["phi"];
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    only_keys(g, "$.grid", {"counts", "lower", "upper", "margin"});
    if (g.contains("counts")) {
      if (!g["counts"].is_array()) bad("$.grid.counts", "expected an array of integers");
      for (std::size_t i = 0; i < g["counts"].size(); ++i) {
        const int v = integer(g["counts"][i], "$.grid.counts[" + std::to_string(i) + "]");
        if (v < 1) bad("$.grid.counts[" + std::to_string(i) + "]", "must be >= 1");
        c.grid_counts.push_back(v);
      }
    }
    if (g.contains("lower")) c.grid_lower = vector_of(g["lower"], "$.grid.lower");
    if (g.contains("upper")) c.grid_upper = vector_of(g["upper"], "$.grid.upper");
    if (g.contains("margin")) {
      c.grid_margin = number(g["margin"], "$.grid.margin");
      if (c.grid_margin < 0.0 || c.grid_margin >= 0.5) bad("$.grid.margin", "must lie in [0, 0.5)");
    }
  }
  if (j.contains("directions")) {
    c.directions = integer(j["directions"], "$.directions");
    if (c.directions < 4) bad("$.directions", "must be >= 4");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    only_keys(t, "$.tolerances",
              {"gb", "killing", "randers_s0", "berwald", "landsberg", "douglas", "s_zero", "riemannian", "k_flat",
               "unicorn"});
    auto set = [&](const char* key, double& field) {
      if (!t.contains(key)) return;
      field = number(t[key], std::string("$.tolerances.") + key);
      if (!(field > 0.0)) bad(std::string("$.tolerances.") + key, "must be positive");
    };
    set("gb", c.tol.gb);
    set("killing", c.tol.killing);
    set("randers_s0", c.tol.randers_s0);
    set("berwald", c.tol.berwald);
    set("landsberg", c.tol.landsberg);
    set("douglas", c.tol.douglas);
    set("s_zero", c.tol.s_zero);
    set("riemannian", c.tol.riemannian);
    set("k_flat", c.tol.k_flat);
    set("unicorn", c.tol.unicorn);
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    only_keys(o, "$.output", {"path", "format"});
    if (o.contains("path")) c.out_path = text(o["path"], "$.output.path");
    if (o.contains("format")) {
      c.format = text(o["format"], "$.output.format");
      if (c.format != "json" && c.format != "csv") bad("$.output.format", "must be json or csv");
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("$.seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::config, "cannot open config file " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(Errc::config, path + ": invalid JSON: " + e.what());
  }
  return parse_config(j);
}

ResolvedRun resolve(const RunConfig& cfg) {
  ResolvedRun r;
  r.tol = cfg.tol;
  if (cfg.custom) {
    const auto& cm = *cfg.custom;
    ChartDomain d;
    d.lower = cm.lower;
    d.upper = cm.upper;
    r.metric = custom_metric(cfg.metric_name, cm.dim, cm.a, cm.b, cm.params, d);
    r.phi = PhiFamily::randers();
    r.name = cfg.metric_name;
    r.params = cm.params;
  } else {
    CatalogEntry e = get_metric(cfg.metric_name, cfg.metric_params);
    r.metric = e.metric;
    r.phi = e.phi;
    r.name = e.name;
    r.params = e.params;
  }
  if (cfg.phi) r.phi = parse_phi(*cfg.phi);
  const int n = r.metric.dim;
  std::vector<int> counts = cfg.grid_counts.empty() ? std::vector<int>(n, 5) : cfg.grid_counts;
  if (static_cast<int>(counts.size()) != n) bad("$.grid.counts", "needs one count per axis");
  ChartDomain domain = r.metric.domain;
  const ChartDomain allowed = domain.shrunk(cfg.grid_margin);
  if (cfg.grid_lower || cfg.grid_upper) {
    if (cfg.grid_lower) {
      if (cfg.grid_lower->size() != n) bad("$.grid.lower", "needs n entries");
      if ((*cfg.grid_lower - allowed.lower).minCoeff() < 0.0) bad("$.grid.lower", "outside the chart domain");
      domain.lower = *cfg.grid_lower;
    }
    if (cfg.grid_upper) {
      if (cfg.grid_upper->size() != n) bad("$.grid.upper", "needs n entries");
      if ((allowed.upper - *cfg.grid_upper).minCoeff() < 0.0) bad("$.grid.upper", "outside the chart domain");
      domain.upper = *cfg.grid_upper;
    }
    if ((domain.upper - domain.lower).minCoeff() < 0.0) bad("$.grid", "upper must not be below lower");
    r.grid = make_grid(domain, counts, 0.0);
  } else {
    r.grid = make_grid(domain, counts, cfg.grid_margin);
  }
  r.dirs = make_directions(n, cfg.directions);
  return r;
}

}  // namespace finsler
