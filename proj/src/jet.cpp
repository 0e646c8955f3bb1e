#include "finsler/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace finsler {
namespace {

std::uint64_t encode(std::span<const int> alpha, int base) {
  std::uint64_t key = 0;
  for (auto it = alpha.rbegin(); it != alpha.rend(); ++it) key = key * base + static_cast<std::uint64_t>(*it);
  return key;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

using Registry = std::array<std::array<std::unique_ptr<JetLayout>, kMaxJetOrder + 1>, kMaxJetVars + 1>;

Registry& registry() {
  static Registry r;
  return r;
}

void enumerate(int n, int degree, int var, std::vector<int>& current, std::vector<int>& out) {
  if (var == n - 1) {
    current[var] = degree;
    out.insert(out.end(), current.begin(), current.end());
    return;
  }
  for (int d = degree; d >= 0; --d) {
    current[var] = d;
    enumerate(n, degree - d, var + 1, current, out);
  }
}

double generalized_binomial(double p, int k) {
  double r = 1.0;
  for (int j = 0; j < k; ++j) r *= (p - j) / (j + 1);
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int j = 2; j <= k; ++j) r *= j;
  return r;
}

}  // namespace

JetLayout::JetLayout(int n_vars, int max_order) : n_vars_(n_vars), max_order_(max_order) {
  std::vector<int> current(n_vars, 0);
  for (int d = 0; d <= max_order; ++d) {
    enumerate(n_vars, d, 0, current, exps_);
    degree_end_.push_back(exps_.size() / n_vars);
  }
  const std::size_t count = exps_.size() / n_vars;
  degrees_.resize(count);
  for (int d = 0, k = 0; d <= max_order; ++d)
    for (; static_cast<std::size_t>(k) < degree_end_[d]; ++k) degrees_[k] = d;

  for (std::size_t k = 0; k < count; ++k) index_.emplace(encode(exponents(k), max_order + 1), k);

  lowered_.assign(count * n_vars, npos);
  std::vector<int> alpha(n_vars);
  for (std::size_t k = 0; k < count; ++k) {
    for (int v = 0; v < n_vars; ++v) {
      auto e = exponents(k);
      if (e[v] == 0) continue;
      alpha.assign(e.begin(), e.end());
      --alpha[v];
      lowered_[k * n_vars + v] = index_.at(encode(alpha, max_order + 1));
    }
  }

  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      if (degrees_[i] + degrees_[j] > max_order) continue;
      auto ei = exponents(i);
      auto ej = exponents(j);
      for (int v = 0; v < n_vars; ++v) alpha[v] = ei[v] + ej[v];
      terms_.push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                        static_cast<std::uint16_t>(index_.at(encode(alpha, max_order + 1)))});
    }
  }
}

const JetLayout& JetLayout::get(int n_vars, int max_order) {
  if (n_vars < 1 || n_vars > kMaxJetVars)
    fail(Errc::domain, "jet variable count " + std::to_string(n_vars) + " outside [1, 9]");
  if (max_order < 0 || max_order > kMaxJetOrder)
    fail(Errc::domain, "jet order " + std::to_string(max_order) + " outside [0, 6]");
  std::lock_guard lock(registry_mutex());
  auto& slot = registry()[n_vars][max_order];
  if (!slot) slot.reset(new JetLayout(n_vars, max_order));
  return *slot;
}

std::span<const int> JetLayout::exponents(std::size_t k) const {
  return {exps_.data() + k * n_vars_, static_cast<std::size_t>(n_vars_)};
}

std::size_t JetLayout::index_of(std::span<const int> alpha) const {
  if (alpha.size() != static_cast<std::size_t>(n_vars_))
    fail(Errc::shape_mismatch, "multi-index has wrong length");
  int degree = 0;
  for (int a : alpha) {
    if (a < 0) fail(Errc::domain, "negative multi-index entry");
    degree += a;
  }
  if (degree > max_order_) return npos;
  return index_.at(encode(alpha, max_order_ + 1));
}

JetScalar::JetScalar(const JetLayout* layout) : layout_(layout), c_(layout->size(), 0.0) {}

JetScalar::JetScalar(double value, int n_vars, int max_order) : JetScalar(&JetLayout::get(n_vars, max_order)) {
  c_[0] = value;
}

JetScalar JetScalar::variable(int index, double point_value, int n_vars, int max_order) {
  if (index < 0 || index >= n_vars)
    fail(Errc::domain, "jet variable index " + std::to_string(index) + " out of range");
  JetScalar j(point_value, n_vars, max_order);
  if (max_order >= 1) j.c_[1 + index] = 1.0;
  return j;
}

JetScalar JetScalar::constant_like(const JetScalar& proto, double value) {
  JetScalar j(proto.layout_);
  j.c_[0] = value;
  return j;
}

double JetScalar::coeff(std::span<const int> alpha) const {
  const auto k = layout_->index_of(alpha);
  return k == JetLayout::npos ? 0.0 : c_[k];
}

double JetScalar::coeff(std::initializer_list<int> alpha) const {
  return coeff(std::span<const int>(alpha.begin(), alpha.size()));
}

double JetScalar::derivative(std::span<const int> alpha) const {
  double scale = 1.0;
  for (int a : alpha) scale *= factorial(a);
  return coeff(alpha) * scale;
}

double JetScalar::derivative(std::initializer_list<int> alpha) const {
  return derivative(std::span<const int>(alpha.begin(), alpha.size()));
}

JetScalar JetScalar::partial(int var) const {
  if (var < 0 || var >= n_vars()) fail(Errc::domain, "partial derivative variable out of range");
  if (max_order() == 0) return JetScalar(0.0, n_vars(), 0);
  JetScalar out(&JetLayout::get(n_vars(), max_order() - 1));
  for (std::size_t k = 0; k < c_.size(); ++k) {
    const auto low = layout_->lowered(k, var);
    if (low == JetLayout::npos) continue;
    out.c_[low] += c_[k] * layout_->exponents(k)[var];
  }
  return out;
}

JetScalar JetScalar::truncated(int order) const {
  if (order > max_order()) fail(Errc::domain, "cannot raise jet order by truncation");
  JetScalar out(&JetLayout::get(n_vars(), order));
  std::copy_n(c_.begin(), out.c_.size(), out.c_.begin());
  return out;
}

void JetScalar::require_same_shape(const JetScalar& rhs) const {
  if (layout_ != rhs.layout_)
    fail(Errc::shape_mismatch, "jets differ in variable count or order (" + std::to_string(n_vars()) + "/" +
                                   std::to_string(max_order()) + " vs " + std::to_string(rhs.n_vars()) + "/" +
                                   std::to_string(rhs.max_order()) + ")");
}

JetScalar& JetScalar::operator+=(const JetScalar& rhs) {
  require_same_shape(rhs);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += rhs.c_[k];
  return *this;
}

JetScalar& JetScalar::operator-=(const JetScalar& rhs) {
  require_same_shape(rhs);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= rhs.c_[k];
  return *this;
}

JetScalar& JetScalar::operator*=(const JetScalar& rhs) {
  *this = *this * rhs;
  return *this;
}

JetScalar& JetScalar::operator/=(const JetScalar& rhs) {
  *this = *this / rhs;
  return *this;
}

JetScalar& JetScalar::operator+=(double rhs) {
  c_[0] += rhs;
  return *this;
}

JetScalar& JetScalar::operator-=(double rhs) {
  c_[0] -= rhs;
  return *this;
}

JetScalar& JetScalar::operator*=(double rhs) {
  for (double& c : c_) c *= rhs;
  return *this;
}

JetScalar& JetScalar::operator/=(double rhs) {
  if (std::abs(rhs) <= 1e-300) fail(Errc::domain, "division by ~0");
  for (double& c : c_) c /= rhs;
  return *this;
}

JetScalar operator-(const JetScalar& a) { return a * -1.0; }
JetScalar operator+(JetScalar a, const JetScalar& b) { return a += b; }
JetScalar operator-(JetScalar a, const JetScalar& b) { return a -= b; }

JetScalar operator*(const JetScalar& a, const JetScalar& b) {
  if (&a.layout() != &b.layout())
    fail(Errc::shape_mismatch, "jets differ in variable count or order");
  JetScalar out = JetScalar::constant_like(a, 0.0);
  auto ca = a.coeffs();
  auto cb = b.coeffs();
  auto co = out.coeffs();
  for (const auto& t : a.layout().product_terms()) co[t.out] += ca[t.lhs] * cb[t.rhs];
  return out;
}

JetScalar operator/(const JetScalar& a, const JetScalar& b) { return a * reciprocal(b); }
JetScalar operator+(JetScalar a, double b) { return a += b; }
JetScalar operator+(double a, JetScalar b) { return b += a; }
JetScalar operator-(JetScalar a, double b) { return a -= b; }
JetScalar operator-(double a, const JetScalar& b) { return -b + a; }
JetScalar operator*(JetScalar a, double b) { return a *= b; }
JetScalar operator*(double a, JetScalar b) { return b *= a; }
JetScalar operator/(JetScalar a, double b) { return a /= b; }
JetScalar operator/(double a, const JetScalar& b) { return reciprocal(b) * a; }

JetScalar compose(std::span<const double> taylor, const JetScalar& u) {
  if (taylor.empty()) fail(Errc::domain, "empty Taylor expansion");
  const std::size_t top = std::min<std::size_t>(taylor.size() - 1, u.max_order());
  JetScalar delta = u;
  delta.coeffs()[0] = 0.0;
  JetScalar result = JetScalar::constant_like(u, taylor[top]);
  for (std::size_t k = top; k-- > 0;) {
    result = result * delta;
    result.coeffs()[0] += taylor[k];
  }
  return result;
}

JetScalar reciprocal(const JetScalar& u) {
  const double t = u.value();
  if (std::abs(t) <= 1e-300) fail(Errc::domain, "division by ~0");
  std::vector<double> c(u.max_order() + 1);
  double p = 1.0 / t;
  for (auto& ck : c) {
    ck = p;
    p *= -1.0 / t;
  }
  return compose(c, u);
}

JetScalar pow(const JetScalar& u, double p) {
  if (p == std::floor(p) && std::abs(p) <= 64.0) return pow(u, static_cast<int>(p));
  const double t = u.value();
  if (t <= 0.0) fail(Errc::domain, "real power of non-positive value");
  std::vector<double> c(u.max_order() + 1);
  for (int k = 0; k <= u.max_order(); ++k) c[k] = generalized_binomial(p, k) * std::pow(t, p - k);
  return compose(c, u);
}

JetScalar sqrt(const JetScalar& u) {
  if (u.value() <= 0.0) fail(Errc::domain, "sqrt of non-positive value");
  return pow(u, 0.5);
}

JetScalar pow(const JetScalar& u, int p) {
  if (p < 0) return reciprocal(pow(u, -p));
  JetScalar result = JetScalar::constant_like(u, 1.0);
  JetScalar base = u;
  while (p > 0) {
    if (p & 1) result = result * base;
    p >>= 1;
    if (p > 0) base = base * base;
  }
  return result;
}

JetScalar pow(const JetScalar& u, const JetScalar& p) { return exp(p * log(u)); }

JetScalar exp(const JetScalar& u) {
  std::vector<double> c(u.max_order() + 1);
  const double e = std::exp(u.value());
  for (int k = 0; k <= u.max_order(); ++k) c[k] = e / factorial(k);
  return compose(c, u);
}

JetScalar log(const JetScalar& u) {
  const double t = u.value();
  if (t <= 0.0) fail(Errc::domain, "log of non-positive value");
  std::vector<double> c(u.max_order() + 1);
  c[0] = std::log(t);
  for (int k = 1; k <= u.max_order(); ++k) c[k] = ((k % 2 == 1) ? 1.0 : -1.0) / (k * std::pow(t, k));
  return compose(c, u);
}

JetScalar sin(const JetScalar& u) {
  std::vector<double> c(u.max_order() + 1);
  for (int k = 0; k <= u.max_order(); ++k) c[k] = std::sin(u.value() + k * std::numbers::pi / 2) / factorial(k);
  return compose(c, u);
}

JetScalar cos(const JetScalar& u) {
  std::vector<double> c(u.max_order() + 1);
  for (int k = 0; k <= u.max_order(); ++k) c[k] = std::cos(u.value() + k * std::numbers::pi / 2) / factorial(k);
  return compose(c, u);
}

JetScalar atan(const JetScalar& u) {
  const int order = u.max_order();
  std::vector<double> c(order + 1);
  c[0] = std::atan(u.value());
  if (order > 0) {
    // atan' = 1 / (1 + t^2); integrate its univariate expansion term-wise.
    const JetScalar t = JetScalar::variable(0, u.value(), 1, order - 1);
    const JetScalar w = 1.0 / (1.0 + t * t);
    for (int k = 1; k <= order; ++k) c[k] = w.coeffs()[k - 1] / k;
  }
  return compose(c, u);
}

JetScalar abs(const JetScalar& u) {
  if (u.value() == 0.0) fail(Errc::domain, "abs is not differentiable at 0");
  return u.value() > 0.0 ? u : -u;
}

JetScalar integrate_univariate(const JetScalar& u) {
  if (u.n_vars() != 1) fail(Errc::shape_mismatch, "integration requires a univariate jet");
  JetScalar out = JetScalar::constant_like(u, 0.0);
  auto in = u.coeffs();
  auto c = out.coeffs();
  for (std::size_t k = 1; k < c.size(); ++k) c[k] = in[k - 1] / static_cast<double>(k);
  return out;
}

JetScalar jet_variable(int index, double point_value, int n_vars, int max_order) {
  return JetScalar::variable(index, point_value, n_vars, max_order);
}

JetScalar jet_apply(ElementaryFn fn, std::span<const JetScalar> args) {
  const bool binary = fn == ElementaryFn::add || fn == ElementaryFn::sub || fn == ElementaryFn::mul ||
                      fn == ElementaryFn::div || fn == ElementaryFn::pow;
  const std::size_t arity = binary ? 2 : 1;
  if (args.size() != arity)
    throw Error(Errc::arity, "expected " + std::to_string(arity) + " argument(s), got " + std::to_string(args.size()));
  switch (fn) {
    case ElementaryFn::add: return args[0] + args[1];
    case ElementaryFn::sub: return args[0] - args[1];
    case ElementaryFn::mul: return args[0] * args[1];
    case ElementaryFn::div: return args[0] / args[1];
    case ElementaryFn::pow: {
      const auto c = args[1].coeffs();
      const bool constant_exponent = std::all_of(c.begin() + 1, c.end(), [](double v) { return v == 0.0; });
      return constant_exponent ? pow(args[0], args[1].value()) : pow(args[0], args[1]);
    }
    case ElementaryFn::sqrt: return sqrt(args[0]);
    case ElementaryFn::exp: return exp(args[0]);
    case ElementaryFn::log: return log(args[0]);
    case ElementaryFn::sin: return sin(args[0]);
    case ElementaryFn::cos: return cos(args[0]);
    case ElementaryFn::atan: return atan(args[0]);
    case ElementaryFn::neg: return -args[0];
  }
  fail(Errc::arity, "unknown elementary function");
}

}  // namespace finsler
