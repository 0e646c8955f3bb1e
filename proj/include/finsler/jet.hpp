#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "finsler/errors.hpp"

namespace finsler {

/// Largest truncation order a jet may carry. Fourth y-derivatives of the spray
/// are taken through g^{-1}, which costs two more orders of F^2.
inline constexpr int kMaxJetOrder = 6;
inline constexpr int kMaxJetVars = 9;

/// Dense monomial table for truncated Taylor series in `n_vars` variables.
/// Monomials are graded (all degree-d terms precede degree d+1), so a layout
/// of lower order is always a prefix of a higher one.
class JetLayout {
 public:
  struct Term {
    std::uint16_t lhs;
    std::uint16_t rhs;
    std::uint16_t out;
  };

  static const JetLayout& get(int n_vars, int max_order);

  int n_vars() const noexcept { return n_vars_; }
  int max_order() const noexcept { return max_order_; }
  std::size_t size() const noexcept { return degrees_.size(); }
  int degree(std::size_t k) const { return degrees_[k]; }
  std::span<const int> exponents(std::size_t k) const;
  std::size_t index_of(std::span<const int> alpha) const;
  /// Number of monomials of total degree <= d.
  std::size_t prefix_size(int d) const { return degree_end_[d]; }
  std::span<const Term> product_terms() const { return terms_; }

  /// For monomial k and variable v: index of alpha - e_v (or npos when alpha_v == 0).
  std::size_t lowered(std::size_t k, int v) const { return lowered_[k * n_vars_ + v]; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  JetLayout(int n_vars, int max_order);

  int n_vars_;
  int max_order_;
  std::vector<int> exps_;
  std::vector<int> degrees_;
  std::vector<std::size_t> degree_end_;
  std::vector<Term> terms_;
  std::vector<std::size_t> lowered_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Truncated multivariate Taylor expansion. coeffs()[k] is the Taylor
/// coefficient of the k-th monomial, i.e. the partial derivative divided by
/// alpha!; coeffs()[0] is the value.
class JetScalar {
 public:
  JetScalar(double value, int n_vars, int max_order);

  static JetScalar variable(int index, double point_value, int n_vars, int max_order);
  static JetScalar constant_like(const JetScalar& proto, double value);

  double value() const noexcept { return c_[0]; }
  int n_vars() const noexcept { return layout_->n_vars(); }
  int max_order() const noexcept { return layout_->max_order(); }
  const JetLayout& layout() const noexcept { return *layout_; }

  std::span<const double> coeffs() const noexcept { return c_; }
  std::span<double> coeffs() noexcept { return c_; }
  double coeff(std::span<const int> alpha) const;
  double coeff(std::initializer_list<int> alpha) const;
  /// Partial derivative d^|alpha| / dy^alpha at the expansion point.
  double derivative(std::span<const int> alpha) const;
  double derivative(std::initializer_list<int> alpha) const;

  /// d/dy^var as a jet of order max_order - 1.
  JetScalar partial(int var) const;
  JetScalar truncated(int order) const;

  JetScalar& operator+=(const JetScalar& rhs);
  JetScalar& operator-=(const JetScalar& rhs);
  JetScalar& operator*=(const JetScalar& rhs);
  JetScalar& operator/=(const JetScalar& rhs);
  JetScalar& operator+=(double rhs);
  JetScalar& operator-=(double rhs);
  JetScalar& operator*=(double rhs);
  JetScalar& operator/=(double rhs);

 private:
  JetScalar(const JetLayout* layout);
  void require_same_shape(const JetScalar& rhs) const;

  const JetLayout* layout_;
  std::vector<double> c_;
};

JetScalar operator-(const JetScalar& a);
JetScalar operator+(JetScalar a, const JetScalar& b);
JetScalar operator-(JetScalar a, const JetScalar& b);
JetScalar operator*(const JetScalar& a, const JetScalar& b);
JetScalar operator/(const JetScalar& a, const JetScalar& b);
JetScalar operator+(JetScalar a, double b);
JetScalar operator+(double a, JetScalar b);
JetScalar operator-(JetScalar a, double b);
JetScalar operator-(double a, const JetScalar& b);
JetScalar operator*(JetScalar a, double b);
JetScalar operator*(double a, JetScalar b);
JetScalar operator/(JetScalar a, double b);
JetScalar operator/(double a, const JetScalar& b);

/// f(u) where `taylor` holds the univariate Taylor coefficients of f at
/// u.value(); terms beyond u's order are ignored.
JetScalar compose(std::span<const double> taylor, const JetScalar& u);

JetScalar reciprocal(const JetScalar& u);
JetScalar sqrt(const JetScalar& u);
JetScalar exp(const JetScalar& u);
JetScalar log(const JetScalar& u);
JetScalar sin(const JetScalar& u);
JetScalar cos(const JetScalar& u);
JetScalar atan(const JetScalar& u);
JetScalar abs(const JetScalar& u);
JetScalar pow(const JetScalar& u, double p);
JetScalar pow(const JetScalar& u, int p);
JetScalar pow(const JetScalar& u, const JetScalar& p);

/// Term-wise antiderivative of a univariate jet, dropping the top-order term
/// so the order is preserved; the constant term is zero.
JetScalar integrate_univariate(const JetScalar& u);

enum class ElementaryFn { add, sub, mul, div, pow, sqrt, exp, log, sin, cos, atan, neg };

JetScalar jet_variable(int index, double point_value, int n_vars, int max_order);
JetScalar jet_apply(ElementaryFn fn, std::span<const JetScalar> args);

}  // namespace finsler
