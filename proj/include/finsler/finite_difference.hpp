#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "finsler/errors.hpp"

namespace finsler {

/// Default base-point step: 1e-3 scaled by the coordinate magnitude.
inline double default_step(double coordinate) { return 1e-3 * std::max(1.0, std::abs(coordinate)); }

namespace detail {

template <class T>
struct is_std_vector : std::false_type {};
template <class T, class A>
struct is_std_vector<std::vector<T, A>> : std::true_type {};

// (8 (f(x+h) - f(x-h)) - (f(x+2h) - f(x-2h))) / (12 h): one Richardson step on
// the central difference.
template <class V>
V richardson(const V& p1, const V& m1, const V& p2, const V& m2, double h) {
  if constexpr (is_std_vector<V>::value) {
    V out;
    out.reserve(p1.size());
    for (std::size_t k = 0; k < p1.size(); ++k) out.push_back(richardson(p1[k], m1[k], p2[k], m2[k], h));
    return out;
  } else {
    V a = p1 - m1;
    V b = p2 - m2;
    V out = a * (8.0 / (12.0 * h)) - b * (1.0 / (12.0 * h));
    return out;
  }
}

template <class Field>
auto central_difference(Field&& field, const Eigen::VectorXd& x, int axis, double h) {
  using Value = std::decay_t<std::invoke_result_t<Field&, const Eigen::VectorXd&>>;
  auto at = [&](double offset) -> Value {
    Eigen::VectorXd xs = x;
    xs[axis] += offset;
    try {
      return field(xs);
    } catch (const Error& e) {
      if (e.code() == Errc::evaluation) throw;
      throw Error(Errc::evaluation, std::string("field failed at stencil point: ") + e.what());
    } catch (const std::exception& e) {
      throw Error(Errc::evaluation, std::string("field failed at stencil point: ") + e.what());
    }
  };
  const Value p1 = at(h);
  const Value m1 = at(-h);
  const Value p2 = at(2.0 * h);
  const Value m2 = at(-2.0 * h);
  return richardson<Value>(p1, m1, p2, m2, h);
}

}  // namespace detail

/// Central finite difference along `axis` with one Richardson extrapolation
/// step (stencil x +- h, x +- 2h). `order` 2 differences the order-1 estimate
/// again with the same step. The field may return any value type closed under
/// subtraction and scaling (double, Eigen dense objects, JetScalar, or
/// std::vector of those).
template <class Field>
auto base_derivative(Field&& field, const Eigen::VectorXd& x, int axis, int order = 1, double h0 = 0.0) {
  if (axis < 0 || axis >= x.size()) fail(Errc::dimension_mismatch, "derivative axis out of range");
  if (order != 1 && order != 2) fail(Errc::domain, "base_derivative supports order 1 or 2");
  const double h = h0 > 0.0 ? h0 : default_step(x[axis]);
  if (order == 2) {
    auto inner = [&](const Eigen::VectorXd& xs) { return detail::central_difference(field, xs, axis, h); };
    return detail::central_difference(inner, x, axis, h);
  }
  return detail::central_difference(field, x, axis, h);
}

/// Gradient of a scalar field via base_derivative on every axis.
template <class Field>
Eigen::VectorXd base_gradient(Field&& field, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  for (int i = 0; i < x.size(); ++i) g[i] = base_derivative(field, x, i);
  return g;
}

}  // namespace finsler
