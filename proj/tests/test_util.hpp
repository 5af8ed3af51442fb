#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "codazzi/chart.hpp"

namespace testutil {

// mt19937 is bit-specified by the standard; mapping the raw bits ourselves
// keeps generated cases identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint32_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    double u = (gen_() >> 5) * (1.0 / 134217728.0);  // 27 random bits in [0,1)
    return lo + u * (hi - lo);
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(gen_() % static_cast<std::uint32_t>(hi - lo + 1));
  }

 private:
  std::mt19937 gen_;
};

inline codazzi::Expr parse(const std::string& text, const std::vector<std::string>& coords) {
  return codazzi::parse_expression(text, coords);
}

inline codazzi::ChartManifold make_flat(int n) {
  std::vector<std::string> coords;
  for (int i = 0; i < n; ++i) coords.push_back("x" + std::to_string(i + 1));
  codazzi::Tensor<codazzi::Expr> g(n, 2);
  for (int i = 0; i < n; ++i) g(i, i) = codazzi::Expr::constant(1.0);
  return codazzi::ChartManifold("flat" + std::to_string(n), coords, g);
}

inline codazzi::ChartManifold make_sphere2() {
  std::vector<std::string> coords{"th", "ph"};
  codazzi::Tensor<codazzi::Expr> g(2, 2);
  g(0, 0) = parse("1", coords);
  g(1, 1) = parse("sin(th)^2", coords);
  return codazzi::ChartManifold("s2", coords, g);
}

inline codazzi::ChartManifold make_sphere2_radius(double r) {
  std::vector<std::string> coords{"th", "ph"};
  codazzi::Tensor<codazzi::Expr> g(2, 2);
  std::string r2 = codazzi::detail::format_double(r * r);
  g(0, 0) = parse(r2, coords);
  g(1, 1) = parse(r2 + " * sin(th)^2", coords);
  return codazzi::ChartManifold("s2r", coords, g);
}

inline codazzi::ChartManifold make_sphere3() {
  std::vector<std::string> coords{"ch", "th", "ph"};
  codazzi::Tensor<codazzi::Expr> g(3, 2);
  g(0, 0) = parse("1", coords);
  g(1, 1) = parse("sin(ch)^2", coords);
  g(2, 2) = parse("sin(ch)^2 * sin(th)^2", coords);
  return codazzi::ChartManifold("s3", coords, g);
}

inline codazzi::ChartManifold make_hyperbolic2() {
  std::vector<std::string> coords{"x", "y"};
  codazzi::Tensor<codazzi::Expr> g(2, 2);
  g(0, 0) = parse("1 / y^2", coords);
  g(1, 1) = parse("1 / y^2", coords);
  return codazzi::ChartManifold("h2", coords, g);
}

inline codazzi::ChartManifold make_s2xs2() {
  std::vector<std::string> coords{"th1", "ph1", "th2", "ph2"};
  codazzi::Tensor<codazzi::Expr> g(4, 2);
  g(0, 0) = parse("1", coords);
  g(1, 1) = parse("sin(th1)^2", coords);
  g(2, 2) = parse("4", coords);
  g(3, 3) = parse("4 * sin(th2)^2", coords);
  return codazzi::ChartManifold("s2xs2", coords, g);
}

inline codazzi::ChartManifold make_bump4() {
  std::vector<std::string> coords{"x1", "x2", "x3", "x4"};
  codazzi::Tensor<codazzi::Expr> g(4, 2);
  for (int i = 0; i < 4; ++i) g(i, i) = codazzi::Expr::constant(1.0);
  g(1, 1) = parse("1 + 0.1*(x1 + x3)^3", coords);
  return codazzi::ChartManifold("bump4", coords, g);
}

/// Central finite difference of an expression, the derivative oracle.
inline double central_difference(const codazzi::Expr& e, int var, const std::vector<double>& x,
                                 double h) {
  std::vector<double> hi = x, lo = x;
  hi[static_cast<std::size_t>(var)] += h;
  lo[static_cast<std::size_t>(var)] -= h;
  return (codazzi::evaluate(e, hi) - codazzi::evaluate(e, lo)) / (2.0 * h);
}

/// Central finite difference of a scalar function of two variables.
inline double fd2(const std::function<double(double, double)>& f, double u, double v, int var,
                  double h) {
  return var == 0 ? (f(u + h, v) - f(u - h, v)) / (2.0 * h)
                  : (f(u, v + h) - f(u, v - h)) / (2.0 * h);
}

/// Gauss curvature of a 2D orthogonal metric diag(E, G) by nested finite
/// differences; fully independent of the symbolic pipeline.
inline double gauss_curvature_fd(const std::function<double(double, double)>& E,
                                 const std::function<double(double, double)>& G, double u,
                                 double v, double h = 1e-4) {
  auto root = [&](double a, double b) { return std::sqrt(E(a, b) * G(a, b)); };
  auto P = [&](double a, double b) { return fd2(G, a, b, 0, h) / root(a, b); };
  auto Q = [&](double a, double b) { return fd2(E, a, b, 1, h) / root(a, b); };
  return -(fd2(P, u, v, 0, h) + fd2(Q, u, v, 1, h)) / (2.0 * root(u, v));
}

}  // namespace testutil
