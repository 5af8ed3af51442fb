#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <thread>

#include "codazzi/expr.hpp"
#include "test_util.hpp"

using namespace codazzi;
using testutil::Rng;

namespace {
const std::vector<std::string> kRTh{"r", "th"};
const std::vector<std::string> kUVW{"u", "v", "w"};
}  // namespace

TEST_CASE("parser builds the expected trees") {
  Expr e = parse_expression("r^2 * sin(th)^2", kRTh);
  Expr want = int_pow(Expr::variable("r", 0), 2) * int_pow(sin(Expr::variable("th", 1)), 2);
  CHECK(structurally_equal(e, want));

  Expr one = parse_expression("1", kRTh);
  CHECK(one.is_constant(1.0));

  CHECK(structurally_equal(parse_expression("2 + 3 * r", kRTh),
                           Expr::constant(2.0) + Expr::constant(3.0) * Expr::variable("r", 0)));

  // '^' binds tighter than unary minus.
  Expr neg = parse_expression("-r^2", kRTh);
  CHECK(structurally_equal(neg, -int_pow(Expr::variable("r", 0), 2)));
  CHECK(evaluate(neg, {3.0, 0.0}) == -9.0);

  // scientific notation and negative integer exponents
  CHECK(evaluate(parse_expression("2.5e-1 + r^(-2)", kRTh), {2.0, 0.0}) == doctest::Approx(0.5));
  CHECK(evaluate(parse_expression("r^-2", kRTh), {2.0, 0.0}) == doctest::Approx(0.25));
}

TEST_CASE("syntax errors carry the byte offset") {
  try {
    parse_expression("x + * y", {"x", "y"});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }

  try {
    parse_expression("x + zz * 2", {"x", "y"});
    FAIL("expected an unknown identifier error");
  } catch (const UnknownIdentifierError& e) {
    CHECK(e.name() == "zz");
    CHECK(e.offset() == 4);
  }

  CHECK_THROWS_AS(parse_expression("sin 2", {"x"}), ParseError);
  CHECK_THROWS_AS(parse_expression("(x + 1", {"x"}), ParseError);
  CHECK_THROWS_AS(parse_expression("", {"x"}), ParseError);
}

TEST_CASE("integer powers of negative bases avoid the log rewrite") {
  Expr e = parse_expression("x^3", {"x"});
  CHECK(evaluate(e, {-2.0}) == -8.0);
  // non-integer exponent goes through exp(g log f) and hits the log domain
  Expr frac = parse_expression("x^0.5", {"x"});
  CHECK(evaluate(frac, {4.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(evaluate(frac, {-4.0}), DomainError);
}

TEST_CASE("differentiate: power, chain and independent-variable rules") {
  Expr r2 = parse_expression("r^2", kRTh);
  Expr d1 = differentiate(r2, 0);
  CHECK(to_string(d1) == "2 * r");
  CHECK(evaluate(d1, {3.0, 0.0}) == 6.0);

  Expr s2 = parse_expression("sin(th)^2", kRTh);
  Expr d2 = differentiate(s2, 1);
  CHECK(to_string(d2) == "2 * sin(th) * cos(th)");

  Expr ds = differentiate(parse_expression("sin(th)", kRTh), 0);
  CHECK(ds.is_zero());
}

TEST_CASE("evaluate: values and domain errors") {
  CHECK(evaluate(parse_expression("r^2", kRTh), {3.0, 0.0}) == 9.0);

  try {
    evaluate(parse_expression("log(r)", kRTh), {0.0, 0.0});
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    std::string msg = e.what();
    CHECK(msg.find("log") != std::string::npos);
    CHECK(msg.find("(0, 0)") != std::string::npos);
  }
  CHECK_THROWS_AS(evaluate(parse_expression("1 / (r - 3)", kRTh), {3.0, 0.0}), DomainError);
  CHECK_THROWS_AS(evaluate(parse_expression("sqrt(r - 5)", kRTh), {1.0, 0.0}), DomainError);

  // derivative of sin(th)^2 at pi/4 against the finite-difference oracle
  Expr d = differentiate(parse_expression("sin(th)^2", kRTh), 1);
  std::vector<double> p{0.0, 0.7853981633974483};
  double fd = testutil::central_difference(parse_expression("sin(th)^2", kRTh), 1, p, 1e-6);
  CHECK(evaluate(d, p) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(evaluate(d, p) - fd) <= 1e-8);
}

namespace {

// Bounded random expressions that stay smooth on [-1,1]^3.
Expr random_expr(Rng& rng, int depth) {
  if (depth == 0) {
    if (rng.uniform_int(0, 1) == 0) return Expr::constant(rng.uniform(-2.0, 2.0));
    int v = rng.uniform_int(0, 2);
    return Expr::variable(kUVW[static_cast<std::size_t>(v)], v);
  }
  switch (rng.uniform_int(0, 9)) {
    case 0: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 1: return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 3: {  // keep denominators away from zero
      Expr w = random_expr(rng, depth - 1);
      return random_expr(rng, depth - 1) / (Expr::constant(2.5) + w * w);
    }
    case 4: return sin(random_expr(rng, depth - 1));
    case 5: return cos(random_expr(rng, depth - 1));
    case 6: return exp(Expr::constant(0.5) * sin(random_expr(rng, depth - 1)));
    case 7: {
      Expr w = random_expr(rng, depth - 1);
      return log(Expr::constant(2.5) + w * w);
    }
    case 8: {
      Expr w = random_expr(rng, depth - 1);
      return sqrt(Expr::constant(2.5) + w * w);
    }
    default: return int_pow(random_expr(rng, depth - 1), rng.uniform_int(2, 3));
  }
}

}  // namespace

TEST_CASE("property: symbolic derivative matches central differences") {
  Rng rng(20230811);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Expr e = random_expr(rng, 3);
    std::vector<double> p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                          rng.uniform(-1.0, 1.0)};
    int var = rng.uniform_int(0, 2);
    double value = evaluate(e, p);
    if (!std::isfinite(value) || std::fabs(value) > 1e3) continue;
    double sym = evaluate(differentiate(e, var), p);
    double fd = testutil::central_difference(e, var, p, 1e-6);
    if (std::fabs(fd) > 1e3) continue;
    CHECK(std::fabs(sym - fd) <= 1e-6 * (1.0 + std::fabs(sym)));
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("property: printer round-trips through the parser") {
  Rng rng(7771);
  for (int trial = 0; trial < 100; ++trial) {
    Expr e = random_expr(rng, 3);
    Expr back = parse_expression(to_string(e), kUVW);
    for (int k = 0; k < 100; ++k) {
      std::vector<double> p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                            rng.uniform(-1.0, 1.0)};
      CHECK(evaluate(e, p) == evaluate(back, p));
    }
  }
}

TEST_CASE("property: differentiation is linear") {
  Rng rng(424242);
  for (int trial = 0; trial < 100; ++trial) {
    Expr e1 = random_expr(rng, 3);
    Expr e2 = random_expr(rng, 3);
    double a = rng.uniform(-3.0, 3.0);
    int var = rng.uniform_int(0, 2);
    Expr lhs = differentiate(Expr::constant(a) * e1 + e2, var);
    Expr rhs = Expr::constant(a) * differentiate(e1, var) + differentiate(e2, var);
    std::vector<double> p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                          rng.uniform(-1.0, 1.0)};
    CHECK(evaluate(lhs, p) == doctest::Approx(evaluate(rhs, p)).epsilon(1e-14));
  }
}

TEST_CASE("evaluation of a shared DAG is deterministic and pure") {
  Expr x = Expr::variable("u", 0);
  Expr shared = sin(x) * cos(x) + int_pow(x, 3);
  Expr e = shared * shared + shared;
  std::vector<double> p{0.37};
  double first = evaluate(e, p);
  for (int i = 0; i < 10; ++i) CHECK(evaluate(e, p) == first);
}

TEST_CASE("expressions are safe to evaluate from many threads") {
  Rng rng(1618);
  Expr e = random_expr(rng, 4);
  std::vector<std::vector<double>> points;
  std::vector<double> expected;
  for (int i = 0; i < 64; ++i) {
    points.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
    expected.push_back(evaluate(e, points.back()));
  }

  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 8; ++t)
    threads.emplace_back([&, t] {
      for (std::size_t i = static_cast<std::size_t>(t); i < points.size(); i += 8)
        for (int rep = 0; rep < 50; ++rep)
          if (evaluate(e, points[i]) != expected[i]) ++mismatches;
    });
  for (std::thread& t : threads) t.join();
  CHECK(mismatches.load() == 0);
}
