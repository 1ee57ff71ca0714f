// Oracles for sampled maps, the equation residual and the linear fitter.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oeq/equation.hpp"

using oeq::Mat;
using oeq::PointMap;
using oeq::Sample;
using oeq::Vec;

namespace {

Vec v1(double a) {
  Vec v(1);
  v << a;
  return v;
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// f(x) = (x, x^2) against g(a) = (a, 0) solves <f(x), g(a)> = x a under the
// dot product even though f is nonlinear: the parabola's second coordinate
// never meets the dual data.
oeq::Instance parabola_instance() {
  std::vector<Sample> f_samples;
  std::vector<Sample> g_samples;
  for (double t : {1.0, 2.0, -1.0}) {
    f_samples.push_back({v1(t), v2(t, t * t)});
    g_samples.push_back({v1(t), v2(t, 0.0)});
  }
  return oeq::Instance{oeq::Pairing::standard(1), oeq::Pairing::standard(2),
                       PointMap{1, 2, f_samples}, PointMap{1, 2, g_samples}};
}

}  // namespace

TEST_CASE("PointMap validates dimensions and duplicate consistency") {
  CHECK_THROWS_AS(PointMap(1, 2, {Sample{v2(1, 0), v2(1, 0)}}),
                  oeq::ValidationError);
  CHECK_THROWS_AS(PointMap(1, 2, {Sample{v1(1), v1(1)}}), oeq::ValidationError);

  // Two samples at the same input must agree on the output.
  CHECK_THROWS_AS(PointMap(1, 1, {Sample{v1(1), v1(2)}, Sample{v1(1), v1(3)}}),
                  oeq::ValidationError);
  CHECK_NOTHROW(PointMap(1, 1, {Sample{v1(1), v1(2)}, Sample{v1(1), v1(2)}}));
}

TEST_CASE("PointMap lookup returns the nearest sample within tolerance") {
  const PointMap table{1, 2, {Sample{v1(1), v2(1, 1)}, Sample{v1(2), v2(2, 4)}}};
  const auto hit = table.lookup(v1(1.0));
  REQUIRE(hit.has_value());
  CHECK((*hit - v2(1, 1)).norm() == doctest::Approx(0.0));

  // 1.4 is closer to 1 than to 2 but far beyond the default radius.
  CHECK_FALSE(table.lookup(v1(1.4)).has_value());
  const auto wide = table.lookup(v1(1.4), 0.5);
  REQUIRE(wide.has_value());
  CHECK((*wide - v2(1, 1)).norm() == doctest::Approx(0.0));

  CHECK(table.inputs().cols() == 2);
  CHECK(table.outputs()(1, 1) == doctest::Approx(4.0));
}

TEST_CASE("residual vanishes on the identity pair") {
  std::vector<Sample> id_samples{Sample{v2(1, 0), v2(1, 0)},
                                 Sample{v2(0, 1), v2(0, 1)}};
  const oeq::Instance instance{oeq::Pairing::standard(2),
                               oeq::Pairing::standard(2),
                               PointMap{2, 2, id_samples},
                               PointMap{2, 2, id_samples}};
  const oeq::ResidualReport report = oeq::residual(instance);
  CHECK(report.max_abs_residual == doctest::Approx(0.0));
  CHECK(report.pair_count == 4);
  CHECK(oeq::pairing_scale(instance) == doctest::Approx(2.0));
}

TEST_CASE("residual vanishes on the parabola pair") {
  const oeq::ResidualReport report = oeq::residual(parabola_instance());
  CHECK(report.max_abs_residual == doctest::Approx(0.0));
  CHECK(report.pair_count == 9);
}

TEST_CASE("doubling the dual map produces residual one") {
  // f = id, g = 2 id on R^1 sampled at x = a = 1: <f(1), g(1)> - <1, 1> = 1.
  const oeq::Instance instance{oeq::Pairing::standard(1),
                               oeq::Pairing::standard(1),
                               PointMap{1, 1, {Sample{v1(1), v1(1)}}},
                               PointMap{1, 1, {Sample{v1(1), v1(2)}}}};
  const oeq::ResidualReport report = oeq::residual(instance);
  CHECK(report.max_abs_residual == doctest::Approx(1.0));
  CHECK(report.worst_f_index == 0);
  CHECK(report.worst_g_index == 0);
}

TEST_CASE("residual honours non-standard pairings") {
  // <x, a>_E = 2 x a, f(x) = (2x, 0), g(a) = (a, a^3): the cubic coordinate
  // is invisible because f's second coordinate vanishes.
  std::vector<Sample> f_samples;
  std::vector<Sample> g_samples;
  for (double t : {1.0, 2.0, -1.0}) {
    f_samples.push_back({v1(t), v2(2 * t, 0.0)});
    g_samples.push_back({v1(t), v2(t, t * t * t)});
  }
  const oeq::Instance instance{oeq::Pairing{(Mat(1, 1) << 2.0).finished()},
                               oeq::Pairing::standard(2),
                               PointMap{1, 2, f_samples},
                               PointMap{1, 2, g_samples}};
  CHECK(oeq::residual(instance).max_abs_residual == doctest::Approx(0.0));
  // scale = 1 + max |<x, a>| = 1 + 2 * 2 * 2.
  CHECK(oeq::pairing_scale(instance) == doctest::Approx(9.0));
}

TEST_CASE("residual requires samples on both sides") {
  CHECK_THROWS_AS(
      oeq::residual(oeq::Instance{oeq::Pairing::standard(1),
                                  oeq::Pairing::standard(1),
                                  PointMap{1, 1, {}},
                                  PointMap{1, 1, {Sample{v1(1), v1(1)}}}}),
      oeq::ValidationError);
}

TEST_CASE("fit_linear recovers an exact linear table") {
  const PointMap table{1, 2, {Sample{v1(1), v2(1, 0)}, Sample{v1(2), v2(2, 0)}}};
  const oeq::LinearOperator fitted = oeq::fit_linear(table, 1e-10);
  REQUIRE(fitted.matrix().rows() == 2);
  CHECK(fitted.matrix()(0, 0) == doctest::Approx(1.0));
  CHECK(fitted.matrix()(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("fit_linear rejects the parabola with the documented residual") {
  // Least squares on {1 -> 1, 2 -> 4} gives slope 9/5; the worst pointwise
  // miss is |1.8 - 1| = 0.8, far above any honest tolerance.
  const PointMap table{1, 1, {Sample{v1(1), v1(1)}, Sample{v1(2), v1(4)}}};
  try {
    oeq::fit_linear(table, 1e-8);
    FAIL("expected NotLinearError");
  } catch (const oeq::NotLinearError& err) {
    CHECK(err.residual() == doctest::Approx(0.8));
    CHECK(err.threshold() == doctest::Approx(1e-8 * 5.0));
  }

  // A sloppy enough tolerance accepts the same table and exposes the slope.
  const oeq::LinearOperator forced = oeq::fit_linear(table, 0.5);
  CHECK(forced.matrix()(0, 0) == doctest::Approx(1.8));
}

TEST_CASE("fit_linear picks the minimal-norm interpolant when underdetermined") {
  // One sample in R^2 -> R^1: infinitely many exact fits; the pseudoinverse
  // solution has no component along the unseen direction.
  const PointMap table{2, 1, {Sample{v2(2, 0), v1(4)}}};
  const oeq::LinearOperator fitted = oeq::fit_linear(table, 1e-10);
  CHECK(fitted.matrix()(0, 0) == doctest::Approx(2.0));
  CHECK(fitted.matrix()(0, 1) == doctest::Approx(0.0));
}
