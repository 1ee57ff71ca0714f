// Oracles for the linear-algebra layer.  Every expected value below was
// worked out by hand before being frozen here; nothing is a regression
// snapshot of the implementation's own output.
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oeq/linalg.hpp"

using oeq::Mat;
using oeq::Vec;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

}  // namespace

TEST_CASE("rank_report counts singular values above the relative cutoff") {
  Mat m(2, 2);
  m << 2.0, 0.0, 0.0, 0.5;
  const oeq::RankReport full = oeq::rank_report(m);
  CHECK(full.rank == 2);
  CHECK(full.singular_values.size() == 2);
  CHECK(full.singular_values[0] == doctest::Approx(2.0));
  CHECK(full.singular_values[1] == doctest::Approx(0.5));

  Mat deficient(2, 2);
  deficient << 1.0, 2.0, 2.0, 4.0;  // rank one: second row is twice the first
  CHECK(oeq::rank_report(deficient).rank == 1);

  CHECK(oeq::rank_report(Mat::Zero(3, 2)).rank == 0);
}

TEST_CASE("orthonormal_span collapses dependent vectors") {
  // Two collinear vectors span a line; the canonical basis vector points in
  // the positive direction of the largest component.
  const oeq::Subspace line =
      oeq::orthonormal_span(2, std::vector<Vec>{v2(1, 0), v2(2, 0)});
  REQUIRE(line.rank() == 1);
  CHECK(line.basis()(0, 0) == doctest::Approx(1.0));
  CHECK(line.basis()(1, 0) == doctest::Approx(0.0));

  // (1,1) and (2,4) are independent, so they span the whole plane.
  const oeq::Subspace plane =
      oeq::orthonormal_span(2, std::vector<Vec>{v2(1, 1), v2(2, 4)});
  CHECK(plane.rank() == 2);

  const oeq::Subspace empty = oeq::orthonormal_span(2, std::vector<Vec>{});
  CHECK(empty.rank() == 0);
  CHECK(empty.ambient_dim() == 2);
}

TEST_CASE("orthonormal_span canonicalizes basis signs") {
  // The same span presented differently yields the same subspace, and each
  // basis column carries a pinned sign so certificates can freeze columns.
  const oeq::Subspace a =
      oeq::orthonormal_span(3, std::vector<Vec>{v3(1, 1, 0), v3(0, 0, 1)});
  const oeq::Subspace b =
      oeq::orthonormal_span(3, std::vector<Vec>{v3(-2, -2, 0), v3(0, 0, 3)});
  REQUIRE(a.rank() == 2);
  REQUIRE(b.rank() == 2);
  CHECK(oeq::same_span(a, b, 1e-12));
  // Canonical sign: each basis column's largest-magnitude entry is positive.
  for (oeq::Index c = 0; c < a.basis().cols(); ++c) {
    oeq::Index arg = 0;
    a.basis().col(c).cwiseAbs().maxCoeff(&arg);
    CHECK(a.basis()(arg, c) > 0.0);
  }
}

TEST_CASE("Subspace validates orthonormality and projects") {
  CHECK_THROWS_AS(oeq::Subspace(2, Mat::Ones(2, 2)), oeq::ValidationError);

  const oeq::Subspace line(2, (Mat(2, 1) << 1.0, 0.0).finished());
  CHECK(line.project(v2(3, 4)).isApprox(v2(3, 0)));
  CHECK(line.distance(v2(3, 4)) == doctest::Approx(4.0));
  CHECK(line.contains(v2(5, 0), 1e-12));
  CHECK_FALSE(line.contains(v2(0, 1), 1e-6));

  CHECK(oeq::Subspace::full(3).rank() == 3);
  CHECK(oeq::Subspace::zero(3).rank() == 0);
  CHECK(oeq::Subspace::zero(3).distance(v3(0, 0, 2)) == doctest::Approx(2.0));
}

TEST_CASE("Pairing requires an invertible gram") {
  CHECK_THROWS_AS(oeq::Pairing(Mat::Zero(2, 2)), oeq::ValidationError);
  CHECK_THROWS_AS(oeq::Pairing(Mat::Ones(2, 3)), oeq::ValidationError);

  const oeq::Pairing dot = oeq::Pairing::standard(2);
  CHECK(dot.evaluate(v2(1, 2), v2(3, 4)) == doctest::Approx(11.0));

  Mat swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  const oeq::Pairing crossed{swap};
  // <x, a> = x1 a2 + x2 a1.
  CHECK(crossed.evaluate(v2(1, 2), v2(3, 4)) == doctest::Approx(10.0));
  // The transposed pairing swaps the roles of the two arguments.
  CHECK(crossed.transposed().evaluate(v2(3, 4), v2(1, 2)) == doctest::Approx(10.0));
}

TEST_CASE("annihilator under the dot product is the Euclidean complement") {
  const oeq::Pairing dot = oeq::Pairing::standard(2);

  const oeq::Subspace of_zero = oeq::annihilator(oeq::Subspace::zero(2), dot);
  CHECK(of_zero.rank() == 2);

  const oeq::Subspace line =
      oeq::orthonormal_span(2, std::vector<Vec>{v2(1, 0)});
  const oeq::Subspace perp = oeq::annihilator(line, dot);
  REQUIRE(perp.rank() == 1);
  CHECK(std::abs(perp.basis()(1, 0)) == doctest::Approx(1.0));

  CHECK(oeq::annihilator(oeq::Subspace::full(2), dot).rank() == 0);
}

TEST_CASE("annihilator respects a non-standard gram") {
  // With <x, a> = x^T G a and G the coordinate swap, the functionals killing
  // span{(1,0)} are those with vanishing *second* G-component, i.e. the dual
  // vectors proportional to (1,0).
  Mat swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  const oeq::Pairing crossed{swap};
  const oeq::Subspace line =
      oeq::orthonormal_span(2, std::vector<Vec>{v2(1, 0)});

  const oeq::Subspace ann = oeq::annihilator(line, crossed);
  REQUIRE(ann.rank() == 1);
  CHECK(std::abs(ann.basis()(0, 0)) == doctest::Approx(1.0));
  CHECK(ann.basis()(1, 0) == doctest::Approx(0.0));

  // Taking the annihilator of that dual line lands back on the original span.
  const oeq::Subspace back = oeq::annihilator(ann, crossed, /*of_dual=*/true);
  CHECK(oeq::same_span(back, line, 1e-12));
}

TEST_CASE("adjoint matches the pairing identity on a worked example") {
  // S: R^1 -> R^2, Sx = (2x, 0), with <x,a>_E = 2xa and the dot product on F.
  // <Sx, b>_F = 2x b1 must equal <x, S*b>_E = 2x (S*b), so S*b = b1.
  const oeq::Pairing e_pairing{(Mat(1, 1) << 2.0).finished()};
  const oeq::LinearOperator forward{(Mat(2, 1) << 2.0, 0.0).finished(), e_pairing,
                                    oeq::Pairing::standard(2)};
  const oeq::LinearOperator dual = oeq::adjoint(forward);
  REQUIRE(dual.matrix().rows() == 1);
  REQUIRE(dual.matrix().cols() == 2);
  CHECK(dual.matrix()(0, 0) == doctest::Approx(1.0));
  CHECK(dual.matrix()(0, 1) == doctest::Approx(0.0));

  // The defining identity on a grid of vectors.
  for (double x : {1.0, -2.0, 0.5}) {
    for (double b1 : {1.0, 3.0}) {
      for (double b2 : {0.0, -1.0}) {
        const Vec xs = (Vec(1) << x).finished();
        const Vec b = v2(b1, b2);
        const double lhs =
            forward.codomain_pairing().evaluate(forward.apply(xs), b);
        const double rhs =
            forward.domain_pairing().evaluate(xs, dual.apply(b));
        CHECK(lhs == doctest::Approx(rhs));
      }
    }
  }
}

TEST_CASE("adjoint is an involution and transfers invertibility") {
  Mat ge(2, 2);
  ge << 2.0, 1.0, 0.0, 1.0;  // invertible but deliberately non-symmetric
  Mat gf(2, 2);
  gf << 1.0, 0.0, 1.0, 3.0;
  Mat s(2, 2);
  s << 1.0, 2.0, -1.0, 0.5;
  const oeq::LinearOperator op{s, oeq::Pairing{ge}, oeq::Pairing{gf}};

  const oeq::LinearOperator twice = oeq::adjoint(oeq::adjoint(op));
  CHECK((twice.matrix() - s).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK((twice.domain_pairing().gram() - ge).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));
  CHECK((twice.codomain_pairing().gram() - gf).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));

  CHECK(oeq::is_invertible(op));
  CHECK(oeq::is_invertible(oeq::adjoint(op)));

  // With the standard pairing the adjoint is the plain transpose, so a
  // symmetric matrix is self-adjoint.
  Mat sym(2, 2);
  sym << 1.0, 2.0, 2.0, 5.0;
  const oeq::LinearOperator self = oeq::LinearOperator::plain(sym);
  CHECK((oeq::adjoint(self).matrix() - sym).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));

  // Rank-deficient square maps stay rank-deficient under the adjoint.
  Mat singular(2, 2);
  singular << 1.0, 2.0, 2.0, 4.0;
  const oeq::LinearOperator flat{singular, oeq::Pairing{ge}, oeq::Pairing{gf}};
  CHECK_FALSE(oeq::is_invertible(flat));
  CHECK_FALSE(oeq::is_invertible(oeq::adjoint(flat)));
  CHECK(oeq::condition_number(oeq::adjoint(flat)) == oeq::kInf);
}

TEST_CASE("quotient_projection produces representatives of L modulo M") {
  // M = 0: the quotient is L itself and the map is the identity.
  const oeq::Subspace plane = oeq::Subspace::full(2);
  const oeq::QuotientProjection trivial =
      oeq::quotient_projection(plane, oeq::Subspace::zero(2));
  CHECK(trivial.representatives.rank() == 2);
  CHECK((trivial.map.matrix() - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() ==
        doctest::Approx(0.0));

  // L = R^2, M = the second axis: representatives are the first axis and the
  // component map reads off the first coordinate.
  const oeq::Subspace axis2 =
      oeq::orthonormal_span(2, std::vector<Vec>{v2(0, 1)});
  const oeq::QuotientProjection split = oeq::quotient_projection(plane, axis2);
  REQUIRE(split.representatives.rank() == 1);
  CHECK(split.representatives.basis()(0, 0) == doctest::Approx(1.0));
  REQUIRE(split.map.matrix().rows() == 1);
  CHECK(split.map.matrix()(0, 0) == doctest::Approx(1.0));
  CHECK(split.map.matrix()(0, 1) == doctest::Approx(0.0));

  // L = M: the quotient is zero-dimensional.
  const oeq::QuotientProjection collapsed =
      oeq::quotient_projection(axis2, axis2);
  CHECK(collapsed.representatives.rank() == 0);

  // M must actually sit inside L.
  const oeq::Subspace axis1 =
      oeq::orthonormal_span(2, std::vector<Vec>{v2(1, 0)});
  CHECK_THROWS_AS(oeq::quotient_projection(axis1, axis2), oeq::ValidationError);
}

TEST_CASE("operator_norm and condition_number on diagonal oracles") {
  CHECK(oeq::operator_norm(Mat::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(oeq::condition_number(Mat::Identity(3, 3)) == doctest::Approx(1.0));

  Mat d(2, 2);
  d << 2.0, 0.0, 0.0, 0.5;
  CHECK(oeq::operator_norm(d) == doctest::Approx(2.0));
  CHECK(oeq::condition_number(d) == doctest::Approx(4.0));

  CHECK(oeq::operator_norm(Mat::Zero(2, 2)) == doctest::Approx(0.0));
  CHECK(oeq::condition_number(Mat::Zero(2, 2)) == oeq::kInf);

  // Empty map: norm 0 by convention, condition 1 (nothing to distort).
  CHECK(oeq::operator_norm(Mat(0, 0)) == doctest::Approx(0.0));
  CHECK(oeq::condition_number(Mat(0, 0)) == doctest::Approx(1.0));

  // Rectangular maps are never invertible operators.
  const oeq::LinearOperator rect = oeq::LinearOperator::plain(Mat::Ones(2, 1));
  CHECK_FALSE(oeq::is_invertible(rect));
}

TEST_CASE("columns_from_vectors validates lengths") {
  const Mat cols = oeq::columns_from_vectors(2, {v2(1, 2), v2(3, 4)});
  CHECK(cols.rows() == 2);
  CHECK(cols.cols() == 2);
  CHECK(cols(1, 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(oeq::columns_from_vectors(3, {v2(1, 2)}), oeq::ValidationError);
}
