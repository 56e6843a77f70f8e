#include <gtest/gtest.h>

#include "aluthge/transforms.hpp"
#include "support.hpp"

using namespace aluthge;
using testing_support::Gen;
using testing_support::opnorm;

namespace {

const ComplexMatrix kShift2{{0.0, 2.0}, {0.0, 0.0}};

double dist(const Dense& a, const Dense& b) { return (a - b).norm(); }

std::vector<FunctionPair> all_builtin_pairs() {
  std::vector<FunctionPair> pairs = builtin_custom_pairs();
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) pairs.push_back(make_power_pair(t));
  return pairs;
}

}  // namespace

TEST(AluthgeGeneral, ScaledShiftVanishes) {
  const TransformResult r = aluthge_general(kShift2, make_power_pair(0.5));
  EXPECT_LE(r.transformed.dense().norm(), 1e-15);
  EXPECT_EQ(r.pair, "power:0.5");
  EXPECT_EQ(r.factors.numerical_rank, 1);
}

TEST(AluthgeGeneral, NormalUnitModulusIsFixed) {
  const ComplexMatrix d{{1.0, 0.0}, {0.0, Complex(0.0, 1.0)}};
  for (const FunctionPair& p : all_builtin_pairs())
    EXPECT_LE(dist(aluthge_general(d, p).transformed.dense(), d.dense()), 1e-10) << p.label;
}

TEST(AluthgeGeneral, IdentityUnderRationalPair) {
  const ComplexMatrix id = ComplexMatrix::identity(3);
  EXPECT_LE(dist(aluthge_general(id, parse_pair("rational")).transformed.dense(), id.dense()), 1e-15);
}

TEST(AluthgeGeneral, ComposesFromPolarOutputs) {
  Gen g(21);
  const ComplexMatrix a = g.square(5);
  const FunctionPair p = parse_pair("exp");
  const TransformResult r = aluthge_general(a, p);
  const Dense expected = r.factors.apply(p.f).dense() * r.factors.isometry.dense() * r.factors.apply(p.g).dense();
  EXPECT_EQ(r.transformed.dense(), expected);
}

TEST(AluthgeT, Examples) {
  EXPECT_LE(aluthge_t(kShift2, 0.5).transformed.dense().norm(), 1e-15);
  // |A| U = diag(0, 2) [[0, 1], [0, 0]] = 0
  EXPECT_LE(aluthge_t(kShift2, 1.0).transformed.dense().norm(), 1e-15);
  Gen g(22);
  const ComplexMatrix h = g.psd(4);
  EXPECT_LE(dist(aluthge_t(h, 0.5).transformed.dense(), h.dense()), 1e-10 * (1 + opnorm(h.dense())));
  EXPECT_THROW(aluthge_t(h, 1.2), InvalidInput);
}

TEST(AluthgeT, DuggalIsAbsTimesIsometry) {
  Gen g(23);
  const ComplexMatrix a = g.square(4);
  const TransformResult r = aluthge_t(a, 1.0);
  EXPECT_LE(dist(r.transformed.dense(), r.factors.positive.dense() * r.factors.isometry.dense()), 1e-12);
}

TEST(AluthgeGeneral, PartialIsometryConventionMattersWhenGZeroIsPositive) {
  // Singular A with g(0) = 1: the kernel of U kills g(|A|)'s kernel component.
  const ComplexMatrix a{{0.0, 1.0}, {0.0, 0.0}};
  const TransformResult r = aluthge_general(a, parse_pair("rational"));
  // f(|A|) = diag(0, 1/2), U = a, g(|A|) = diag(1, 2): product is 0
  EXPECT_LE(r.transformed.dense().norm(), 1e-15);
  // with the unitary completion U' = [[0, 1], [1, 0]] the result would be non-zero
  const Dense u_full{{0.0, 1.0}, {1.0, 0.0}};
  const Dense alt = r.factors.apply(parse_pair("rational").f).dense() * u_full *
                    r.factors.apply(parse_pair("rational").g).dense();
  EXPECT_GT(alt.norm(), 0.4);
}

TEST(NormalityFixpoint, RandomNormalInvertible) {
  Gen g(24);
  for (int k = 0; k < 100; ++k) {
    const ComplexMatrix a = g.normal_invertible(2 + k % 8);
    for (const FunctionPair& p : all_builtin_pairs()) {
      const Dense t = aluthge_general(a, p).transformed.dense();
      EXPECT_LE(opnorm(t - a.dense()), 1e-8 * (1.0 + opnorm(a.dense()))) << p.label;
    }
  }
}

TEST(OffdiagEmbed, Examples) {
  const ComplexMatrix one{{1.0}};
  const ComplexMatrix expected{{0.0, 1.0}, {1.0, 0.0}};
  EXPECT_EQ(offdiag_embed(one, one), expected);

  Gen g(25);
  const ComplexMatrix a = g.square(3), b = g.square(3);
  const ComplexMatrix t = offdiag_embed(a, b);
  const Dense t2 = t.dense() * t.dense();
  EXPECT_LE(dist(t2.topLeftCorner(3, 3), a.dense() * b.dense()), 1e-14);
  EXPECT_LE(dist(t2.bottomRightCorner(3, 3), b.dense() * a.dense()), 1e-14);
  EXPECT_EQ(t2.topRightCorner(3, 3).norm(), 0.0);
  EXPECT_EQ(adjoint(t), offdiag_embed(adjoint(b), adjoint(a)));
  EXPECT_THROW(offdiag_embed(a, g.square(2)), InvalidInput);
  EXPECT_THROW(offdiag_embed(ComplexMatrix::zero(2, 3), ComplexMatrix::zero(2, 3)), InvalidInput);
}

TEST(Block2x2, Examples) {
  Gen g(26);
  const ComplexMatrix a = g.square(2), d = g.square(2), z = ComplexMatrix::zero(2, 2);
  const ComplexMatrix m = block2x2(a, z, z, d);
  EXPECT_EQ(m.dense().topRightCorner(2, 2).norm(), 0.0);
  EXPECT_EQ(m.dense().bottomLeftCorner(2, 2).norm(), 0.0);
  EXPECT_EQ(Dense(m.dense().topLeftCorner(2, 2)), a.dense());

  const ComplexMatrix corner = block2x2(z, a, z, z);
  EXPECT_EQ(Dense(corner.dense().topRightCorner(2, 2)), a.dense());

  const ComplexMatrix id = ComplexMatrix::identity(3);
  EXPECT_NEAR(opnorm(block2x2(id, id, id, id).dense()), 2.0, 1e-14);
  EXPECT_THROW(block2x2(id, id, id, ComplexMatrix::identity(2)), InvalidInput);
}

TEST(OffdiagTransform, BlockStructure) {
  Gen g(27);
  for (int k = 0; k < 40; ++k) {
    const Index n = 2 + k % 6;
    const ComplexMatrix a = k % 3 == 0 ? g.rank_deficient(n, 1) : g.square(n);
    const ComplexMatrix b = g.square(n);
    for (const FunctionPair& p : all_builtin_pairs()) {
      const Dense tt = aluthge_general(offdiag_embed(a, b), p).transformed.dense();
      const PolarFactors pa = polar_decompose(a), pb = polar_decompose(b);
      const Dense top = pb.apply(p.f).dense() * pa.isometry.dense() * pa.apply(p.g).dense();
      const Dense bottom = pa.apply(p.f).dense() * pb.isometry.dense() * pb.apply(p.g).dense();
      const double scale = 1.0 + top.norm() + bottom.norm();
      EXPECT_LE(dist(tt.topRightCorner(n, n), top), 1e-10 * scale) << p.label;
      EXPECT_LE(dist(tt.bottomLeftCorner(n, n), bottom), 1e-10 * scale) << p.label;
      EXPECT_LE(tt.topLeftCorner(n, n).norm() + tt.bottomRightCorner(n, n).norm(), 1e-10 * scale) << p.label;
    }
  }
}

TEST(ConjugationIdentity, HoldsOnRangeOfAbs) {
  Gen g(28);
  for (int k = 0; k < 60; ++k) {
    const Index n = 2 + k % 7;
    const ComplexMatrix a = k % 2 == 0 ? g.rank_deficient(n, 1 + k % (n - 1)) : g.square(n);
    const PolarFactors pa = polar_decompose(a);
    const PolarFactors pas = polar_decompose(adjoint(a));
    for (const FunctionPair& p : all_builtin_pairs()) {
      const Dense& u = pa.isometry.dense();
      const Dense ga = pa.apply(p.g).dense();
      const Dense proj = pa.range_projection().dense();
      const Dense diff = ga - u.adjoint() * pas.apply(p.g).dense() * u;
      // exp(|A|) reaches e^30 on rank-deficient products; measure relative to it
      EXPECT_LE(opnorm(diff * proj), 1e-8 * (1.0 + opnorm(ga * proj))) << p.label;
    }
  }
}

TEST(ConjugationIdentity, UnrestrictedFormFailsForSingularAWithPositiveGAtZero) {
  const ComplexMatrix a{{0.0, 1.0}, {0.0, 0.0}};
  const FunctionPair p = parse_pair("rational");
  const PolarFactors pa = polar_decompose(a);
  const PolarFactors pas = polar_decompose(adjoint(a));
  const Dense& u = pa.isometry.dense();
  const Dense diff = pa.apply(p.g).dense() - u.adjoint() * pas.apply(p.g).dense() * u;
  EXPECT_GT(opnorm(diff), 0.5);
  EXPECT_LE(opnorm(diff * pa.range_projection().dense()), 1e-15);
}
