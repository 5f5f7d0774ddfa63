#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "support/generators.hpp"
#include "trisdp/chr/certificate.hpp"
#include "trisdp/chr/eig_oracle.hpp"
#include "trisdp/errors.hpp"

using namespace trisdp;
using namespace trisdp::chr;
using gen::Rng;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

QuadraticSystem hom(std::vector<SymMatrix> quad, Vector rhs) {
  return QuadraticSystem::homogeneous_system(std::move(quad), std::move(rhs));
}

// Query that forces a fully converged maximization.
geometry::PivotAnswer full_max(EigPivotOracle& oracle, const Vector& c) {
  return oracle.maximize(geometry::PivotQuery{c, kInf, -kInf, kInf});
}

}  // namespace

TEST(EvalQ, Examples) {
  EXPECT_EQ(eval_Q(hom({SymMatrix::identity(1)}, vec({1})), vec({2})), vec({4}));
  EXPECT_EQ(eval_Q(hom({SymMatrix::diagonal(vec({1, -1}))}, vec({1})), vec({1, 1})), vec({0}));
  EXPECT_THROW(eval_Q(hom({SymMatrix::identity(2)}, vec({1})), vec({1})), DimensionError);
}

TEST(EvalQ, InhomogeneousTerms) {
  QuadraticSystem sys = hom({SymMatrix::identity(1)}, vec({5}));
  sys.lin = std::vector<Vector>{vec({3})};
  sys.constant = vec({1});
  EXPECT_EQ(eval_Q(sys, vec({1})), vec({5}));
  EXPECT_FALSE(sys.homogeneous());
}

TEST(ApplyA, Examples) {
  const auto sys = hom({SymMatrix::identity(2)}, vec({1}));
  EXPECT_EQ(apply_A(sys, SymMatrix::diagonal(vec({1, 2}))), vec({3}));
  Rng rng(1);
  const auto rs = gen::random_homogeneous(3, 4, rng);
  for (int t = 0; t < 10; ++t) {
    const Vector x = gen::gaussian_vector(3, rng);
    const DenseMatrix xx = x * x.transpose();
    EXPECT_LE(gen::max_abs_diff(apply_A(rs, xx), eval_Q(rs, x)), 1e-12);
    const DenseMatrix y = gen::random_dense_sym(3, rng);
    const Vector got = apply_A(rs, SymMatrix::from_dense(y));
    for (Index k = 0; k < 4; ++k) {
      EXPECT_NEAR(got[k], (rs.quad[k].to_dense() * y).trace(), 1e-10);
    }
  }
}

TEST(ApplyA, RefusesInhomogeneous) {
  QuadraticSystem sys = hom({SymMatrix::identity(1)}, vec({5}));
  sys.lin = std::vector<Vector>{vec({3})};
  EXPECT_THROW(apply_A(sys, SymMatrix::identity(1)), std::logic_error);
}

TEST(Homogenize, RecipeExample) {
  QuadraticSystem sys = hom({SymMatrix::identity(1)}, vec({5}));
  sys.lin = std::vector<Vector>{vec({3})};
  sys.constant = vec({1});
  const auto h = homogenize(sys);
  ASSERT_TRUE(h.added_z);
  ASSERT_EQ(h.system.m(), 2);
  ASSERT_EQ(h.system.n, 2);
  DenseMatrix want(2, 2);
  want << 1, 1.5, 1.5, 0;
  EXPECT_EQ(h.system.quad[0].to_dense(), want);
  EXPECT_EQ(h.system.rhs, vec({4, 1}));
  EXPECT_TRUE(h.system.homogeneous());
  // (x, z) = (1, 1) solves the homogenized system exactly as x = 1 does.
  EXPECT_EQ(eval_Q(h.system, vec({1, 1})), h.system.rhs);
  EXPECT_EQ(h.back_map_point(vec({-1, -1})), vec({1}));
  EXPECT_THROW(h.back_map_point(vec({1, 0})), DegenerateError);
}

TEST(Homogenize, ConstantsOnlyKeepVariables) {
  QuadraticSystem sys = hom({SymMatrix::identity(2)}, vec({5}));
  sys.constant = vec({1});
  const auto h = homogenize(sys);
  EXPECT_FALSE(h.added_z);
  EXPECT_EQ(h.system.rhs, vec({4}));
}

TEST(Homogenize, HomogeneousInputWarns) {
  const auto h = homogenize(hom({SymMatrix::identity(2)}, vec({5})));
  EXPECT_FALSE(h.added_z);
  EXPECT_FALSE(h.warning.empty());
}

TEST(Homogenize, RandomRoundTrip) {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    QuadraticSystem sys = gen::random_homogeneous(4, 3, rng);
    sys.lin = std::vector<Vector>{};
    for (int k = 0; k < 3; ++k) sys.lin->push_back(gen::gaussian_vector(4, rng));
    sys.constant = gen::gaussian_vector(3, rng);
    const auto h = homogenize(sys);
    const Vector x = gen::gaussian_vector(4, rng);
    Vector xz(5);
    xz << x, 1.0;
    const Vector got = eval_Q(h.system, xz);
    const Vector orig = eval_Q(sys, x);
    for (Index k = 0; k < 3; ++k) EXPECT_NEAR(got[k], orig[k] - (*sys.constant)[k], 1e-10);
    EXPECT_NEAR(got[3], 1.0, 1e-15);
  }
}

TEST(RadiusLowerBound, Examples) {
  EXPECT_NEAR(radius_lower_bound(hom({SymMatrix::identity(2)}, vec({4}))), 2.0, 1e-7);
  EXPECT_NEAR(radius_lower_bound(hom({SymMatrix::identity(2).scaled(2.0), SymMatrix::identity(2)},
                                     vec({8, 1}))),
              1.0, 1e-7);
  Rng rng(2);
  EXPECT_NEAR(radius_lower_bound(hom({gen::random_sym(2, rng), SymMatrix::identity(2)},
                                     vec({0, 9}))),
              3.0, 1e-7);
}

TEST(RadiusLowerBound, Errors) {
  EXPECT_THROW(radius_lower_bound(hom({SymMatrix::identity(2)}, vec({0}))), DegenerateError);
  EXPECT_THROW(radius_lower_bound(hom({SymMatrix(2), SymMatrix::identity(2)}, vec({1, 1}))),
               ZeroComponentError);
  const auto zc = zero_components(hom({SymMatrix(2), SymMatrix::identity(2)}, vec({1, 1})));
  ASSERT_EQ(zc.size(), 1u);
  EXPECT_EQ(zc[0], 0);
}

TEST(RadiusLowerBound, NoPointBelowTheBoundReachesB) {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const Index n = 1 + t % 2;
    auto sys = gen::random_homogeneous(n, 2, rng);
    sys.rhs = gen::gaussian_vector(2, rng) * 3.0;
    const double r0 = radius_lower_bound(sys);
    const double r = r0 * (1 - 1e-3);
    // Every point of C(r) has |y_k| <= ||A_k|| r^2 < |b_k| for the binding k.
    Index binding = 0;
    double best = kInf;
    for (Index k = 0; k < 2; ++k) {
      const DenseMatrix a = sys.quad[k].to_dense();
      const double norm = std::max(gen::dense_lambda_max(a), -gen::dense_lambda_min(a));
      const double rk = std::sqrt(std::abs(sys.rhs[k]) / norm);
      if (rk < best) {
        best = rk;
        binding = k;
      }
    }
    EXPECT_NEAR(best, r0, 1e-6 * r0);
    for (int s = 0; s < 200; ++s) {
      const Vector x = gen::point_in_ball(n, r, rng);
      EXPECT_LT(std::abs(eval_Q(sys, x)[binding]), std::abs(sys.rhs[binding]));
    }
  }
}

TEST(EigPivotOracle, DiagonalExample) {
  const auto sys = hom({SymMatrix::diagonal(vec({2, -1}))}, vec({1}));
  EigPivotOracle oracle(sys, 3.0);
  const auto ans = full_max(oracle, vec({1}));
  EXPECT_NEAR(ans.candidate.score, 18.0, 1e-6);
  EXPECT_NEAR(ans.candidate.point[0], 18.0, 1e-6);
  EXPECT_NEAR(std::abs(ans.candidate.payload[0]), 3.0, 1e-6);
  EXPECT_TRUE(ans.maximal);
}

TEST(EigPivotOracle, CompositeAndZeroDirection) {
  const auto sys = hom({SymMatrix::diagonal(vec({1, 0})), SymMatrix::diagonal(vec({0, 1}))},
                       vec({1, 1}));
  EigPivotOracle oracle(sys, 1.0);
  const auto ans = full_max(oracle, vec({1, -1}));
  EXPECT_NEAR(ans.candidate.score, 1.0, 1e-8);
  EXPECT_LE(gen::max_abs_diff(ans.candidate.point, vec({1, 0})), 1e-8);
  EXPECT_THROW(full_max(oracle, vec({0, 0})), DegenerateError);
  EXPECT_THROW(full_max(oracle, vec({1})), DimensionError);
}

TEST(EigPivotOracle, NegativeDefiniteAggregatePicksOrigin) {
  const auto sys = hom({SymMatrix::identity(3)}, vec({1}));
  EigPivotOracle oracle(sys, 2.0);
  const auto ans = full_max(oracle, vec({-1}));
  EXPECT_EQ(ans.candidate.score, 0.0);
  EXPECT_EQ(ans.candidate.payload.norm(), 0.0);
  EXPECT_LE(ans.upper_bound, 1e-12);
}

TEST(EigPivotOracle, MatchesDenseEigensolver) {
  Rng rng(19);
  for (int t = 0; t < 25; ++t) {
    const Index n = 2 + static_cast<Index>(rng() % 30);
    const Index m = 1 + static_cast<Index>(rng() % 5);
    const auto sys = gen::random_homogeneous(n, m, rng);
    const double r = gen::uniform(rng, 0.5, 3.0);
    EigPivotOracle oracle(sys, r);
    const Vector c = gen::gaussian_vector(m, rng);
    const double want = r * r * std::max(gen::dense_lambda_max(gen::aggregate(sys, c)), 0.0);
    const auto ans = full_max(oracle, c);
    EXPECT_NEAR(ans.candidate.score, want, 1e-6 * std::max(1.0, want)) << "trial " << t;
    EXPECT_GE(ans.upper_bound, want - 1e-9 * std::max(1.0, want));
    EXPECT_LE(ans.candidate.payload.norm(), r * (1 + 1e-12));
    EXPECT_LE(gen::max_abs_diff(ans.candidate.point, eval_Q(sys, ans.candidate.payload)), 1e-12);
  }
}

TEST(EigPivotOracle, EarlyStopReturnsUsablePoint) {
  Rng rng(23);
  const auto sys = gen::random_homogeneous(20, 3, rng);
  EigPivotOracle oracle(sys, 1.0);
  const Vector c = gen::gaussian_vector(3, rng);
  const double top = std::max(gen::dense_lambda_max(gen::aggregate(sys, c)), 0.0);
  const double thr = 0.1 * top;
  const auto ans = oracle.maximize(geometry::PivotQuery{c, thr, -kInf, kInf});
  EXPECT_GE(ans.candidate.score, thr);
}

TEST(CertToPsd, Examples) {
  ConvexCertificate one{{{1.0, vec({2, 0})}}, 2.0};
  const auto p = cert_to_psd(one);
  DenseMatrix want = DenseMatrix::Zero(2, 2);
  want(0, 0) = 4;
  EXPECT_EQ(p.x, want);
  EXPECT_DOUBLE_EQ(p.trace_bound, 4.0);

  const double s = std::sqrt(2.0);
  ConvexCertificate two{{{0.5, vec({s, 0})}, {0.5, vec({0, s})}}, s};
  EXPECT_LE((cert_to_psd(two).x - DenseMatrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(CertToPsd, TraceEqualsWeightedNorms) {
  Rng rng(29);
  for (int t = 0; t < 20; ++t) {
    const auto cert = gen::random_certificate(5, 4, 1.7, rng);
    double want = 0.0;
    for (const auto& term : cert.terms) want += term.weight * term.point.squaredNorm();
    const auto p = cert_to_psd(cert);
    EXPECT_NEAR(p.x.trace(), want, 1e-10);
    EXPECT_LE(p.x.trace(), p.trace_bound + 1e-12);
    EXPECT_NO_THROW(p.validate());
  }
}

TEST(PsdToCert, Examples) {
  PsdCertificate p{2.0 * DenseMatrix::Identity(2, 2), 4.0};
  const auto cert = psd_to_cert(p);
  ASSERT_EQ(cert.terms.size(), 2u);
  EXPECT_NEAR(cert.radius, 2.0, 1e-15);
  for (const auto& term : cert.terms) {
    EXPECT_NEAR(term.weight, 0.5, 1e-12);
    EXPECT_NEAR(term.point.norm(), 2.0, 1e-12);
  }
  const auto sys = hom({SymMatrix::identity(2)}, vec({2}));
  const auto id = psd_to_cert(PsdCertificate{DenseMatrix::Identity(2, 2), 2.0});
  EXPECT_NEAR(id.image(sys)[0], 2.0, 1e-12);
}

TEST(PsdToCert, RoundTripReproducesMatrix) {
  Rng rng(31);
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix x = gen::random_psd(4, 2, rng);
    const auto cert = psd_to_cert(PsdCertificate{x, x.trace()});
    EXPECT_LE((cert_to_psd(cert).x - x).norm(), 1e-8 * std::max(1.0, x.norm()));
  }
}

TEST(CertificateValidate, NamesTheProblem) {
  ConvexCertificate c{{{0.5, vec({1, 0})}}, 2.0};
  EXPECT_THROW(c.validate(), DataError);
  c.terms[0].weight = 1.0;
  EXPECT_NO_THROW(c.validate());
  c.radius = 0.5;
  EXPECT_THROW(c.validate(), DataError);
  ConvexCertificate empty;
  EXPECT_THROW(empty.validate(), DataError);
  PsdCertificate bad{DenseMatrix::Identity(2, 2), 1.0};
  EXPECT_THROW(bad.validate(), DataError);
  bad.x(1, 1) = -1.0;
  bad.trace_bound = 10.0;
  EXPECT_THROW(bad.validate(), NotPsdError);
}

TEST(RefineCert, Examples) {
  const auto sys = hom({SymMatrix::diagonal(vec({1, 0})), SymMatrix::diagonal(vec({0, 1}))},
                       vec({1, 0}));
  ConvexCertificate c{{{1.0, vec({std::sqrt(2.0), 0})}}, 2.0};
  auto r = refine_cert(c, sys, sys.rhs);
  EXPECT_LE(gen::max_abs_diff(r.terms[0].point, vec({1, 0})), 1e-12);
  EXPECT_LE(gen::max_abs_diff(eval_Q(sys, r.terms[0].point), vec({1, 0})), 1e-12);

  ConvexCertificate fixed{{{1.0, vec({1, 0})}}, 1.0};
  r = refine_cert(fixed, sys, sys.rhs);
  EXPECT_EQ(r.terms[0].point, vec({1, 0}));

  // Negative gamma leaves the term alone.
  ConvexCertificate neg{{{1.0, vec({0, 1})}}, 1.0};
  r = refine_cert(neg, sys, vec({-1, -1}));
  EXPECT_EQ(r.terms[0].point, vec({0, 1}));
}

TEST(RefineCert, PerTermResidualDoesNotGrow) {
  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    const auto p = gen::planted_instance(4, 3, 1.5, rng);
    const auto r = refine_cert(p.cert, p.system, p.system.rhs);
    ASSERT_EQ(r.terms.size(), p.cert.terms.size());
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
      EXPECT_EQ(r.terms[i].weight, p.cert.terms[i].weight);
      const double before = (eval_Q(p.system, p.cert.terms[i].point) - p.system.rhs).norm();
      const double after = (eval_Q(p.system, r.terms[i].point) - p.system.rhs).norm();
      EXPECT_LE(after, before + 1e-12);
    }
    EXPECT_GE(r.radius, r.max_point_norm() - 1e-12);
  }
}

TEST(CaratheodoryPrune, Examples) {
  const auto sys = hom({SymMatrix::identity(1)}, vec({1}));
  ConvexCertificate c{{{0.3, vec({0.5})}, {0.3, vec({1.0})}, {0.4, vec({1.5})}}, 2.0};
  const auto pr = caratheodory_prune(c, sys);
  EXPECT_TRUE(pr.warning.empty());
  EXPECT_LE(pr.cert.terms.size(), 2u);
  EXPECT_NEAR(pr.cert.image(sys)[0], c.image(sys)[0], 1e-8);
  EXPECT_NEAR(pr.cert.weight_sum(), 1.0, 1e-12);

  ConvexCertificate small{{{0.5, vec({0.5})}, {0.5, vec({1.0})}}, 2.0};
  EXPECT_EQ(caratheodory_prune(small, sys).cert.terms.size(), 2u);

  ConvexCertificate dup{{{0.2, vec({1.0})}, {0.3, vec({1.0})}, {0.5, vec({1.0})}}, 2.0};
  const auto d = caratheodory_prune(dup, sys);
  ASSERT_EQ(d.cert.terms.size(), 1u);
  EXPECT_NEAR(d.cert.terms[0].weight, 1.0, 1e-15);
}

TEST(CaratheodoryPrune, RandomImagesPreserved) {
  Rng rng(43);
  for (int t = 0; t < 30; ++t) {
    const Index m = 1 + static_cast<Index>(rng() % 4);
    const auto sys = gen::random_homogeneous(5, m, rng);
    const auto cert = gen::random_certificate(5, 3 * (m + 1), 2.0, rng);
    const auto pr = caratheodory_prune(cert, sys);
    EXPECT_LE(static_cast<Index>(pr.cert.terms.size()), m + 1);
    EXPECT_LE(gen::max_abs_diff(pr.cert.image(sys), cert.image(sys)), 1e-8);
    for (const auto& term : pr.cert.terms) EXPECT_GE(term.weight, 0.0);
    EXPECT_NEAR(pr.cert.weight_sum(), 1.0, 1e-10);
  }
}
