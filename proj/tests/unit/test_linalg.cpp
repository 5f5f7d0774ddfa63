#include <gtest/gtest.h>

#include <cmath>

#include "support/generators.hpp"
#include "trisdp/errors.hpp"
#include "trisdp/linalg/power_iteration.hpp"
#include "trisdp/linalg/rank_one.hpp"

using namespace trisdp;
using namespace trisdp::linalg;
using trisdp::gen::Rng;

namespace {

SymMatrix swap2() { return SymMatrix::from_triplets(2, {{0, 1, 1.0}}); }

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST(SymMatrix, TripletsAreCanonical) {
  const auto a = SymMatrix::from_triplets(3, {{2, 0, 1.5}, {1, 1, -2.0}});
  ASSERT_EQ(a.stored_count(), 2u);
  EXPECT_EQ(a.entries()[0], (Triplet{0, 2, 1.5}));
  EXPECT_EQ(a.entries()[1], (Triplet{1, 1, -2.0}));
  const DenseMatrix d = a.to_dense();
  EXPECT_EQ(d(2, 0), 1.5);
  EXPECT_EQ(d(0, 2), 1.5);
  EXPECT_DOUBLE_EQ(a.trace(), -2.0);
}

TEST(SymMatrix, RejectsBadTriplets) {
  EXPECT_THROW(SymMatrix::from_triplets(2, {{0, 2, 1.0}}), DataError);
  EXPECT_THROW(SymMatrix::from_triplets(2, {{0, 1, 1.0}, {1, 0, 2.0}}), DataError);
  EXPECT_THROW(SymMatrix::from_triplets(2, {{0, 0, std::nan("")}}), DataError);
}

TEST(SymMatrix, DenseRoundTripAndNorms) {
  Rng rng(3);
  const DenseMatrix d = gen::random_dense_sym(6, rng);
  const auto a = SymMatrix::from_dense(d);
  EXPECT_EQ(a.to_dense(), d);
  EXPECT_NEAR(a.frobenius_norm(), d.norm(), 1e-12);
  EXPECT_NEAR(a.row_abs_sums().maxCoeff(), d.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12);
  EXPECT_GE(a.gershgorin_bound(), d.eigenvalues().cwiseAbs().maxCoeff() - 1e-12);
}

TEST(FrobInner, Examples) {
  EXPECT_DOUBLE_EQ(frob_inner(SymMatrix::identity(2), SymMatrix::identity(2)), 2.0);
  EXPECT_DOUBLE_EQ(frob_inner(swap2(), SymMatrix::identity(2)), 0.0);
  EXPECT_DOUBLE_EQ(frob_inner(swap2(), swap2()), 2.0);
  EXPECT_THROW(frob_inner(SymMatrix::identity(2), SymMatrix::identity(3)), DimensionError);
}

TEST(FrobInner, MatchesDenseTrace) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto x = gen::random_sym(7, rng, 0.4);
    const auto y = gen::random_sym(7, rng, 0.6);
    EXPECT_NEAR(frob_inner(x, y), (x.to_dense() * y.to_dense()).trace(), 1e-12);
  }
}

TEST(Matvec, Examples) {
  EXPECT_EQ(matvec(SymMatrix::identity(2), vec({3, 4})), vec({3, 4}));
  EXPECT_EQ(matvec(swap2(), vec({1, 0})), vec({0, 1}));
  EXPECT_THROW(matvec(swap2(), vec({1, 0, 0})), DimensionError);
  Vector acc = vec({1, 1});
  matvec_add(swap2(), vec({2, 3}), 2.0, acc);
  EXPECT_EQ(acc, vec({7, 5}));
}

TEST(MaxEig, Examples) {
  EXPECT_NEAR(max_eig(SymMatrix::diagonal(vec({3, 1}))).lambda, 3.0, 1e-8);
  // Largest algebraic, not largest magnitude.
  EXPECT_NEAR(max_eig(SymMatrix::diagonal(vec({-5, -1}))).lambda, -1.0, 1e-8);
}

TEST(MaxEig, ConvergedPairHasSmallResidual) {
  Rng rng(11);
  for (int t = 0; t < 10; ++t) {
    const auto a = gen::random_sym(12, rng);
    PowerOptions opt;
    opt.seed = static_cast<std::uint64_t>(t);
    const EigPair e = max_eig(a, opt);
    ASSERT_TRUE(e.converged);
    const Vector r = matvec(a, e.vector) - e.lambda * e.vector;
    EXPECT_LE(r.norm(), opt.tol * std::max(1.0, std::abs(e.lambda)) * (1 + 1e-9));
    EXPECT_NEAR(e.vector.norm(), 1.0, 1e-12);
  }
}

TEST(MaxEig, EarlyStopIsReported) {
  const auto a = SymMatrix::diagonal(vec({3, 2.9, 1}));
  PowerOptions opt;
  opt.early_stop = [](double rho, const Vector&) { return rho > 0.0; };
  const EigPair e = max_eig(a, opt);
  EXPECT_TRUE(e.early_stopped);
  EXPECT_GT(e.lambda, 0.0);
}

TEST(MaxEig, ExhaustionThrowsWithBestEstimate) {
  Rng rng(2);
  const auto a = gen::random_sym(30, rng);
  PowerOptions opt;
  opt.max_iters = 2;
  opt.tol = 1e-15;
  try {
    max_eig(a, opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best().vector.size(), 30);
    EXPECT_FALSE(e.best().converged);
  }
}

TEST(MaxEig, SeededStartIsDeterministic) {
  EXPECT_EQ(random_unit_vector(9, 4), random_unit_vector(9, 4));
  EXPECT_NE(random_unit_vector(9, 4), random_unit_vector(9, 5));
  EXPECT_NEAR(random_unit_vector(9, 4).norm(), 1.0, 1e-15);
}

TEST(SpectralNorm, Examples) {
  EXPECT_NEAR(spectral_norm(SymMatrix::identity(2)), 1.0, 1e-8);
  EXPECT_NEAR(spectral_norm(SymMatrix::diagonal(vec({2, -7}))), 7.0, 1e-7);
}

TEST(DenseMaxEig, AgreesWithEigen) {
  Rng rng(8);
  const DenseMatrix d = gen::random_dense_sym(10, rng);
  const EigPair e = dense_max_eig(d);
  EXPECT_NEAR(e.lambda, gen::dense_lambda_max(d), 1e-12);
  EXPECT_LE((d * e.vector - e.lambda * e.vector).norm(), 1e-10);
}

TEST(RankOne, IdentityExample) {
  const auto d = psd_rank_one_decomp(SymMatrix::identity(2));
  ASSERT_EQ(d.terms.size(), 2u);
  for (const auto& t : d.terms) {
    EXPECT_NEAR(t.weight, 0.5, 1e-12);
    EXPECT_NEAR(t.point.norm(), std::sqrt(2.0), 1e-12);
  }
  EXPECT_NEAR(std::abs(d.terms[0].point.dot(d.terms[1].point)), 0.0, 1e-12);
  EXPECT_LE((d.reconstruct(2) - DenseMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(RankOne, RankOneExample) {
  const Vector v = vec({2, 1});
  const DenseMatrix x = v * v.transpose();
  for (DecompMode mode : {DecompMode::kSpectral, DecompMode::kCholesky}) {
    const auto d = psd_rank_one_decomp(x, mode);
    ASSERT_EQ(d.terms.size(), 1u);
    EXPECT_NEAR(d.terms[0].weight, 1.0, 1e-12);
    EXPECT_NEAR(std::abs(d.terms[0].point.dot(v)), 5.0, 1e-10);
    EXPECT_NEAR(d.terms[0].point.norm(), std::sqrt(5.0), 1e-10);
  }
}

TEST(RankOne, RejectsIndefiniteAndZero) {
  EXPECT_THROW(psd_rank_one_decomp(SymMatrix::diagonal(vec({2, -1}))), NotPsdError);
  EXPECT_THROW(psd_rank_one_decomp(SymMatrix(2)), DegenerateError);
}

TEST(RankOne, RandomPsdInvariants) {
  Rng rng(13);
  for (int t = 0; t < 20; ++t) {
    const Index n = 2 + static_cast<Index>(rng() % 8);
    const DenseMatrix x = gen::random_psd(n, 1 + static_cast<Index>(rng() % n), rng);
    for (DecompMode mode : {DecompMode::kSpectral, DecompMode::kCholesky}) {
      const auto d = psd_rank_one_decomp(x, mode);
      double wsum = 0.0;
      for (const auto& term : d.terms) {
        EXPECT_GE(term.weight, 0.0);
        wsum += term.weight;
        if (mode == DecompMode::kSpectral) {
          EXPECT_NEAR(term.point.norm(), std::sqrt(x.trace()), 1e-8);
        }
      }
      EXPECT_NEAR(wsum, 1.0, 1e-10);
      EXPECT_LE((d.reconstruct(n) - x).norm(), 1e-8 * std::max(1.0, x.norm()));
    }
  }
}

TEST(PivotedCholesky, ReconstructsLowRank) {
  Rng rng(17);
  const DenseMatrix x = gen::random_psd(6, 3, rng);
  const DenseMatrix l = pivoted_cholesky(x);
  EXPECT_EQ(l.cols(), 3);
  EXPECT_LE((l * l.transpose() - x).norm(), 1e-9 * x.norm());
  EXPECT_NEAR(min_eigenvalue(x), 0.0, 1e-9 * x.norm());
}
