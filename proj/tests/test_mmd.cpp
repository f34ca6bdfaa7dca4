#include <numeric>
#include <vector>

#include <doctest.h>

#include "dlcda/mmd.hpp"
#include "oracles.hpp"

using dlcda::Index;
using dlcda::Matrix;
using dlcda::Vector;

TEST_SUITE("mmd") {

TEST_CASE("build_marginal singleton domains") {
  const Matrix M = dlcda::build_marginal(1, 1);
  Matrix expected(2, 2);
  expected << 1.0, -1.0, -1.0, 1.0;
  CHECK((M - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_marginal 2x2 blocks") {
  const Matrix M = dlcda::build_marginal(2, 2);
  CHECK(M.block(0, 0, 2, 2).isApproxToConstant(0.25, 1e-15));
  CHECK(M.block(2, 2, 2, 2).isApproxToConstant(0.25, 1e-15));
  CHECK(M.block(0, 2, 2, 2).isApproxToConstant(-0.25, 1e-15));
  CHECK(M.block(2, 0, 2, 2).isApproxToConstant(-0.25, 1e-15));
}

TEST_CASE("build_marginal rows sum to zero and matrix is symmetric") {
  const Matrix M = dlcda::build_marginal(3, 2);
  CHECK(M.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("marginal weight quadratic form is positive semidefinite") {
  testing::Gen gen(30);
  const Matrix M0 = dlcda::build_marginal(4, 6);
  const Matrix X = gen.matrix(3, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix A = gen.matrix(3, 2);
    CHECK(dlcda::mmd_value(X, A, M0) >= -1e-12);
  }
}

TEST_CASE("build_conditional on singleton classes") {
  const Matrix M = dlcda::build_conditional({1}, {1}, 1);
  Matrix expected(2, 2);
  expected << 1.0, -1.0, -1.0, 1.0;
  CHECK((M - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("class present only in one domain contributes nothing") {
  // class 2 exists only in the source, class 3 only in the target, so
  // only class 1 (source index 0, target index 2) contributes.
  const Matrix M = dlcda::build_conditional({1, 2}, {1, 3}, 3);
  Matrix expected = Matrix::Zero(4, 4);
  expected(0, 0) = 1.0;
  expected(2, 2) = 1.0;
  expected(0, 2) = expected(2, 0) = -1.0;
  CHECK((M - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_conditional composes per-class marginal blocks") {
  const std::vector<int> ls = {1, 1, 2, 2};
  const std::vector<int> lt = {1, 1, 2, 2};
  const Matrix M = dlcda::build_conditional(ls, lt, 2);
  // class 1 occupies source indices {0,1} and target indices {4,5};
  // the per-class block equals build_marginal(2, 2) on those indices.
  const Matrix B = dlcda::build_marginal(2, 2);
  const std::vector<Index> idx1 = {0, 1, 4, 5};
  const std::vector<Index> idx2 = {2, 3, 6, 7};
  for (const auto& idx : {idx1, idx2}) {
    for (std::size_t a = 0; a < idx.size(); ++a) {
      for (std::size_t b = 0; b < idx.size(); ++b) {
        CHECK(M(idx[a], idx[b]) ==
              doctest::Approx(B(Index(a), Index(b))).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("build_conditional matches the entrywise oracle") {
  testing::Gen gen(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int C = gen.uniform_int(1, 4);
    const auto ls = gen.labels(static_cast<std::size_t>(gen.uniform_int(2, 12)),
                               C);
    const auto lt = gen.labels(static_cast<std::size_t>(gen.uniform_int(2, 12)),
                               C);
    const Matrix M = dlcda::build_conditional(ls, lt, C);
    const Matrix O = testing::conditional_oracle(ls, lt, C);
    CHECK((M - O).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("build_repulsive two source-only classes") {
  const Matrix M = dlcda::build_repulsive({1, 2}, {}, 2);
  Matrix expected(2, 2);
  expected << 2.0, -2.0, -2.0, 2.0;  // ordered pairs (1,2) and (2,1)
  CHECK((M - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_repulsive with a single class is zero") {
  const Matrix M = dlcda::build_repulsive({1, 1}, {1}, 1);
  CHECK(M.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("build_repulsive matches the triple-loop oracle") {
  testing::Gen gen(32);
  for (int trial = 0; trial < 20; ++trial) {
    const int C = gen.uniform_int(1, 3);
    const auto ls = gen.labels(static_cast<std::size_t>(gen.uniform_int(2, 10)),
                               C);
    const auto lt = gen.labels(static_cast<std::size_t>(gen.uniform_int(2, 10)),
                               C);
    const Matrix M = dlcda::build_repulsive(ls, lt, C);
    const Matrix O = testing::repulsive_oracle(ls, lt, C);
    CHECK((M - O).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("builders are permutation-equivariant") {
  testing::Gen gen(33);
  const int C = 3;
  const auto ls = gen.labels(6, C);
  const auto lt = gen.labels(5, C);
  const Matrix M = dlcda::build_conditional(ls, lt, C) +
                   dlcda::build_repulsive(ls, lt, C);

  // swap two source samples and two target samples
  auto ls2 = ls;
  std::swap(ls2[0], ls2[3]);
  auto lt2 = lt;
  std::swap(lt2[1], lt2[4]);
  const Matrix M2 = dlcda::build_conditional(ls2, lt2, C) +
                    dlcda::build_repulsive(ls2, lt2, C);

  const Index n = 11;
  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::swap(perm[0], perm[3]);
  std::swap(perm[7], perm[10]);  // target offsets 1 and 4
  Matrix P = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    P(perm[static_cast<std::size_t>(i)], i) = 1.0;
  }
  CHECK((M2 - P.transpose() * M * P).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("assemble_mstar combinations") {
  testing::Gen gen(34);
  const Matrix m0 = dlcda::build_marginal(3, 3);
  const Matrix Z = Matrix::Zero(6, 6);
  const dlcda::MmdWeights w1 = dlcda::assemble_mstar(m0, Z, Z);
  CHECK((w1.mstar - m0).cwiseAbs().maxCoeff() == 0.0);

  const Matrix M = gen.symmetric(6);
  const dlcda::MmdWeights w2 = dlcda::assemble_mstar(Z, M, M);
  CHECK(w2.mstar.cwiseAbs().maxCoeff() == 0.0);

  const Matrix a = gen.symmetric(6), b = gen.symmetric(6),
               c = gen.symmetric(6);
  const dlcda::MmdWeights w3 = dlcda::assemble_mstar(a, b, c);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = 0; j < 6; ++j) {
      CHECK(w3.mstar(i, j) == a(i, j) + b(i, j) - c(i, j));
    }
  }
  CHECK_THROWS_AS(dlcda::assemble_mstar(a, b, gen.symmetric(5)),
                  dlcda::DimensionMismatch);
}

TEST_CASE("mmd_value vanishes for identical projected point sets") {
  testing::Gen gen(35);
  const Matrix S = gen.matrix(3, 4);
  Matrix X(3, 8);
  X << S, S;  // target samples copy the source samples
  const Matrix A = gen.matrix(3, 2);
  const Matrix M0 = dlcda::build_marginal(4, 4);
  CHECK(std::abs(dlcda::mmd_value(X, A, M0)) <= 1e-12);
}

TEST_CASE("mmd_value one-dimensional arithmetic") {
  Matrix X(1, 2);
  X << 0.0, 2.0;
  const Matrix A = Matrix::Identity(1, 1);
  const Matrix M0 = dlcda::build_marginal(1, 1);
  CHECK(dlcda::mmd_value(X, A, M0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("mmd_value equals the squared projected mean gap") {
  testing::Gen gen(36);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n_s = gen.uniform_int(2, 10);
    const Index n_t = gen.uniform_int(2, 10);
    const Index m = gen.uniform_int(2, 5);
    const Matrix X = gen.matrix(m, n_s + n_t);
    const Matrix A = gen.matrix(m, gen.uniform_int(1, 3));
    const Matrix P = A.transpose() * X;
    const Vector gap = P.leftCols(n_s).rowwise().mean() -
                       P.rightCols(n_t).rowwise().mean();
    const double direct = gap.squaredNorm();
    const double traced =
        dlcda::mmd_value(X, A, dlcda::build_marginal(n_s, n_t));
    CHECK(traced == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("mmd_value validates shapes") {
  testing::Gen gen(37);
  CHECK_THROWS_AS(
      dlcda::mmd_value(gen.matrix(3, 4), gen.matrix(2, 2), Matrix::Zero(4, 4)),
      dlcda::DimensionMismatch);
  CHECK_THROWS_AS(
      dlcda::mmd_value(gen.matrix(3, 4), gen.matrix(3, 2), Matrix::Zero(5, 5)),
      dlcda::DimensionMismatch);
}

}  // TEST_SUITE
