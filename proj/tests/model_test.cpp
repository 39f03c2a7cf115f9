#include "ompsd/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "ompsd/errors.hpp"

namespace ompsd {
namespace {

TEST(Alphabet, BinaryLayout) {
  const Alphabet c = Alphabet::binary();
  ASSERT_EQ(c.nonzero().size(), 2u);
  ASSERT_EQ(c.zero_augmented().size(), 3u);
  EXPECT_EQ(c.zero_augmented()[0], -1.0);
  EXPECT_EQ(c.zero_augmented()[1], 0.0);
  EXPECT_EQ(c.zero_augmented()[2], 1.0);
  EXPECT_TRUE(c.is_binary());
  EXPECT_FALSE(c.contains(0.0));
  EXPECT_TRUE(c.contains_augmented(0.0));
  EXPECT_EQ(c.nearest_nonzero(0.0), 1.0);
  EXPECT_EQ(c.nearest_nonzero(-0.2), -1.0);
}

TEST(Alphabet, RejectsInvalidSets) {
  EXPECT_THROW(Alphabet({}), ParamError);
  EXPECT_THROW(Alphabet({-1.0, 0.0, 1.0}), ParamError);
  EXPECT_THROW(Alphabet({1.0, 1.0}), ParamError);
  EXPECT_THROW(Alphabet({NAN}), ParamError);
}

TEST(DrawSparseSignal, ZeroSparsity) {
  Rng rng(1);
  EXPECT_EQ(count_nonzeros(draw_sparse_signal(50, 0, Alphabet::binary(), rng)), 0u);
}

TEST(DrawSparseSignal, ForcedSupportHasFairSign) {
  int plus = 0;
  constexpr int kDraws = 4000;
  Rng rng(2);
  for (int i = 0; i < kDraws; ++i) {
    const Vector x = draw_sparse_signal(1, 1, Alphabet::binary(), rng);
    ASSERT_EQ(std::abs(x(0)), 1.0);
    plus += x(0) > 0 ? 1 : 0;
  }
  EXPECT_NEAR(plus, kDraws / 2, 95);
}

TEST(DrawSparseSignal, SupportMarginalIsSOverL) {
  constexpr int kDraws = 100000;
  Rng rng(3);
  std::vector<int> hits(10, 0);
  for (int i = 0; i < kDraws; ++i) {
    const Vector x = draw_sparse_signal(10, 3, Alphabet::binary(), rng);
    ASSERT_EQ(count_nonzeros(x), 3u);
    for (int k = 0; k < 10; ++k) hits[k] += x(k) != 0.0 ? 1 : 0;
  }
  const double se = std::sqrt(0.3 * 0.7 / kDraws);
  for (int k = 0; k < 10; ++k) EXPECT_NEAR(hits[k] / double(kDraws), 0.3, 3 * se) << "index " << k;
}

TEST(DrawSparseSignal, ExactSparsityAndAlphabet) {
  Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const std::size_t L = 1 + rng.below(300);
    const std::size_t s = rng.below(L + 1);
    const Vector x = draw_sparse_signal(L, s, Alphabet::binary(), rng);
    EXPECT_EQ(count_nonzeros(x), s);
    for (Eigen::Index k = 0; k < x.size(); ++k) EXPECT_TRUE(Alphabet::binary().contains_augmented(x(k)));
  }
  EXPECT_THROW(draw_sparse_signal(3, 4, Alphabet::binary(), rng), ParamError);
}

TEST(SnrConversion, Values) {
  EXPECT_EQ(snr_db_to_sigma2(0.0), 1.0);
  EXPECT_NEAR(snr_db_to_sigma2(10.0), 0.1, 1e-16);
  EXPECT_NEAR(snr_db_to_sigma2(18.0), 0.0158489319246111, 1e-15);
}

TEST(Measure, NoiselessCases) {
  Rng rng(5);
  const Matrix a = Matrix::Random(4, 6);
  EXPECT_EQ(measure(a, Vector::Zero(6), 0.0, rng), Vector::Zero(4));
  Vector x(2);
  x << 1, -1;
  EXPECT_EQ(measure(Matrix::Identity(2, 2), x, 0.0, rng), x);
}

TEST(Measure, NoiselessIsLinear) {
  Rng rng(6);
  const Matrix a = Matrix::Random(8, 12);
  const Vector x1 = Vector::Random(12), x2 = Vector::Random(12);
  const Vector lhs = measure(a, x1 + x2, 0.0, rng);
  const Vector rhs = measure(a, x1, 0.0, rng) + measure(a, x2, 0.0, rng);
  EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Measure, NoiseVariance) {
  Rng rng(7);
  const Matrix a = Matrix::Random(3, 3);
  const Vector x = Vector::Ones(3);
  const double clean = (a * x)(0);
  constexpr int kDraws = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const double n = measure(a, x, 0.25, rng)(0) - clean;
    sum += n;
    sum2 += n * n;
  }
  const double mean = sum / kDraws;
  const double var = sum2 / kDraws - mean * mean;
  EXPECT_NEAR(var, 0.25, 0.0025);
}

TEST(Measure, RejectsBadInput) {
  Rng rng(8);
  EXPECT_THROW(measure(Matrix::Zero(2, 3), Vector::Zero(2), 0.0, rng), ParamError);
  EXPECT_THROW(measure(Matrix::Zero(2, 3), Vector::Zero(3), -1.0, rng), ParamError);
}

TEST(DrawInstance, PureFunctionOfInputs) {
  const Instance a = draw_instance({64, 32, 5}, 12.0, 99);
  const Instance b = draw_instance({64, 32, 5}, 12.0, 99);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(a.x_true, b.x_true);
  EXPECT_EQ(a.y, b.y);
  EXPECT_EQ(count_nonzeros(a.x_true), 5u);
  EXPECT_EQ(a.y.size(), 32);
}

TEST(BaseDraw, ReproducesDrawInstanceAtEverySnr) {
  for (double snr : {6.0, 12.0, 18.0, 30.0}) {
    Rng rng(42);
    const BaseDraw base = draw_base({64, 32, 5}, Alphabet::binary(), rng);
    const Instance direct = draw_instance({64, 32, 5}, snr, 42);
    const Instance derived = base.at(snr_db_to_sigma2(snr));
    EXPECT_EQ(std::memcmp(direct.y.data(), derived.y.data(), sizeof(double) * 32), 0) << snr;
    EXPECT_EQ(direct.x_true, derived.x_true);
    EXPECT_EQ(direct.sigma2, derived.sigma2);
  }
}

}  // namespace
}  // namespace ompsd
