#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "satsec/codec.hpp"
#include "satsec/exponents.hpp"

using namespace satsec;

namespace {

BitVector random_bits(std::size_t n, std::mt19937_64& rng) {
  BitVector v(n);
  for (std::size_t i = 0; i < n; ++i)
    if (rng() & 1) v.set(i, true);
  return v;
}

CosetCode identity_coset(std::size_t k, std::size_t kp, std::uint64_t seed) {
  return CosetCode(LinearCode::identity(k + kp), ToeplitzHash(k, kp, HashSeed::from_uint(seed, k, kp)));
}

}  // namespace

TEST(ToeplitzHash, ZeroSeedReturnsMessageBlock) {
  const ToeplitzHash h(4, 4, HashSeed::from_uint(0, 4, 4));
  for (std::uint64_t v = 0; v < 256; ++v) EXPECT_EQ(h.apply(BitVector::from_uint(v, 8)).to_uint(), v & 0xF);
}

TEST(ToeplitzHash, MatrixIsToeplitzInTheSeed) {
  std::mt19937_64 rng(11);
  const auto seed = HashSeed::random(5, 3, rng);
  const ToeplitzHash h(5, 3, seed);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_EQ(h.toeplitz().get(i, j), seed.bits.get(i + 3 - 1 - j));
      if (i + 1 < 5 && j + 1 < 3) EXPECT_EQ(h.toeplitz().get(i, j), h.toeplitz().get(i + 1, j + 1));
    }
  EXPECT_THROW(ToeplitzHash(5, 3, HashSeed{BitVector(6)}), DomainError);
  EXPECT_THROW(h.apply(BitVector(7)), DomainError);
}

TEST(ToeplitzHash, IsLinear) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const ToeplitzHash h(8, 8, HashSeed::random(8, 8, rng));
    const auto a = random_bits(16, rng), b = random_bits(16, rng);
    EXPECT_EQ(h.apply(a ^ b), h.apply(a) ^ h.apply(b));
    EXPECT_EQ(h.matrix() * a, h.apply(a));
  }
}

TEST(ToeplitzHash, Universal2ExhaustiveOverAllPairs) {
  for (auto [k, kp] : {std::pair<std::size_t, std::size_t>{4, 4}, {3, 5}, {5, 3}, {2, 6}}) {
    std::vector<std::pair<BitVector, BitVector>> pairs;
    for (std::uint64_t a = 0; a < (1u << (k + kp)); ++a)
      for (std::uint64_t b = a + 1; b < (1u << (k + kp)); ++b)
        pairs.emplace_back(BitVector::from_uint(a, k + kp), BitVector::from_uint(b, k + kp));
    const auto c = exhaustive_collisions(k, kp, pairs);
    EXPECT_LE(c.max_fraction(), std::ldexp(1.0, -static_cast<int>(k))) << k << "," << kp;
  }
}

TEST(ToeplitzHash, Universal2ExhaustiveAtTwelveBitsViaDifferences) {
  // by linearity a pair collides iff its difference hashes to zero
  const std::size_t k = 6, kp = 6;
  std::vector<std::pair<BitVector, BitVector>> pairs;
  for (std::uint64_t d = 1; d < (1u << (k + kp)); ++d)
    pairs.emplace_back(BitVector::from_uint(d, k + kp), BitVector(k + kp));
  const auto c = exhaustive_collisions(k, kp, pairs);
  EXPECT_LE(c.max_fraction(), std::ldexp(1.0, -6));
}

TEST(ToeplitzHash, Universal2AtEightBitsForFixedPair) {
  const std::pair<BitVector, BitVector> p{BitVector::from_uint(0x1234, 16), BitVector::from_uint(0xBEEF, 16)};
  const auto c = exhaustive_collisions(8, 8, std::span(&p, 1));
  EXPECT_EQ(c.seeds, 1u << 15);
  EXPECT_LE(c.max_fraction(), 1.0 / 256);
}

TEST(CosetCode, PremixCancelsInsideTheHash) {
  std::mt19937_64 rng(17);
  Gf2Matrix expected(4, 8);
  for (std::size_t i = 0; i < 4; ++i) expected.set(i, i, true);
  for (int t = 0; t < 100; ++t) {
    const CosetCode code(LinearCode::identity(8), ToeplitzHash(4, 4, HashSeed::random(4, 4, rng)));
    EXPECT_EQ(code.hash().matrix() * code.premix_matrix(), expected);
  }
}

TEST(CosetCode, ZeroSeedIdentityCodeConcatenates) {
  const auto code = identity_coset(4, 4, 0);
  const auto m = BitVector::from_uint(0xA, 4), l = BitVector::from_uint(0x3, 4);
  EXPECT_EQ(code.encode(m, l), BitVector::concat(m, l));
}

TEST(CosetCode, RoundTripExhaustiveOverMessagesAndRandomness) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const CosetCode code(LinearCode::identity(8), ToeplitzHash(4, 4, HashSeed::random(4, 4, rng)));
    for (std::uint64_t m = 0; m < 16; ++m)
      for (std::uint64_t l = 0; l < 16; ++l) {
        const auto dec = code.decode(code.encode(BitVector::from_uint(m, 4), BitVector::from_uint(l, 4)));
        ASSERT_TRUE(dec);
        ASSERT_EQ(dec->to_uint(), m);
      }
  }
}

TEST(CosetCode, HammingCorrectsEverySingleFlip) {
  std::mt19937_64 rng(29);
  // one (7,4) block carrying k = 1, k' = 3, all 16 inner inputs
  for (std::uint64_t s = 0; s < 8; ++s) {
    const CosetCode code(LinearCode::hamming74(), ToeplitzHash(1, 3, HashSeed::from_uint(s, 1, 3)));
    for (std::uint64_t m = 0; m < 2; ++m)
      for (std::uint64_t l = 0; l < 8; ++l) {
        const auto x = code.encode(BitVector::from_uint(m, 1), BitVector::from_uint(l, 3));
        for (std::size_t i = 0; i < 7; ++i) {
          auto y = x;
          y.flip(i);
          const auto dec = code.decode(y);
          ASSERT_TRUE(dec);
          EXPECT_EQ(dec->to_uint(), m);
        }
      }
  }
  // two blocks, k = k' = 4
  const CosetCode code(LinearCode::direct_sum(LinearCode::hamming74(), 2),
                       ToeplitzHash(4, 4, HashSeed::random(4, 4, rng)));
  for (std::uint64_t m = 0; m < 16; ++m)
    for (std::uint64_t l = 0; l < 16; ++l) {
      const auto x = code.encode(BitVector::from_uint(m, 4), BitVector::from_uint(l, 4));
      for (std::size_t i = 0; i < 14; ++i) {
        auto y = x;
        y.flip(i);
        const auto dec = code.decode(y);
        ASSERT_TRUE(dec);
        EXPECT_EQ(dec->to_uint(), m);
      }
    }
}

TEST(CosetCode, TwoFlipsMayMisdecode) {
  const CosetCode code(LinearCode::hamming74(), ToeplitzHash(1, 3, HashSeed::from_uint(5, 1, 3)));
  int wrong = 0;
  const auto x = code.encode(BitVector::from_uint(1, 1), BitVector::from_uint(2, 3));
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = i + 1; j < 7; ++j) {
      auto y = x;
      y.flip(i);
      y.flip(j);
      const auto dec = code.decode(y);
      if (!dec || dec->to_uint() != 1) ++wrong;
    }
  EXPECT_GT(wrong, 0);
}

TEST(CosetCode, PreimagesAreBalanced) {
  std::mt19937_64 rng(31);
  for (auto [k, kp] : {std::pair<std::size_t, std::size_t>{4, 4}, {2, 6}, {6, 2}, {1, 9}}) {
    const CosetCode code(LinearCode::identity(k + kp), ToeplitzHash(k, kp, HashSeed::random(k, kp, rng)));
    for (auto c : code.preimage_sizes()) EXPECT_EQ(c, std::size_t{1} << kp);
  }
}

TEST(CosetCode, RejectsDimensionMismatch) {
  EXPECT_THROW(CosetCode(LinearCode::hamming74(), ToeplitzHash(2, 3, HashSeed::from_uint(0, 2, 3))), DomainError);
  const auto code = identity_coset(4, 4, 1);
  EXPECT_THROW(code.encode(BitVector(3), BitVector(4)), DomainError);
  EXPECT_THROW(code.decode(BitVector(7)), DomainError);
}

TEST(LinearCode, HammingParameters) {
  const auto h = LinearCode::hamming74();
  EXPECT_EQ(h.min_distance(), 3u);
  EXPECT_EQ(h.correction_radius(), 1u);
  EXPECT_EQ(h.parity_check().rows(), 3u);
  // G H^T = 0
  for (std::size_t i = 0; i < 4; ++i) EXPECT_TRUE((h.parity_check() * h.generator().row(i)).none());
  EXPECT_EQ(LinearCode::identity(5).min_distance(), 1u);
  EXPECT_EQ(LinearCode::direct_sum(h, 3).length(), 21u);
}

TEST(LinearCode, EncodeIsLinearAndInvertible) {
  std::mt19937_64 rng(37);
  // a non-systematic generator
  const auto code = LinearCode::parse_descriptor("3 6\n# rows\n2b\n1e\n07\n");
  for (std::uint64_t u = 0; u < 8; ++u) {
    const auto uu = BitVector::from_uint(u, 3);
    EXPECT_EQ(code.unencode(code.encode(uu)), uu);
    EXPECT_EQ(code.decode(code.encode(uu)), uu);
    const auto v = random_bits(3, rng);
    EXPECT_EQ(code.encode(uu ^ v), code.encode(uu) ^ code.encode(v));
  }
}

TEST(LinearCode, DescriptorRoundTripAndErrors) {
  const auto h = LinearCode::hamming74();
  const auto again = LinearCode::parse_descriptor(h.descriptor());
  EXPECT_EQ(again.generator(), h.generator());
  EXPECT_THROW(LinearCode::parse_descriptor("2 4\n1\n"), ConfigError);
  EXPECT_THROW(LinearCode::parse_descriptor("x 4\n1\n"), ConfigError);
  EXPECT_THROW(LinearCode::parse_descriptor("1 3\nff\n"), ConfigError);
  EXPECT_THROW(LinearCode::parse_descriptor("2 3\n3\n3\n"), ConfigError);  // rank deficient
}

TEST(LeakageOracle, UselessChannelLeaksNothingForEverySeed) {
  const DiscreteChannel useless({{0.3, 0.7}, {0.3, 0.7}});
  const LeakageOracle o(LinearCode::identity(6), 2, 4, useless);
  for (std::uint64_t s = 0; s < 32; ++s) {
    const auto r = o.for_seed(HashSeed::from_uint(s, 2, 4));
    EXPECT_NEAR(r.mi_bits, 0.0, 1e-13);
    EXPECT_NEAR(r.divergence_bits, 0.0, 1e-13);
  }
}

TEST(LeakageOracle, IdentityChannelWithoutSacrificeLeaksTheMessage) {
  const DiscreteChannel clear({{1.0, 0.0}, {0.0, 1.0}});
  const std::vector<double> pm{0.1, 0.2, 0.3, 0.4};
  const LeakageOracle o(LinearCode::identity(2), 2, 0, clear, pm);
  double h = 0;
  for (double p : pm) h -= p * std::log2(p);
  const auto r = o.for_seed(HashSeed::from_uint(0, 2, 0));
  EXPECT_NEAR(r.mi_bits, h, 1e-12);
  EXPECT_GE(r.divergence_bits, r.mi_bits - 1e-12);
  EXPECT_NEAR(r.divergence_bits, 2.0, 1e-12);  // D(p_M || uniform) + H(M)
}

TEST(LeakageOracle, SizeGuard) {
  EXPECT_THROW(LeakageOracle(LinearCode::identity(13), 4, 9, DiscreteChannel::bsc(0.1)), SizeGuardError);
  EXPECT_THROW(LeakageOracle(LinearCode::identity(8), 4, 3, DiscreteChannel::bsc(0.1)), DomainError);
}

TEST(LeakageOracle, SeedAverageIsDominatedByBound) {
  struct Case {
    LinearCode inner;
    std::size_t k, kp;
    DiscreteChannel ch;
  };
  const std::vector<Case> cases{
      {LinearCode::identity(8), 2, 6, DiscreteChannel::bsc(0.11)},
      {LinearCode::identity(8), 1, 7, DiscreteChannel::bsc(0.25)},
      {LinearCode::hamming74(), 1, 3, DiscreteChannel::bsc(0.3)},
      {LinearCode::identity(6), 2, 4, DiscreteChannel::bsc(0.2)},
      {LinearCode::identity(8), 4, 4, DiscreteChannel::bsc(0.4)},
      {LinearCode::identity(6), 1, 5, DiscreteChannel({{0.6, 0.3, 0.1}, {0.1, 0.3, 0.6}})},
  };
  for (const auto& c : cases) {
    const LeakageOracle o(c.inner, c.k, c.kp, c.ch);
    const auto avg = o.seed_average();
    EXPECT_TRUE(avg.exhaustive);
    EXPECT_EQ(avg.seeds, std::uint64_t{1} << (c.k + c.kp - 1));
    EXPECT_GE(avg.divergence_bits, avg.mi_bits - 1e-12);
    const CodeParams p{static_cast<long>(o.n()), static_cast<long>(c.k), static_cast<long>(c.kp),
                       static_cast<double>(c.k + c.kp) / o.n(), 0.0};
    for (int i = 1; i <= 9; ++i) EXPECT_LE(avg.divergence_bits, leakage_bound_at(i / 10.0, p, c.ch));
  }
}

TEST(LeakageOracle, SampledSeedsReportStandardError) {
  // 17 seed bits forces sampling; a one-output channel keeps each seed cheap
  const DiscreteChannel blind({{1.0}, {1.0}});
  const LeakageOracle o(LinearCode::identity(18), 17, 1, blind);
  std::mt19937_64 rng(41);
  const auto avg = o.seed_average(rng, 100);
  EXPECT_FALSE(avg.exhaustive);
  EXPECT_EQ(avg.seeds, kMinSampledSeeds);
  EXPECT_NEAR(avg.divergence_bits, 0.0, 1e-12);
  EXPECT_NEAR(avg.divergence_stderr, 0.0, 1e-12);
}
