#include <gtest/gtest.h>

#include <random>

#include "satsec/gf2.hpp"

using namespace satsec;

TEST(BitVector, HexIsBigEndianIntegerWithBitZeroLowest) {
  const auto v = BitVector::from_hex("0x2A", 7);
  EXPECT_EQ(v.to_bits(), "0101010");
  EXPECT_EQ(v.to_hex(), "2a");
  EXPECT_EQ(v.to_uint(), 42u);
  EXPECT_EQ(BitVector::from_hex("2a", 7), v);
  EXPECT_THROW(BitVector::from_hex("0xff", 7), DomainError);
  EXPECT_THROW(BitVector::from_hex("0xg1", 8), DomainError);
  EXPECT_THROW(BitVector::from_hex("", 8), DomainError);
}

TEST(BitVector, RoundTripsAcrossWordBoundaries) {
  std::mt19937_64 rng(3);
  for (std::size_t n : {1u, 63u, 64u, 65u, 130u}) {
    BitVector v(n);
    for (std::size_t i = 0; i < n; ++i)
      if (rng() & 1) v.set(i, true);
    EXPECT_EQ(BitVector::from_hex(v.to_hex(), n), v);
    EXPECT_EQ(BitVector::from_bits(v.to_bits()), v);
    const auto a = v.slice(0, n / 2);
    const auto b = v.slice(n / 2, n - n / 2);
    EXPECT_EQ(BitVector::concat(a, b), v);
  }
}

TEST(BitVector, XorDotPopcount) {
  const auto a = BitVector::from_bits("1101");
  const auto b = BitVector::from_bits("1011");
  EXPECT_EQ((a ^ b).to_bits(), "0110");
  EXPECT_EQ(dot(a, b), false);  // overlap 1001 has even weight
  EXPECT_EQ(a.popcount(), 3u);
  EXPECT_THROW(a ^ BitVector(5), DomainError);
  EXPECT_THROW(BitVector::from_bits("10a"), DomainError);
  EXPECT_THROW(BitVector::from_uint(16, 4), DomainError);
}

TEST(Gf2Matrix, ProductsAndRank) {
  Gf2Matrix m(2, 3);
  m.set(0, 0, true);
  m.set(0, 2, true);
  m.set(1, 1, true);
  const auto v = BitVector::from_bits("101");
  EXPECT_EQ((m * v).to_bits(), "00");
  EXPECT_EQ(m.left_multiply(BitVector::from_bits("11")).to_bits(), "111");
  EXPECT_EQ(m.rank(), 2u);
  EXPECT_EQ(m.transpose().transpose(), m);
  EXPECT_EQ(Gf2Matrix::identity(3) * m.transpose(), m.transpose());
  Gf2Matrix dup(2, 3);
  dup.row(0) = v;
  dup.row(1) = v;
  EXPECT_EQ(dup.rank(), 1u);
}
