#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "alphacodec/errors.hpp"
#include "alphacodec/unit_real.hpp"
#include "oracle.hpp"

using namespace alphacodec;
using oracle::floor_unit;
using oracle::random_unit;
using oracle::to_mpq;

namespace {

constexpr const char* kReferenceBits =
    "1000110010110111100110101000101101101100101001010111000011100100111101100110"
    "0010110010101000011110010001111011000001001000010110000001011101010111000111"
    "1101111011111010110011000111011011000111000111101010001100100100111100011000"
    "0101011010100100001111000110011101001001000100000100100111101001110010011101"
    "1111000110101110010111000110111110110010000011111010101010101011001101010010"
    "00010101000001011101";

}  // namespace

TEST(UnitReal, ConstructionChecksFit) {
  EXPECT_THROW(UnitReal(BigUInt(4), 2), DomainError);
  EXPECT_NO_THROW(UnitReal(BigUInt(3), 2));
  EXPECT_EQ(UnitReal::saturating(BigUInt(4), 2), UnitReal::all_ones(2));
  EXPECT_EQ(UnitReal::all_ones(3).to_double(), 0.875);
}

TEST(UnitReal, BinaryStringRoundTrip) {
  const UnitReal x = from_binary_string("101");
  EXPECT_EQ(x.to_double(), 0.625);
  EXPECT_EQ(x.precision(), 3u);
  const UnitReal empty = from_binary_string("");
  EXPECT_EQ(empty.precision(), 0u);
  EXPECT_TRUE(empty.is_zero());
  EXPECT_EQ(to_binary_string(from_binary_string(kReferenceBits)), kReferenceBits);
  EXPECT_EQ(to_binary_string(from_binary_string("000100")), "000100");
  EXPECT_THROW(from_binary_string("0120"), ParseError);
}

TEST(UnitReal, BitsAreOneBased) {
  const UnitReal x = from_binary_string("1001");
  EXPECT_TRUE(x.bit(1));
  EXPECT_FALSE(x.bit(2));
  EXPECT_TRUE(x.bit(4));
}

TEST(UnitReal, DecimalToBinaryReferenceGroups) {
  EXPECT_EQ(to_binary_string(from_decimal_fraction(0.5488135, 8)), "10001100");
  EXPECT_EQ(to_binary_string(from_decimal_fraction(0.71518937, 8)), "10110111");
  EXPECT_EQ(to_binary_string(from_decimal_fraction(0.5, 8)), "10000000");
  EXPECT_EQ(to_binary_string(from_decimal_fraction("0.5488135", 8)), "10001100");
  EXPECT_EQ(to_binary_string(from_decimal_fraction(".71518937", 8)), "10110111");
}

TEST(UnitReal, DecimalOneIsAllOnes) {
  EXPECT_EQ(to_binary_string(from_decimal_fraction(1.0, 8)), "11111111");
  EXPECT_EQ(to_binary_string(from_decimal_fraction("1", 4)), "1111");
  EXPECT_EQ(to_binary_string(from_decimal_fraction("1.000", 4)), "1111");
  EXPECT_EQ(to_binary_string(from_decimal_fraction("0", 4)), "0000");
  EXPECT_EQ(to_binary_string(from_decimal_fraction("-0.0", 4)), "0000");
}

TEST(UnitReal, DecimalDomainAndParseErrors) {
  EXPECT_THROW(from_decimal_fraction(-0.1, 8), DomainError);
  EXPECT_THROW(from_decimal_fraction(1.5, 8), DomainError);
  EXPECT_THROW(from_decimal_fraction(std::nan(""), 8), DomainError);
  EXPECT_THROW(from_decimal_fraction("1.01", 8), DomainError);
  EXPECT_THROW(from_decimal_fraction("-0.5", 8), DomainError);
  EXPECT_THROW(from_decimal_fraction("2", 8), DomainError);
  EXPECT_THROW(from_decimal_fraction("0.5x", 8), ParseError);
  EXPECT_THROW(from_decimal_fraction(".", 8), ParseError);
  EXPECT_THROW(from_decimal_fraction("", 8), ParseError);
}

TEST(UnitReal, DoubleFoldIsExactTruncation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double x = u(rng);
    const std::size_t bits = 1 + rng() % 120;
    EXPECT_EQ(from_decimal_fraction(x, bits), floor_unit(mpq_class(x), bits));
  }
}

TEST(UnitReal, DecimalStringFoldIsExactTruncation) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    std::string digits;
    const std::size_t len = 1 + rng() % 80;
    for (std::size_t d = 0; d < len; ++d) {
      digits.push_back(static_cast<char>('0' + rng() % 10));
    }
    const std::size_t bits = 1 + rng() % 300;
    mpq_class qc(mpz_class(digits, 10), mpz_class("1" + std::string(len, '0'), 10));
    qc.canonicalize();
    EXPECT_EQ(from_decimal_fraction("0." + digits, bits), floor_unit(qc, bits)) << digits;
  }
}

TEST(UnitReal, TruncationBoundGrid) {
  for (int i = 0; i < 10000; ++i) {
    const double x = i / 10000.0;
    for (const std::size_t tau : {4u, 8u, 16u}) {
      const double err = x - from_decimal_fraction(x, tau).to_double();
      ASSERT_LT(std::abs(err), std::ldexp(1.0, -static_cast<int>(tau))) << x;
    }
  }
  // 1 maps to the all-ones word, exactly 2^-tau below it.
  for (const std::size_t tau : {4u, 8u, 16u}) {
    EXPECT_EQ(1.0 - from_decimal_fraction(1.0, tau).to_double(),
              std::ldexp(1.0, -static_cast<int>(tau)));
  }
}

TEST(UnitReal, ToDecimalString) {
  EXPECT_EQ(to_decimal_string(from_binary_string("00000001"), 8), "0.00390625");
  EXPECT_EQ(to_decimal_string(from_binary_string("00000000"), 5), "0.00000");
  EXPECT_EQ(to_decimal_string(from_binary_string(kReferenceBits), 17), "0.54967656997600557");
  EXPECT_EQ(to_decimal_string(from_binary_string("1"), 3, DecimalRounding::upward), "0.500");
  EXPECT_EQ(to_decimal_string(from_binary_string("01"), 1, DecimalRounding::upward), "0.3");
  EXPECT_EQ(to_decimal_string(UnitReal::all_ones(64), 5, DecimalRounding::upward), "0.99999");
}

TEST(UnitReal, ToDecimalMatchesOracle) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 500; ++i) {
    const std::size_t p = 1 + rng() % 400;
    const UnitReal x = random_unit(rng, p);
    const std::size_t digits = 1 + rng() % 150;
    const mpz_class scale("1" + std::string(digits, '0'));
    mpz_class num = oracle::to_mpz(x.mantissa()) * scale;
    mpz_class q;
    mpz_fdiv_q_2exp(q.get_mpz_t(), num.get_mpz_t(), p);
    std::string expect = q.get_str();
    expect = "0." + std::string(digits - expect.size(), '0') + expect;
    EXPECT_EQ(to_decimal_string(x, digits), expect);
  }
}

TEST(UnitReal, DecimalRoundTripAtBudgetDigits) {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 500; ++i) {
    const std::size_t p = 1 + rng() % 600;
    const UnitReal x = random_unit(rng, p);
    const std::string text = to_decimal_string(x, decimal_digits_for(p), DecimalRounding::upward);
    EXPECT_EQ(from_decimal_fraction(text, p), x) << p;
  }
}

TEST(UnitReal, ShiftMod1) {
  EXPECT_EQ(shift_mod1(from_binary_string("11"), 1), from_binary_string("1"));
  const UnitReal a = from_binary_string(kReferenceBits);
  EXPECT_EQ(to_binary_string(shift_mod1(a, 8)).substr(0, 8), "10110111");
  EXPECT_EQ(shift_mod1(a, 0), a);
  EXPECT_THROW(shift_mod1(a, 400), PrecisionExhausted);
  try {
    shift_mod1(a, 500);
  } catch (const PrecisionExhausted& e) {
    EXPECT_EQ(e.max_valid(), 399u);
  }
}

TEST(UnitReal, ShiftLawAndComposition) {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t p = 2 + rng() % 500;
    const UnitReal x = random_unit(rng, p);
    const std::size_t a = rng() % p;
    const std::size_t b = rng() % (p - a);
    const UnitReal s = shift_mod1(x, a);
    EXPECT_EQ(to_mpq(s), oracle::frac(to_mpq(x) * mpq_class(oracle::pow2(a))));
    EXPECT_EQ(shift_mod1(s, b), shift_mod1(x, a + b));
  }
}

TEST(UnitReal, RingOperations) {
  const UnitReal q = from_binary_string("01");
  EXPECT_EQ(add(q, q).to_double(), 0.5);
  const UnitReal h = from_binary_string("10");
  EXPECT_EQ(mul(h, h).to_double(), 0.25);
  EXPECT_THROW(add(h, h), OverflowError);
  EXPECT_EQ(add(h, h, Overflow::wrap).to_double(), 0.0);
  EXPECT_THROW(sub(q, h), OverflowError);
  EXPECT_EQ(sub(q, h, Overflow::wrap).to_double(), 0.75);
  EXPECT_THROW(add(q, from_binary_string("010")), PrecisionMismatch);
  EXPECT_THROW(div_small(q, 0), DomainError);
  EXPECT_THROW(mul_small(h, 2), OverflowError);
}

TEST(UnitReal, DivSmallOfAllOnesMatchesOracle) {
  for (const std::size_t p : {8u, 64u, 256u, 1000u}) {
    const UnitReal x = UnitReal::all_ones(p);
    const mpq_class exact = to_mpq(x) / 3;
    const mpq_class err = exact - to_mpq(div_small(x, 3));
    EXPECT_GE(err, 0);
    EXPECT_LT(err, mpq_class(4, oracle::pow2(p)));
  }
}

TEST(UnitReal, CompareAcrossPrecisions) {
  EXPECT_EQ(compare(from_binary_string("1"), from_binary_string("10")),
            std::strong_ordering::equal);
  EXPECT_EQ(compare(from_binary_string("011"), from_binary_string("1")),
            std::strong_ordering::less);
  std::mt19937_64 rng(16);
  for (int i = 0; i < 1000; ++i) {
    const UnitReal x = random_unit(rng, 1 + rng() % 200);
    const UnitReal y = random_unit(rng, 1 + rng() % 200);
    const int expect = cmp(to_mpq(x), to_mpq(y));
    const auto got = compare(x, y);
    EXPECT_EQ(got < 0, expect < 0);
    EXPECT_EQ(got == 0, expect == 0);
  }
}

TEST(UnitReal, ResizeKeepsValue) {
  const UnitReal x = from_binary_string("1011");
  EXPECT_EQ(to_binary_string(x.extended(6)), "101100");
  EXPECT_EQ(to_binary_string(x.truncated(2)), "10");
  EXPECT_THROW(x.extended(2), DomainError);
  EXPECT_THROW(x.truncated(6), DomainError);
  EXPECT_EQ(x.resized(4), x);
}

TEST(UnitReal, Concat) {
  const UnitReal parts[] = {from_binary_string("10"), from_binary_string(""),
                            from_binary_string("011")};
  EXPECT_EQ(to_binary_string(concat(parts)), "10011");
}

TEST(PrecisionBudget, KnownBudgets) {
  const PrecisionBudget big = required_precision(1000, 8, 0);
  EXPECT_EQ(big.p_bin, 8008u);
  EXPECT_EQ(big.p_dec, 2411u);
  const PrecisionBudget reference = required_precision(50, 8, 0);
  EXPECT_EQ(reference.p_bin, 408u);
  EXPECT_EQ(reference.p_dec, 123u);
  const PrecisionBudget tiny = required_precision(1, 1, 0);
  EXPECT_EQ(tiny.p_bin, 2u);
  EXPECT_EQ(tiny.p_dec, 1u);
  EXPECT_EQ(required_precision(50, 8).p_bin, 440u);
  EXPECT_THROW(required_precision(0, 8), DomainError);
}

TEST(PrecisionBudget, DecimalRatio) {
  for (std::size_t n = 1; n < 2000; n += 37) {
    const PrecisionBudget b = required_precision(n, 8);
    const double ratio = static_cast<double>(b.p_bin) * std::log10(2.0) / b.p_bin;
    EXPECT_GE(ratio, 0.301);
    EXPECT_LE(ratio, 0.302);
    EXPECT_GE(static_cast<double>(b.p_dec), b.p_bin * std::log10(2.0));
    EXPECT_LT(static_cast<double>(b.p_dec), b.p_bin * std::log10(2.0) + 1);
  }
}
