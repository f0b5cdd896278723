#include <gtest/gtest.h>

#include <numeric>

#include "statute/error.hpp"
#include "statute/model.hpp"
#include "statute/rational.hpp"
#include "support.hpp"

using namespace statute;
using testdata::id;

TEST(ProvisionId, ParsesAndRendersCitations) {
  const auto p = ProvisionId::parse("§63(c)(7)(B)(ii)(II)");
  EXPECT_EQ(p.render(), "§63(c)(7)(B)(ii)(II)");
  EXPECT_EQ(p.depth(), 5u);
  EXPECT_EQ(p.section(), "63");
  ASSERT_EQ(p.path().size(), 6u);
  EXPECT_EQ(p.path()[4].kind, LabelKind::LowerRoman);
  EXPECT_EQ(p.path()[5].kind, LabelKind::UpperRoman);
  EXPECT_EQ(ProvisionId::parse("63(c)(2)"), id("§63(c)(2)"));
}

TEST(ProvisionId, RejectsLabelsOutOfPlace) {
  for (const char* bad : {"§63(2)", "§63(c)(c)", "§63(c)(2)(i)", "§", "§63(c", "§63(c)(2)(C)(iiii)"}) {
    try {
      ProvisionId::parse(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::BadIdentifier) << bad;
    }
  }
}

TEST(ProvisionId, AncestryAndPrefix) {
  const auto leaf = id("§63(c)(7)(A)(ii)");
  EXPECT_EQ(leaf.parent(), id("§63(c)(7)(A)"));
  EXPECT_EQ(leaf.prefix(3), id("§63(c)(7)"));
  EXPECT_TRUE(id("§63(c)").is_ancestor_of(leaf));
  EXPECT_FALSE(leaf.is_ancestor_of(leaf));
  EXPECT_FALSE(id("§63(f)").is_ancestor_of(leaf));
}

TEST(ProvisionId, OrdersSiblingsByOrdinal) {
  EXPECT_LT(id("§63(c)(2)"), id("§63(c)(10)"));
  EXPECT_LT(id("§63(c)(7)(B)(iv)"), id("§63(c)(7)(B)(ix)"));
  EXPECT_LT(id("§1"), id("§63"));
  EXPECT_LT(id("§63(c)"), id("§63(c)(1)"));
}

TEST(Label, RomanNumeralsMustBeCanonical) {
  EXPECT_EQ(roman_value("iv"), 4);
  EXPECT_EQ(roman_value("xiv"), 14);
  EXPECT_EQ(roman_value("II"), 2);
  EXPECT_FALSE(roman_value("iiii"));
  EXPECT_FALSE(roman_value("vx"));
}

TEST(DollarAmount, Formats) {
  EXPECT_EQ(format_dollars(DollarAmount(12000)), "$12,000");
  EXPECT_EQ(format_dollars(DollarAmount(-5200)), "-$5,200");
  EXPECT_EQ(format_dollars(DollarAmount(600)), "$600");
  EXPECT_EQ(format_dollars(DollarAmount(1234567)), "$1,234,567");
}

TEST(CpiValue, ParsesTenths) {
  EXPECT_EQ(CpiValue::parse("138.2").tenths, 1382);
  EXPECT_EQ(CpiValue::parse("200").tenths, 2000);
  EXPECT_EQ(CpiValue(1670).to_string(), "167.0");
  EXPECT_THROW(CpiValue::parse("13.82"), Error);
  EXPECT_THROW(CpiValue::parse("abc"), Error);
}

TEST(Rational, MatchesGcdReduction) {
  for (std::int64_t n : {0, 343, 299, 1382, -15, 690}) {
    for (std::int64_t d : {1382, 7, -4, 1}) {
      const Rational r(n, d);
      const std::int64_t g = std::gcd(n, d);
      EXPECT_EQ(r.num(), (d < 0 ? -n : n) / g) << n << "/" << d;
      EXPECT_EQ(r.den(), (d < 0 ? -d : d) / g) << n << "/" << d;
    }
  }
}

TEST(Rational, FloorRoundsTowardNegativeInfinity) {
  EXPECT_EQ(Rational(7, 2).floor(), 3);
  EXPECT_EQ(Rational(-7, 2).floor(), -4);
  EXPECT_EQ(Rational(6, 3).floor(), 2);
  EXPECT_EQ((Rational(1, 3) + Rational(1, 6)), Rational(1, 2));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
}
