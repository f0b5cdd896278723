#include <gtest/gtest.h>

#include "statute/error.hpp"
#include "statute/random.hpp"
#include "statute/synth.hpp"
#include "support.hpp"

using namespace statute;
using testdata::appendix_b;
using testdata::corpus;
using testdata::id;

TEST(Rng, IsDeterministicAndInRange) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto v = a.uniform(-3, 9);
    EXPECT_EQ(v, b.uniform(-3, 9));
    EXPECT_GE(v, -3);
    EXPECT_LE(v, 9);
  }
}

TEST(Generator, StaysInsideTheGrid) {
  GeneratorConfig cfg;
  Rng rng(5);
  bool saw_spouse = false;
  for (int i = 0; i < 2000; ++i) {
    const auto f = generate_facts(rng, cfg);
    EXPECT_NO_THROW(validate(f));
    EXPECT_GE(f.taxable_year, cfg.year_min);
    EXPECT_LE(f.taxable_year, cfg.year_max);
    EXPECT_FALSE(f.itemizes);
    EXPECT_EQ(f.agi.dollars % cfg.agi_step, 0);
    EXPECT_LE(f.agi.dollars, cfg.agi_max);
    const int by = static_cast<int>(f.taxpayer_birth.year());
    EXPECT_GE(by, cfg.birth_year_min);
    EXPECT_LE(by, cfg.birth_year_max);
    saw_spouse = saw_spouse || f.spouse_birth.has_value();
  }
  EXPECT_TRUE(saw_spouse);
}

TEST(Predicate, ParsesAndPrints) {
  const auto p = CoveragePredicate::parse("§63(f)(1)(B) = Applied & §63(c)(2)(A)!=Applied");
  ASSERT_EQ(p.terms().size(), 2u);
  EXPECT_EQ(p.terms()[0].id, id("§63(f)(1)(B)"));
  EXPECT_FALSE(p.terms()[0].negated);
  EXPECT_TRUE(p.terms()[1].negated);
  EXPECT_EQ(CoveragePredicate::parse(p.to_string()).to_string(), p.to_string());

  CoverageReport r;
  r.statuses[id("§63(f)(1)(B)")] = CoverageStatus::Applied;
  EXPECT_TRUE(p.holds(r));
  r.statuses[id("§63(c)(2)(A)")] = CoverageStatus::Applied;
  EXPECT_FALSE(p.holds(r));
}

TEST(Predicate, RejectsGarbage) {
  for (const char* bad : {"", "§63(c)", "§63(c)=Sometimes", "x=Applied", "§63(c)=Applied &"}) {
    EXPECT_THROW(CoveragePredicate::parse(bad), Error) << bad;
  }
}

TEST(Synthesis, FindsSpouseExemptionScenario) {
  const auto pred = CoveragePredicate::parse("§63(f)(1)(B)=Applied & §63(c)(2)(A)!=Applied");
  const auto found = synthesize_example(corpus(), appendix_b(), pred, {}, 10000, 11);
  ASSERT_TRUE(found.facts);
  const auto& f = *found.facts;
  EXPECT_EQ(f.filing_status, FilingStatus::MarriedSeparate);
  EXPECT_EQ(f.spouse_gross_income, DollarAmount(0));
  EXPECT_FALSE(f.spouse_is_dependent_of_another);
  EXPECT_TRUE(pred.holds(taxable_income(corpus(), f, appendix_b()).coverage));
  const auto again = synthesize_example(corpus(), appendix_b(), pred, {}, 10000, 11);
  EXPECT_EQ(again.facts, found.facts);
  EXPECT_EQ(again.cases_tried, found.cases_tried);
}

TEST(Synthesis, ReportsExhaustion) {
  const auto pred = CoveragePredicate::parse("§63(c)(4)=Applied");
  const auto found = synthesize_example(corpus(), appendix_b(), pred, {}, 200, 3);
  EXPECT_FALSE(found.facts);
  EXPECT_EQ(found.cases_tried, 200u);
}

TEST(Synthesis, RejectsProvisionsOutsideTheCorpus) {
  const auto pred = CoveragePredicate::parse("§63(c)(5)=Applied");
  try {
    synthesize_example(corpus(), appendix_b(), pred, {}, 10, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}
