#include <gtest/gtest.h>

#include <cstdlib>
#include <vector>

#include "statute/error.hpp"
#include "statute/facts.hpp"
#include "support.hpp"

using namespace statute;

namespace {

ErrorCode facts_error(const std::string& text) {
  try {
    load_facts(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "loaded:\n" << text;
  return ErrorCode::ParseFailure;
}

ErrorCode cpi_error(const std::string& text) {
  try {
    load_cpi_table(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "loaded:\n" << text;
  return ErrorCode::ParseFailure;
}

const char* kSingle =
    "taxable_year: 2020\n"
    "filing_status: single\n"
    "taxpayer_birth: 1970-06-30\n"
    "agi: 50,000\n"
    "itemizes: false\n";

}  // namespace

TEST(Facts, LoadsExampleFiles) {
  const auto f = testdata::facts("example1");
  EXPECT_EQ(f.taxable_year, 2018);
  EXPECT_EQ(f.filing_status, FilingStatus::Joint);
  EXPECT_EQ(f.agi, DollarAmount(216350));
  ASSERT_TRUE(f.spouse_birth);
  EXPECT_EQ(format_date(*f.spouse_birth), "1975-12-30");

  const auto f5 = testdata::facts("example5");
  EXPECT_EQ(f5.filing_status, FilingStatus::MarriedSeparate);
  EXPECT_EQ(f5.spouse_gross_income, DollarAmount(50000));
}

TEST(Facts, OptionalKeysDefault) {
  const auto f = load_facts(kSingle);
  EXPECT_FALSE(f.spouse_birth);
  EXPECT_EQ(f.spouse_gross_income, DollarAmount(0));
  EXPECT_FALSE(f.spouse_is_dependent_of_another);
  EXPECT_EQ(f.agi, DollarAmount(50000));
}

TEST(Facts, RenderLoadsBack) {
  for (const char* name : {"example1", "example2", "example3", "example4", "example5"}) {
    const auto f = testdata::facts(name);
    EXPECT_EQ(load_facts(render_facts(f)), f) << name;
  }
}

TEST(Facts, ReportsBadInput) {
  EXPECT_EQ(facts_error(testdata::read("data/facts/missing_agi.facts")), ErrorCode::MissingKey);
  EXPECT_EQ(facts_error(std::string(kSingle) + "dependents: 2\n"), ErrorCode::UnknownKey);
  EXPECT_EQ(facts_error(std::string(kSingle) + "agi: 3\n"), ErrorCode::BadValue);
  EXPECT_EQ(facts_error("taxable_year: 2020\nfiling_status: single\ntaxpayer_birth: 1970-02-30\n"
                        "agi: 1\nitemizes: no\n"),
            ErrorCode::BadDate);
  EXPECT_EQ(facts_error("taxable_year: 2020\nfiling_status: joint\ntaxpayer_birth: 1970-01-01\n"
                        "agi: 1\nitemizes: no\n"),
            ErrorCode::InconsistentSpouse);
  EXPECT_EQ(facts_error(std::string(kSingle) + "spouse_gross_income: 10\n"),
            ErrorCode::InconsistentSpouse);
  EXPECT_EQ(facts_error("taxable_year: 2020\nfiling_status: widow\ntaxpayer_birth: 1970-01-01\n"
                        "agi: 1\nitemizes: no\n"),
            ErrorCode::BadValue);
  EXPECT_EQ(facts_error("taxable_year: 2020\nfiling_status: single\ntaxpayer_birth: 2021-01-01\n"
                        "agi: 1\nitemizes: no\n"),
            ErrorCode::BadDate);
}

TEST(Cpi, LoadsAppendixTable) {
  const auto& t = testdata::appendix_b();
  EXPECT_EQ(t.entries().size(), 8u);
  EXPECT_EQ(t.at(2017), CpiValue(1382));
  EXPECT_EQ(t.at(2024), CpiValue(1725));
  EXPECT_FALSE(t.contains(2025));
  EXPECT_EQ(load_cpi_table(render_cpi_table(t)), t);
  try {
    t.at(2010);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingCpiYear);
  }
}

TEST(Cpi, RejectsBadLines) {
  EXPECT_EQ(cpi_error("2017 138.2\n"), ErrorCode::BadCpiLine);
  EXPECT_EQ(cpi_error("2017\t138\n"), ErrorCode::BadCpiLine);
  EXPECT_EQ(cpi_error("17\t138.2\n"), ErrorCode::BadCpiLine);
  EXPECT_EQ(cpi_error("2017\t138.2\n2017\t139.0\n"), ErrorCode::BadCpiLine);
}

// Oracle: the t minimizing |12 t - sum|, larger t on a tie.
TEST(Cpi, AnnualAverageRoundsHalfUp) {
  for (std::int64_t base = 1300; base < 1320; ++base) {
    for (std::int64_t spread = 0; spread < 12; ++spread) {
      std::vector<CpiValue> months;
      std::int64_t sum = 0;
      for (int m = 0; m < 12; ++m) {
        const std::int64_t v = base + (m < spread ? 1 : 0) + m % 3;
        months.emplace_back(v);
        sum += v;
      }
      std::int64_t best = 0;
      for (std::int64_t t = sum / 12 - 2; t <= sum / 12 + 2; ++t) {
        const auto err = std::llabs(12 * t - sum);
        const auto best_err = std::llabs(12 * best - sum);
        if (err < best_err || (err == best_err && t > best)) best = t;
      }
      EXPECT_EQ(ccpiu_annual_average(months), CpiValue(best)) << sum;
    }
  }
  std::vector<CpiValue> eleven(11, CpiValue(1400));
  try {
    ccpiu_annual_average(eleven);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::WrongCount);
  }
}
