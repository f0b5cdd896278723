#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "statute/facts.hpp"
#include "statute/model.hpp"
#include "statute/rational.hpp"

namespace statute {

enum class CoverageStatus {
  NotReached,
  EvaluatedNotApplicable,
  Overridden,
  Applied,
};

std::string_view to_string(CoverageStatus status);
CoverageStatus parse_coverage_status(std::string_view text);

struct CoverageReport {
  std::map<ProvisionId, CoverageStatus> statuses;
  std::vector<ProvisionId> applied_order;

  CoverageStatus status(const ProvisionId& id) const;
  bool applied(const ProvisionId& id) const {
    return status(id) == CoverageStatus::Applied;
  }
};

struct EvalResult {
  DollarAmount taxable_income;
  DollarAmount standard_deduction;
  DollarAmount basic;
  DollarAmount additional;
  // Set when an inflation adjustment was computed.
  std::optional<Rational> cola;
  CoverageReport coverage;
};

enum class RoundingMode {
  // "rounded to the next lowest multiple": the statute's wording.
  Floor50,
  // Nearest multiple, ties up. Reproduces the published $15,000 / $14,600.
  Nearest50,
};

std::string_view to_string(RoundingMode mode);
RoundingMode parse_rounding_mode(std::string_view text);

enum class AgeConvention {
  Anniversary,
  // An individual attains an age on the day before the anniversary of birth.
  DayBeforeBirthday,
};

std::string_view to_string(AgeConvention convention);
AgeConvention parse_age_convention(std::string_view text);

struct EvalOptions {
  RoundingMode rounding = RoundingMode::Floor50;
  AgeConvention age_convention = AgeConvention::Anniversary;
};

// True iff the person attains `age` on or before Dec 31 of `taxable_year`.
bool attained_age(const Date& birth, int age, int taxable_year,
                  AgeConvention convention);

// Rounds a non-negative amount to a multiple of `unit` whole dollars.
DollarAmount round_to_multiple(const Rational& amount, std::int64_t unit,
                               RoundingMode mode);

// Cost-of-living adjustment with a chained base year: the fraction (if any)
// by which the C-CPI-U for taxable_year - 1 exceeds that for base_year,
// clamped at zero. Throws Error(MissingCpiYear).
Rational cola(const CpiTable& cpi, int taxable_year, int base_year);

// Applies a base-year rule worded like §1(f)(3)(C) ("substituting “the X for
// calendar year N” for “the Y for calendar year N” and all that follows") to
// a clause's text. Returns `text` unchanged when the replaced phrase is absent.
std::string rewrite_base_year_phrase(const ProvisionNode& rule, const std::string& text);

// The §63(c)(2)(B) or (C) amount for `taxable_year` after the §63(c)(7)
// substitutions and inflation adjustment. Throws Error(UnsupportedYear |
// MissingCpiYear | MissingProvision | UnmodeledRule).
DollarAmount adjusted_basic_amount(const Statute& statute, int taxable_year,
                                   const ProvisionId& slot, const CpiTable& cpi,
                                   RoundingMode rounding);

DollarAmount basic_standard_deduction(const Statute& statute,
                                      const TaxpayerFacts& facts,
                                      const CpiTable& cpi,
                                      const EvalOptions& options = {});

DollarAmount additional_standard_deduction(const Statute& statute,
                                           const TaxpayerFacts& facts,
                                           const EvalOptions& options = {});

// Throws Error(ItemizerUnsupported) for itemizers.
DollarAmount standard_deduction(const Statute& statute,
                                const TaxpayerFacts& facts, const CpiTable& cpi,
                                const EvalOptions& options = {});

// Full evaluation with provision coverage. Throws Error(ItemizerUnsupported |
// UnsupportedYear | MissingCpiYear | MissingProvision | UnmodeledRule).
EvalResult taxable_income(const Statute& statute, const TaxpayerFacts& facts,
                          const CpiTable& cpi, const EvalOptions& options = {});

}  // namespace statute
