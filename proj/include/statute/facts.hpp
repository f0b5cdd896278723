#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "statute/model.hpp"

namespace statute {

enum class FilingStatus {
  Joint,
  SurvivingSpouse,
  HeadOfHousehold,
  Single,
  MarriedSeparate,
};

std::string_view to_string(FilingStatus status);
FilingStatus parse_filing_status(std::string_view text);

// Statuses that carry a living spouse on the return or alongside it.
bool has_spouse(FilingStatus status);

using Date = std::chrono::year_month_day;

Date parse_date(std::string_view text);
std::string format_date(const Date& date);

struct TaxpayerFacts {
  int taxable_year = 0;
  FilingStatus filing_status = FilingStatus::Single;
  Date taxpayer_birth{};
  std::optional<Date> spouse_birth;
  // The return's adjusted gross income. On a separate return this is the
  // filer's own AGI; the spouse's income only feeds the §151(b) test.
  DollarAmount agi;
  bool itemizes = false;
  DollarAmount spouse_gross_income;
  bool spouse_is_dependent_of_another = false;

  friend bool operator==(const TaxpayerFacts&, const TaxpayerFacts&) = default;
};

// Throws Error(InconsistentSpouse | BadValue).
void validate(const TaxpayerFacts& facts);

// `key: value` lines; '#' starts a comment. Throws Error(MissingKey |
// UnknownKey | BadValue | BadDate | InconsistentSpouse).
TaxpayerFacts load_facts(std::string_view source);
std::string render_facts(const TaxpayerFacts& facts);

class CpiTable {
 public:
  CpiTable() = default;
  explicit CpiTable(std::map<int, CpiValue> entries) : entries_(std::move(entries)) {}

  // Throws Error(MissingCpiYear).
  CpiValue at(int year) const;
  bool contains(int year) const { return entries_.count(year) != 0; }
  void set(int year, CpiValue value) { entries_[year] = value; }
  CpiTable with(int year, CpiValue value) const {
    CpiTable copy = *this;
    copy.set(year, value);
    return copy;
  }
  const std::map<int, CpiValue>& entries() const { return entries_; }

  friend bool operator==(const CpiTable&, const CpiTable&) = default;

 private:
  std::map<int, CpiValue> entries_;
};

// Lines "YYYY<TAB>value" with one decimal. Throws Error(BadCpiLine).
CpiTable load_cpi_table(std::string_view source);
std::string render_cpi_table(const CpiTable& table);

// Annual value from the twelve monthly values September..August: the mean,
// rounded half-up to tenths. Throws Error(WrongCount).
CpiValue ccpiu_annual_average(std::span<const CpiValue> monthly);

}  // namespace statute
