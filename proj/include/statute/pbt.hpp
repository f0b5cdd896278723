#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "statute/engine.hpp"
#include "statute/random.hpp"

namespace statute {

// Two years 2018 <= x < y <= 2025 and hypothetical C-CPI-U values for the
// calendar years before each.
struct MonotonicityCase {
  int x = 2018;
  int y = 2019;
  CpiValue ix;
  CpiValue iy;

  friend bool operator==(const MonotonicityCase&, const MonotonicityCase&) = default;
};

std::string to_string(const MonotonicityCase& c);

struct CaseVerdict {
  bool violated = false;
  DollarAmount dx;
  DollarAmount dy;
};

// D(year, preceding): the single-filer basic standard deduction with
// `preceding` installed as the C-CPI-U for year - 1 in `cpi`.
DollarAmount single_basic_deduction(const Statute& statute, const CpiTable& cpi,
                                    int year, CpiValue preceding, RoundingMode rounding);

// Violated iff D(y, iy) < D(x, ix).
CaseVerdict check_case(const Statute& statute, const CpiTable& cpi,
                       const MonotonicityCase& c, RoundingMode rounding);

MonotonicityCase generate_case(Rng& rng);

using CaseProperty = std::function<CaseVerdict(const MonotonicityCase&)>;

// "monotonicity" (check_case) or "floor" (both amounts at least the 2018
// amount). Throws Error(UnknownProperty).
CaseProperty make_case_property(std::string_view name, const Statute& statute,
                                const CpiTable& cpi, RoundingMode rounding);

struct FalsificationReport {
  std::string property;
  std::uint64_t seed = 0;
  std::size_t iterations_run = 0;
  RoundingMode rounding = RoundingMode::Floor50;
  MonotonicityCase first_violation;
  CaseVerdict first_verdict;
  MonotonicityCase shrunk_violation;
  CaseVerdict shrunk_verdict;
};

struct FalsifyOutcome {
  std::uint64_t seed = 0;
  std::size_t iterations_run = 0;
  // Empty when the budget ran out without a violation.
  std::optional<FalsificationReport> report;
  bool exhausted() const { return !report.has_value(); }
};

// Draws cases until `property` is violated, then shrinks: first the year
// gap toward 1, then ix down and iy up by 0.1 while still violated. Throws
// Error(InvalidArgument) when iterations == 0.
FalsifyOutcome falsify(const CaseProperty& property, std::string_view name,
                       std::size_t iterations, std::uint64_t seed, RoundingMode rounding);

std::string render_report_machine(const FalsifyOutcome& outcome, std::string_view property,
                                  RoundingMode rounding);
std::string render_report_human(const FalsifyOutcome& outcome, std::string_view property,
                                RoundingMode rounding);

struct PropertyResult {
  std::string name;
  std::size_t samples = 0;
  bool passed = true;
  std::string witness;
};

// Named engine invariants: cpi-monotone-within-year, floor-bound,
// decomposition. Throws Error(UnknownProperty).
PropertyResult check_fixed_property(const Statute& statute, const CpiTable& cpi,
                                    std::string_view name, std::size_t samples,
                                    std::uint64_t seed, RoundingMode rounding);

bool is_fixed_property(std::string_view name);

}  // namespace statute
