#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statute/engine.hpp"
#include "statute/random.hpp"

namespace statute {

struct GeneratorConfig {
  int year_min = 2018;
  int year_max = 2025;
  int birth_year_min = 1930;
  int birth_year_max = 2000;
  std::int64_t agi_max = 500000;
  std::int64_t agi_step = 50;
  std::int64_t spouse_income_max = 100000;
  int spouse_zero_income_per_mille = 500;
  int spouse_dependent_per_mille = 100;
};

// One non-itemizing scenario drawn from the grid in `config`.
TaxpayerFacts generate_facts(Rng& rng, const GeneratorConfig& config = {});

// Conjunction of "<provision>=<status>" / "<provision>!=<status>" terms,
// joined by '&'.
class CoveragePredicate {
 public:
  struct Term {
    ProvisionId id;
    bool negated = false;
    CoverageStatus status = CoverageStatus::Applied;
  };

  // Throws Error(InvalidArgument | BadIdentifier | BadValue).
  static CoveragePredicate parse(std::string_view text);

  bool holds(const CoverageReport& report) const;
  const std::vector<Term>& terms() const { return terms_; }
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

struct SynthesisResult {
  std::optional<TaxpayerFacts> facts;
  std::size_t cases_tried = 0;
};

// First generated scenario whose coverage satisfies `predicate`. Throws
// Error(InvalidArgument) if the predicate names a provision not in `statute`.
SynthesisResult synthesize_example(const Statute& statute, const CpiTable& cpi,
                                   const CoveragePredicate& predicate,
                                   const GeneratorConfig& config,
                                   std::size_t budget, std::uint64_t seed,
                                   const EvalOptions& options = {});

}  // namespace statute
