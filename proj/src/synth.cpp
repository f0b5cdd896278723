#include "statute/synth.hpp"

#include <algorithm>

#include "statute/error.hpp"

namespace statute {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

Date draw_birth(Rng& rng, int year_min, int year_max) {
  using namespace std::chrono;
  const int y = static_cast<int>(rng.uniform(year_min, year_max));
  const unsigned m = static_cast<unsigned>(rng.uniform(1, 12));
  const unsigned last = static_cast<unsigned>(
      year_month_day_last(year(y), month_day_last(month(m))).day());
  const unsigned d = static_cast<unsigned>(rng.uniform(1, last));
  return Date{year(y), month(m), day(d)};
}

}  // namespace

TaxpayerFacts generate_facts(Rng& rng, const GeneratorConfig& config) {
  static constexpr FilingStatus kStatuses[] = {
      FilingStatus::Joint, FilingStatus::SurvivingSpouse,
      FilingStatus::HeadOfHousehold, FilingStatus::Single,
      FilingStatus::MarriedSeparate};
  TaxpayerFacts f;
  f.taxable_year = static_cast<int>(rng.uniform(config.year_min, config.year_max));
  f.filing_status = kStatuses[rng.uniform(0, 4)];
  const int latest = std::min(config.birth_year_max, f.taxable_year);
  f.taxpayer_birth = draw_birth(rng, config.birth_year_min, latest);
  if (has_spouse(f.filing_status)) {
    f.spouse_birth = draw_birth(rng, config.birth_year_min, latest);
    if (!rng.chance(config.spouse_zero_income_per_mille)) {
      f.spouse_gross_income = DollarAmount(
          rng.uniform(1, config.spouse_income_max / config.agi_step) * config.agi_step);
    }
    f.spouse_is_dependent_of_another = rng.chance(config.spouse_dependent_per_mille);
  }
  f.agi = DollarAmount(rng.uniform(0, config.agi_max / config.agi_step) * config.agi_step);
  return f;
}

CoveragePredicate CoveragePredicate::parse(std::string_view text) {
  CoveragePredicate p;
  while (true) {
    const auto amp = text.find('&');
    const auto term = trim(text.substr(0, amp));
    if (term.empty()) {
      throw Error(ErrorCode::InvalidArgument, "empty term in coverage predicate");
    }
    Term t;
    std::size_t op = term.find("!=");
    std::size_t rhs = op + 2;
    if (op != std::string_view::npos) {
      t.negated = true;
    } else {
      op = term.find('=');
      rhs = op + 1;
      if (op == std::string_view::npos) {
        throw Error(ErrorCode::InvalidArgument,
                    "expected '<provision>=<status>', got '" + std::string(term) + "'");
      }
    }
    t.id = ProvisionId::parse(trim(term.substr(0, op)));
    t.status = parse_coverage_status(trim(term.substr(rhs)));
    p.terms_.push_back(std::move(t));
    if (amp == std::string_view::npos) break;
    text.remove_prefix(amp + 1);
  }
  return p;
}

bool CoveragePredicate::holds(const CoverageReport& report) const {
  return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) {
    return (report.status(t.id) == t.status) != t.negated;
  });
}

std::string CoveragePredicate::to_string() const {
  std::string out;
  for (const auto& t : terms_) {
    if (!out.empty()) out += " & ";
    out += t.id.render() + (t.negated ? "!=" : "=") + std::string(statute::to_string(t.status));
  }
  return out;
}

SynthesisResult synthesize_example(const Statute& statute, const CpiTable& cpi,
                                   const CoveragePredicate& predicate,
                                   const GeneratorConfig& config,
                                   std::size_t budget, std::uint64_t seed,
                                   const EvalOptions& options) {
  for (const auto& t : predicate.terms()) {
    if (!statute.contains(t.id)) {
      throw Error(ErrorCode::InvalidArgument, t.id.render() + " is not in the statute");
    }
  }
  Rng rng(seed);
  SynthesisResult result;
  while (result.cases_tried < budget) {
    TaxpayerFacts facts = generate_facts(rng, config);
    ++result.cases_tried;
    if (predicate.holds(taxable_income(statute, facts, cpi, options).coverage)) {
      result.facts = std::move(facts);
      break;
    }
  }
  return result;
}

}  // namespace statute
