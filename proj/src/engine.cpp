#include "statute/engine.hpp"

#include <algorithm>
#include <regex>

#include "statute/error.hpp"
#include "statute/parser.hpp"

namespace statute {

std::string_view to_string(CoverageStatus status) {
  switch (status) {
    case CoverageStatus::NotReached: return "NotReached";
    case CoverageStatus::EvaluatedNotApplicable: return "EvaluatedNotApplicable";
    case CoverageStatus::Overridden: return "Overridden";
    case CoverageStatus::Applied: return "Applied";
  }
  return "Unknown";
}

CoverageStatus parse_coverage_status(std::string_view text) {
  for (auto s : {CoverageStatus::NotReached, CoverageStatus::EvaluatedNotApplicable,
                 CoverageStatus::Overridden, CoverageStatus::Applied}) {
    if (text == to_string(s)) return s;
  }
  throw Error(ErrorCode::BadValue, "unknown coverage status '" + std::string(text) + "'");
}

CoverageStatus CoverageReport::status(const ProvisionId& id) const {
  auto it = statuses.find(id);
  return it == statuses.end() ? CoverageStatus::NotReached : it->second;
}

std::string_view to_string(RoundingMode mode) {
  return mode == RoundingMode::Floor50 ? "floor50" : "nearest50";
}

RoundingMode parse_rounding_mode(std::string_view text) {
  if (text == "floor50") return RoundingMode::Floor50;
  if (text == "nearest50") return RoundingMode::Nearest50;
  throw Error(ErrorCode::BadValue, "unknown rounding mode '" + std::string(text) + "'");
}

std::string_view to_string(AgeConvention convention) {
  return convention == AgeConvention::Anniversary ? "anniversary" : "day-before";
}

AgeConvention parse_age_convention(std::string_view text) {
  if (text == "anniversary") return AgeConvention::Anniversary;
  if (text == "day-before") return AgeConvention::DayBeforeBirthday;
  throw Error(ErrorCode::BadValue, "unknown age convention '" + std::string(text) + "'");
}

std::string format_percent_truncated(const Rational& ratio, int decimals) {
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const std::int64_t scaled = (ratio * Rational(100 * scale)).floor();
  std::string out = std::to_string(scaled / scale);
  if (decimals > 0) {
    std::string frac = std::to_string(scaled % scale);
    frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += "." + frac;
  }
  return out + "%";
}

bool attained_age(const Date& birth, int age, int taxable_year,
                  AgeConvention convention) {
  using namespace std::chrono;
  const year_month_day anniversary{birth.year() + years(age), birth.month(),
                                   birth.day()};
  // A Feb 29 anniversary in a common year lands on Mar 1.
  sys_days attained{anniversary};
  if (convention == AgeConvention::DayBeforeBirthday) attained -= days(1);
  return attained <= sys_days{year(taxable_year) / December / 31};
}

DollarAmount round_to_multiple(const Rational& amount, std::int64_t unit,
                               RoundingMode mode) {
  const Rational units = amount / Rational(unit);
  const std::int64_t n = mode == RoundingMode::Floor50
                             ? units.floor()
                             : (units + Rational(1, 2)).floor();
  return DollarAmount(n * unit);
}

Rational cola(const CpiTable& cpi, int taxable_year, int base_year) {
  const CpiValue preceding = cpi.at(taxable_year - 1);
  const CpiValue base = cpi.at(base_year);
  if (preceding <= base) return Rational(0);
  return Rational(preceding.tenths - base.tenths, base.tenths);
}

std::string rewrite_base_year_phrase(const ProvisionNode& rule, const std::string& text) {
  static const std::regex kQuoted(R"x("(the [^"]*?) \d{4}")x");
  const std::string wording = normalize_quotes(rule.text());
  std::vector<std::string> phrases;
  for (auto it = std::sregex_iterator(wording.begin(), wording.end(), kQuoted);
       it != std::sregex_iterator(); ++it) {
    phrases.push_back((*it)[1].str());
  }
  if (phrases.size() < 2) {
    throw Error(ErrorCode::UnmodeledRule,
                rule.id.render() + " does not state a replacement phrase");
  }
  const std::string& replacement = phrases[0];
  const std::string& replaced = phrases[1];
  const std::regex target(std::regex_replace(replaced, std::regex(R"([-().])"), R"(\$&)") +
                          R"( (\d{4}))");
  std::smatch m;
  if (!std::regex_search(text, m, target)) return text;
  return text.substr(0, static_cast<std::size_t>(m.position(0))) + replacement + " " +
         m[1].str() + ".";
}

namespace {

ProvisionId pid(std::string_view s) { return ProvisionId::parse(s); }

struct KnownIds {
  ProvisionId s63 = pid("§63");
  ProvisionId b = pid("§63(b)");
  ProvisionId b1 = pid("§63(b)(1)");
  ProvisionId c = pid("§63(c)");
  ProvisionId c1 = pid("§63(c)(1)");
  ProvisionId c1A = pid("§63(c)(1)(A)");
  ProvisionId c1B = pid("§63(c)(1)(B)");
  ProvisionId c2 = pid("§63(c)(2)");
  ProvisionId c2A = pid("§63(c)(2)(A)");
  ProvisionId c2B = pid("§63(c)(2)(B)");
  ProvisionId c2C = pid("§63(c)(2)(C)");
  ProvisionId c3 = pid("§63(c)(3)");
  ProvisionId c4 = pid("§63(c)(4)");
  ProvisionId c7 = pid("§63(c)(7)");
  ProvisionId c7A = pid("§63(c)(7)(A)");
  ProvisionId c7B = pid("§63(c)(7)(B)");
  ProvisionId c7Bi = pid("§63(c)(7)(B)(i)");
  ProvisionId c7Bii = pid("§63(c)(7)(B)(ii)");
};

const KnownIds& known() {
  static const KnownIds ids;
  return ids;
}

const TextSegment* lead(const ProvisionNode& node) {
  return node.body.empty() ? nullptr : &node.body.front();
}

std::vector<std::int64_t> values_of(const TextSegment* seg, LiteralKind kind) {
  std::vector<std::int64_t> out;
  if (seg == nullptr) return out;
  for (const auto* lit : seg->of_kind(kind)) out.push_back(lit->value);
  return out;
}

Rational scale(DollarAmount amount, const Rational& ratio) {
  return Rational(amount.dollars) * ratio;
}

int rank(CoverageStatus s) { return static_cast<int>(s); }

class Evaluator {
 public:
  Evaluator(const Statute& statute, const CpiTable* cpi, EvalOptions options)
      : statute_(statute), cpi_(cpi), options_(options) {}

  const ProvisionNode* visit(const ProvisionId& id) {
    const ProvisionNode* node = statute_.find(id);
    if (node != nullptr) mark(id, CoverageStatus::EvaluatedNotApplicable);
    return node;
  }

  const ProvisionNode& require(const ProvisionId& id) {
    if (const auto* node = visit(id)) return *node;
    throw Error(ErrorCode::MissingProvision, id.render() + " is not in the statute");
  }

  void apply(const ProvisionId& id) {
    if (statute_.contains(id)) mark(id, CoverageStatus::Applied);
  }

  void mark(const ProvisionId& id, CoverageStatus status) {
    auto [it, inserted] = touched_.emplace(id, status);
    if (!inserted) {
      if (rank(status) <= rank(it->second)) return;
      if (it->second == CoverageStatus::Overridden) return;
      it->second = status;
    }
    if (status == CoverageStatus::Applied) order_.push_back(id);
  }

  CoverageReport report() const {
    CoverageReport r;
    for (const auto& id : statute_.provision_ids()) {
      r.statuses[id] = CoverageStatus::NotReached;
    }
    for (const auto& [id, s] : touched_) r.statuses[id] = s;
    r.applied_order = order_;
    return r;
  }

  // §63(c)(7): the span of taxable years it governs, read from its text.
  void check_window(int year) {
    const auto* c7 = visit(known().c7);
    if (c7 == nullptr) {
      throw Error(ErrorCode::UnsupportedYear,
                  "§63(c)(7) is absent, so §63(c)(4) governs and its formula is "
                  "not in the corpus");
    }
    const auto years = values_of(lead(*c7), LiteralKind::Year);
    if (years.size() < 2) {
      throw Error(ErrorCode::UnmodeledRule, "§63(c)(7) does not state its year window");
    }
    if (!(years.front() < year && year < years.back())) {
      throw Error(ErrorCode::UnsupportedYear,
                  "taxable year " + std::to_string(year) +
                      " is outside the §63(c)(7) window; the §63(c)(4) formula "
                      "is not in the corpus");
    }
    apply(known().c7);
  }

  DollarAmount adjusted(const ProvisionId& slot, int year) {
    const auto& node = require(slot);
    const auto own = values_of(lead(node), LiteralKind::DollarAmount);
    if (own.size() != 1) {
      throw Error(ErrorCode::UnmodeledRule,
                  slot.render() + " must state exactly one dollar amount");
    }
    DollarAmount amount(own.front());

    if (const auto* A = visit(known().c7A)) {
      for (const auto& clause : A->children) {
        if (clause.elided) continue;
        visit(clause.id);
        const auto* seg = lead(clause);
        const auto dollars = values_of(seg, LiteralKind::DollarAmount);
        if (seg == nullptr || dollars.size() != 2) continue;
        const auto refs = resolve_segment_refs(statute_, clause.id, *seg);
        if (refs.empty() || refs.front().target != slot) continue;
        // "substituting “new” for “old”": a textual substitution.
        if (amount.dollars == dollars[1]) {
          amount = DollarAmount(dollars[0]);
          apply(clause.id);
          apply(known().c7A);
        }
      }
    }

    bool shielded = false;
    visit(known().c7B);
    if (const auto* Bi = visit(known().c7Bi); Bi != nullptr && lead(*Bi)) {
      const auto refs = resolve_segment_refs(statute_, Bi->id, *lead(*Bi));
      const bool names_slot =
          std::any_of(refs.begin() + std::min<std::size_t>(1, refs.size()),
                      refs.end(), [&](const CrossRef& r) { return r.target == slot; });
      if (!refs.empty() && names_slot) {
        shielded = true;
        apply(Bi->id);
        apply(known().c7B);
        if (refs.front().target && statute_.contains(*refs.front().target)) {
          mark(*refs.front().target, CoverageStatus::Overridden);
        }
      }
    }
    if (!shielded && statute_.contains(known().c4)) {
      visit(known().c4);
      throw Error(ErrorCode::UnsupportedYear,
                  "§63(c)(4) adjusts " + slot.render() +
                      " and its formula is not in the corpus");
    }

    if (const auto* Bii = visit(known().c7Bii); Bii != nullptr && lead(*Bii)) {
      const auto gate = values_of(lead(*Bii), LiteralKind::Year);
      const auto named = values_of(lead(*Bii), LiteralKind::DollarAmount);
      if (gate.empty()) {
        throw Error(ErrorCode::UnmodeledRule, "§63(c)(7)(B)(ii) states no starting year");
      }
      const bool names_amount =
          std::find(named.begin(), named.end(), amount.dollars) != named.end();
      if (year > gate.front() && names_amount) {
        apply(Bii->id);
        apply(known().c7B);
        const Rational ratio = increase_ratio(*Bii, year);
        std::int64_t unit = 1;
        for (const auto& seg : Bii->continuation) {
          if (auto units = values_of(&seg, LiteralKind::RoundingUnit); !units.empty()) {
            unit = units.front();
            break;
          }
        }
        amount += round_to_multiple(scale(amount, ratio), unit, options_.rounding);
      }
    }
    return amount;
  }

  DollarAmount basic(const TaxpayerFacts& facts) {
    check_window(facts.taxable_year);
    require(known().c2);
    apply(known().c2);
    const auto* A = visit(known().c2A);
    switch (facts.filing_status) {
      case FilingStatus::Joint:
      case FilingStatus::SurvivingSpouse: {
        if (A == nullptr || lead(*A) == nullptr) {
          throw Error(ErrorCode::MissingProvision, "§63(c)(2)(A) is not in the statute");
        }
        apply(A->id);
        const std::string_view which =
            facts.filing_status == FilingStatus::Joint ? "i" : "ii";
        for (const auto& c : A->children) {
          if (c.elided) continue;
          visit(c.id);
          if (c.label().text == which) apply(c.id);
        }
        const auto percent = values_of(lead(*A), LiteralKind::Percentage);
        const auto refs = resolve_segment_refs(statute_, A->id, *lead(*A));
        if (percent.size() != 1 || refs.empty() || !refs.front().target) {
          throw Error(ErrorCode::UnmodeledRule,
                      "§63(c)(2)(A) must name one percentage of one amount");
        }
        const ProvisionId slot = *refs.front().target;
        const DollarAmount base = adjusted(slot, facts.taxable_year);
        apply(slot);
        return DollarAmount(scale(base, Rational(percent.front(), 100)).floor());
      }
      case FilingStatus::HeadOfHousehold: {
        const DollarAmount amount = adjusted(known().c2B, facts.taxable_year);
        apply(known().c2B);
        return amount;
      }
      case FilingStatus::Single:
      case FilingStatus::MarriedSeparate:
        break;
    }
    const DollarAmount amount = adjusted(known().c2C, facts.taxable_year);
    apply(known().c2C);
    return amount;
  }

  DollarAmount additional(const TaxpayerFacts& facts) {
    const auto& c3 = require(known().c3);
    ProvisionId f = pid("§63(f)");
    if (const auto* seg = lead(c3)) {
      for (const auto& r : resolve_segment_refs(statute_, c3.id, *seg)) {
        if (r.target && r.target->path().size() == 2) {
          f = *r.target;
          break;
        }
      }
    }
    require(f);
    const ProvisionId f1 = f.child(*Label::at_depth("1", static_cast<int>(f.path().size())));
    const auto& aged = require(f1);
    const auto amounts = values_of(lead(aged), LiteralKind::DollarAmount);
    if (amounts.size() != 1) {
      throw Error(ErrorCode::UnmodeledRule, f1.render() + " must state one dollar amount");
    }
    const DollarAmount each(amounts.front());

    int count = 0;
    const auto* self = aged.child("A");
    if (self != nullptr) {
      visit(self->id);
      const int age = stated_age(*self);
      count += attained(facts.taxpayer_birth, age, facts.taxable_year) ? 1 : 0;
      // On a joint return both spouses are the taxpayer.
      if (facts.filing_status == FilingStatus::Joint && facts.spouse_birth &&
          attained(*facts.spouse_birth, age, facts.taxable_year)) {
        ++count;
      }
      if (count > 0) apply(self->id);
    }
    if (const auto* spouse = aged.child("B")) {
      visit(spouse->id);
      // A joint-return spouse is already counted under (A) in their own right.
      if (facts.filing_status == FilingStatus::MarriedSeparate && facts.spouse_birth &&
          attained(*facts.spouse_birth, stated_age(*spouse), facts.taxable_year)) {
        bool allowed = true;
        if (const auto* seg = lead(*spouse)) {
          for (const auto& r : resolve_segment_refs(statute_, spouse->id, *seg)) {
            if (r.target && r.target->path().size() > 1 && r.target->section() == "151") {
              allowed = spouse_exemption_allowable(*r.target, facts);
              break;
            }
          }
        }
        if (allowed) {
          ++count;
          apply(spouse->id);
        }
      }
    }
    const DollarAmount total(each.dollars * count);
    if (count > 0) {
      apply(c3.id);
      apply(f);
      apply(f1);
    }
    return total;
  }

  EvalResult taxable_income(const TaxpayerFacts& facts) {
    validate(facts);
    if (facts.itemizes) {
      throw Error(ErrorCode::ItemizerUnsupported,
                  "itemized deductions are outside the corpus");
    }
    require(known().b);
    apply(known().s63);
    apply(known().b);
    visit(known().b1);
    apply(known().b1);
    const auto sd = standard(facts);
    EvalResult result;
    result.basic = sd.first;
    result.additional = sd.second;
    result.standard_deduction = sd.first + sd.second;
    result.taxable_income = facts.agi - result.standard_deduction;
    result.coverage = report();
    result.cola = cola_;
    return result;
  }

  std::pair<DollarAmount, DollarAmount> standard(const TaxpayerFacts& facts) {
    if (facts.itemizes) {
      throw Error(ErrorCode::ItemizerUnsupported,
                  "itemized deductions are outside the corpus");
    }
    require(known().c1);
    apply(known().s63);
    apply(known().c);
    apply(known().c1);
    visit(known().c1A);
    apply(known().c1A);
    const DollarAmount basic_amount = basic(facts);
    const DollarAmount additional_amount = additional(facts);
    visit(known().c1B);
    if (additional_amount.dollars > 0) apply(known().c1B);
    return {basic_amount, additional_amount};
  }

 private:
  bool attained(const Date& birth, int age, int year) const {
    return attained_age(birth, age, year, options_.age_convention);
  }

  static int stated_age(const ProvisionNode& node) {
    static const std::regex kAge(R"(attained age (\d+))");
    std::smatch m;
    const std::string text = node.text();
    if (!std::regex_search(text, m, kAge)) {
      throw Error(ErrorCode::UnmodeledRule, node.id.render() + " states no age");
    }
    return std::stoi(m[1].str());
  }

  bool spouse_exemption_allowable(const ProvisionId& id, const TaxpayerFacts& facts) {
    if (visit(id) == nullptr) return false;
    const bool allowable = facts.filing_status != FilingStatus::Joint &&
                           facts.spouse_gross_income.dollars == 0 &&
                           !facts.spouse_is_dependent_of_another;
    if (allowable) apply(id);
    return allowable;
  }

  // §63(c)(7)(B)(ii)(I)-(II): the amount times the cost-of-living adjustment
  // of the provision (II) names, after (II)'s year substitution.
  Rational increase_ratio(const ProvisionNode& clause, int year) {
    const auto* one = clause.child("I");
    const auto* two = clause.child("II");
    if (one == nullptr || two == nullptr || lead(*two) == nullptr) {
      throw Error(ErrorCode::MissingProvision,
                  clause.id.render() + " lacks subclauses (I) and (II)");
    }
    visit(one->id);
    apply(one->id);
    visit(two->id);
    apply(two->id);
    const auto refs = resolve_segment_refs(statute_, two->id, *lead(*two));
    std::optional<ProvisionId> adjustment, substituted;
    for (const auto& r : refs) {
      if (!r.target) continue;
      if (!adjustment) {
        adjustment = r.target;
      } else if (!substituted) {
        substituted = r.target;
      }
    }
    const auto years = values_of(lead(*two), LiteralKind::Year);
    if (!adjustment || !substituted || years.size() != 2) {
      throw Error(ErrorCode::UnmodeledRule,
                  two->id.render() + " must name an adjustment and a year substitution");
    }
    return cost_of_living(year, *adjustment, *substituted, years[0], years[1]);
  }

  Rational cost_of_living(int year, const ProvisionId& adjustment,
                          const ProvisionId& clause_id, std::int64_t new_year,
                          std::int64_t old_year) {
    if (cpi_ == nullptr) {
      throw Error(ErrorCode::MissingCpiYear, "no C-CPI-U table supplied");
    }
    require(adjustment);
    apply(adjustment);
    const ProvisionId general = clause_id.parent();
    const auto& A = require(general);
    apply(general);
    if (const auto* preceding = A.child("i")) {
      visit(preceding->id);
      if (normalize_quotes(preceding->text()).find("C-CPI-U for the preceding calendar year") ==
          std::string::npos) {
        throw Error(ErrorCode::UnmodeledRule,
                    preceding->id.render() + " does not measure the preceding year's C-CPI-U");
      }
      apply(preceding->id);
    }
    const auto& target = require(clause_id);
    const TextSegment* seg = lead(target);
    if (seg == nullptr) {
      throw Error(ErrorCode::UnmodeledRule, clause_id.render() + " is empty");
    }

    std::string raw = seg->raw;
    bool substituted = false;
    for (auto it = seg->literals.rbegin(); it != seg->literals.rend(); ++it) {
      if (it->kind == LiteralKind::Year && it->value == old_year) {
        raw.replace(it->span.begin, it->span.size(), std::to_string(new_year));
        substituted = true;
      }
    }
    std::string text = normalize_quotes(raw);

    if (substituted) {
      const ProvisionId special = adjustment.child(
          *Label::at_depth("C", static_cast<int>(adjustment.path().size())));
      if (const auto* C = visit(special); C != nullptr && lead(*C)) {
        const auto threshold = values_of(lead(*C), LiteralKind::Year);
        if (!threshold.empty() && new_year > threshold.front()) {
          text = rewrite_base_year_phrase(*C, text);
          apply(C->id);
        }
      }
    }

    static const std::regex kChained(R"(the C-CPI-U for calendar year (\d{4}))");
    std::smatch m;
    if (std::regex_search(text, m, kChained)) {
      apply(clause_id);
      cola_ = cola(*cpi_, year, std::stoi(m[1].str()));
      return *cola_;
    }
    throw Error(ErrorCode::UnmodeledRule,
                clause_id.render() + " compares against the non-chained CPI, which is not modeled");
  }

  const Statute& statute_;
  const CpiTable* cpi_;
  EvalOptions options_;
  std::map<ProvisionId, CoverageStatus> touched_;
  std::optional<Rational> cola_;
  std::vector<ProvisionId> order_;
};

}  // namespace

DollarAmount adjusted_basic_amount(const Statute& statute, int taxable_year,
                                   const ProvisionId& slot, const CpiTable& cpi,
                                   RoundingMode rounding) {
  Evaluator ev(statute, &cpi, EvalOptions{rounding, AgeConvention::Anniversary});
  ev.check_window(taxable_year);
  return ev.adjusted(slot, taxable_year);
}

DollarAmount basic_standard_deduction(const Statute& statute,
                                      const TaxpayerFacts& facts,
                                      const CpiTable& cpi,
                                      const EvalOptions& options) {
  Evaluator ev(statute, &cpi, options);
  return ev.basic(facts);
}

DollarAmount additional_standard_deduction(const Statute& statute,
                                           const TaxpayerFacts& facts,
                                           const EvalOptions& options) {
  Evaluator ev(statute, nullptr, options);
  return ev.additional(facts);
}

DollarAmount standard_deduction(const Statute& statute,
                                const TaxpayerFacts& facts, const CpiTable& cpi,
                                const EvalOptions& options) {
  Evaluator ev(statute, &cpi, options);
  const auto [basic, additional] = ev.standard(facts);
  return basic + additional;
}

EvalResult taxable_income(const Statute& statute, const TaxpayerFacts& facts,
                          const CpiTable& cpi, const EvalOptions& options) {
  Evaluator ev(statute, &cpi, options);
  return ev.taxable_income(facts);
}

}  // namespace statute
