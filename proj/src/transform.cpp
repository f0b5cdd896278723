#include "statute/transform.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <set>
#include <sstream>

#include "statute/error.hpp"
#include "statute/parser.hpp"

namespace statute {

namespace {

ProvisionId pid(std::string_view s) { return ProvisionId::parse(s); }

const TextSegment* lead(const ProvisionNode& node) {
  return node.body.empty() ? nullptr : &node.body.front();
}

std::vector<std::int64_t> values_of(const TextSegment* seg, LiteralKind kind) {
  std::vector<std::int64_t> out;
  if (seg == nullptr) return out;
  for (const auto* lit : seg->of_kind(kind)) out.push_back(lit->value);
  return out;
}

std::string quoted(const std::string& s) {
  std::ostringstream out;
  out << std::quoted(s);
  return out.str();
}

std::int64_t parse_number(const std::string& text, ErrorCode code) {
  std::string digits;
  for (char c : text) {
    if (c != '$' && c != ',') digits.push_back(c);
  }
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (digits.empty() || ec != std::errc{} || p != digits.data() + digits.size()) {
    throw Error(code, "expected a number, got '" + text + "'");
  }
  return v;
}

ProvisionNode& node_or_missing(Statute& statute, const ProvisionId& id) {
  ProvisionNode* node = statute.find(id);
  if (node == nullptr || node->elided) {
    throw Error(ErrorCode::TargetMissing, id.render() + " is not in the statute");
  }
  return *node;
}

void remove_node(Statute& statute, const ProvisionId& id) {
  node_or_missing(statute, id);
  auto& siblings =
      id.depth() == 0 ? statute.sections : statute.find(id.parent())->children;
  siblings.erase(std::find_if(siblings.begin(), siblings.end(),
                              [&](const ProvisionNode& n) { return n.id == id; }));
}

// Rewrites the single literal of `kind` with value `from` found anywhere in
// `node`'s text. Returns false when there is none or more than one.
bool replace_literal(ProvisionNode& node, LiteralKind kind, std::int64_t from,
                     const std::string& replacement) {
  TextSegment* hit_seg = nullptr;
  const Literal* hit = nullptr;
  int count = 0;
  auto scan = [&](std::vector<TextSegment>& segs) {
    for (auto& seg : segs) {
      for (const auto& lit : seg.literals) {
        if (lit.kind == kind && lit.value == from) {
          ++count;
          hit_seg = &seg;
          hit = &lit;
        }
      }
    }
  };
  scan(node.body);
  scan(node.continuation);
  if (count != 1) return false;
  std::string raw = hit_seg->raw;
  raw.replace(hit->span.begin, hit->span.size(), replacement);
  *hit_seg = make_segment(std::move(raw));
  return true;
}

constexpr std::string_view kEllipsis = "\xE2\x80\xA6";

// Locates `pattern` in `raw`, expanding "..." wildcards. The span includes
// the whitespace in front of the match.
std::optional<Span> find_conjunct(const std::string& raw, std::string pattern) {
  if (auto at = pattern.find(kEllipsis); at != std::string::npos) {
    pattern.replace(at, kEllipsis.size(), "...");
  }
  const auto dots = pattern.find("...");
  std::string prefix = pattern.substr(0, dots);
  while (!prefix.empty() && prefix.back() == ' ') prefix.pop_back();
  const auto begin = raw.find(prefix);
  if (prefix.empty() || begin == std::string::npos) return std::nullopt;
  std::size_t end = begin + prefix.size();
  if (dots != std::string::npos) {
    std::string suffix = pattern.substr(dots + 3);
    while (!suffix.empty() && suffix.front() == ' ') suffix.erase(0, 1);
    if (suffix.empty()) {
      end = !raw.empty() && raw.back() == '.' ? raw.size() - 1 : raw.size();
    } else {
      const auto s = raw.find(suffix, end);
      if (s == std::string::npos) return std::nullopt;
      end = s + suffix.size();
    }
  }
  std::size_t b = begin;
  while (b > 0 && raw[b - 1] == ' ') --b;
  return Span{b, end};
}

}  // namespace

std::string_view to_string(InlineKind kind) {
  switch (kind) {
    case InlineKind::RemoveProvision: return "RemoveProvision";
    case InlineKind::SubstituteAmount: return "SubstituteAmount";
    case InlineKind::SubstituteYear: return "SubstituteYear";
    case InlineKind::RewriteClause: return "RewriteClause";
  }
  return "Unknown";
}

std::string InlineStep::serialize() const {
  std::string out = std::string(to_string(kind)) + " " + target.render();
  switch (kind) {
    case InlineKind::RemoveProvision:
      break;
    case InlineKind::SubstituteAmount:
    case InlineKind::SubstituteYear:
      out += " " + std::to_string(old_value) + " " + std::to_string(new_value);
      break;
    case InlineKind::RewriteClause:
      out += " " + quoted(old_text) + " " + quoted(new_text);
      break;
  }
  return out + " by " + justification.render();
}

InlineStep InlineStep::parse(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string kind, target, by, justification;
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::InvalidArgument,
                 "inline step '" + std::string(line) + "': " + why);
  };
  if (!(in >> kind >> target)) throw bad("expected '<kind> <target> ...'");
  InlineStep step;
  step.target = ProvisionId::parse(target);
  if (kind == "RemoveProvision") {
    step.kind = InlineKind::RemoveProvision;
  } else if (kind == "SubstituteAmount" || kind == "SubstituteYear") {
    step.kind = kind == "SubstituteAmount" ? InlineKind::SubstituteAmount
                                           : InlineKind::SubstituteYear;
    std::string from, to;
    if (!(in >> from >> to)) throw bad("expected old and new values");
    step.old_value = parse_number(from, ErrorCode::InvalidArgument);
    step.new_value = parse_number(to, ErrorCode::InvalidArgument);
  } else if (kind == "RewriteClause") {
    step.kind = InlineKind::RewriteClause;
    if (!(in >> std::quoted(step.old_text) >> std::quoted(step.new_text))) {
      throw bad("expected quoted old and new clause text");
    }
  } else {
    throw bad("unknown step kind");
  }
  if (!(in >> by >> justification) || by != "by") throw bad("expected 'by <provision>'");
  step.justification = ProvisionId::parse(justification);
  std::string rest;
  if (in >> rest) throw bad("trailing text");
  return step;
}

std::string InlineStep::describe() const {
  const std::string per = " (per " + justification.render() + ")";
  switch (kind) {
    case InlineKind::RemoveProvision:
      return "Remove " + target.render() + per;
    case InlineKind::SubstituteAmount:
      return "Substitute " + format_dollars(DollarAmount(new_value)) + " for " +
             format_dollars(DollarAmount(old_value)) + " in " + target.render() + per;
    case InlineKind::SubstituteYear:
      return "Substitute " + std::to_string(new_value) + " for " +
             std::to_string(old_value) + " in " + target.render() + per;
    case InlineKind::RewriteClause:
      return "Rewrite " + target.render() + " to read " + quoted(new_text) + per;
  }
  return {};
}

std::string render_plan(const InlinePlan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    out += std::to_string(i + 1) + ". " + plan[i].describe() + "\n";
  }
  return out;
}

Statute apply_inline_step(const Statute& statute, const InlineStep& step) {
  Statute out = statute;
  if (step.kind == InlineKind::RemoveProvision) {
    remove_node(out, step.target);
    return out;
  }
  ProvisionNode& node = node_or_missing(out, step.target);
  auto mismatch = [&](const std::string& what) {
    return Error(ErrorCode::LiteralMismatch,
                 step.target.render() + " does not contain " + what);
  };
  switch (step.kind) {
    case InlineKind::SubstituteAmount:
      if (!replace_literal(node, LiteralKind::DollarAmount, step.old_value,
                           format_dollars(DollarAmount(step.new_value)))) {
        throw mismatch("exactly one " + format_dollars(DollarAmount(step.old_value)));
      }
      break;
    case InlineKind::SubstituteYear:
      if (!replace_literal(node, LiteralKind::Year, step.old_value,
                           std::to_string(step.new_value))) {
        throw mismatch("exactly one year " + std::to_string(step.old_value));
      }
      break;
    case InlineKind::RewriteClause:
      if (node.body.empty() ||
          normalize_quotes(node.body.front().raw) != normalize_quotes(step.old_text)) {
        throw mismatch(quoted(step.old_text));
      }
      node.body.front() = make_segment(step.new_text);
      break;
    case InlineKind::RemoveProvision:
      break;
  }
  return out;
}

Statute apply_plan(const Statute& statute, const InlinePlan& plan) {
  Statute out = statute;
  for (const auto& step : plan) out = apply_inline_step(out, step);
  return out;
}

InlinePlan plan_inlining(const Statute& statute, int taxable_year) {
  const ProvisionId c7 = pid("§63(c)(7)");
  const ProvisionId c7A = pid("§63(c)(7)(A)");
  const ProvisionId c7Bi = pid("§63(c)(7)(B)(i)");
  const ProvisionId c7Bii = pid("§63(c)(7)(B)(ii)");

  const ProvisionNode* window = statute.find(c7);
  const auto years = window ? values_of(lead(*window), LiteralKind::Year)
                            : std::vector<std::int64_t>{};
  if (years.size() < 2 || !(years.front() < taxable_year && taxable_year < years.back())) {
    throw Error(ErrorCode::UnsupportedYear,
                "taxable year " + std::to_string(taxable_year) +
                    " is outside the §63(c)(7) window");
  }

  InlinePlan plan;
  Statute work = statute;
  auto add = [&](InlineStep step) {
    work = apply_inline_step(work, step);
    plan.push_back(std::move(step));
  };

  if (const auto* Bi = work.find(c7Bi); Bi && lead(*Bi)) {
    const auto refs = resolve_segment_refs(work, c7Bi, *lead(*Bi));
    if (!refs.empty() && refs.front().target && work.contains(*refs.front().target)) {
      add({InlineKind::RemoveProvision, *refs.front().target, 0, 0, {}, {}, c7Bi});
    }
  }

  if (const auto* A = work.find(c7A)) {
    std::vector<InlineStep> steps;
    for (const auto& clause : A->children) {
      const auto* seg = lead(clause);
      const auto dollars = values_of(seg, LiteralKind::DollarAmount);
      if (clause.elided || dollars.size() != 2) continue;
      const auto refs = resolve_segment_refs(work, clause.id, *seg);
      if (refs.empty() || !refs.front().target) continue;
      const auto* slot = work.find(*refs.front().target);
      if (slot == nullptr) continue;
      const auto current = values_of(lead(*slot), LiteralKind::DollarAmount);
      if (current.size() == 1 && current.front() == dollars[1]) {
        steps.push_back({InlineKind::SubstituteAmount, slot->id, dollars[1], dollars[0],
                         {}, {}, c7A});
      }
    }
    for (auto& s : steps) add(std::move(s));
  }

  const auto* Bii = work.find(c7Bii);
  const auto gate = Bii ? values_of(lead(*Bii), LiteralKind::Year) : std::vector<std::int64_t>{};
  if (gate.empty() || taxable_year <= gate.front()) return plan;

  const auto* two = Bii->child("II");
  if (two == nullptr || lead(*two) == nullptr) return plan;
  std::vector<ProvisionId> targets;
  for (const auto& r : resolve_segment_refs(work, two->id, *lead(*two))) {
    if (r.target) targets.push_back(*r.target);
  }
  const auto subst = values_of(lead(*two), LiteralKind::Year);
  if (targets.size() < 2 || subst.size() != 2) {
    throw Error(ErrorCode::UnmodeledRule,
                two->id.render() + " must name an adjustment and a year substitution");
  }
  const ProvisionId adjustment = targets[0];
  const ProvisionId clause = targets[1];
  const ProvisionId two_id = two->id;
  const auto* target = work.find(clause);
  if (target == nullptr) return plan;
  const auto clause_years = values_of(lead(*target), LiteralKind::Year);
  if (std::count(clause_years.begin(), clause_years.end(), subst[1]) != 1) return plan;
  add({InlineKind::SubstituteYear, clause, subst[1], subst[0], {}, {}, two_id});

  const ProvisionId special = adjustment.child(
      *Label::at_depth("C", static_cast<int>(adjustment.path().size())));
  const auto* rule = work.find(special);
  if (rule == nullptr) return plan;
  const auto threshold = values_of(lead(*rule), LiteralKind::Year);
  if (threshold.empty() || subst[0] <= threshold.front()) return plan;
  const std::string before = work.find(clause)->body.front().raw;
  const std::string after = rewrite_base_year_phrase(*rule, normalize_quotes(before));
  if (after != normalize_quotes(before)) {
    add({InlineKind::RewriteClause, clause, 0, 0, before, after, special});
  }
  return plan;
}

std::string_view to_string(MutationKind kind) {
  switch (kind) {
    case MutationKind::DeleteConjunct: return "DeleteConjunct";
    case MutationKind::ReplaceAmount: return "ReplaceAmount";
    case MutationKind::DeleteProvision: return "DeleteProvision";
    case MutationKind::ReplaceYear: return "ReplaceYear";
  }
  return "Unknown";
}

Mutation Mutation::delete_conjunct(ProvisionId target, std::string text) {
  if (!(text.rfind("and ", 0) == 0 || text.rfind("or ", 0) == 0)) {
    throw Error(ErrorCode::InvalidMutation,
                "a deleted conjunct must begin with 'and ' or 'or ': '" + text + "'");
  }
  Mutation m;
  m.kind_ = MutationKind::DeleteConjunct;
  m.target_ = std::move(target);
  m.conjunct_ = std::move(text);
  m.label_ = "delete-conjunct " + m.target_.render();
  return m;
}

Mutation Mutation::replace_amount(ProvisionId target, std::int64_t from, std::int64_t to) {
  if (from < 0 || to < 0) {
    throw Error(ErrorCode::InvalidMutation, "dollar amounts must be non-negative");
  }
  Mutation m;
  m.kind_ = MutationKind::ReplaceAmount;
  m.target_ = std::move(target);
  m.from_ = from;
  m.to_ = to;
  m.label_ = "amount " + m.target_.render() + " " + std::to_string(from) + "->" +
             std::to_string(to);
  return m;
}

Mutation Mutation::replace_year(ProvisionId target, int from, int to) {
  if (from < 1900 || from > 2099 || to < 1900 || to > 2099) {
    throw Error(ErrorCode::InvalidMutation, "years must lie in 1900-2099");
  }
  Mutation m;
  m.kind_ = MutationKind::ReplaceYear;
  m.target_ = std::move(target);
  m.from_ = from;
  m.to_ = to;
  m.label_ = "year " + m.target_.render() + " " + std::to_string(from) + "->" +
             std::to_string(to);
  return m;
}

Mutation Mutation::delete_provision(ProvisionId target) {
  if (target.depth() == 0) {
    throw Error(ErrorCode::InvalidMutation, "cannot delete a whole section");
  }
  Mutation m;
  m.kind_ = MutationKind::DeleteProvision;
  m.target_ = std::move(target);
  m.label_ = "delete " + m.target_.render();
  return m;
}

Mutation Mutation::parse(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::string kind, target;
  if (!(in >> kind >> target)) {
    throw Error(ErrorCode::InvalidMutation, "expected '<kind> <target> <payload>'");
  }
  ProvisionId id = ProvisionId::parse(target);
  Mutation m;
  if (kind == "DeleteConjunct") {
    std::string text;
    if (!(in >> std::quoted(text))) {
      throw Error(ErrorCode::InvalidMutation, "DeleteConjunct needs a quoted conjunct");
    }
    m = delete_conjunct(std::move(id), std::move(text));
  } else if (kind == "ReplaceAmount" || kind == "ReplaceYear") {
    std::string from, to;
    if (!(in >> from >> to)) {
      throw Error(ErrorCode::InvalidMutation, kind + " needs old and new values");
    }
    const auto a = parse_number(from, ErrorCode::InvalidMutation);
    const auto b = parse_number(to, ErrorCode::InvalidMutation);
    m = kind == "ReplaceAmount"
            ? replace_amount(std::move(id), a, b)
            : replace_year(std::move(id), static_cast<int>(a), static_cast<int>(b));
  } else if (kind == "DeleteProvision") {
    m = delete_provision(std::move(id));
  } else {
    throw Error(ErrorCode::InvalidMutation, "unknown mutation kind '" + kind + "'");
  }
  std::string rest;
  if (in >> rest) {
    throw Error(ErrorCode::InvalidMutation, "trailing text after mutation payload");
  }
  return m;
}

std::string Mutation::serialize() const {
  std::string out = std::string(to_string(kind_)) + " " + target_.render();
  switch (kind_) {
    case MutationKind::DeleteConjunct:
      return out + " " + quoted(conjunct_);
    case MutationKind::ReplaceAmount:
    case MutationKind::ReplaceYear:
      return out + " " + std::to_string(from_) + " " + std::to_string(to_);
    case MutationKind::DeleteProvision:
      break;
  }
  return out;
}

std::vector<Mutation> load_mutations(std::string_view source) {
  std::vector<Mutation> out;
  std::istringstream in{std::string(source)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(Mutation::parse(line));
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

Statute apply_mutation(const Statute& statute, const Mutation& mutation) {
  Statute out = statute;
  if (mutation.kind() == MutationKind::DeleteProvision) {
    remove_node(out, mutation.target());
    return out;
  }
  ProvisionNode& node = node_or_missing(out, mutation.target());
  auto mismatch = [&](const std::string& what) {
    return Error(ErrorCode::SpanMismatch,
                 mutation.target().render() + " does not contain " + what);
  };
  switch (mutation.kind()) {
    case MutationKind::DeleteConjunct: {
      for (auto* segs : {&node.body, &node.continuation}) {
        for (auto& seg : *segs) {
          if (auto span = find_conjunct(seg.raw, mutation.conjunct())) {
            std::string raw = seg.raw;
            raw.erase(span->begin, span->size());
            seg = make_segment(std::move(raw));
            return out;
          }
        }
      }
      throw mismatch(quoted(mutation.conjunct()));
    }
    case MutationKind::ReplaceAmount:
      if (!replace_literal(node, LiteralKind::DollarAmount, mutation.from(),
                           format_dollars(DollarAmount(mutation.to())))) {
        throw mismatch("exactly one " + format_dollars(DollarAmount(mutation.from())));
      }
      break;
    case MutationKind::ReplaceYear:
      if (!replace_literal(node, LiteralKind::Year, mutation.from(),
                           std::to_string(mutation.to()))) {
        throw mismatch("exactly one year " + std::to_string(mutation.from()));
      }
      break;
    case MutationKind::DeleteProvision:
      break;
  }
  return out;
}

KillVerdict compare_outcomes(const EvalResult& a, const EvalResult& b) {
  KillVerdict v;
  auto money = [&](const char* field, DollarAmount x, DollarAmount y) {
    if (x != y) v.differences.push_back({field, std::to_string(x.dollars), std::to_string(y.dollars)});
  };
  money("taxable_income", a.taxable_income, b.taxable_income);
  money("standard_deduction", a.standard_deduction, b.standard_deduction);
  money("basic", a.basic, b.basic);
  money("additional", a.additional, b.additional);
  std::set<ProvisionId> ids;
  for (const auto& [id, s] : a.coverage.statuses) ids.insert(id);
  for (const auto& [id, s] : b.coverage.statuses) ids.insert(id);
  for (const auto& id : ids) {
    const bool x = a.coverage.applied(id);
    const bool y = b.coverage.applied(id);
    if (x != y) {
      v.differences.push_back({id.render(), x ? "Applied" : "not Applied",
                               y ? "Applied" : "not Applied"});
    }
  }
  v.killed = !v.differences.empty();
  return v;
}

namespace {

KillVerdict against(const EvalResult& base, const Statute& mutant, const TaxpayerFacts& facts,
                    const CpiTable& cpi, const EvalOptions& options) {
  try {
    return compare_outcomes(base, taxable_income(mutant, facts, cpi, options));
  } catch (const Error& e) {
    KillVerdict verdict;
    verdict.killed = true;
    verdict.differences.push_back({"evaluation", "ok", e.what()});
    return verdict;
  }
}

}  // namespace

KillVerdict kill_check(const Statute& original, const Statute& mutant,
                       const TaxpayerFacts& facts, const CpiTable& cpi,
                       const EvalOptions& options) {
  return against(taxable_income(original, facts, cpi, options), mutant, facts, cpi, options);
}

MutationSearchResult mutation_search(const Statute& original, const Statute& mutant,
                                     const CpiTable& cpi, const GeneratorConfig& config,
                                     std::size_t budget, std::uint64_t seed,
                                     const EvalOptions& options) {
  Rng rng(seed);
  MutationSearchResult result;
  while (result.cases_tried < budget) {
    TaxpayerFacts facts = generate_facts(rng, config);
    ++result.cases_tried;
    const EvalResult base = taxable_income(original, facts, cpi, options);
    KillVerdict verdict = against(base, mutant, facts, cpi, options);
    if (verdict.killed) {
      result.facts = std::move(facts);
      result.verdict = std::move(verdict);
      break;
    }
  }
  return result;
}

}  // namespace statute
