#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statute/engine.hpp"
#include "statute/synth.hpp"

namespace statute {

enum class InlineKind {
  RemoveProvision,
  SubstituteAmount,
  SubstituteYear,
  RewriteClause,
};

std::string_view to_string(InlineKind kind);

struct InlineStep {
  InlineKind kind = InlineKind::RemoveProvision;
  ProvisionId target;
  // SubstituteAmount / SubstituteYear.
  std::int64_t old_value = 0;
  std::int64_t new_value = 0;
  // RewriteClause: the clause body before and after.
  std::string old_text;
  std::string new_text;
  ProvisionId justification;

  // One line, e.g. `SubstituteAmount §63(c)(2)(C) 3000 12000 by §63(c)(7)(A)`.
  // RewriteClause texts are double-quoted with backslash escapes.
  std::string serialize() const;
  // Throws Error(InvalidArgument | BadIdentifier).
  static InlineStep parse(std::string_view line);
  std::string describe() const;

  friend bool operator==(const InlineStep&, const InlineStep&) = default;
};

using InlinePlan = std::vector<InlineStep>;

// Numbered listing, one step per line with its justification.
std::string render_plan(const InlinePlan& plan);

// The substitutions §63(c)(7) and §1(f)(3)(C) call for in `taxable_year`,
// each derived from the text left by the steps before it. Throws
// Error(UnsupportedYear | UnmodeledRule).
InlinePlan plan_inlining(const Statute& statute, int taxable_year);

// Throws Error(TargetMissing | LiteralMismatch).
Statute apply_inline_step(const Statute& statute, const InlineStep& step);
Statute apply_plan(const Statute& statute, const InlinePlan& plan);

enum class MutationKind {
  DeleteConjunct,
  ReplaceAmount,
  DeleteProvision,
  ReplaceYear,
};

std::string_view to_string(MutationKind kind);

class Mutation {
 public:
  // `text` must begin with "and " or "or ". A "..." inside it matches any
  // run of text; a trailing "..." runs to the end of the sentence.
  static Mutation delete_conjunct(ProvisionId target, std::string text);
  static Mutation replace_amount(ProvisionId target, std::int64_t from, std::int64_t to);
  static Mutation replace_year(ProvisionId target, int from, int to);
  static Mutation delete_provision(ProvisionId target);

  // `kind target payload`, e.g. `ReplaceAmount §63(c)(2)(C) 3000 5000`.
  // Throws Error(InvalidMutation | BadIdentifier).
  static Mutation parse(std::string_view line);

  MutationKind kind() const { return kind_; }
  const ProvisionId& target() const { return target_; }
  const std::string& conjunct() const { return conjunct_; }
  std::int64_t from() const { return from_; }
  std::int64_t to() const { return to_; }
  const std::string& label() const { return label_; }
  std::string serialize() const;

 private:
  Mutation() = default;
  MutationKind kind_ = MutationKind::DeleteProvision;
  ProvisionId target_;
  std::string conjunct_;
  std::int64_t from_ = 0;
  std::int64_t to_ = 0;
  std::string label_;
};

// One mutation per non-blank line; '#' starts a comment line.
std::vector<Mutation> load_mutations(std::string_view source);

// Throws Error(TargetMissing | SpanMismatch).
Statute apply_mutation(const Statute& statute, const Mutation& mutation);

struct Difference {
  std::string field;
  std::string original;
  std::string mutant;

  friend bool operator==(const Difference&, const Difference&) = default;
};

struct KillVerdict {
  bool killed = false;
  std::vector<Difference> differences;
};

// Compares taxable_income, standard_deduction, basic, additional and the
// Applied set of every provision.
KillVerdict compare_outcomes(const EvalResult& original, const EvalResult& mutant);

// A mutant that fails to evaluate counts as killed; the original must evaluate.
KillVerdict kill_check(const Statute& original, const Statute& mutant,
                       const TaxpayerFacts& facts, const CpiTable& cpi,
                       const EvalOptions& options = {});

struct MutationSearchResult {
  std::optional<TaxpayerFacts> facts;
  KillVerdict verdict;
  std::size_t cases_tried = 0;
};

// First generated scenario that kills `mutant`. A mutant that fails to
// evaluate where the original succeeds counts as killed.
MutationSearchResult mutation_search(const Statute& original, const Statute& mutant,
                                     const CpiTable& cpi, const GeneratorConfig& config,
                                     std::size_t budget, std::uint64_t seed,
                                     const EvalOptions& options = {});

}  // namespace statute
