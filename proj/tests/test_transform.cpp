#include <gtest/gtest.h>

#include "statute/error.hpp"
#include "statute/random.hpp"
#include "statute/synth.hpp"
#include "statute/transform.hpp"
#include "support.hpp"

using namespace statute;
using testdata::appendix_b;
using testdata::corpus;
using testdata::id;

namespace {

ErrorCode mutation_error(const Mutation& m) {
  try {
    apply_mutation(corpus(), m);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << m.serialize();
  return ErrorCode::ParseFailure;
}

std::string after_steps(int year, std::size_t n) {
  const auto plan = plan_inlining(corpus(), year);
  Statute s = corpus();
  for (std::size_t i = 0; i < n && i < plan.size(); ++i) s = apply_inline_step(s, plan[i]);
  return render_statute(s);
}

}  // namespace

TEST(Inline, PlanFor2025) {
  const auto plan = plan_inlining(corpus(), 2025);
  ASSERT_GE(plan.size(), 4u);
  EXPECT_EQ(plan[0].kind, InlineKind::RemoveProvision);
  EXPECT_EQ(plan[0].target, id("§63(c)(4)"));
  for (const auto& step : plan) {
    EXPECT_EQ(InlineStep::parse(step.serialize()), step) << step.serialize();
  }
  bool rewrote = false;
  for (const auto& step : plan) {
    if (step.kind == InlineKind::RewriteClause && step.target == id("§1(f)(3)(A)(ii)")) {
      rewrote = true;
      EXPECT_EQ(step.justification, id("§1(f)(3)(C)"));
    }
  }
  EXPECT_TRUE(rewrote);
  EXPECT_NE(render_plan(plan).find("1. "), std::string::npos);
}

TEST(Inline, TextAfterEachStage) {
  const auto plan = plan_inlining(corpus(), 2025);
  std::size_t c_step = 0, rewrite_step = 0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (plan[i].target == id("§63(c)(2)(C)") && plan[i].kind == InlineKind::SubstituteAmount) c_step = i + 1;
    if (plan[i].kind == InlineKind::RewriteClause) rewrite_step = i + 1;
  }
  ASSERT_GT(c_step, 0u);
  ASSERT_GT(rewrite_step, 0u);
  const std::string removed = after_steps(2025, 1);
  EXPECT_EQ(removed.find("(4) Adjustments for inflation"), std::string::npos);
  EXPECT_NE(after_steps(2025, c_step).find("(C) $12,000 in any other case."), std::string::npos);
  const std::string rewritten = after_steps(2025, rewrite_step);
  EXPECT_NE(rewritten.find("the C-CPI-U for calendar year 2017"), std::string::npos);
  EXPECT_EQ(rewritten.find("the CPI for calendar year 2017"), std::string::npos);
}

TEST(Inline, InlinedCorpusEvaluatesTheSame) {
  Rng rng(2024);
  GeneratorConfig cfg;
  cfg.year_min = 2019;
  std::map<int, Statute> inlined;
  for (int y = 2019; y <= 2025; ++y) inlined.emplace(y, apply_plan(corpus(), plan_inlining(corpus(), y)));
  for (int i = 0; i < 300; ++i) {
    const auto f = generate_facts(rng, cfg);
    for (auto mode : {RoundingMode::Floor50, RoundingMode::Nearest50}) {
      const EvalOptions opts{mode, AgeConvention::Anniversary};
      const auto a = taxable_income(corpus(), f, appendix_b(), opts);
      const auto b = taxable_income(inlined.at(f.taxable_year), f, appendix_b(), opts);
      EXPECT_EQ(a.taxable_income, b.taxable_income) << render_facts(f);
    }
  }
}

TEST(Inline, StaleStepIsRejected) {
  const auto plan = plan_inlining(corpus(), 2025);
  const Statute once = apply_inline_step(corpus(), plan[0]);
  EXPECT_THROW(apply_inline_step(once, plan[0]), Error);
  auto wrong = plan[1];
  wrong.old_value += 1;
  EXPECT_THROW(apply_inline_step(corpus(), wrong), Error);
}

TEST(Mutation, ParsesCorpusFiles) {
  const auto ms = load_mutations(testdata::read("data/mutations/amounts.txt"));
  ASSERT_EQ(ms.size(), 5u);
  EXPECT_EQ(ms[0].kind(), MutationKind::ReplaceAmount);
  EXPECT_EQ(ms[0].from(), 600);
  EXPECT_EQ(ms[0].to(), 700);
  for (const auto& m : ms) EXPECT_EQ(Mutation::parse(m.serialize()).serialize(), m.serialize());
  const auto conj = load_mutations(testdata::read("data/mutations/spouse_exemption.txt"));
  ASSERT_EQ(conj.size(), 1u);
  EXPECT_EQ(conj[0].kind(), MutationKind::DeleteConjunct);
}

TEST(Mutation, DeleteConjunctTrimsTheCondition) {
  const auto m = load_mutations(testdata::read("data/mutations/spouse_exemption.txt"))[0];
  const Statute mutant = apply_mutation(corpus(), m);
  EXPECT_EQ(mutant.find(id("§63(f)(1)(B)"))->text(),
            "for the spouse of the taxpayer if the spouse has attained age 65 before the close "
            "of the taxable year.");
  EXPECT_EQ(corpus().find(id("§63(f)(1)(B)"))->text().find("section 151(b)") != std::string::npos, true);
}

TEST(Mutation, ReplaceAmountChangesTheResult) {
  const Statute mutant =
      apply_mutation(corpus(), Mutation::replace_amount(id("§63(c)(7)(A)(ii)"), 12000, 13000));
  EXPECT_EQ(taxable_income(mutant, testdata::facts("example1"), appendix_b()).taxable_income,
            DollarAmount(190350));
}

TEST(Mutation, Errors) {
  EXPECT_EQ(mutation_error(Mutation::replace_amount(id("§63(c)(5)"), 1, 2)), ErrorCode::TargetMissing);
  EXPECT_EQ(mutation_error(Mutation::replace_amount(id("§63(c)(2)(C)"), 3001, 2)), ErrorCode::SpanMismatch);
  EXPECT_EQ(mutation_error(Mutation::delete_conjunct(id("§63(f)(1)(A)"), "and nothing like this")),
            ErrorCode::SpanMismatch);
  EXPECT_THROW(Mutation::delete_conjunct(id("§63(f)(1)(B)"), "but not this"), Error);
  EXPECT_THROW(Mutation::delete_provision(id("§63")), Error);
  EXPECT_THROW(Mutation::parse("Frobnicate §63(c) 1 2"), Error);
}

TEST(KillCheck, Example5KillsExample1Survives) {
  const auto m = load_mutations(testdata::read("data/mutations/spouse_exemption.txt"))[0];
  const Statute mutant = apply_mutation(corpus(), m);
  const auto k5 = kill_check(corpus(), mutant, testdata::facts("example5"), appendix_b());
  EXPECT_TRUE(k5.killed);
  const Difference additional{"additional", "0", "600"};
  EXPECT_NE(std::find(k5.differences.begin(), k5.differences.end(), additional), k5.differences.end());
  const auto k1 = kill_check(corpus(), mutant, testdata::facts("example1"), appendix_b());
  EXPECT_FALSE(k1.killed);
  EXPECT_TRUE(k1.differences.empty());
}

TEST(KillCheck, SearchFindsAKiller) {
  const auto m = load_mutations(testdata::read("data/mutations/spouse_exemption.txt"))[0];
  const Statute mutant = apply_mutation(corpus(), m);
  const auto found = mutation_search(corpus(), mutant, appendix_b(), {}, 10000, 99);
  ASSERT_TRUE(found.facts);
  EXPECT_TRUE(found.verdict.killed);
  EXPECT_TRUE(kill_check(corpus(), mutant, *found.facts, appendix_b()).killed);
  EXPECT_LE(found.cases_tried, 10000u);
}

TEST(KillCheck, IdenticalStatuteSurvivesEverything) {
  const auto found = mutation_search(corpus(), corpus(), appendix_b(), {}, 300, 1);
  EXPECT_FALSE(found.facts);
  EXPECT_EQ(found.cases_tried, 300u);
}

TEST(KillCheck, EvaluationFailureKills) {
  const Statute mutant = apply_mutation(corpus(), Mutation::delete_provision(id("§63(c)(7)")));
  const auto k = kill_check(corpus(), mutant, testdata::facts("example1"), appendix_b());
  EXPECT_TRUE(k.killed);
  ASSERT_EQ(k.differences.size(), 1u);
  EXPECT_EQ(k.differences[0].field, "evaluation");
}
