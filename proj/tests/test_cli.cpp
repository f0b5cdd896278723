#include <gtest/gtest.h>

#include <sstream>

#include "statute/cli.hpp"

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = statute::dispatch(args, out, err);
  return {status, out.str(), err.str()};
}

bool has(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

}  // namespace

TEST(Cli, EvalMachineAndHuman) {
  const auto m = run({"eval", "--facts", "data/facts/example1.facts", "--format", "machine"});
  EXPECT_EQ(m.status, 0) << m.err;
  EXPECT_TRUE(has(m.out, "taxable_income=192350\n"));
  EXPECT_TRUE(has(m.out, "basic=24000\n"));
  const auto h = run({"eval", "--facts", "data/facts/example2.facts"});
  EXPECT_EQ(h.status, 0);
  EXPECT_TRUE(has(h.out, "Taxable income: -$5,200")) << h.out;
}

TEST(Cli, RoundingFlag) {
  const auto r = run({"eval", "--facts", "data/facts/example3.facts", "--rounding", "nearest50",
                      "--format", "machine"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(has(r.out, "basic=30000\n")) << r.out;
  EXPECT_TRUE(has(r.out, "cola=24.81%\n")) << r.out;
  const auto f = run({"eval", "--facts", "data/facts/example3.facts", "--format", "machine"});
  EXPECT_TRUE(has(f.out, "basic=29900\n")) << f.out;
  EXPECT_EQ(run({"eval", "--facts", "data/facts/example3.facts", "--rounding", "up"}).status, 2);
}

TEST(Cli, Coverage) {
  const auto r = run({"coverage", "--facts", "data/facts/example1.facts", "--format", "machine"});
  EXPECT_EQ(r.status, 0);
  EXPECT_TRUE(has(r.out, "coverage.§63(c)(4)=Overridden\n"));
  EXPECT_TRUE(has(r.out, "coverage.§63(c)(7)=Applied\n"));
}

TEST(Cli, ParseListsLiteralsAndRefs) {
  const auto r = run({"parse", "--format", "machine"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(has(r.out, "literal=§63(c)(2)(C) DollarAmount 3000\n")) << r.out;
  EXPECT_TRUE(has(r.out, "ref=§63(c)(3) \"subsection (f)\""));
  const auto h = run({"parse"});
  EXPECT_TRUE(has(h.out, "(C) $3,000 in any other case."));
}

TEST(Cli, SynthNeedsSeed) {
  EXPECT_EQ(run({"synth", "--predicate", "§63(f)(1)(B)=Applied"}).status, 2);
  const auto r = run({"synth", "--predicate", "§63(f)(1)(B)=Applied", "--seed", "4", "--format", "machine"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(has(r.out, "seed=4\n"));
  EXPECT_TRUE(has(r.out, "result=found\n"));
  EXPECT_TRUE(has(r.out, "filing_status=married_separate\n")) << r.out;
  const auto none = run({"synth", "--predicate", "§63(c)(4)=Applied", "--seed", "4", "--budget", "50",
                         "--format", "machine"});
  EXPECT_EQ(none.status, 1);
  EXPECT_TRUE(has(none.out, "result=not_found\n"));
}

TEST(Cli, MutateReportsSurvivors) {
  const auto r = run({"mutate", "--mutations", "data/mutations/amounts.txt", "--facts",
                      "data/facts/example1.facts", "--format", "machine"});
  EXPECT_EQ(r.status, 1) << r.err;
  EXPECT_TRUE(has(r.out, "verdict=survived\n"));
  EXPECT_TRUE(has(r.out, "verdict=killed\n"));
  const auto s = run({"mutate", "--mutation", "ReplaceAmount §63(c)(7)(A)(ii) 12000 13000", "--facts",
                      "data/facts/example1.facts", "--format", "machine"});
  EXPECT_EQ(s.status, 0);
  EXPECT_TRUE(has(s.out, "diff=taxable_income 192350 190350\n")) << s.out;
  const auto search = run({"mutate", "--mutations", "data/mutations/spouse_exemption.txt", "--seed", "99",
                           "--format", "machine"});
  EXPECT_EQ(search.status, 0) << search.out << search.err;
  EXPECT_TRUE(has(search.out, "verdict=killed\n"));
  EXPECT_EQ(run({"mutate", "--mutations", "data/mutations/spouse_exemption.txt"}).status, 2);
}

TEST(Cli, InlinePlanAndSteps) {
  const auto plan = run({"inline", "--year", "2025", "--format", "machine"});
  EXPECT_EQ(plan.status, 0) << plan.err;
  EXPECT_TRUE(has(plan.out, "step.1=RemoveProvision §63(c)(4)"));
  EXPECT_EQ(run({"inline", "--year", "2025", "--step", "99"}).status, 2);
  EXPECT_EQ(run({"inline", "--year", "2030"}).status, 2);
}

TEST(Cli, TranscriptBridge) {
  const auto r = run({"coverage", "--facts", "data/facts/example1.facts", "--reasoner", "mock",
                      "--transcript", "data/transcripts/example1_listcoverage.jsonl", "--format",
                      "machine"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(has(r.out, "agreement.exact_match=false\n"));
  EXPECT_TRUE(has(r.out, "agreement.diff=§63(c)(4) missing listed\n"));
  const auto miss = run({"eval", "--facts", "data/facts/example2.facts", "--reasoner", "mock",
                         "--transcript", "data/transcripts/example1_listcoverage.jsonl"});
  EXPECT_EQ(miss.status, 2);
  EXPECT_TRUE(has(miss.err, "TranscriptMiss"));
}

TEST(Cli, Pbt) {
  const auto f = run({"pbt", "--property", "monotonicity", "--seed", "7", "--iterations", "10000",
                      "--rounding", "nearest50", "--format", "machine"});
  EXPECT_EQ(f.status, 0);
  EXPECT_TRUE(has(f.out, "result=falsified\n"));
  EXPECT_TRUE(has(f.out, "shrunk.dy="));
  const auto hold = run({"pbt", "--property", "floor-bound", "--seed", "7", "--iterations", "200",
                         "--expect-falsify"});
  EXPECT_EQ(hold.status, 1);
  EXPECT_EQ(run({"pbt", "--property", "decomposition", "--seed", "1", "--iterations", "100",
                 "--expect-hold"}).status, 0);
  EXPECT_EQ(run({"pbt", "--property", "nonsense", "--seed", "1"}).status, 2);
  EXPECT_EQ(run({"pbt", "--property", "monotonicity"}).status, 2);
}

TEST(Cli, UsageAndHelp) {
  EXPECT_EQ(run({"--help"}).status, 0);
  EXPECT_EQ(run({}).status, 2);
  EXPECT_EQ(run({"eval"}).status, 2);
  const auto missing = run({"eval", "--facts", "data/facts/nope.facts"});
  EXPECT_EQ(missing.status, 2);
  EXPECT_TRUE(has(missing.err, "statcheck: "));
}
