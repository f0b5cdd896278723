#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "statute/error.hpp"
#include "statute/reasoner.hpp"
#include "statute/transform.hpp"
#include "support.hpp"

using namespace statute;
using testdata::appendix_b;
using testdata::corpus_text;
using testdata::id;

namespace {

const TemplateStore& store() {
  static const TemplateStore s = TemplateStore::load(testdata::path("templates"));
  return s;
}

ReasonerRequest request(ReasonerTask task, std::string input) {
  return make_request(store(), task, corpus_text(), std::move(input));
}

class CannedTransport : public Transport {
 public:
  explicit CannedTransport(std::string reply) : reply_(std::move(reply)) {}
  std::string post(const std::string& body) override {
    last_body = body;
    return reply_;
  }
  std::string last_body;

 private:
  std::string reply_;
};

std::filesystem::path scratch(const char* name) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST(Hash, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Templates, RenderAndRefuseGaps) {
  EXPECT_EQ(render_template("a {{x}} b {{y}}", {{"x", "1"}, {"y", "2"}}), "a 1 b 2");
  try {
    render_template("{{x}} {{z}}", {{"x", "1"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TemplateMissing);
  }
  for (auto t : {ReasonerTask::Evaluate, ReasonerTask::ListCoverage, ReasonerTask::ProposeExample,
                 ReasonerTask::InlineOneStep}) {
    const auto& tpl = store().get(template_name(t));
    EXPECT_EQ(tpl.hash, sha256_hex(tpl.text));
    EXPECT_EQ(parse_reasoner_task(to_string(t)), t);
  }
  EXPECT_THROW(TemplateStore::load(scratch("no-such-template-dir")), Error);
}

TEST(Requests, HashCoversTaskTemplateAndPrompt) {
  const std::string facts = testdata::read("data/facts/example1.facts");
  const auto a = request(ReasonerTask::Evaluate, facts);
  const auto b = request(ReasonerTask::ListCoverage, facts);
  EXPECT_EQ(a.hash(), request(ReasonerTask::Evaluate, facts).hash());
  EXPECT_NE(a.hash(), b.hash());
  EXPECT_NE(a.prompt.find("filing_status: joint"), std::string::npos);
  EXPECT_NE(a.prompt.find("(C) $3,000 in any other case."), std::string::npos);
  const std::string expect =
      sha256_hex(std::string("Evaluate") + '\0' + a.template_hash + '\0' + a.prompt);
  EXPECT_EQ(a.hash(), expect);
}

TEST(Replies, LenientExtraction) {
  const auto ev = parse_reply(request(ReasonerTask::Evaluate, ""),
                              "Step one gives $24,000.\nTaxable income: $192,350");
  ASSERT_TRUE(ev.parse_ok);
  EXPECT_EQ(std::get<DollarAmount>(ev.payload), DollarAmount(192350));

  const auto neg = parse_reply(request(ReasonerTask::Evaluate, ""), "Taxable income: -$5,200");
  ASSERT_TRUE(neg.parse_ok);
  EXPECT_EQ(std::get<DollarAmount>(neg.payload), DollarAmount(-5200));

  const auto cov = parse_reply(request(ReasonerTask::ListCoverage, ""),
                               "These apply: §63(b), §63(c)(1)\n- §63(c)(2)(A)(i)");
  ASSERT_TRUE(cov.parse_ok);
  EXPECT_EQ(std::get<std::vector<ProvisionId>>(cov.payload),
            (std::vector<ProvisionId>{id("§63(b)"), id("§63(c)(1)"), id("§63(c)(2)(A)(i)")}));

  const auto bad = parse_reply(request(ReasonerTask::Evaluate, ""), "I cannot say.");
  EXPECT_FALSE(bad.parse_ok);
  EXPECT_EQ(bad.raw, "I cannot say.");
  EXPECT_FALSE(bad.parse_error.empty());

  const auto ex = parse_reply(request(ReasonerTask::ProposeExample, ""),
                              "Try:\n```\n" + testdata::read("data/facts/example5.facts") + "```\n");
  ASSERT_TRUE(ex.parse_ok);
  EXPECT_EQ(std::get<TaxpayerFacts>(ex.payload), testdata::facts("example5"));
}

TEST(Oracle, AnswersEveryTask) {
  OracleReasoner oracle(appendix_b());
  const std::string facts = testdata::read("data/facts/example1.facts");

  const auto ev = oracle.run(request(ReasonerTask::Evaluate, facts));
  ASSERT_TRUE(ev.parse_ok) << ev.parse_error;
  EXPECT_EQ(std::get<DollarAmount>(ev.payload), DollarAmount(192350));

  const auto cov = oracle.run(request(ReasonerTask::ListCoverage, facts));
  ASSERT_TRUE(cov.parse_ok);
  const auto& ids = std::get<std::vector<ProvisionId>>(cov.payload);
  for (const char* p : {"§63(b)", "§63(c)(1)", "§63(c)(2)", "§63(c)(7)"}) {
    EXPECT_NE(std::find(ids.begin(), ids.end(), id(p)), ids.end()) << p;
  }
  EXPECT_EQ(std::find(ids.begin(), ids.end(), id("§63(c)(4)")), ids.end());

  const auto pe = oracle.run(request(ReasonerTask::ProposeExample, "§63(f)(1)(B)=Applied"));
  ASSERT_TRUE(pe.parse_ok) << pe.raw;
  const auto r = taxable_income(testdata::corpus(), std::get<TaxpayerFacts>(pe.payload), appendix_b());
  EXPECT_TRUE(r.coverage.applied(id("§63(f)(1)(B)")));

  const auto step = plan_inlining(testdata::corpus(), 2025)[0];
  const auto in = oracle.run(request(ReasonerTask::InlineOneStep, step.serialize()));
  ASSERT_TRUE(in.parse_ok);
  EXPECT_EQ(std::get<std::string>(in.payload),
            render_statute(apply_inline_step(testdata::corpus(), step)));
}

TEST(Transcript, ReplaysRecordedReplies) {
  const auto req = request(ReasonerTask::Evaluate, testdata::read("data/facts/example1.facts"));
  const auto path = scratch("statute-transcript-test.jsonl");
  {
    std::ofstream out(path);
    out << transcript_line(req, "Taxable income: $190,000\n");
  }
  auto replay = TranscriptReasoner::load(path);
  const auto got = replay.run(req);
  ASSERT_TRUE(got.parse_ok);
  EXPECT_EQ(std::get<DollarAmount>(got.payload), DollarAmount(190000));
  EXPECT_EQ(got.request_hash, req.hash());
  try {
    replay.run(request(ReasonerTask::ListCoverage, "x"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TranscriptMiss);
  }
  std::filesystem::remove(path);
}

TEST(Transcript, CheckedInFilesMatchTheTemplates) {
  for (const char* name : {"example1_listcoverage", "inline_2025_step1"}) {
    auto replay = TranscriptReasoner::load(testdata::path(std::string("data/transcripts/") + name + ".jsonl"));
    (void)replay;
  }
  auto cov = TranscriptReasoner::load(testdata::path("data/transcripts/example1_listcoverage.jsonl"));
  const auto got = cov.run(request(ReasonerTask::ListCoverage, testdata::read("data/facts/example1.facts")));
  EXPECT_TRUE(got.parse_ok);
}

TEST(External, PostsChatJsonAndAudits) {
  auto transport = std::make_unique<CannedTransport>(
      R"({"choices":[{"message":{"role":"assistant","content":"Taxable income: $192,350"}}]})");
  auto* wire = transport.get();
  const auto log = scratch("statute-audit-test.jsonl");
  ExternalReasoner ext(std::move(transport), "test-model", log);
  const auto req = request(ReasonerTask::Evaluate, testdata::read("data/facts/example1.facts"));
  const auto got = ext.run(req);
  ASSERT_TRUE(got.parse_ok);
  EXPECT_EQ(std::get<DollarAmount>(got.payload), DollarAmount(192350));
  EXPECT_NE(wire->last_body.find(R"("model":"test-model")"), std::string::npos);
  EXPECT_NE(wire->last_body.find(R"("role":"user")"), std::string::npos);

  std::ifstream in(log);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_NE(line.find(req.hash()), std::string::npos);
  EXPECT_FALSE(std::getline(in, line));
  std::filesystem::remove(log);
}

TEST(External, UnparseableReplyIsStillAudited) {
  const auto log = scratch("statute-audit-test2.jsonl");
  ExternalReasoner ext(std::make_unique<CannedTransport>(R"({"reply":"no idea"})"), "m", log);
  const auto got = ext.run(request(ReasonerTask::Evaluate, "x"));
  EXPECT_FALSE(got.parse_ok);
  EXPECT_EQ(got.raw, "no idea");
  EXPECT_TRUE(std::filesystem::exists(log));
  std::filesystem::remove(log);
}

TEST(Agreement, Similarity) {
  EXPECT_DOUBLE_EQ(normalized_similarity("", ""), 1.0);
  EXPECT_DOUBLE_EQ(normalized_similarity("kitten", "sitting"), 1.0 - 3.0 / 7.0);
  EXPECT_DOUBLE_EQ(normalized_similarity("abc", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(normalized_similarity("abc", "xyz"), 0.0);
}

TEST(Agreement, ScoresDifferences) {
  const auto req = request(ReasonerTask::Evaluate, "");
  const auto a = parse_reply(req, "Taxable income: $192,350");
  const auto b = parse_reply(req, "Taxable income: $190,350");
  const auto same = score_agreement(a, a);
  EXPECT_TRUE(same.exact_match);
  EXPECT_TRUE(same.field_diffs.empty());
  const auto diff = score_agreement(a, b);
  EXPECT_FALSE(diff.exact_match);
  ASSERT_EQ(diff.field_diffs.size(), 1u);
  EXPECT_EQ(diff.field_diffs[0], (FieldDiff{"taxable_income", "192350", "190350"}));

  const auto creq = request(ReasonerTask::ListCoverage, "");
  const auto c1 = parse_reply(creq, "§63(b) §63(c)(1)");
  const auto c2 = parse_reply(creq, "§63(b) §63(c)(4)");
  const auto cs = score_agreement(c1, c2);
  EXPECT_EQ(cs.field_diffs.size(), 2u);
  EXPECT_THROW(score_agreement(a, c1), Error);
}
