#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "statute/engine.hpp"
#include "statute/synth.hpp"

namespace statute {

enum class ReasonerTask {
  Evaluate,
  ListCoverage,
  ProposeExample,
  InlineOneStep,
};

std::string_view to_string(ReasonerTask task);
ReasonerTask parse_reasoner_task(std::string_view text);

// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

struct PromptTemplate {
  std::string name;
  std::string text;
  std::string hash;
};

// Plain-text templates with {{placeholder}} fields, one file per task:
// evaluate.txt, list_coverage.txt, propose_example.txt, inline_one_step.txt.
class TemplateStore {
 public:
  // Throws Error(TemplateMissing).
  static TemplateStore load(const std::filesystem::path& dir);
  void add(std::string name, std::string text);
  const PromptTemplate& get(std::string_view name) const;

 private:
  std::map<std::string, PromptTemplate, std::less<>> templates_;
};

std::string_view template_name(ReasonerTask task);

// Replaces each {{key}}. Throws Error(TemplateMissing) for a placeholder
// with no value.
std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values);

struct ReasonerRequest {
  ReasonerTask task = ReasonerTask::Evaluate;
  std::string statute_text;
  // Facts file text, coverage predicate, or serialized inline step.
  std::string input;
  std::string prompt;
  std::string template_hash;

  std::string hash() const;
};

ReasonerRequest make_request(const TemplateStore& templates, ReasonerTask task,
                             std::string statute_text, std::string input);

// Evaluate: taxable income. ListCoverage: applied provisions. ProposeExample:
// a scenario. InlineOneStep: the rewritten statute text.
using ReasonerPayload =
    std::variant<std::monostate, DollarAmount, std::vector<ProvisionId>, TaxpayerFacts,
                 std::string>;

struct ReasonerResponse {
  ReasonerTask task = ReasonerTask::Evaluate;
  std::string raw;
  ReasonerPayload payload;
  bool parse_ok = false;
  std::string parse_error;
  std::string request_hash;
  std::string template_hash;
};

// Lenient extraction: last dollar amount, every § citation, or the last
// fenced block. Parse failures keep `raw` and set parse_ok = false.
ReasonerResponse parse_reply(const ReasonerRequest& request, std::string raw);

class Reasoner {
 public:
  virtual ~Reasoner() = default;
  virtual ReasonerResponse run(const ReasonerRequest& request) = 0;
};

class OracleReasoner : public Reasoner {
 public:
  OracleReasoner(CpiTable cpi, EvalOptions options = {}, std::size_t synth_budget = 10000,
                 std::uint64_t synth_seed = 0)
      : cpi_(std::move(cpi)), options_(options), budget_(synth_budget), seed_(synth_seed) {}
  ReasonerResponse run(const ReasonerRequest& request) override;

 private:
  CpiTable cpi_;
  EvalOptions options_;
  std::size_t budget_;
  std::uint64_t seed_;
};

// Chat-style transport. Throws Error(TransportFailure).
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string post(const std::string& body) = 0;
};

struct EndpointConfig {
  // "http://host:port/path".
  std::string url;
  // Name of the environment variable holding the bearer token.
  std::string token_env = "STATCHECK_API_TOKEN";
  std::string model = "default";
  int timeout_seconds = 120;
};

std::unique_ptr<Transport> make_http_transport(const EndpointConfig& config);

// Sends the prompt through `transport`, one request at a time, appending
// every exchange to `audit_log` (JSON lines) before the reply is parsed.
class ExternalReasoner : public Reasoner {
 public:
  ExternalReasoner(std::unique_ptr<Transport> transport, std::string model,
                   std::filesystem::path audit_log)
      : transport_(std::move(transport)), model_(std::move(model)), log_(std::move(audit_log)) {}
  ReasonerResponse run(const ReasonerRequest& request) override;

 private:
  std::unique_ptr<Transport> transport_;
  std::string model_;
  std::filesystem::path log_;
  std::mutex mutex_;
};

// Replays replies recorded as JSON lines {"request_hash", "reply"}.
class TranscriptReasoner : public Reasoner {
 public:
  static TranscriptReasoner load(const std::filesystem::path& path);
  explicit TranscriptReasoner(std::map<std::string, std::string> replies)
      : replies_(std::move(replies)) {}
  // Throws Error(TranscriptMiss).
  ReasonerResponse run(const ReasonerRequest& request) override;

 private:
  std::map<std::string, std::string> replies_;
};

// One JSON line recording `reply` for `request`, in the transcript format.
std::string transcript_line(const ReasonerRequest& request, std::string_view reply);

struct FieldDiff {
  std::string field;
  std::string oracle;
  std::string other;

  friend bool operator==(const FieldDiff&, const FieldDiff&) = default;
};

struct AgreementScore {
  ReasonerTask task = ReasonerTask::Evaluate;
  bool exact_match = false;
  std::vector<FieldDiff> field_diffs;
  double text_similarity = 0.0;
};

// 1 - levenshtein(a, b) / max(|a|, |b|); 1.0 for two empty strings.
double normalized_similarity(std::string_view a, std::string_view b);

// Throws Error(TaskMismatch).
AgreementScore score_agreement(const ReasonerResponse& oracle, const ReasonerResponse& other);

}  // namespace statute
