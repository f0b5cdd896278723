#include "statute/reasoner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "statute/error.hpp"
#include "statute/parser.hpp"
#include "statute/transform.hpp"

namespace statute {

using nlohmann::json;

namespace {

constexpr std::string_view kFence = "```";

std::string fenced(const std::string& body) { return "```\n" + body + "```\n"; }

std::optional<std::string> last_fenced_block(const std::string& raw) {
  const auto close = raw.rfind(kFence);
  if (close == std::string::npos || close == 0) return std::nullopt;
  const auto open = raw.rfind(kFence, close - 1);
  if (open == std::string::npos) return std::nullopt;
  std::string block = raw.substr(open + kFence.size(), close - open - kFence.size());
  // Drop an info string such as ```text.
  const auto nl = block.find('\n');
  if (nl != std::string::npos &&
      block.substr(0, nl).find_first_of(" \t:§(") == std::string::npos) {
    block.erase(0, nl + 1);
  }
  return block;
}

std::optional<DollarAmount> last_dollar_amount(const std::string& raw) {
  static const std::regex kDollar(R"((-)?\$(-)?(\d{1,3}(?:,\d{3})+|\d+))");
  std::optional<DollarAmount> last;
  for (auto it = std::sregex_iterator(raw.begin(), raw.end(), kDollar);
       it != std::sregex_iterator(); ++it) {
    std::string digits = (*it)[3].str();
    digits.erase(std::remove(digits.begin(), digits.end(), ','), digits.end());
    std::int64_t v = std::stoll(digits);
    if ((*it)[1].matched || (*it)[2].matched) v = -v;
    last = DollarAmount(v);
  }
  return last;
}

std::vector<ProvisionId> citations(const std::string& raw) {
  static const std::regex kCite(R"(§\s?(\d+[A-Za-z]?(?:\([A-Za-z0-9]+\))*))");
  std::vector<ProvisionId> out;
  for (auto it = std::sregex_iterator(raw.begin(), raw.end(), kCite);
       it != std::sregex_iterator(); ++it) {
    try {
      ProvisionId id = ProvisionId::parse((*it)[1].str());
      if (std::find(out.begin(), out.end(), id) == out.end()) out.push_back(std::move(id));
    } catch (const Error&) {
    }
  }
  return out;
}

std::string reply_text(const std::string& body) {
  const json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return body;
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const auto& c = doc["choices"][0];
    if (c.contains("message") && c["message"].contains("content") &&
        c["message"]["content"].is_string()) {
      return c["message"]["content"].get<std::string>();
    }
  }
  if (doc.contains("content") && doc["content"].is_array()) {
    std::string text;
    for (const auto& part : doc["content"]) {
      if (part.contains("text") && part["text"].is_string()) text += part["text"].get<std::string>();
    }
    return text;
  }
  for (const char* key : {"reply", "text", "output"}) {
    if (doc.contains(key) && doc[key].is_string()) return doc[key].get<std::string>();
  }
  return body;
}

std::string first_difference(const std::string& a, const std::string& b) {
  std::istringstream x(a), y(b);
  std::string la, lb;
  int line = 0;
  while (true) {
    ++line;
    const bool ga = static_cast<bool>(std::getline(x, la));
    const bool gb = static_cast<bool>(std::getline(y, lb));
    if (!ga && !gb) return {};
    if (!ga) la = "<end>";
    if (!gb) lb = "<end>";
    if (la != lb) return std::to_string(line) + "\x1f" + la + "\x1f" + lb;
  }
}

}  // namespace

std::string_view to_string(ReasonerTask task) {
  switch (task) {
    case ReasonerTask::Evaluate: return "Evaluate";
    case ReasonerTask::ListCoverage: return "ListCoverage";
    case ReasonerTask::ProposeExample: return "ProposeExample";
    case ReasonerTask::InlineOneStep: return "InlineOneStep";
  }
  return "Unknown";
}

ReasonerTask parse_reasoner_task(std::string_view text) {
  for (auto t : {ReasonerTask::Evaluate, ReasonerTask::ListCoverage,
                 ReasonerTask::ProposeExample, ReasonerTask::InlineOneStep}) {
    if (text == to_string(t)) return t;
  }
  throw Error(ErrorCode::BadValue, "unknown reasoner task '" + std::string(text) + "'");
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &size, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < size; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string_view template_name(ReasonerTask task) {
  switch (task) {
    case ReasonerTask::Evaluate: return "evaluate";
    case ReasonerTask::ListCoverage: return "list_coverage";
    case ReasonerTask::ProposeExample: return "propose_example";
    case ReasonerTask::InlineOneStep: return "inline_one_step";
  }
  return "";
}

TemplateStore TemplateStore::load(const std::filesystem::path& dir) {
  TemplateStore store;
  for (auto task : {ReasonerTask::Evaluate, ReasonerTask::ListCoverage,
                    ReasonerTask::ProposeExample, ReasonerTask::InlineOneStep}) {
    const std::string name(template_name(task));
    const auto path = dir / (name + ".txt");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw Error(ErrorCode::TemplateMissing, "cannot read template " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    store.add(name, text.str());
  }
  return store;
}

void TemplateStore::add(std::string name, std::string text) {
  PromptTemplate t{name, std::move(text), {}};
  t.hash = sha256_hex(t.text);
  templates_[std::move(name)] = std::move(t);
}

const PromptTemplate& TemplateStore::get(std::string_view name) const {
  auto it = templates_.find(name);
  if (it == templates_.end()) {
    throw Error(ErrorCode::TemplateMissing, "no template named '" + std::string(name) + "'");
  }
  return it->second;
}

std::string render_template(std::string_view text,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const auto open = text.find("{{", pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(text.substr(pos, open - pos));
    const std::string key(text.substr(open + 2, close - open - 2));
    auto it = values.find(key);
    if (it == values.end()) {
      throw Error(ErrorCode::TemplateMissing, "no value for placeholder {{" + key + "}}");
    }
    out += it->second;
    pos = close + 2;
  }
  out.append(text.substr(pos));
  return out;
}

std::string ReasonerRequest::hash() const {
  std::string material(to_string(task));
  material += '\0';
  material += template_hash;
  material += '\0';
  material += prompt;
  return sha256_hex(material);
}

ReasonerRequest make_request(const TemplateStore& templates, ReasonerTask task,
                             std::string statute_text, std::string input) {
  const PromptTemplate& t = templates.get(template_name(task));
  const char* key = "facts";
  if (task == ReasonerTask::ProposeExample) key = "predicate";
  if (task == ReasonerTask::InlineOneStep) key = "instruction";
  ReasonerRequest r;
  r.task = task;
  r.prompt = render_template(t.text, {{"statute", statute_text}, {key, input}});
  r.template_hash = t.hash;
  r.statute_text = std::move(statute_text);
  r.input = std::move(input);
  return r;
}

ReasonerResponse parse_reply(const ReasonerRequest& request, std::string raw) {
  ReasonerResponse r;
  r.task = request.task;
  r.request_hash = request.hash();
  r.template_hash = request.template_hash;
  r.raw = std::move(raw);
  auto fail = [&](std::string why) {
    r.payload = std::monostate{};
    r.parse_ok = false;
    r.parse_error = std::move(why);
    return r;
  };
  switch (request.task) {
    case ReasonerTask::Evaluate: {
      auto amount = last_dollar_amount(r.raw);
      if (!amount) return fail("no dollar amount in reply");
      r.payload = *amount;
      break;
    }
    case ReasonerTask::ListCoverage: {
      auto ids = citations(r.raw);
      if (ids.empty()) return fail("no provision citations in reply");
      r.payload = std::move(ids);
      break;
    }
    case ReasonerTask::ProposeExample: {
      auto block = last_fenced_block(r.raw);
      if (!block) return fail("no fenced block in reply");
      try {
        r.payload = load_facts(*block);
      } catch (const Error& e) {
        return fail(e.what());
      }
      break;
    }
    case ReasonerTask::InlineOneStep: {
      auto block = last_fenced_block(r.raw);
      if (!block) return fail("no fenced block in reply");
      try {
        r.payload = render_statute(parse_statute(*block));
      } catch (const Error& e) {
        return fail(e.what());
      }
      break;
    }
  }
  r.parse_ok = true;
  return r;
}

ReasonerResponse OracleReasoner::run(const ReasonerRequest& request) {
  const Statute statute = parse_statute(request.statute_text);
  std::string raw;
  switch (request.task) {
    case ReasonerTask::Evaluate: {
      const auto result = taxable_income(statute, load_facts(request.input), cpi_, options_);
      raw = "Taxable income: " + format_dollars(result.taxable_income) + "\n";
      break;
    }
    case ReasonerTask::ListCoverage: {
      const auto result = taxable_income(statute, load_facts(request.input), cpi_, options_);
      raw = "Applied provisions:\n";
      for (const auto& id : statute.provision_ids()) {
        if (result.coverage.applied(id)) raw += id.render() + "\n";
      }
      break;
    }
    case ReasonerTask::ProposeExample: {
      const auto found = synthesize_example(statute, cpi_, CoveragePredicate::parse(request.input),
                                            GeneratorConfig{}, budget_, seed_, options_);
      raw = found.facts ? fenced(render_facts(*found.facts))
                        : "No scenario found after " + std::to_string(found.cases_tried) +
                              " cases.\n";
      break;
    }
    case ReasonerTask::InlineOneStep: {
      const auto step = InlineStep::parse(request.input);
      raw = fenced(render_statute(apply_inline_step(statute, step)));
      break;
    }
  }
  return parse_reply(request, std::move(raw));
}

ReasonerResponse ExternalReasoner::run(const ReasonerRequest& request) {
  std::lock_guard lock(mutex_);
  const json body = {{"model", model_},
                     {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})}};
  const std::string reply_body = transport_->post(body.dump());
  {
    std::ofstream log(log_, std::ios::app | std::ios::binary);
    if (!log) {
      throw Error(ErrorCode::TransportFailure, "cannot append to audit log " + log_.string());
    }
    const json entry = {{"request_hash", request.hash()},
                        {"template_hash", request.template_hash},
                        {"task", std::string(to_string(request.task))},
                        {"prompt", request.prompt},
                        {"response", reply_body}};
    log << entry.dump() << "\n";
    log.flush();
  }
  return parse_reply(request, reply_text(reply_body));
}

TranscriptReasoner TranscriptReasoner::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BadValue, "cannot read transcript " + path.string());
  std::map<std::string, std::string> replies;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json entry = json::parse(line, nullptr, false);
    if (entry.is_discarded() || !entry.contains("request_hash") || !entry.contains("reply")) {
      throw Error(ErrorCode::BadValue, path.string() + ":" + std::to_string(number) +
                                           ": expected {\"request_hash\", \"reply\"}");
    }
    replies[entry["request_hash"].get<std::string>()] = entry["reply"].get<std::string>();
  }
  return TranscriptReasoner(std::move(replies));
}

ReasonerResponse TranscriptReasoner::run(const ReasonerRequest& request) {
  const std::string hash = request.hash();
  auto it = replies_.find(hash);
  if (it == replies_.end()) {
    throw Error(ErrorCode::TranscriptMiss, "no recorded reply for request " + hash);
  }
  return parse_reply(request, it->second);
}

std::string transcript_line(const ReasonerRequest& request, std::string_view reply) {
  const json entry = {{"request_hash", request.hash()},
                      {"task", std::string(to_string(request.task))},
                      {"template_hash", request.template_hash},
                      {"reply", std::string(reply)}};
  return entry.dump();
}

double normalized_similarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return 1.0 - static_cast<double>(prev[b.size()]) /
                   static_cast<double>(std::max(a.size(), b.size()));
}

AgreementScore score_agreement(const ReasonerResponse& oracle, const ReasonerResponse& other) {
  if (oracle.task != other.task) {
    throw Error(ErrorCode::TaskMismatch, std::string("cannot compare ") +
                                             std::string(to_string(oracle.task)) + " with " +
                                             std::string(to_string(other.task)));
  }
  AgreementScore s;
  s.task = oracle.task;
  if (!oracle.parse_ok || !other.parse_ok) {
    s.field_diffs.push_back({"parse_ok", oracle.parse_ok ? "true" : "false",
                             other.parse_ok ? "true" : "false"});
    if (oracle.task == ReasonerTask::InlineOneStep) {
      s.text_similarity = normalized_similarity(oracle.raw, other.raw);
    }
    return s;
  }
  switch (oracle.task) {
    case ReasonerTask::Evaluate: {
      const auto a = std::get<DollarAmount>(oracle.payload);
      const auto b = std::get<DollarAmount>(other.payload);
      if (a != b) {
        s.field_diffs.push_back({"taxable_income", std::to_string(a.dollars),
                                 std::to_string(b.dollars)});
      }
      break;
    }
    case ReasonerTask::ListCoverage: {
      const auto& a = std::get<std::vector<ProvisionId>>(oracle.payload);
      const auto& b = std::get<std::vector<ProvisionId>>(other.payload);
      const std::set<ProvisionId> sa(a.begin(), a.end()), sb(b.begin(), b.end());
      for (const auto& id : sa) {
        if (!sb.count(id)) s.field_diffs.push_back({id.render(), "listed", "missing"});
      }
      for (const auto& id : sb) {
        if (!sa.count(id)) s.field_diffs.push_back({id.render(), "missing", "listed"});
      }
      break;
    }
    case ReasonerTask::ProposeExample: {
      std::istringstream x(render_facts(std::get<TaxpayerFacts>(oracle.payload)));
      std::istringstream y(render_facts(std::get<TaxpayerFacts>(other.payload)));
      std::string la, lb;
      while (std::getline(x, la) && std::getline(y, lb)) {
        if (la == lb) continue;
        const auto colon = la.find(':');
        s.field_diffs.push_back({la.substr(0, colon), la.substr(colon + 2),
                                 lb.substr(lb.find(':') + 2)});
      }
      break;
    }
    case ReasonerTask::InlineOneStep: {
      const auto& a = std::get<std::string>(oracle.payload);
      const auto& b = std::get<std::string>(other.payload);
      s.text_similarity = normalized_similarity(a, b);
      if (const auto diff = first_difference(a, b); !diff.empty()) {
        const auto p = diff.find('\x1f');
        const auto q = diff.find('\x1f', p + 1);
        s.field_diffs.push_back({"line " + diff.substr(0, p), diff.substr(p + 1, q - p - 1),
                                 diff.substr(q + 1)});
      }
      break;
    }
  }
  s.exact_match = s.field_diffs.empty();
  if (s.task != ReasonerTask::InlineOneStep) s.text_similarity = s.exact_match ? 1.0 : 0.0;
  return s;
}

}  // namespace statute
