#include "statute/cli.hpp"

#include <fstream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "statute/error.hpp"
#include "statute/parser.hpp"
#include "statute/pbt.hpp"
#include "statute/reasoner.hpp"
#include "statute/synth.hpp"
#include "statute/transform.hpp"

namespace statute {

namespace {

struct RunConfig {
  std::string statute_path = "data/irc_excerpt.txt";
  std::string cpi_path = "data/ccpiu_appendix_b.tsv";
  std::string facts_path;
  std::string rounding = "floor50";
  std::string age_convention = "anniversary";
  std::optional<std::uint64_t> seed;
  std::size_t iterations = 10000;
  std::size_t budget = 10000;
  std::string reasoner = "oracle";
  std::string transcript;
  std::string endpoint;
  std::string model = "default";
  std::string token_env = "STATCHECK_API_TOKEN";
  std::string audit_log = "statcheck-audit.jsonl";
  std::string templates = "templates";
  std::string format = "human";
  bool expect_hold = false;
  bool expect_falsify = false;
  std::optional<std::size_t> step;
  std::optional<int> year;
  std::string predicate;
  std::string property;
  std::string mutations_path;
  std::vector<std::string> mutations;

  bool machine() const { return format == "machine"; }
  EvalOptions options() const {
    return {parse_rounding_mode(rounding), parse_age_convention(age_convention)};
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::uint64_t require_seed(const RunConfig& c, const char* command) {
  if (!c.seed) {
    throw Error(ErrorCode::InvalidArgument, std::string(command) + " needs --seed");
  }
  return *c.seed;
}

void add_statute(CLI::App* sub, RunConfig& c) {
  sub->add_option("--statute", c.statute_path, "Statute text");
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"human", "machine"}));
}

void add_evaluation(CLI::App* sub, RunConfig& c) {
  add_statute(sub, c);
  sub->add_option("--cpi", c.cpi_path, "C-CPI-U table (YYYY<TAB>value)");
  sub->add_option("--rounding", c.rounding, "floor50 or nearest50")
      ->check(CLI::IsMember({"floor50", "nearest50"}));
  sub->add_option("--age-convention", c.age_convention, "anniversary or day-before")
      ->check(CLI::IsMember({"anniversary", "day-before"}));
}

void add_reasoner(CLI::App* sub, RunConfig& c) {
  sub->add_option("--reasoner", c.reasoner, "oracle, external or mock")
      ->check(CLI::IsMember({"oracle", "external", "mock"}));
  sub->add_option("--transcript", c.transcript, "Recorded replies for --reasoner mock");
  sub->add_option("--endpoint", c.endpoint, "http://host:port/path for --reasoner external")
      ->envname("STATCHECK_ENDPOINT");
  sub->add_option("--model", c.model, "Model identifier sent to the endpoint")
      ->envname("STATCHECK_MODEL");
  sub->add_option("--token-env", c.token_env, "Environment variable holding the API token");
  sub->add_option("--audit-log", c.audit_log, "Where external exchanges are appended");
  sub->add_option("--templates", c.templates, "Prompt template directory");
}

std::unique_ptr<Reasoner> make_backend(const RunConfig& c, const CpiTable& cpi) {
  if (c.reasoner == "mock") {
    if (c.transcript.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--reasoner mock needs --transcript");
    }
    return std::make_unique<TranscriptReasoner>(TranscriptReasoner::load(c.transcript));
  }
  if (c.reasoner == "external") {
    if (c.endpoint.empty()) {
      throw Error(ErrorCode::InvalidArgument, "--reasoner external needs --endpoint");
    }
    EndpointConfig ep;
    ep.url = c.endpoint;
    ep.model = c.model;
    ep.token_env = c.token_env;
    return std::make_unique<ExternalReasoner>(make_http_transport(ep), c.model, c.audit_log);
  }
  return std::make_unique<OracleReasoner>(cpi, c.options());
}

// Runs `task` on the selected backend alongside the oracle and reports the
// backend's answer and its agreement with the oracle.
void run_bridge(const RunConfig& c, const CpiTable& cpi, ReasonerTask task,
                const std::string& statute_text, const std::string& input, std::ostream& out) {
  const TemplateStore templates = TemplateStore::load(c.templates);
  const ReasonerRequest request = make_request(templates, task, statute_text, input);
  const ReasonerResponse reply = make_backend(c, cpi)->run(request);
  const ReasonerResponse oracle = OracleReasoner(cpi, c.options()).run(request);
  const AgreementScore score = score_agreement(oracle, reply);
  std::ostringstream sim;
  sim.precision(4);
  sim << std::fixed << score.text_similarity;
  if (c.machine()) {
    out << "reasoner=" << c.reasoner << "\n";
    out << "request_hash=" << request.hash() << "\n";
    out << "template_hash=" << request.template_hash << "\n";
    out << "parse_ok=" << (reply.parse_ok ? "true" : "false") << "\n";
    out << "agreement.exact_match=" << (score.exact_match ? "true" : "false") << "\n";
    out << "agreement.text_similarity=" << sim.str() << "\n";
    for (const auto& d : score.field_diffs) {
      out << "agreement.diff=" << d.field << " " << d.oracle << " " << d.other << "\n";
    }
  } else {
    out << "Reasoner (" << c.reasoner << ") reply:\n" << reply.raw;
    if (!reply.raw.empty() && reply.raw.back() != '\n') out << "\n";
    if (!reply.parse_ok) out << "Reply could not be parsed: " << reply.parse_error << "\n";
    out << "Agreement with the engine: " << (score.exact_match ? "exact" : "differs")
        << " (similarity " << sim.str() << ")\n";
    for (const auto& d : score.field_diffs) {
      out << "  " << d.field << ": engine " << d.oracle << ", reasoner " << d.other << "\n";
    }
  }
}

int cmd_parse(const RunConfig& c, std::ostream& out) {
  const Statute statute = parse_statute(read_file(c.statute_path));
  if (!c.machine()) {
    out << render_statute(statute);
    return 0;
  }
  const auto ids = statute.provision_ids();
  out << "provisions=" << ids.size() << "\n";
  for (const auto& id : ids) {
    for (const auto* seg : statute.find(id)->segments()) {
      for (const auto& lit : seg->literals) {
        out << "literal=" << id.render() << " " << to_string(lit.kind) << " ";
        if (lit.kind == LiteralKind::CrossRef) {
          out << lit.text;
        } else {
          out << lit.value;
        }
        out << "\n";
      }
    }
  }
  for (const auto& ref : resolve_cross_refs(statute)) {
    out << "ref=" << ref.source.render() << " \"" << ref.raw << "\" "
        << (ref.target ? ref.target->render() : std::string("-")) << " "
        << (ref.resolved ? "resolved" : "unresolved: " + ref.reason) << "\n";
  }
  return 0;
}

int cmd_eval(const RunConfig& c, std::ostream& out, bool coverage_only) {
  if (c.facts_path.empty()) throw Error(ErrorCode::InvalidArgument, "--facts is required");
  const std::string statute_text = read_file(c.statute_path);
  const Statute statute = parse_statute(statute_text);
  const std::string facts_text = read_file(c.facts_path);
  const TaxpayerFacts facts = load_facts(facts_text);
  const CpiTable cpi = load_cpi_table(read_file(c.cpi_path));
  if (c.reasoner != "oracle") {
    run_bridge(c, cpi, coverage_only ? ReasonerTask::ListCoverage : ReasonerTask::Evaluate,
               statute_text, facts_text, out);
    return 0;
  }
  const EvalResult r = taxable_income(statute, facts, cpi, c.options());
  if (coverage_only) {
    for (const auto& id : statute.provision_ids()) {
      const auto status = to_string(r.coverage.status(id));
      if (c.machine()) {
        out << "coverage." << id.render() << "=" << status << "\n";
      } else {
        out << id.render() << std::string(id.render().size() < 24 ? 24 - id.render().size() : 1, ' ')
            << status << "\n";
      }
    }
    if (c.machine()) {
      out << "applied_order=";
      for (std::size_t i = 0; i < r.coverage.applied_order.size(); ++i) {
        out << (i ? "," : "") << r.coverage.applied_order[i].render();
      }
      out << "\n";
    }
    return 0;
  }
  if (c.machine()) {
    out << "taxable_income=" << r.taxable_income.dollars << "\n";
    out << "standard_deduction=" << r.standard_deduction.dollars << "\n";
    out << "basic=" << r.basic.dollars << "\n";
    out << "additional=" << r.additional.dollars << "\n";
    out << "rounding=" << c.rounding << "\n";
    if (r.cola) out << "cola=" << format_percent_truncated(*r.cola) << "\n";
  } else {
    out << "Taxable income: " << format_dollars(r.taxable_income) << "\n";
    out << "Standard deduction: " << format_dollars(r.standard_deduction) << " (basic "
        << format_dollars(r.basic) << " + additional " << format_dollars(r.additional) << ")\n";
    if (r.cola) out << "Cost-of-living adjustment: " << format_percent_truncated(*r.cola) << "\n";
  }
  return 0;
}

void print_facts(const RunConfig& c, const TaxpayerFacts& facts, const std::string& prefix,
                 std::ostream& out) {
  std::istringstream lines(render_facts(facts));
  std::string line;
  while (std::getline(lines, line)) {
    if (c.machine()) {
      const auto colon = line.find(':');
      out << prefix << line.substr(0, colon) << "=" << line.substr(colon + 2) << "\n";
    } else {
      out << "  " << line << "\n";
    }
  }
}

int cmd_synth(const RunConfig& c, std::ostream& out) {
  if (c.predicate.empty()) throw Error(ErrorCode::InvalidArgument, "--predicate is required");
  const std::uint64_t seed = require_seed(c, "synth");
  const std::string statute_text = read_file(c.statute_path);
  const Statute statute = parse_statute(statute_text);
  const CpiTable cpi = load_cpi_table(read_file(c.cpi_path));
  const CoveragePredicate predicate = CoveragePredicate::parse(c.predicate);
  if (c.reasoner != "oracle") {
    run_bridge(c, cpi, ReasonerTask::ProposeExample, statute_text, c.predicate, out);
    return 0;
  }
  const auto found =
      synthesize_example(statute, cpi, predicate, GeneratorConfig{}, c.budget, seed, c.options());
  if (c.machine()) {
    out << "seed=" << seed << "\n";
    out << "predicate=" << predicate.to_string() << "\n";
    out << "cases_tried=" << found.cases_tried << "\n";
    out << "result=" << (found.facts ? "found" : "not_found") << "\n";
  } else {
    out << "Seed " << seed << ", " << found.cases_tried << " cases tried: "
        << (found.facts ? "found a scenario for " : "no scenario found for ")
        << predicate.to_string() << "\n";
  }
  if (!found.facts) return 1;
  print_facts(c, *found.facts, "facts.", out);
  return 0;
}

int cmd_mutate(const RunConfig& c, std::ostream& out) {
  std::vector<Mutation> mutations;
  if (!c.mutations_path.empty()) mutations = load_mutations(read_file(c.mutations_path));
  for (const auto& line : c.mutations) mutations.push_back(Mutation::parse(line));
  if (mutations.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give --mutations FILE or --mutation LINE");
  }
  const Statute statute = parse_statute(read_file(c.statute_path));
  const CpiTable cpi = load_cpi_table(read_file(c.cpi_path));
  std::optional<TaxpayerFacts> facts;
  std::uint64_t seed = 0;
  if (!c.facts_path.empty()) {
    facts = load_facts(read_file(c.facts_path));
  } else {
    seed = require_seed(c, "mutate without --facts");
    if (c.machine()) out << "seed=" << seed << "\n";
    else out << "Seed " << seed << "\n";
  }
  int survivors = 0;
  for (std::size_t i = 0; i < mutations.size(); ++i) {
    const Mutation& m = mutations[i];
    const Statute mutant = apply_mutation(statute, m);
    KillVerdict verdict;
    std::optional<TaxpayerFacts> killer;
    std::size_t tried = 0;
    if (facts) {
      verdict = kill_check(statute, mutant, *facts, cpi, c.options());
    } else {
      auto found = mutation_search(statute, mutant, cpi, GeneratorConfig{}, c.budget, seed,
                                   c.options());
      verdict = found.verdict;
      killer = found.facts;
      tried = found.cases_tried;
    }
    if (!verdict.killed) ++survivors;
    const std::string key = "mutant." + std::to_string(i + 1) + ".";
    if (c.machine()) {
      out << key << "mutation=" << m.serialize() << "\n";
      out << key << "verdict=" << (verdict.killed ? "killed" : "survived") << "\n";
      if (!facts) out << key << "cases_tried=" << tried << "\n";
      for (const auto& d : verdict.differences) {
        out << key << "diff=" << d.field << " " << d.original << " " << d.mutant << "\n";
      }
      if (killer) print_facts(c, *killer, key + "facts.", out);
    } else {
      out << (i + 1) << ". " << m.serialize() << ": "
          << (verdict.killed ? "killed" : "survived");
      if (!facts) out << " after " << tried << " cases";
      out << "\n";
      for (const auto& d : verdict.differences) {
        out << "   " << d.field << ": " << d.original << " -> " << d.mutant << "\n";
      }
      if (killer) print_facts(c, *killer, "", out);
    }
  }
  return survivors > 0 ? 1 : 0;
}

int cmd_inline(const RunConfig& c, std::ostream& out) {
  if (!c.year) throw Error(ErrorCode::InvalidArgument, "--year is required");
  const std::string statute_text = read_file(c.statute_path);
  const Statute statute = parse_statute(statute_text);
  const InlinePlan plan = plan_inlining(statute, *c.year);
  if (!c.step) {
    if (c.machine()) {
      out << "year=" << *c.year << "\n";
      for (std::size_t i = 0; i < plan.size(); ++i) {
        out << "step." << (i + 1) << "=" << plan[i].serialize() << "\n";
      }
    } else {
      out << render_plan(plan);
    }
    return 0;
  }
  if (*c.step > plan.size()) {
    throw Error(ErrorCode::InvalidArgument, "--step " + std::to_string(*c.step) +
                                                " exceeds the " + std::to_string(plan.size()) +
                                                "-step plan");
  }
  Statute current = statute;
  for (std::size_t i = 0; i + 1 < *c.step; ++i) current = apply_inline_step(current, plan[i]);
  if (c.reasoner != "oracle" && *c.step > 0) {
    const CpiTable cpi = load_cpi_table(read_file(c.cpi_path));
    run_bridge(c, cpi, ReasonerTask::InlineOneStep, render_statute(current),
               plan[*c.step - 1].serialize(), out);
    return 0;
  }
  if (*c.step > 0) current = apply_inline_step(current, plan[*c.step - 1]);
  out << render_statute(current);
  return 0;
}

int cmd_pbt(const RunConfig& c, std::ostream& out) {
  if (c.property.empty()) throw Error(ErrorCode::InvalidArgument, "--property is required");
  const std::uint64_t seed = require_seed(c, "pbt");
  const Statute statute = parse_statute(read_file(c.statute_path));
  const CpiTable cpi = load_cpi_table(read_file(c.cpi_path));
  const RoundingMode rounding = parse_rounding_mode(c.rounding);
  if (is_fixed_property(c.property)) {
    const auto r = check_fixed_property(statute, cpi, c.property, c.iterations, seed, rounding);
    if (c.machine()) {
      out << "property=" << r.name << "\nseed=" << seed << "\nrounding=" << c.rounding
          << "\nsamples=" << r.samples << "\nresult=" << (r.passed ? "pass" : "fail") << "\n";
      if (!r.passed) out << "witness=" << r.witness << "\n";
    } else {
      out << "Property " << r.name << " (seed " << seed << ", " << c.rounding << "): "
          << (r.passed ? "passed " : "failed after ") << r.samples << " samples\n";
      if (!r.passed) out << r.witness << "\n";
    }
    if (!r.passed && c.expect_hold) return 1;
    if (r.passed && c.expect_falsify) return 1;
    return 0;
  }
  const CaseProperty property = make_case_property(c.property, statute, cpi, rounding);
  const FalsifyOutcome outcome = falsify(property, c.property, c.iterations, seed, rounding);
  out << (c.machine() ? render_report_machine(outcome, c.property, rounding)
                      : render_report_human(outcome, c.property, rounding));
  if (!outcome.exhausted() && c.expect_hold) return 1;
  if (outcome.exhausted() && c.expect_falsify) return 1;
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Statute evaluation, coverage, mutation, inlining and property checks"};
  app.name("statcheck");
  app.require_subcommand(1);

  auto* parse = app.add_subcommand("parse", "Parse the statute and print it in canonical layout");
  add_statute(parse, c);

  auto* eval = app.add_subcommand("eval", "Compute taxable income for a fact scenario");
  auto* coverage = app.add_subcommand("coverage", "List provision coverage for a fact scenario");
  for (auto* sub : {eval, coverage}) {
    add_evaluation(sub, c);
    add_reasoner(sub, c);
    sub->add_option("--facts", c.facts_path, "Facts file")->required();
  }

  auto* synth = app.add_subcommand("synth", "Search for facts that satisfy a coverage predicate");
  add_evaluation(synth, c);
  add_reasoner(synth, c);
  synth->add_option("--predicate", c.predicate,
                    "e.g. \"§63(f)(1)(A)=Applied & §63(f)(1)(B)!=Applied\"")
      ->required();
  synth->add_option("--seed", c.seed, "Random seed");
  synth->add_option("--budget", c.budget, "Cases to try");

  auto* mutate = app.add_subcommand("mutate", "Kill-check statute mutants");
  add_evaluation(mutate, c);
  mutate->add_option("--mutations", c.mutations_path, "File with one mutation per line");
  mutate->add_option("--mutation", c.mutations, "A single mutation line");
  mutate->add_option("--facts", c.facts_path, "Check against these facts instead of searching");
  mutate->add_option("--seed", c.seed, "Random seed for the search");
  mutate->add_option("--budget", c.budget, "Cases to try per mutant");

  auto* inl = app.add_subcommand("inline", "Show the inlining plan or the statute after N steps");
  add_statute(inl, c);
  add_reasoner(inl, c);
  inl->add_option("--cpi", c.cpi_path, "C-CPI-U table");
  inl->add_option("--year", c.year, "Taxable year")->required();
  inl->add_option("--step", c.step, "Print the statute after this many steps");

  auto* pbt = app.add_subcommand("pbt", "Falsify or check a property");
  add_evaluation(pbt, c);
  pbt->add_option("--property", c.property,
                  "monotonicity, floor, cpi-monotone-within-year, floor-bound, decomposition")
      ->required();
  pbt->add_option("--iterations", c.iterations, "Cases or samples to draw");
  pbt->add_option("--seed", c.seed, "Random seed");
  auto* hold = pbt->add_flag("--expect-hold", c.expect_hold, "Exit 1 if the property fails");
  pbt->add_flag("--expect-falsify", c.expect_falsify, "Exit 1 if the property holds")
      ->excludes(hold);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*parse) return cmd_parse(c, out);
    if (*eval) return cmd_eval(c, out, false);
    if (*coverage) return cmd_eval(c, out, true);
    if (*synth) return cmd_synth(c, out);
    if (*mutate) return cmd_mutate(c, out);
    if (*inl) return cmd_inline(c, out);
    if (*pbt) return cmd_pbt(c, out);
  } catch (const Error& e) {
    err << "statcheck: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"statcheck"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace statute
