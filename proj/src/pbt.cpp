#include "statute/pbt.hpp"

#include "statute/error.hpp"
#include "statute/synth.hpp"

namespace statute {

namespace {

constexpr std::int64_t kCpiMin = 1000;
constexpr std::int64_t kCpiMax = 2000;

TaxpayerFacts single_filer(int year) {
  TaxpayerFacts f;
  f.taxable_year = year;
  f.filing_status = FilingStatus::Single;
  f.taxpayer_birth = parse_date("1980-01-01");
  return f;
}

DollarAmount floor_amount(const Statute& statute, const CpiTable& cpi, RoundingMode rounding) {
  return adjusted_basic_amount(statute, 2018, ProvisionId::parse("§63(c)(2)(C)"), cpi,
                               rounding);
}

void append_case(std::string& out, std::string_view prefix, const MonotonicityCase& c,
                 const CaseVerdict& v) {
  const std::string p(prefix);
  out += p + ".x=" + std::to_string(c.x) + "\n";
  out += p + ".ix=" + c.ix.to_string() + "\n";
  out += p + ".y=" + std::to_string(c.y) + "\n";
  out += p + ".iy=" + c.iy.to_string() + "\n";
  out += p + ".dx=" + std::to_string(v.dx.dollars) + "\n";
  out += p + ".dy=" + std::to_string(v.dy.dollars) + "\n";
}

}  // namespace

std::string to_string(const MonotonicityCase& c) {
  return "D(" + std::to_string(c.x) + ", " + c.ix.to_string() + ") vs D(" +
         std::to_string(c.y) + ", " + c.iy.to_string() + ")";
}

DollarAmount single_basic_deduction(const Statute& statute, const CpiTable& cpi,
                                    int year, CpiValue preceding, RoundingMode rounding) {
  // 2017 is the base year; overwriting it would move the base as well.
  const CpiTable table = year - 1 == 2017 ? cpi : cpi.with(year - 1, preceding);
  return basic_standard_deduction(statute, single_filer(year), table,
                                  EvalOptions{rounding, AgeConvention::Anniversary});
}

CaseVerdict check_case(const Statute& statute, const CpiTable& cpi,
                       const MonotonicityCase& c, RoundingMode rounding) {
  CaseVerdict v;
  v.dx = single_basic_deduction(statute, cpi, c.x, c.ix, rounding);
  v.dy = single_basic_deduction(statute, cpi, c.y, c.iy, rounding);
  v.violated = v.dy < v.dx;
  return v;
}

MonotonicityCase generate_case(Rng& rng) {
  MonotonicityCase c;
  do {
    c.x = static_cast<int>(rng.uniform(2018, 2025));
    c.y = static_cast<int>(rng.uniform(2018, 2025));
  } while (c.x >= c.y);
  c.ix = CpiValue(rng.uniform(kCpiMin, kCpiMax));
  c.iy = CpiValue(rng.uniform(kCpiMin, kCpiMax));
  return c;
}

CaseProperty make_case_property(std::string_view name, const Statute& statute,
                                const CpiTable& cpi, RoundingMode rounding) {
  if (name == "monotonicity") {
    return [&statute, &cpi, rounding](const MonotonicityCase& c) {
      return check_case(statute, cpi, c, rounding);
    };
  }
  if (name == "floor") {
    const DollarAmount floor = floor_amount(statute, cpi, rounding);
    return [&statute, &cpi, rounding, floor](const MonotonicityCase& c) {
      CaseVerdict v = check_case(statute, cpi, c, rounding);
      v.violated = v.dx < floor || v.dy < floor;
      return v;
    };
  }
  throw Error(ErrorCode::UnknownProperty, "unknown case property '" + std::string(name) + "'");
}

FalsifyOutcome falsify(const CaseProperty& property, std::string_view name,
                       std::size_t iterations, std::uint64_t seed, RoundingMode rounding) {
  if (iterations == 0) {
    throw Error(ErrorCode::InvalidArgument, "iterations must be at least 1");
  }
  FalsifyOutcome outcome;
  outcome.seed = seed;
  Rng rng(seed);
  while (outcome.iterations_run < iterations) {
    const MonotonicityCase c = generate_case(rng);
    ++outcome.iterations_run;
    const CaseVerdict v = property(c);
    if (!v.violated) continue;

    FalsificationReport r;
    r.property = std::string(name);
    r.seed = seed;
    r.iterations_run = outcome.iterations_run;
    r.rounding = rounding;
    r.first_violation = c;
    r.first_verdict = v;

    MonotonicityCase cur = c;
    CaseVerdict cur_v = v;
    auto accept = [&](const MonotonicityCase& cand) {
      const CaseVerdict cv = property(cand);
      if (!cv.violated) return false;
      cur = cand;
      cur_v = cv;
      return true;
    };
    for (bool changed = true; changed;) {
      changed = false;
      while (cur.y - cur.x > 1) {
        MonotonicityCase later = cur, earlier = cur;
        ++later.x;
        --earlier.y;
        if (!accept(later) && !accept(earlier)) break;
        changed = true;
      }
      while (cur.ix.tenths > kCpiMin) {
        MonotonicityCase cand = cur;
        --cand.ix.tenths;
        if (!accept(cand)) break;
        changed = true;
      }
      while (cur.iy.tenths < kCpiMax) {
        MonotonicityCase cand = cur;
        ++cand.iy.tenths;
        if (!accept(cand)) break;
        changed = true;
      }
    }
    r.shrunk_violation = cur;
    r.shrunk_verdict = cur_v;
    outcome.report = r;
    break;
  }
  return outcome;
}

std::string render_report_machine(const FalsifyOutcome& outcome, std::string_view property,
                                  RoundingMode rounding) {
  std::string out;
  out += "property=" + std::string(property) + "\n";
  out += "seed=" + std::to_string(outcome.seed) + "\n";
  out += "rounding=" + std::string(to_string(rounding)) + "\n";
  out += "iterations_run=" + std::to_string(outcome.iterations_run) + "\n";
  if (!outcome.report) {
    out += "result=exhausted\n";
    return out;
  }
  out += "result=falsified\n";
  append_case(out, "first", outcome.report->first_violation, outcome.report->first_verdict);
  append_case(out, "shrunk", outcome.report->shrunk_violation, outcome.report->shrunk_verdict);
  return out;
}

std::string render_report_human(const FalsifyOutcome& outcome, std::string_view property,
                                RoundingMode rounding) {
  std::string out = "Property " + std::string(property) + " (seed " +
                    std::to_string(outcome.seed) + ", " + std::string(to_string(rounding)) +
                    "): ";
  if (!outcome.report) {
    return out + "held for all " + std::to_string(outcome.iterations_run) + " cases.\n";
  }
  const auto& r = *outcome.report;
  auto line = [](const MonotonicityCase& c, const CaseVerdict& v) {
    return to_string(c) + ": " + format_dollars(v.dx) + " then " + format_dollars(v.dy);
  };
  out += "violated after " + std::to_string(r.iterations_run) + " cases.\n";
  out += "  first:  " + line(r.first_violation, r.first_verdict) + "\n";
  out += "  shrunk: " + line(r.shrunk_violation, r.shrunk_verdict) + "\n";
  return out;
}

bool is_fixed_property(std::string_view name) {
  return name == "cpi-monotone-within-year" || name == "floor-bound" ||
         name == "decomposition";
}

PropertyResult check_fixed_property(const Statute& statute, const CpiTable& cpi,
                                    std::string_view name, std::size_t samples,
                                    std::uint64_t seed, RoundingMode rounding) {
  if (!is_fixed_property(name)) {
    throw Error(ErrorCode::UnknownProperty, "unknown property '" + std::string(name) + "'");
  }
  PropertyResult result;
  result.name = std::string(name);
  Rng rng(seed);
  const EvalOptions options{rounding, AgeConvention::Anniversary};
  const DollarAmount floor = floor_amount(statute, cpi, rounding);
  for (; result.samples < samples && result.passed; ++result.samples) {
    if (name == "cpi-monotone-within-year") {
      const int year = static_cast<int>(rng.uniform(2019, 2025));
      std::int64_t a = rng.uniform(kCpiMin, kCpiMax);
      std::int64_t b = rng.uniform(kCpiMin, kCpiMax);
      if (a > b) std::swap(a, b);
      const auto lo = single_basic_deduction(statute, cpi, year, CpiValue(a), rounding);
      const auto hi = single_basic_deduction(statute, cpi, year, CpiValue(b), rounding);
      if (hi < lo) {
        result.passed = false;
        result.witness = "year=" + std::to_string(year) + " lo=" + CpiValue(a).to_string() +
                         " hi=" + CpiValue(b).to_string() + " d_lo=" +
                         std::to_string(lo.dollars) + " d_hi=" + std::to_string(hi.dollars);
      }
    } else if (name == "floor-bound") {
      const int year = static_cast<int>(rng.uniform(2018, 2025));
      const CpiValue preceding(rng.uniform(kCpiMin, kCpiMax));
      const auto d = single_basic_deduction(statute, cpi, year, preceding, rounding);
      if (d < floor) {
        result.passed = false;
        result.witness = "year=" + std::to_string(year) + " preceding=" +
                         preceding.to_string() + " d=" + std::to_string(d.dollars);
      }
    } else {
      const TaxpayerFacts facts = generate_facts(rng);
      const EvalResult r = taxable_income(statute, facts, cpi, options);
      if (r.standard_deduction != r.basic + r.additional ||
          r.taxable_income != facts.agi - r.standard_deduction) {
        result.passed = false;
        result.witness = render_facts(facts);
      }
    }
  }
  return result;
}

}  // namespace statute
