#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "statute/error.hpp"
#include "statute/parser.hpp"

namespace statute {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

bool starts_with_ci(std::string_view s, std::size_t at, std::string_view word) {
  if (at + word.size() > s.size()) return false;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (std::tolower(static_cast<unsigned char>(s[at + k])) != word[k]) return false;
  }
  return true;
}

struct UnitWord {
  std::string_view word;
  RefUnit unit;
};

// Longest spellings first so "subparagraphs" wins over "subparagraph".
constexpr std::array<UnitWord, 12> kUnitWords = {{
    {"subparagraphs", RefUnit::Subparagraph},
    {"subparagraph", RefUnit::Subparagraph},
    {"subsections", RefUnit::Subsection},
    {"subsection", RefUnit::Subsection},
    {"subclauses", RefUnit::Subclause},
    {"subclause", RefUnit::Subclause},
    {"paragraphs", RefUnit::Paragraph},
    {"paragraph", RefUnit::Paragraph},
    {"sections", RefUnit::Section},
    {"section", RefUnit::Section},
    {"clauses", RefUnit::Clause},
    {"clause", RefUnit::Clause},
}};

constexpr std::array<UnitWord, 9> kThisUnits = {{
    {"subparagraph", RefUnit::Subparagraph},
    {"subsection", RefUnit::Subsection},
    {"subclause", RefUnit::Subclause},
    {"paragraph", RefUnit::Paragraph},
    {"subtitle", RefUnit::Subtitle},
    {"section", RefUnit::Section},
    {"chapter", RefUnit::Chapter},
    {"clause", RefUnit::Clause},
    {"title", RefUnit::Title},
}};

// Parses "(x)(y)..." at `at`; returns the end position (== at if none).
std::size_t parse_groups(std::string_view s, std::size_t at,
                         std::vector<std::string>& labels) {
  std::size_t j = at;
  while (j < s.size() && s[j] == '(') {
    std::size_t k = j + 1;
    while (k < s.size() && is_alnum(s[k])) ++k;
    if (k == j + 1 || k >= s.size() || s[k] != ')') break;
    labels.emplace_back(s.substr(j + 1, k - j - 1));
    j = k + 1;
  }
  return j;
}

std::size_t parse_thereof(std::string_view s, std::size_t at, bool& thereof) {
  constexpr std::string_view kThereof = " thereof";
  if (s.substr(at, kThereof.size()) == kThereof &&
      (at + kThereof.size() == s.size() || !is_alnum(s[at + kThereof.size()]))) {
    thereof = true;
    return at + kThereof.size();
  }
  return at;
}

Literal ref_literal(std::string_view s, std::size_t begin, std::size_t end,
                    RefSpec spec) {
  Literal lit;
  lit.kind = LiteralKind::CrossRef;
  lit.span = {begin, end};
  lit.text = std::string(s.substr(begin, end - begin));
  lit.ref = std::move(spec);
  return lit;
}

// Tries to read a reference starting at `at`; appends literals and returns
// the position after the last one, or `at` when nothing matched.
std::size_t scan_ref_at(std::string_view s, std::size_t at,
                        std::vector<Literal>& out) {
  if (starts_with_ci(s, at, "this ")) {
    const std::size_t w = at + 5;
    for (const auto& [word, unit] : kThisUnits) {
      if (starts_with_ci(s, w, word) &&
          (w + word.size() == s.size() || !is_alnum(s[w + word.size()]))) {
        RefSpec spec;
        spec.unit = unit;
        spec.this_unit = true;
        out.push_back(ref_literal(s, at, w + word.size(), spec));
        return w + word.size();
      }
    }
    return at;
  }
  for (const auto& [word, unit] : kUnitWords) {
    if (!starts_with_ci(s, at, word)) continue;
    std::size_t j = at + word.size();
    if (j >= s.size() || s[j] != ' ') return at;
    ++j;
    RefSpec spec;
    spec.unit = unit;
    if (unit == RefUnit::Section) {
      const std::size_t num = j;
      while (j < s.size() && is_digit(s[j])) ++j;
      if (j == num) return at;
      while (j < s.size() && std::isupper(static_cast<unsigned char>(s[j]))) ++j;
      if (j < s.size() && is_alnum(s[j])) return at;
      spec.section = std::string(s.substr(num, j - num));
      j = parse_groups(s, j, spec.labels);
    } else {
      const std::size_t g = j;
      j = parse_groups(s, j, spec.labels);
      if (j == g) return at;
    }
    j = parse_thereof(s, j, spec.thereof);
    out.push_back(ref_literal(s, at, j, spec));
    if (unit == RefUnit::Section) return j;

    // "paragraph (2)(B), (2)(C), or (5)" and "paragraphs (2)(B) and (2)(C)".
    constexpr std::array<std::string_view, 5> kSeparators = {
        ", or ", ", and ", " or ", " and ", ", "};
    for (;;) {
      bool matched = false;
      for (auto sep : kSeparators) {
        if (s.substr(j, sep.size()) != sep) continue;
        const std::size_t g = j + sep.size();
        if (g >= s.size() || s[g] != '(') continue;
        RefSpec more;
        more.unit = unit;
        std::size_t e = parse_groups(s, g, more.labels);
        if (e == g) continue;
        e = parse_thereof(s, e, more.thereof);
        out.push_back(ref_literal(s, g, e, more));
        j = e;
        matched = true;
        break;
      }
      if (!matched) break;
    }
    return j;
  }
  return at;
}

std::int64_t to_int(std::string_view digits) {
  std::int64_t v = 0;
  for (char c : digits) {
    if (c != ',') v = v * 10 + (c - '0');
  }
  return v;
}

// Reads "1", "12,000" style digit groups; returns end position.
std::size_t read_grouped(std::string_view s, std::size_t at) {
  std::size_t j = at;
  while (j < s.size() && is_digit(s[j])) ++j;
  if (j == at) return at;
  while (j + 3 < s.size() + 0 && s[j] == ',' && is_digit(s[j + 1]) &&
         is_digit(s[j + 2]) && is_digit(s[j + 3]) &&
         (j + 4 == s.size() || !is_digit(s[j + 4]))) {
    j += 4;
  }
  return j;
}

bool inside(const std::vector<Literal>& refs, std::size_t pos) {
  return std::any_of(refs.begin(), refs.end(), [&](const Literal& l) {
    return pos >= l.span.begin && pos < l.span.end;
  });
}

std::string_view rtrim_view(std::string_view s) {
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

}  // namespace

std::string normalize_quotes(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+201C/U+201D are E2 80 9C / E2 80 9D; U+2018/U+2019 are E2 80 98/99.
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80) {
      const auto c = static_cast<unsigned char>(text[i + 2]);
      if (c == 0x9C || c == 0x9D) {
        out.push_back('"');
        i += 2;
        continue;
      }
      if (c == 0x98 || c == 0x99) {
        out.push_back('\'');
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

std::vector<Literal> extract_literals(std::string_view raw) {
  std::vector<Literal> refs;
  for (std::size_t i = 0; i < raw.size();) {
    if ((i == 0 || !is_alnum(raw[i - 1])) &&
        std::isalpha(static_cast<unsigned char>(raw[i]))) {
      const std::size_t j = scan_ref_at(raw, i, refs);
      if (j != i) {
        i = j;
        continue;
      }
    }
    ++i;
  }

  std::vector<Literal> out = refs;
  for (std::size_t i = 0; i < raw.size();) {
    if (inside(refs, i)) {
      ++i;
      continue;
    }
    if (raw[i] == '$' && i + 1 < raw.size() && is_digit(raw[i + 1])) {
      const std::size_t end = read_grouped(raw, i + 1);
      Literal lit;
      lit.span = {i, end};
      lit.text = std::string(raw.substr(i, end - i));
      lit.value = to_int(raw.substr(i + 1, end - i - 1));
      const auto before = rtrim_view(raw.substr(0, i));
      constexpr std::string_view kMultipleOf = "multiple of";
      lit.kind = before.size() >= kMultipleOf.size() &&
                         before.substr(before.size() - kMultipleOf.size()) ==
                             kMultipleOf
                     ? LiteralKind::RoundingUnit
                     : LiteralKind::DollarAmount;
      out.push_back(std::move(lit));
      i = end;
      continue;
    }
    const bool boundary =
        i == 0 || !(is_alnum(raw[i - 1]) || raw[i - 1] == '$' ||
                    raw[i - 1] == ',' || raw[i - 1] == '.');
    if (is_digit(raw[i]) && boundary) {
      const std::size_t end = read_grouped(raw, i);
      const auto digits = raw.substr(i, end - i);
      const bool followed_by_word = end < raw.size() && is_alnum(raw[end]);
      const bool plain = digits.find(',') == std::string_view::npos;
      const std::int64_t value = to_int(digits);
      if (!followed_by_word && plain && digits.size() == 4 && value >= 1900 &&
          value <= 2099) {
        Literal lit;
        lit.kind = LiteralKind::Year;
        lit.span = {i, end};
        lit.text = std::string(digits);
        lit.value = value;
        out.push_back(std::move(lit));
      } else if (!followed_by_word && raw.substr(end, 8) == " percent" &&
                 (end + 8 == raw.size() || !is_alnum(raw[end + 8]))) {
        Literal lit;
        lit.kind = LiteralKind::Percentage;
        lit.span = {i, end + 8};
        lit.text = std::string(raw.substr(i, end + 8 - i));
        lit.value = value;
        out.push_back(std::move(lit));
        i = end + 8;
        continue;
      }
      i = end;
      continue;
    }
    ++i;
  }
  std::sort(out.begin(), out.end(), [](const Literal& a, const Literal& b) {
    return a.span.begin < b.span.begin;
  });
  return out;
}

TextSegment make_segment(std::string raw) {
  TextSegment seg;
  seg.literals = extract_literals(raw);
  seg.raw = std::move(raw);
  return seg;
}

namespace {

int unit_depth(RefUnit unit) {
  switch (unit) {
    case RefUnit::Section: return 0;
    case RefUnit::Subsection: return 1;
    case RefUnit::Paragraph: return 2;
    case RefUnit::Subparagraph: return 3;
    case RefUnit::Clause: return 4;
    case RefUnit::Subclause: return 5;
    default: return -1;
  }
}

std::optional<ProvisionId> extend(const ProvisionId& base, std::size_t keep,
                                  const std::vector<std::string>& labels,
                                  std::string& reason) {
  auto id = base.prefix(keep);
  for (const auto& text : labels) {
    auto label = Label::at_depth(text, static_cast<int>(id.path().size()));
    if (!label) {
      reason = "label '" + text + "' is not valid at depth " +
               std::to_string(id.path().size());
      return std::nullopt;
    }
    id = id.child(*label);
  }
  return id;
}

// The paragraph named by "Paragraph (N) shall be applied" in the nearest
// proper ancestor of `source`, if any.
std::optional<ProvisionId> applied_frame(const Statute& statute,
                                         const ProvisionId& source) {
  constexpr std::string_view kApplied = " shall be applied";
  for (auto id = source.parent(); id.path().size() >= 1; id = id.parent()) {
    if (const auto* node = statute.find(id); node && !node->body.empty()) {
      const auto& seg = node->body.front();
      for (const auto& lit : seg.literals) {
        if (lit.kind != LiteralKind::CrossRef) continue;
        if (seg.raw.substr(lit.span.end, kApplied.size()) == kApplied) {
          auto refs = resolve_segment_refs(statute, id, seg);
          for (const auto& r : refs) {
            if (r.raw == lit.text && r.target) return r.target;
          }
        }
        break;
      }
    }
    if (id.path().size() == 1) break;
  }
  return std::nullopt;
}

}  // namespace

std::vector<CrossRef> resolve_segment_refs(const Statute& statute,
                                           const ProvisionId& source,
                                           const TextSegment& segment) {
  std::vector<CrossRef> out;
  std::optional<ProvisionId> previous;
  std::optional<std::optional<ProvisionId>> frame;
  for (const auto& lit : segment.literals) {
    if (lit.kind != LiteralKind::CrossRef || !lit.ref) continue;
    const RefSpec& spec = *lit.ref;
    CrossRef ref;
    ref.source = source;
    ref.raw = lit.text;
    const int depth = unit_depth(spec.unit);
    std::string reason;
    if (spec.this_unit) {
      if (depth < 0) {
        reason = "refers to an enclosing unit above the section level";
      } else if (static_cast<int>(source.depth()) < depth) {
        reason = "source is not inside a unit of that kind";
      } else {
        ref.target = source.prefix(depth + 1);
      }
    } else if (spec.unit == RefUnit::Section) {
      ref.target = extend(ProvisionId({Label::section(spec.section)}), 1,
                          spec.labels, reason);
    } else {
      std::optional<ProvisionId> base;
      if (spec.thereof) {
        base = previous;
        if (!base) reason = "'thereof' has no antecedent reference";
      } else {
        if (!frame) frame = applied_frame(statute, source);
        base = *frame ? **frame : source;
      }
      if (base) {
        if (static_cast<int>(base->path().size()) < depth) {
          reason = "reference is relative to a unit the source is not in";
        } else {
          ref.target = extend(*base, depth, spec.labels, reason);
        }
      }
    }
    if (ref.target) {
      previous = ref.target;
      if (statute.contains(*ref.target)) {
        ref.resolved = true;
      } else {
        reason = "target not in corpus";
      }
    }
    ref.reason = ref.resolved ? std::string{} : reason;
    out.push_back(std::move(ref));
  }
  return out;
}

namespace {

void collect_refs(const Statute& statute, const ProvisionNode& node,
                  std::vector<CrossRef>& out) {
  for (const auto* seg : node.segments()) {
    auto refs = resolve_segment_refs(statute, node.id, *seg);
    out.insert(out.end(), refs.begin(), refs.end());
  }
  for (const auto& c : node.children) collect_refs(statute, c, out);
}

}  // namespace

std::vector<CrossRef> resolve_cross_refs(const Statute& statute) {
  std::vector<CrossRef> out;
  for (const auto& s : statute.sections) collect_refs(statute, s, out);
  return out;
}

}  // namespace statute
