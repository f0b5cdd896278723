#include "statute/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "statute/error.hpp"

namespace statute {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadIdentifier: return "BadIdentifier";
    case ErrorCode::MalformedEnumerator: return "MalformedEnumerator";
    case ErrorCode::IndentationJump: return "IndentationJump";
    case ErrorCode::DuplicateSibling: return "DuplicateSibling";
    case ErrorCode::MissingKey: return "MissingKey";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::BadValue: return "BadValue";
    case ErrorCode::BadDate: return "BadDate";
    case ErrorCode::InconsistentSpouse: return "InconsistentSpouse";
    case ErrorCode::WrongCount: return "WrongCount";
    case ErrorCode::BadCpiLine: return "BadCpiLine";
    case ErrorCode::MissingCpiYear: return "MissingCpiYear";
    case ErrorCode::UnsupportedYear: return "UnsupportedYear";
    case ErrorCode::ItemizerUnsupported: return "ItemizerUnsupported";
    case ErrorCode::MissingProvision: return "MissingProvision";
    case ErrorCode::UnmodeledRule: return "UnmodeledRule";
    case ErrorCode::TargetMissing: return "TargetMissing";
    case ErrorCode::LiteralMismatch: return "LiteralMismatch";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::InvalidMutation: return "InvalidMutation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::TransportFailure: return "TransportFailure";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::TranscriptMiss: return "TranscriptMiss";
    case ErrorCode::TaskMismatch: return "TaskMismatch";
    case ErrorCode::TemplateMissing: return "TemplateMissing";
  }
  return "Unknown";
}

std::string format_dollars(DollarAmount amount) {
  std::int64_t v = amount.dollars;
  const bool negative = v < 0;
  std::string digits = std::to_string(negative ? -v : v);
  std::string grouped;
  const int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) grouped.push_back(',');
    grouped.push_back(digits[i]);
  }
  return (negative ? "-$" : "$") + grouped;
}

std::string CpiValue::to_string() const {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

CpiValue CpiValue::parse(std::string_view text) {
  auto bad = [&] {
    return Error(ErrorCode::BadValue,
                 "not a one-decimal index value: '" + std::string(text) + "'");
  };
  const auto dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (whole.empty() || (dot != std::string_view::npos && frac.size() != 1)) {
    throw bad();
  }
  std::int64_t w = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (ec != std::errc{} || p != whole.data() + whole.size() || w < 0) {
    throw bad();
  }
  std::int64_t f = 0;
  if (!frac.empty()) {
    if (!std::isdigit(static_cast<unsigned char>(frac[0]))) throw bad();
    f = frac[0] - '0';
  }
  return CpiValue(w * 10 + f);
}

std::optional<int> roman_value(std::string_view text) {
  if (text.empty() || text.size() > 8) return std::nullopt;
  auto digit = [](char c) -> int {
    switch (std::tolower(static_cast<unsigned char>(c))) {
      case 'i': return 1;
      case 'v': return 5;
      case 'x': return 10;
      case 'l': return 50;
      default: return 0;
    }
  };
  const bool lower = std::islower(static_cast<unsigned char>(text[0])) != 0;
  int total = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const bool is_lower = std::islower(static_cast<unsigned char>(text[i])) != 0;
    if (is_lower != lower) return std::nullopt;
    const int v = digit(text[i]);
    if (v == 0) return std::nullopt;
    const int next = i + 1 < text.size() ? digit(text[i + 1]) : 0;
    total += v < next ? -v : v;
  }
  if (total <= 0) return std::nullopt;
  // Only canonical spellings count ("iiii" and "vx" are not numerals).
  static constexpr std::pair<int, std::string_view> kTable[] = {
      {50, "l"}, {40, "xl"}, {10, "x"}, {9, "ix"},
      {5, "v"},  {4, "iv"},  {1, "i"}};
  std::string canonical;
  int rest = total;
  for (const auto& [value, spelling] : kTable) {
    while (rest >= value) {
      canonical += spelling;
      rest -= value;
    }
  }
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (canonical != lowered) return std::nullopt;
  return total;
}

std::optional<LabelKind> kind_for_depth(int depth) {
  switch (depth) {
    case 0: return LabelKind::Section;
    case 1: return LabelKind::Lower;
    case 2: return LabelKind::Digit;
    case 3: return LabelKind::Upper;
    case 4: return LabelKind::LowerRoman;
    case 5: return LabelKind::UpperRoman;
    default: return std::nullopt;
  }
}

Label Label::section(std::string_view number) {
  Label l;
  l.kind = LabelKind::Section;
  l.text = std::string(number);
  int value = 0;
  std::from_chars(number.data(), number.data() + number.size(), value);
  l.ordinal = value;
  return l;
}

Label Label::elision(int ordinal) {
  Label l;
  l.kind = LabelKind::Elision;
  l.text = "..." + std::to_string(ordinal);
  l.ordinal = ordinal;
  return l;
}

std::optional<Label> Label::at_depth(std::string_view text, int depth) {
  if (text.empty()) return std::nullopt;
  if (text.rfind("...", 0) == 0) {
    int ordinal = 0;
    auto rest = text.substr(3);
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), ordinal);
    if (ec != std::errc{} || p != rest.data() + rest.size()) return std::nullopt;
    return elision(ordinal);
  }
  const auto kind = kind_for_depth(depth);
  if (!kind) return std::nullopt;
  Label l;
  l.kind = *kind;
  l.text = std::string(text);
  auto all = [&](bool lower) {
    return std::all_of(text.begin(), text.end(), [&](unsigned char c) {
      return (lower ? std::islower(c) : std::isupper(c)) != 0;
    });
  };
  switch (*kind) {
    case LabelKind::Section:
      if (!std::isdigit(static_cast<unsigned char>(text[0]))) return std::nullopt;
      return section(text);
    case LabelKind::Digit: {
      if (!std::all_of(text.begin(), text.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; })) {
        return std::nullopt;
      }
      std::from_chars(text.data(), text.data() + text.size(), l.ordinal);
      return l;
    }
    case LabelKind::Lower:
    case LabelKind::Upper: {
      if (text.size() != 1) return std::nullopt;
      const bool ok = *kind == LabelKind::Lower ? std::islower(text[0]) != 0
                                                : std::isupper(text[0]) != 0;
      if (!ok) return std::nullopt;
      l.ordinal = std::tolower(text[0]) - 'a' + 1;
      return l;
    }
    case LabelKind::LowerRoman:
    case LabelKind::UpperRoman: {
      const bool lower = *kind == LabelKind::LowerRoman;
      if (!all(lower)) return std::nullopt;
      auto v = roman_value(text);
      if (!v) return std::nullopt;
      l.ordinal = *v;
      return l;
    }
    case LabelKind::Elision:
      break;
  }
  return std::nullopt;
}

std::strong_ordering operator<=>(const Label& a, const Label& b) {
  if (auto c = static_cast<int>(a.kind) <=> static_cast<int>(b.kind); c != 0) {
    return c;
  }
  if (auto c = a.ordinal <=> b.ordinal; c != 0) return c;
  return a.text <=> b.text;
}

ProvisionId::ProvisionId(std::vector<Label> path) : path_(std::move(path)) {
  if (path_.empty() || path_.front().kind != LabelKind::Section) {
    throw Error(ErrorCode::BadIdentifier,
                "provision path must start with a section number");
  }
}

ProvisionId ProvisionId::parse(std::string_view citation) {
  auto bad = [&](const std::string& why) {
    return Error(ErrorCode::BadIdentifier,
                 "'" + std::string(citation) + "': " + why);
  };
  std::string_view s = citation;
  static constexpr std::string_view kSectionSign = "§";
  if (s.rfind(kSectionSign, 0) == 0) s.remove_prefix(kSectionSign.size());
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  std::size_t i = 0;
  while (i < s.size() && std::isalnum(static_cast<unsigned char>(s[i]))) ++i;
  if (i == 0 || !std::isdigit(static_cast<unsigned char>(s[0]))) {
    throw bad("missing section number");
  }
  std::vector<Label> path{Label::section(s.substr(0, i))};
  while (i < s.size()) {
    if (s[i] != '(') throw bad("expected '('");
    const auto close = s.find(')', i);
    if (close == std::string_view::npos) throw bad("unterminated label");
    const auto text = s.substr(i + 1, close - i - 1);
    auto label = Label::at_depth(text, static_cast<int>(path.size()));
    if (!label) {
      throw bad("label '" + std::string(text) + "' is not valid at depth " +
                std::to_string(path.size()));
    }
    path.push_back(*label);
    i = close + 1;
  }
  return ProvisionId(std::move(path));
}

ProvisionId ProvisionId::child(Label label) const {
  auto path = path_;
  path.push_back(std::move(label));
  return ProvisionId(std::move(path));
}

ProvisionId ProvisionId::parent() const {
  if (path_.size() <= 1) return *this;
  return prefix(path_.size() - 1);
}

ProvisionId ProvisionId::prefix(std::size_t length) const {
  length = std::min(length, path_.size());
  return ProvisionId(std::vector<Label>(path_.begin(), path_.begin() + length));
}

bool ProvisionId::is_ancestor_of(const ProvisionId& other) const {
  return path_.size() < other.path_.size() &&
         std::equal(path_.begin(), path_.end(), other.path_.begin());
}

std::string ProvisionId::render() const {
  if (path_.empty()) return {};
  std::string out = "§" + path_.front().text;
  for (std::size_t i = 1; i < path_.size(); ++i) {
    out += "(" + path_[i].text + ")";
  }
  return out;
}

std::strong_ordering operator<=>(const ProvisionId& a, const ProvisionId& b) {
  return std::lexicographical_compare_three_way(a.path_.begin(), a.path_.end(),
                                                b.path_.begin(), b.path_.end());
}

std::string render_id(const ProvisionId& id) { return id.render(); }

std::string_view to_string(LiteralKind kind) {
  switch (kind) {
    case LiteralKind::DollarAmount: return "DollarAmount";
    case LiteralKind::RoundingUnit: return "RoundingUnit";
    case LiteralKind::Year: return "Year";
    case LiteralKind::Percentage: return "Percentage";
    case LiteralKind::CrossRef: return "CrossRef";
  }
  return "Unknown";
}

std::vector<const Literal*> TextSegment::of_kind(LiteralKind kind) const {
  std::vector<const Literal*> out;
  for (const auto& lit : literals) {
    if (lit.kind == kind) out.push_back(&lit);
  }
  return out;
}

const ProvisionNode* ProvisionNode::child(std::string_view label) const {
  for (const auto& c : children) {
    if (c.label().text == label) return &c;
  }
  return nullptr;
}

ProvisionNode* ProvisionNode::child(std::string_view label) {
  for (auto& c : children) {
    if (c.label().text == label) return &c;
  }
  return nullptr;
}

std::vector<const TextSegment*> ProvisionNode::segments() const {
  std::vector<const TextSegment*> out;
  for (const auto& s : body) out.push_back(&s);
  for (const auto& s : continuation) out.push_back(&s);
  return out;
}

std::string ProvisionNode::text() const {
  std::string out;
  for (const auto* s : segments()) {
    if (!out.empty()) out.push_back(' ');
    out += s->raw;
  }
  return out;
}

namespace {

template <typename Node>
Node* find_in(Node* node, const ProvisionId& id, std::size_t depth) {
  if (depth + 1 == id.path().size()) return node;
  for (auto& c : node->children) {
    if (c.label() == id.path()[depth + 1]) return find_in(&c, id, depth + 1);
  }
  return nullptr;
}

void collect_ids(const ProvisionNode& node, std::vector<ProvisionId>& out) {
  if (node.elided) return;
  out.push_back(node.id);
  for (const auto& c : node.children) collect_ids(c, out);
}

}  // namespace

const ProvisionNode* Statute::find(const ProvisionId& id) const {
  if (id.empty()) return nullptr;
  for (const auto& s : sections) {
    if (s.label() == id.path().front()) return find_in(&s, id, 0);
  }
  return nullptr;
}

ProvisionNode* Statute::find(const ProvisionId& id) {
  if (id.empty()) return nullptr;
  for (auto& s : sections) {
    if (s.label() == id.path().front()) return find_in(&s, id, 0);
  }
  return nullptr;
}

std::vector<ProvisionId> Statute::provision_ids() const {
  std::vector<ProvisionId> out;
  for (const auto& s : sections) collect_ids(s, out);
  return out;
}

}  // namespace statute
