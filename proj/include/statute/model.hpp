#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace statute {

// Whole-dollar money. Every money-valued computation in the library stays in
// this type; there is no floating point on any path that produces dollars.
struct DollarAmount {
  std::int64_t dollars = 0;

  constexpr DollarAmount() = default;
  constexpr explicit DollarAmount(std::int64_t d) : dollars(d) {}

  friend constexpr auto operator<=>(DollarAmount, DollarAmount) = default;
  friend constexpr DollarAmount operator+(DollarAmount a, DollarAmount b) {
    return DollarAmount(a.dollars + b.dollars);
  }
  friend constexpr DollarAmount operator-(DollarAmount a, DollarAmount b) {
    return DollarAmount(a.dollars - b.dollars);
  }
  DollarAmount& operator+=(DollarAmount o) {
    dollars += o.dollars;
    return *this;
  }
};

// "$12,000", "-$5,200".
std::string format_dollars(DollarAmount amount);

// An index value with one decimal, held as tenths ("138.2" <-> 1382).
struct CpiValue {
  std::int64_t tenths = 0;

  constexpr CpiValue() = default;
  constexpr explicit CpiValue(std::int64_t t) : tenths(t) {}

  friend constexpr auto operator<=>(CpiValue, CpiValue) = default;

  std::string to_string() const;
  // Accepts "138.2" and "138" (whole values); anything else is BadValue.
  static CpiValue parse(std::string_view text);
};

// Enumerator alphabets, in the ordering used to compare labels of different
// kinds. Nesting depth follows the statute: subsection (a), paragraph (1),
// subparagraph (A), clause (i), subclause (I).
enum class LabelKind {
  Section,
  Digit,
  Lower,
  Upper,
  LowerRoman,
  UpperRoman,
  Elision,
};

struct Label {
  LabelKind kind = LabelKind::Section;
  std::string text;
  int ordinal = 0;

  static Label section(std::string_view number);
  // Interprets `text` as the label of a node at `depth` (1 = subsection).
  static std::optional<Label> at_depth(std::string_view text, int depth);
  static Label elision(int ordinal);

  friend bool operator==(const Label& a, const Label& b) {
    return a.kind == b.kind && a.text == b.text;
  }
  friend std::strong_ordering operator<=>(const Label& a, const Label& b);
};

// The label kind expected at a given depth below the section.
std::optional<LabelKind> kind_for_depth(int depth);
std::optional<int> roman_value(std::string_view text);

class ProvisionId {
 public:
  ProvisionId() = default;
  explicit ProvisionId(std::vector<Label> path);

  // "§63(c)(2)(C)". Throws Error(BadIdentifier).
  static ProvisionId parse(std::string_view citation);

  const std::vector<Label>& path() const { return path_; }
  std::size_t depth() const { return path_.empty() ? 0 : path_.size() - 1; }
  const std::string& section() const { return path_.front().text; }
  bool empty() const { return path_.empty(); }

  ProvisionId child(Label label) const;
  ProvisionId parent() const;
  ProvisionId prefix(std::size_t length) const;
  bool is_ancestor_of(const ProvisionId& other) const;

  std::string render() const;

  friend bool operator==(const ProvisionId&, const ProvisionId&) = default;
  friend std::strong_ordering operator<=>(const ProvisionId& a,
                                          const ProvisionId& b);

 private:
  std::vector<Label> path_;
};

std::string render_id(const ProvisionId& id);

enum class LiteralKind {
  DollarAmount,
  // A dollar figure that sets a rounding granularity ("multiple of $50")
  // rather than an amount in effect.
  RoundingUnit,
  Year,
  Percentage,
  CrossRef,
};

std::string_view to_string(LiteralKind kind);

enum class RefUnit {
  Title,
  Subtitle,
  Chapter,
  Section,
  Subsection,
  Paragraph,
  Subparagraph,
  Clause,
  Subclause,
};

// Structural content of a textual reference such as "section 1(f)(3)",
// "paragraphs (2)(B)", "subparagraph (A)(ii) thereof" or "this subsection".
struct RefSpec {
  RefUnit unit = RefUnit::Section;
  std::string section;
  std::vector<std::string> labels;
  bool thereof = false;
  bool this_unit = false;

  friend bool operator==(const RefSpec&, const RefSpec&) = default;
};

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Literal {
  LiteralKind kind = LiteralKind::DollarAmount;
  std::string text;
  Span span;
  std::int64_t value = 0;
  std::optional<RefSpec> ref;

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct TextSegment {
  std::string raw;
  std::vector<Literal> literals;

  std::vector<const Literal*> of_kind(LiteralKind kind) const;

  friend bool operator==(const TextSegment&, const TextSegment&) = default;
};

struct ProvisionNode {
  ProvisionId id;
  std::optional<std::string> heading;
  // Text before the first child.
  std::vector<TextSegment> body;
  // Flush text after the children, e.g. the rounding sentence that closes
  // §63(c)(7)(B)(ii).
  std::vector<TextSegment> continuation;
  std::vector<ProvisionNode> children;
  bool elided = false;

  const Label& label() const { return id.path().back(); }
  const ProvisionNode* child(std::string_view label) const;
  ProvisionNode* child(std::string_view label);

  // All segments in document order.
  std::vector<const TextSegment*> segments() const;
  // Body and continuation joined with single spaces.
  std::string text() const;

  friend bool operator==(const ProvisionNode&, const ProvisionNode&) = default;
};

// The parsed corpus: one root per section, in source order.
struct Statute {
  std::vector<ProvisionNode> sections;

  const ProvisionNode* find(const ProvisionId& id) const;
  ProvisionNode* find(const ProvisionId& id);
  bool contains(const ProvisionId& id) const { return find(id) != nullptr; }

  // Non-elided provisions in depth-first document order.
  std::vector<ProvisionId> provision_ids() const;

  friend bool operator==(const Statute&, const Statute&) = default;
};

}  // namespace statute
