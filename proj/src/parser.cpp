#include "statute/parser.hpp"

#include <cctype>
#include <sstream>

#include "statute/error.hpp"

namespace statute {

namespace {

constexpr std::string_view kSectionSign = "§";

struct Line {
  int number = 0;
  int indent = 0;
  std::string text;  // without leading/trailing whitespace
};

Line split_indent(std::string_view raw, int number) {
  Line line;
  line.number = number;
  std::size_t i = 0;
  while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) {
    line.indent += raw[i] == '\t' ? 4 : 1;
    ++i;
  }
  std::size_t end = raw.size();
  while (end > i && std::isspace(static_cast<unsigned char>(raw[end - 1]))) --end;
  line.text = std::string(raw.substr(i, end - i));
  return line;
}

bool is_elision(std::string_view text) { return text == "..." || text == "…"; }

struct SectionHeader {
  std::string number;
  std::optional<std::string> title;
};

std::optional<SectionHeader> section_header(std::string_view text) {
  if (text.rfind(kSectionSign, 0) != 0) return std::nullopt;
  std::size_t i = kSectionSign.size();
  const std::size_t start = i;
  while (i < text.size() && std::isalnum(static_cast<unsigned char>(text[i]))) ++i;
  if (i == start || !std::isdigit(static_cast<unsigned char>(text[start])) ||
      i >= text.size() || text[i] != '.') {
    return std::nullopt;
  }
  SectionHeader h;
  h.number = std::string(text.substr(start, i - start));
  auto rest = text.substr(i + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (!rest.empty()) h.title = std::string(rest);
  return h;
}

struct Enumerator {
  std::string label;
  std::string rest;
};

std::optional<Enumerator> enumerator(std::string_view text) {
  if (text.empty() || text.front() != '(') return std::nullopt;
  const auto close = text.find(')');
  if (close == std::string_view::npos || close == 1) return std::nullopt;
  const auto label = text.substr(1, close - 1);
  for (char c : label) {
    if (c == '(' || std::isspace(static_cast<unsigned char>(c))) return std::nullopt;
  }
  if (close + 1 < text.size() && text[close + 1] != ' ') return std::nullopt;
  Enumerator e;
  e.label = std::string(label);
  auto rest = text.substr(close + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  e.rest = std::string(rest);
  return e;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Headings start with a capital letter and carry no closing punctuation;
// operative text after an enumerator starts lowercase, with a figure, or
// ends in punctuation.
bool looks_like_heading(std::string_view text) {
  if (text.empty() || !std::isupper(static_cast<unsigned char>(text.front()))) {
    return false;
  }
  const char last = text.back();
  if (last == '.' || last == ',' || last == ';' || last == ':' || last == '-') {
    return false;
  }
  return !ends_with(text, "—") && !ends_with(text, "–");
}

class Builder {
 public:
  Statute finish() {
    flush_paragraph();
    return std::move(statute_);
  }

  void blank() { flush_paragraph(); }

  void section(const Line& line, SectionHeader header) {
    flush_paragraph();
    ProvisionNode node;
    node.id = ProvisionId({Label::section(header.number)});
    node.heading = std::move(header.title);
    for (const auto& s : statute_.sections) {
      if (s.id == node.id) {
        throw Error(ErrorCode::DuplicateSibling,
                    "line " + std::to_string(line.number) + ": section " +
                        header.number + " appears twice");
      }
    }
    statute_.sections.push_back(std::move(node));
    stack_.clear();
    stack_.push_back({-1, {statute_.sections.size() - 1}, 0});
  }

  void enumerated(const Line& line, const Enumerator& e) {
    flush_paragraph();
    require_section(line);
    while (stack_.size() > 1 && stack_.back().indent >= line.indent) {
      stack_.pop_back();
    }
    const Frame parent = stack_.back();
    const int depth = parent.depth + 1;
    auto label = Label::at_depth(e.label, depth);
    if (!label) {
      const auto where = "line " + std::to_string(line.number) + ": (" +
                         e.label + ") under " + at(parent).id.render();
      for (int deeper = depth + 1; deeper <= 5; ++deeper) {
        if (Label::at_depth(e.label, deeper)) {
          throw Error(ErrorCode::IndentationJump,
                      where + " skips a level of nesting");
        }
      }
      throw Error(ErrorCode::MalformedEnumerator,
                  where + " is not a valid label at depth " +
                      std::to_string(depth));
    }
    ProvisionNode& p = at(parent);
    if (p.child(label->text) != nullptr) {
      throw Error(ErrorCode::DuplicateSibling,
                  "line " + std::to_string(line.number) + ": (" + e.label +
                      ") repeated under " + p.id.render());
    }
    ProvisionNode node;
    node.id = p.id.child(*label);
    if (!e.rest.empty()) {
      if (looks_like_heading(e.rest)) {
        node.heading = e.rest;
      } else {
        node.body.push_back(make_segment(e.rest));
      }
    }
    p.children.push_back(std::move(node));
    auto path = parent.path;
    path.push_back(p.children.size() - 1);
    stack_.push_back({line.indent, std::move(path), depth});
  }

  void elision(const Line& line) {
    flush_paragraph();
    require_section(line);
    while (stack_.size() > 1 && stack_.back().indent >= line.indent) {
      stack_.pop_back();
    }
    ProvisionNode& p = at(stack_.back());
    if (!p.children.empty() && p.children.back().elided) return;
    int enumerated = 0;
    for (const auto& c : p.children) enumerated += c.elided ? 0 : 1;
    ProvisionNode node;
    node.id = p.id.child(Label::elision(enumerated));
    node.elided = true;
    p.children.push_back(std::move(node));
  }

  void text(const Line& line) {
    if (pending_) {
      pending_->text += " " + line.text;
      return;
    }
    require_section(line);
    while (stack_.size() > 1) {
      const Frame& top = stack_.back();
      const ProvisionNode& n = at(top);
      if (top.indent < line.indent) break;
      if (top.indent == line.indent && n.heading && n.body.empty() &&
          n.children.empty()) {
        break;
      }
      stack_.pop_back();
    }
    pending_ = Pending{stack_.back(), line.text};
  }

 private:
  struct Frame {
    int indent = 0;
    std::vector<std::size_t> path;
    int depth = 0;
  };
  struct Pending {
    Frame owner;
    std::string text;
  };

  ProvisionNode& at(const Frame& f) {
    ProvisionNode* n = &statute_.sections[f.path.front()];
    for (std::size_t i = 1; i < f.path.size(); ++i) n = &n->children[f.path[i]];
    return *n;
  }

  void require_section(const Line& line) {
    if (stack_.empty()) {
      throw Error(ErrorCode::MalformedEnumerator,
                  "line " + std::to_string(line.number) +
                      ": content before the first section header");
    }
  }

  void flush_paragraph() {
    if (!pending_) return;
    ProvisionNode& owner = at(pending_->owner);
    auto seg = make_segment(std::move(pending_->text));
    if (owner.children.empty()) {
      owner.body.push_back(std::move(seg));
    } else {
      owner.continuation.push_back(std::move(seg));
    }
    pending_.reset();
  }

  Statute statute_;
  std::vector<Frame> stack_;
  std::optional<Pending> pending_;
};

void render_node(const ProvisionNode& node, int depth,
                 std::vector<std::string>& blocks) {
  const std::string indent(static_cast<std::size_t>((depth - 1) * 4), ' ');
  if (node.elided) {
    blocks.push_back(indent + "...");
    return;
  }
  const std::string inner(static_cast<std::size_t>(depth * 4), ' ');
  std::string head = indent + "(" + node.label().text + ")";
  std::size_t first_body = 0;
  if (node.heading) {
    head += " " + *node.heading;
  } else if (!node.body.empty()) {
    head += " " + node.body.front().raw;
    first_body = 1;
  }
  blocks.push_back(std::move(head));
  for (std::size_t i = first_body; i < node.body.size(); ++i) {
    blocks.push_back(inner + node.body[i].raw);
  }
  for (const auto& c : node.children) render_node(c, depth + 1, blocks);
  for (const auto& s : node.continuation) blocks.push_back(inner + s.raw);
}

void render_section(const ProvisionNode& section,
                    std::vector<std::string>& blocks) {
  std::string head = "§" + section.id.section() + ".";
  if (section.heading) head += " " + *section.heading;
  blocks.push_back(std::move(head));
  for (const auto& s : section.body) blocks.push_back(s.raw);
  for (const auto& c : section.children) render_node(c, 1, blocks);
  for (const auto& s : section.continuation) blocks.push_back(s.raw);
}

std::string join_blocks(const std::vector<std::string>& blocks) {
  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i > 0) out += "\n\n";
    out += blocks[i];
  }
  out += "\n";
  return out;
}

}  // namespace

Statute parse_statute(std::string_view source) {
  Builder builder;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= source.size()) {
    auto nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    const Line line = split_indent(source.substr(pos, nl - pos), ++number);
    pos = nl + 1;
    if (line.text.empty()) {
      builder.blank();
    } else if (auto header = section_header(line.text)) {
      builder.section(line, std::move(*header));
    } else if (is_elision(line.text)) {
      builder.elision(line);
    } else if (auto e = enumerator(line.text)) {
      builder.enumerated(line, *e);
    } else {
      builder.text(line);
    }
    if (nl == source.size()) break;
  }
  return builder.finish();
}

std::string render_provision(const ProvisionNode& node) {
  std::vector<std::string> blocks;
  if (node.id.depth() == 0) {
    render_section(node, blocks);
  } else {
    render_node(node, static_cast<int>(node.id.depth()), blocks);
  }
  return join_blocks(blocks);
}

std::string render_statute(const Statute& statute) {
  std::vector<std::string> blocks;
  for (const auto& s : statute.sections) render_section(s, blocks);
  return join_blocks(blocks);
}

}  // namespace statute
