#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "statute/model.hpp"

namespace statute {

// Replaces curly quotes with straight ones. Raw text keeps whatever the
// source used; matching is done on the normalized form.
std::string normalize_quotes(std::string_view text);

// Scans one paragraph of statute text for dollar figures, years,
// percentages and cross-references. Returned spans are disjoint and sorted.
std::vector<Literal> extract_literals(std::string_view raw);

TextSegment make_segment(std::string raw);

// Parses text laid out like the IRC excerpt: "§N. Title" headers,
// "(x)" enumerators at line start, nesting by indentation, "..." for
// elided material. Throws Error(MalformedEnumerator | IndentationJump |
// DuplicateSibling).
Statute parse_statute(std::string_view source);

// Canonical layout: 4 spaces per depth, one blank line between blocks.
std::string render_statute(const Statute& statute);
std::string render_provision(const ProvisionNode& node);

struct CrossRef {
  ProvisionId source;
  std::optional<ProvisionId> target;
  std::string raw;
  bool resolved = false;
  // Why the reference is unresolved; empty when resolved.
  std::string reason;
};

// Resolves every reference that appears in `segment`, which belongs to the
// provision `source`. "thereof" chains to the previous reference in the same
// segment; relative references inside a block introduced by "Paragraph (N)
// shall be applied" are read relative to that paragraph.
std::vector<CrossRef> resolve_segment_refs(const Statute& statute,
                                           const ProvisionId& source,
                                           const TextSegment& segment);

std::vector<CrossRef> resolve_cross_refs(const Statute& statute);

}  // namespace statute
