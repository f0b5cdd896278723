#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "statute/facts.hpp"
#include "statute/parser.hpp"

namespace testdata {

inline std::string path(const std::string& rel) {
  return std::string(STATUTE_SOURCE_DIR) + "/" + rel;
}

inline std::string read(const std::string& rel) {
  std::ifstream in(path(rel), std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline const std::string& corpus_text() {
  static const std::string text = read("data/irc_excerpt.txt");
  return text;
}

inline const statute::Statute& corpus() {
  static const statute::Statute s = statute::parse_statute(corpus_text());
  return s;
}

inline const statute::CpiTable& appendix_b() {
  static const statute::CpiTable t = statute::load_cpi_table(read("data/ccpiu_appendix_b.tsv"));
  return t;
}

inline statute::TaxpayerFacts facts(const std::string& name) {
  return statute::load_facts(read("data/facts/" + name + ".facts"));
}

inline statute::ProvisionId id(const char* s) { return statute::ProvisionId::parse(s); }

}  // namespace testdata
