#include "statute/facts.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "statute/error.hpp"

namespace statute {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "yes") return true;
  if (value == "false" || value == "no") return false;
  throw Error(ErrorCode::BadValue,
              std::string(key) + ": expected true/false, got '" +
                  std::string(value) + "'");
}

DollarAmount parse_dollars(std::string_view key, std::string_view value) {
  std::string digits;
  for (char c : value) {
    if (c != ',' && c != '$') digits.push_back(c);
  }
  auto v = parse_int<std::int64_t>(digits);
  if (!v) {
    throw Error(ErrorCode::BadValue, std::string(key) +
                                         ": not a whole-dollar amount: '" +
                                         std::string(value) + "'");
  }
  return DollarAmount(*v);
}

constexpr std::array<std::string_view, 8> kKeys = {
    "taxable_year", "filing_status",        "taxpayer_birth",
    "spouse_birth", "agi",                  "itemizes",
    "spouse_gross_income", "spouse_is_dependent_of_another"};

// Keys that may be left out: they default to "no spouse", 0 and false.
constexpr std::array<std::string_view, 3> kOptionalKeys = {
    "spouse_birth", "spouse_gross_income", "spouse_is_dependent_of_another"};

}  // namespace

std::string_view to_string(FilingStatus status) {
  switch (status) {
    case FilingStatus::Joint: return "joint";
    case FilingStatus::SurvivingSpouse: return "surviving_spouse";
    case FilingStatus::HeadOfHousehold: return "head_of_household";
    case FilingStatus::Single: return "single";
    case FilingStatus::MarriedSeparate: return "married_separate";
  }
  return "unknown";
}

FilingStatus parse_filing_status(std::string_view text) {
  for (auto s : {FilingStatus::Joint, FilingStatus::SurvivingSpouse,
                 FilingStatus::HeadOfHousehold, FilingStatus::Single,
                 FilingStatus::MarriedSeparate}) {
    if (text == to_string(s)) return s;
  }
  throw Error(ErrorCode::BadValue,
              "unknown filing status '" + std::string(text) + "'");
}

bool has_spouse(FilingStatus status) {
  return status == FilingStatus::Joint ||
         status == FilingStatus::MarriedSeparate;
}

Date parse_date(std::string_view text) {
  auto bad = [&] {
    return Error(ErrorCode::BadDate,
                 "expected YYYY-MM-DD, got '" + std::string(text) + "'");
  };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto y = parse_int<int>(text.substr(0, 4));
  auto m = parse_int<unsigned>(text.substr(5, 2));
  auto d = parse_int<unsigned>(text.substr(8, 2));
  if (!y || !m || !d) throw bad();
  Date date{std::chrono::year(*y), std::chrono::month(*m), std::chrono::day(*d)};
  if (!date.ok()) throw bad();
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()));
  return buf;
}

void validate(const TaxpayerFacts& facts) {
  const bool spouse = has_spouse(facts.filing_status);
  if (spouse != facts.spouse_birth.has_value()) {
    throw Error(ErrorCode::InconsistentSpouse,
                std::string("spouse_birth must be ") +
                    (spouse ? "present" : "absent") + " for filing status " +
                    std::string(to_string(facts.filing_status)));
  }
  if (!spouse && (facts.spouse_gross_income.dollars != 0 ||
                  facts.spouse_is_dependent_of_another)) {
    throw Error(ErrorCode::InconsistentSpouse,
                "spouse fields set for filing status " +
                    std::string(to_string(facts.filing_status)));
  }
  if (facts.agi.dollars < 0) {
    throw Error(ErrorCode::BadValue, "agi must be non-negative");
  }
  if (facts.spouse_gross_income.dollars < 0) {
    throw Error(ErrorCode::BadValue, "spouse_gross_income must be non-negative");
  }
  const std::chrono::year_month_day year_end{
      std::chrono::year(facts.taxable_year), std::chrono::December,
      std::chrono::day(31)};
  if (facts.taxpayer_birth > year_end ||
      (facts.spouse_birth && *facts.spouse_birth > year_end)) {
    throw Error(ErrorCode::BadDate, "birth date after the close of the taxable year");
  }
}

TaxpayerFacts load_facts(std::string_view source) {
  std::map<std::string, std::string, std::less<>> values;
  std::size_t pos = 0;
  int number = 0;
  while (pos < source.size()) {
    auto nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    auto line = source.substr(pos, nl - pos);
    pos = nl + 1;
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::BadValue,
                  "line " + std::to_string(number) + ": expected 'key: value'");
    }
    const std::string key(trim(line.substr(0, colon)));
    const std::string value(trim(line.substr(colon + 1)));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw Error(ErrorCode::UnknownKey, "unknown key '" + key + "'");
    }
    if (!values.emplace(key, value).second) {
      throw Error(ErrorCode::BadValue, "key '" + key + "' given twice");
    }
  }
  for (auto key : kKeys) {
    const bool optional =
        std::find(kOptionalKeys.begin(), kOptionalKeys.end(), key) !=
        kOptionalKeys.end();
    if (!optional && values.find(key) == values.end()) {
      throw Error(ErrorCode::MissingKey, "missing key '" + std::string(key) + "'");
    }
  }

  TaxpayerFacts facts;
  auto year = parse_int<int>(values.at("taxable_year"));
  if (!year) throw Error(ErrorCode::BadValue, "taxable_year: not an integer");
  facts.taxable_year = *year;
  facts.filing_status = parse_filing_status(values.at("filing_status"));
  facts.taxpayer_birth = parse_date(values.at("taxpayer_birth"));
  if (auto it = values.find("spouse_birth");
      it != values.end() && !it->second.empty() && it->second != "none") {
    facts.spouse_birth = parse_date(it->second);
  }
  facts.agi = parse_dollars("agi", values.at("agi"));
  facts.itemizes = parse_bool("itemizes", values.at("itemizes"));
  if (auto it = values.find("spouse_gross_income"); it != values.end()) {
    facts.spouse_gross_income = parse_dollars("spouse_gross_income", it->second);
  }
  if (auto it = values.find("spouse_is_dependent_of_another");
      it != values.end()) {
    facts.spouse_is_dependent_of_another =
        parse_bool("spouse_is_dependent_of_another", it->second);
  }
  validate(facts);
  return facts;
}

std::string render_facts(const TaxpayerFacts& facts) {
  std::string out;
  out += "taxable_year: " + std::to_string(facts.taxable_year) + "\n";
  out += "filing_status: " + std::string(to_string(facts.filing_status)) + "\n";
  out += "taxpayer_birth: " + format_date(facts.taxpayer_birth) + "\n";
  out += "spouse_birth: " +
         (facts.spouse_birth ? format_date(*facts.spouse_birth) : "none") + "\n";
  out += "agi: " + std::to_string(facts.agi.dollars) + "\n";
  out += std::string("itemizes: ") + (facts.itemizes ? "true" : "false") + "\n";
  out += "spouse_gross_income: " +
         std::to_string(facts.spouse_gross_income.dollars) + "\n";
  out += std::string("spouse_is_dependent_of_another: ") +
         (facts.spouse_is_dependent_of_another ? "true" : "false") + "\n";
  return out;
}

CpiValue CpiTable::at(int year) const {
  auto it = entries_.find(year);
  if (it == entries_.end()) {
    throw Error(ErrorCode::MissingCpiYear,
                "no C-CPI-U value for calendar year " + std::to_string(year));
  }
  return it->second;
}

CpiTable load_cpi_table(std::string_view source) {
  std::map<int, CpiValue> entries;
  std::size_t pos = 0;
  int number = 0;
  while (pos < source.size()) {
    auto nl = source.find('\n', pos);
    if (nl == std::string_view::npos) nl = source.size();
    auto line = source.substr(pos, nl - pos);
    pos = nl + 1;
    ++number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto bad = [&](const std::string& why) {
      return Error(ErrorCode::BadCpiLine,
                   "line " + std::to_string(number) + ": " + why);
    };
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw bad("expected YYYY<TAB>value");
    const auto year_text = line.substr(0, tab);
    const auto value_text = line.substr(tab + 1);
    auto year = parse_int<int>(year_text);
    if (!year || year_text.size() != 4) throw bad("bad year");
    if (value_text.find('.') == std::string_view::npos) {
      throw bad("value must carry one decimal");
    }
    CpiValue value;
    try {
      value = CpiValue::parse(value_text);
    } catch (const Error& e) {
      throw bad(e.what());
    }
    if (!entries.emplace(*year, value).second) throw bad("duplicate year");
  }
  return CpiTable(std::move(entries));
}

std::string render_cpi_table(const CpiTable& table) {
  std::string out;
  for (const auto& [year, value] : table.entries()) {
    out += std::to_string(year) + "\t" + value.to_string() + "\n";
  }
  return out;
}

CpiValue ccpiu_annual_average(std::span<const CpiValue> monthly) {
  if (monthly.size() != 12) {
    throw Error(ErrorCode::WrongCount,
                "expected 12 monthly values, got " + std::to_string(monthly.size()));
  }
  std::int64_t sum = 0;
  for (auto v : monthly) sum += v.tenths;
  // Half-up rounding of sum / 12 for non-negative sums.
  return CpiValue((sum * 2 + 12) / 24);
}

}  // namespace statute
