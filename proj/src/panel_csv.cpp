#include "panelprobit/panel_csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "panelprobit/error.hpp"

namespace panelprobit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  for (;;) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

[[noreturn]] void fail(ErrorKind kind, std::size_t line, const std::string& message) {
  throw Error(kind, "line " + std::to_string(line) + ": " + message, {{"line", line}});
}

template <class Int>
bool parse_int(std::string_view s, Int& value) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_real(std::string_view s, double& value) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(value);
}

bool next_content_line(std::istream& in, std::string& line, std::size_t& number) {
  while (std::getline(in, line)) {
    ++number;
    if (!trim(line).empty()) return true;
  }
  return false;
}

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

PanelData parse_panel_csv(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_content_line(in, line, number)) throw Error(ErrorKind::SchemaError, "empty input: missing header");
  std::string_view header_line = line;
  if (header_line.substr(0, 3) == "\xEF\xBB\xBF") header_line.remove_prefix(3);
  const auto header = split(header_line);
  if (header.size() < 3 || header[0] != "id" || header[1] != "t" || header[2] != "d")
    fail(ErrorKind::SchemaError, number, "header must start with id,t,d");
  const std::size_t k = header.size() - 3;
  for (std::size_t j = 0; j < k; ++j)
    if (header[3 + j] != "x" + std::to_string(j + 1))
      fail(ErrorKind::SchemaError, number, "covariate columns must be named x1..xk in order");

  struct Record {
    std::string id;
    std::vector<std::pair<int, std::size_t>> waves;  // (t, line)
    std::unordered_map<int, std::pair<std::uint8_t, std::vector<double>>> values;
  };
  std::vector<Record> records;
  std::unordered_map<std::string, std::size_t> index;

  while (next_content_line(in, line, number)) {
    const auto fields = split(line);
    if (fields.size() != header.size())
      fail(ErrorKind::SchemaError, number,
           "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    if (fields[0].empty()) fail(ErrorKind::SchemaError, number, "empty id");
    int t = 0;
    if (!parse_int(fields[1], t) || t < 1) fail(ErrorKind::SchemaError, number, "wave t must be a positive integer");
    double d_value = 0.0;
    if (!parse_real(fields[2], d_value)) fail(ErrorKind::SchemaError, number, "outcome d is not a number");
    if (d_value != 0.0 && d_value != 1.0)
      fail(ErrorKind::NonBinaryOutcome, number, "outcome d = " + std::string(fields[2]) + " is not 0 or 1");
    std::vector<double> x(k);
    for (std::size_t j = 0; j < k; ++j)
      if (!parse_real(fields[3 + j], x[j]))
        fail(ErrorKind::SchemaError, number, "covariate x" + std::to_string(j + 1) + " is not a finite number");

    const std::string id(fields[0]);
    auto [it, inserted] = index.emplace(id, records.size());
    if (inserted) records.push_back(Record{id, {}, {}});
    Record& rec = records[it->second];
    if (rec.values.count(t))
      fail(ErrorKind::DuplicateRow, number, "individual '" + id + "' wave " + std::to_string(t) + " appears twice");
    rec.waves.emplace_back(t, number);
    rec.values.emplace(t, std::make_pair(static_cast<std::uint8_t>(d_value), std::move(x)));
  }
  if (records.empty()) throw Error(ErrorKind::SchemaError, "no data rows");

  std::size_t horizon = 0;
  for (const Record& r : records)
    for (const auto& [t, ln] : r.waves) horizon = std::max(horizon, static_cast<std::size_t>(t));
  if (horizon != 2 && horizon != 3)
    throw Error(ErrorKind::SchemaError, "panels must have T = 2 or T = 3 waves, found T = " + std::to_string(horizon),
                {{"horizon", horizon}});
  for (const Record& r : records) {
    if (r.values.size() != horizon) {
      std::string missing;
      for (std::size_t t = 1; t <= horizon; ++t)
        if (!r.values.count(static_cast<int>(t))) missing += (missing.empty() ? "" : ",") + std::to_string(t);
      throw Error(ErrorKind::RaggedPanel, "individual '" + r.id + "' is missing wave(s) " + missing,
                  {{"id", r.id}, {"line", r.waves.front().second}});
    }
  }

  std::vector<std::uint8_t> outcomes;
  std::vector<double> covariates;
  std::vector<std::string> ids;
  outcomes.reserve(records.size() * horizon);
  covariates.reserve(records.size() * horizon * k);
  for (const Record& r : records) {
    ids.push_back(r.id);
    for (std::size_t t = 1; t <= horizon; ++t) {
      const auto& [d, x] = r.values.at(static_cast<int>(t));
      outcomes.push_back(d);
      covariates.insert(covariates.end(), x.begin(), x.end());
    }
  }
  return PanelData(horizon, std::move(outcomes), k, std::move(covariates), std::move(ids));
}

void write_panel_csv(std::ostream& out, const PanelData& panel) {
  out << "id,t,d";
  for (std::size_t j = 0; j < panel.covariate_dim(); ++j) out << ",x" << j + 1;
  out << '\n';
  for (std::size_t i = 0; i < panel.size(); ++i) {
    for (std::size_t t = 0; t < panel.horizon(); ++t) {
      out << panel.id(i) << ',' << t + 1 << ',' << panel.outcome(i, t);
      for (double x : panel.covariates(i, t)) out << ',' << shortest(x);
      out << '\n';
    }
  }
}

RunsCounts parse_runs_csv(std::istream& in) {
  std::string line;
  std::size_t number = 0;
  if (!next_content_line(in, line, number)) throw Error(ErrorKind::SchemaError, "empty input: missing header");
  const auto header = split(line);
  if (header.size() != 2 || header[0] != "pattern" || header[1] != "count")
    fail(ErrorKind::SchemaError, number, "header must be pattern,count");
  RunsCounts counts;
  std::array<bool, 8> seen{};
  while (next_content_line(in, line, number)) {
    const auto fields = split(line);
    if (fields.size() != 2) fail(ErrorKind::SchemaError, number, "expected pattern,count");
    std::size_t slot = RunsCounts::kPatterns.size();
    for (std::size_t j = 0; j < RunsCounts::kPatterns.size(); ++j)
      if (RunsCounts::kPatterns[j] == fields[0]) slot = j;
    if (slot == RunsCounts::kPatterns.size())
      fail(ErrorKind::SchemaError, number, "pattern '" + std::string(fields[0]) + "' is not a T = 3 binary pattern");
    if (seen[slot]) fail(ErrorKind::DuplicateRow, number, "pattern " + std::string(fields[0]) + " listed twice");
    if (!parse_int(fields[1], counts.n[slot])) fail(ErrorKind::SchemaError, number, "count must be a non-negative integer");
    seen[slot] = true;
  }
  return counts;
}

RunsCounts parse_runs_list(std::string_view text) {
  const auto fields = split(text);
  if (fields.size() != 8)
    throw Error(ErrorKind::UsageError, "expected 8 comma-separated counts n000,n001,n010,n100,n110,n011,n101,n111",
                {{"found", fields.size()}});
  RunsCounts counts;
  for (std::size_t j = 0; j < 8; ++j)
    if (!parse_int(fields[j], counts.n[j]))
      throw Error(ErrorKind::UsageError, "count '" + std::string(fields[j]) + "' is not a non-negative integer");
  return counts;
}

}  // namespace panelprobit
