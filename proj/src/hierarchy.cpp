#include "wb/hierarchy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace wb {

const char* to_string(TableVariant v) {
  switch (v) {
    case TableVariant::Original: return "original";
    case TableVariant::Extended: return "extended";
    case TableVariant::Full: return "full";
  }
  return "?";
}

std::optional<TableVariant> parse_variant(std::string_view s) {
  for (TableVariant v : {TableVariant::Original, TableVariant::Extended, TableVariant::Full})
    if (s == to_string(v)) return v;
  return std::nullopt;
}

std::vector<std::string> table_theories(TableVariant v) {
  std::vector<std::string> core;
  if (v == TableVariant::Original) {
    core = {"U---", "UA--", "UAC-", "UACI"};
  } else {
    core = {"U---", "U--I", "U-C-", "U-CI", "UA--", "UA-I", "UAC-", "UACI"};
  }
  std::vector<std::string> ids;
  for (const auto& c : core) ids.push_back("boom:" + c);
  if (v == TableVariant::Full)
    for (const auto& c : core) ids.push_back("boom:-" + c.substr(1));
  return ids;
}

namespace {

std::vector<std::string> cell_items(const NoGoVerdict& v) {
  std::vector<std::string> items;
  if (v.status == NoGoVerdict::Status::NoDistLaw)
    for (TheoremId t : v.theorem_ids()) items.push_back(to_string(t));
  if (v.status != NoGoVerdict::Status::Unknown)
    for (const auto& c : v.citations) items.push_back(c);
  return items;
}

}  // namespace

std::string cell_code(const NoGoVerdict& v) {
  if (v.status == NoGoVerdict::Status::Unknown) return "?";
  std::string s = v.status == NoGoVerdict::Status::NoDistLaw ? "N:" : "Y:";
  auto items = cell_items(v);
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "+" : "") + items[i];
  return s;
}

std::string VerdictTable::code(std::size_t row, std::size_t column) const { return cell_code(at(row, column)); }

std::vector<std::string> VerdictTable::footnotes() const {
  std::vector<std::string> notes;
  for (const auto& row : cells)
    for (const auto& v : row)
      for (const auto& item : cell_items(v))
        if (std::find(notes.begin(), notes.end(), item) == notes.end()) notes.push_back(item);
  return notes;
}

std::string VerdictTable::markdown() const {
  auto notes = footnotes();
  auto number = [&](const std::string& item) {
    return std::to_string(std::find(notes.begin(), notes.end(), item) - notes.begin() + 1);
  };
  std::ostringstream os;
  os << "|   |";
  for (const auto& l : labels) os << " " << l << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < labels.size(); ++i) os << "---|";
  os << "\n";
  bool any_citation_only = false;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    os << "| " << labels[r] << " |";
    for (const auto& v : cells[r]) {
      os << " ";
      if (v.status != NoGoVerdict::Status::Unknown) {
        os << (v.status == NoGoVerdict::Status::NoDistLaw ? "N" : "Y");
        auto items = cell_items(v);
        os << "<sup>";
        for (std::size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << number(items[i]);
        os << "</sup>";
        if (v.citation_only) {
          os << "*";
          any_citation_only = true;
        }
      }
      os << " |";
    }
    os << "\n";
  }
  os << "\n";
  for (std::size_t i = 0; i < notes.size(); ++i) os << (i + 1) << ". " << notes[i] << "\n";
  if (any_citation_only) os << "\n\\* citation only: no implemented law backs this cell.\n";
  std::set<std::string> laws;
  for (const auto& row : cells)
    for (const auto& v : row)
      if (!v.law.empty()) laws.insert(v.law + (v.beck_ok && *v.beck_ok ? "" : " (Beck check failed)"));
  if (!laws.empty()) {
    os << "\nImplemented laws re-verified by check_beck (|X| = |Y| = 2, bound 3):";
    for (const auto& l : laws) os << " " << l;
    os << "\n";
  }
  return os.str();
}

std::string VerdictTable::csv() const {
  std::ostringstream os;
  os << "# variant: " << to_string(variant) << "\n";
  for (const auto& l : labels) os << "," << l;
  os << "\n";
  for (std::size_t r = 0; r < cells.size(); ++r) {
    os << labels[r];
    for (std::size_t c = 0; c < cells[r].size(); ++c) os << "," << code(r, c);
    os << "\n";
  }
  return os.str();
}

VerdictTable build_table(TableVariant v, const Bounds& b) {
  VerdictTable t;
  t.variant = v;
  t.ids = table_theories(v);
  for (const auto& id : t.ids) t.labels.push_back(get_theory(id).label);
  for (const auto& r : t.ids) {
    std::vector<NoGoVerdict> row;
    for (const auto& c : t.ids) row.push_back(verdict(get_theory(r), get_theory(c), b));
    t.cells.push_back(std::move(row));
  }
  return t;
}

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, z = s.size();
  while (a < z && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (z > a && std::isspace(static_cast<unsigned char>(s[z - 1]))) --z;
  return std::string(s.substr(a, z - a));
}

std::vector<std::string> split_csv(const std::string& line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw GoldenFormatError("line " + std::to_string(line_no) + ": unterminated quote");
  out.push_back(trim(field));
  return out;
}

// Status plus the set of footnote items, independent of their order.
std::pair<std::string, std::set<std::string>> content(const std::string& code) {
  auto colon = code.find(':');
  if (colon == std::string::npos) return {code, {}};
  std::set<std::string> items;
  std::string rest = code.substr(colon + 1);
  std::size_t start = 0;
  while (true) {
    auto plus = rest.find('+', start);
    items.insert(trim(std::string_view(rest).substr(start, plus == std::string::npos ? std::string::npos : plus - start)));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return {code.substr(0, colon), items};
}

}  // namespace

std::vector<CellMismatch> diff_table(const VerdictTable& computed, std::string_view golden) {
  std::istringstream in{std::string(golden)};
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::optional<std::string> variant;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line[0] == '#') {
      std::string body = trim(std::string_view(line).substr(1));
      if (!variant && body.rfind("variant:", 0) == 0) variant = trim(std::string_view(body).substr(8));
      continue;
    }
    rows.push_back(split_csv(line, line_no));
  }
  if (!variant) throw GoldenFormatError("missing '# variant: <name>' header");
  if (!parse_variant(*variant)) throw GoldenFormatError("unknown variant '" + *variant + "'");
  if (*variant != to_string(computed.variant))
    throw GoldenDimensionError("golden table is for variant " + *variant + ", computed table is " +
                               to_string(computed.variant));
  if (rows.empty()) throw GoldenFormatError("no header row");
  const auto& header = rows.front();
  std::size_t n = computed.labels.size();
  if (header.size() != n + 1 || rows.size() != n + 1)
    throw GoldenDimensionError("golden table is " + std::to_string(rows.size() - 1) + "x" +
                               std::to_string(header.size() - 1) + ", computed table is " + std::to_string(n) + "x" +
                               std::to_string(n));
  for (std::size_t c = 0; c < n; ++c)
    if (header[c + 1] != computed.labels[c])
      throw GoldenDimensionError("column " + std::to_string(c + 1) + " is " + header[c + 1] + ", expected " +
                                 computed.labels[c]);
  std::vector<CellMismatch> out;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& row = rows[r + 1];
    if (row.size() != n + 1)
      throw GoldenFormatError("row " + row.front() + " has " + std::to_string(row.size() - 1) + " cells, expected " +
                              std::to_string(n));
    if (row.front() != computed.labels[r])
      throw GoldenDimensionError("row " + std::to_string(r + 1) + " is " + row.front() + ", expected " +
                                 computed.labels[r]);
    for (std::size_t c = 0; c < n; ++c) {
      std::string expected = row[c + 1].empty() ? "?" : row[c + 1];
      std::string got = computed.code(r, c);
      if (content(expected) != content(got)) out.push_back({computed.labels[r], computed.labels[c], expected, got});
    }
  }
  return out;
}

std::vector<CellMismatch> diff_table_file(const VerdictTable& computed, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw GoldenFormatError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return diff_table(computed, ss.str());
}

}  // namespace wb
