// Copyright 2026 The ucpdlp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ucpdlp/mps.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

namespace ucpdlp::model {

namespace {

constexpr std::size_t kMaxLineLength = 255;
constexpr double kMpsInfinity = 1e30;

enum class Section { kStart, kName, kObjSense, kRows, kColumns, kRhs, kBounds,
                     kEnd };

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

double parse_number(std::string_view field, int line) {
  double value = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw MpsParseError(line, fmt::format("invalid number '{}'", field));
  }
  if (value >= kMpsInfinity) return kInfinity;
  if (value <= -kMpsInfinity) return -kInfinity;
  return value;
}

std::string format_number(double value) {
  if (value == kInfinity) return "1e+30";
  if (value == -kInfinity) return "-1e+30";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

struct ParsedRow {
  std::string name;
  Relation relation = Relation::kGreaterEqual;
};

struct Reader {
  GeneralLp lp;
  Section section = Section::kStart;
  int line_no = 0;

  std::string objective_name;
  std::unordered_map<std::string, Index> row_index;  // -1 for objective
  std::vector<ParsedRow> rows;
  std::unordered_map<std::string, Index> col_index;
  std::vector<std::string> col_names;
  std::vector<bool> col_binary;
  bool in_integer_block = false;
  std::vector<sparse::Triplet> triplets;
  std::vector<double> costs;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;
  double constant = 0.0;

  [[noreturn]] void fail(const std::string& message) const {
    throw MpsParseError(line_no, message);
  }

  void enter(Section next, std::string_view name) {
    if (static_cast<int>(next) <= static_cast<int>(section)) {
      fail(fmt::format("section {} out of order", name));
    }
    if (next >= Section::kColumns && section < Section::kRows) {
      fail(fmt::format("section {} before ROWS", name));
    }
    if (next > Section::kColumns && section < Section::kColumns &&
        next != Section::kEnd) {
      fail(fmt::format("section {} before COLUMNS", name));
    }
    section = next;
  }

  Index find_row(std::string_view name) const {
    auto it = row_index.find(std::string(name));
    if (it == row_index.end()) fail(fmt::format("unknown row '{}'", name));
    return it->second;
  }

  Index find_col(std::string_view name) const {
    auto it = col_index.find(std::string(name));
    if (it == col_index.end()) fail(fmt::format("unknown column '{}'", name));
    return it->second;
  }

  void header(std::string_view line) {
    const auto fields = split_fields(line);
    const std::string_view key = fields.front();
    if (key == "NAME") {
      if (section != Section::kStart) fail("NAME must be the first section");
      section = Section::kName;
      if (fields.size() > 1) lp.name = std::string(fields[1]);
    } else if (key == "OBJSENSE") {
      enter(Section::kObjSense, key);
      if (fields.size() > 1) objsense(fields[1]);
    } else if (key == "ROWS") {
      if (section == Section::kStart) fail("missing NAME section");
      enter(Section::kRows, key);
    } else if (key == "COLUMNS") {
      enter(Section::kColumns, key);
    } else if (key == "RHS") {
      enter(Section::kRhs, key);
    } else if (key == "BOUNDS") {
      enter(Section::kBounds, key);
    } else if (key == "ENDATA") {
      if (section < Section::kColumns) fail("ENDATA before COLUMNS");
      section = Section::kEnd;
    } else {
      fail(fmt::format("unknown section '{}'", key));
    }
  }

  void objsense(std::string_view word) {
    if (word == "MAX" || word == "MAXIMIZE") {
      lp.sense = Sense::kMaximize;
    } else if (word == "MIN" || word == "MINIMIZE") {
      lp.sense = Sense::kMinimize;
    } else {
      fail(fmt::format("unknown objective sense '{}'", word));
    }
  }

  void data(std::string_view line) {
    const auto fields = split_fields(line);
    switch (section) {
      case Section::kStart:
      case Section::kName:
        fail("data line outside of a section");
      case Section::kObjSense:
        if (fields.size() != 1) fail("malformed OBJSENSE line");
        objsense(fields[0]);
        break;
      case Section::kRows:
        row_line(fields);
        break;
      case Section::kColumns:
        column_line(fields);
        break;
      case Section::kRhs:
        rhs_line(fields);
        break;
      case Section::kBounds:
        bound_line(fields);
        break;
      case Section::kEnd:
        fail("data after ENDATA");
    }
  }

  void row_line(const std::vector<std::string_view>& f) {
    if (f.size() != 2) fail("ROWS line needs a type and a name");
    const std::string name(f[1]);
    if (row_index.contains(name)) fail(fmt::format("duplicate row '{}'", name));
    if (f[0] == "N") {
      if (objective_name.empty()) {
        objective_name = name;
        row_index[name] = -1;
      } else {
        row_index[name] = -2;  // extra free rows are ignored
      }
      return;
    }
    Relation rel;
    if (f[0] == "L") {
      rel = Relation::kLessEqual;
    } else if (f[0] == "G") {
      rel = Relation::kGreaterEqual;
    } else if (f[0] == "E") {
      rel = Relation::kEqual;
    } else {
      fail(fmt::format("unknown row type '{}'", f[0]));
    }
    row_index[name] = static_cast<Index>(rows.size());
    rows.push_back({name, rel});
  }

  void column_line(const std::vector<std::string_view>& f) {
    if (f.size() == 3 && f[1] == "'MARKER'") {
      if (f[2] == "'INTORG'") {
        in_integer_block = true;
      } else if (f[2] == "'INTEND'") {
        in_integer_block = false;
      } else {
        fail(fmt::format("unknown marker {}", f[2]));
      }
      return;
    }
    if (f.size() != 3 && f.size() != 5) fail("malformed COLUMNS line");
    const std::string name(f[0]);
    auto it = col_index.find(name);
    Index col;
    if (it == col_index.end()) {
      col = static_cast<Index>(col_names.size());
      col_index.emplace(name, col);
      col_names.push_back(name);
      col_binary.push_back(in_integer_block);
      costs.push_back(0.0);
    } else {
      col = it->second;
    }
    for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
      const Index row = find_row(f[k]);
      const double value = parse_number(f[k + 1], line_no);
      if (!std::isfinite(value)) fail("infinite coefficient");
      if (row == -1) {
        costs[col] += value;
      } else if (row >= 0) {
        triplets.push_back({row, col, value});
      }
    }
  }

  void rhs_line(const std::vector<std::string_view>& f) {
    if (f.size() != 3 && f.size() != 5) fail("malformed RHS line");
    for (std::size_t k = 1; k + 1 < f.size(); k += 2) {
      const Index row = find_row(f[k]);
      const double value = parse_number(f[k + 1], line_no);
      if (row == -1) {
        constant = -value;
      } else if (row >= 0) {
        rhs[row] = value;
      }
    }
  }

  void bound_line(const std::vector<std::string_view>& f) {
    if (f.size() < 3) fail("malformed BOUNDS line");
    const std::string_view type = f[0];
    const Index col = find_col(f[2]);
    const bool needs_value = type == "LO" || type == "UP" || type == "FX";
    if (needs_value && f.size() != 4) fail("bound needs a value");
    if (type == "LO") {
      lower[col] = parse_number(f[3], line_no);
    } else if (type == "UP") {
      upper[col] = parse_number(f[3], line_no);
    } else if (type == "FX") {
      lower[col] = upper[col] = parse_number(f[3], line_no);
    } else if (type == "BV") {
      col_binary[col] = true;
      lower[col] = 0.0;
      upper[col] = 1.0;
    } else if (type == "FR") {
      lower[col] = -kInfinity;
      upper[col] = kInfinity;
    } else if (type == "MI") {
      lower[col] = -kInfinity;
    } else {
      fail(fmt::format("unsupported bound type '{}'", type));
    }
  }

  // Default bounds are assigned once COLUMNS is complete.
  void finish_columns() {
    const std::size_t n = col_names.size();
    lower.assign(n, 0.0);
    upper.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      upper[j] = col_binary[j] ? 1.0 : kInfinity;
    }
    rhs.assign(rows.size(), 0.0);
  }

  GeneralLp finish() {
    const Index m = static_cast<Index>(rows.size());
    const Index n = static_cast<Index>(col_names.size());
    lp.costs = std::move(costs);
    lp.constant = constant;
    lp.matrix = CsrMatrix::from_triplets(m, n, triplets);
    lp.rhs = std::move(rhs);
    lp.lower = std::move(lower);
    lp.upper = std::move(upper);
    lp.var_types.resize(n);
    for (Index j = 0; j < n; ++j) {
      lp.var_types[j] = col_binary[j] ? VarType::kBinary : VarType::kContinuous;
    }
    lp.var_names = std::move(col_names);
    for (ParsedRow& r : rows) {
      lp.relations.push_back(r.relation);
      lp.row_names.push_back(std::move(r.name));
    }
    try {
      lp.validate();
    } catch (const std::invalid_argument& e) {
      throw MpsParseError(line_no, e.what());
    }
    return std::move(lp);
  }
};

void check_name(const std::string& name) {
  if (name.empty() || name.find_first_of(" \t\n\r") != std::string::npos) {
    throw std::invalid_argument(
        fmt::format("write_mps: name '{}' is empty or contains blanks", name));
  }
}

// Appends fields starting at the fixed-format columns 2, 5, 15, 25, 40, 50
// (1-based). A field that overruns its slot is followed by one blank.
void fixed_line(std::string& out, std::initializer_list<std::string_view> f) {
  static constexpr std::size_t kStarts[] = {1, 4, 14, 24, 39, 49};
  std::string line;
  std::size_t slot = 0;
  for (std::string_view field : f) {
    if (!field.empty()) {
      const std::size_t want = kStarts[slot];
      if (line.size() < want) {
        line.append(want - line.size(), ' ');
      } else if (!line.empty()) {
        line.push_back(' ');
      }
      line.append(field);
    }
    ++slot;
  }
  out.append(line);
  out.push_back('\n');
}

}  // namespace

MpsParseError::MpsParseError(int line, const std::string& message)
    : std::runtime_error(fmt::format("MPS line {}: {}", line, message)),
      line_(line) {}

GeneralLp read_mps(std::string_view text) {
  Reader reader;
  std::size_t pos = 0;
  while (pos <= text.size() && reader.section != Section::kEnd) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++reader.line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.size() > kMaxLineLength) {
      reader.fail(fmt::format("line longer than {} characters",
                              kMaxLineLength));
    }
    if (line.empty() || line.front() == '*') continue;
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line.front() != ' ' && line.front() != '\t') {
      const Section before = reader.section;
      reader.header(line);
      if (before == Section::kColumns && reader.section != Section::kColumns) {
        reader.finish_columns();
      }
    } else {
      reader.data(line);
    }
    if (pos > text.size()) break;
  }
  if (reader.section != Section::kEnd) {
    reader.fail("missing ENDATA");
  }
  return reader.finish();
}

std::string write_mps(const GeneralLp& lp) {
  lp.validate();
  if (!lp.name.empty()) check_name(lp.name);
  const Index n = lp.num_vars();
  const Index m = lp.num_rows();
  std::vector<std::string> cols(n);
  std::vector<std::string> rows(m);
  for (Index j = 0; j < n; ++j) {
    cols[j] = lp.var_names.empty() ? fmt::format("C{:07d}", j) : lp.var_names[j];
    check_name(cols[j]);
  }
  for (Index i = 0; i < m; ++i) {
    rows[i] = lp.row_names.empty() ? fmt::format("R{:07d}", i) : lp.row_names[i];
    check_name(rows[i]);
  }
  std::string objective = "COST";
  for (int suffix = 0;
       std::find(rows.begin(), rows.end(), objective) != rows.end(); ++suffix) {
    objective = fmt::format("COST{}", suffix);
  }

  // Column-wise view of the matrix.
  std::vector<std::vector<std::pair<Index, double>>> by_col(n);
  for (Index i = 0; i < m; ++i) {
    const auto rc = lp.matrix.row_cols(i);
    const auto rv = lp.matrix.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      by_col[rc[k]].emplace_back(i, rv[k]);
    }
  }

  std::string out;
  out += fmt::format("NAME          {}\n", lp.name.empty() ? "UNNAMED" : lp.name);
  if (lp.sense == Sense::kMaximize) out += "OBJSENSE\n    MAX\n";
  out += "ROWS\n";
  fixed_line(out, {"N", objective});
  for (Index i = 0; i < m; ++i) {
    const char* type = lp.relations[i] == Relation::kLessEqual  ? "L"
                       : lp.relations[i] == Relation::kEqual    ? "E"
                                                                : "G";
    fixed_line(out, {type, rows[i]});
  }
  out += "COLUMNS\n";
  bool in_block = false;
  for (Index j = 0; j < n; ++j) {
    const bool binary = lp.var_types[j] == VarType::kBinary;
    if (binary != in_block) {
      fixed_line(out, {"", "MARKER", "'MARKER'", "", binary ? "'INTORG'"
                                                            : "'INTEND'"});
      in_block = binary;
    }
    bool wrote = false;
    if (lp.costs[j] != 0.0) {
      fixed_line(out, {"", cols[j], objective, format_number(lp.costs[j])});
      wrote = true;
    }
    for (const auto& [row, value] : by_col[j]) {
      fixed_line(out, {"", cols[j], rows[row], format_number(value)});
      wrote = true;
    }
    if (!wrote) {
      // Keep the column declared even when it has no entries.
      fixed_line(out, {"", cols[j], objective, "0"});
    }
  }
  if (in_block) {
    fixed_line(out, {"", "MARKER", "'MARKER'", "", "'INTEND'"});
  }
  out += "RHS\n";
  if (lp.constant != 0.0) {
    fixed_line(out, {"", "RHS", objective, format_number(-lp.constant)});
  }
  for (Index i = 0; i < m; ++i) {
    if (lp.rhs[i] != 0.0) {
      fixed_line(out, {"", "RHS", rows[i], format_number(lp.rhs[i])});
    }
  }
  out += "BOUNDS\n";
  for (Index j = 0; j < n; ++j) {
    const double l = lp.lower[j];
    const double u = lp.upper[j];
    if (lp.var_types[j] == VarType::kBinary) {
      if (l == 0.0 && u == 1.0) {
        fixed_line(out, {"BV", "BND", cols[j]});
      } else {
        fixed_line(out, {"LO", "BND", cols[j], format_number(l)});
        fixed_line(out, {"UP", "BND", cols[j], format_number(u)});
      }
      continue;
    }
    if (l == -kInfinity && u == kInfinity) {
      fixed_line(out, {"FR", "BND", cols[j]});
      continue;
    }
    if (l == -kInfinity) {
      fixed_line(out, {"MI", "BND", cols[j]});
    } else if (l != 0.0) {
      fixed_line(out, {"LO", "BND", cols[j], format_number(l)});
    }
    if (u != kInfinity) {
      fixed_line(out, {"UP", "BND", cols[j], format_number(u)});
    }
  }
  out += "ENDATA\n";
  return out;
}

GeneralLp read_mps_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_mps(buffer.str());
}

void write_mps_file(const GeneralLp& lp, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  out << write_mps(lp);
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

}  // namespace ucpdlp::model
