#include "veccomp/field_function.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace veccomp {

namespace {

// 17 significant digits: enough to round-trip any double exactly.
std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  throw std::runtime_error("function table line " + std::to_string(line) + ": " + what);
}

}  // namespace

void write_function_table(std::ostream& os, const FunctionTable<double>& table) {
  os << "# function table: K Q_1..Q_K L, then rows 's_1 .. s_K | f_1 .. f_L'\n";
  os << table.K;
  for (int q : table.Q) os << ' ' << q;
  os << ' ' << table.L << '\n';
  for (int i = 0; i < table.rows(); ++i) {
    for (int k = 0; k < table.K; ++k) {
      if (k) os << ' ';
      os << table.inputs(i, k);
    }
    os << " |";
    for (int l = 0; l < table.L; ++l) os << ' ' << format_value(table.values(i, l));
    os << '\n';
  }
}

FunctionTable<double> read_function_table(std::istream& is) {
  std::string line;
  int line_no = 0;

  auto next_content_line = [&](std::string& out) {
    while (std::getline(is, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      bool blank = true;
      for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
      if (blank) continue;
      out = line;
      return true;
    }
    return false;
  };

  std::string header;
  if (!next_content_line(header)) throw std::runtime_error("function table: empty input");
  std::istringstream hs(header);
  int K = 0;
  if (!(hs >> K) || K < 1) parse_fail(line_no, "expected node count K >= 1");
  std::vector<int> tail;
  for (int v = 0; hs >> v;) tail.push_back(v);
  if (int(tail.size()) != K + 1)
    parse_fail(line_no, "expected K alphabet sizes followed by L");
  const int L = tail.back();
  tail.pop_back();
  if (L < 1) parse_fail(line_no, "expected output count L >= 1");
  for (int q : tail)
    if (q < 2) parse_fail(line_no, "alphabet sizes must be >= 2");

  std::int64_t m = 1;
  for (int q : tail) m *= q;

  FunctionTable<double> table;
  table.K = K;
  table.Q = tail;
  table.L = L;
  table.inputs.resize(Eigen::Index(m), K);
  table.values.resize(Eigen::Index(m), L);

  for (std::int64_t row = 0; row < m; ++row) {
    std::string content;
    if (!next_content_line(content))
      throw std::runtime_error("function table: expected " + std::to_string(m) +
                               " rows, got " + std::to_string(row));
    const auto bar = content.find('|');
    if (bar == std::string::npos) parse_fail(line_no, "expected 'inputs | outputs'");
    std::istringstream in(content.substr(0, bar));
    std::istringstream out(content.substr(bar + 1));
    for (int k = 0; k < K; ++k) {
      int s = 0;
      if (!(in >> s)) parse_fail(line_no, "expected " + std::to_string(K) + " input values");
      if (s < 0 || s >= table.Q[size_t(k)])
        parse_fail(line_no, "input value " + std::to_string(s) + " outside its alphabet");
      table.inputs(Eigen::Index(row), k) = s;
    }
    int extra = 0;
    if (in >> extra) parse_fail(line_no, "too many input values");
    for (int l = 0; l < L; ++l) {
      double v = 0;
      if (!(out >> v)) parse_fail(line_no, "expected " + std::to_string(L) + " output values");
      if (!std::isfinite(v)) parse_fail(line_no, "non-finite output value");
      table.values(Eigen::Index(row), l) = v;
    }
    double extra_out = 0;
    if (out >> extra_out) parse_fail(line_no, "too many output values");
  }

  // Verify the canonical enumeration order instead of silently re-sorting:
  // every consumer depends on it.
  std::int64_t row_check = 0;
  bool ok = true;
  for_each_input(table.Q, [&](std::int64_t row, const std::vector<int>& tuple) {
    for (int k = 0; k < K; ++k)
      if (table.inputs(Eigen::Index(row), k) != tuple[size_t(k)]) ok = false;
    ++row_check;
  });
  if (!ok || row_check != m)
    throw std::runtime_error(
        "function table: rows are not in canonical order (node 1 most significant, "
        "last node fastest)");
  return table;
}

FunctionTable<double> read_function_table_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open function table file: " + path);
  return read_function_table(is);
}

void write_function_table_file(const std::string& path, const FunctionTable<double>& table) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write function table file: " + path);
  write_function_table(os, table);
}

}  // namespace veccomp
