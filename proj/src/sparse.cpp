#include "pabcd/sparse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace pabcd {

namespace {

std::vector<index_t> count_row_nnz(index_t rows,
                                   const std::vector<index_t>& row_idx) {
  std::vector<index_t> counts(static_cast<std::size_t>(rows), 0);
  for (index_t r : row_idx) counts[static_cast<std::size_t>(r)]++;
  return counts;
}

}  // namespace

SparseMatrix SparseMatrix::from_triplets(index_t rows, index_t cols,
                                         std::vector<index_t> ti,
                                         std::vector<index_t> tj,
                                         std::vector<double> tv) {
  const std::size_t n = tv.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (tj[a] != tj[b]) return tj[a] < tj[b];
    return ti[a] < ti[b];
  });

  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.col_ptr.assign(static_cast<std::size_t>(cols) + 1, 0);
  m.row_idx.reserve(n);
  m.values.reserve(n);
  index_t last_col = -1;
  for (std::size_t k : order) {
    if (!m.row_idx.empty() && tj[k] == last_col && ti[k] == m.row_idx.back()) {
      m.values.back() += tv[k];  // duplicate coordinate: sum
      continue;
    }
    m.row_idx.push_back(ti[k]);
    m.values.push_back(tv[k]);
    last_col = tj[k];
    m.col_ptr[static_cast<std::size_t>(tj[k]) + 1]++;
  }
  for (index_t j = 0; j < cols; ++j) m.col_ptr[j + 1] += m.col_ptr[j];
  m.row_nnz = count_row_nnz(rows, m.row_idx);
  return m;
}

index_t max_row_nnz(const SparseMatrix& a) {
  index_t best = 0;
  for (index_t c : a.row_nnz) best = std::max(best, c);
  return best;
}

namespace {

// One libsvm line: label then idx:val pairs. Indices are 1-based and must be
// strictly increasing within the line.
void parse_libsvm_line(const std::string& line, index_t line_no, double& label,
                       std::vector<index_t>& idx, std::vector<double>& val) {
  idx.clear();
  val.clear();
  const char* p = line.data();
  const char* end = p + line.size();
  auto skip_ws = [&] {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  };
  auto fail = [&](const std::string& what) -> void {
    throw ParseError("libsvm parse error at line " + std::to_string(line_no) +
                     ": " + what);
  };

  skip_ws();
  auto [lp, lec] = std::from_chars(p, end, label);
  if (lec != std::errc{}) fail("expected numeric label");
  p = lp;

  index_t prev = 0;
  while (true) {
    skip_ws();
    if (p >= end || *p == '#') break;
    long long raw = 0;
    auto [ip, iec] = std::from_chars(p, end, raw);
    if (iec != std::errc{} || ip >= end || *ip != ':') fail("expected idx:val pair");
    if (raw < 1) fail("feature index must be >= 1");
    if (raw <= prev)
      fail("feature indices must be strictly increasing (got " +
           std::to_string(raw) + " after " + std::to_string(prev) + ")");
    prev = raw;
    p = ip + 1;
    double v = 0.0;
    auto [vp, vec] = std::from_chars(p, end, v);
    if (vec != std::errc{}) fail("expected numeric value");
    p = vp;
    idx.push_back(static_cast<index_t>(raw) - 1);  // to 0-based
    val.push_back(v);
  }
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

LibsvmData load_libsvm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);

  // First pass collects per-row (sample) entries; transposition to CSC
  // happens once the column count is known.
  std::vector<double> labels;
  std::vector<std::vector<index_t>> row_cols;
  std::vector<std::vector<double>> row_vals;
  index_t max_col = 0;

  std::string line;
  std::vector<index_t> idx;
  std::vector<double> val;
  index_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    double label = 0.0;
    parse_libsvm_line(line, line_no, label, idx, val);
    labels.push_back(label);
    if (!idx.empty()) max_col = std::max(max_col, idx.back() + 1);
    row_cols.push_back(idx);
    row_vals.push_back(val);
  }
  if (labels.empty()) throw ParseError("libsvm file has no samples: " + path);

  const index_t rows = static_cast<index_t>(labels.size());
  const index_t cols = max_col;

  SparseMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.col_ptr.assign(static_cast<std::size_t>(cols) + 1, 0);
  for (const auto& rc : row_cols)
    for (index_t j : rc) m.col_ptr[static_cast<std::size_t>(j) + 1]++;
  for (index_t j = 0; j < cols; ++j) m.col_ptr[j + 1] += m.col_ptr[j];

  const std::size_t nnz = static_cast<std::size_t>(m.col_ptr[cols]);
  m.row_idx.resize(nnz);
  m.values.resize(nnz);
  std::vector<index_t> next(m.col_ptr.begin(), m.col_ptr.end() - 1);
  // Row order ascends in the fill below, so each column comes out with
  // strictly increasing row indices.
  for (index_t r = 0; r < rows; ++r) {
    const auto& rc = row_cols[static_cast<std::size_t>(r)];
    const auto& rv = row_vals[static_cast<std::size_t>(r)];
    for (std::size_t k = 0; k < rc.size(); ++k) {
      const index_t pos = next[static_cast<std::size_t>(rc[k])]++;
      m.row_idx[static_cast<std::size_t>(pos)] = r;
      m.values[static_cast<std::size_t>(pos)] = rv[k];
    }
  }
  m.row_nnz = count_row_nnz(rows, m.row_idx);
  return {std::move(m), std::move(labels)};
}

SparseMatrix load_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);

  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty file: " + path);
  std::istringstream hs(header);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || object != "matrix")
    throw ParseError("not a Matrix Market file: " + path);
  if (format != "coordinate" || field != "real" || symmetry != "general")
    throw UnsupportedFormatError(
        "unsupported Matrix Market header '" + header +
        "' (only 'matrix coordinate real general' is handled)");

  std::string line;
  index_t line_no = 1;
  auto next_data_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!blank(line) && line[0] != '%') return true;
    }
    return false;
  };

  if (!next_data_line()) throw ParseError("missing size line: " + path);
  index_t rows = 0, cols = 0;
  long long entries = 0;
  {
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> entries) || rows <= 0 || cols <= 0 || entries < 0)
      throw ParseError("bad size line at line " + std::to_string(line_no));
  }

  std::vector<index_t> ti, tj;
  std::vector<double> tv;
  ti.reserve(static_cast<std::size_t>(entries));
  tj.reserve(static_cast<std::size_t>(entries));
  tv.reserve(static_cast<std::size_t>(entries));
  for (long long k = 0; k < entries; ++k) {
    if (!next_data_line())
      throw ParseError("expected " + std::to_string(entries) +
                       " entries, file ends after " + std::to_string(k));
    std::istringstream ss(line);
    index_t i = 0, j = 0;
    double v = 0.0;
    if (!(ss >> i >> j >> v))
      throw ParseError("bad entry at line " + std::to_string(line_no));
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw ParseError("entry out of range at line " + std::to_string(line_no));
    ti.push_back(i - 1);
    tj.push_back(j - 1);
    tv.push_back(v);
  }
  return SparseMatrix::from_triplets(rows, cols, std::move(ti), std::move(tj),
                                     std::move(tv));
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows << ' ' << a.cols << ' ' << a.nnz() << '\n';
  char buf[64];
  for (index_t j = 0; j < a.cols; ++j) {
    for (index_t k = a.col_ptr[j]; k < a.col_ptr[j + 1]; ++k) {
      // %.17g keeps doubles exact across the round trip
      std::snprintf(buf, sizeof(buf), "%.17g", a.values[static_cast<std::size_t>(k)]);
      out << (a.row_idx[static_cast<std::size_t>(k)] + 1) << ' ' << (j + 1)
          << ' ' << buf << '\n';
    }
  }
}

}  // namespace pabcd
