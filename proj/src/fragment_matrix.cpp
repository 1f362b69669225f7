#include "haplomin/fragment_matrix.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace haplomin {

FragmentMatrix::FragmentMatrix(int rows, int cols,
                               const std::vector<Entry>& entries)
    : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("matrix dimensions must be positive");
  }
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= rows) {
      throw std::invalid_argument("entry row out of range");
    }
    if (e.col < 0 || e.col >= cols) {
      throw std::invalid_argument("entry column out of range");
    }
    if (e.value != 1 && e.value != -1) {
      throw std::invalid_argument("entry value must be +1 or -1");
    }
  }

  std::vector<Entry> sorted = entries;
  std::sort(sorted.begin(), sorted.end(), [](const Entry& a, const Entry& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  for (std::size_t k = 1; k < sorted.size(); ++k) {
    if (sorted[k].col == sorted[k - 1].col && sorted[k].row == sorted[k - 1].row) {
      throw std::invalid_argument(
          "duplicate observation for read " + std::to_string(sorted[k].col + 1) +
          " at SNP " + std::to_string(sorted[k].row + 1));
    }
  }

  by_col_.reserve(sorted.size());
  col_offsets_.assign(static_cast<std::size_t>(cols) + 1, 0);
  for (const auto& e : sorted) {
    col_offsets_[static_cast<std::size_t>(e.col) + 1]++;
    by_col_.push_back({e.row, e.value});
  }
  for (int j = 0; j < cols; ++j) col_offsets_[j + 1] += col_offsets_[j];

  // Counting pass over the column-sorted entries keeps each row span ordered
  // by read index.
  row_offsets_.assign(static_cast<std::size_t>(rows) + 1, 0);
  for (const auto& e : sorted) row_offsets_[static_cast<std::size_t>(e.row) + 1]++;
  for (int i = 0; i < rows; ++i) row_offsets_[i + 1] += row_offsets_[i];
  by_row_.resize(sorted.size());
  std::vector<std::size_t> cursor(row_offsets_.begin(), row_offsets_.end() - 1);
  for (const auto& e : sorted) {
    by_row_[cursor[e.row]++] = {e.col, e.value};
  }
}

std::vector<double> matvec(const FragmentMatrix& F, const std::vector<double>& y) {
  if (y.size() != static_cast<std::size_t>(F.cols())) {
    throw std::invalid_argument("matvec: vector length must equal column count");
  }
  std::vector<double> x(F.rows(), 0.0);
  for (int i = 0; i < F.rows(); ++i) {
    double s = 0.0;
    for (const auto& obs : F.row(i)) s += obs.value * y[obs.index];
    x[i] = s;
  }
  return x;
}

std::vector<double> matvec_transpose(const FragmentMatrix& F,
                                    const std::vector<double>& x) {
  if (x.size() != static_cast<std::size_t>(F.rows())) {
    throw std::invalid_argument(
        "matvec_transpose: vector length must equal row count");
  }
  std::vector<double> y(F.cols(), 0.0);
  for (int j = 0; j < F.cols(); ++j) {
    double s = 0.0;
    for (const auto& obs : F.column(j)) s += obs.value * x[obs.index];
    y[j] = s;
  }
  return y;
}

double column_dot(const FragmentMatrix& F, int j, const std::vector<double>& u) {
  if (j < 0 || j >= F.cols()) {
    throw std::invalid_argument("column_dot: column index out of range");
  }
  if (u.size() != static_cast<std::size_t>(F.rows())) {
    throw std::invalid_argument("column_dot: vector length must equal row count");
  }
  double s = 0.0;
  for (const auto& obs : F.column(j)) s += obs.value * u[obs.index];
  return s;
}

double row_dot(const FragmentMatrix& F, int i, const std::vector<double>& v) {
  if (i < 0 || i >= F.rows()) {
    throw std::invalid_argument("row_dot: row index out of range");
  }
  if (v.size() != static_cast<std::size_t>(F.cols())) {
    throw std::invalid_argument("row_dot: vector length must equal column count");
  }
  double s = 0.0;
  for (const auto& obs : F.row(i)) s += obs.value * v[obs.index];
  return s;
}

namespace {

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

long parse_long(const std::string& token, int line_no, const char* what) {
  std::size_t pos = 0;
  long value = 0;
  try {
    value = std::stol(token, &pos);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " + what +
                     ", got '" + token + "'");
  }
  if (pos != token.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " + what +
                     ", got '" + token + "'");
  }
  return value;
}

}  // namespace

ParsedFragments parse_fragments(std::istream& in) {
  std::string line;
  int line_no = 0;
  long m = -1, n = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream hs(line);
    std::vector<std::string> toks;
    std::string t;
    while (hs >> t) toks.push_back(t);
    if (toks.size() != 2) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": header must be 'm n'");
    }
    m = parse_long(toks[0], line_no, "SNP count");
    n = parse_long(toks[1], line_no, "read count");
    if (m < 1 || n < 1) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": header counts must be positive");
    }
    break;
  }
  if (m < 0) throw ParseError("missing header line");

  std::vector<Entry> entries;
  std::vector<long> coverage(static_cast<std::size_t>(n), 0);
  std::vector<bool> mentioned(static_cast<std::size_t>(n), false);

  while (std::getline(in, line)) {
    ++line_no;
    if (is_comment_or_blank(line)) continue;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.size() % 2 != 1) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected read index followed by (SNP, allele) pairs");
    }

    long j = parse_long(toks[0], line_no, "read index");
    if (j < 1 || j > n) {
      throw ParseError("line " + std::to_string(line_no) + ": read index " +
                       std::to_string(j) + " outside [1, " + std::to_string(n) +
                       "]");
    }
    mentioned[j - 1] = true;

    long prev_i = 0;
    for (std::size_t k = 1; k < toks.size(); k += 2) {
      long i = parse_long(toks[k], line_no, "SNP index");
      long a = parse_long(toks[k + 1], line_no, "allele");
      if (i < 1 || i > m) {
        throw ParseError("line " + std::to_string(line_no) + ": SNP index " +
                         std::to_string(i) + " outside [1, " + std::to_string(m) +
                         "]");
      }
      if (i <= prev_i) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": SNP indices must be strictly increasing");
      }
      if (a != 0 && a != 1) {
        throw ParseError("line " + std::to_string(line_no) + ": allele " +
                         std::to_string(a) + " outside {0,1}");
      }
      prev_i = i;
      entries.push_back({static_cast<std::int32_t>(i - 1),
                         static_cast<std::int32_t>(j - 1),
                         static_cast<std::int8_t>(a == 0 ? 1 : -1)});
      coverage[j - 1]++;
    }
  }

  ParsedFragments out{
      [&] {
        try {
          return FragmentMatrix(static_cast<int>(m), static_cast<int>(n),
                                entries);
        } catch (const std::invalid_argument& e) {
          throw ParseError(e.what());
        }
      }(),
      {}};
  for (long j = 0; j < n; ++j) {
    if (mentioned[j] && coverage[j] <= 1) {
      out.short_reads.push_back(static_cast<std::int32_t>(j + 1));
    }
  }
  return out;
}

ParsedFragments parse_fragments_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fragment file: " + path);
  return parse_fragments(in);
}

void serialize_fragments(const FragmentMatrix& F, std::ostream& out) {
  out << F.rows() << ' ' << F.cols() << '\n';
  for (int j = 0; j < F.cols(); ++j) {
    auto col = F.column(j);
    if (col.empty()) continue;
    out << (j + 1);
    for (const auto& obs : col) {
      out << ' ' << (obs.index + 1) << ' ' << (obs.value > 0 ? 0 : 1);
    }
    out << '\n';
  }
}

void write_fragments_file(const std::string& path, const FragmentMatrix& F) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  serialize_fragments(F, out);
}

}  // namespace haplomin
