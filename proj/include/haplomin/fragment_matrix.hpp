#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace haplomin {

// One observed cell of the read-by-SNP matrix. Values are the ±1 encoding of
// alleles: 0 -> +1, 1 -> -1.
struct Entry {
  std::int32_t row;   // SNP index, 0-based
  std::int32_t col;   // read index, 0-based
  std::int8_t value;  // ±1
};

// A sparse element as seen from a row or column span: `index` is the column id
// when iterating a row, the row id when iterating a column.
struct Obs {
  std::int32_t index;
  std::int8_t value;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable sparse ±1 matrix indexed both ways: per-column spans drive the
// per-read update sums, per-row spans the per-SNP sums. Rows are SNPs, columns
// are reads.
class FragmentMatrix {
 public:
  FragmentMatrix(int rows, int cols, const std::vector<Entry>& entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t nnz() const { return by_col_.size(); }

  // |Omega| / (m*n).
  double sample_probability() const {
    return static_cast<double>(nnz()) /
           (static_cast<double>(rows_) * static_cast<double>(cols_));
  }

  // Observations of read j, ordered by SNP index.
  std::span<const Obs> column(int j) const {
    return {by_col_.data() + col_offsets_[j],
            by_col_.data() + col_offsets_[j + 1]};
  }

  // Observations covering SNP i, ordered by read index.
  std::span<const Obs> row(int i) const {
    return {by_row_.data() + row_offsets_[i],
            by_row_.data() + row_offsets_[i + 1]};
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::size_t> col_offsets_;
  std::vector<std::size_t> row_offsets_;
  std::vector<Obs> by_col_;
  std::vector<Obs> by_row_;
};

// x = P_Omega(R) y, treating unobserved cells as zero.
std::vector<double> matvec(const FragmentMatrix& F, const std::vector<double>& y);

// y = P_Omega(R)^T x.
std::vector<double> matvec_transpose(const FragmentMatrix& F,
                                    const std::vector<double>& x);

// Sum of R_ij * u_i over the observed rows of column j.
double column_dot(const FragmentMatrix& F, int j, const std::vector<double>& u);

// Sum of R_ij * v_j over the observed columns of row i.
double row_dot(const FragmentMatrix& F, int i, const std::vector<double>& v);

struct ParsedFragments {
  FragmentMatrix matrix;
  // 1-based ids of reads that appear in the file with fewer than two sites.
  // They carry no phasing information but are kept in the matrix.
  std::vector<std::int32_t> short_reads;
};

// Text format: first non-comment line is `m n`; each following line is
// `j i1 a1 i2 a2 ...` with 1-based read index j, strictly increasing 1-based
// SNP indices, and alleles in {0,1}. Lines starting with '#' are comments.
ParsedFragments parse_fragments(std::istream& in);
ParsedFragments parse_fragments_file(const std::string& path);

// Canonical writer for the same format: one line per nonempty read, sites in
// increasing SNP order. parse(serialize(F)) reproduces the entry set exactly.
void serialize_fragments(const FragmentMatrix& F, std::ostream& out);
void write_fragments_file(const std::string& path, const FragmentMatrix& F);

}  // namespace haplomin
