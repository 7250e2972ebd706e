#include "bcu/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bcu/error.hpp"

namespace bcu {

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Value> entries)
    : field_(std::move(field)), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("matrix entry count does not match shape");
  }
  for (auto v : data_) {
    if (!field_.contains(v)) throw std::out_of_range("matrix entry outside field");
  }
}

Matrix Matrix::identity(Field field, std::size_t n) {
  Matrix m(std::move(field), n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i * n + i] = 1;
  return m;
}

void Matrix::set(std::size_t i, std::size_t j, Value v) {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index");
  if (!field_.contains(v)) throw std::out_of_range("matrix entry outside field");
  data_[i * cols_ + j] = v;
}

FieldElement Matrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("matrix index");
  return FieldElement(field_, data_[i * cols_ + j]);
}

std::vector<Matrix::Value> Matrix::column(std::size_t j) const {
  std::vector<Value> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = data_[i * cols_ + j];
  return c;
}

Matrix Matrix::with_labels(std::vector<Label> labels) const {
  if (labels.size() != cols_) {
    throw ValidationError("label count " + std::to_string(labels.size()) +
                          " does not match column count " + std::to_string(cols_));
  }
  std::set<Label> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) throw ValidationError("duplicate column label");
  Matrix out = *this;
  out.labels_ = std::move(labels);
  return out;
}

std::size_t Matrix::column_of(const Label& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw ValidationError("unknown column label " + label.str());
  return static_cast<std::size_t>(it - labels_.begin());
}

Matrix Matrix::transpose() const {
  Matrix t(field_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t.data_[j * rows_ + i] = data_[i * cols_ + j];
  }
  return t;
}

Matrix Matrix::select_columns(std::span<const std::size_t> cols) const {
  Matrix out(field_, rows_, cols.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k) {
      out.data_[i * cols.size() + k] = data_[i * cols_ + cols[k]];
    }
  }
  if (!labels_.empty()) {
    out.labels_.reserve(cols.size());
    for (auto c : cols) out.labels_.push_back(labels_[c]);
  }
  return out;
}

std::vector<Matrix::Value> Matrix::multiply(std::span<const Value> x) const {
  if (x.size() != cols_) throw std::invalid_argument("dimension mismatch in matrix-vector product");
  std::vector<Value> y(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i) {
    Value acc = 0;
    for (std::size_t j = 0; j < cols_; ++j) acc ^= field_.mul(data_[i * cols_ + j], x[j]);
    y[i] = acc;
  }
  return y;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) throw FieldMismatch("product across fields");
  if (a.cols() != b.rows()) throw std::invalid_argument("dimension mismatch in matrix product");
  const Field& f = a.field();
  std::vector<Matrix::Value> data(a.rows() * b.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t t = 0; t < a.cols(); ++t) {
      const Matrix::Value s = a(i, t);
      if (s == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) data[i * b.cols() + j] ^= f.mul(s, b(t, j));
    }
  }
  return Matrix(f, a.rows(), b.cols(), std::move(data));
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) throw FieldMismatch("hstack across fields");
  if (a.rows() != b.rows()) throw std::invalid_argument("hstack row mismatch");
  const std::size_t cols = a.cols() + b.cols();
  std::vector<Matrix::Value> data(a.rows() * cols);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i).begin(), a.row(i).end(), data.begin() + i * cols);
    std::copy(b.row(i).begin(), b.row(i).end(), data.begin() + i * cols + a.cols());
  }
  Matrix out(a.field(), a.rows(), cols, std::move(data));
  if (!a.labels().empty() && !b.labels().empty()) {
    std::vector<Label> labels = a.labels();
    labels.insert(labels.end(), b.labels().begin(), b.labels().end());
    out = out.with_labels(std::move(labels));
  }
  return out;
}

namespace {

// In-place reduction of a row-major buffer to reduced row echelon form. Only
// the first `pivot_cols` columns are eligible as pivots.
std::vector<std::size_t> reduce_buffer(const Field& f, std::vector<Matrix::Value>& d,
                                       std::size_t rows, std::size_t cols,
                                       std::size_t pivot_cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < pivot_cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && d[p * cols + c] == 0) ++p;
    if (p == rows) continue;
    if (p != r) {
      std::swap_ranges(d.begin() + p * cols, d.begin() + (p + 1) * cols, d.begin() + r * cols);
    }
    const Matrix::Value scale = f.inv(d[r * cols + c]);
    for (std::size_t j = c; j < cols; ++j) d[r * cols + j] = f.mul(d[r * cols + j], scale);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r) continue;
      const Matrix::Value factor = d[i * cols + c];
      if (factor == 0) continue;
      for (std::size_t j = c; j < cols; ++j) {
        d[i * cols + j] ^= f.mul(factor, d[r * cols + j]);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

RowEchelon row_reduce(const Matrix& m) {
  std::vector<Matrix::Value> d(m.entries().begin(), m.entries().end());
  auto pivots = reduce_buffer(m.field(), d, m.rows(), m.cols(), m.cols());
  return {Matrix(m.field(), m.rows(), m.cols(), std::move(d)), std::move(pivots)};
}

std::size_t rank(const Matrix& m) {
  std::vector<Matrix::Value> d(m.entries().begin(), m.entries().end());
  return reduce_buffer(m.field(), d, m.rows(), m.cols(), m.cols()).size();
}

Matrix submatrix_cols(const Matrix& m, std::span<const Label> subset) {
  if (m.labels().empty() && m.cols() > 0) {
    throw ValidationError("submatrix by label requires a labeled matrix");
  }
  std::vector<Label> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::size_t> cols;
  cols.reserve(sorted.size());
  for (const auto& l : sorted) cols.push_back(m.column_of(l));
  return m.select_columns(cols);
}

std::optional<Solution> solve_consistent(const Matrix& a, std::span<const Matrix::Value> b) {
  if (b.size() != a.rows()) throw std::invalid_argument("right-hand side length mismatch");
  const std::size_t n = a.cols();
  const std::size_t cols = n + 1;
  std::vector<Matrix::Value> d(a.rows() * cols);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i).begin(), a.row(i).end(), d.begin() + i * cols);
    if (!a.field().contains(b[i])) throw std::out_of_range("right-hand side outside field");
    d[i * cols + n] = b[i];
  }
  const auto pivots = reduce_buffer(a.field(), d, a.rows(), cols, n);
  // A nonzero right-hand side left in a zero row means no solution.
  for (std::size_t i = pivots.size(); i < a.rows(); ++i) {
    if (d[i * cols + n] != 0) return std::nullopt;
  }
  Solution s;
  s.x.assign(n, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) s.x[pivots[r]] = d[r * cols + n];
  s.unique = pivots.size() == n;
  return s;
}

bool in_span(const Matrix& m, std::span<const Matrix::Value> v) {
  return solve_consistent(m, v).has_value();
}

Matrix nullspace(const Matrix& m) {
  const auto [red, pivots] = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    if (!is_pivot[c]) free_cols.push_back(c);
  }
  Matrix basis(m.field(), m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const std::size_t fc = free_cols[k];
    basis.set(fc, k, 1);
    // x_pivot = -sum(red[r][free] * x_free) and negation is the identity.
    for (std::size_t r = 0; r < pivots.size(); ++r) basis.set(pivots[r], k, red(r, fc));
  }
  return basis;
}

Matrix left_nullspace(const Matrix& m) { return nullspace(m.transpose()).transpose(); }

std::string vector_to_text(const Field& field, std::span<const Matrix::Value> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += field.format(v[i]);
  }
  return out;
}

std::vector<Matrix::Value> vector_from_text(const Field& field, std::string_view text) {
  std::vector<Matrix::Value> out;
  std::istringstream is{std::string(text)};
  std::string tok;
  while (is >> tok) out.push_back(field.parse(tok));
  return out;
}

std::string matrix_to_text(const Matrix& m) {
  std::ostringstream os;
  os << "gf2^" << m.field().bits() << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << vector_to_text(m.field(), m.row(i)) << '\n';
  }
  if (!m.labels().empty()) {
    os << "labels";
    for (const auto& l : m.labels()) os << ' ' << l.str();
    os << '\n';
  }
  return os.str();
}

Matrix matrix_from_text(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string line;
  if (!std::getline(is, line)) throw ValidationError("empty matrix file");
  std::istringstream header(line);
  std::string tag;
  std::size_t rows = 0, cols = 0;
  if (!(header >> tag >> rows >> cols) || tag.rfind("gf2^", 0) != 0) {
    throw ValidationError("bad matrix header '" + line + "'");
  }
  unsigned bits = 0;
  auto [p, ec] = std::from_chars(tag.data() + 4, tag.data() + tag.size(), bits);
  if (ec != std::errc{} || p != tag.data() + tag.size()) {
    throw ValidationError("bad field tag '" + tag + "'");
  }
  Field field(bits);
  std::vector<Matrix::Value> data;
  data.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(is, line)) {
      throw ValidationError("matrix file ends after " + std::to_string(i) + " rows");
    }
    auto row = vector_from_text(field, line);
    if (row.size() != cols) {
      throw ValidationError("row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                            " entries, expected " + std::to_string(cols));
    }
    data.insert(data.end(), row.begin(), row.end());
  }
  Matrix m(field, rows, cols, std::move(data));
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "labels") {
      std::vector<Label> labels;
      std::string tok;
      while (ls >> tok) labels.push_back(Label::parse(tok));
      m = m.with_labels(std::move(labels));
    }
    // Other trailing lines (encoder metadata) are left to higher layers.
  }
  return m;
}

}  // namespace bcu
