#pragma once

// Dense matrices over GF(2^b) with exact Gaussian elimination.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bcu/galois.hpp"
#include "bcu/label.hpp"

namespace bcu {

class Matrix {
 public:
  using Value = Field::Value;

  Matrix(Field field, std::size_t rows, std::size_t cols);
  Matrix(Field field, std::size_t rows, std::size_t cols, std::vector<Value> entries);

  static Matrix identity(Field field, std::size_t n);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Value operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  void set(std::size_t i, std::size_t j, Value v);
  FieldElement at(std::size_t i, std::size_t j) const;

  std::span<const Value> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const Value> entries() const noexcept { return data_; }
  std::vector<Value> column(std::size_t j) const;

  // Column labels are optional; when present there is exactly one per column
  // and no two are equal.
  bool has_labels() const noexcept { return !labels_.empty() || cols_ == 0; }
  const std::vector<Label>& labels() const noexcept { return labels_; }
  Matrix with_labels(std::vector<Label> labels) const;
  // Position of a label; throws ValidationError when absent.
  std::size_t column_of(const Label& label) const;

  Matrix transpose() const;
  // Columns in the given order; labels follow when present.
  Matrix select_columns(std::span<const std::size_t> cols) const;
  std::vector<Value> multiply(std::span<const Value> x) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Value> data_;
  std::vector<Label> labels_;
};

// A B; labels are dropped.
Matrix multiply(const Matrix& a, const Matrix& b);

// [A | B]; labels are kept only when both sides carry them.
Matrix hstack(const Matrix& a, const Matrix& b);

// Reduced row echelon form plus the pivot column of each nonzero row.
struct RowEchelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};
RowEchelon row_reduce(const Matrix& m);

std::size_t rank(const Matrix& m);

// Columns whose labels lie in `subset`, in sorted label order. Throws
// ValidationError for an unknown label or when m is unlabeled.
Matrix submatrix_cols(const Matrix& m, std::span<const Label> subset);

struct Solution {
  std::vector<Matrix::Value> x;
  bool unique = false;
};
// Some x with A x = b, or nullopt when the system is inconsistent.
std::optional<Solution> solve_consistent(const Matrix& a, std::span<const Matrix::Value> b);

// v lies in the column span of m.
bool in_span(const Matrix& m, std::span<const Matrix::Value> v);

// Columns form a basis of { x : m x = 0 }.
Matrix nullspace(const Matrix& m);
// Rows form a basis of { z : z^T m = 0 }.
Matrix left_nullspace(const Matrix& m);

// Text form:
//   gf2^<b> <rows> <cols>
//   <rows lines of cols hex elements>
//   labels <label> ...          (optional)
std::string matrix_to_text(const Matrix& m);
Matrix matrix_from_text(std::string_view text);

std::string vector_to_text(const Field& field, std::span<const Matrix::Value> v);
std::vector<Matrix::Value> vector_from_text(const Field& field, std::string_view text);

}  // namespace bcu
