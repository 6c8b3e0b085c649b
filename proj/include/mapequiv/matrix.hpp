#pragma once

// Dense matrices over a FieldSpec with deterministic Gaussian elimination.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mapequiv/error.hpp"
#include "mapequiv/field.hpp"

namespace mapequiv {

class Matrix {
 public:
  Matrix() = default;

  Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols)
      : field_(field), rows_(rows), cols_(cols), entries_(rows * cols, Scalar::zero(field)) {}

  Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
      : field_(field), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) throw Error(ErrorCode::DimensionMismatch, "entry count does not match shape");
    for (const auto& e : entries_) {
      if (e.field() != field_) throw Error(ErrorCode::FieldMismatch, "matrix entry from another field");
    }
  }

  static Matrix identity(const FieldSpec& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(field);
    return m;
  }

  /// Columns must all have length `rows`; zero columns gives a rows x 0 matrix.
  static Matrix from_columns(const FieldSpec& field, std::size_t rows, std::span<const Vector> columns) {
    Matrix m(field, rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c].size() != rows) throw Error(ErrorCode::DimensionMismatch, "column length differs from row count");
      for (std::size_t r = 0; r < rows; ++r) {
        if (columns[c][r].field() != field) throw Error(ErrorCode::FieldMismatch, "column entry from another field");
        m(r, c) = columns[c][r];
      }
    }
    return m;
  }

  static Matrix from_ints(const FieldSpec& field, std::initializer_list<std::initializer_list<long long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(field, r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged rows");
      std::size_t j = 0;
      for (long long v : row) m(i, j++) = Scalar::from_int(field, v);
      ++i;
    }
    return m;
  }

  const FieldSpec& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  const std::vector<Scalar>& entries() const { return entries_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  Vector column(std::size_t c) const {
    Vector v;
    v.reserve(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
    return v;
  }

  Vector row(std::size_t r) const {
    return Vector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                  entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
  }

  Matrix select_rows(std::span<const std::size_t> which) const {
    Matrix m(field_, which.size(), cols_);
    for (std::size_t i = 0; i < which.size(); ++i) {
      for (std::size_t c = 0; c < cols_; ++c) m(i, c) = (*this)(which[i], c);
    }
    return m;
  }

  Matrix select_columns(std::span<const std::size_t> which) const {
    Matrix m(field_, rows_, which.size());
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t j = 0; j < which.size(); ++j) m(r, j) = (*this)(r, which[j]);
    }
    return m;
  }

  /// [this | v]
  Matrix append_column(const Vector& v) const {
    if (v.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "appended column has wrong length");
    Matrix m(field_, rows_, cols_ + 1);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) m(r, c) = (*this)(r, c);
      m(r, cols_) = v[r];
    }
    return m;
  }

  Matrix transpose() const {
    Matrix m(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    }
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.field_ != b.field_) throw Error(ErrorCode::FieldMismatch, "matrix product across fields");
    if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "inner dimensions differ");
    Matrix m(a.field_, a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < b.cols_; ++j) {
        Scalar acc = Scalar::zero(a.field_);
        for (std::size_t l = 0; l < a.cols_; ++l) acc += a(i, l) * b(l, j);
        m(i, j) = std::move(acc);
      }
    }
    return m;
  }

  friend Vector operator*(const Matrix& a, const Vector& x) {
    if (a.cols_ != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shapes differ");
    Vector y;
    y.reserve(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Scalar acc = Scalar::zero(a.field_);
      for (std::size_t l = 0; l < a.cols_; ++l) acc += a(i, l) * x[l];
      y.push_back(std::move(acc));
    }
    return y;
  }

  friend Matrix operator*(const Scalar& s, const Matrix& a) {
    Matrix m = a;
    for (auto& e : m.entries_) e = s * e;
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    if (a.field_ != b.field_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i) {
      if (!(a.entries_[i] == b.entries_[i])) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t r = 0; r < rows_; ++r) {
      out += r ? ", [" : "[";
      for (std::size_t c = 0; c < cols_; ++c) {
        if (c) out += ", ";
        out += format_scalar((*this)(r, c));
      }
      out += "]";
    }
    return out + "]";
  }

 private:
  FieldSpec field_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> entries_;
};

struct RankProfile {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;  // strictly increasing
  std::vector<std::size_t> pivot_cols;  // strictly increasing
};

namespace detail {

struct Pivot {
  std::size_t row;
  std::size_t col;
};

/// In-place elimination without row swaps. Columns are visited left to right
/// (only the first `col_limit`); exact fields take the first unused row with a
/// nonzero entry, Approx the unused row of largest magnitude. With `reduced`
/// the pivot row is normalised and the column cleared in every other row
/// (RREF up to row order); otherwise only unused rows are cleared, which
/// preserves the determinant. Pivots are returned in column order.
inline std::vector<Pivot> eliminate(Matrix& a, std::size_t col_limit, bool reduced) {
  const FieldSpec& field = a.field();
  std::vector<bool> used(a.rows(), false);
  std::vector<Pivot> pivots;
  for (std::size_t c = 0; c < std::min(col_limit, a.cols()); ++c) {
    std::optional<std::size_t> pick;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (used[r] || a(r, c).is_zero()) continue;
      if (field.kind() != FieldKind::Approx) {
        pick = r;
        break;
      }
      if (!pick || std::fabs(a(r, c).approx()) > std::fabs(a(*pick, c).approx())) pick = r;
    }
    if (!pick) continue;
    const std::size_t p = *pick;
    used[p] = true;
    pivots.push_back({p, c});
    if (reduced) {
      Scalar inv = invert(a(p, c));
      for (std::size_t j = c; j < a.cols(); ++j) a(p, j) *= inv;
    }
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == p || (!reduced && used[r]) || a(r, c).is_zero()) continue;
      Scalar factor = a(r, c) / a(p, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(r, j) -= factor * a(p, j);
      // Approx leaves rounding residue in the eliminated column.
      a(r, c) = Scalar::zero(field);
    }
  }
  return pivots;
}

inline int permutation_sign(const std::vector<std::size_t>& perm) {
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) sign = -sign;
    }
  }
  return sign;
}

}  // namespace detail

/// Rank with the deterministic pivot set; the pivot_rows x pivot_cols
/// submatrix is invertible. Pivot columns are exactly the columns that are
/// independent of all columns to their left.
inline RankProfile rank_profile(const Matrix& m) {
  Matrix work = m;
  auto pivots = detail::eliminate(work, work.cols(), false);
  RankProfile profile;
  profile.rank = pivots.size();
  for (const auto& p : pivots) {
    profile.pivot_rows.push_back(p.row);
    profile.pivot_cols.push_back(p.col);
  }
  std::sort(profile.pivot_rows.begin(), profile.pivot_rows.end());
  return profile;
}

inline std::size_t rank(const Matrix& m) { return rank_profile(m).rank; }

/// Coordinates alpha with basis * alpha = target, or nullopt when target is
/// outside the column span. The basis must have full column rank.
inline std::optional<Vector> solve_in_column_space(const Matrix& basis, const Vector& target) {
  if (target.size() != basis.rows()) throw Error(ErrorCode::DimensionMismatch, "target length differs from basis rows");
  for (const auto& t : target) {
    if (t.field() != basis.field()) throw Error(ErrorCode::FieldMismatch, "target entry from another field");
  }
  const std::size_t k = basis.cols();
  Matrix work = basis.append_column(target);
  auto pivots = detail::eliminate(work, k + 1, true);
  std::size_t basis_pivots = 0;
  for (const auto& p : pivots) {
    if (p.col == k) return std::nullopt;
    ++basis_pivots;
  }
  if (basis_pivots != k) throw Error(ErrorCode::Singular, "basis lacks full column rank");
  Vector alpha;
  alpha.reserve(k);
  for (const auto& p : pivots) alpha.push_back(work(p.row, k));
  return alpha;
}

inline Matrix invert_matrix(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  Matrix work(m.field(), n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) work(r, c) = m(r, c);
    work(r, n + r) = Scalar::one(m.field());
  }
  auto pivots = detail::eliminate(work, n, true);
  if (pivots.size() != n) throw Error(ErrorCode::Singular, "matrix is singular");
  Matrix inv(m.field(), n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t c = 0; c < n; ++c) inv(j, c) = work(pivots[j].row, n + c);
  }
  return inv;
}

/// 0x0 determinant is 1.
inline Scalar determinant(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "determinant of non-square matrix");
  Matrix work = m;
  auto pivots = detail::eliminate(work, work.cols(), false);
  if (pivots.size() != m.rows()) return Scalar::zero(m.field());
  Scalar det = Scalar::one(m.field());
  std::vector<std::size_t> perm;
  for (const auto& p : pivots) {
    det *= work(p.row, p.col);
    perm.push_back(p.row);
  }
  return detail::permutation_sign(perm) < 0 ? -det : det;
}

}  // namespace mapequiv
