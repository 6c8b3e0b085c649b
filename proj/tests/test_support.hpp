#pragma once

// Random generators and small independent oracles shared by the unit and
// acceptance suites. Nothing here calls the elimination code under test.

#include <gtest/gtest.h>

#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mapequiv/mapequiv.hpp"

namespace mapequiv::testing {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// Small rationals (|num| <= 6, den <= 4) or uniform residues.
inline Scalar random_scalar(const FieldSpec& field, Rng& rng) {
  switch (field.kind()) {
    case FieldKind::Prime:
      return Scalar::from_int(field, uniform(rng, 0, static_cast<long>(field.modulus()) - 1));
    case FieldKind::Approx:
      return Scalar::from_double(field, static_cast<double>(uniform(rng, -6, 6)) / static_cast<double>(uniform(rng, 1, 4)));
    case FieldKind::Rational:
      break;
  }
  return Scalar::from_rational(field, mpq_class(uniform(rng, -6, 6), uniform(rng, 1, 4)));
}

inline Vector random_vector(const FieldSpec& field, std::size_t n, Rng& rng) {
  Vector v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(random_scalar(field, rng));
  return v;
}

inline Matrix random_matrix(const FieldSpec& field, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = random_scalar(field, rng);
  }
  return m;
}

/// Leibniz/cofactor expansion along the first row; independent of elimination.
inline Scalar cofactor_det(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return Scalar::one(m.field());
  if (n == 1) return m(0, 0);
  Scalar acc = Scalar::zero(m.field());
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::size_t> rows, cols;
    for (std::size_t i = 1; i < n; ++i) rows.push_back(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != c) cols.push_back(j);
    }
    Scalar term = m(0, c) * cofactor_det(m.select_rows(rows).select_columns(cols));
    acc = (c % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

/// Adjugate inverse, det^-1 * adj(m); independent of elimination.
inline Matrix cofactor_inverse(const Matrix& m) {
  const std::size_t n = m.rows();
  Scalar inv_det = invert(cofactor_det(m));
  Matrix out(m.field(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<std::size_t> rows, cols;
      for (std::size_t r = 0; r < n; ++r) {
        if (r != j) rows.push_back(r);
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (c != i) cols.push_back(c);
      }
      Scalar minor = cofactor_det(m.select_rows(rows).select_columns(cols));
      out(i, j) = ((i + j) % 2 == 0 ? minor : -minor) * inv_det;
    }
  }
  return out;
}

/// All strictly increasing index tuples of length k from [0, n).
inline std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Rank as the largest r with a nonzero r x r minor (cofactor determinants).
inline std::size_t minor_rank(const Matrix& m) {
  for (std::size_t r = std::min(m.rows(), m.cols()); r > 0; --r) {
    for (const auto& rows : subsets(m.rows(), r)) {
      for (const auto& cols : subsets(m.cols(), r)) {
        if (!cofactor_det(m.select_rows(rows).select_columns(cols)).is_zero()) return r;
      }
    }
  }
  return 0;
}

inline Matrix random_invertible(const FieldSpec& field, std::size_t n, Rng& rng) {
  while (true) {
    Matrix g = random_matrix(field, n, n, rng);
    if (!cofactor_det(g).is_zero()) return g;
  }
}

/// Random invertible matrix with its first row rescaled to give det = target.
inline Matrix random_with_det(const FieldSpec& field, std::size_t n, const Scalar& target, Rng& rng) {
  Matrix g = random_invertible(field, n, rng);
  Scalar scale = target / cofactor_det(g);
  for (std::size_t c = 0; c < n; ++c) g(0, c) *= scale;
  return g;
}

inline Matrix random_sl(const FieldSpec& field, std::size_t n, Rng& rng) {
  return random_with_det(field, n, Scalar::one(field), rng);
}

inline std::string key_name(std::size_t i) { return "t" + std::to_string(i); }

/// m samples spanning a subspace of dimension at most `max_rank`.
inline SampleMap random_map(const FieldSpec& field, std::size_t n, std::size_t m, std::size_t max_rank, Rng& rng) {
  std::vector<Vector> basis;
  for (std::size_t i = 0; i < max_rank; ++i) basis.push_back(random_vector(field, n, rng));
  SampleMap::Samples samples;
  for (std::size_t i = 0; i < m; ++i) {
    Vector v = zero_vector(field, n);
    for (const auto& b : basis) {
      Scalar c = random_scalar(field, rng);
      for (std::size_t r = 0; r < n; ++r) v[r] += c * b[r];
    }
    samples.emplace(key_name(i), std::move(v));
  }
  return SampleMap(field, n, std::move(samples));
}

/// Fully random entries.
inline SampleMap random_free_map(const FieldSpec& field, std::size_t n, std::size_t m, Rng& rng) {
  SampleMap::Samples samples;
  for (std::size_t i = 0; i < m; ++i) samples.emplace(key_name(i), random_vector(field, n, rng));
  return SampleMap(field, n, std::move(samples));
}

inline SampleMap translated(const SampleMap& map, const Vector& b) {
  SampleMap::Samples samples;
  for (const auto& [key, v] : map.samples()) samples.emplace(key, v + b);
  return SampleMap(map.field(), map.dim(), std::move(samples));
}

inline SampleMap apply_element(const SampleMap& map, const GroupElement& e) {
  SampleMap moved = map.transformed(e.g);
  return e.translation ? translated(moved, *e.translation) : moved;
}

/// Pairs over GF(p) biased towards hard cases: a third are images under a
/// group element, a third share u's rank, the rest are unrelated.
inline std::pair<SampleMap, SampleMap> random_oracle_pair(const std::vector<GroupElement>& elements, const FieldSpec& field,
                                                          std::size_t n, Rng& rng) {
  std::size_t m = static_cast<std::size_t>(uniform(rng, 2, 4));
  SampleMap u = random_free_map(field, n, m, rng);
  switch (uniform(rng, 0, 2)) {
    case 0:
      return {u, apply_element(u, elements[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(elements.size()) - 1))])};
    case 1:
      return {u, random_map(field, n, m, minor_rank(u.as_matrix()), rng)};
    default:
      return {u, random_free_map(field, n, m, rng)};
  }
}

inline SampleMap make_map(const FieldSpec& field, std::initializer_list<std::pair<const char*, std::vector<long long>>> rows) {
  SampleMap::Samples samples;
  std::size_t n = 0;
  for (const auto& [key, values] : rows) {
    Vector v;
    for (long long x : values) v.push_back(Scalar::from_int(field, x));
    n = v.size();
    samples.emplace(key, std::move(v));
  }
  return SampleMap(field, n, std::move(samples));
}

inline Vector ints(const FieldSpec& field, std::initializer_list<long long> values) {
  Vector v;
  for (long long x : values) v.push_back(Scalar::from_int(field, x));
  return v;
}

/// gtest parameter names: rational, prime_3, ...
inline std::string field_param_name(const ::testing::TestParamInfo<FieldSpec>& info) {
  std::string name = info.param.to_string();
  for (char& c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  }
  return name;
}

inline Scalar q(long num, long den = 1) { return Scalar::from_rational(FieldSpec::rational(), mpq_class(num, den)); }

}  // namespace mapequiv::testing

namespace mapequiv {

inline void PrintTo(const FieldSpec& f, std::ostream* os) { *os << f.to_string(); }
inline void PrintTo(const Matrix& m, std::ostream* os) { *os << m.to_string(); }

}  // namespace mapequiv
