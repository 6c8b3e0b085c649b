#pragma once

// Generating systems of the field of G-invariant rational functions of a
// sampled map (G = GL, or SL at full rank), evaluated at a concrete map, and
// a Jacobian-rank certificate of their algebraic independence over Q.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mapequiv/error.hpp"
#include "mapequiv/field.hpp"
#include "mapequiv/group.hpp"
#include "mapequiv/matrix.hpp"
#include "mapequiv/sample_map.hpp"
#include "mapequiv/signature.hpp"

namespace mapequiv {

struct GeneratorValue {
  std::string label;
  Scalar value;
};

/// For GL: signature coordinates at non-base keys, `alpha[key][i]` with i
/// 1-based (base-key coordinates are the constants e_i and are omitted). For
/// SL at k = n: additionally `det_base`. Affine groups use the map differenced
/// at the anchor (the least key unless given); the anchor row is then zero
/// and is omitted too.
inline std::vector<GeneratorValue> evaluate_generators(const SampleMap& map, const GroupSpec& group,
                                                       const std::optional<std::vector<SampleKey>>& base_keys = std::nullopt,
                                                       const std::optional<SampleKey>& anchor = std::nullopt) {
  if (!map.field().is_exact()) throw Error(ErrorCode::InvalidField, "invariant generators need an exact field");
  const GroupSpec& linear = group.linear_part();
  if (linear.kind() != GroupKind::GL && linear.kind() != GroupKind::SL) {
    throw Error(ErrorCode::UnsupportedGroup, "generators are known only for GL and SL");
  }
  std::optional<SampleKey> skip;
  SampleMap subject = map;
  if (group.is_affine()) {
    skip = anchor ? *anchor : map.samples().begin()->first;
    subject = map.differenced(*skip);
  }
  BasePoints base = base_keys ? base_from_keys(subject, *base_keys) : select_base_points(subject);
  Signature sig = compute_signature(subject, base);

  std::vector<GeneratorValue> out;
  for (const auto& [key, alpha] : sig.coords) {
    if (std::find(base.keys.begin(), base.keys.end(), key) != base.keys.end()) continue;
    if (skip && key == *skip) continue;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      out.push_back({"alpha[" + key.to_string() + "][" + std::to_string(i + 1) + "]", alpha[i]});
    }
  }
  if (linear.kind() == GroupKind::SL && sig.k == map.dim()) out.push_back({"det_base", determinant(base.base_matrix)});
  return out;
}

/// Value plus first derivative along one fixed direction.
struct Dual {
  mpq_class value;
  mpq_class deriv;

  friend Dual operator+(const Dual& a, const Dual& b) { return {a.value + b.value, a.deriv + b.deriv}; }
  friend Dual operator-(const Dual& a, const Dual& b) { return {a.value - b.value, a.deriv - b.deriv}; }
  friend Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.value * b.value, a.deriv * b.value + a.value * b.deriv}; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    mpq_class v = a.value / b.value;
    return {v, (a.deriv - v * b.deriv) / b.value};
  }
};

/// Generators as rational functions of the n*m coordinates of a generic map
/// with m samples, the first k of them base points. Variable index is
/// column * n + row.
struct GeneratorShape {
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  bool with_det = false;

  std::size_t variables() const { return n * m; }
  std::size_t count() const { return k * (m - k) + (with_det ? 1 : 0); }
};

namespace detail {

inline bool value_is_zero(const mpq_class& x) { return sgn(x) == 0; }
inline bool value_is_zero(const Dual& x) { return sgn(x.value) == 0; }

// A dual entry with zero value can still carry a derivative, so elimination
// may only skip entries that vanish in both parts.
inline bool vanishes(const mpq_class& x) { return sgn(x) == 0; }
inline bool vanishes(const Dual& x) { return sgn(x.value) == 0 && sgn(x.deriv) == 0; }

inline void set_one(mpq_class& x) { x = 1; }
inline void set_one(Dual& x) { x = {1, 0}; }

/// Solves a * x_j = b_j for each column b_j; a is square and invertible.
template <typename T>
std::vector<std::vector<T>> solve_square(std::vector<std::vector<T>> a, std::vector<std::vector<T>> rhs, T& det) {
  const std::size_t k = a.size();
  set_one(det);
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t p = c;
    while (p < k && value_is_zero(a[p][c])) ++p;
    if (p == k) throw Error(ErrorCode::Singular, "base minor is singular");
    if (p != c) {
      std::swap(a[p], a[c]);
      std::swap(rhs[p], rhs[c]);
      det = -det;
    }
    det = det * a[c][c];
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c || vanishes(a[r][c])) continue;
      T f = a[r][c] / a[c][c];
      for (std::size_t j = c; j < k; ++j) a[r][j] = a[r][j] - f * a[c][j];
      for (std::size_t j = 0; j < rhs[r].size(); ++j) rhs[r][j] = rhs[r][j] - f * rhs[c][j];
    }
  }
  for (std::size_t r = 0; r < k; ++r) {
    for (auto& x : rhs[r]) x = x / a[r][r];
  }
  return rhs;
}

template <typename T>
std::vector<T> generator_values(const GeneratorShape& shape, const std::vector<T>& x) {
  const std::size_t n = shape.n, k = shape.k, m = shape.m;
  auto at = [&](std::size_t row, std::size_t col) -> const T& { return x[col * n + row]; };
  std::vector<std::vector<T>> minor(k, std::vector<T>(k));
  std::vector<std::vector<T>> rhs(k, std::vector<T>(m - k));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c) minor[r][c] = at(r, c);
    for (std::size_t j = 0; j < m - k; ++j) rhs[r][j] = at(r, k + j);
  }
  T det{};
  auto alpha = solve_square(std::move(minor), std::move(rhs), det);
  std::vector<T> out;
  out.reserve(shape.count());
  for (std::size_t j = 0; j < m - k; ++j) {
    for (std::size_t r = 0; r < k; ++r) out.push_back(alpha[r][j]);
  }
  if (shape.with_det) out.push_back(det);
  return out;
}

inline void check_shape(const GeneratorShape& shape) {
  if (shape.n < 1 || shape.k > shape.n || shape.k > shape.m) {
    throw Error(ErrorCode::DimensionMismatch, "need 1 <= n, k <= n and k <= m");
  }
  if (shape.with_det && shape.k != shape.n) throw Error(ErrorCode::DimensionMismatch, "determinant generator needs k = n");
}

}  // namespace detail

/// Exact generator values at a point (variable index column * n + row).
inline std::vector<mpq_class> generator_map(const GeneratorShape& shape, const std::vector<mpq_class>& point) {
  detail::check_shape(shape);
  if (point.size() != shape.variables()) throw Error(ErrorCode::DimensionMismatch, "point has wrong number of coordinates");
  return detail::generator_values(shape, point);
}

/// Exact Jacobian (generators x variables) by forward-mode propagation of
/// dual numbers, one coordinate direction at a time.
inline Matrix generator_jacobian(const GeneratorShape& shape, const std::vector<mpq_class>& point) {
  detail::check_shape(shape);
  if (point.size() != shape.variables()) throw Error(ErrorCode::DimensionMismatch, "point has wrong number of coordinates");
  const FieldSpec q = FieldSpec::rational();
  Matrix jac(q, shape.count(), shape.variables());
  std::vector<Dual> x(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) x[i] = {point[i], 0};
  for (std::size_t v = 0; v < point.size(); ++v) {
    x[v].deriv = 1;
    auto out = detail::generator_values(shape, x);
    for (std::size_t g = 0; g < out.size(); ++g) jac(g, v) = Scalar::from_rational(q, out[g].deriv);
    x[v].deriv = 0;
  }
  return jac;
}

inline GeneratorShape generator_shape(std::size_t n, std::size_t k, std::size_t m, const GroupSpec& group) {
  switch (group.kind()) {
    case GroupKind::GL: return {n, k, m, false};
    case GroupKind::SL: return {n, k, m, k == n};
    default: throw Error(ErrorCode::UnsupportedGroup, "independence check supports GL and SL only");
  }
}

/// Full Jacobian rank at one random rational point certifies that the
/// generators are algebraically independent over Q. Coordinates have
/// |numerator| <= 20 and denominator <= 7; points with a singular base minor
/// are redrawn a bounded number of times.
inline bool check_algebraic_independence(std::size_t n, std::size_t k, std::size_t m, const GroupSpec& group, std::uint64_t seed) {
  GeneratorShape shape = generator_shape(n, k, m, group);
  detail::check_shape(shape);
  if (shape.count() == 0) return true;

  constexpr int kMaxAttempts = 64;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-20, 20);
  std::uniform_int_distribution<long> den(1, 7);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<mpq_class> point(shape.variables());
    for (auto& x : point) {
      long a = num(rng);
      long b = den(rng);
      x = mpq_class(a, b);
      x.canonicalize();
    }
    Matrix minor(FieldSpec::rational(), k, k);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) minor(r, c) = Scalar::from_rational(FieldSpec::rational(), point[c * n + r]);
    }
    if (determinant(minor).is_zero()) continue;
    return rank(generator_jacobian(shape, point)) == shape.count();
  }
  throw Error(ErrorCode::RetriesExhausted, "no random point with an invertible base minor");
}

}  // namespace mapequiv
