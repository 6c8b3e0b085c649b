#pragma once

// Brute-force ground truth over GF(p): enumerate the whole group and search
// the orbit. Deliberately naive.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mapequiv/error.hpp"
#include "mapequiv/field.hpp"
#include "mapequiv/group.hpp"
#include "mapequiv/matrix.hpp"
#include "mapequiv/sample_map.hpp"

namespace mapequiv {

struct GroupElement {
  Matrix g;
  std::optional<Vector> translation;
};

inline constexpr std::uint64_t kEnumerationLimit = 10'000'000;

namespace detail {

/// p^e, or nullopt once it exceeds `limit`.
inline std::optional<std::uint64_t> bounded_power(std::uint64_t p, std::size_t e, std::uint64_t limit) {
  std::uint64_t acc = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (acc > limit / p) return std::nullopt;
    acc *= p;
  }
  return acc;
}

/// Digits of `index` in base p, most significant first.
inline Vector base_p_digits(std::uint64_t index, std::size_t count, const FieldSpec& field) {
  Vector out(count, Scalar::zero(field));
  for (std::size_t i = count; i-- > 0;) {
    out[i] = Scalar::from_int(field, static_cast<long long>(index % field.modulus()));
    index /= field.modulus();
  }
  return out;
}

}  // namespace detail

/// All elements of G in GL(n, p), ordered by their row-major entry tuple read
/// as a base-p integer; affine groups list (g, b) with b varying fastest.
/// Custom groups are enumerated by filtering GL with their membership test.
inline std::vector<GroupElement> enumerate_group(const GroupSpec& group, std::size_t n, std::uint64_t p) {
  FieldSpec field = FieldSpec::prime(p);
  auto total = detail::bounded_power(p, n * n, kEnumerationLimit);
  if (!total) throw Error(ErrorCode::TooLarge, "p^(n^2) exceeds the enumeration guard");

  const GroupSpec& linear = group.linear_part();
  std::vector<Matrix> linear_elements;
  for (std::uint64_t index = 0; index < *total; ++index) {
    Matrix g(field, n, n, detail::base_p_digits(index, n * n, field));
    if (linear.contains(g)) linear_elements.push_back(std::move(g));
  }

  std::vector<GroupElement> out;
  if (!group.is_affine()) {
    out.reserve(linear_elements.size());
    for (auto& g : linear_elements) out.push_back({std::move(g), std::nullopt});
    return out;
  }
  std::uint64_t translations = *detail::bounded_power(p, n, ~std::uint64_t{0});
  out.reserve(linear_elements.size() * translations);
  for (const auto& g : linear_elements) {
    for (std::uint64_t b = 0; b < translations; ++b) out.push_back({g, detail::base_p_digits(b, n, field)});
  }
  return out;
}

/// Order of GL(n, p): (p^n - 1)(p^n - p)...(p^n - p^(n-1)).
inline std::uint64_t gl_order(std::size_t n, std::uint64_t p) {
  std::uint64_t pn = 1;
  for (std::size_t i = 0; i < n; ++i) pn *= p;
  std::uint64_t order = 1, pi = 1;
  for (std::size_t i = 0; i < n; ++i) {
    order *= pn - pi;
    pi *= p;
  }
  return order;
}

/// Literal definition: some element maps every u sample onto v's.
inline bool brute_force_equivalent(const SampleMap& u, const SampleMap& v, const GroupSpec& group) {
  if (u.field().kind() != FieldKind::Prime || u.field() != v.field()) {
    throw Error(ErrorCode::FieldMismatch, "the orbit oracle needs both maps over the same GF(p)");
  }
  if (u.dim() != v.dim()) throw Error(ErrorCode::DimensionMismatch, "maps have different n");
  if (u.keys() != v.keys()) throw Error(ErrorCode::KeySetMismatch, "maps have different key sets");
  for (const auto& element : enumerate_group(group, u.dim(), u.field().modulus())) {
    bool all = true;
    for (const auto& [key, x] : u.samples()) {
      Vector image = element.g * x;
      if (element.translation) image = image + *element.translation;
      if (!vectors_equal(image, v.at(key))) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

}  // namespace mapequiv
