#pragma once

// Complete GL-invariant of a sampled map: the coordinates of every sample in
// the basis formed by the base-point vectors.

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mapequiv/error.hpp"
#include "mapequiv/field.hpp"
#include "mapequiv/group.hpp"
#include "mapequiv/matrix.hpp"
#include "mapequiv/sample_map.hpp"

namespace mapequiv {

struct Signature {
  FieldSpec field;
  std::size_t k = 0;
  std::vector<SampleKey> base_keys;
  std::map<SampleKey, Vector> coords;  // coords[base_keys[i]] == e_i
};

/// One linear solve per sample against the base matrix. Throws NotInSpan if
/// `base` does not span `map`.
inline Signature compute_signature(const SampleMap& map, const BasePoints& base) {
  if (base.base_matrix.rows() != map.dim() || base.base_matrix.cols() != base.keys.size()) {
    throw Error(ErrorCode::DimensionMismatch, "base matrix shape does not match the map");
  }
  Signature sig{map.field(), base.keys.size(), base.keys, {}};
  for (const auto& [key, vec] : map.samples()) {
    auto alpha = solve_in_column_space(base.base_matrix, vec);
    if (!alpha) throw Error(ErrorCode::NotInSpan, "sample '" + key.to_string() + "' is outside the base span");
    sig.coords.emplace(key, std::move(*alpha));
  }
  for (std::size_t i = 0; i < base.keys.size(); ++i) {
    auto it = sig.coords.find(base.keys[i]);
    if (it == sig.coords.end()) throw Error(ErrorCode::UnknownKey, "base key '" + base.keys[i].to_string() + "' not in map");
    it->second = unit_vector(map.field(), sig.k, i);
  }
  return sig;
}

inline Signature compute_signature(const SampleMap& map) { return compute_signature(map, select_base_points(map)); }

inline bool signatures_equal(const Signature& a, const Signature& b) {
  if (a.field.kind() != b.field.kind()) return false;
  if (a.k != b.k || a.base_keys != b.base_keys || a.coords.size() != b.coords.size()) return false;
  auto ib = b.coords.begin();
  for (const auto& [key, alpha] : a.coords) {
    if (!(key == ib->first) || !vectors_equal(alpha, ib->second)) return false;
    ++ib;
  }
  return true;
}

/// Canonical representative: coordinates in components 1..k, zeros below, so
/// the base matrix is [I_k; 0]. For a k = n subgroup path the base matrix is
/// I_n, which lies in every subgroup.
inline SampleMap reconstruct_canonical(const Signature& sig, std::size_t n, const GroupSpec& group = GroupSpec::gl()) {
  if (sig.k > n) throw Error(ErrorCode::DimensionMismatch, "signature rank " + std::to_string(sig.k) + " exceeds n = " + std::to_string(n));
  const GroupSpec& linear = group.linear_part();
  if (linear.kind() == GroupKind::Custom) {
    if (sig.k != n) throw Error(ErrorCode::UnsupportedGroup, "custom groups are reconstructed only at full rank");
    if (!linear.contains(Matrix::identity(sig.field, n))) throw Error(ErrorCode::InternalError, "custom group rejects the identity");
  }
  SampleMap::Samples samples;
  for (const auto& [key, alpha] : sig.coords) {
    if (alpha.size() != sig.k) throw Error(ErrorCode::DimensionMismatch, "coordinate vector of wrong length");
    Vector vec = zero_vector(sig.field, n);
    std::copy(alpha.begin(), alpha.end(), vec.begin());
    samples.emplace(key, std::move(vec));
  }
  return SampleMap(sig.field, n, std::move(samples));
}

inline nlohmann::json signature_to_json(const Signature& sig) {
  nlohmann::json base = nlohmann::json::array();
  for (const auto& key : sig.base_keys) base.push_back(key_to_json(key));
  nlohmann::json coords = nlohmann::json::array();
  for (const auto& [key, alpha] : sig.coords) {
    nlohmann::json entry = key_to_json(key);
    entry["alpha"] = vector_to_json(alpha);
    coords.push_back(std::move(entry));
  }
  return {{"k", sig.k}, {"base", std::move(base)}, {"coords", std::move(coords)}};
}

inline Signature signature_from_json(const nlohmann::json& j, const FieldSpec& field) {
  auto key_of = [](const nlohmann::json& e) {
    if (!e.is_object() || !e.contains("t") || !e.at("t").is_string()) throw Error(ErrorCode::SchemaViolation, "key needs a string \"t\"");
    SampleKey key{e.at("t").get<std::string>()};
    if (e.contains("s") && e.at("s").is_string()) key.s = e.at("s").get<std::string>();
    return key;
  };
  try {
    Signature sig{field, j.at("k").get<std::size_t>(), {}, {}};
    for (const auto& b : j.at("base")) sig.base_keys.push_back(key_of(b));
    for (const auto& c : j.at("coords")) {
      Vector alpha;
      for (const auto& x : c.at("alpha")) alpha.push_back(parse_scalar(x.get<std::string>(), field));
      if (alpha.size() != sig.k) throw Error(ErrorCode::DimensionMismatch, "alpha has wrong length");
      sig.coords.emplace(key_of(c), std::move(alpha));
    }
    if (sig.base_keys.size() != sig.k) throw Error(ErrorCode::SchemaViolation, "base list length differs from k");
    return sig;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("malformed signature: ") + e.what());
  }
}

}  // namespace mapequiv
