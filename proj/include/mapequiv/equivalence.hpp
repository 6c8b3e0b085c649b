#pragma once

// Decides u ~G v for G in {GL, SL, custom full-rank subgroups, affine
// extensions} and produces witnesses g (plus a translation for affine G).

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mapequiv/error.hpp"
#include "mapequiv/group.hpp"
#include "mapequiv/matrix.hpp"
#include "mapequiv/sample_map.hpp"
#include "mapequiv/signature.hpp"

namespace mapequiv {

enum class Reason {
  Equivalent,
  RankMismatch,
  BaseDependentInV,
  OutsideSpanInV,
  SignatureMismatch,
  GroupConditionFailed,
};

constexpr std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::Equivalent: return "EQUIVALENT";
    case Reason::RankMismatch: return "RANK_MISMATCH";
    case Reason::BaseDependentInV: return "BASE_DEPENDENT_IN_V";
    case Reason::OutsideSpanInV: return "OUTSIDE_SPAN_IN_V";
    case Reason::SignatureMismatch: return "SIGNATURE_MISMATCH";
    case Reason::GroupConditionFailed: return "GROUP_CONDITION_FAILED";
  }
  return "UNKNOWN";
}

struct Witness {
  Matrix g;
  std::optional<Vector> translation;  // affine groups only
};

struct Decision {
  bool equivalent = false;
  std::optional<Witness> witness;
  Reason reason = Reason::SignatureMismatch;

  static Decision no(Reason r) { return {false, std::nullopt, r}; }
  static Decision yes(Witness w) { return {true, std::move(w), Reason::Equivalent}; }
};

struct DecideOptions {
  std::optional<std::vector<SampleKey>> base;  // fixes t_1..t_k; otherwise greedy on u
  std::optional<SampleKey> anchor;             // affine only; otherwise the least key
};

namespace detail {

inline void check_compatible(const SampleMap& u, const SampleMap& v) {
  if (u.field() != v.field()) throw Error(ErrorCode::FieldMismatch, u.field().to_string() + " vs " + v.field().to_string());
  if (u.dim() != v.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "n = " + std::to_string(u.dim()) + " vs n = " + std::to_string(v.dim()));
  }
  if (u.size() != v.size()) throw Error(ErrorCode::KeySetMismatch, "maps have different numbers of samples");
  auto iv = v.samples().begin();
  for (const auto& kv : u.samples()) {
    if (!(kv.first == iv->first)) throw Error(ErrorCode::KeySetMismatch, "key '" + kv.first.to_string() + "' not shared");
    ++iv;
  }
}

/// Appends e_1, ..., e_n in ascending order, keeping each one that preserves
/// independence, until the matrix is n x n.
inline Matrix complete_to_basis(const Matrix& base) {
  const std::size_t n = base.rows();
  std::vector<Vector> cols;
  for (std::size_t c = 0; c < base.cols(); ++c) cols.push_back(base.column(c));
  for (std::size_t i = 0; i < n && cols.size() < n; ++i) {
    cols.push_back(unit_vector(base.field(), n, i));
    if (rank(Matrix::from_columns(base.field(), n, cols)) != cols.size()) cols.pop_back();
  }
  if (cols.size() != n) throw Error(ErrorCode::InternalError, "basis completion failed");
  return Matrix::from_columns(base.field(), n, cols);
}

inline Matrix base_matrix_of(const SampleMap& map, const std::vector<SampleKey>& keys) {
  std::vector<Vector> cols;
  for (const auto& key : keys) cols.push_back(map.at(key));
  return Matrix::from_columns(map.field(), map.dim(), cols);
}

inline bool maps_onto(const SampleMap& u, const SampleMap& v, const Matrix& g, const std::optional<Vector>& translation) {
  for (const auto& [key, x] : u.samples()) {
    Vector image = g * x;
    if (translation) image = image + *translation;
    if (!vectors_equal(image, v.at(key))) return false;
  }
  return true;
}

struct Completion {
  Matrix u_ext;
  Matrix v_ext;
};

inline Completion complete_both(const SampleMap& v, const BasePoints& base) {
  return {complete_to_basis(base.base_matrix), complete_to_basis(base_matrix_of(v, base.keys))};
}

inline Matrix witness_from(const Completion& c, const SampleMap& u, const SampleMap& v) {
  Matrix g = c.v_ext * invert_matrix(c.u_ext);
  if (!maps_onto(u, v, g, std::nullopt)) throw Error(ErrorCode::InternalError, "witness does not map u onto v");
  return g;
}

struct GlOutcome {
  Decision decision;
  BasePoints base;
};

/// Signature test relative to base points chosen on u.
inline GlOutcome decide_gl_with_base(const SampleMap& u, const SampleMap& v, const DecideOptions& opts) {
  check_compatible(u, v);
  BasePoints base = opts.base ? base_from_keys(u, *opts.base) : select_base_points(u);
  const std::size_t k = base.keys.size();
  if (rank(v) != k) return {Decision::no(Reason::RankMismatch), base};
  BasePoints v_base{base.keys, base_matrix_of(v, base.keys)};
  if (rank(v_base.base_matrix) != k) return {Decision::no(Reason::BaseDependentInV), base};
  Signature sig_v;
  try {
    sig_v = compute_signature(v, v_base);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotInSpan) throw;
    return {Decision::no(Reason::OutsideSpanInV), base};
  }
  if (!signatures_equal(compute_signature(u, base), sig_v)) return {Decision::no(Reason::SignatureMismatch), base};
  Matrix g = witness_from(complete_both(v, base), u, v);
  return {Decision::yes({std::move(g), std::nullopt}), base};
}

}  // namespace detail

/// g = V_ext U_ext^-1 where both base matrices are completed with standard
/// basis vectors by the same greedy recipe. Requires equal signatures.
inline Matrix build_witness(const SampleMap& u, const SampleMap& v, const BasePoints& base) {
  return detail::witness_from(detail::complete_both(v, base), u, v);
}

inline Decision decide_gl(const SampleMap& u, const SampleMap& v, const DecideOptions& opts = {}) {
  return detail::decide_gl_with_base(u, v, opts).decision;
}

inline Decision decide_affine(const SampleMap& u, const SampleMap& v, const GroupSpec& inner, const DecideOptions& opts = {});

/// SL with k < n reduces to GL (witness rescaled to det 1). SL and custom
/// groups with k = n additionally need V U^-1 in G; for SL that is
/// det U = det V.
inline Decision decide_subgroup(const SampleMap& u, const SampleMap& v, const GroupSpec& group, const DecideOptions& opts = {}) {
  if (group.is_affine()) return decide_affine(u, v, group.linear_part(), opts);
  if (group.kind() == GroupKind::Custom) {
    detail::check_compatible(u, v);
    std::size_t k = opts.base ? opts.base->size() : rank(u);
    if (k < u.dim()) {
      throw Error(ErrorCode::CustomGroupNeedsFullRank, "custom group '" + group.name() + "' requires rank n = " + std::to_string(u.dim()));
    }
  }
  auto [decision, base] = detail::decide_gl_with_base(u, v, opts);
  if (!decision.equivalent || group.kind() == GroupKind::GL) return decision;

  const std::size_t n = u.dim();
  const std::size_t k = base.keys.size();
  if (group.kind() == GroupKind::SL && k < n) {
    detail::Completion parts = detail::complete_both(v, base);
    Scalar det_g = determinant(parts.v_ext) / determinant(parts.u_ext);
    Scalar scale = invert(det_g);
    for (std::size_t r = 0; r < n; ++r) parts.v_ext(r, n - 1) *= scale;
    Matrix g = detail::witness_from(parts, u, v);
    if (!determinant(g).is_one()) throw Error(ErrorCode::InternalError, "SL witness normalisation failed");
    return Decision::yes({std::move(g), std::nullopt});
  }

  const Matrix& u_base = base.base_matrix;
  Matrix v_base = detail::base_matrix_of(v, base.keys);
  if (group.kind() == GroupKind::SL) {
    if (!(determinant(u_base) == determinant(v_base))) return Decision::no(Reason::GroupConditionFailed);
    return decision;
  }

  bool member = group.contains(decision.witness->g);
  if (!group.class_functions().empty()) {
    bool classes_agree = true;
    for (const auto& f : group.class_functions()) classes_agree = classes_agree && (f(u_base) == f(v_base));
    if (classes_agree != member) {
      throw Error(ErrorCode::InternalError, "class functions of '" + group.name() + "' disagree with its membership test");
    }
  }
  return member ? decision : Decision::no(Reason::GroupConditionFailed);
}

/// x -> g x + u0 equivalence by differencing against an anchor sample.
inline Decision decide_affine(const SampleMap& u, const SampleMap& v, const GroupSpec& inner, const DecideOptions& opts) {
  if (inner.is_affine()) throw Error(ErrorCode::UnsupportedGroup, "nested affine group");
  detail::check_compatible(u, v);
  SampleKey anchor = opts.anchor ? *opts.anchor : u.samples().begin()->first;
  if (!u.contains(anchor)) throw Error(ErrorCode::UnknownKey, "anchor '" + anchor.to_string() + "' is not a sample key");
  DecideOptions inner_opts{opts.base, std::nullopt};
  Decision d = decide_subgroup(u.differenced(anchor), v.differenced(anchor), inner, inner_opts);
  if (!d.equivalent) return d;
  d.witness->translation = v.at(anchor) - d.witness->g * u.at(anchor);
  return d;
}

inline Decision decide(const SampleMap& u, const SampleMap& v, const GroupSpec& group, const DecideOptions& opts = {}) {
  return decide_subgroup(u, v, group, opts);
}

/// Checks g u(key) (+ u0) = v(key) for every key and that g lies in the group.
inline bool verify_witness(const SampleMap& u, const SampleMap& v, const Decision& decision, const GroupSpec& group) {
  if (!decision.equivalent || !decision.witness) return false;
  const Witness& w = decision.witness.value();
  const std::size_t n = u.dim();
  if (w.g.rows() != n || w.g.cols() != n || w.g.field() != u.field()) return false;
  if (group.is_affine() != w.translation.has_value()) return false;
  if (w.translation && w.translation->size() != n) return false;
  if (u.keys() != v.keys() || u.field() != v.field() || v.dim() != n) return false;
  if (!group.contains(w.g)) return false;
  return detail::maps_onto(u, v, w.g, w.translation);
}

inline nlohmann::json decision_to_json(const Decision& d) {
  nlohmann::json witness = nullptr;
  if (d.witness) {
    nlohmann::json g = nlohmann::json::array();
    for (std::size_t r = 0; r < d.witness->g.rows(); ++r) g.push_back(vector_to_json(d.witness->g.row(r)));
    witness = {{"g", std::move(g)}, {"translation", d.witness->translation ? vector_to_json(*d.witness->translation) : nlohmann::json(nullptr)}};
  }
  return {{"equivalent", d.equivalent}, {"reason", std::string(to_string(d.reason))}, {"witness", std::move(witness)}};
}

}  // namespace mapequiv
