#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "mapequiv/error.hpp"
#include "mapequiv/matrix.hpp"

namespace mapequiv {

enum class GroupKind { GL, SL, Custom, Affine };

/// A subgroup G of GL(n, F), or the affine extension F^n x| G.
///
/// Custom groups carry a membership predicate and, optionally, class
/// functions f_p with f_p(g1) = f_p(g2) for all p iff g2 g1^-1 in G. Class
/// functions are cross-checked against membership, never trusted alone.
class GroupSpec {
 public:
  using Membership = std::function<bool(const Matrix&)>;
  using ClassFunction = std::function<Scalar(const Matrix&)>;

  static GroupSpec gl() { return GroupSpec(GroupKind::GL, "gl"); }
  static GroupSpec sl() { return GroupSpec(GroupKind::SL, "sl"); }

  static GroupSpec custom(std::string name, Membership membership, std::vector<ClassFunction> class_fns = {}) {
    GroupSpec g(GroupKind::Custom, std::move(name));
    g.membership_ = std::move(membership);
    g.class_fns_ = std::move(class_fns);
    return g;
  }

  static GroupSpec affine(const GroupSpec& inner) {
    if (inner.kind() == GroupKind::Affine) throw Error(ErrorCode::UnsupportedGroup, "nested affine group");
    GroupSpec g(GroupKind::Affine, "aff-" + inner.name());
    g.inner_ = std::make_shared<const GroupSpec>(inner);
    return g;
  }

  /// CLI spelling: gl | sl | aff-gl | aff-sl.
  static GroupSpec parse(const std::string& text) {
    if (text == "gl") return gl();
    if (text == "sl") return sl();
    if (text == "aff-gl") return affine(gl());
    if (text == "aff-sl") return affine(sl());
    throw Error(ErrorCode::UnsupportedGroup, "unknown group '" + text + "'");
  }

  GroupKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  bool is_affine() const { return kind_ == GroupKind::Affine; }

  /// The linear part; the group itself unless affine.
  const GroupSpec& linear_part() const { return inner_ ? *inner_ : *this; }

  const std::vector<ClassFunction>& class_functions() const { return class_fns_; }

  /// Membership of the linear part g (square and invertible, then per kind).
  bool contains(const Matrix& g) const {
    if (!g.is_square()) return false;
    Scalar det = determinant(g);
    if (det.is_zero()) return false;
    switch (kind_) {
      case GroupKind::GL: return true;
      case GroupKind::SL: return det.is_one();
      case GroupKind::Custom: return membership_(g);
      case GroupKind::Affine: return inner_->contains(g);
    }
    return false;
  }

 private:
  GroupSpec(GroupKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  GroupKind kind_;
  std::string name_;
  Membership membership_;
  std::vector<ClassFunction> class_fns_;
  std::shared_ptr<const GroupSpec> inner_;
};

}  // namespace mapequiv
