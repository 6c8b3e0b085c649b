#pragma once

// Coefficient fields: exact rationals (GMP-backed), prime fields GF(p) with
// p below 2^32, and an approximate floating mode with a relative epsilon.

#include <gmpxx.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "mapequiv/error.hpp"

namespace mapequiv {

enum class FieldKind { Rational, Prime, Approx };

/// Deterministic trial division; adequate for the word-sized moduli accepted here.
constexpr bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  if (p < 4) return true;
  if (p % 2 == 0) return false;
  for (std::uint64_t d = 3; d * d <= p; d += 2) {
    if (p % d == 0) return false;
  }
  return true;
}

class FieldSpec {
 public:
  static constexpr std::uint64_t kMaxPrime = (std::uint64_t{1} << 32) - 1;

  FieldSpec() = default;

  static FieldSpec rational() { return FieldSpec(FieldKind::Rational, 0, 0.0); }

  static FieldSpec prime(std::uint64_t p) {
    if (p > kMaxPrime) throw Error(ErrorCode::InvalidField, "modulus " + std::to_string(p) + " exceeds 2^32");
    if (!is_prime(p)) throw Error(ErrorCode::InvalidField, std::to_string(p) + " is not prime");
    return FieldSpec(FieldKind::Prime, p, 0.0);
  }

  static FieldSpec approx(double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
      throw Error(ErrorCode::InvalidField, "approx epsilon must be a finite nonnegative number");
    }
    return FieldSpec(FieldKind::Approx, 0, epsilon);
  }

  /// Accepts the CLI spelling: `rational`, `prime:P`, `approx:EPS`.
  static FieldSpec parse(std::string_view text) {
    if (text == "rational") return rational();
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::InvalidField, "unknown field '" + std::string(text) + "'");
    std::string_view head = text.substr(0, colon);
    std::string_view arg = text.substr(colon + 1);
    if (head == "prime") {
      std::uint64_t p = 0;
      auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), p);
      if (ec != std::errc() || ptr != arg.data() + arg.size() || arg.empty()) {
        throw Error(ErrorCode::InvalidField, "bad prime modulus '" + std::string(arg) + "'");
      }
      return prime(p);
    }
    if (head == "approx") {
      double eps = 0.0;
      auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), eps);
      if (ec != std::errc() || ptr != arg.data() + arg.size() || arg.empty()) {
        throw Error(ErrorCode::InvalidField, "bad epsilon '" + std::string(arg) + "'");
      }
      return approx(eps);
    }
    throw Error(ErrorCode::InvalidField, "unknown field '" + std::string(text) + "'");
  }

  FieldKind kind() const { return kind_; }
  std::uint64_t modulus() const { return p_; }
  double epsilon() const { return epsilon_; }
  bool is_exact() const { return kind_ != FieldKind::Approx; }

  std::string to_string() const {
    switch (kind_) {
      case FieldKind::Rational: return "rational";
      case FieldKind::Prime: return "prime:" + std::to_string(p_);
      case FieldKind::Approx: {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, epsilon_);
        return "approx:" + std::string(buf, res.ptr);
      }
    }
    return "?";
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  FieldSpec(FieldKind kind, std::uint64_t p, double epsilon) : kind_(kind), p_(p), epsilon_(epsilon) {}

  FieldKind kind_ = FieldKind::Rational;
  std::uint64_t p_ = 0;
  double epsilon_ = 0.0;
};

namespace detail {

inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p) {
  std::int64_t old_r = static_cast<std::int64_t>(a), r = static_cast<std::int64_t>(p);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair(r, old_r - q * r);
    std::tie(old_s, s) = std::pair(s, old_s - q * s);
  }
  std::int64_t m = static_cast<std::int64_t>(p);
  return static_cast<std::uint64_t>(((old_s % m) + m) % m);
}

inline std::uint64_t reduce_mpz(const mpz_class& z, std::uint64_t p) {
  mpz_class r = z % mpz_class(static_cast<unsigned long>(p));
  if (r < 0) r += static_cast<unsigned long>(p);
  return r.get_ui();
}

}  // namespace detail

/// An element of a FieldSpec. Rationals are kept canonical (lowest terms,
/// positive denominator); residues lie in [0, p).
class Scalar {
 public:
  Scalar() : value_(mpq_class(0)) {}

  static Scalar zero(const FieldSpec& field) { return from_int(field, 0); }
  static Scalar one(const FieldSpec& field) { return from_int(field, 1); }

  static Scalar from_int(const FieldSpec& field, long long value) {
    switch (field.kind()) {
      case FieldKind::Rational: return Scalar(field, mpq_class(mpz_class(static_cast<long>(value))));
      case FieldKind::Prime: return Scalar(field, detail::reduce_mpz(mpz_class(static_cast<long>(value)), field.modulus()));
      case FieldKind::Approx: return Scalar(field, static_cast<double>(value));
    }
    return {};
  }

  static Scalar from_rational(const FieldSpec& field, const mpq_class& q) {
    switch (field.kind()) {
      case FieldKind::Rational: {
        mpq_class c = q;
        c.canonicalize();
        return Scalar(field, std::move(c));
      }
      case FieldKind::Prime: {
        std::uint64_t den = detail::reduce_mpz(q.get_den(), field.modulus());
        if (den == 0) throw Error(ErrorCode::ZeroInverse, "denominator vanishes modulo " + std::to_string(field.modulus()));
        std::uint64_t num = detail::reduce_mpz(q.get_num(), field.modulus());
        return Scalar(field, num * detail::inverse_mod(den, field.modulus()) % field.modulus());
      }
      case FieldKind::Approx: return Scalar(field, q.get_d());
    }
    return {};
  }

  static Scalar from_double(const FieldSpec& field, double value) {
    if (field.kind() != FieldKind::Approx) throw Error(ErrorCode::FieldMismatch, "floating value in exact field");
    return Scalar(field, value);
  }

  const FieldSpec& field() const { return field_; }

  const mpq_class& rational() const { return std::get<mpq_class>(value_); }
  std::uint64_t residue() const { return std::get<std::uint64_t>(value_); }
  double approx() const { return std::get<double>(value_); }

  bool is_zero() const {
    switch (field_.kind()) {
      case FieldKind::Rational: return sgn(rational()) == 0;
      case FieldKind::Prime: return residue() == 0;
      case FieldKind::Approx: return std::fabs(approx()) <= field_.epsilon();
    }
    return false;
  }

  bool is_one() const { return *this == one(field_); }

  Scalar operator-() const {
    switch (field_.kind()) {
      case FieldKind::Rational: return Scalar(field_, mpq_class(-rational()));
      case FieldKind::Prime: return Scalar(field_, residue() == 0 ? std::uint64_t{0} : field_.modulus() - residue());
      case FieldKind::Approx: return Scalar(field_, -approx());
    }
    return {};
  }

  Scalar& operator+=(const Scalar& rhs) { return *this = *this + rhs; }
  Scalar& operator-=(const Scalar& rhs) { return *this = *this - rhs; }
  Scalar& operator*=(const Scalar& rhs) { return *this = *this * rhs; }
  Scalar& operator/=(const Scalar& rhs) { return *this = *this / rhs; }

  friend Scalar operator+(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    switch (a.field_.kind()) {
      case FieldKind::Rational: return Scalar(a.field_, mpq_class(a.rational() + b.rational()));
      case FieldKind::Prime: return Scalar(a.field_, (a.residue() + b.residue()) % a.field_.modulus());
      case FieldKind::Approx: return Scalar(a.field_, a.approx() + b.approx());
    }
    return {};
  }

  friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

  friend Scalar operator*(const Scalar& a, const Scalar& b) {
    check_same(a, b);
    switch (a.field_.kind()) {
      case FieldKind::Rational: return Scalar(a.field_, mpq_class(a.rational() * b.rational()));
      case FieldKind::Prime: return Scalar(a.field_, a.residue() * b.residue() % a.field_.modulus());
      case FieldKind::Approx: return Scalar(a.field_, a.approx() * b.approx());
    }
    return {};
  }

  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * invert(b); }

  /// Exact equality over Rational/Prime. Approx compares |a-b| against
  /// epsilon * max(1, |a|, |b|); epsilon 0 is strict float equality.
  friend bool operator==(const Scalar& a, const Scalar& b) {
    if (a.field_ != b.field_) return false;
    switch (a.field_.kind()) {
      case FieldKind::Rational: return a.rational() == b.rational();
      case FieldKind::Prime: return a.residue() == b.residue();
      case FieldKind::Approx: {
        double x = a.approx(), y = b.approx();
        double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
        return std::fabs(x - y) <= a.field_.epsilon() * scale;
      }
    }
    return false;
  }

  friend Scalar invert(const Scalar& a) {
    if (a.is_zero()) throw Error(ErrorCode::ZeroInverse, "inverse of zero");
    switch (a.field_.kind()) {
      case FieldKind::Rational: return Scalar(a.field_, mpq_class(1 / a.rational()));
      case FieldKind::Prime: return Scalar(a.field_, detail::inverse_mod(a.residue(), a.field_.modulus()));
      case FieldKind::Approx: return Scalar(a.field_, 1.0 / a.approx());
    }
    return {};
  }

 private:
  using Value = std::variant<mpq_class, std::uint64_t, double>;

  Scalar(const FieldSpec& field, mpq_class v) : field_(field), value_(std::move(v)) { std::get<mpq_class>(value_).canonicalize(); }
  Scalar(const FieldSpec& field, std::uint64_t v) : field_(field), value_(v) {}
  Scalar(const FieldSpec& field, double v) : field_(field), value_(v) {}

  static void check_same(const Scalar& a, const Scalar& b) {
    if (a.field_ != b.field_) {
      throw Error(ErrorCode::FieldMismatch, a.field_.to_string() + " vs " + b.field_.to_string());
    }
  }

  FieldSpec field_;
  Value value_;
};

using Vector = std::vector<Scalar>;

/// Text grammar: `[+-]?digits(/digits)?` for exact fields, a decimal or
/// scientific literal for Approx. `a/b` means a * b^-1 in the field.
inline Scalar parse_scalar(std::string_view text, const FieldSpec& field) {
  auto bad = [&](const char* why) {
    return Error(ErrorCode::ParseError, "bad scalar '" + std::string(text) + "' (" + why + ")");
  };
  if (field.kind() == FieldKind::Approx) {
    std::string_view body = text;
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (body.empty() || ec != std::errc() || ptr != body.data() + body.size()) throw bad("expected decimal literal");
    if (!std::isfinite(value)) throw bad("not finite");
    return Scalar::from_double(field, value);
  }

  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && text[end] >= '0' && text[end] <= '9') ++end;
    return end;
  };
  std::size_t num_end = digits(pos);
  if (num_end == pos) throw bad("expected digits");
  mpz_class num(std::string(text.substr(pos, num_end - pos)));
  if (negative) num = -num;
  mpz_class den = 1;
  if (num_end < text.size()) {
    if (text[num_end] != '/') throw bad("unexpected character");
    std::size_t den_end = digits(num_end + 1);
    if (den_end == num_end + 1 || den_end != text.size()) throw bad("expected digits after '/'");
    den = mpz_class(std::string(text.substr(num_end + 1, den_end - num_end - 1)));
  }
  if (den == 0) throw Error(ErrorCode::ZeroInverse, "zero denominator in '" + std::string(text) + "'");
  return Scalar::from_rational(field, mpq_class(num, den));
}

/// Inverse of parse_scalar on canonical scalars.
inline std::string format_scalar(const Scalar& a) {
  switch (a.field().kind()) {
    case FieldKind::Rational: return a.rational().get_str();
    case FieldKind::Prime: return std::to_string(a.residue());
    case FieldKind::Approx: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, a.approx());
      return std::string(buf, res.ptr);
    }
  }
  return {};
}

inline Vector zero_vector(const FieldSpec& field, std::size_t n) { return Vector(n, Scalar::zero(field)); }

inline Vector unit_vector(const FieldSpec& field, std::size_t n, std::size_t i) {
  Vector e = zero_vector(field, n);
  e[i] = Scalar::one(field);
  return e;
}

inline bool vectors_equal(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

inline Vector operator-(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
  Vector out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] - b[i]);
  return out;
}

inline Vector operator+(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector lengths differ");
  Vector out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + b[i]);
  return out;
}

}  // namespace mapequiv
