#pragma once

// A sampled vector-valued map u: T -> F^n, or a family (u_s)_{s in S} stored
// as one map on composite keys (s, t). Dataset ingestion lives here too.

#include <cctype>
#include <compare>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mapequiv/error.hpp"
#include "mapequiv/field.hpp"
#include "mapequiv/matrix.hpp"

namespace mapequiv {

/// Opaque sample label. Keys without a family label sort before keys with one.
struct SampleKey {
  std::optional<std::string> s;
  std::string t;

  SampleKey() = default;
  SampleKey(std::string t_label) : t(std::move(t_label)) {}  // NOLINT: implicit by intent
  SampleKey(const char* t_label) : t(t_label) {}             // NOLINT
  SampleKey(std::string s_label, std::string t_label) : s(std::move(s_label)), t(std::move(t_label)) {}

  friend auto operator<=>(const SampleKey&, const SampleKey&) = default;
  friend bool operator==(const SampleKey&, const SampleKey&) = default;

  /// `t`, or `s:t` for family keys.
  std::string to_string() const { return s ? *s + ":" + t : t; }
};

class SampleMap {
 public:
  using Samples = std::map<SampleKey, Vector>;

  SampleMap(const FieldSpec& field, std::size_t n, Samples samples)
      : field_(field), n_(n), samples_(std::move(samples)) {
    if (n_ < 1) throw Error(ErrorCode::SchemaViolation, "dimension n must be at least 1");
    if (samples_.empty()) throw Error(ErrorCode::SchemaViolation, "a map needs at least one sample");
    for (const auto& [key, vec] : samples_) {
      if (vec.size() != n_) {
        throw Error(ErrorCode::DimensionMismatch,
                    "sample '" + key.to_string() + "' has " + std::to_string(vec.size()) + " entries, expected " + std::to_string(n_));
      }
      for (const auto& x : vec) {
        if (x.field() != field_) throw Error(ErrorCode::FieldMismatch, "sample '" + key.to_string() + "' has an entry from another field");
      }
    }
  }

  const FieldSpec& field() const { return field_; }
  std::size_t dim() const { return n_; }
  std::size_t size() const { return samples_.size(); }
  const Samples& samples() const { return samples_; }

  const Vector& at(const SampleKey& key) const {
    auto it = samples_.find(key);
    if (it == samples_.end()) throw Error(ErrorCode::UnknownKey, "no sample '" + key.to_string() + "'");
    return it->second;
  }

  bool contains(const SampleKey& key) const { return samples_.count(key) != 0; }

  std::vector<SampleKey> keys() const {
    std::vector<SampleKey> out;
    out.reserve(samples_.size());
    for (const auto& kv : samples_) out.push_back(kv.first);
    return out;
  }

  /// n x m matrix of all sample vectors in key order.
  Matrix as_matrix() const {
    std::vector<Vector> cols;
    cols.reserve(samples_.size());
    for (const auto& kv : samples_) cols.push_back(kv.second);
    return Matrix::from_columns(field_, n_, cols);
  }

  /// Resolves CLI key text: an exact t-only key wins, otherwise `s:t` split at
  /// the first colon.
  SampleKey resolve_key(std::string_view text) const {
    SampleKey plain{std::string(text)};
    if (contains(plain)) return plain;
    auto colon = text.find(':');
    if (colon != std::string_view::npos) {
      SampleKey family{std::string(text.substr(0, colon)), std::string(text.substr(colon + 1))};
      if (contains(family)) return family;
    }
    throw Error(ErrorCode::UnknownKey, "no sample '" + std::string(text) + "'");
  }

  /// g * u(key) for every key.
  SampleMap transformed(const Matrix& g) const {
    if (g.rows() != n_ || g.cols() != n_) throw Error(ErrorCode::DimensionMismatch, "transform must be n x n");
    Samples out;
    for (const auto& [key, vec] : samples_) out.emplace(key, g * vec);
    return SampleMap(field_, n_, std::move(out));
  }

  /// u(key) - u(anchor) for every key.
  SampleMap differenced(const SampleKey& anchor) const {
    const Vector& origin = at(anchor);
    Samples out;
    for (const auto& [key, vec] : samples_) out.emplace(key, vec - origin);
    return SampleMap(field_, n_, std::move(out));
  }

  friend bool operator==(const SampleMap& a, const SampleMap& b) {
    if (a.field_ != b.field_ || a.n_ != b.n_ || a.samples_.size() != b.samples_.size()) return false;
    auto ib = b.samples_.begin();
    for (const auto& [key, vec] : a.samples_) {
      if (!(key == ib->first) || !vectors_equal(vec, ib->second)) return false;
      ++ib;
    }
    return true;
  }

 private:
  FieldSpec field_;
  std::size_t n_ = 0;
  Samples samples_;
};

struct BasePoints {
  std::vector<SampleKey> keys;
  Matrix base_matrix;  // n x k, columns are the map's vectors at `keys`
};

inline std::size_t rank(const SampleMap& map) { return rank(map.as_matrix()); }

/// Greedy scan in key order: a key joins iff its vector is independent of the
/// keys already chosen. These are the pivot columns of the sample matrix.
inline BasePoints select_base_points(const SampleMap& map) {
  Matrix all = map.as_matrix();
  RankProfile profile = rank_profile(all);
  std::vector<SampleKey> keys = map.keys();
  BasePoints base;
  for (std::size_t c : profile.pivot_cols) base.keys.push_back(keys[c]);
  base.base_matrix = all.select_columns(profile.pivot_cols);
  return base;
}

/// Explicit base points (order significant). The listed vectors must be
/// independent and span every sample of the map.
inline BasePoints base_from_keys(const SampleMap& map, const std::vector<SampleKey>& keys) {
  std::set<SampleKey> seen;
  std::vector<Vector> cols;
  for (const auto& key : keys) {
    if (!seen.insert(key).second) throw Error(ErrorCode::InvalidBase, "base key '" + key.to_string() + "' listed twice");
    cols.push_back(map.at(key));
  }
  BasePoints base{keys, Matrix::from_columns(map.field(), map.dim(), cols)};
  if (rank(base.base_matrix) != keys.size()) throw Error(ErrorCode::InvalidBase, "base vectors are linearly dependent");
  if (rank(map) != keys.size()) throw Error(ErrorCode::InvalidBase, "base vectors do not span the map");
  return base;
}

namespace detail {

inline FieldSpec field_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "rational") return FieldSpec::rational();
    throw Error(ErrorCode::InvalidField, "unknown field '" + j.get<std::string>() + "'");
  }
  if (j.is_object() && j.size() == 1) {
    if (j.contains("prime")) {
      const auto& p = j.at("prime");
      if (!p.is_number_unsigned()) throw Error(ErrorCode::InvalidField, "prime must be a positive integer");
      return FieldSpec::prime(p.get<std::uint64_t>());
    }
    if (j.contains("approx")) {
      const auto& e = j.at("approx");
      if (!e.is_number()) throw Error(ErrorCode::InvalidField, "approx epsilon must be a number");
      return FieldSpec::approx(e.get<double>());
    }
  }
  throw Error(ErrorCode::InvalidField, "field must be \"rational\", {\"prime\": P} or {\"approx\": EPS}");
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

inline void insert_sample(SampleMap::Samples& samples, SampleKey key, Vector value) {
  std::string label = key.to_string();
  if (!samples.emplace(std::move(key), std::move(value)).second) {
    throw Error(ErrorCode::DuplicateKey, "duplicate sample key '" + label + "'");
  }
}

}  // namespace detail

/// Canonical JSON dataset:
/// {"field": "rational" | {"prime": P} | {"approx": EPS}, "n": N,
///  "samples": [{"s": "s1", "t": "t1", "value": ["<scalar>", ...]}, ...]}
inline SampleMap load_dataset_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::SchemaViolation, "dataset must be a JSON object");
  for (const char* required : {"field", "n", "samples"}) {
    if (!doc.contains(required)) throw Error(ErrorCode::SchemaViolation, std::string("missing \"") + required + "\"");
  }
  FieldSpec field = detail::field_from_json(doc.at("field"));
  if (!doc.at("n").is_number_unsigned() || doc.at("n").get<std::size_t>() < 1) {
    throw Error(ErrorCode::SchemaViolation, "\"n\" must be a positive integer");
  }
  std::size_t n = doc.at("n").get<std::size_t>();
  if (!doc.at("samples").is_array()) throw Error(ErrorCode::SchemaViolation, "\"samples\" must be an array");

  SampleMap::Samples samples;
  for (const auto& entry : doc.at("samples")) {
    if (!entry.is_object() || !entry.contains("t") || !entry.contains("value")) {
      throw Error(ErrorCode::SchemaViolation, "each sample needs \"t\" and \"value\"");
    }
    if (!entry.at("t").is_string()) throw Error(ErrorCode::SchemaViolation, "\"t\" must be a string");
    SampleKey key{entry.at("t").get<std::string>()};
    if (entry.contains("s") && !entry.at("s").is_null()) {
      if (!entry.at("s").is_string()) throw Error(ErrorCode::SchemaViolation, "\"s\" must be a string");
      key.s = entry.at("s").get<std::string>();
    }
    const auto& value = entry.at("value");
    if (!value.is_array()) throw Error(ErrorCode::SchemaViolation, "\"value\" must be an array of scalar strings");
    if (value.size() != n) {
      throw Error(ErrorCode::DimensionMismatch, "sample '" + key.to_string() + "' has " + std::to_string(value.size()) +
                                                    " entries, expected " + std::to_string(n));
    }
    Vector vec;
    for (const auto& x : value) {
      if (!x.is_string()) throw Error(ErrorCode::SchemaViolation, "scalars must be JSON strings");
      vec.push_back(parse_scalar(x.get<std::string>(), field));
    }
    detail::insert_sample(samples, std::move(key), std::move(vec));
  }
  return SampleMap(field, n, std::move(samples));
}

/// CSV dataset with header `s,t,x1,...,xN` (the `s` column is optional).
/// When `n` is given it must match the number of x columns.
inline SampleMap load_dataset_csv(std::string_view text, const FieldSpec& field, std::optional<std::size_t> n = std::nullopt) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!detail::trim(line).empty()) {
      header = detail::split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorCode::SchemaViolation, "CSV has no header");
  bool has_s = header[0] == "s";
  std::size_t first_x = has_s ? 2 : 1;
  if (header.size() <= first_x || header[first_x - 1] != "t") throw Error(ErrorCode::SchemaViolation, "CSV header must be s,t,x1,... or t,x1,...");
  std::size_t dim = header.size() - first_x;
  for (std::size_t i = 0; i < dim; ++i) {
    if (header[first_x + i] != "x" + std::to_string(i + 1)) {
      throw Error(ErrorCode::SchemaViolation, "CSV column " + std::to_string(first_x + i + 1) + " must be x" + std::to_string(i + 1));
    }
  }
  if (n && *n != dim) {
    throw Error(ErrorCode::DimensionMismatch, "--dim " + std::to_string(*n) + " but CSV has " + std::to_string(dim) + " components");
  }

  SampleMap::Samples samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::DimensionMismatch, "CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) + " cells");
    }
    SampleKey key = has_s ? SampleKey(cells[0], cells[1]) : SampleKey(cells[0]);
    if (has_s && cells[0].empty()) key.s.reset();
    Vector vec;
    for (std::size_t i = 0; i < dim; ++i) vec.push_back(parse_scalar(cells[first_x + i], field));
    detail::insert_sample(samples, std::move(key), std::move(vec));
  }
  return SampleMap(field, dim, std::move(samples));
}

/// Text starting with `{` is JSON, anything else is CSV (which needs a field).
inline SampleMap load_dataset(std::string_view text, std::optional<FieldSpec> csv_field = std::nullopt,
                              std::optional<std::size_t> csv_dim = std::nullopt) {
  std::string_view body = detail::trim(text);
  if (!body.empty() && body.front() == '{') return load_dataset_json(body);
  if (!csv_field) throw Error(ErrorCode::SchemaViolation, "CSV input requires a field (--field)");
  return load_dataset_csv(text, *csv_field, csv_dim);
}

inline SampleMap load_dataset_file(const std::string& path, std::optional<FieldSpec> csv_field = std::nullopt,
                                   std::optional<std::size_t> csv_dim = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SchemaViolation, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return load_dataset(buf.str(), csv_field, csv_dim);
}

inline nlohmann::json key_to_json(const SampleKey& key) {
  nlohmann::json j = nlohmann::json::object();
  if (key.s) j["s"] = *key.s;
  j["t"] = key.t;
  return j;
}

inline nlohmann::json field_to_json(const FieldSpec& field) {
  switch (field.kind()) {
    case FieldKind::Rational: return "rational";
    case FieldKind::Prime: return {{"prime", field.modulus()}};
    case FieldKind::Approx: return {{"approx", field.epsilon()}};
  }
  return nullptr;
}

inline nlohmann::json vector_to_json(const Vector& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : v) arr.push_back(format_scalar(x));
  return arr;
}

/// Serialises in the canonical JSON dataset format.
inline nlohmann::json dataset_to_json(const SampleMap& map) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& [key, vec] : map.samples()) {
    nlohmann::json entry = key_to_json(key);
    entry["value"] = vector_to_json(vec);
    samples.push_back(std::move(entry));
  }
  return {{"field", field_to_json(map.field())}, {"n", map.dim()}, {"samples", std::move(samples)}};
}

}  // namespace mapequiv
