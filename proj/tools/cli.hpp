#pragma once

// Command-line front end. `run` is kept separate from main() so the test
// suite can drive it in-process.

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mapequiv/mapequiv.hpp"

namespace mapequiv::cli {

enum ExitCode : int { kOk = 0, kNotEquivalent = 1, kUsage = 2, kOracleDisagreement = 3 };

namespace detail {

struct Options {
  std::string group = "gl";
  std::optional<std::string> field;
  std::optional<std::size_t> dim;
  std::optional<std::string> base;
  std::optional<std::string> anchor;
  bool oracle = false;
  bool json = false;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> maps;
};

inline std::string format_vector(const Vector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_scalar(v[i]);
  }
  return out + ")";
}

class Session {
 public:
  Session(const Options& opts, std::ostream& out) : opts_(opts), out_(out), group_(GroupSpec::parse(opts.group)) {}

  SampleMap load(const std::string& path) const {
    std::optional<FieldSpec> field;
    if (opts_.field) field = FieldSpec::parse(*opts_.field);
    return load_dataset_file(path, field, opts_.dim);
  }

  /// Affine groups work on the map differenced at the anchor.
  SampleMap subject(const SampleMap& map) const {
    return group_.is_affine() ? map.differenced(anchor_for(map)) : map;
  }

  SampleKey anchor_for(const SampleMap& map) const {
    return opts_.anchor ? map.resolve_key(*opts_.anchor) : map.samples().begin()->first;
  }

  std::optional<std::vector<SampleKey>> base_for(const SampleMap& map) const {
    if (!opts_.base) return std::nullopt;
    std::vector<SampleKey> keys;
    std::stringstream list(*opts_.base);
    std::string item;
    while (std::getline(list, item, ',')) {
      if (!item.empty()) keys.push_back(map.resolve_key(item));
    }
    return keys;
  }

  BasePoints base_points(const SampleMap& map) const {
    auto keys = base_for(map);
    return keys ? base_from_keys(map, *keys) : select_base_points(map);
  }

  int rank_cmd() {
    SampleMap map = load(opts_.maps.at(0));
    std::size_t k = rank(subject(map));
    if (opts_.json) {
      out_ << nlohmann::json{{"rank", k}}.dump() << '\n';
    } else {
      out_ << k << '\n';
    }
    return kOk;
  }

  int signature_cmd() {
    SampleMap map = subject(load(opts_.maps.at(0)));
    Signature sig = compute_signature(map, base_points(map));
    if (opts_.json) {
      out_ << signature_to_json(sig).dump(2) << '\n';
      return kOk;
    }
    out_ << "k = " << sig.k << '\n' << "base =";
    for (std::size_t i = 0; i < sig.base_keys.size(); ++i) out_ << (i ? ", " : " ") << sig.base_keys[i].to_string();
    out_ << '\n';
    for (const auto& [key, alpha] : sig.coords) out_ << key.to_string() << " = " << format_vector(alpha) << '\n';
    return kOk;
  }

  int canonical_cmd() {
    SampleMap map = subject(load(opts_.maps.at(0)));
    Signature sig = compute_signature(map, base_points(map));
    SampleMap canon = reconstruct_canonical(sig, map.dim(), group_);
    if (opts_.json) {
      out_ << dataset_to_json(canon).dump(2) << '\n';
      return kOk;
    }
    for (const auto& [key, vec] : canon.samples()) out_ << key.to_string() << " = " << format_vector(vec) << '\n';
    return kOk;
  }

  Decision decide_pair(const SampleMap& u, const SampleMap& v) const {
    DecideOptions decide_opts{base_for(u), std::nullopt};
    if (group_.is_affine()) decide_opts.anchor = anchor_for(u);
    return decide(u, v, group_, decide_opts);
  }

  int equiv_cmd(bool witness_only) {
    SampleMap u = load(opts_.maps.at(0));
    SampleMap v = load(opts_.maps.at(1));
    Decision d = decide_pair(u, v);
    if (d.equivalent && !verify_witness(u, v, d, group_)) {
      throw Error(ErrorCode::InternalError, "produced witness failed verification");
    }

    std::optional<bool> oracle;
    if (opts_.oracle) {
      oracle = brute_force_equivalent(u, v, group_);
      oracle_disagreement_ = *oracle != d.equivalent;
    }

    if (witness_only) {
      if (!d.equivalent) {
        out_ << "not equivalent: " << to_string(d.reason) << '\n';
      } else if (opts_.json) {
        out_ << decision_to_json(d).at("witness").dump(2) << '\n';
      } else {
        print_witness(d.witness.value());
      }
    } else if (opts_.json) {
      nlohmann::json report = decision_to_json(d);
      if (oracle) report["oracle"] = *oracle;
      out_ << report.dump(2) << '\n';
    } else {
      if (d.equivalent) {
        out_ << "equivalent\n";
        print_witness(d.witness.value());
      } else {
        out_ << "not equivalent: " << to_string(d.reason) << '\n';
      }
      if (oracle) out_ << "oracle = " << (*oracle ? "equivalent" : "not equivalent") << '\n';
    }
    if (oracle_disagreement_) return kOracleDisagreement;
    return d.equivalent ? kOk : kNotEquivalent;
  }

  int invariants_cmd() {
    SampleMap map = load(opts_.maps.at(0));
    std::optional<SampleKey> anchor;
    if (group_.is_affine()) anchor = anchor_for(map);
    auto gens = evaluate_generators(map, group_, base_for(map), anchor);

    std::optional<bool> independent;
    if (opts_.seed) {
      if (map.field().kind() != FieldKind::Rational) {
        throw Error(ErrorCode::InvalidField, "the independence check runs over the rationals only");
      }
      SampleMap subj = subject(map);
      std::size_t m = group_.is_affine() ? map.size() - 1 : map.size();
      independent = check_algebraic_independence(map.dim(), rank(subj), m, group_.linear_part(), *opts_.seed);
    }

    if (opts_.json) {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& g : gens) arr.push_back({{"label", g.label}, {"value", format_scalar(g.value)}});
      nlohmann::json report = {{"generators", std::move(arr)}};
      if (independent) report["algebraically_independent"] = *independent;
      out_ << report.dump(2) << '\n';
    } else {
      for (const auto& g : gens) out_ << g.label << " = " << format_scalar(g.value) << '\n';
      if (independent) out_ << "algebraically_independent = " << (*independent ? "true" : "false") << '\n';
    }
    return kOk;
  }

  bool oracle_disagreement() const { return oracle_disagreement_; }

 private:
  void print_witness(const Witness& w) {
    out_ << "g = " << w.g.to_string() << '\n';
    if (w.translation) out_ << "translation = " << format_vector(*w.translation) << '\n';
  }

  const Options& opts_;
  std::ostream& out_;
  GroupSpec group_;
  bool oracle_disagreement_ = false;
};

}  // namespace detail

/// Exit codes: 0 success / equivalent, 1 not equivalent, 2 usage or data
/// error, 3 oracle disagreement.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide G-equivalence of sampled vector-valued maps over exact fields", "mapequiv"};
  app.require_subcommand(1);
  detail::Options opts;

  app.add_option("--group", opts.group, "gl | sl | aff-gl | aff-sl")
      ->check(CLI::IsMember({"gl", "sl", "aff-gl", "aff-sl"}));
  app.add_option("--field", opts.field, "CSV only: rational | prime:P | approx:EPS");
  app.add_option("--dim", opts.dim, "CSV only: vector dimension N");
  app.add_option("--base", opts.base, "comma-separated base keys t_1,...,t_k (order significant)");
  app.add_option("--anchor", opts.anchor, "affine anchor key (default: least key)");
  app.add_flag("--oracle", opts.oracle, "equiv: cross-check against brute-force orbit search (GF(p) only)");
  app.add_flag("--json", opts.json, "machine-readable output");
  app.add_option("--seed", opts.seed, "invariants: also certify algebraic independence with this seed");

  struct Command {
    const char* name;
    const char* help;
    std::size_t arity;
  };
  const Command commands[] = {
      {"rank", "dimension of the span of all samples", 1},
      {"signature", "coordinates of every sample in the base-point basis", 1},
      {"canonical", "canonical representative rebuilt from the signature", 1},
      {"equiv", "decide equivalence of two maps", 2},
      {"witness", "print a group element mapping the first map onto the second", 2},
      {"invariants", "evaluate the generating invariants", 1},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->add_option("maps", opts.maps, c.arity == 1 ? "MAP" : "MAP1 MAP2")->required()->expected(static_cast<int>(c.arity));
  }

  std::vector<const char*> argv{"mapequiv"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    detail::Session session(opts, out);
    if (command == "rank") return session.rank_cmd();
    if (command == "signature") return session.signature_cmd();
    if (command == "canonical") return session.canonical_cmd();
    if (command == "invariants") return session.invariants_cmd();
    int code = session.equiv_cmd(command == "witness");
    if (session.oracle_disagreement()) err << "error: oracle disagrees with the signature decision\n";
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace mapequiv::cli
