#include "hpt_cli/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "hpt/errors.hpp"
#include "hpt/expression.hpp"
#include "hpt/gaussian_space.hpp"
#include "hpt/linfty.hpp"
#include "hpt_cli/collection.hpp"

namespace hpt::cli {

namespace {

using nlohmann::json;

struct Config {
  std::string space = "gaussian";
  std::string rv;
  std::string word;
  std::string collection;
  std::string expression;
  std::size_t max = 6;
  std::size_t max_arity = 4;
  std::string format = "plain";
  std::uint64_t seed = 0;
  std::string convention = "bracket";
  bool raw = false;
};

// A check failed; the message is the report.
struct CheckFailure {
  std::string report;
};

SpaceHandle load_space(const std::string& source) {
  if (source == "gaussian") return gaussian_space();
  if (source == "fixture") return make_finite_table_space(fixture_space_spec(), "fixture");
  return make_finite_table_space(load_space_file(source), source);
}

// Every command except `validate` refuses spaces that break the axioms.
SpaceHandle load_valid_space(const std::string& source, std::uint64_t seed) {
  SpaceHandle space = load_space(source);
  const ValidationReport report = space->check_axioms(seed);
  if (!report.valid()) throw CheckFailure{"space '" + source + "' is not valid:\n" + report.to_string()};
  return space;
}

// Splits at top-level commas.
std::vector<std::string> split_word(const std::string& text) {
  std::vector<std::string> parts;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

SymWord parse_word(const SpaceHandle& space, const std::string& text) {
  std::vector<Element> entries;
  for (const auto& part : split_word(text)) entries.push_back(parse_expression(*space, part));
  return SymWord(space, std::move(entries));
}

std::string join(const std::vector<Rational>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += to_string(values[i]);
  }
  return out;
}

json rational_array(const std::vector<Rational>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(to_string(v));
  return arr;
}

std::string index_label(const std::vector<int>& idx) {
  std::string out = "(";
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += ", ";
    out += "b" + std::to_string(idx[i] + 1);
  }
  return out + ")";
}

void require_morphism(const HRVCollection& x, const SpaceHandle& space, std::size_t arity) {
  const MorphismReport report = is_morphism(x, space, arity);
  if (!report.ok) throw CheckFailure{"refusing a non-morphism: " + report.to_string()};
}

int statistics(const Config& cfg, bool cumulant, std::ostream& out) {
  const SpaceHandle space = load_valid_space(cfg.space, cfg.seed);
  const char* kind = cumulant ? "cumulants" : "moments";
  const int sources = !cfg.rv.empty() + !cfg.word.empty() + !cfg.collection.empty();
  if (sources != 1) throw CLI::ValidationError("exactly one of --rv, --word, --collection is required");

  if (!cfg.word.empty()) {
    const SymWord w = parse_word(space, cfg.word);
    const Rational value = cumulant ? total_cumulant(space, w) : total_moment(space, w);
    if (cfg.format == "json")
      out << json{{"command", kind}, {"word", w.to_string()}, {"value", to_string(value)}}.dump() << "\n";
    else
      out << to_string(value) << "\n";
    return kOk;
  }

  if (!cfg.rv.empty()) {
    const Element f = parse_expression(*space, cfg.rv);
    const Limits limits;
    if (cfg.max == 0 || cfg.max > (cumulant ? limits.partition_cap : limits.moment_cap))
      throw SizeLimitError(std::string("--max for ") + kind + " must lie in 1.." +
                           std::to_string(cumulant ? limits.partition_cap : limits.moment_cap));
    if (!cfg.raw) require_morphism(HRVCollection::strict(space, {f}), space, std::min(cfg.max, cfg.max_arity));
    std::vector<Rational> values;
    if (cfg.raw && !cumulant) {
      // plain E(f^n); f need not be homogeneous here
      Element power = f;
      for (std::size_t n = 1; n <= cfg.max; ++n) {
        if (n > 1) power = space->product(power, f);
        values.push_back(space->expectation(power));
      }
    } else {
      for (std::size_t n = 1; n <= cfg.max; ++n) {
        const SymWord w(space, std::vector<Element>(n, f));
        values.push_back(cumulant ? total_cumulant(space, w) : total_moment(space, w));
      }
    }
    if (cfg.format == "json")
      out << json{{"command", kind}, {"rv", cfg.rv}, {"values", rational_array(values)}}.dump() << "\n";
    else
      out << join(values) << "\n";
    return kOk;
  }

  const HRVCollection x = load_collection_file(space, cfg.collection);
  const JointStatistics stats = joint_statistics(x, space, cfg.max_arity);
  const auto& table = cumulant ? stats.cumulants : stats.moments;
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& [idx, value] : table) arr.push_back({{"indices", idx}, {"value", to_string(value)}});
    out << json{{"command", kind}, {"values", arr}}.dump() << "\n";
  } else {
    for (const auto& [idx, value] : table) out << index_label(idx) << " = " << to_string(value) << "\n";
  }
  return kOk;
}

int transport(const Config& cfg, std::ostream& out) {
  const SpaceHandle space = load_valid_space(cfg.space, cfg.seed);
  if (cfg.word.empty()) throw CLI::ValidationError("transport needs --word");
  Convention conv;
  if (cfg.convention == "bracket")
    conv = Convention::Bracket;
  else if (cfg.convention == "symmetric")
    conv = Convention::Symmetric;
  else
    throw CLI::ValidationError("--convention must be bracket or symmetric");
  std::vector<Element> entries;
  for (const auto& part : split_word(cfg.word)) entries.push_back(parse_expression(*space, part));
  const Element value = transport_structure(space, entries, conv);
  if (cfg.format == "json")
    out << json{{"command", "transport"}, {"arity", entries.size()}, {"value", space->format(value)}}.dump() << "\n";
  else
    out << space->format(value) << "\n";
  return kOk;
}

int reduce(const Config& cfg, std::ostream& out) {
  const SpaceHandle space = load_valid_space(cfg.space, cfg.seed);
  if (space->backend() != Backend::Gaussian)
    throw CLI::ValidationError("reduce is only defined for the gaussian space");
  const std::string text = cfg.expression.empty() ? cfg.rv : cfg.expression;
  if (text.empty()) throw CLI::ValidationError("reduce needs an expression");
  const GaussianElement z = GaussianSpace::get(parse_expression(*space, text));
  if (!z.q.is_zero()) throw CLI::ValidationError("reduce expects a polynomial without eta part");
  const Rational value = homology_reduce(z.p);
  if (cfg.format == "json")
    out << json{{"command", "reduce"}, {"expression", text}, {"value", to_string(value)}}.dump() << "\n";
  else
    out << to_string(value) << "\n";
  return kOk;
}

int check_rv(const Config& cfg, std::ostream& out) {
  const SpaceHandle space = load_valid_space(cfg.space, cfg.seed);
  if (cfg.rv.empty() == cfg.collection.empty()) throw CLI::ValidationError("check-rv needs one of --rv, --collection");
  const HRVCollection x = cfg.rv.empty() ? load_collection_file(space, cfg.collection)
                                         : HRVCollection::strict(space, {parse_expression(*space, cfg.rv)});
  const MorphismReport report = is_morphism(x, space, cfg.max_arity);
  if (cfg.format == "json") {
    json j{{"command", "check-rv"}, {"ok", report.ok}, {"checked_arity", report.checked_arity}};
    if (!report.ok) j["failing_arity"] = *report.failing_arity, j["witness"] = report.witness;
    out << j.dump() << "\n";
  } else {
    out << report.to_string() << "\n";
  }
  return report.ok ? kOk : kCheckFailed;
}

int validate(const Config& cfg, std::ostream& out) {
  const SpaceHandle space = load_space(cfg.space);
  const ValidationReport report = space->check_axioms(cfg.seed);
  if (cfg.format == "json") {
    json violations = json::array();
    for (const auto& v : report.violations) violations.push_back({{"identity", v.identity}, {"witness", v.witness}});
    out << json{{"command", "validate"}, {"valid", report.valid()}, {"checks", report.checks},
                {"violations", violations}}.dump()
        << "\n";
  } else {
    out << report.to_string() << "\n";
  }
  return report.valid() ? kOk : kCheckFailed;
}

int invariance_demo(const Config& cfg, bool space_given, std::ostream& out) {
  const SpaceHandle space = load_valid_space(space_given ? cfg.space : "fixture", cfg.seed);
  Rng rng(cfg.seed);
  const ChainHomotopy h = random_chain_homotopy(space, rng);
  const auto collections = search_hrv_collections(space, cfg.max_arity);
  const InvarianceReport report = homotopy_invariance_check(space, h, collections, cfg.max_arity);
  if (cfg.format == "json") {
    json hj = json::object();
    for (const auto& [name, value] : h.values) hj[name] = to_string(value);
    json j{{"command", "invariance-demo"}, {"homotopy", hj}, {"collections", report.collections},
           {"comparisons", report.comparisons}, {"mismatches", report.mismatches}};
    if (report.shifted_expectation) j["shifted_expectation"] = *report.shifted_expectation;
    out << j.dump() << "\n";
  } else {
    out << "h:";
    for (const auto& [name, value] : h.values) out << " " << name << " -> " << to_string(value);
    if (h.values.empty()) out << " 0";
    out << "\n" << report.to_string() << "\n";
  }
  return report.ok() ? kOk : kCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact homotopy probability computations", "hpt"};
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--space", cfg.space, "gaussian, fixture, or a space JSON file");
  app.add_option("--rv", cfg.rv, "single random variable expression");
  app.add_option("--word", cfg.word, "comma separated expressions");
  app.add_option("--collection", cfg.collection, "JSON sidecar describing a collection");
  app.add_option("--max", cfg.max, "length of moment or cumulant sequences");
  app.add_option("--max-arity", cfg.max_arity, "arity bound for morphism checks and joint statistics");
  app.add_option("--format", cfg.format)->check(CLI::IsMember({"plain", "json"}));
  app.add_option("--seed", cfg.seed);
  app.add_option("--convention", cfg.convention)->check(CLI::IsMember({"bracket", "symmetric"}));
  app.add_flag("--raw", cfg.raw, "skip the morphism check for --rv");

  auto* validate_cmd = app.add_subcommand("validate", "check the axioms of a space");
  auto* moments_cmd = app.add_subcommand("moments", "moments of a variable, word or collection");
  auto* cumulants_cmd = app.add_subcommand("cumulants", "cumulants of a variable, word or collection");
  auto* transport_cmd = app.add_subcommand("transport", "transported structure on a word");
  auto* reduce_cmd = app.add_subcommand("reduce", "homology class scalar of a polynomial");
  reduce_cmd->add_option("expression", cfg.expression);
  auto* check_cmd = app.add_subcommand("check-rv", "test whether a collection is a morphism");
  auto* demo_cmd = app.add_subcommand("invariance-demo", "perturb the expectation and compare statistics");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (validate_cmd->parsed()) return validate(cfg, out);
    if (moments_cmd->parsed()) return statistics(cfg, false, out);
    if (cumulants_cmd->parsed()) return statistics(cfg, true, out);
    if (transport_cmd->parsed()) return transport(cfg, out);
    if (reduce_cmd->parsed()) return reduce(cfg, out);
    if (check_cmd->parsed()) return check_rv(cfg, out);
    if (demo_cmd->parsed()) return invariance_demo(cfg, app.count("--space") > 0, out);
  } catch (const CheckFailure& f) {
    err << f.report << "\n";
    return kCheckFailed;
  } catch (const MorphismError& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace hpt::cli
