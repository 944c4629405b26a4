// Batch interface: validate groupoid files, reconstruct, compare reports, run suites.
//
// Exit codes: 0 pass, 1 failure with witness, 2 input error, 3 inconclusive.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "cartan/cartan.hpp"

namespace {

using namespace cartan;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;
constexpr int kInconclusive = 3;

void emit(const json& doc, const std::string& out) {
  const std::string text = doc.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw input_error("cannot write '" + out + "'");
  f << text;
}

struct Input {
  std::string text;
  LoadedGroupoid loaded;
};

Input read_input(const std::string& path) {
  Input in;
  in.text = read_text_file(path);
  in.loaded = load_groupoid_text(in.text, path);
  return in;
}

/// Loads a valid groupoid; validation problems are input errors here.
ContextPtr load_context(const Input& in, double tol) {
  if (!in.loaded.ok()) throw input_error("invalid groupoid: " + describe(in.loaded.problems.violations.front()));
  return TwistContext::make(in.loaded.groupoid, in.loaded.cocycle, tol);
}

SemigroupSpec make_spec(const ContextPtr& ctx, const std::string& semigroup) {
  if (semigroup == "monomial") return SemigroupSpec::monomial(ctx);
  const std::string prefix = "basis:";
  if (semigroup.rfind(prefix, 0) == 0) {
    const std::string path = semigroup.substr(prefix.size());
    const auto basis = basis_from_json(ctx->groupoid(), parse_json_text(read_text_file(path), path));
    return SemigroupSpec::basis_restricted(ctx, basis);
  }
  throw input_error("unknown semigroup '" + semigroup + "' (expected monomial or basis:<file>)");
}

int cmd_validate(const std::string& path, const RunConfig& cfg, const std::string& out) {
  const Input in = read_input(path);
  json doc = report_header("validate", cfg, in.text);
  doc["valid"] = in.loaded.ok();
  doc["elements"] = in.loaded.groupoid.size();
  doc["violations"] = violations_to_json(in.loaded.problems);
  emit(doc, out);
  for (const auto& v : in.loaded.problems.violations) std::cerr << "violation: " << describe(v) << "\n";
  std::cerr << (in.loaded.ok() ? "valid" : "invalid") << "\n";
  return in.loaded.ok() ? kPass : kFail;
}

int cmd_reconstruct(const std::string& path, const RunConfig& cfg, const std::string& out) {
  const Input in = read_input(path);
  const auto ctx = load_context(in, cfg.tolerance);
  const auto spec = make_spec(ctx, cfg.semigroup);
  const auto rep = reconstruct(spec, Rng(cfg.seed, "reconstruct"), cfg.iso_budget, cfg.tolerance);
  json doc = report_header("reconstruct", cfg, in.text);
  const json body = reconstruction_to_json(rep, ctx->groupoid(), cfg.tolerance);
  for (const auto& [k, v] : body.items()) doc[k] = v;
  emit(doc, out);
  const std::string status = reconstruction_status(rep, cfg.tolerance);
  std::cerr << "reconstruct: " << status;
  if (rep.refused) std::cerr << " (" << rep.refusal << ")";
  for (const auto& c : rep.checks)
    if (!c.passed) std::cerr << "\n  failed: " << c.name << ": " << c.witness;
  std::cerr << "\n";
  if (status == "pass") return kPass;
  if (status == "inconclusive") return kInconclusive;
  return kFail;
}

LoadedGroupoid reconstructed_from_report(const std::string& path) {
  const json doc = parse_json_text(read_text_file(path), path);
  if (!doc.is_object() || !doc.contains("reconstructed")) throw input_error(path + ": report has no reconstructed groupoid");
  auto g = parse_groupoid_json(doc.at("reconstructed"));
  if (!g.ok()) throw input_error(path + ": reconstructed groupoid invalid: " + describe(g.problems.violations.front()));
  return g;
}

int cmd_compare(const std::string& a, const std::string& b, const RunConfig& cfg, const std::string& out) {
  const auto ga = reconstructed_from_report(a);
  const auto gb = reconstructed_from_report(b);
  const auto res = groupoids_isomorphic(ga.groupoid, gb.groupoid, cfg.iso_budget, &ga.cocycle, &gb.cocycle);
  json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["command"] = "compare";
  doc["iso_budget"] = cfg.iso_budget;
  doc["outcome"] = to_string(res.outcome);
  doc["nodes"] = res.nodes;
  json bij = json::object();
  for (Elem x = 0; x < res.bijection.size(); ++x) bij[ga.groupoid.name(x)] = gb.groupoid.name(res.bijection[x]);
  doc["bijection"] = bij;
  emit(doc, out);
  std::cerr << "compare: " << to_string(res.outcome) << "\n";
  switch (res.outcome) {
    case IsoOutcome::isomorphic: return kPass;
    case IsoOutcome::not_isomorphic: return kFail;
    case IsoOutcome::inconclusive: return kInconclusive;
  }
  return kFail;
}

int cmd_suite(const std::string& path, const std::string& name, const RunConfig& cfg, const std::string& out) {
  std::vector<std::string> names;
  if (name == "all") names = suite_names();
  else if (std::find(suite_names().begin(), suite_names().end(), name) != suite_names().end()) names = {name};
  else throw input_error("unknown suite '" + name + "' (expected cartan, relations, states, masa or all)");

  const Input in = read_input(path);
  const auto ctx = load_context(in, cfg.tolerance);
  const auto spec = make_spec(ctx, cfg.semigroup);
  json doc = report_header("suite", cfg, in.text);
  doc["suite"] = name;
  json suites = json::array();
  bool ok = true;
  for (const auto& n : names) {
    const SuiteReport rep = run_suite(n, spec, Rng(cfg.seed, "suite/" + n));
    ok = ok && rep.passed();
    suites.push_back(suite_to_json(rep));
    std::cerr << n << ": " << (rep.passed() ? "pass" : "FAIL");
    for (const auto& note : rep.notes) std::cerr << " [" << note << "]";
    for (const auto& c : rep.checks)
      if (!c.passed) std::cerr << "\n  failed: " << c.name << ": " << c.witness;
    std::cerr << "\n";
  }
  doc["passed"] = ok;
  doc["suites"] = suites;
  emit(doc, out);
  return ok ? kPass : kFail;
}

int cmd_fixture(const std::string& name, const std::string& out) {
  if (name == "remark-basis") {
    const auto g = pair_groupoid(2);
    std::vector<Support> basis;
    for (Support s = 0; s < (Support{1} << g.size()); ++s)
      if ((s & ~g.unit_mask()) == 0) basis.push_back(s);
    basis.push_back(g.mask_of({"(1,2)"}));
    basis.push_back(g.mask_of({"(2,1)"}));
    emit(basis_to_json(g, basis), out);
    return kPass;
  }
  const Fixture f = fixture(name);
  emit(groupoid_to_json(f.groupoid, &f.cocycle), out);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cartan semigroup reconstruction of twisted groupoid algebras"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string out;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tolerance, "zero tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "root random seed");
    sub->add_option("--iso-budget", cfg.iso_budget, "isomorphism search node budget");
    sub->add_option("--out", out, "write the report to this path");
  };

  std::string path, path_b, suite_name, fixture_name;
  auto* validate = app.add_subcommand("validate", "check groupoid and cocycle axioms");
  validate->add_option("file", path, "groupoid file")->required();
  add_common(validate);

  auto* recon = app.add_subcommand("reconstruct", "reconstruct groupoid and twist from the Cartan semigroup");
  recon->add_option("file", path, "groupoid file")->required();
  recon->add_option("--semigroup", cfg.semigroup, "monomial or basis:<file>");
  add_common(recon);

  auto* compare = app.add_subcommand("compare", "compare reconstructed groupoids of two reports");
  compare->add_option("report_a", path, "first report")->required();
  compare->add_option("report_b", path_b, "second report")->required();
  add_common(compare);

  auto* suite = app.add_subcommand("suite", "run property suites");
  suite->add_option("file", path, "groupoid file")->required();
  suite->add_option("suite", suite_name, "cartan, relations, states, masa or all")->required();
  suite->add_option("--semigroup", cfg.semigroup, "monomial or basis:<file>");
  add_common(suite);

  auto* fix = app.add_subcommand("fixture", "print a standard fixture as a groupoid file");
  fix->add_option("name", fixture_name, "R2, R3, R4, Z2, Z3, Z4, V4, V4_pauli, swap, R2_disj_Z2 or remark-basis")
      ->required();
  fix->add_option("--out", out, "write to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*validate) return cmd_validate(path, cfg, out);
    if (*recon) return cmd_reconstruct(path, cfg, out);
    if (*compare) return cmd_compare(path, path_b, cfg, out);
    if (*suite) return cmd_suite(path, suite_name, cfg, out);
    if (*fix) return cmd_fixture(fixture_name, out);
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
