#pragma once

#include <string>

#include "cartan/io.hpp"
#include "cartan/reconstruction.hpp"
#include "cartan/suites.hpp"

namespace cartan {

inline constexpr const char* kToolName = "cartan-cli";
inline constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
  double tolerance = kDefaultZeroTol;
  std::uint64_t seed = 42;
  std::size_t iso_budget = kDefaultIsoBudget;
  std::string semigroup = "monomial";
};

/// Common report header: tool, version, command, config and input hash.
inline json report_header(const std::string& command, const RunConfig& cfg, const std::string& input_text) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = json{{"tolerance", cfg.tolerance},
                     {"seed", cfg.seed},
                     {"iso_budget", cfg.iso_budget},
                     {"semigroup", cfg.semigroup}};
  j["input_hash"] = hex64(fnv1a64(input_text));
  return j;
}

inline json checks_to_json(const std::vector<PropertyCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back(check_to_json(c));
  return arr;
}

/// "pass", "fail", "inconclusive" or "refused".
inline std::string reconstruction_status(const ReconstructionReport& r, double tol) {
  if (r.refused) return "refused";
  if (r.iso.outcome == IsoOutcome::inconclusive) return "inconclusive";
  if (r.passed() && r.cocycle_residual < tol) return "pass";
  return "fail";
}

inline json reconstruction_to_json(const ReconstructionReport& r, const FiniteGroupoid& input, double tol) {
  json j;
  j["status"] = reconstruction_status(r, tol);
  if (r.refused) {
    j["refusal"] = r.refusal;
    return j;
  }
  j["reconstructed"] = groupoid_to_json(r.reconstructed.groupoid, &r.reconstructed.cocycle);
  json iso;
  iso["outcome"] = to_string(r.iso.outcome);
  iso["nodes"] = r.iso.nodes;
  json bij = json::object();
  for (Elem x = 0; x < r.iso.bijection.size(); ++x)
    bij[r.reconstructed.groupoid.name(x)] = input.name(r.iso.bijection[x]);
  iso["bijection"] = bij;
  j["isomorphism"] = iso;
  j["residuals"] = json{{"cocycle", r.cocycle_residual}, {"hat_round_trip", r.hat_residual}};
  j["summable"] = r.summable;
  j["theorems"] = checks_to_json(r.checks);
  return j;
}

inline json suite_to_json(const SuiteReport& s) {
  return json{{"name", s.name}, {"passed", s.passed()}, {"notes", s.notes}, {"checks", checks_to_json(s.checks)}};
}

}  // namespace cartan
