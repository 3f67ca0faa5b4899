#ifndef GCOT_COMMANDS_HPP_
#define GCOT_COMMANDS_HPP_

// Command implementations behind the gcot tool. Each command consumes parsed
// inputs and returns an exit code plus a JSON result; run_command wraps it in
// a report and maps errors to exit codes.

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gcot/calibration.hpp"
#include "gcot/chain.hpp"
#include "gcot/czt.hpp"
#include "gcot/error.hpp"
#include "gcot/json_io.hpp"
#include "gcot/nbp.hpp"
#include "gcot/solver.hpp"
#include "gcot/structure.hpp"

namespace gcot {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitFalse = 1, kExitInvalid = 2, kExitBudget = 3 };

struct GlobalOptions {
  std::uint64_t budget = 50'000'000;
  bool json = false;
  std::uint64_t seed = 0;
};

struct CommandResult {
  int exit_code = kExitOk;
  Json result = Json::object();
  Json witnesses = Json::array();
  std::string summary;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kInvalidInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidInput, "cannot write " + path);
  out << text;
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kInvalidInput, origin + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Comma-separated integers, e.g. "2,4".
inline std::vector<long> parse_int_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stol(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::kInvalidInput, "not an integer list: \"" + text + "\"");
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidInput, "empty integer list");
  return out;
}

// An element written as comma-separated rationals, e.g. "1,0" or "3/2".
inline GroupElement parse_element_text(const GroupSpec& spec, const std::string& text) {
  GroupElement x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) x.coords.push_back(parse_scalar(item));
  require_conforms(spec, x);
  return x;
}

inline Json triple_to_json(const Triple& t) {
  return Json::array({element_to_json(t[0]), element_to_json(t[1]), element_to_json(t[2])});
}

// --- commands -------------------------------------------------------------

inline CommandResult cmd_solve(const Instance& inst, const std::string& method, bool certify,
                               const GlobalOptions& g) {
  SolveOptions opts;
  opts.budget = g.budget;
  TransportPlan plan;
  if (method == "brute") {
    plan = solve_brute(inst, opts);
  } else if (method == "auto" || method == "decomposed") {
    plan = solve(inst, opts);
  } else {
    throw Error(ErrorCode::kInvalidInput, "unknown method \"" + method + "\"");
  }
  CommandResult r;
  r.result["plan"] = plan_to_json(plan);
  r.result["cost"] = to_string(*plan.cost);
  r.summary = "cost " + to_string(*plan.cost) + " (" + plan.method + ")";
  if (certify) {
    Json certs = Json::array();
    for (std::size_t f = 0; f < inst.group().factor_count(); ++f) {
      if (inst.group().factor(f).kind == FactorKind::kMod) continue;
      Instance part = inst.project_factor(f);
      DualCertificate cert = kantorovich_dual(part);
      Scalar primal = *solve_flow(part).cost;
      Json p = Json::array();
      for (const Scalar& x : cert.potentials) p.push_back(to_string(x));
      Scalar gap = primal - cert.value;
      certs.push_back({{"factor", f}, {"potentials", p}, {"value", to_string(cert.value)},
                       {"primal", to_string(primal)}, {"gap", to_string(gap)}});
      if (gap != 0) throw Error(ErrorCode::kNotCalibrated, "duality gap " + to_string(gap) + " on factor " + std::to_string(f));
    }
    r.result["certificates"] = certs;
  }
  return r;
}

inline Json nbp_report_to_json(const NbpReport& rep) {
  Json rows = Json::array();
  for (const ViolatedRow& v : rep.violated_rows) {
    rows.push_back({{"row", v.row}, {"coeff_norm", to_string(v.coeff_norm)}, {"split_norm", to_string(v.split_norm)}});
  }
  Json j = {{"nbp", rep.nbp}, {"acyclic", rep.acyclic}, {"violated_rows", rows}};
  j["cycle_witness"] = rep.cycle_witness ? Json(*rep.cycle_witness) : Json(nullptr);
  return j;
}

inline CommandResult cmd_check_nbp(const GroupSpec& group, const std::vector<GroupElement>& coeffs,
                                   const TransportPlan& plan, const GlobalOptions&) {
  NbpReport rep = check_nbp(plan, group, coeffs);
  CommandResult r;
  r.result = nbp_report_to_json(rep);
  if (!rep.nbp) {
    r.exit_code = kExitFalse;
    r.witnesses = r.result["violated_rows"];
  }
  r.summary = std::string(rep.nbp ? "nonbranching" : "branching") + (rep.acyclic ? ", acyclic" : ", has a cycle");
  return r;
}

// With a metric the per-factor choices are made optimally for it.
inline CommandResult cmd_construct_nbp(const GroupSpec& group, const std::vector<GroupElement>& coeffs,
                                       const std::optional<FiniteMetric>& metric, const GlobalOptions& g) {
  TransportPlan plan;
  if (detail::construct_supported(group)) {
    plan = metric ? construct_nbp(group, coeffs, *metric) : construct_nbp(group, coeffs);
  } else {
    NbpSearchResult found = search_nbp(group, coeffs, {g.budget, false});
    CommandResult r;
    if (!found.plan) {
      r.exit_code = kExitFalse;
      r.result = {{"plan", nullptr}, {"search_space", found.search_space}};
      r.witnesses.push_back({{"coefficients", elements_to_json(coeffs)}, {"search_space", found.search_space}});
      r.summary = "no nonbranching plan (" + std::to_string(found.search_space) + " assignments)";
      return r;
    }
    plan = *found.plan;
  }
  CommandResult r;
  NbpReport rep = check_nbp(plan, group, coeffs);
  r.result = {{"plan", plan_to_json(plan)}, {"report", nbp_report_to_json(rep)}};
  r.summary = "plan built (" + plan.method + ")";
  if (metric) {
    Scalar cost = plan_cost(plan, *metric);
    r.result["plan"]["cost"] = to_string(cost);
    r.summary += ", cost " + to_string(cost);
  }
  return r;
}

inline CommandResult cmd_refute_nbp(const GroupSpec& group, int n_max, const GlobalOptions& g) {
  auto found = find_nbp_counterexample(group, n_max, {g.budget, false});
  CommandResult r;
  if (!found) {
    r.result = {{"refuted", false}, {"n_max", n_max}};
    r.summary = "no counterexample up to " + std::to_string(n_max) + " points";
    return r;
  }
  r.exit_code = kExitFalse;
  r.result = {{"refuted", true},
              {"coefficients", elements_to_json(found->coeffs)},
              {"pattern", found->pattern},
              {"proof_of_absence", {{"search_space", found->search_space}, {"exhaustive", true}}}};
  r.witnesses.push_back({{"coefficients", elements_to_json(found->coeffs)}});
  std::string labels;
  for (const GroupElement& c : found->coeffs) labels += (labels.empty() ? "" : " ") + element_label(c);
  r.summary = "no nonbranching plan for " + labels;
  return r;
}

inline CommandResult cmd_check_czt(const GroupSpec& group, const GlobalOptions&) {
  CztResult res = has_czt(group);
  CommandResult r;
  r.result = {{"czt", res.holds}};
  if (!res.holds) {
    r.exit_code = kExitFalse;
    r.result["witness"] = triple_to_json(*res.witness);
    r.witnesses.push_back(triple_to_json(*res.witness));
    r.summary = "noncollinear triple " + element_label((*res.witness)[0]) + " " + element_label((*res.witness)[1]) +
                " " + element_label((*res.witness)[2]);
  } else {
    r.summary = "every zero-mean triple is collinear";
  }
  return r;
}

inline Json feasibility_to_json(const NormFeasibilityResult& f) {
  Json j = {{"group", group_name(f.moduli)},
            {"moduli", f.moduli},
            {"feasible", f.feasible},
            {"triples", f.triples.size()},
            {"patterns", f.pattern_count}};
  if (f.feasible) {
    Json table = Json::array();
    for (const Scalar& x : f.witness_table) table.push_back(to_string(x));
    j["witness_norm"] = table;
    j["family"] = f.family_description;
  } else {
    Json refs = Json::array();
    for (const PatternRefutation& p : f.refutations) refs.push_back({{"prefix", p.prefix}, {"patterns", p.patterns}});
    j["infeasibility_trace"] = {{"refuted_patterns", f.refuted_count}, {"refutations", refs}};
  }
  return j;
}

inline CommandResult cmd_czt_search(const std::vector<int>& moduli, const GlobalOptions& g) {
  NormFeasibilityResult f = czt_norm_feasibility(moduli, g.budget);
  CommandResult r;
  r.result = feasibility_to_json(f);
  if (!f.feasible) {
    r.exit_code = kExitFalse;
    r.witnesses.push_back(r.result["infeasibility_trace"]);
    r.summary = group_name(moduli) + ": no norm, " + std::to_string(f.refuted_count) + " patterns refuted";
  } else {
    std::string t;
    for (const Scalar& x : f.witness_table) t += (t.empty() ? "" : ",") + to_string(x);
    r.summary = group_name(moduli) + ": norm (" + t + ")";
  }
  return r;
}

inline CommandResult cmd_classify(int max_order, const GlobalOptions& g) {
  if (max_order < 1) throw Error(ErrorCode::kInvalidInput, "max order must be positive");
  CommandResult r;
  Json feasible = Json::array(), infeasible = Json::array(), rows = Json::array();
  for (const ClassificationRow& row : classify_finite_groups(max_order, g.budget)) {
    Json j = feasibility_to_json(row.result);
    j.erase("infeasibility_trace");
    rows.push_back(j);
    (row.result.feasible ? feasible : infeasible).push_back(group_name(row.invariant_factors));
  }
  r.result = {{"max_order", max_order}, {"feasible", feasible}, {"infeasible", infeasible}, {"groups", rows}};
  r.summary = "feasible: " + feasible.dump() + " infeasible: " + infeasible.dump();
  return r;
}

inline CommandResult cmd_indecomposables(const GroupSpec& group, std::optional<Scalar> radius,
                                         const GlobalOptions& g) {
  IndecomposableSet set = list_indecomposables(group, radius, g.budget);
  CommandResult r;
  Json items = Json::array();
  std::string labels;
  for (const IndecomposableEntry& e : set.entries) {
    items.push_back({{"element", element_to_json(e.element)},
                     {"order", e.order ? Json(*e.order) : Json("infinite")}});
    labels += (labels.empty() ? "" : " ") + element_label(e.element);
  }
  r.result = {{"indecomposables", items}};
  r.summary = labels.empty() ? "none" : labels;
  return r;
}

inline Json law_report_to_json(const LawReport& rep) {
  Json j = {{"ok", rep.ok}};
  if (!rep.ok) {
    j["law"] = std::string(1, rep.law);
    j["message"] = rep.message;
    j["witnesses"] = elements_to_json(rep.witnesses);
  }
  if (rep.minimizer) j["minimizer"] = *rep.minimizer;
  if (rep.residual) j["residual"] = element_to_json(*rep.residual);
  return j;
}

inline CommandResult cmd_verify_structure(const GroupSpec& group, const GroupElement& gel, const GroupElement& h,
                                          int n, const GlobalOptions& g) {
  CommandResult r;
  LawReport laws = verify_indecomposable_laws(group, gel, h, n, g.budget);
  r.result["laws"] = law_report_to_json(laws);
  bool ok = laws.ok;
  std::string summary = laws.ok ? "laws hold" : laws.message;
  if (laws.ok && is_indecomposable(group, h, g.budget).indecomposable) {
    try {
      LawReport pair = verify_pairwise_l1(group, gel, h, n, g.budget);
      r.result["pairwise"] = law_report_to_json(pair);
      ok = pair.ok;
      if (!pair.ok) summary = pair.message;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSameSubgroup) throw;
      r.result["pairwise"] = {{"skipped", e.what()}};
    }
  }
  if (!ok) {
    r.exit_code = kExitFalse;
    r.witnesses.push_back(r.result.contains("pairwise") && !r.result["pairwise"].value("ok", true)
                              ? r.result["pairwise"]
                              : r.result["laws"]);
  }
  r.summary = summary;
  return r;
}

inline CommandResult cmd_simplify(const PolyChain1& chain, bool trace, const GlobalOptions& g) {
  std::optional<SimplifyResult> found;
  CommandResult r;
  try {
    found = simplify(chain, {g.budget, false});
  } catch (const NoNbpPlanForStarError& e) {
    r.exit_code = kExitFalse;
    r.result = {{"error", e.what()}, {"vertex", e.vertex()}, {"star_coefficients", elements_to_json(e.coeffs())}};
    r.witnesses.push_back({{"vertex", e.vertex()}, {"coefficients", elements_to_json(e.coeffs())}});
    r.summary = e.what();
    return r;
  }
  const SimplifyResult& res = *found;
  r.result = {{"chain", chain_to_json(res.chain)},
              {"mass_before", to_string(mass(chain))},
              {"mass_after", to_string(mass(res.chain))},
              {"eliminations", res.trace.size()}};
  if (trace) {
    Json steps = Json::array();
    for (const SimplifyStep& s : res.trace) {
      steps.push_back({{"vertex", s.vertex}, {"mass_before", to_string(s.mass_before)},
                       {"mass_after", to_string(s.mass_after)}, {"method", s.method}});
    }
    r.result["trace"] = steps;
  }
  r.summary = "mass " + to_string(mass(chain)) + " -> " + to_string(mass(res.chain)) + " in " +
              std::to_string(res.trace.size()) + " eliminations";
  return r;
}

// Without supplied trees, Z / R factors get the interval tree of an optimal
// dual potential; other factors need trees.
inline CommandResult cmd_calibrate(const Instance& inst, const std::optional<std::vector<FactorCalibration>>& trees,
                                   const GlobalOptions& g) {
  CommandResult r;
  std::vector<FactorCalibration> cands;
  Json potentials = Json::array();
  if (trees) {
    cands = *trees;
  } else {
    for (std::size_t f = 0; f < inst.group().factor_count(); ++f) {
      if (inst.group().factor(f).kind == FactorKind::kMod) {
        throw Error(ErrorCode::kInvalidInput, "factor " + std::to_string(f) + " needs a tree (--trees)");
      }
      DualCertificate cert = kantorovich_dual(inst.project_factor(f));
      // Unit-weight path lengths: the factor weight is applied by the fill.
      std::vector<Scalar> unit = cert.potentials;
      for (Scalar& x : unit) x /= inst.group().factor(f).weight;
      IntervalTree it = interval_tree_from_potential(unit);
      cands.push_back({it.tree, it.map});
      Json p = Json::array();
      for (const Scalar& x : cert.potentials) p.push_back(to_string(x));
      potentials.push_back({{"factor", f}, {"potentials", p}, {"value", to_string(cert.value)}});
    }
  }
  CalibrationValue cv = calibration_value(inst, cands);
  SolveOptions opts;
  opts.budget = g.budget;
  TransportPlan plan = solve(inst, opts);
  Scalar gap = *plan.cost - cv.value;
  Json tj = Json::array();
  for (std::size_t f = 0; f < cands.size(); ++f) {
    tj.push_back({{"tree", tree_to_json(cands[f].tree)}, {"map", cands[f].map}, {"value", to_string(cv.per_factor[f])}});
  }
  r.result = {{"potentials", potentials}, {"trees", tj}, {"value", to_string(cv.value)},
              {"cost", to_string(*plan.cost)}, {"gap", to_string(gap)}, {"calibrated", gap == 0}};
  if (gap != 0) {
    r.exit_code = kExitFalse;
    r.witnesses.push_back({{"gap", to_string(gap)}});
  }
  r.summary = "value " + to_string(cv.value) + ", cost " + to_string(*plan.cost) + ", gap " + to_string(gap);
  return r;
}

// --- report ---------------------------------------------------------------

struct RunOutcome {
  int exit_code = kExitOk;
  Json report;
  std::string summary;
};

// body reads its inputs; digest_input then returns them (file contents and
// arguments in a fixed order). Timing is kept out of the digest.
inline RunOutcome run_command(const std::string& command, const std::function<CommandResult()>& body,
                              const std::function<std::string()>& digest_input) {
  RunOutcome out;
  auto start = std::chrono::steady_clock::now();
  Json report = {{"command", command}, {"version", kVersion}};
  try {
    CommandResult r = body();
    out.exit_code = r.exit_code;
    out.summary = r.summary;
    report["result"] = std::move(r.result);
    report["witnesses"] = std::move(r.witnesses);
  } catch (const Error& e) {
    out.exit_code = e.code() == ErrorCode::kBudgetExceeded ? kExitBudget : kExitInvalid;
    out.summary = e.what();
    report["error"] = {{"code", std::string(error_name(e.code()))}, {"message", e.what()}};
  } catch (const Json::exception& e) {
    out.exit_code = kExitInvalid;
    out.summary = std::string("InvalidInput: ") + e.what();
    report["error"] = {{"code", "InvalidInput"}, {"message", e.what()}};
  }
  report["input_digest"] = fnv1a_hex(command + '\0' + digest_input());
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report["timing"] = {{"wall_ms", ms}};
  report["exit_code"] = out.exit_code;
  out.report = std::move(report);
  return out;
}

}  // namespace gcot

#endif  // GCOT_COMMANDS_HPP_
