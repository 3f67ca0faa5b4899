#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gcot/commands.hpp"

namespace {

using gcot::Json;

// A group file holds either a group spec or a document with a "group" field.
gcot::GroupSpec load_group(const Json& doc) {
  return gcot::group_from_json(doc.contains("group") ? doc.at("group") : doc);
}

Json load(const std::string& path, std::string& digest) {
  std::string text = gcot::read_file(path);
  digest += text;
  digest += '\0';
  return gcot::parse_json_text(text, path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact transport with normed group coefficients"};
  app.require_subcommand(1);
  app.fallthrough();
  gcot::GlobalOptions global;
  app.add_option("--budget", global.budget, "Node budget for exhaustive searches");
  app.add_flag("--json", global.json, "Print the full JSON report");
  app.add_option("--seed", global.seed, "Seed recorded in the report");

  std::string input, output, plan_file, group_file, trees_file, moduli, g_text, h_text, method = "auto";
  std::string radius_text;
  bool certify = false, trace = false;
  int n_max = 4, max_order = 8, n = 8;

  auto* solve = app.add_subcommand("solve", "Optimal transport plan and cost");
  solve->add_option("-i,--input", input, "Instance JSON")->required();
  solve->add_option("--method", method, "auto | brute | decomposed");
  solve->add_flag("--certify", certify, "Attach dual certificates for Z / R factors");

  auto* check_nbp = app.add_subcommand("check-nbp", "Check a plan for the nonbranching equalities");
  check_nbp->add_option("-i,--input", input, "Instance or coefficient JSON")->required();
  check_nbp->add_option("--plan", plan_file, "Plan JSON")->required();

  auto* construct = app.add_subcommand("construct-nbp", "Build a nonbranching plan");
  construct->add_option("-i,--input", input, "Instance or coefficient JSON")->required();

  auto* refute = app.add_subcommand("refute-nbp", "Search for coefficients without nonbranching plans");
  refute->add_option("--group", group_file, "Group JSON")->required();
  refute->add_option("--n-max", n_max, "Largest coefficient count");

  auto* check_czt = app.add_subcommand("check-czt", "Collinearity of all zero-mean triples");
  check_czt->add_option("--group", group_file, "Group JSON")->required();

  auto* czt_search = app.add_subcommand("czt-search", "Search for a norm with collinear triples");
  czt_search->add_option("--moduli", moduli, "Cyclic factors, e.g. 2,4")->required();

  auto* classify = app.add_subcommand("classify", "Classify finite Abelian groups by order");
  classify->add_option("--max-order", max_order, "Largest group order");

  auto* indec = app.add_subcommand("indecomposables", "List indecomposable elements");
  indec->add_option("--group", group_file, "Group JSON")->required();
  indec->add_option("--radius", radius_text, "Search radius for infinite groups");

  auto* verify = app.add_subcommand("verify-structure", "Check the l1 laws of indecomposables");
  verify->set_help_flag("--help", "Print this help message and exit");  // frees --h
  verify->add_option("--group", group_file, "Group JSON")->required();
  verify->add_option("--g", g_text, "Indecomposable element, e.g. 1,0")->required();
  verify->add_option("--h", h_text, "Second element")->required();
  verify->add_option("--n", n, "Range of multiples");

  auto* simplify = app.add_subcommand("simplify", "Eliminate interior vertices of a chain");
  simplify->add_option("-i,--input", input, "Chain JSON")->required();
  simplify->add_option("-o,--output", output, "Write the simplified chain here");
  simplify->add_flag("--trace", trace, "Report mass after every elimination");

  auto* calibrate = app.add_subcommand("calibrate", "Dual lower bound and gap");
  calibrate->add_option("-i,--input", input, "Instance JSON")->required();
  calibrate->add_option("--trees", trees_file, "Per-factor trees and maps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : gcot::kExitInvalid;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  std::string digest;
  std::function<gcot::CommandResult()> body;

  if (sub == solve) {
    body = [&] {
      Json doc = load(input, digest);
      digest += method + (certify ? "+certify" : "");
      return gcot::cmd_solve(gcot::instance_from_json(doc), method, certify, global);
    };
  } else if (sub == check_nbp || sub == construct) {
    body = [&] {
      Json doc = load(input, digest);
      gcot::GroupSpec group = load_group(doc);
      auto coeffs = gcot::elements_from_json(group, gcot::field(doc, "coefficients"));
      if (sub == construct) {
        std::optional<gcot::FiniteMetric> metric;
        if (doc.contains("metric")) metric = gcot::metric_from_json(doc.at("metric"));
        return gcot::cmd_construct_nbp(group, coeffs, metric, global);
      }
      Json pj = load(plan_file, digest);
      return gcot::cmd_check_nbp(group, coeffs, gcot::plan_from_json(group, pj.contains("plan") ? pj.at("plan") : pj),
                                 global);
    };
  } else if (sub == refute) {
    body = [&] {
      Json doc = load(group_file, digest);
      digest += std::to_string(n_max);
      return gcot::cmd_refute_nbp(load_group(doc), n_max, global);
    };
  } else if (sub == check_czt) {
    body = [&] { return gcot::cmd_check_czt(load_group(load(group_file, digest)), global); };
  } else if (sub == czt_search) {
    body = [&] {
      digest += moduli;
      std::vector<int> m;
      for (long x : gcot::parse_int_list(moduli)) m.push_back(static_cast<int>(x));
      return gcot::cmd_czt_search(m, global);
    };
  } else if (sub == classify) {
    body = [&] {
      digest += std::to_string(max_order);
      return gcot::cmd_classify(max_order, global);
    };
  } else if (sub == indec) {
    body = [&] {
      Json doc = load(group_file, digest);
      digest += radius_text;
      std::optional<gcot::Scalar> radius;
      if (!radius_text.empty()) radius = gcot::parse_scalar(radius_text);
      return gcot::cmd_indecomposables(load_group(doc), radius, global);
    };
  } else if (sub == verify) {
    body = [&] {
      Json doc = load(group_file, digest);
      digest += g_text + '\0' + h_text + '\0' + std::to_string(n);
      gcot::GroupSpec group = load_group(doc);
      return gcot::cmd_verify_structure(group, gcot::parse_element_text(group, g_text),
                                        gcot::parse_element_text(group, h_text), n, global);
    };
  } else if (sub == simplify) {
    body = [&] {
      Json doc = load(input, digest);
      gcot::CommandResult r = gcot::cmd_simplify(gcot::chain_from_json(doc), trace, global);
      if (!output.empty() && r.result.contains("chain")) gcot::write_file(output, r.result["chain"].dump(2) + "\n");
      return r;
    };
  } else {
    body = [&] {
      Json doc = load(input, digest);
      std::optional<std::vector<gcot::FactorCalibration>> trees;
      if (!trees_file.empty()) trees = gcot::calibrations_from_json(load(trees_file, digest));
      return gcot::cmd_calibrate(gcot::instance_from_json(doc), trees, global);
    };
  }

  gcot::RunOutcome out = gcot::run_command(name, body, [&] { return digest; });
  out.report["seed"] = global.seed;
  if (global.json) {
    std::cout << out.report.dump(2) << "\n";
  } else {
    std::cout << name << ": " << out.summary << "\n";
  }
  return out.exit_code;
}
