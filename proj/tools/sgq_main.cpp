#include <chrono>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sgq/errors.hpp"
#include "sgq/report.hpp"
#include "sgq/scenarios.hpp"

namespace {

const std::string& anchor_of(const std::string& label) {
  const std::string name = label.substr(0, label.find(':'));
  return sgq::find_scenario(name).anchor;
}

int run_list() {
  for (const auto& s : sgq::scenario_registry()) {
    std::cout << s.name << "\n";
    std::cout << "    " << s.description << "\n";
    std::cout << "    " << s.anchor << "\n";
    if (!s.keys.empty()) {
      std::cout << "    params:";
      for (const auto& k : s.keys) std::cout << " " << k;
      std::cout << "\n";
    }
  }
  return 0;
}

// "lo:hi" with both ends integers.
std::pair<int, int> parse_range(const std::string& text,
                                const std::string& flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw sgq::BadParameter(flag + " expects lo:hi, got '" + text + "'");
  try {
    const int lo = std::stoi(text.substr(0, colon));
    const int hi = std::stoi(text.substr(colon + 1));
    if (lo > hi)
      throw sgq::BadParameter(flag + ": empty range '" + text + "'");
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw sgq::BadParameter(flag + " expects lo:hi, got '" + text + "'");
  } catch (const std::out_of_range&) {
    throw sgq::BadParameter(flag + " expects lo:hi, got '" + text + "'");
  }
}

int run_verify(std::vector<std::string> names, bool all,
               const std::vector<std::string>& raw_params, int max_degree,
               const std::string& degrees, const std::string& weights,
               const std::string& format, int jobs,
               const std::string& moment_sign, const std::string& odd_side) {
  sgq::ScenarioParams p;
  p.window.size_bound = max_degree;
  p.moment_sign = moment_sign == "minus" ? -1 : 1;
  p.odd_side = odd_side;
  if (!degrees.empty()) {
    std::tie(p.window.deg_min, p.window.deg_max) =
        parse_range(degrees, "--degrees");
  }
  if (!weights.empty()) {
    std::tie(p.window.weight_min, p.window.weight_max) =
        parse_range(weights, "--weights");
  }
  for (const auto& kv : raw_params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw sgq::BadParameter("--param expects key=value, got '" + kv + "'");
    p.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }

  if (all) {
    names.clear();
    for (const auto& s : sgq::scenario_registry()) names.push_back(s.name);
  }
  if (names.empty())
    throw sgq::BadParameter("no scenarios selected; pass names or --all");

  const int effective_jobs =
      jobs > 0 ? jobs
               : static_cast<int>(
                     std::max(1u, std::thread::hardware_concurrency()));

  const auto t0 = std::chrono::steady_clock::now();
  auto reports = sgq::run_scenarios(names, p, effective_jobs);
  const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();

  if (format == "json") {
    // Per-check timings are zeroed so equal inputs give equal bytes; the
    // wall clock lives only in the summary.
    for (auto& r : reports) r.millis = 0;
    std::cout << sgq::reports_to_json(reports, wall);
  } else {
    for (const auto& r : reports) {
      std::cout << "[" << sgq::to_string(r.verdict) << "] " << r.scenario;
      if (r.windowed) std::cout << " (" << r.window.str() << ")";
      std::cout << " — " << anchor_of(r.scenario) << "\n";
      if (r.verdict != sgq::Verdict::PASS) {
        std::cout << "    " << r.statement << "\n";
        if (!r.witness.empty()) std::cout << "    witness: " << r.witness << "\n";
      }
    }
    const auto s = sgq::summarize(reports);
    std::cout << "summary: " << s.pass << " pass, " << s.fail << " fail, "
              << s.inconclusive << " inconclusive\n";
  }

  const auto s = sgq::summarize(reports);
  if (s.fail > 0) return 1;
  if (s.inconclusive > 0) return 2;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact symbolic checks for shifted symplectic structures"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "List the available scenarios");

  auto* verify_cmd =
      app.add_subcommand("verify", "Run scenarios and report verdicts");
  std::vector<std::string> names;
  bool all = false;
  std::vector<std::string> raw_params;
  int max_degree = 8;
  std::string degrees;
  std::string weights;
  std::string format = "text";
  int jobs = 0;
  std::string moment_sign = "plus";
  std::string odd_side = "left";

  verify_cmd->add_option("scenario", names, "Scenario names (see `list`)");
  verify_cmd->add_flag("--all", all, "Run every registered scenario");
  verify_cmd->add_option("--param", raw_params,
                         "Scenario parameter key=value (repeatable)");
  verify_cmd
      ->add_option("--max-degree", max_degree,
                   "Monomial size bound for realizations")
      ->envname("SGQ_MAX_DEGREE")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--degrees", degrees,
                         "Cohomological degree range lo:hi");
  verify_cmd->add_option("--weights", weights, "Weight range lo:hi");
  verify_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "json"}));
  verify_cmd->add_option("--jobs", jobs, "Worker threads, 0 for auto")
      ->check(CLI::NonNegativeNumber);
  verify_cmd
      ->add_option("--moment-sign", moment_sign,
                   "Sign convention relating contraction and moment")
      ->check(CLI::IsMember({"plus", "minus"}));
  verify_cmd
      ->add_option("--odd-side", odd_side, "Odd-derivative convention")
      ->check(CLI::IsMember({"left", "right"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (list_cmd->parsed()) return run_list();
    return run_verify(names, all, raw_params, max_degree, degrees, weights,
                      format, jobs, moment_sign, odd_side);
  } catch (const sgq::UnknownScenario& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sgq::BadParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
