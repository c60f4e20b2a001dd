#ifndef MERODIFF_EXPERIMENTS_HPP
#define MERODIFF_EXPERIMENTS_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "merodiff/config.hpp"
#include "merodiff/expr.hpp"

namespace merodiff {

struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

struct ExperimentReport {
  std::string id;
  std::vector<CheckResult> checks;
  nlohmann::json series = nlohmann::json::object();
  nlohmann::json metadata = nlohmann::json::object();
  nlohmann::json timing = nlohmann::json::object();  // wall-clock data, excluded from
                                                     // determinism comparisons
  bool all_pass() const;
  nlohmann::json to_json(bool include_timing = true) const;
};

// Runs the experiment named by cfg["experiment"], writes the report JSON and
// per-series CSV files under out_dir, and returns the report. Module errors
// surface as named failing checks, never as a crash.
ExperimentReport run_experiment(const Config& cfg, const std::string& out_dir);

std::vector<std::pair<std::string, std::string>> experiment_catalogue();

// Re-emits the plot CSV files embedded in a report JSON.
void emit_plotdata(const nlohmann::json& report, const std::string& out_dir);

// Named corpus builders (also accepted in configs as "name:arg"; a config
// value starting with "expr:" is parsed as an expression literal instead).
ExprPtr build_cube_product(int K);    // zeros at -k^3: order-1/3 lattice
ExprPtr build_linear_product(int K);  // zeros at -k: order-1 guard case
ExprPtr build_dyadic_gpf(int K);      // simple poles at i*2^k
ExprPtr build_exp_series(int deg);    // truncated sum z^k/k!
ExprPtr corpus_function(const std::string& spec);

}  // namespace merodiff

#endif
