#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "merodiff/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"merodiff: desk-scale experiments on differences of meromorphic functions"};
  app.require_subcommand(1);

  if (const char* threads = std::getenv("MERODIFF_THREADS")) {
    int n = std::atoi(threads);
    if (n > 0) omp_set_num_threads(n);
  }
  std::string default_out = ".";
  if (const char* dir = std::getenv("MERODIFF_OUT_DIR")) default_out = dir;

  std::string config_path, report_path, out_dir = default_out;
  auto* run = app.add_subcommand("run", "run the experiment described by a config file");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--out", out_dir, "output directory");

  auto* list = app.add_subcommand("list", "list the experiment catalogue");

  auto* plot = app.add_subcommand("plotdata", "re-emit plot CSVs from a report JSON");
  plot->add_option("report", report_path, "report JSON produced by run")->required();
  plot->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      merodiff::Config cfg = merodiff::Config::from_file(config_path);
      merodiff::ExperimentReport rep = merodiff::run_experiment(cfg, out_dir);
      for (const auto& c : rep.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << rep.id << "." << c.name << " = " << c.value
                  << "  (" << c.detail << ")\n";
      std::cout << (rep.all_pass() ? "ALL CHECKS PASSED" : "CHECKS FAILED") << "\n";
      return rep.all_pass() ? 0 : 1;
    }
    if (*list) {
      for (const auto& [id, desc] : merodiff::experiment_catalogue())
        std::cout << id << "\t" << desc << "\n";
      return 0;
    }
    if (*plot) {
      std::ifstream in(report_path);
      if (!in) {
        std::cerr << "cannot open report: " << report_path << "\n";
        return 1;
      }
      nlohmann::json rep = nlohmann::json::parse(in);
      merodiff::emit_plotdata(rep, out_dir);
      return 0;
    }
  } catch (const merodiff::MeroError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad report JSON: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
