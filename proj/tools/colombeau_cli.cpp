#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "colombeau/app.hpp"

int main(int argc, char** argv) {
  using namespace colombeau;
  CLI::App app{"Colombeau generalized functions and thin-shell NEC laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::vector<std::string> overrides;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "CSV output path (overrides output.csv)");
    sub->add_option("--set", overrides, "key=value override, repeatable")->take_all();
  };
  auto* rules = app.add_subcommand("rules", "run the association and non-negativity rule suite");
  auto* geometry = app.add_subcommand("geometry", "proper distance table, round trips and throat constants");
  auto* report = app.add_subcommand("mollifier-report", "mollifier diagnostics");
  auto* sweep = app.add_subcommand("nec-sweep", "NEC sweep over throat radius and alpha2");
  for (auto* s : {rules, geometry, report, sweep}) common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& o : overrides) apply_override(cfg, o);
    if (!out_path.empty()) cfg.output_csv = out_path;
    cfg.validate();
    if (rules->parsed()) return run_rules(cfg, std::cout, std::cerr);
    if (geometry->parsed()) return run_geometry(cfg, std::cout, std::cerr);
    if (report->parsed()) return run_mollifier_report(cfg, std::cout, std::cerr);
    return run_nec_sweep(cfg, std::cout, std::cerr, threads_from_env());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
