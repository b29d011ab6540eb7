#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "casimag/cli.hpp"

using namespace casimag;
using namespace casimag::cli;

namespace {

void add_common(CLI::App* sub, RunSpec& spec, std::string& a, std::string& T, std::string& model,
                std::string& mu_mode, std::string& format) {
  sub->add_option("--material", spec.material_path, "Material file (INI)")->required();
  sub->add_option("--material-name", spec.material_name, "Section in the material file (default: first)");
  sub->add_option("--material2", spec.material2_path, "Material file for the second plate (default: same plate)");
  sub->add_option("--material2-name", spec.material2_name, "Section for the second plate");
  sub->add_option("--model", model, "plasma | drude")
      ->check(CLI::IsMember({"plasma", "drude"}))
      ->capture_default_str();
  sub->add_option("--mu-mode", mu_mode, "static | debye | static-zero-term-only")
      ->check(CLI::IsMember({"static", "debye", "static-zero-term-only"}))
      ->capture_default_str();
  sub->add_option("--a,--a-range", a, "Separation in m: value or start:stop:linear|log:count");
  sub->add_option("--T,--T-range,--t-range", T, "Temperature in K: value or start:stop:linear|log:count");
  sub->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub->add_option("-o,--output", spec.output, "Output file (default: stdout)");
  sub->add_option("--tol", spec.tol, "Relative quadrature and summation tolerance")->capture_default_str();
  sub->add_option("--l-max", spec.l_max, "Largest Matsubara index before giving up")->capture_default_str();
  sub->add_option("--min-temperature", spec.min_temperature, "Lower guard of the static-permeability paths, K")
      ->capture_default_str();
  sub->add_option("--threads", spec.threads, "Worker threads (0: CASIMIR_MAG_THREADS or all cores)");
  sub->add_flag("--force", spec.force, "Evaluate outside validity gates; affected rows are flagged");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir free energy, entropy and pressure between magnetic metal plates"};
  app.set_version_flag("--version", std::string(version) + " (" + CASIMAG_GIT_DESCRIBE + ")");
  app.require_subcommand(1);

  RunSpec spec;
  std::string a, T, model = "plasma", mu_mode = "static", format = "csv", method = "numeric";
  const std::map<std::string, Command> commands{{"free-energy", Command::free_energy}, {"entropy", Command::entropy},
                                                {"pressure", Command::pressure},       {"nernst-scan", Command::nernst_scan},
                                                {"sign-map", Command::sign_map},       {"validate", Command::validate}};
  const std::map<std::string, std::string> help{
      {"free-energy", "Free energy per unit area on an (a, T) grid"},
      {"entropy", "Entropy per unit area on an (a, T) grid"},
      {"pressure", "Pressure on an (a, T) grid"},
      {"nernst-scan", "Entropy scan toward T = 0 with quadratic extrapolation"},
      {"sign-map", "Sign of the Drude entropy at T = 0 across separations"},
      {"validate", "Perturbative results against the Matsubara sum"}};
  for (const auto& [name, cmd] : commands) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_common(sub, spec, a, T, model, mu_mode, format);
    if (cmd == Command::free_energy || cmd == Command::entropy || cmd == Command::pressure)
      sub->add_option("--method", method, "numeric | analytic | abel-plana")
          ->check(CLI::IsMember({"numeric", "analytic", "abel-plana"}))
          ->capture_default_str();
    if (cmd == Command::validate) sub->add_option("--grid", spec.grid, "'default' or omit and give --a and --T");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  for (const auto& [name, cmd] : commands)
    if (app.got_subcommand(name)) spec.command = cmd;
  spec.model = model == "drude" ? Permittivity::drude : Permittivity::plasma;
  spec.mu_mode = mu_mode == "debye"                   ? PermeabilityMode::debye
                 : mu_mode == "static-zero-term-only" ? PermeabilityMode::static_zero_term_only
                                                      : PermeabilityMode::static_mu;
  spec.method = method == "analytic" ? Method::analytic : method == "abel-plana" ? Method::abel_plana : Method::numeric;
  spec.format = format == "json" ? Format::json : Format::csv;
  try {
    if (!a.empty()) spec.a = parse_grid(a, "--a");
    if (!T.empty()) spec.T = parse_grid(T, "--T");
  } catch (const ConfigError& e) {
    std::cerr << "casimag: configuration error: " << e.what() << '\n';
    return exit_config;
  }
  return run(spec);
}
