#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "reslab/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"reslab: capacitance, Floquet, Hamiltonian and tight-binding experiments"};
  app.require_subcommand(1);

  std::string config_path;
  reslab::CommandOptions options;
  std::string out_dir = ".";
  bool print_schema = false;
  app.add_flag("--schema", print_schema, "Print the config schema and exit");

  auto add = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_flag("--plot-script", options.plot_script, "Also write a plotting template");
    return sub;
  };
  CLI::App* capmat = add("capmat", "Capacitance matrix by the boundary element method");
  capmat->add_flag("--sweep-refinement", options.sweep_refinement, "Convergence table over refinements");
  capmat->add_flag("--dilute", options.dilute, "Compare with the dilute-regime formula");
  capmat->add_flag("--export-mesh", options.export_mesh, "Write the boundary mesh as OFF");
  CLI::App* floquet = add("floquet", "Floquet quasifrequencies of the Hill system");
  floquet->add_flag("--epsilon-sweep", options.epsilon_sweep, "One table block per swept epsilon");
  CLI::App* hamiltonian = add("hamiltonian", "Hermitian Hamiltonian reformulation");
  CLI::App* tightbinding = add("tightbinding", "Dilute-regime tight-binding approximant");

  // --schema alone is allowed without a subcommand.
  for (int k = 1; k < argc; ++k) {
    if (std::string(argv[k]) == "--schema") {
      std::cout << reslab::config_schema();
      return 0;
    }
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    options.out_dir = out_dir;
    const reslab::ExperimentConfig cfg = reslab::load_config(config_path);
    if (capmat->parsed()) reslab::cmd_capmat(cfg, options, std::cout);
    if (floquet->parsed()) reslab::cmd_floquet(cfg, options, std::cout);
    if (hamiltonian->parsed()) reslab::cmd_hamiltonian(cfg, options, std::cout);
    if (tightbinding->parsed()) reslab::cmd_tightbinding(cfg, options, std::cout);
  } catch (const reslab::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const reslab::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
