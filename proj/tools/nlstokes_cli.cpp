#include "nlstokes/commands.hpp"
#include "nlstokes/config.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw nlstokes::Error(nlstokes::ErrorCode::io_failure, "cannot read config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal Stokes toolkit: kernels, Fourier symbols, spectral solves and convergence studies"};
  app.require_subcommand(1);

  std::string config_path;
  // every config key is also a flag that takes precedence over the file
  std::map<std::string, std::string> flag_values;

  const std::pair<nlstokes::Subcommand, const char*> commands[] = {
      {nlstokes::Subcommand::kernels, "normalize kernels and report moments, admissibility and monotonicity"},
      {nlstokes::Subcommand::symbols, "tabulate lambda and b on a wavenumber grid"},
      {nlstokes::Subcommand::scan, "look for zeros of the gradient symbol b"},
      {nlstokes::Subcommand::solve, "solve the periodic Stokes system in Fourier space"},
      {nlstokes::Subcommand::converge, "run a delta, spectral or compatibility rate study"},
      {nlstokes::Subcommand::grid1d, "audit the 1D regular and staggered gradient stencils"},
      {nlstokes::Subcommand::validate, "cross-check real-space lattice operators with the symbols"},
  };
  std::map<CLI::App*, nlstokes::Subcommand> lookup;
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(nlstokes::to_string(cmd)), help);
    sub->add_option("--config", config_path, "flat JSON config document");
    for (const auto& key : nlstokes::config_keys()) {
      const std::string name(key.name);
      sub->add_option_function<std::string>(
          "--" + name, [&flag_values, name](const std::string& v) { flag_values[name] = v; }, std::string(key.help));
    }
    lookup[sub] = cmd;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << nlstokes::error_json(nlstokes::ConfigError({e.what()})) << '\n';
    return nlstokes::exit_config;
  }

  nlstokes::Subcommand command = nlstokes::Subcommand::kernels;
  for (auto* sub : app.get_subcommands()) command = lookup.at(sub);

  try {
    const std::string text = config_path.empty() ? std::string() : read_file(config_path);
    const nlstokes::ExperimentConfig config = nlstokes::parse_config(command, text, flag_values);
    const nlstokes::RunResult result = nlstokes::run_command(config);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << result.summary << '\n';
    return result.exit_code;
  } catch (const nlstokes::ConfigError& e) {
    std::cerr << nlstokes::error_json(e) << '\n';
    return nlstokes::exit_config;
  } catch (const std::exception& e) {
    std::cerr << nlstokes::error_json(e) << '\n';
    return nlstokes::exit_failure;
  }
}
