#include "birkhoff/cli.hpp"
#include "birkhoff/errors.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <utility>

int main(int argc, char** argv) {
  CLI::App app{"Lax pairs and integrability checks for Toda-type systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> n;
  std::optional<std::string> system;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> spectrum;
  std::optional<int> samples;
  bool literal = false;

  std::vector<CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"classify", "check the spectrum and print its diagram"},
      {"simulate", "integrate one trajectory and report invariant drift"},
      {"verify", "run the property checks at random points"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--n", n, "rank");
    sub->add_option("--system", system, "kt | dn_toda | custom_spectrum");
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--spectrum", spectrum, "spectrum vectors as a JSON array");
    sub->add_option("--samples", samples, "sample points for verify");
    sub->add_flag("--paper-literal-eqgen", literal, "use the uncorrected wall equation");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  using namespace birkhoff;
  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    if (spectrum) {
      cfg.spectrum = parse_spectrum_rows(*spectrum);
      cfg.system = SystemKind::custom_spectrum;
      cfg.n = static_cast<int>(cfg.spectrum->cols());
    }
    if (system) cfg.system = parse_system(*system);
    if (n) cfg.n = *n;
    if (seed) cfg.seed = *seed;
    if (out_dir) cfg.output_dir = *out_dir;
    if (samples) cfg.samples = *samples;
    if (literal) cfg.paper_literal_eqgen = true;

    if (subs[0]->parsed()) return cmd_classify(cfg, std::cout, std::cerr);
    if (subs[1]->parsed()) return cmd_simulate(cfg, std::cout, std::cerr);
    return cmd_verify(cfg, std::cout, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
