// Command-line front end: pwave <experiment> --config <path> [--set key=value ...] --out <dir>
#include <CLI11.hpp>

#include <iostream>

#include "pwave/error.hpp"
#include "pwave/harness.hpp"
#include "pwave/json_io.hpp"
#include "pwave/kakutani.hpp"

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const pwave::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pwave::kExitIo;
  } catch (const pwave::InstabilityError& e) {
    std::cerr << "instability: " << e.what() << "\n";
    return pwave::kExitInstability;
  } catch (const pwave::InvalidInput& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return pwave::kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pwave::kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral cubic wave simulator and Monte-Carlo harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::vector<std::string> overrides;
  for (const char* name : {"tails", "events", "growth", "continuity", "kakutani", "evolve"}) {
    auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--set", overrides, "override a configuration key (key=value)");
    sub->add_option("--out", out_dir, "output directory");
  }

  pwave::BaseProfile profile;
  std::vector<int> mode;
  std::string base_out;
  double a0 = 0.0, a1 = 0.0;
  auto* mk = app.add_subcommand("make_base", "write a base spectrum file");
  mk->add_option("--profile", profile.kind, "single_mode | power_decay | custom")->required();
  mk->add_option("--mode", mode, "lattice index for single_mode")->expected(3);
  mk->add_option("--sigma", profile.sigma, "decay exponent for power_decay");
  mk->add_option("--n-max", profile.n_max, "truncation radius");
  mk->add_option("--amplitude", profile.amplitude, "overall amplitude");
  auto* a0_opt = mk->add_option("--a0", a0, "position zero mode");
  auto* a1_opt = mk->add_option("--a1", a1, "velocity zero mode");
  mk->add_option("--path", profile.path, "input file for custom");
  mk->add_option("--s", profile.s, "Sobolev index recorded in the file and used for the printed norm");
  mk->add_option("--out", base_out, "output JSON file")->required();

  std::string left, right, classify_out;
  auto* cl = app.add_subcommand("classify", "Kakutani classification of two spectra");
  cl->add_option("base", left, "first spectrum JSON")->required();
  cl->add_option("other", right, "second spectrum JSON")->required();
  cl->add_option("--out", classify_out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pwave::kExitValidation;
  }

  if (mk->parsed()) {
    return guarded([&] {
      if (!mode.empty()) profile.mode = {mode[0], mode[1], mode[2]};
      if (a0_opt->count()) profile.a0 = a0;
      if (a1_opt->count()) profile.a1 = a1;
      const auto S = pwave::make_base(profile);
      pwave::save_spectrum(S, base_out);
      if (pwave::regularity_warning(profile, profile.s))
        std::cerr << "warning: decay sigma=" << profile.sigma << " does not place the data in H^" << profile.s
                  << " uniformly in n_max\n";
      std::cout << pwave::format_double(pwave::sobolev_norm(S, profile.s, pwave::Component::pair)) << "\n";
      return pwave::kExitOk;
    });
  }

  if (cl->parsed()) {
    return guarded([&] {
      const auto rep = pwave::classify(pwave::load_spectrum(left), pwave::load_spectrum(right));
      nlohmann::json j{{"log_affinity", rep.log_affinity},
                       {"affinity", std::exp(rep.log_affinity)},
                       {"partial_ratio_sum", rep.partial_ratio_sum},
                       {"verdict", pwave::to_string(rep.verdict)},
                       {"zero_mismatch", rep.zero_mismatch},
                       {"slots", rep.slots}};
      if (classify_out.empty())
        pwave::write_json(std::cout, j);
      else
        pwave::write_file_atomic(classify_out, pwave::dump_json(j));
      return pwave::kExitOk;
    });
  }

  for (auto* sub : app.get_subcommands()) {
    return guarded([&] {
      const auto experiment = pwave::experiment_from_name(sub->get_name());
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(pwave::read_file(config_path));
      } catch (const nlohmann::json::parse_error& e) {
        throw pwave::IoError("cannot parse " + config_path + ": " + e.what());
      }
      for (const auto& o : overrides) pwave::apply_override(j, o);
      if (!out_dir.empty()) j["out"] = out_dir;
      const auto cfg = pwave::config_from_json(j, experiment);
      const auto manifest = pwave::run(cfg);
      std::cout << (cfg.out / "manifest.json").string() << "\n";
      pwave::write_json(std::cout, manifest.summary);
      return pwave::kExitOk;
    });
  }
  return pwave::kExitFailure;
}
