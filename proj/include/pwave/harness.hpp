#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pwave/spectrum.hpp"

namespace pwave {

enum class Experiment { tails, events, growth, continuity, kakutani, evolve };

Experiment experiment_from_name(const std::string& name);
std::string to_string(Experiment e);

struct RunConfig {
  Experiment experiment = Experiment::evolve;
  std::filesystem::path base;
  std::filesystem::path other;  // kakutani only
  std::string law = "gaussian";
  double s = 0.5;
  int n_max = -1;  // -1: taken from the base file
  int n_grid = 0;
  double T = 1.0;
  double dt = 1e-3;
  double T_max = 5.0;
  double delta = 0.75;
  double delta_tilde = 0.5;
  double epsilon = 0.1;
  double p1 = 2.0;
  double p2 = 2.0;
  std::vector<double> lambdas;
  std::vector<double> etas{1e-1, 1e-2, 1e-3};
  std::size_t trials = 100;
  std::uint64_t master_seed = 0;
  std::filesystem::path out = "out";

  // experiment-specific
  std::string functional = "hs_pair";  // tails: lp_low | hs_pair | weighted
  double p = 2.0;                      // lp_low exponent
  double sigma = 0.0;                  // hs_pair index
  double N = -1.0;                     // projector cutoff (lp_low, weighted high); < 0: none
  std::string projector = "nonzero";   // weighted: full | high | nonzero
  std::vector<int> N_list{4, 8, 16};
  // kSplitAll for "all"; unset: growth uses all, evolve runs the undecomposed flow
  std::optional<int> N_split;
  double A = 10.0;
  int record_every = 10;
  bool randomize = false;  // evolve: randomize the base first
  std::uint64_t stream_id = 0;
  int workers = 0;  // 0: PWAVE_WORKERS or hardware concurrency

  nlohmann::json echo;  // effective configuration as parsed
};

// Applies JSON keys onto defaults; unknown keys are a ConfigError.
RunConfig config_from_json(const nlohmann::json& j, Experiment experiment);
// "key=value"; value parsed as JSON when possible, else as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);
// Domain checks for the target experiment; throws ConfigError naming the violated constraint.
void validate(const RunConfig& c);

struct OutputFile {
  std::string path;  // relative to the output directory
  std::string sha256;
};

struct RunManifest {
  nlohmann::json config;
  std::string version;
  std::string run_hash;
  std::string started;
  std::string finished;
  std::vector<std::uint64_t> stream_ids;
  std::vector<OutputFile> outputs;
  nlohmann::json summary;
};

nlohmann::json to_json(const RunManifest& m);

// Validates, runs, writes outputs plus manifest.json atomically into c.out.
RunManifest run(const RunConfig& c);

std::string sha256_hex(const std::string& data);

struct BaseProfile {
  std::string kind = "power_decay";  // single_mode | power_decay | custom
  LatticeIndex mode{1, 0, 0};
  double sigma = 3.0;
  int n_max = 8;
  double amplitude = 1.0;
  std::optional<double> a0;  // zero-mode overrides
  std::optional<double> a1;
  std::filesystem::path path;  // custom
  double s = 0.0;
};

// power_decay: every coefficient of both slots amplitude <n>^{-sigma},
// zero modes amplitude unless overridden.
SpectrumPair make_base(const BaseProfile& profile);
// True when the profile's decay does not place the data in H^s uniformly in n_max.
bool regularity_warning(const BaseProfile& profile, double s);

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInstability = 3;
inline constexpr int kExitIo = 4;

}  // namespace pwave
