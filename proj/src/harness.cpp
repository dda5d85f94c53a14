#include "pwave/harness.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <map>
#include <sstream>

#include "pwave/continuity.hpp"
#include "pwave/deviation.hpp"
#include "pwave/error.hpp"
#include "pwave/evolve.hpp"
#include "pwave/growth.hpp"
#include "pwave/json_io.hpp"
#include "pwave/kakutani.hpp"
#include "pwave/parallel.hpp"
#include "pwave/randomize.hpp"

namespace pwave {

namespace fs = std::filesystem;
using nlohmann::json;

Experiment experiment_from_name(const std::string& name) {
  static const std::map<std::string, Experiment> names{
      {"tails", Experiment::tails},           {"events", Experiment::events},
      {"growth", Experiment::growth},         {"continuity", Experiment::continuity},
      {"kakutani", Experiment::kakutani},     {"evolve", Experiment::evolve}};
  auto it = names.find(name);
  if (it == names.end()) throw ConfigError("unknown experiment '" + name + "'");
  return it->second;
}

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::tails:
      return "tails";
    case Experiment::events:
      return "events";
    case Experiment::growth:
      return "growth";
    case Experiment::continuity:
      return "continuity";
    case Experiment::kakutani:
      return "kakutani";
    case Experiment::evolve:
      return "evolve";
  }
  return "?";
}

namespace {

json echo_of(const RunConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["base"] = c.base.string();
  j["other"] = c.other.string();
  j["law"] = c.law;
  j["s"] = c.s;
  j["n_max"] = c.n_max;
  j["n_grid"] = c.n_grid;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["T_max"] = c.T_max;
  j["delta"] = c.delta;
  j["delta_tilde"] = c.delta_tilde;
  j["epsilon"] = c.epsilon;
  j["p1"] = c.p1;
  j["p2"] = c.p2;
  j["lambdas"] = c.lambdas;
  j["etas"] = c.etas;
  j["trials"] = c.trials;
  j["master_seed"] = std::to_string(c.master_seed);
  j["out"] = c.out.string();
  j["functional"] = c.functional;
  j["p"] = c.p;
  j["sigma"] = c.sigma;
  j["N"] = c.N;
  j["projector"] = c.projector;
  j["N_list"] = c.N_list;
  if (c.N_split) j["N_split"] = *c.N_split == kSplitAll ? json("all") : json(*c.N_split);
  j["A"] = c.A;
  j["record_every"] = c.record_every;
  j["randomize"] = c.randomize;
  j["stream_id"] = std::to_string(c.stream_id);
  return j;
}

std::uint64_t as_u64(const json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    const auto x = v.get<std::int64_t>();
    if (x < 0) throw ConfigError("seed values must be nonnegative");
    return std::uint64_t(x);
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    std::size_t pos = 0;
    std::uint64_t x = 0;
    try {
      x = std::stoull(s, &pos, 10);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || s.empty() || s[0] == '-') throw ConfigError("'" + s + "' is not a 64-bit unsigned integer");
    return x;
  }
  throw ConfigError("expected a 64-bit unsigned integer");
}

std::size_t as_count(const json& v) {
  if (v.is_number_integer()) {
    const auto x = v.get<std::int64_t>();
    if (x < 0) throw ConfigError("trials must be nonnegative");
    return std::size_t(x);
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (!(d >= 0.0) || d != std::floor(d)) throw ConfigError("trials must be a nonnegative integer");
    return std::size_t(d);
  }
  throw ConfigError("trials must be a nonnegative integer");
}

}  // namespace

RunConfig config_from_json(const json& j, Experiment experiment) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  RunConfig c;
  c.experiment = experiment;
  using Setter = std::function<void(const json&)>;
  const std::map<std::string, Setter> setters{
      {"experiment",
       [&](const json& v) {
         if (experiment_from_name(v.get<std::string>()) != experiment)
           throw ConfigError("config names experiment '" + v.get<std::string>() + "' but '" +
                             to_string(experiment) + "' was requested");
       }},
      {"base", [&](const json& v) { c.base = v.get<std::string>(); }},
      {"other", [&](const json& v) { c.other = v.get<std::string>(); }},
      {"law", [&](const json& v) { c.law = v.get<std::string>(); }},
      {"s", [&](const json& v) { c.s = v.get<double>(); }},
      {"n_max", [&](const json& v) { c.n_max = v.get<int>(); }},
      {"n_grid", [&](const json& v) { c.n_grid = v.get<int>(); }},
      {"T", [&](const json& v) { c.T = v.get<double>(); }},
      {"dt", [&](const json& v) { c.dt = v.get<double>(); }},
      {"T_max", [&](const json& v) { c.T_max = v.get<double>(); }},
      {"delta", [&](const json& v) { c.delta = v.get<double>(); }},
      {"delta_tilde", [&](const json& v) { c.delta_tilde = v.get<double>(); }},
      {"epsilon", [&](const json& v) { c.epsilon = v.get<double>(); }},
      {"p1", [&](const json& v) { c.p1 = v.get<double>(); }},
      {"p2", [&](const json& v) { c.p2 = v.is_string() && v.get<std::string>() == "inf" ? infinity : v.get<double>(); }},
      {"lambdas", [&](const json& v) { c.lambdas = v.get<std::vector<double>>(); }},
      {"etas", [&](const json& v) { c.etas = v.get<std::vector<double>>(); }},
      {"trials", [&](const json& v) { c.trials = as_count(v); }},
      {"master_seed", [&](const json& v) { c.master_seed = as_u64(v); }},
      {"out", [&](const json& v) { c.out = v.get<std::string>(); }},
      {"functional", [&](const json& v) { c.functional = v.get<std::string>(); }},
      {"p", [&](const json& v) { c.p = v.is_string() && v.get<std::string>() == "inf" ? infinity : v.get<double>(); }},
      {"sigma", [&](const json& v) { c.sigma = v.get<double>(); }},
      {"N", [&](const json& v) { c.N = v.get<double>(); }},
      {"projector", [&](const json& v) { c.projector = v.get<std::string>(); }},
      {"N_list", [&](const json& v) { c.N_list = v.get<std::vector<int>>(); }},
      {"N_split",
       [&](const json& v) {
         if (v.is_string()) {
           if (v.get<std::string>() != "all") throw ConfigError("N_split must be an integer or \"all\"");
           c.N_split = kSplitAll;
         } else {
           c.N_split = v.get<int>();
           if (*c.N_split < 0) throw ConfigError("N_split must be nonnegative or \"all\"");
         }
       }},
      {"A", [&](const json& v) { c.A = v.get<double>(); }},
      {"record_every", [&](const json& v) { c.record_every = v.get<int>(); }},
      {"randomize", [&](const json& v) { c.randomize = v.get<bool>(); }},
      {"stream_id", [&](const json& v) { c.stream_id = as_u64(v); }},
      {"workers", [&](const json& v) { c.workers = v.get<int>(); }},
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto s = setters.find(it.key());
    if (s == setters.end()) throw ConfigError("unknown configuration key '" + it.key() + "'");
    try {
      s->second(it.value());
    } catch (const json::exception& e) {
      throw ConfigError("bad value for '" + it.key() + "': " + e.what());
    }
  }
  c.echo = echo_of(c);
  return c;
}

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  json parsed = json::parse(value, nullptr, false);
  j[key] = parsed.is_discarded() ? json(value) : parsed;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void validate(const RunConfig& c) {
  require(c.trials > 0, "trials must be positive");
  require(c.s >= 0.0 && c.s < 1.0, "s must lie in [0, 1)");
  require(c.experiment == Experiment::kakutani || !c.base.empty(), "a base spectrum path is required");
  require(c.workers >= 0, "workers must be nonnegative");
  CoefficientLaw::from_name(c.law);
  switch (c.experiment) {
    case Experiment::tails: {
      require(c.trials >= 100, "tails needs at least 100 trials");
      require(!c.lambdas.empty(), "tails needs a lambda grid");
      for (std::size_t i = 1; i < c.lambdas.size(); ++i)
        require(c.lambdas[i] > c.lambdas[i - 1], "lambda grid must be strictly increasing");
      if (c.functional == "lp_low") {
        require(c.p >= 1.0, "p must be >= 1");
      } else if (c.functional == "weighted") {
        require(c.p1 >= 1.0 && c.p2 >= 1.0, "p1 and p2 must be >= 1");
        require(c.delta > 1.0 / c.p1, "delta must exceed 1/p1");
        require(c.T_max > 0.0 && c.dt > 0.0, "T_max and dt must be positive");
        require(c.projector == "full" || c.projector == "high" || c.projector == "nonzero",
                "projector must be full, high or nonzero");
        require(c.projector != "high" || c.N >= 0.0, "projector high needs N >= 0");
      } else {
        require(c.functional == "hs_pair", "unknown functional '" + c.functional + "'");
      }
      break;
    }
    case Experiment::events:
      require(c.delta > 0.5, "delta must exceed 1/2");
      require(c.delta_tilde > 1.0 / 3.0, "delta_tilde must exceed 1/3");
      require(c.epsilon > 0.0, "epsilon must be positive");
      require(c.T_max > 0.0 && c.dt > 0.0, "T_max and dt must be positive");
      require(!c.N_list.empty(), "N_list is empty");
      for (int N : c.N_list) require(N >= 1 && (N & (N - 1)) == 0, "N_list entries must be powers of two");
      break;
    case Experiment::growth:
    case Experiment::evolve:
      require(c.dt > 0.0, "dt must be positive");
      require(c.T > 0.0, "T must be positive");
      require(c.record_every >= 1, "record_every must be >= 1");
      break;
    case Experiment::continuity:
      require(c.trials >= 100, "continuity needs at least 100 trials per eta");
      require(c.dt > 0.0 && c.T > 0.0, "T and dt must be positive");
      require(c.A > 0.0, "A must be positive");
      require(!c.etas.empty(), "eta grid is empty");
      for (double e : c.etas) require(e >= 0.0 && e < c.A, "eta values must lie in [0, A)");
      require(c.record_every >= 1, "record_every must be >= 1");
      break;
    case Experiment::kakutani:
      require(!c.base.empty() && !c.other.empty(), "kakutani needs base and other spectra");
      require(c.law == "gaussian", "kakutani classification is defined for the gaussian law only");
      break;
  }
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 || EVP_DigestFinal_ex(ctx, md, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

json to_json(const RunManifest& m) {
  json outs = json::array();
  for (const auto& o : m.outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}});
  json ids = json::array();
  for (auto id : m.stream_ids) ids.push_back(std::to_string(id));
  return json{{"config", m.config}, {"version", m.version},   {"run_hash", m.run_hash}, {"started", m.started},
              {"finished", m.finished}, {"stream_ids", ids}, {"outputs", outs},       {"summary", m.summary}};
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class OutputSink {
 public:
  OutputSink(fs::path dir, RunManifest& m) : dir_(std::move(dir)), m_(m) {}
  void write(const std::string& name, const std::string& content) {
    write_file_atomic(dir_ / name, content);
    m_.outputs.push_back({name, sha256_hex(content)});
  }

 private:
  fs::path dir_;
  RunManifest& m_;
};

Functional functional_of(const RunConfig& c) {
  if (c.functional == "lp_low") return LpLowPosition{c.p, c.N < 0.0 ? infinity : c.N, c.n_grid};
  if (c.functional == "hs_pair") return SobolevPairNorm{c.sigma};
  Projector P = c.projector == "full"   ? Projector::full()
                : c.projector == "high" ? Projector::high(c.N)
                                        : Projector::nonzero();
  return WeightedSpacetime{{c.p1, c.p2, c.delta}, {c.T_max, c.dt, c.n_grid}, P};
}

std::string event_set_name(std::size_t e) {
  static const char* names[] = {"F", "G", "H", "K", "E"};
  return names[e];
}

json report_json(const AffinityReport& r) {
  return json{{"log_affinity", r.log_affinity},
              {"affinity", std::exp(r.log_affinity)},
              {"partial_ratio_sum", r.partial_ratio_sum},
              {"verdict", to_string(r.verdict)},
              {"zero_mismatch", r.zero_mismatch},
              {"slots", r.slots},
              {"last_half_contribution", r.last_half_contribution},
              {"extrapolated_tail", std::isfinite(r.extrapolated_tail) ? json(r.extrapolated_tail) : json(nullptr)}};
}

}  // namespace

RunManifest run(const RunConfig& c) {
  validate(c);
  RunManifest m;
  m.config = c.echo.is_null() ? echo_of(c) : c.echo;
  m.version = PWAVE_VERSION;
  // Keys that cannot change results stay out of the hash so reruns elsewhere match byte for byte.
  json hashed = m.config;
  hashed.erase("out");
  hashed.erase("workers");
  m.run_hash = sha256_hex(dump_json(hashed) + m.version);
  m.started = utc_now();
  const int workers = c.workers > 0 ? c.workers : default_workers();
  const std::string tag = "run " + m.run_hash;

  std::error_code ec;
  fs::create_directories(c.out, ec);
  if (ec) throw IoError("cannot create output directory " + c.out.string() + ": " + ec.message());
  OutputSink sink(c.out, m);

  const CoefficientLaw law = CoefficientLaw::from_name(c.law);
  SpectrumPair base;
  if (!c.base.empty()) {
    base = load_spectrum(c.base);
    base.s = c.s;
    if (c.n_max >= 0 && c.n_max != base.n_max())
      throw ConfigError("n_max " + std::to_string(c.n_max) + " does not match the base file (" +
                        std::to_string(base.n_max()) + ")");
    if (c.n_grid > 0 && c.n_grid < minimal_grid(base.n_max()))
      throw ConfigError("n_grid must be at least 2 n_max + 2");
  }

  switch (c.experiment) {
    case Experiment::tails: {
      const auto curve = estimate_tail(functional_of(c), base, law, c.lambdas, c.trials, c.master_seed, workers);
      std::ostringstream os;
      os << "# " << tag << "\n# exceedance of value > lambda with Wilson 95% bounds\n";
      os << "lambda,p_hat,ci_lo,ci_hi,exceed,trials\n";
      for (std::size_t i = 0; i < curve.lambdas.size(); ++i)
        os << format_double(curve.lambdas[i]) << ',' << format_double(curve.p_hat[i]) << ','
           << format_double(curve.ci_lo[i]) << ',' << format_double(curve.ci_hi[i]) << ',' << curve.exceed[i] << ','
           << curve.trials << '\n';
      sink.write("tail.csv", os.str());
      for (std::size_t i = 0; i < c.trials; ++i) m.stream_ids.push_back(i);
      try {
        const auto fit = fit_tail_exponent(curve);
        m.summary = {{"c_hat", fit.c_hat}, {"C_hat", fit.C_hat}, {"r2", fit.r2}, {"points", fit.points},
                     {"subgaussian_consistent", fit.subgaussian_consistent}};
      } catch (const InvalidInput& e) {
        m.summary = {{"fit", std::string("not enough informative points: ") + e.what()}};
      }
      break;
    }
    case Experiment::events: {
      EventParams p{c.s, c.epsilon, c.delta, c.delta_tilde, c.N_list, c.T_max, c.dt, c.n_grid};
      const auto rates = event_rates(base, law, p, c.trials, c.master_seed, workers);
      std::ostringstream os;
      os << "# " << tag << "\n# set membership per dyadic N; complement bounds are Wilson 95%\n";
      os << "N,set,count,rate,complement,complement_ci_lo,complement_ci_hi,trials\n";
      for (const auto& row : rates.rows)
        for (std::size_t e = 0; e < 5; ++e)
          os << row.N << ',' << event_set_name(e) << ',' << row.in[e] << ',' << format_double(row.rate[e]) << ','
             << format_double(row.complement[e]) << ',' << format_double(row.complement_ci[e].lo) << ','
             << format_double(row.complement_ci[e].hi) << ',' << rates.trials << '\n';
      sink.write("events.csv", os.str());
      for (std::size_t i = 0; i < c.trials; ++i) m.stream_ids.push_back(i);
      break;
    }
    case Experiment::growth: {
      EvolveOptions opts;
      opts.record_every = c.record_every;
      opts.n_grid = c.n_grid;
      std::vector<TrajectoryRecord> trajs(c.trials);
      parallel_for(c.trials, workers, [&](std::size_t i) {
        SpectrumPair V = randomize(base, law, SeedSpec{c.master_seed, i});
        trajs[i] = evolve_decomposed(V, c.N_split.value_or(kSplitAll), c.T, c.dt, opts);
      });
      for (std::size_t i = 0; i < c.trials; ++i) {
        std::ostringstream os;
        write_csv(trajs[i], os, tag);
        sink.write("trajectory_" + std::to_string(i) + ".csv", os.str());
        m.stream_ids.push_back(i);
      }
      const auto summary = fit_growth(trajs, c.s);
      json fits = json::array();
      for (std::size_t i = 0; i < summary.per_trial.size(); ++i) {
        const auto& f = summary.per_trial[i];
        fits.push_back({{"stream_id", std::to_string(i)}, {"M", f.M}, {"exponent", f.exponent}, {"C", f.C},
                        {"residual_rms", f.residual_rms}, {"degenerate", f.degenerate}});
      }
      json g{{"run_hash", m.run_hash}, {"s", c.s}, {"exponent_mean", summary.exponent_mean},
             {"exponent_ci95", {summary.ci_lo, summary.ci_hi}}, {"fits", fits}};
      sink.write("growth.json", dump_json(g));
      m.summary = {{"exponent_mean", summary.exponent_mean}, {"exponent_ci95", {summary.ci_lo, summary.ci_hi}}};
      break;
    }
    case Experiment::continuity: {
      ContinuityParams p;
      p.s = c.s;
      p.A = c.A;
      p.T = c.T;
      p.dt = c.dt;
      p.record_every = c.record_every;
      p.etas = c.etas;
      p.trials = c.trials;
      const auto rep = continuity_probe(base, law, p, c.master_seed, workers);
      json per = json::array();
      for (const auto& e : rep.per_eta)
        per.push_back({{"eta", e.eta}, {"samples", e.samples}, {"quantile_levels", e.quantile_levels},
                       {"quantiles", e.quantiles}, {"median", e.median}});
      json j{{"run_hash", m.run_hash}, {"s", c.s},          {"A", c.A},
             {"T", c.T},               {"per_eta", per},    {"slope", rep.slope},
             {"intercept", rep.intercept}, {"residual", rep.residual}, {"rejections", rep.rejections}};
      sink.write("continuity.json", dump_json(j));
      m.stream_ids = rep.stream_ids;
      m.summary = {{"slope", rep.slope}, {"residual", rep.residual}, {"rejections", rep.rejections}};
      break;
    }
    case Experiment::kakutani: {
      const SpectrumPair a = load_spectrum(c.base);
      const SpectrumPair b = load_spectrum(c.other);
      const auto rep = classify(a, b, law);
      json j = report_json(rep);
      j["run_hash"] = m.run_hash;
      sink.write("affinity.json", dump_json(j));
      m.summary = report_json(rep);
      break;
    }
    case Experiment::evolve: {
      SpectrumPair V = c.randomize ? randomize(base, law, SeedSpec{c.master_seed, c.stream_id}) : base;
      EvolveOptions opts;
      opts.record_every = c.record_every;
      opts.n_grid = c.n_grid;
      const auto traj = evolve_decomposed(V, c.N_split.value_or(V.n_max()), c.T, c.dt, opts);
      std::ostringstream os;
      write_csv(traj, os, tag);
      sink.write("trajectory_" + std::to_string(c.stream_id) + ".csv", os.str());
      m.stream_ids.push_back(c.stream_id);
      m.summary = {{"energy_initial", traj.energy_total.front()}, {"energy_final", traj.energy_total.back()}};
      break;
    }
  }

  m.finished = utc_now();
  write_file_atomic(c.out / "manifest.json", dump_json(to_json(m)));
  return m;
}

SpectrumPair make_base(const BaseProfile& p) {
  if (p.kind == "custom") {
    SpectrumPair S = load_spectrum(p.path);
    S.s = p.s;
    return S;
  }
  if (p.kind == "single_mode") {
    if (!p.mode.canonical()) throw InvalidInput("mode must be a canonical half-lattice index");
    const int n_max = std::max(p.n_max, int(std::ceil(p.mode.norm())));
    SpectrumPair S = SpectrumPair::zeros(n_max, p.s);
    const auto pos = S.modes()->find(p.mode);
    S.u0.b[*pos] = p.amplitude;
    if (p.a0) S.u0.a = *p.a0;
    if (p.a1) S.u1.a = *p.a1;
    return S;
  }
  if (p.kind == "power_decay") {
    if (p.n_max < 0) throw InvalidInput("n_max must be nonnegative");
    SpectrumPair S = SpectrumPair::zeros(p.n_max, p.s);
    const auto br = S.modes()->bracket();
    for (std::size_t i = 0; i < br.size(); ++i) {
      const double w0 = p.amplitude * std::pow(br[i], -p.sigma);
      const double w1 = w0;
      S.u0.b[i] = S.u0.c[i] = w0;
      S.u1.b[i] = S.u1.c[i] = w1;
    }
    S.u0.a = p.a0.value_or(p.amplitude);
    S.u1.a = p.a1.value_or(p.amplitude);
    return S;
  }
  throw InvalidInput("unknown base profile '" + p.kind + "'");
}

bool regularity_warning(const BaseProfile& p, double s) { return p.kind == "power_decay" && !(s < p.sigma - 1.5); }

}  // namespace pwave
