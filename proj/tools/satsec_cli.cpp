// satsec: command-line front end for the link studies and the codec demo.
//
// Exit status: 0 success, 1 codec round trip failed or unexpected error,
// 2 bad configuration or arguments, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "satsec/satsec.hpp"

namespace {

using namespace satsec;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

/// Flag values collected in command-line order, keyed by config field.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> scenario;
  std::vector<std::pair<std::string, std::string>> experiment;
};

struct CommonOptions {
  std::string config;
  std::string preset;
  std::string output;
  std::string output_dir;
  std::string format = "csv";
  Overrides ov;
};

struct ScenarioFlag {
  const char* flags;
  const char* key;
  const char* help;
};

// every scenario field, with units
constexpr ScenarioFlag kScenarioFlags[] = {
    {"--name", "name", "scenario label used in output file names"},
    {"--rho-b-km", "rho_B_km", "Alice-Bob distance [km]"},
    {"--rho-e-km", "rho_E_km", "Alice-Eve distance [km]"},
    {"--theta-e-deg", "theta_E_deg", "Eve polar angle off Bob's axis [degrees, 0..90]"},
    {"--r", "r", "Eve path-loss exponent [dimensionless, >= 2]"},
    {"--mu-db", "mu_dB", "Eve/Bob antenna amplitude ratio [dB, 20 log10]"},
    {"--gamma-n-db", "gamma_n_dB", "Eve/Bob noise power ratio [dB, 10 log10]"},
    {"--theta-3db-deg", "theta_3dB_deg", "one-sided half-power beamwidth [degrees]"},
    {"--pattern", "pattern", "antenna pattern kind: bessel | mask"},
    {"--mask", "mask", "regulatory mask 'angle_deg:gain_dB,...' [degrees:dB]"},
    {"--reference-unit-km", "reference_unit_km", "distance unit applied before the path-loss power [km]"},
    {"--n", "n", "block length [bits]"},
    {"--rho", "rho", "reliability code rate [bits/channel use]"},
    {"--rho-sac", "rho_sac", "sacrifice rate k'/n [bits/channel use]"},
    {"--epsilon-b", "epsilon_B", "Bob's target decoding error probability [probability]"},
    {"--e-s", "E_s", "symbol energy [linear]"},
    {"--nb,--n-b", "n_B", "Bob's noise level n_B [linear]"},
    {"--reference", "reference", "published threshold for residuals [degrees] or 'never'"},
};

struct ExperimentFlag {
  const char* flags;
  const char* key;
  const char* help;
};

constexpr ExperimentFlag kGridFlags[] = {
    {"--gamma-grid", "gamma_grid", "gamma_g0 grid, 'lo:hi:count' or comma list [linear amplitude]"},
    {"--snr-grid-db", "snr_grid_db", "E_s/n_B grid [dB]"},
    {"--rho-sac-grid", "rho_sac_grid", "sacrifice-rate grid [bits/channel use]"},
    {"--theta-grid-deg", "theta_grid_deg", "Eve angle grid [degrees]"},
    {"--rho-e-grid-km", "rho_E_grid_km", "Eve distance grid for 2-D maps [km]"},
};

void add_common(CLI::App* sub, CommonOptions& o, bool scenario_fields) {
  sub->add_option("--config", o.config, "scenario file (INI: [scenario], [experiment])")->check(CLI::ExistingFile);
  sub->add_option("--preset", o.preset, "start from a named preset (see 'satsec presets')");
  sub->add_option("--output,-o", o.output, "CSV output path");
  sub->add_option("--output-dir", o.output_dir, "directory for <scenario>_<study>.csv");
  sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv"}));
  if (scenario_fields)
    for (const auto& f : kScenarioFlags)
      sub->add_option_function<std::string>(
          f.flags, [&o, key = f.key](const std::string& v) { o.ov.scenario.emplace_back(key, v); }, f.help);
}

void add_experiment_flag(CLI::App* sub, CommonOptions& o, const char* flags, const char* key, const char* help) {
  sub->add_option_function<std::string>(
      flags, [&o, key](const std::string& v) { o.ov.experiment.emplace_back(key, v); }, help);
}

ScenarioFile resolve(const CommonOptions& o) {
  ScenarioFile f;
  if (!o.config.empty()) f = read_scenario_file(o.config);
  if (!o.preset.empty()) {
    if (!o.config.empty()) throw ConfigError("preset", "use either --preset or --config");
    f.scenario = find_preset(o.preset);
  }
  for (const auto& [k, v] : o.ov.scenario) set_scenario_field(f.scenario, k, v);
  for (const auto& [k, v] : o.ov.experiment) set_experiment_field(f.experiment, k, v);
  check_scenario(f.scenario);
  return f;
}

void emit(const CommonOptions& o, const std::string& scenario, const std::string& study, const std::string& csv) {
  if (!o.output.empty()) write_file_atomic(o.output, csv);
  if (!o.output_dir.empty()) {
    std::filesystem::create_directories(o.output_dir);
    write_file_atomic(std::filesystem::path(o.output_dir) / (scenario + "_" + study + ".csv"), csv);
  }
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void require_study(ScenarioFile& f, const std::string& study) {
  if (f.experiment.study.empty()) f.experiment.study = study;
  if (f.experiment.study != study)
    throw ConfigError("experiment.study", "config selects '" + f.experiment.study + "' but command is '" + study + "'");
}

// ---------------------------------------------------------------------------

int run_capacity(const CommonOptions& o) {
  auto f = resolve(o);
  require_study(f, "capacity");
  const auto& e = f.experiment;
  if (e.gamma_grid.empty() && e.snr_grid_db.empty()) {
    if (!e.gamma_g0) throw ConfigError("experiment.gamma_g0", "give --gamma-g0 or the capacity grids");
    const double cs = secrecy_capacity(*e.gamma_g0, f.scenario.n_B);
    const CapacityCell cell{*e.gamma_g0, snr_db_from_noise(f.scenario.n_B, f.scenario.E_s), cs};
    emit(o, f.scenario.name, "capacity", capacity_csv(std::span(&cell, 1)));
    std::cout << "C_s = " << format_double(cs) << " bits/channel use (gamma_g0 = " << format_double(*e.gamma_g0)
              << ", n_B = " << format_double(f.scenario.n_B) << ")\n";
    return 0;
  }
  if (f.scenario.E_s != 1.0) throw ConfigError("scenario.E_s", "capacity surface is defined at E_s = 1");
  const auto gammas = e.gamma_grid.empty() ? linspace(0.0, 1.0, 20) : e.gamma_grid;
  const auto snrs = e.snr_grid_db.empty() ? linspace(-10.0, 20.0, 20) : e.snr_grid_db;
  std::vector<CapacityCell> cells;
  try {
    cells = capacity_surface(gammas, snrs);
  } catch (const DomainError& err) {
    throw ConfigError("experiment.grid", err.what());
  }
  double best = 0.0;
  for (const auto& c : cells) best = std::max(best, c.cs_bits);
  emit(o, f.scenario.name, "capacity", capacity_csv(cells));
  std::cout << "capacity surface: " << cells.size() << " cells, max C_s = " << fmt("%.6g", best)
            << " bits/channel use\n";
  return 0;
}

int run_region(const CommonOptions& o, bool all_presets) {
  std::vector<Scenario> scenarios;
  std::string label;
  if (all_presets) {
    if (!o.config.empty() || !o.preset.empty() || !o.ov.scenario.empty())
      throw ConfigError("all-presets", "--all-presets cannot be combined with scenario options");
    scenarios = table_presets();
    label = "presets";
  } else {
    auto f = resolve(o);
    require_study(f, "region");
    scenarios.push_back(f.scenario);
    label = f.scenario.name;
  }
  const auto rows = run_region_study(scenarios);
  emit(o, label, "region", region_csv(rows));
  for (const auto& r : rows) {
    std::cout << r.scenario << ": ";
    if (r.result.never_degraded())
      std::cout << "never degraded";
    else
      std::cout << "theta* = " << fmt("%.3f", r.result.theta_star_deg) << " deg ("
                << verdict_name(r.result.verdict) << ", first crossing " << fmt("%.3f", r.result.first_crossing_deg)
                << " deg)";
    if (r.reference_never) std::cout << ", reference: never degraded";
    if (auto res = r.residual_deg())
      std::cout << ", reference " << format_double(*r.reference_deg) << " deg, residual " << fmt("%+.3f", *res) << " deg";
    std::cout << "\n";
  }
  return 0;
}

int run_tradeoff_cmd(const CommonOptions& o) {
  auto f = resolve(o);
  require_study(f, "tradeoff");
  const auto& e = f.experiment;
  const auto preset = dvbs2(e.frame.value_or(DvbS2Frame::Short));
  double gamma = 0.0;
  if (e.gamma_g0) {
    gamma = *e.gamma_g0;
  } else {
    const auto& s = f.scenario;
    gamma = regularize(channel_coefficient(s.pattern, s.eve(), s.geometry(), s.reference_unit_km), s.eve(), s.n_B)
                .gamma_g0;
  }
  std::vector<double> grid = e.rho_sac_grid;
  const bool single = grid.empty();
  if (single) grid = {f.scenario.rho_sac};
  std::vector<TradeoffRow> rows;
  try {
    rows = run_tradeoff(preset, gamma, f.scenario.n_B, grid, e.mode);
  } catch (const DomainError& err) {
    throw ConfigError("experiment.rho_sac_grid", err.what());
  }
  emit(o, f.scenario.name, "tradeoff", tradeoff_csv(rows));
  const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    return a.leak.exponent_bits > b.leak.exponent_bits;
  });
  std::cout << "frame=" << frame_name(preset.frame) << " n=" << preset.n << " gamma_g0=" << format_double(gamma)
            << (single ? " rho_sac=" : " best rho_sac=") << format_double(best->rho_sac)
            << " s*=" << fmt("%.4g", best->leak.s_star) << " exponent=" << fmt("%.6g", best->leak.exponent_bits)
            << " bits bound=" << fmt("%.3e", best->leak.reported_bound()) << "\n";
  return 0;
}

int run_spatial_cmd(const CommonOptions& o) {
  auto f = resolve(o);
  require_study(f, "spatial");
  const auto& e = f.experiment;
  const auto thetas = e.theta_grid_deg.empty() ? linspace(0.0, 90.0, 181) : e.theta_grid_deg;
  std::vector<SpatialRow> rows;
  try {
    rows = run_spatial_map(f.scenario, thetas, e.rho_E_grid_km, e.mode);
  } catch (const DomainError& err) {
    throw ConfigError("experiment.grid", err.what());
  }
  emit(o, f.scenario.name, "spatial", spatial_csv(rows, !e.rho_E_grid_km.empty()));
  std::size_t guaranteed = 0;
  std::optional<double> first;
  double best = 1.0;
  for (const auto& r : rows) {
    if (!r.guaranteed) continue;
    ++guaranteed;
    if (!first || r.theta_deg < *first) first = r.theta_deg;
    best = std::min(best, r.bound);
  }
  std::cout << "spatial map: " << rows.size() << " cells, " << guaranteed << " guaranteed";
  if (first) std::cout << ", smallest guaranteed theta " << format_double(*first) << " deg, min bound " << fmt("%.3e", best);
  std::cout << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct CodecOptions {
  std::size_t k = 4;
  std::size_t k_prime = 4;
  std::string inner = "identity";
  std::string code_file;
  std::string seed_hex;
  std::string message_hex;
  std::vector<std::size_t> flips;
  std::uint64_t rng_seed = kDefaultRandomSeed;
  // leakage-oracle only
  std::optional<double> bsc;
  std::optional<double> gamma_g0;
  double n_B = 1.0;
  std::string s_grid = "0.1:0.9:9";
  std::string output;
  std::string format = "csv";
};

LinearCode make_inner(const CodecOptions& c) {
  const std::size_t K = c.k + c.k_prime;
  if (!c.code_file.empty()) return LinearCode::load_descriptor(c.code_file);
  if (c.inner == "identity") return LinearCode::identity(K);
  if (c.inner == "hamming74") {
    if (K % 4 != 0) throw ConfigError("inner", "hamming74 needs k + k' to be a multiple of 4");
    return LinearCode::direct_sum(LinearCode::hamming74(), K / 4);
  }
  throw ConfigError("inner", "expected identity or hamming74, got '" + c.inner + "'");
}

HashSeed make_seed(const CodecOptions& c, std::mt19937_64& rng) {
  if (c.seed_hex.empty()) return HashSeed::random(c.k, c.k_prime, rng);
  try {
    return HashSeed::from_hex(c.seed_hex, c.k, c.k_prime);
  } catch (const DomainError& e) {
    throw ConfigError("seed-hex", e.what());
  }
}

int run_codec_demo(const CodecOptions& c) {
  if (c.k == 0) throw ConfigError("k", "k must be >= 1");
  std::mt19937_64 rng(c.rng_seed);
  const CosetCode code(make_inner(c), ToeplitzHash(c.k, c.k_prime, make_seed(c, rng)));
  BitVector m(c.k);
  if (c.message_hex.empty()) {
    std::bernoulli_distribution coin(0.5);
    for (std::size_t i = 0; i < c.k; ++i)
      if (coin(rng)) m.set(i, true);
  } else {
    try {
      m = BitVector::from_hex(c.message_hex, c.k);
    } catch (const DomainError& e) {
      throw ConfigError("message-hex", e.what());
    }
  }
  BitVector y = code.encode_random(m, rng);
  const BitVector x = y;
  for (auto i : c.flips) {
    if (i >= y.size()) throw ConfigError("flip", "position " + std::to_string(i) + " outside the codeword");
    y.flip(i);
  }
  const auto decoded = code.decode(y);
  std::cout << "seed " << code.hash().seed().bits.to_hex() << " message " << m.to_hex() << " codeword "
            << x.to_bits() << " received " << y.to_bits() << " decoded " << (decoded ? decoded->to_hex() : "FAIL")
            << "\n";
  const bool ok = decoded && *decoded == m;
  std::cout << (c.flips.empty() ? "noiseless channel" : std::to_string(c.flips.size()) + " bit flip(s)")
            << ": round-trip " << (ok ? "OK" : "FAILED") << " (k=" << c.k << ", k'=" << c.k_prime << ", n=" << code.n()
            << ")\n";
  return ok ? 0 : kExitFailure;
}

int run_leakage_oracle(const CodecOptions& c) {
  if (c.k == 0) throw ConfigError("k", "k must be >= 1");
  if (c.bsc && c.gamma_g0) throw ConfigError("bsc", "give either --bsc or --gamma-g0");
  DiscreteChannel ch;
  std::string channel;
  try {
    if (c.gamma_g0) {
      ch = hard_decision(BpskAwgn{*c.gamma_g0, c.n_B});
      channel = "hard-decision BSC(" + fmt("%.6g", ch(0, 1)) + ")";
    } else {
      ch = DiscreteChannel::bsc(c.bsc.value_or(0.11));
      channel = "BSC(" + format_double(c.bsc.value_or(0.11)) + ")";
    }
  } catch (const DomainError& e) {
    throw ConfigError(c.gamma_g0 ? "gamma-g0" : "bsc", e.what());
  }
  const auto s_grid = parse_grid("s-grid", c.s_grid);
  const LinearCode inner = make_inner(c);
  const LeakageOracle oracle(inner, c.k, c.k_prime, ch);
  std::mt19937_64 rng(c.rng_seed);
  SeedAveragedLeakage avg;
  if (!c.seed_hex.empty()) {
    const auto r = oracle.for_seed(make_seed(c, rng));
    avg.mi_bits = r.mi_bits;
    avg.divergence_bits = r.divergence_bits;
    avg.seeds = 1;
  } else {
    avg = oracle.seed_average(rng);
  }
  const CodeParams params{static_cast<long>(oracle.n()), static_cast<long>(c.k), static_cast<long>(c.k_prime),
                          static_cast<double>(c.k + c.k_prime) / static_cast<double>(oracle.n()), 0.0};
  std::string csv = "s,bound,divergence_bits,mi_bits\n";
  double min_bound = std::numeric_limits<double>::infinity();
  double min_s = 0.0;
  for (double s : s_grid) {
    double b = 0.0;
    try {
      b = leakage_bound_at(s, params, ch);
    } catch (const DomainError& e) {
      throw ConfigError("s-grid", e.what());
    }
    if (b < min_bound) {
      min_bound = b;
      min_s = s;
    }
    csv += format_double(s) + "," + format_double(b) + "," + format_double(avg.divergence_bits) + "," +
           format_double(avg.mi_bits) + "\n";
  }
  if (!c.output.empty()) write_file_atomic(c.output, csv);
  std::cout << channel << " n=" << oracle.n() << " k=" << c.k << " k'=" << c.k_prime << ": leakage "
            << fmt("%.6g", avg.divergence_bits) << " bits (I(M;Z) " << fmt("%.6g", avg.mi_bits) << ")";
  if (c.seed_hex.empty())
    std::cout << (avg.exhaustive ? ", exhaustive over " : ", sampled ") << avg.seeds << " seeds";
  if (!avg.exhaustive) std::cout << " +- " << fmt("%.2g", avg.divergence_stderr);
  std::cout << "; min bound " << fmt("%.6g", min_bound) << " at s=" << format_double(min_s)
            << (avg.divergence_bits <= min_bound ? " (dominates)" : " (VIOLATED)") << "\n";
  return 0;
}

void add_codec_options(CLI::App* sub, CodecOptions& c) {
  sub->add_option("--k", c.k, "message bits k [bits]");
  sub->add_option("--kprime,--k-prime", c.k_prime, "sacrificed bits k' [bits]");
  sub->add_option("--inner", c.inner, "inner code: identity | hamming74 (direct sum of (7,4) blocks)");
  sub->add_option("--code-file", c.code_file, "inner code descriptor file ('K N' then K hex rows)")
      ->check(CLI::ExistingFile);
  sub->add_option("--seed-hex", c.seed_hex, "Toeplitz seed, k + k' - 1 bits as hex [default: drawn from --seed]");
  sub->add_option("--seed", c.rng_seed, "random stream seed")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"satsec: satellite wiretap link design and privacy-amplification codec toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "satsec 1.0");

  CommonOptions common;
  CodecOptions codec;
  bool all_presets = false;

  auto* cap = app.add_subcommand("capacity", "BPSK secrecy capacity, single point or surface over gamma_g0 x SNR");
  add_common(cap, common, true);
  add_experiment_flag(cap, common, "--gamma-g0", "gamma_g0", "Eve's regularized amplitude [linear]");
  add_experiment_flag(cap, common, "--gamma-grid", "gamma_grid", kGridFlags[0].help);
  add_experiment_flag(cap, common, "--snr-grid-db", "snr_grid_db", kGridFlags[1].help);

  auto* region = app.add_subcommand("region", "threshold angle of the stochastically degraded region");
  add_common(region, common, true);
  region->add_flag("--all-presets", all_presets, "run every built-in preset and report residuals");

  auto* trade = app.add_subcommand("tradeoff", "leakage bound versus sacrifice rate for a DVB-S2 frame");
  add_common(trade, common, true);
  add_experiment_flag(trade, common, "--gamma-g0", "gamma_g0",
                      "Eve's regularized amplitude [linear; default: derived from the geometry]");
  add_experiment_flag(trade, common, "--frame", "frame", "DVB-S2 frame: short (n=16200) | medium (n=32400)");
  add_experiment_flag(trade, common, "--rho-sac-grid", "rho_sac_grid", kGridFlags[2].help);
  add_experiment_flag(trade, common, "--mode", "mode", "exponent reading: tightest | literal-min");

  auto* spatial = app.add_subcommand("spatial", "leakage bound over Eve's angle (and optionally distance)");
  add_common(spatial, common, true);
  add_experiment_flag(spatial, common, "--theta-grid-deg", "theta_grid_deg", kGridFlags[3].help);
  add_experiment_flag(spatial, common, "--rho-e-grid-km", "rho_E_grid_km", kGridFlags[4].help);
  add_experiment_flag(spatial, common, "--mode", "mode", "exponent reading: tightest | literal-min");

  auto* demo = app.add_subcommand("codec-demo", "encode and decode one message through the coset codec");
  add_codec_options(demo, codec);
  demo->add_option("--message-hex", codec.message_hex, "k-bit message as hex [default: drawn from --seed]");
  demo->add_option("--flip", codec.flips, "codeword positions to flip before decoding [bit index]");

  auto* oracle = app.add_subcommand("leakage-oracle", "exact small-code leakage versus the hash-averaged bound");
  add_codec_options(oracle, codec);
  oracle->add_option("--bsc", codec.bsc, "Eve BSC crossover probability [probability; default 0.11]");
  oracle->add_option("--gamma-g0", codec.gamma_g0, "derive Eve's BSC by hard decision at this amplitude [linear]");
  oracle->add_option("--nb,--n-b", codec.n_B, "noise level for --gamma-g0 [linear]");
  oracle->add_option("--s-grid", codec.s_grid, "s values for the bound, 'lo:hi:count' or comma list");
  oracle->add_option("--output,-o", codec.output, "CSV output path");
  oracle->add_option("--format", codec.format, "output format")->check(CLI::IsMember({"csv"}));

  auto* presets = app.add_subcommand("presets", "list built-in presets, or print one as a scenario file");
  std::string show;
  presets->add_option("name", show, "preset to print");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*cap) return run_capacity(common);
    if (*region) return run_region(common, all_presets);
    if (*trade) return run_tradeoff_cmd(common);
    if (*spatial) return run_spatial_cmd(common);
    if (*demo) return run_codec_demo(codec);
    if (*oracle) return run_leakage_oracle(codec);
    if (*presets) {
      if (show.empty())
        for (const auto& s : table_presets()) std::cout << s.name << "\n";
      else
        std::cout << write_scenario_text(find_preset(show));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "satsec: configuration error in " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    std::cerr << "satsec: numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "satsec: invalid argument: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SizeGuardError& e) {
    std::cerr << "satsec: instance too large: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "satsec: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
