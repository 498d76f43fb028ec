#include "commands.hpp"

#include "mirror/chain_models.hpp"
#include "mirror/equivalences.hpp"
#include "mirror/io.hpp"
#include "mirror/many_body.hpp"
#include "mirror/permutation.hpp"
#include "mirror/polynomials.hpp"
#include "mirror/single_particle.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

namespace mirror::cli {
namespace {

using io::Json;

constexpr int kMaxSectorCheckSites = 10;
constexpr double kSectorTolerance = 1e-8;

struct BuildOptions {
  std::string family = "krawtchouk";
  int n = 0;
  int p = 0;
  int q = 1;
  std::vector<double> couplings;
  std::vector<double> fields;
  std::string out = "-";
};

struct SpectrumOptions {
  std::string chain;
  std::string out = "-";
  std::string table;
  double t_max = 10;
  int grid = 10000;
};

struct VerifyOptions {
  std::string chain;
  std::string suite = "all";
  std::string time = "auto";
  std::string out = "-";
  double t_max = 10;
  int grid = 10000;
  std::uint64_t seed = 1;
};

struct FidelityOptions {
  std::string chain;
  std::string grid;
  std::string out = "-";
};

struct PermOptions {
  std::string target;
  bool random = false;
  int n_sites = 0;
  std::uint64_t seed = 1;
  bool simulate = false;
  std::string family = "krawtchouk";
  int p = 0;
  int q = 1;
  std::string out = "-";
};

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json energies_json(const Eigen::VectorXd& e) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < e.size(); ++i) arr.push_back(e[i]);
  return arr;
}

// Closed-form period quoted for the family, if any: pi for Krawtchouk, q*pi for Hahn.
std::optional<double> reference_period(const ChainSpecd& spec) {
  if (std::holds_alternative<Krawtchouk>(spec.family)) return std::numbers::pi;
  return spec.predicted_period;
}

int cmd_build(const BuildOptions& opt) {
  ChainSpecd spec;
  if (opt.family == "krawtchouk") {
    spec = krawtchouk_chain<double>(opt.n);
  } else if (opt.family == "hahn") {
    spec = hahn_chain<double>(opt.n, opt.p, opt.q);
  } else if (opt.family == "custom") {
    spec = custom_chain<double>(Eigen::Map<const Eigen::VectorXd>(opt.couplings.data(), opt.couplings.size()),
                                Eigen::Map<const Eigen::VectorXd>(opt.fields.data(), opt.fields.size()));
    if (!is_mirror_symmetric(spec)) std::cerr << "warning: custom chain is not mirror-symmetric\n";
  } else {
    throw std::invalid_argument("unknown family '" + opt.family + "'");
  }
  io::write_text(opt.out, dump(io::to_json(spec)));
  return kExitPass;
}

int cmd_spectrum(const SpectrumOptions& opt) {
  const ChainSpecd spec = io::read_chain(opt.chain);
  const Eigensystemd numeric = numeric_eigensystem(spec);
  const auto mirror = find_mirror_time(numeric, opt.t_max, opt.grid);

  Json doc;
  doc["family"] = family_name(spec.family);
  doc["n_sites"] = spec.n_sites();
  doc["numeric_energies"] = energies_json(numeric.energies);
  doc["analytic_energies"] = nullptr;
  if (!std::holds_alternative<Custom>(spec.family)) {
    const auto table = analytic_eigensystem(spec);
    const auto analytic = analytic_chain_eigensystem(spec, table);
    const auto agreement = compare_eigensystems(analytic, numeric);
    doc["analytic_energies"] = energies_json(analytic.energies);
    doc["analytic_numeric_value_error"] = agreement.value_error;
    doc["analytic_numeric_vector_error"] = agreement.vector_error;
    doc["reflection_defect"] = reflection_defect(table);
    if (!opt.table.empty()) io::write_text(opt.table, io::table_csv(table));
  } else if (!opt.table.empty()) {
    io::write_text(opt.table, io::table_csv(EigenfunctionTabled{numeric.vectors, spec.family, std::nullopt}));
  }
  doc["mirror_time"] = mirror.found ? Json(mirror.mirror_time) : Json(nullptr);
  doc["mirror_residual"] = mirror.residual;
  doc["predicted_period"] = spec.predicted_period ? Json(*spec.predicted_period) : Json(nullptr);
  const auto ref = reference_period(spec);
  doc["reference_period"] = ref ? Json(*ref) : Json(nullptr);
  io::write_text(opt.out, dump(doc));
  return kExitPass;
}

Json mirror_suite(const ChainSpecd& spec, const VerifyOptions& opt, bool& pass) {
  const Eigensystemd es = numeric_eigensystem(spec);
  Json doc;
  double t = 0;
  if (opt.time == "auto") {
    if (std::holds_alternative<Hahn>(spec.family)) {
      t = *spec.predicted_period;
      doc["time_source"] = "predicted_period";
    } else {
      const auto found = find_mirror_time(es, opt.t_max, opt.grid);
      t = found.mirror_time;
      doc["time_source"] = found.found ? "mirror_search" : "mirror_search_not_found";
    }
  } else {
    std::size_t used = 0;
    t = std::stod(opt.time, &used);
    if (used != opt.time.size() || !std::isfinite(t)) throw std::invalid_argument("--time must be 'auto' or a number");
    doc["time_source"] = "given";
  }
  const auto single = mirror_residual(es, t);
  doc["time"] = t;
  doc["predicted_period"] = spec.predicted_period ? Json(*spec.predicted_period) : Json(nullptr);
  const auto ref = reference_period(spec);
  doc["reference_period"] = ref ? Json(*ref) : Json(nullptr);
  doc["single_particle_residual"] = single.residual;
  doc["transfer_fidelity"] = transfer_fidelity(es, t);
  bool ok = single.residual <= kMirrorTolerance;
  if (spec.n_sites() <= kMaxMirrorCheckSites) {
    const auto cert = mirror_check(spec, t);
    doc["certificate"] = io::to_json(cert);
    ok = ok && cert.passed();
  } else {
    doc["certificate"] = nullptr;
  }
  doc["pass"] = ok;
  pass = pass && ok;
  return doc;
}

Json sectors_suite(const ChainSpecd& spec, const VerifyOptions& opt, bool& pass) {
  if (spec.n_sites() > kMaxSectorCheckSites)
    throw std::length_error("sector consistency check is limited to 10 sites");
  const Eigensystemd es = numeric_eigensystem(spec);
  const auto h = full_register_hamiltonian(spec);
  const bool conserved = conserves_excitations(h);
  const RegisterSpectrum<double> full(h);

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Json times = Json::array();
  double worst = 0;
  for (int sample = 0; sample < 5; ++sample) {
    // (0, 2pi]
    const double t = 2 * std::numbers::pi * (1.0 - uniform(rng));
    times.push_back(t);
    for (int m = 0; m <= spec.n_sites(); ++m) {
      const auto diff = (sector_propagator(es, m, t) - full.sector_block(m, t)).cwiseAbs().maxCoeff();
      worst = std::max(worst, diff);
    }
  }
  Json doc;
  doc["conserves_excitations"] = conserved;
  doc["rng"] = "mt19937_64";
  doc["seed"] = opt.seed;
  doc["times"] = times;
  doc["max_difference"] = worst;
  doc["pass"] = conserved && worst <= kSectorTolerance;
  pass = pass && doc["pass"].get<bool>();
  return doc;
}

Json equiv_suite(const ChainSpecd& spec, bool& pass) {
  Json doc;
  const int n = spec.last_site();
  if (std::holds_alternative<Krawtchouk>(spec.family)) {
    const auto report = verify_krawtchouk_spin_equivalence<double>(n);
    doc["applicable"] = true;
    doc["kind"] = "spin_x";
    doc["s"] = n / 2.0;
    doc["report"] = io::to_json(report);
    pass = pass && report.pass;
  } else if (const auto* hahn = std::get_if<Hahn>(&spec.family); hahn && hahn->q == 1 && n % 2 == 1) {
    const auto s_qn = HalfInteger::from_twice(n);
    const auto l_qn = HalfInteger::from_twice(n + 2 * hahn->p + 1);
    const auto report = verify_hahn_ls_equivalence<double>(l_qn, s_qn);
    doc["applicable"] = true;
    doc["kind"] = "l_dot_s";
    doc["L"] = l_qn.value();
    doc["S"] = s_qn.value();
    doc["report"] = io::to_json(report);
    pass = pass && report.pass;
  } else {
    doc["applicable"] = false;
  }
  return doc;
}

int cmd_verify(const VerifyOptions& opt) {
  const ChainSpecd spec = io::read_chain(opt.chain);
  bool pass = true;
  Json suites;
  const bool all = opt.suite == "all";
  if (all || opt.suite == "mirror") suites["mirror"] = mirror_suite(spec, opt, pass);
  if (all || opt.suite == "sectors") suites["sectors"] = sectors_suite(spec, opt, pass);
  if (all || opt.suite == "equiv") suites["equiv"] = equiv_suite(spec, pass);

  Json doc;
  doc["family"] = family_name(spec.family);
  doc["n_sites"] = spec.n_sites();
  doc["bit_order"] = "site l is bit l (s_0 least significant)";
  doc["suites"] = suites;
  doc["pass"] = pass;
  io::write_text(opt.out, dump(doc));
  if (!pass) std::cerr << "verify: at least one check failed\n";
  return pass ? kExitPass : kExitFail;
}

int cmd_fidelity(const FidelityOptions& opt) {
  const ChainSpecd spec = io::read_chain(opt.chain);
  const io::TimeGrid grid = io::parse_time_grid(opt.grid);
  io::write_text(opt.out, io::fidelity_csv(numeric_eigensystem(spec), grid));
  return kExitPass;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("--target must be a comma-separated list of integers");
    }
    if (used != part.size()) throw std::invalid_argument("--target must be a comma-separated list of integers");
    out.push_back(v);
  }
  return out;
}

// Fisher-Yates driven directly by mt19937_64 so the result is library independent.
std::vector<int> random_arrangement(int n_sites, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<int> arr(n_sites);
  std::iota(arr.begin(), arr.end(), 0);
  for (int i = n_sites - 1; i > 0; --i) std::swap(arr[i], arr[rng() % static_cast<std::uint64_t>(i + 1)]);
  return arr;
}

int cmd_perm(const PermOptions& opt) {
  std::vector<int> arrangement;
  Json doc;
  if (opt.random) {
    if (opt.n_sites < 1) throw std::invalid_argument("--random needs --n >= 1");
    arrangement = random_arrangement(opt.n_sites, opt.seed);
    doc["rng"] = "mt19937_64 fisher-yates (modulo draw)";
    doc["seed"] = opt.seed;
  } else {
    if (opt.target.empty()) throw std::invalid_argument("perm needs --target or --random");
    arrangement = parse_int_list(opt.target);
  }
  const SitePermutation target = SitePermutation::from_arrangement(arrangement);
  const ReversalPlan plan = plan_reversals(target);

  doc["arrangement"] = arrangement;
  doc["mapping"] = target.mapping();
  doc["plan"] = io::to_json(plan);
  bool pass = compose_plan(plan) == target;
  doc["plan_composes_to_target"] = pass;
  doc["simulation"] = nullptr;
  if (opt.simulate) {
    SegmentFamily family = Krawtchouk{};
    if (opt.family == "hahn") family = Hahn{opt.p, opt.q};
    else if (opt.family != "krawtchouk") throw std::invalid_argument("--family must be krawtchouk or hahn");
    const auto sim = simulate_plan<double>(plan, family);
    Json phases = Json::array();
    for (std::size_t b = 0; b < sim.phases.size(); ++b)
      phases.push_back(Json{{"state", b}, {"re", sim.phases[b].real()}, {"im", sim.phases[b].imag()}});
    doc["simulation"] = Json{{"family", opt.family},
                             {"segment_times", sim.segment_times},
                             {"min_concentration", sim.min_concentration},
                             {"phases", phases},
                             {"verified", sim.verified}};
    pass = pass && sim.verified;
  }
  doc["pass"] = pass;
  io::write_text(opt.out, dump(doc));
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Mirror-periodic XY spin chains: construction, dynamics and certificates"};
  app.require_subcommand(1);

  auto* chain = app.add_subcommand("chain", "Build or inspect chain specifications");
  chain->require_subcommand(1);

  BuildOptions build;
  auto* build_cmd = chain->add_subcommand("build", "Write a chain specification as JSON");
  build_cmd->add_option("--family", build.family, "krawtchouk | hahn | custom")
      ->check(CLI::IsMember({"krawtchouk", "hahn", "custom"}));
  build_cmd->add_option("--n", build.n, "Number of couplings N (N+1 sites)");
  build_cmd->add_option("--p", build.p, "Hahn numerator parameter");
  build_cmd->add_option("--q", build.q, "Hahn denominator parameter (nonzero)");
  build_cmd->add_option("--couplings", build.couplings, "Custom couplings")->delimiter(',');
  build_cmd->add_option("--fields", build.fields, "Custom fields")->delimiter(',');
  build_cmd->add_option("--out", build.out, "Output path, '-' for stdout");

  SpectrumOptions spectrum;
  auto* spectrum_cmd = chain->add_subcommand("spectrum", "Eigenvalues, analytic agreement and mirror time");
  spectrum_cmd->add_option("--chain", spectrum.chain, "Chain JSON")->required();
  spectrum_cmd->add_option("--out", spectrum.out, "Output path, '-' for stdout");
  spectrum_cmd->add_option("--table", spectrum.table, "Write the eigenfunction table as CSV");
  spectrum_cmd->add_option("--t-max", spectrum.t_max, "Mirror-time search window");
  spectrum_cmd->add_option("--grid", spectrum.grid, "Mirror-time search grid points");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run certificates on a chain");
  verify_cmd->add_option("--chain", verify.chain, "Chain JSON")->required();
  verify_cmd->add_option("--suite", verify.suite, "mirror | sectors | equiv | all")
      ->check(CLI::IsMember({"mirror", "sectors", "equiv", "all"}));
  verify_cmd->add_option("--time", verify.time, "Mirror time: 'auto' or a number");
  verify_cmd->add_option("--out", verify.out, "Report path, '-' for stdout");
  verify_cmd->add_option("--t-max", verify.t_max, "Mirror-time search window");
  verify_cmd->add_option("--grid", verify.grid, "Mirror-time search grid points");
  verify_cmd->add_option("--seed", verify.seed, "Seed for the random sector-check times");

  FidelityOptions fidelity;
  auto* fidelity_cmd = app.add_subcommand("fidelity", "End-to-end transfer fidelity curve as CSV");
  fidelity_cmd->add_option("--chain", fidelity.chain, "Chain JSON")->required();
  fidelity_cmd->add_option("--t", fidelity.grid, "start:stop:step")->required();
  fidelity_cmd->add_option("--out", fidelity.out, "Output path, '-' for stdout");

  PermOptions perm;
  auto* perm_cmd = app.add_subcommand("perm", "Plan (and simulate) a permutation by segment mirrors");
  perm_cmd->add_option("--target", perm.target, "Final layout: site i holds the qubit target[i]");
  perm_cmd->add_flag("--random", perm.random, "Draw a random layout");
  perm_cmd->add_option("--n", perm.n_sites, "Number of sites for --random");
  perm_cmd->add_option("--seed", perm.seed, "Seed for --random");
  perm_cmd->add_flag("--simulate", perm.simulate, "Verify the plan by full-register simulation");
  perm_cmd->add_option("--family", perm.family, "Segment family: krawtchouk | hahn");
  perm_cmd->add_option("--p", perm.p, "Hahn p for segments");
  perm_cmd->add_option("--q", perm.q, "Hahn q for segments");
  perm_cmd->add_option("--out", perm.out, "Output path, '-' for stdout");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (build_cmd->parsed()) return cmd_build(build);
    if (spectrum_cmd->parsed()) return cmd_spectrum(spectrum);
    if (verify_cmd->parsed()) return cmd_verify(verify);
    if (fidelity_cmd->parsed()) return cmd_fidelity(fidelity);
    if (perm_cmd->parsed()) return cmd_perm(perm);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mirror::cli
