#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "levybm/errors.hpp"
#include "levybm/hypothesis.hpp"
#include "levybm/io.hpp"
#include "levybm/kac_stroock.hpp"
#include "levybm/verify.hpp"

namespace {

using namespace levybm;
using Json = nlohmann::ordered_json;

std::vector<Atom> parse_atom_specs(const std::vector<std::string>& specs) {
  std::vector<Atom> out;
  for (const std::string& s : specs) {
    const auto sep = s.find_first_of(":,");
    try {
      if (sep == std::string::npos) throw std::invalid_argument(s);
      out.push_back({std::stod(s.substr(0, sep)), std::stod(s.substr(sep + 1))});
    } catch (const std::exception&) {
      throw ValidationError("bad --atom '" + s + "'; expected SIZE:MASS");
    }
  }
  return out;
}

// Flags shared by every subcommand that needs a triplet or a full experiment
// config. Inline values override file values; --family replaces the file's
// triplet wholesale (mixing per-field triplet edits with a family switch has
// no sane meaning).
struct Common {
  std::string config_path;
  std::string family;
  double rate = 1.0;
  double sigma = 1.0;
  double drift = 0.0;
  double alpha = 1.5;
  double scale = 1.0;
  std::vector<std::string> atom_specs;
  std::vector<double> thetas;
  double epsilon = 0.05;
  double T = 1.0;
  int n_out = 256;
  int replicas = 1;
  std::uint64_t seed = 1;
  double grid_step = 0.0;
  bool allow_degenerate = false;
  std::string name;

  CLI::Option* o_config = nullptr;
  CLI::Option* o_family = nullptr;
  CLI::Option* o_rate = nullptr;
  CLI::Option* o_sigma = nullptr;
  CLI::Option* o_drift = nullptr;
  CLI::Option* o_alpha = nullptr;
  CLI::Option* o_scale = nullptr;
  CLI::Option* o_atoms = nullptr;
  CLI::Option* o_thetas = nullptr;
  CLI::Option* o_eps = nullptr;
  CLI::Option* o_T = nullptr;
  CLI::Option* o_nout = nullptr;
  CLI::Option* o_replicas = nullptr;
  CLI::Option* o_seed = nullptr;
  CLI::Option* o_step = nullptr;
  CLI::Option* o_allow = nullptr;
  CLI::Option* o_name = nullptr;

  void attach(CLI::App* cmd) {
    o_config = cmd->add_option("--config", config_path, "experiment config JSON");
    o_family = cmd->add_option(
        "--family", family,
        "inline triplet: poisson|compound_poisson|brownian|jump_diffusion|"
        "symmetric_stable|custom");
    o_rate = cmd->add_option("--rate", rate, "jump intensity");
    o_sigma = cmd->add_option("--sigma", sigma, "Gaussian coefficient");
    o_drift = cmd->add_option("--drift", drift, "deterministic slope");
    o_alpha = cmd->add_option("--alpha", alpha, "stable index in (0,2]");
    o_scale = cmd->add_option("--scale", scale, "stable scale gamma");
    o_atoms = cmd->add_option("--atom", atom_specs,
                              "jump-law atom SIZE:MASS (repeatable)");
    o_thetas = cmd->add_option("--theta", thetas, "frequency (repeatable)");
    o_eps = cmd->add_option("--epsilon", epsilon, "approximation scale");
    o_T = cmd->add_option("--T", T, "time horizon");
    o_nout = cmd->add_option("--n-out", n_out, "output grid cells");
    o_replicas = cmd->add_option("--replicas", replicas, "replica count");
    o_seed = cmd->add_option("--seed", seed, "master seed");
    o_step = cmd->add_option("--grid-step", grid_step, "driver grid step");
    o_allow = cmd->add_flag("--allow-degenerate", allow_degenerate,
                            "build through degenerate frequencies");
    o_name = cmd->add_option("--name", name, "label echoed into artifacts");
  }

  LevyTriplet inline_triplet() const {
    if (family == "poisson") return LevyTriplet::poisson(rate);
    if (family == "compound_poisson")
      return LevyTriplet::compound_poisson(rate, parse_atom_specs(atom_specs));
    if (family == "brownian")
      return LevyTriplet::brownian(sigma, o_drift->count() ? drift : 0.0);
    if (family == "jump_diffusion")
      return LevyTriplet::jump_diffusion(o_drift->count() ? drift : 0.0,
                                         o_sigma->count() ? sigma : 0.0,
                                         o_rate->count() ? rate : 0.0,
                                         parse_atom_specs(atom_specs));
    if (family == "symmetric_stable")
      return LevyTriplet::symmetric_stable(alpha, scale);
    if (family == "custom") {
      LevyMeasure m;
      m.atoms = parse_atom_specs(atom_specs);
      return LevyTriplet::custom(o_drift->count() ? drift : 0.0,
                                 o_sigma->count() ? sigma : 0.0, std::move(m));
    }
    throw ValidationError("unknown --family '" + family + "'");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (o_config->count()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in) throw IoError("cannot read config file " + config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      cfg = config_from_json(buf.str());
    } else if (!o_family->count()) {
      throw ValidationError("need --config or an inline --family triplet");
    }
    if (o_family->count()) cfg.triplet = inline_triplet();
    if (o_thetas->count()) cfg.thetas = thetas;
    if (o_eps->count()) cfg.epsilon = epsilon;
    if (o_T->count()) cfg.T = T;
    if (o_nout->count()) cfg.n_out = n_out;
    if (o_replicas->count()) cfg.replicas = replicas;
    if (o_seed->count()) cfg.master_seed = seed;
    if (o_step->count()) cfg.grid_step = grid_step;
    if (o_allow->count()) cfg.allow_degenerate = true;
    if (o_name->count()) cfg.name = name;
    return cfg;
  }

  // Validates and prints (never throws on) degeneracy warnings, so scripted
  // degenerate studies keep running while the default path refuses later.
  ExperimentConfig resolve_checked() const {
    ExperimentConfig cfg = resolve();
    cfg.validate();
    for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
      ThetaClass cls = classify_theta(cfg.thetas[i], cfg.triplet);
      if (cls.kind != ThetaKind::ComplexAdmissible)
        std::cerr << "warning: theta[" << i << "] = "
                  << format_double(cfg.thetas[i]) << " is "
                  << to_string(cls.kind) << ": " << cls.reason << "\n";
    }
    if (cfg.thetas.size() > 1) {
      AdmissibilityReport adm = admissible_vector(cfg.thetas, cfg.triplet);
      if (!adm.pass) std::cerr << "warning: " << adm.summary() << "\n";
    }
    return cfg;
  }
};

int run_exponent(const Common& common, double u_min, double u_max,
                 int u_count) {
  ExperimentConfig cfg = common.resolve();
  const LevyTriplet& triplet = cfg.triplet;
  const double tol = triplet.tolerance();
  std::string out = "u,a,b,c\n";
  for (int k = 0; k < u_count; ++k) {
    const double u =
        u_count == 1
            ? u_min
            : u_min + (u_max - u_min) * static_cast<double>(k) /
                          static_cast<double>(u_count - 1);
    ExponentValue ev = levy_exponent(u, triplet);
    out += format_double(u);
    out += ',';
    out += format_double(ev.a_part);
    out += ',';
    out += format_double(ev.b_part);
    out += ',';
    out += ev.a_part > tol ? format_double(normalization_constant(ev, tol))
                           : "nan";
    out += '\n';
  }
  std::cout << out;
  return 0;
}

int run_classify(const Common& common) {
  ExperimentConfig cfg = common.resolve();
  if (cfg.thetas.empty())
    throw ValidationError("classify needs at least one --theta");
  for (std::size_t i = 0; i < cfg.thetas.size(); ++i) {
    ThetaClass cls = classify_theta(cfg.thetas[i], cfg.triplet);
    if (cfg.thetas.size() > 1)
      std::cout << "theta[" << i << "] = " << format_double(cfg.thetas[i])
                << ": ";
    std::cout << to_string(cls.kind) << ": " << cls.reason << "\n";
  }
  if (cfg.thetas.size() > 1) {
    AdmissibilityReport adm = admissible_vector(cfg.thetas, cfg.triplet);
    std::cout << "vector: " << adm.summary() << "\n";
  }
  return 0;
}

Json hypothesis_row(const HypothesisReport& r) {
  Json j;
  j["which"] = to_string(r.which);
  j["theta"] = r.theta;
  if (r.theta_h) {
    j["theta_h"] = *r.theta_h;
    j["c1"] = r.c1;
  }
  j["s"] = r.s;
  j["t"] = r.t;
  j["epsilon"] = r.epsilon;
  j["closed_form"] = r.closed_form_value;
  if (r.quadrature_value)
    j["quadrature"] = *r.quadrature_value;
  else
    j["quadrature"] = nullptr;
  j["limit_gap"] = r.limit_gap;
  j["bound_constant"] = r.bound_constant;
  j["bound"] = r.bound;
  return j;
}

int run_hypothesis(const Common& common, const std::string& which,
                   double theta_h, bool theta_h_given, int c1, double s,
                   double t, std::vector<double> ladder,
                   const std::string& mode_name) {
  ExperimentConfig cfg = common.resolve();
  if (cfg.thetas.size() != 1)
    throw ValidationError("hypothesis scans need exactly one --theta");
  const double theta = cfg.thetas[0];
  const LevyTriplet& triplet = cfg.triplet;
  const HypMode mode =
      mode_name == "quadrature" ? HypMode::Quadrature : HypMode::ClosedForm;
  if (ladder.empty()) ladder = {0.4, 0.2, 0.1, 0.05};

  const bool all = which == "all";
  if ((all || which == "hbar") && !theta_h_given)
    throw ValidationError("hbar needs --theta-h");

  for (double eps : ladder) {
    if (all || which == "h1")
      std::cout << hypothesis_row(h1_value(theta, triplet, s, t, eps, mode))
                       .dump()
                << "\n";
    if (all || which == "h2")
      std::cout << hypothesis_row(h2_value(theta, triplet, s, t, eps, mode))
                       .dump()
                << "\n";
    if (all || which == "h3")
      std::cout << hypothesis_row(h3_value(theta, triplet, s, t, eps, mode))
                       .dump()
                << "\n";
    if (all || which == "hbar") {
      for (int sign : {-1, +1}) {
        if (c1 != 0 && sign != c1) continue;
        std::cout << hypothesis_row(hbar_cross_value(theta, theta_h, sign,
                                                     triplet, s, t, eps, mode))
                         .dump()
                  << "\n";
      }
    }
  }
  if ((all || which == "h2") && ladder.size() >= 2) {
    Json fit;
    fit["which"] = "h2_exponent_fit";
    fit["theta"] = theta;
    fit["epsilons"] = ladder;
    fit["value"] = h2_exponent_fit(theta, triplet, s, t, ladder);
    std::cout << fit.dump() << "\n";
  }
  return 0;
}

int run_simulate(const Common& common, const std::string& out_dir, bool force,
                 bool dump_driver) {
  ExperimentConfig cfg = common.resolve_checked();
  std::vector<std::pair<std::string, std::string>> files;
  for (int r = 0; r < cfg.replicas; ++r) {
    const auto idx = static_cast<std::uint64_t>(r);
    std::vector<ComplexPath> parts;
    if (cfg.thetas.size() == 1) {
      parts.push_back(build_approximation(cfg, idx));
      files.emplace_back("path_r" + std::to_string(r) + ".csv",
                         path_to_csv(parts[0]));
    } else {
      parts = build_approximation_md(cfg, idx);
      files.emplace_back("path_r" + std::to_string(r) + ".csv",
                         paths_to_csv(parts));
    }
    files.emplace_back("meta_r" + std::to_string(r) + ".json",
                       path_meta_json(parts, cfg, idx));
    if (dump_driver && cfg.T > 0.0) {
      PathSample driver =
          sample_path(cfg.triplet, cfg.driver_horizon(),
                      {cfg.master_seed, idx}, cfg.effective_grid_step());
      files.emplace_back("driver_r" + std::to_string(r) + ".csv",
                         driver_to_csv(driver));
    }
  }
  Manifest manifest = write_artifacts(out_dir, files, force);
  std::cout << "wrote " << manifest.files.size() << " files to "
            << manifest.out_dir.string() << "\n";
  return 0;
}

int run_verify(const Common& common, const std::string& out_dir, bool force,
               int workers) {
  ExperimentConfig cfg = common.resolve_checked();
  StatReport report = verify_limit(cfg, workers);
  write_report(report, out_dir, force);
  for (const CheckRecord& c : report.checks)
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
              << ": estimate = " << format_double(c.estimate)
              << ", target = " << format_double(c.target)
              << ", tolerance = " << format_double(c.tolerance)
              << " (se = " << format_double(c.standard_error) << ")\n";
  for (const KsRecord& k : report.ks)
    std::cout << "[KS]   " << k.label << ": stat = " << format_double(k.ks_stat)
              << ", p = " << format_double(k.p_value) << "\n";
  const bool ok = report.all_pass();
  std::cout << (ok ? "all checks passed" : "some checks FAILED") << " ("
            << report.checks.size() << " checks, " << report.n_replicas
            << " replicas)\n";
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Kac-Stroock approximation of complex Brownian motion from Levy "
      "drivers"};
  app.require_subcommand(1);

  std::string out_dir = "out";
  bool force = false;
  int workers = 0;
  app.add_option("--out-dir", out_dir,
                 "directory for result files (env LEVYBM_OUT_DIR)")
      ->envname("LEVYBM_OUT_DIR");
  app.add_flag("--force", force, "overwrite existing result files");
  app.add_option("--workers", workers,
                 "replica threads: 0 = all cores, 1 = serial");

  CLI::App* c_exp = app.add_subcommand(
      "exponent", "print a(u), b(u), c(u) over a u-grid as CSV");
  Common exp_common;
  exp_common.attach(c_exp);
  double u_min = 0.1, u_max = 3.0;
  int u_count = 30;
  c_exp->add_option("--u-min", u_min, "grid start");
  c_exp->add_option("--u-max", u_max, "grid end");
  c_exp->add_option("--u-count", u_count, "grid points")
      ->check(CLI::PositiveNumber);

  CLI::App* c_cls =
      app.add_subcommand("classify", "classify frequencies for a triplet");
  Common cls_common;
  cls_common.attach(c_cls);

  CLI::App* c_hyp = app.add_subcommand(
      "hypothesis", "evaluate convergence hypotheses over an epsilon ladder");
  Common hyp_common;
  hyp_common.attach(c_hyp);
  std::string which = "all";
  std::string mode_name = "closed";
  double theta_h = 0.0;
  int c1 = 0;
  double win_s = 0.0, win_t = 1.0;
  std::vector<double> ladder;
  c_hyp->add_option("--which", which, "h1|h2|h3|hbar|all")
      ->check(CLI::IsMember({"h1", "h2", "h3", "hbar", "all"}));
  c_hyp->add_option("--mode", mode_name, "closed|quadrature")
      ->check(CLI::IsMember({"closed", "quadrature"}));
  CLI::Option* o_theta_h =
      c_hyp->add_option("--theta-h", theta_h, "second frequency for hbar");
  c_hyp->add_option("--c1", c1, "sign for hbar: -1, 1, or 0 for both")
      ->check(CLI::IsMember({-1, 0, 1}));
  c_hyp->add_option("--s", win_s, "window start");
  c_hyp->add_option("--t", win_t, "window end");
  c_hyp->add_option("--ladder", ladder, "epsilon ladder values");

  CLI::App* c_sim =
      app.add_subcommand("simulate", "write approximation paths as CSV");
  Common sim_common;
  sim_common.attach(c_sim);
  bool dump_driver = false;
  c_sim->add_flag("--dump-driver", dump_driver,
                  "also dump each replica's driver path");

  CLI::App* c_ver = app.add_subcommand(
      "verify", "run the limit-law verification suite and write the report");
  Common ver_common;
  ver_common.attach(c_ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(c_exp))
      return run_exponent(exp_common, u_min, u_max, u_count);
    if (app.got_subcommand(c_cls)) return run_classify(cls_common);
    if (app.got_subcommand(c_hyp))
      return run_hypothesis(hyp_common, which, theta_h,
                            o_theta_h->count() > 0, c1, win_s, win_t, ladder,
                            mode_name);
    if (app.got_subcommand(c_sim))
      return run_simulate(sim_common, out_dir, force, dump_driver);
    if (app.got_subcommand(c_ver))
      return run_verify(ver_common, out_dir, force, workers);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
