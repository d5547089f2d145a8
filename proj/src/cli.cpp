#include "petzlab/cli.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "petzlab/io.hpp"
#include "petzlab/norms.hpp"
#include "petzlab/recovery.hpp"
#include "petzlab/version.hpp"

namespace petzlab {

namespace {

DensityMatrix load_state(const std::string& path) {
  Matrix m = load_matrix(path);
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

int print_value(double v) {
  if (std::isinf(v) && v > 0.0) {
    std::puts("+inf");
    return 0;
  }
  std::printf("%.12g\n", v);
  return 0;
}

int emit_matrix(const Matrix& m, const std::string& out) {
  if (out.empty()) {
    std::printf("%s\n", matrix_to_json(m).dump(2).c_str());
  } else {
    save_matrix(out, m);
  }
  return 0;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"petz-lab: weighted-norm interpolation and recovery map checks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // ---- check ----
  SuiteConfig cfg;
  auto* check = app.add_subcommand("check", "run seeded inequality ensembles");
  check->add_option("--suite", cfg.checks, "check names, or 'all'")
      ->delimiter(',')
      ->capture_default_str();
  check->add_option("--dim", cfg.dims, "matrix dimensions")
      ->delimiter(',')
      ->capture_default_str();
  check->add_option("--instances", cfg.instances_per_dim, "instances per dimension")
      ->capture_default_str();
  check->add_option("--seed", cfg.seed, "master seed")->capture_default_str();
  check->add_option("--p", cfg.p_values, "norm exponents (per-check defaults if unset)")
      ->delimiter(',');
  check->add_option("--out", cfg.output_path, "report file");
  check->add_option("--format", cfg.format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  check->add_option("--threads", cfg.threads, "worker pool size (0 = PETZLAB_THREADS)");
  check->add_flag("--timings", cfg.timings, "stamp wall times into the report");
  check->add_option("--replay-dir", cfg.replay_dir,
                    "where failure replays go (default: next to the report)");

  // ---- compute ----
  auto* compute = app.add_subcommand("compute", "compute one quantity from files");
  compute->require_subcommand(1);
  struct {
    std::string rho, eta, x, channel, out;
    double alpha = 1.5, z = 1.0, p = 2.0, w = 1.0;
  } c;

  auto* rel = compute->add_subcommand("rel-entropy", "relative entropy D(rho||eta)");
  rel->add_option("--rho", c.rho)->required();
  rel->add_option("--eta", c.eta)->required();

  auto* mrel =
      compute->add_subcommand("measured-rel-entropy", "measured relative entropy");
  mrel->add_option("--rho", c.rho)->required();
  mrel->add_option("--eta", c.eta)->required();

  auto* az = compute->add_subcommand("alpha-z", "alpha-z Renyi divergence");
  az->add_option("--rho", c.rho)->required();
  az->add_option("--eta", c.eta)->required();
  az->add_option("--alpha", c.alpha)->required();
  az->add_option("--z", c.z)->required();

  auto* pf = compute->add_subcommand("p-fidelity", "p-fidelity of two states");
  pf->add_option("--rho", c.rho)->required();
  pf->add_option("--eta", c.eta)->required();
  pf->add_option("--p", c.p)->capture_default_str();

  auto* petz = compute->add_subcommand("petz", "apply the transpose channel");
  petz->add_option("--eta", c.eta)->required();
  petz->add_option("--channel", c.channel)->required();
  petz->add_option("--x", c.x)->required();
  petz->add_option("--out", c.out, "matrix file (stdout if unset)");

  auto* univ =
      compute->add_subcommand("universal-recovery", "apply the averaged rotated recovery");
  univ->add_option("--eta", c.eta)->required();
  univ->add_option("--channel", c.channel)->required();
  univ->add_option("--x", c.x)->required();
  univ->add_option("--out", c.out, "matrix file (stdout if unset)");

  auto* wn = compute->add_subcommand("weighted-norm", "two-sided weighted p-norm of x");
  wn->add_option("--x", c.x)->required();
  wn->add_option("--rho", c.rho)->required();
  wn->add_option("--eta", c.eta)->required();
  wn->add_option("--p", c.p)->capture_default_str();
  wn->add_option("--w", c.w)->capture_default_str();

  // ---- gen ----
  std::string gen_spec, gen_out;
  auto* gen = app.add_subcommand("gen", "write a deterministic instance ensemble");
  gen->add_option("--spec", gen_spec, "descriptor JSON")->required();
  gen->add_option("--out", gen_out, "output directory")->required();

  // ---- replay ----
  std::string rp_check;
  int rp_dim = 2, rp_index = 0;
  std::uint64_t rp_seed = 42;
  std::vector<double> rp_p;
  auto* replay = app.add_subcommand("replay", "print the inputs of one suite instance");
  replay->add_option("--check", rp_check)->required();
  replay->add_option("--dim", rp_dim)->capture_default_str();
  replay->add_option("--index", rp_index)->capture_default_str();
  replay->add_option("--seed", rp_seed)->capture_default_str();
  replay->add_option("--p", rp_p)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      SuiteResult result = run_suite(cfg);
      return result.total_failures > 0 ? 1 : 0;
    }
    if (rel->parsed()) {
      return print_value(relative_entropy(load_state(c.rho), load_state(c.eta)));
    }
    if (mrel->parsed()) {
      return print_value(
          measured_relative_entropy(load_state(c.rho), load_state(c.eta)).value);
    }
    if (az->parsed()) {
      return print_value(
          alpha_z_renyi(load_state(c.rho), load_state(c.eta), c.alpha, c.z));
    }
    if (pf->parsed()) {
      return print_value(p_fidelity(load_state(c.rho), load_state(c.eta), c.p));
    }
    if (petz->parsed()) {
      DensityMatrix eta = load_state(c.eta);
      QuantumChannel phi = load_channel(c.channel);
      RecoveryContext ctx(eta, phi);
      return emit_matrix(ctx.petz(load_matrix(c.x)), c.out);
    }
    if (univ->parsed()) {
      DensityMatrix eta = load_state(c.eta);
      QuantumChannel phi = load_channel(c.channel);
      RecoveryContext ctx(eta, phi);
      return emit_matrix(ctx.universal(load_matrix(c.x)), c.out);
    }
    if (wn->parsed()) {
      DensityMatrix rho = load_state(c.rho);
      DensityMatrix eta = load_state(c.eta);
      return print_value(weighted_p_norm(load_matrix(c.x), rho.psd(), eta.psd(), c.p, c.w));
    }
    if (gen->parsed()) {
      EnsembleDescriptor desc = descriptor_from_json(load_json(gen_spec));
      generate_ensemble(desc, gen_out);
      std::printf("wrote %d instances to %s\n", desc.count, gen_out.c_str());
      return 0;
    }
    if (replay->parsed()) {
      std::printf("%s\n", replay_instance_json(rp_check, rp_dim, rp_index, rp_seed, rp_p).c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

}  // namespace petzlab
