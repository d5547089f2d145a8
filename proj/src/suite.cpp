#include "petzlab/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "instance_gen.hpp"
#include "petzlab/io.hpp"

namespace petzlab {

namespace gen {

namespace {

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* b = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= b[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::uint64_t stream_key(const std::string& tag, int dim, int index) {
  std::uint64_t h = fnv1a(tag.data(), tag.size(), 1469598103934665603ULL);
  std::uint64_t d64 = static_cast<std::uint64_t>(dim);
  std::uint64_t i64 = static_cast<std::uint64_t>(index);
  h = fnv1a(&d64, sizeof d64, h);
  h = fnv1a(&i64, sizeof i64, h);
  return h;
}

DensityMatrix faithful_state(int d, SplitRng& rng) {
  Matrix a = random_posdef(d, rng, 0.1, 1.0);
  return DensityMatrix(a / a.trace());
}

DensityMatrix diagonal_state(int d, SplitRng& rng) {
  Matrix m = Matrix::Zero(d, d);
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    double v = rng.uniform(0.2, 1.0);
    m(i, i) = v;
    total += v;
  }
  m /= total;
  return DensityMatrix(m);
}

std::vector<int> pinch_blocks(int d) {
  if (d == 2) return {1, 1};
  if (d == 3) return {1, 2};
  if (d == 4) return {2, 2};
  return {1, d - 1};
}

int channel_variant_count() { return 10; }

ChannelPick channel_variant(int d, int variant, SplitRng& rng) {
  switch (((variant % 10) + 10) % 10) {
    case 0:
      return {make_identity_channel(d), "identity"};
    case 1:
      return {make_depolarizing_channel(d, 0.15), "depolarizing(0.15)"};
    case 2:
      return {make_depolarizing_channel(d, 0.5), "depolarizing(0.5)"};
    case 3:
      return {make_depolarizing_channel(d, 0.85), "depolarizing(0.85)"};
    case 4:
      return {make_unitary_channel(random_unitary(d, rng)), "unitary"};
    case 5: {
      Matrix u = random_unitary(d, rng);
      return {make_block_pinching_channel(pinch_blocks(d), &u), "pinching"};
    }
    case 6: {
      Matrix u = random_unitary(d, rng);
      return {make_conditional_expectation_channel(pinch_blocks(d), &u),
              "conditional_expectation"};
    }
    case 7:
      return {make_random_isometry_channel(d, d, 2, rng), "isometry(env=2)"};
    case 8:
      return {make_random_isometry_channel(d, d, d, rng), "isometry(env=d)"};
    default:
      if (d == 4) return {make_partial_trace_channel(2, 2, 1), "partial_trace"};
      return {make_depolarizing_channel(d, 0.3), "depolarizing(0.3)"};
  }
}

namespace {

DensityMatrix block_diagonal_state(const std::vector<int>& blocks, const Matrix& u,
                                   SplitRng& rng) {
  const int d = static_cast<int>(u.rows());
  Matrix m = Matrix::Zero(d, d);
  int off = 0;
  for (int b : blocks) {
    m.block(off, off, b, b) = random_posdef(b, rng, 0.1, 1.0);
    off += b;
  }
  m /= m.trace();
  Matrix rotated = u * m * u.adjoint();
  return DensityMatrix(0.5 * (rotated + rotated.adjoint()));
}

// maximally mixed within each block, so the conditional expectation fixes it
DensityMatrix block_uniform_state(const std::vector<int>& blocks, const Matrix& u,
                                  SplitRng& rng) {
  const int d = static_cast<int>(u.rows());
  std::vector<double> q(blocks.size());
  double total = 0.0;
  for (auto& v : q) {
    v = rng.uniform(0.2, 1.0);
    total += v;
  }
  Matrix m = Matrix::Zero(d, d);
  int off = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (int i = 0; i < blocks[b]; ++i) m(off + i, off + i) = q[b] / (total * blocks[b]);
    off += blocks[b];
  }
  Matrix rotated = u * m * u.adjoint();
  return DensityMatrix(0.5 * (rotated + rotated.adjoint()));
}

}  // namespace

SufficientInstance sufficient_instance(int d, int flavor, SplitRng& rng) {
  Matrix u = random_unitary(d, rng);
  const std::vector<int> blocks = pinch_blocks(d);
  switch (((flavor % 3) + 3) % 3) {
    case 0: {
      DensityMatrix rho = block_diagonal_state(blocks, u, rng);
      DensityMatrix eta = block_diagonal_state(blocks, u, rng);
      return {rho, eta, make_block_pinching_channel(blocks, &u), "pinching"};
    }
    case 1: {
      DensityMatrix rho = random_mixed_state(d, rng);
      DensityMatrix eta = faithful_state(d, rng);
      return {rho, eta, make_unitary_channel(u), "unitary"};
    }
    default: {
      DensityMatrix rho = block_uniform_state(blocks, u, rng);
      DensityMatrix eta = block_uniform_state(blocks, u, rng);
      return {rho, eta, make_conditional_expectation_channel(blocks, &u),
              "conditional_expectation"};
    }
  }
}

}  // namespace gen

namespace {

namespace fs = std::filesystem;

std::string make_id(const char* check, int dim, int index) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s-d%d-i%d", check, dim, index);
  return buf;
}

std::vector<double> filter_grid(const std::vector<double>& pv, double min_allowed,
                                std::vector<double> fallback) {
  std::vector<double> out;
  for (double p : pv) {
    if (std::isfinite(p) && p >= min_allowed) out.push_back(p);
  }
  return out.empty() ? fallback : out;
}

PsdMatrix diagonal_psd(int d, SplitRng& rng, double lo, double hi) {
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = rng.uniform(lo, hi);
  return PsdMatrix(m);
}

// ---- alt ----

struct AltInstance {
  std::vector<PsdMatrix> xs;
  DensityMatrix rho;
  DensityMatrix eta;
  double p, r, w;
  int n;
  bool commuting;
  bool pure_rho;
};

AltInstance make_alt(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  SplitRng rng(seed, gen::stream_key("alt", dim, index));
  const std::vector<double> ps = filter_grid(pv, 1.0, {1.0, 2.0, 4.0});
  const double rs[] = {0.25, 0.5, 1.0};
  const double ws[] = {0.0, 0.5, 1.0};
  const double p = ps[index % ps.size()];
  const double r = rs[(index / 3) % 3];
  const double w = ws[(index / 9) % 3];
  const int n = 1 + (index / 27) % 3;
  const bool commuting = (index % 5) == 4;
  const bool pure_rho = !commuting && (index % 7) == 3;
  std::vector<PsdMatrix> xs;
  xs.reserve(n);
  if (commuting) {
    for (int k = 0; k < n; ++k) xs.push_back(diagonal_psd(dim, rng, 0.1, 2.0));
    DensityMatrix rho = gen::diagonal_state(dim, rng);
    DensityMatrix eta = gen::diagonal_state(dim, rng);
    return {std::move(xs), rho, eta, p, r, w, n, true, false};
  }
  for (int k = 0; k < n; ++k) xs.push_back(PsdMatrix(random_posdef(dim, rng, 0.05, 1.5)));
  DensityMatrix eta = gen::faithful_state(dim, rng);
  DensityMatrix rho =
      pure_rho ? random_pure_state(dim, rng) : random_mixed_state(dim, rng);
  return {std::move(xs), rho, eta, p, r, w, n, false, pure_rho};
}

GapReport run_alt(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  AltInstance in = make_alt(dim, index, seed, pv);
  GapReport rep = check_alt(in.xs, in.rho, in.eta, in.p, in.r, in.w);
  rep.instance_id = make_id("alt", dim, index);
  rep.diagnostics["dim"] = dim;
  rep.diagnostics["p"] = in.p;
  rep.diagnostics["r"] = in.r;
  rep.diagnostics["w"] = in.w;
  rep.diagnostics["n"] = in.n;
  rep.diagnostics["commuting"] = in.commuting ? 1.0 : 0.0;
  return rep;
}

Json replay_alt(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  AltInstance in = make_alt(dim, index, seed, pv);
  Json j;
  j["check"] = "alt";
  j["dim"] = dim;
  j["index"] = index;
  j["seed"] = seed;
  j["params"] = Json{{"p", in.p}, {"r", in.r}, {"w", in.w}, {"n", in.n},
                     {"commuting", in.commuting}};
  Json xs = Json::array();
  for (const auto& x : in.xs) xs.push_back(matrix_to_json(x.matrix()));
  j["xs"] = std::move(xs);
  j["rho"] = matrix_to_json(in.rho.matrix());
  j["eta"] = matrix_to_json(in.eta.matrix());
  return j;
}

Json params_alt(const std::vector<double>& pv) {
  return Json{{"p", filter_grid(pv, 1.0, {1.0, 2.0, 4.0})},
              {"r", {0.25, 0.5, 1.0}},
              {"w", {0.0, 0.5, 1.0}},
              {"n", {1, 2, 3}},
              {"commuting_every", 5}};
}

// ---- gt ----

struct GtInstance {
  std::vector<Matrix> hs;
  DensityMatrix rho;
  double p;
  int n;
  bool commuting;
};

GtInstance make_gt(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  SplitRng rng(seed, gen::stream_key("gt", dim, index));
  const std::vector<double> ps = filter_grid(pv, 1.0, {1.0, 2.0});
  const double p = ps[index % ps.size()];
  const int n = 1 + (index / 2) % 3;
  const bool commuting = (index % 5) == 4;
  std::vector<Matrix> hs;
  hs.reserve(n);
  if (commuting) {
    for (int k = 0; k < n; ++k) {
      Matrix h = Matrix::Zero(dim, dim);
      for (int i = 0; i < dim; ++i) h(i, i) = rng.uniform(-1.0, 1.0);
      hs.push_back(std::move(h));
    }
    return {std::move(hs), gen::diagonal_state(dim, rng), p, n, true};
  }
  for (int k = 0; k < n; ++k) hs.push_back(random_hermitian(dim, rng));
  return {std::move(hs), gen::faithful_state(dim, rng), p, n, false};
}

GapReport run_gt(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  GtInstance in = make_gt(dim, index, seed, pv);
  GapReport rep = check_gt(in.hs, in.rho, in.p);
  rep.instance_id = make_id("gt", dim, index);
  rep.diagnostics["dim"] = dim;
  rep.diagnostics["p"] = in.p;
  rep.diagnostics["n"] = in.n;
  rep.diagnostics["commuting"] = in.commuting ? 1.0 : 0.0;
  return rep;
}

Json replay_gt(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  GtInstance in = make_gt(dim, index, seed, pv);
  Json j;
  j["check"] = "gt";
  j["dim"] = dim;
  j["index"] = index;
  j["seed"] = seed;
  j["params"] = Json{{"p", in.p}, {"n", in.n}, {"commuting", in.commuting}};
  Json hs = Json::array();
  for (const auto& h : in.hs) hs.push_back(matrix_to_json(h));
  j["hs"] = std::move(hs);
  j["rho"] = matrix_to_json(in.rho.matrix());
  return j;
}

Json params_gt(const std::vector<double>& pv) {
  return Json{{"p", filter_grid(pv, 1.0, {1.0, 2.0})},
              {"n", {1, 2, 3}},
              {"commuting_every", 5}};
}

// ---- lieb ----

struct LiebInstance {
  Matrix h0;
  PsdMatrix x1;
  PsdMatrix x2;
  double p, lambda;
  bool equal;
};

LiebInstance make_lieb(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  SplitRng rng(seed, gen::stream_key("lieb", dim, index));
  // p is pinned to 1 here: concavity of the exponential-log functional is a
  // p = 1 statement, and the formal p > 1 extension has explicit
  // counterexamples (margins near -0.2 on random qubit pairs)
  const double lambdas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  const double p = 1.0;
  const double lambda = lambdas[index % 5];
  const bool equal = (index % 7) == 6;
  Matrix h0 = random_hermitian(dim, rng);
  PsdMatrix x1(random_posdef(dim, rng, 0.1, 2.0));
  PsdMatrix x2 = equal ? x1 : PsdMatrix(random_posdef(dim, rng, 0.1, 2.0));
  return {std::move(h0), std::move(x1), std::move(x2), p, lambda, equal};
}

GapReport run_lieb(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  LiebInstance in = make_lieb(dim, index, seed, pv);
  GapReport rep = check_lieb(in.h0, in.p, in.x1, in.x2, in.lambda);
  rep.instance_id = make_id("lieb", dim, index);
  rep.diagnostics["dim"] = dim;
  rep.diagnostics["p"] = in.p;
  rep.diagnostics["lambda"] = in.lambda;
  rep.diagnostics["equal_factors"] = in.equal ? 1.0 : 0.0;
  return rep;
}

Json replay_lieb(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  LiebInstance in = make_lieb(dim, index, seed, pv);
  Json j;
  j["check"] = "lieb";
  j["dim"] = dim;
  j["index"] = index;
  j["seed"] = seed;
  j["params"] = Json{{"p", in.p}, {"lambda", in.lambda}, {"equal_factors", in.equal}};
  j["h0"] = matrix_to_json(in.h0);
  j["x1"] = matrix_to_json(in.x1.matrix());
  j["x2"] = matrix_to_json(in.x2.matrix());
  return j;
}

Json params_lieb(const std::vector<double>&) {
  return Json{{"p", {1.0}},
              {"lambda", {0.0, 0.25, 0.5, 0.75, 1.0}},
              {"equal_factors_every", 7}};
}

// ---- dpi family ----

struct DpiInstance {
  DensityMatrix rho;
  DensityMatrix eta;
  QuantumChannel phi;
  double p;
  int state_kind;
  int channel_kind;
  std::string channel_name;
};

DpiInstance make_dpi(const char* tag, int dim, int index, std::uint64_t seed,
                     const std::vector<double>& grid) {
  SplitRng rng(seed, gen::stream_key(tag, dim, index));
  const int stride = grid.empty() ? 1 : static_cast<int>(grid.size());
  const double p = grid.empty() ? 0.0 : grid[index % stride];
  const int sk = (index / stride) % 4;
  const int cv = (index / (stride * 4)) % gen::channel_variant_count();
  DensityMatrix eta = gen::faithful_state(dim, rng);
  DensityMatrix rho = [&]() -> DensityMatrix {
    switch (sk) {
      case 0:
        return random_mixed_state(dim, rng);
      case 1:
        return random_comparable_state(eta, 0.2, rng);
      case 2:
        return random_near_degenerate_state(dim, rng);
      default:
        return random_pure_state(dim, rng);
    }
  }();
  gen::ChannelPick pick = gen::channel_variant(dim, cv, rng);
  return {rho, eta, std::move(pick.ch), p, sk, cv, std::move(pick.kind)};
}

void decorate_dpi(GapReport& rep, const char* name, int dim, int index,
                  const DpiInstance& in) {
  rep.instance_id = make_id(name, dim, index);
  rep.diagnostics["dim"] = dim;
  rep.diagnostics["state_kind"] = in.state_kind;
  rep.diagnostics["channel_variant"] = in.channel_kind;
  if (in.p > 0.0) rep.diagnostics["p"] = in.p;
}

Json replay_dpi(const char* name, int dim, int index, std::uint64_t seed,
                const DpiInstance& in) {
  Json j;
  j["check"] = name;
  j["dim"] = dim;
  j["index"] = index;
  j["seed"] = seed;
  Json params{{"state_kind", in.state_kind}, {"channel", in.channel_name}};
  if (in.p > 0.0) params["p"] = in.p;
  j["params"] = std::move(params);
  j["rho"] = matrix_to_json(in.rho.matrix());
  j["eta"] = matrix_to_json(in.eta.matrix());
  j["channel"] = channel_to_json(in.phi);
  return j;
}

Json params_dpi_base() {
  return Json{{"state_kinds", {"mixed", "comparable", "near_degenerate", "pure"}},
              {"channel_variants", gen::channel_variant_count()}};
}

GapReport run_dpi_rel(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  DpiInstance in = make_dpi("dpi_rel_entropy", dim, index, seed, {});
  GapReport rep = check_dpi_relative_entropy(in.rho, in.eta, in.phi);
  decorate_dpi(rep, "dpi_rel_entropy", dim, index, in);
  return rep;
}

Json replay_dpi_rel(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  return replay_dpi("dpi_rel_entropy", dim, index, seed,
                    make_dpi("dpi_rel_entropy", dim, index, seed, {}));
}

Json params_dpi_rel(const std::vector<double>&) { return params_dpi_base(); }

std::vector<double> sandwich_grid(const std::vector<double>& pv) {
  return filter_grid(pv, 1.0 + 1e-9, {1.5, 2.0, 3.0});
}

GapReport run_dpi_sandwiched(int dim, int index, std::uint64_t seed,
                             const std::vector<double>& pv) {
  DpiInstance in = make_dpi("dpi_sandwiched", dim, index, seed, sandwich_grid(pv));
  GapReport rep = check_dpi_sandwiched(in.rho, in.eta, in.phi, in.p);
  decorate_dpi(rep, "dpi_sandwiched", dim, index, in);
  return rep;
}

Json replay_dpi_sandwiched(int dim, int index, std::uint64_t seed,
                           const std::vector<double>& pv) {
  return replay_dpi("dpi_sandwiched", dim, index, seed,
                    make_dpi("dpi_sandwiched", dim, index, seed, sandwich_grid(pv)));
}

Json params_dpi_sandwiched(const std::vector<double>& pv) {
  Json j = params_dpi_base();
  j["p"] = sandwich_grid(pv);
  return j;
}

GapReport run_dpi_pfid(int dim, int index, std::uint64_t seed,
                       const std::vector<double>& pv) {
  DpiInstance in =
      make_dpi("dpi_p_fidelity", dim, index, seed, filter_grid(pv, 1.0, {1.0, 2.0, 4.0}));
  GapReport rep = check_dpi_p_fidelity(in.rho, in.eta, in.phi, in.p);
  decorate_dpi(rep, "dpi_p_fidelity", dim, index, in);
  return rep;
}

Json replay_dpi_pfid(int dim, int index, std::uint64_t seed, const std::vector<double>& pv) {
  return replay_dpi(
      "dpi_p_fidelity", dim, index, seed,
      make_dpi("dpi_p_fidelity", dim, index, seed, filter_grid(pv, 1.0, {1.0, 2.0, 4.0})));
}

Json params_dpi_pfid(const std::vector<double>& pv) {
  Json j = params_dpi_base();
  j["p"] = filter_grid(pv, 1.0, {1.0, 2.0, 4.0});
  return j;
}

// ---- recovery family ----

struct RecInstance {
  DensityMatrix rho;
  DensityMatrix eta;
  QuantumChannel phi;
  double p;
  double delta;
  bool engineered;
  std::string kind;
};

RecInstance make_rec(const char* tag, int dim, int index, std::uint64_t seed,
                     const std::vector<double>& grid) {
  SplitRng rng(seed, gen::stream_key(tag, dim, index));
  const int stride = grid.empty() ? 1 : static_cast<int>(grid.size());
  const double p = grid.empty() ? 0.0 : grid[index % stride];
  if ((index % 10) == 9) {
    gen::SufficientInstance s = gen::sufficient_instance(dim, (index / 10) % 2, rng);
    return {s.rho, s.eta, std::move(s.phi), p, 0.0, true, std::move(s.kind)};
  }
  const double deltas[] = {0.1, 0.3, 0.5};
  const double delta = deltas[(index / stride) % 3];
  const int cv = (index / (stride * 3)) % gen::channel_variant_count();
  DensityMatrix eta = gen::faithful_state(dim, rng);
  DensityMatrix rho = random_comparable_state(eta, delta, rng);
  gen::ChannelPick pick = gen::channel_variant(dim, cv, rng);
  return {rho, eta, std::move(pick.ch), p, delta, false, std::move(pick.kind)};
}

void decorate_rec(GapReport& rep, const char* name, int dim, int index,
                  const RecInstance& in) {
  rep.instance_id = make_id(name, dim, index);
  rep.diagnostics["dim"] = dim;
  rep.diagnostics["delta"] = in.delta;
  rep.diagnostics["engineered"] = in.engineered ? 1.0 : 0.0;
  if (in.p > 0.0) rep.diagnostics["p"] = in.p;
  if (in.engineered) {
    RecoveryContext ctx(in.eta, in.phi);
    Matrix back = ctx.petz(in.phi.apply(in.rho.matrix()));
    rep.diagnostics["petz_exactness"] = schatten_norm(back - in.rho.matrix(), 1.0);
  }
}

Json replay_rec(const char* name, int dim, int index, std::uint64_t seed,
                const RecInstance& in) {
  Json j;
  j["check"] = name;
  j["dim"] = dim;
  j["index"] = index;
  j["seed"] = seed;
  Json params{{"delta", in.delta}, {"engineered", in.engineered}, {"kind", in.kind}};
  if (in.p > 0.0) params["p"] = in.p;
  j["params"] = std::move(params);
  j["rho"] = matrix_to_json(in.rho.matrix());
  j["eta"] = matrix_to_json(in.eta.matrix());
  j["channel"] = channel_to_json(in.phi);
  return j;
}

Json params_rec_base() {
  return Json{{"delta", {0.1, 0.3, 0.5}},
              {"engineered_every", 10},
              {"channel_variants", gen::channel_variant_count()}};
}

GapReport run_recovery_p(int dim, int index, std::uint64_t seed,
                         const std::vector<double>& pv) {
  RecInstance in = make_rec("recovery_p", dim, index, seed, filter_grid(pv, 1.0, {1.0, 2.0}));
  GapReport rep = check_recovery_p(in.rho, in.eta, in.phi, in.p);
  decorate_rec(rep, "recovery_p", dim, index, in);
  return rep;
}

Json replay_recovery_p(int dim, int index, std::uint64_t seed,
                       const std::vector<double>& pv) {
  return replay_rec(
      "recovery_p", dim, index, seed,
      make_rec("recovery_p", dim, index, seed, filter_grid(pv, 1.0, {1.0, 2.0})));
}

Json params_recovery_p(const std::vector<double>& pv) {
  Json j = params_rec_base();
  j["p"] = filter_grid(pv, 1.0, {1.0, 2.0});
  return j;
}

GapReport run_universal(int dim, int index, std::uint64_t seed,
                        const std::vector<double>& pv) {
  RecInstance in =
      make_rec("universal_recovery", dim, index, seed, filter_grid(pv, 1.0, {1.0, 2.0}));
  GapReport rep = check_universal_recovery(in.rho, in.eta, in.phi, in.p);
  decorate_rec(rep, "universal_recovery", dim, index, in);
  return rep;
}

Json replay_universal(int dim, int index, std::uint64_t seed,
                      const std::vector<double>& pv) {
  return replay_rec(
      "universal_recovery", dim, index, seed,
      make_rec("universal_recovery", dim, index, seed, filter_grid(pv, 1.0, {1.0, 2.0})));
}

Json params_universal(const std::vector<double>& pv) {
  Json j = params_rec_base();
  j["p"] = filter_grid(pv, 1.0, {1.0, 2.0});
  return j;
}

GapReport run_measured(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  RecInstance in = make_rec("measured_recovery", dim, index, seed, {});
  GapReport rep = check_measured_recovery(in.rho, in.eta, in.phi);
  decorate_rec(rep, "measured_recovery", dim, index, in);
  return rep;
}

Json replay_measured(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  return replay_rec("measured_recovery", dim, index, seed,
                    make_rec("measured_recovery", dim, index, seed, {}));
}

Json params_measured(const std::vector<double>&) { return params_rec_base(); }

GapReport run_quadratic(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  RecInstance in = make_rec("quadratic", dim, index, seed, {});
  GapReport rep = check_quadratic(in.rho, in.eta, in.phi);
  decorate_rec(rep, "quadratic", dim, index, in);
  return rep;
}

Json replay_quadratic(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  return replay_rec("quadratic", dim, index, seed,
                    make_rec("quadratic", dim, index, seed, {}));
}

Json params_quadratic(const std::vector<double>&) { return params_rec_base(); }

// ---- petz equality ----

struct PetzEqInstance {
  DensityMatrix rho;
  DensityMatrix eta;
  QuantumChannel phi;
  bool engineered;
  std::string kind;
};

PetzEqInstance make_petz_eq(int dim, int index, std::uint64_t seed) {
  SplitRng rng(seed, gen::stream_key("petz_equality", dim, index));
  if ((index % 2) == 0) {
    gen::SufficientInstance s = gen::sufficient_instance(dim, (index / 2) % 3, rng);
    return {s.rho, s.eta, std::move(s.phi), true, std::move(s.kind)};
  }
  DensityMatrix eta = gen::faithful_state(dim, rng);
  DensityMatrix rho = random_comparable_state(eta, 0.2, rng);
  gen::ChannelPick pick = gen::channel_variant(dim, (index / 2) % gen::channel_variant_count(), rng);
  return {rho, eta, std::move(pick.ch), false, std::move(pick.kind)};
}

GapReport run_petz_eq(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  PetzEqInstance in = make_petz_eq(dim, index, seed);
  GapReport rep = check_petz_equality(in.rho, in.eta, in.phi);
  rep.instance_id = make_id("petz_equality", dim, index);
  rep.diagnostics["dim"] = dim;
  rep.diagnostics["engineered"] = in.engineered ? 1.0 : 0.0;
  return rep;
}

Json replay_petz_eq(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  PetzEqInstance in = make_petz_eq(dim, index, seed);
  Json j;
  j["check"] = "petz_equality";
  j["dim"] = dim;
  j["index"] = index;
  j["seed"] = seed;
  j["params"] = Json{{"engineered", in.engineered}, {"kind", in.kind}};
  j["rho"] = matrix_to_json(in.rho.matrix());
  j["eta"] = matrix_to_json(in.eta.matrix());
  j["channel"] = channel_to_json(in.phi);
  return j;
}

Json params_petz_eq(const std::vector<double>&) {
  return Json{{"engineered_every", 2}, {"equality_tol", 1e-9}};
}

// ---- hirschman ----

struct HirInstance {
  std::vector<ExpTerm> terms;
  double theta;
  bool pure_exponential;
};

// smallest |g| seen along both boundary lines and at theta itself; the scan
// walks the lines with incremental phase rotation so it stays cheap
double strip_min_modulus(const std::vector<ExpTerm>& terms, double theta) {
  auto value = [&](Complex z) {
    Complex acc = 0.0;
    for (const auto& term : terms) acc += term.c * std::exp(term.a * z);
    return std::abs(acc);
  };
  double m = value(Complex(theta, 0.0));
  const double t0 = -12.0, t1 = 12.0, step = 1e-3;
  const int steps = static_cast<int>((t1 - t0) / step);
  for (double re : {0.0, 1.0}) {
    std::vector<Complex> cur(terms.size()), rot(terms.size());
    for (std::size_t k = 0; k < terms.size(); ++k) {
      cur[k] = terms[k].c * std::exp(terms[k].a * Complex(re, t0));
      rot[k] = std::exp(Complex(0.0, terms[k].a * step));
    }
    for (int i = 0; i <= steps; ++i) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < terms.size(); ++k) acc += cur[k];
      m = std::min(m, std::abs(acc));
      for (std::size_t k = 0; k < terms.size(); ++k) cur[k] *= rot[k];
    }
  }
  return m;
}

HirInstance make_hirschman(int dim, int index, std::uint64_t seed) {
  SplitRng rng(seed, gen::stream_key("hirschman", dim, index));
  const double thetas[] = {0.25, 0.5, 0.75};
  const double theta = thetas[index % 3];
  const int n = ((index % 8) == 7) ? 1 : 1 + (index / 3) % 4;
  std::vector<ExpTerm> terms;
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<ExpTerm> draw;
    draw.reserve(n);
    for (int k = 0; k < n; ++k) draw.push_back({rng.cnormal(), rng.uniform(-2.0, 2.0)});
    // keep |g| bounded away from zero across the strip: the checker needs
    // ln|g| integrable and the quadrature needs it smooth
    if (strip_min_modulus(draw, theta) >= 0.05) {
      terms = std::move(draw);
      break;
    }
  }
  if (terms.empty()) terms.push_back({Complex(1.0, 0.0), 0.0});
  return {std::move(terms), theta, n == 1};
}

GapReport run_hirschman(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  HirInstance in = make_hirschman(dim, index, seed);
  // ln|g| can dip steeply near the modulus floor, so allow extra refinement
  QuadratureOptions opts;
  opts.max_doublings = 6;
  GapReport rep = check_hirschman_scalar(in.terms, in.theta, opts);
  rep.instance_id = make_id("hirschman", dim, index);
  rep.diagnostics["dim"] = dim;
  rep.diagnostics["theta"] = in.theta;
  rep.diagnostics["terms"] = static_cast<double>(in.terms.size());
  rep.diagnostics["pure_exponential"] = in.pure_exponential ? 1.0 : 0.0;
  return rep;
}

Json replay_hirschman(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  HirInstance in = make_hirschman(dim, index, seed);
  Json j;
  j["check"] = "hirschman";
  j["dim"] = dim;
  j["index"] = index;
  j["seed"] = seed;
  j["params"] = Json{{"theta", in.theta}, {"pure_exponential", in.pure_exponential}};
  Json terms = Json::array();
  for (const auto& term : in.terms) {
    terms.push_back(Json{{"re", term.c.real()}, {"im", term.c.imag()}, {"a", term.a}});
  }
  j["terms"] = std::move(terms);
  return j;
}

Json params_hirschman(const std::vector<double>&) {
  return Json{{"theta", {0.25, 0.5, 0.75}},
              {"terms", {1, 2, 3, 4}},
              {"single_term_every", 8}};
}

// ---- entropy derivative ----

struct DerivInstance {
  DensityMatrix rho;
  DensityMatrix eta;
  QuantumChannel phi;
  double delta;
  std::string kind;
};

DerivInstance make_deriv(int dim, int index, std::uint64_t seed) {
  SplitRng rng(seed, gen::stream_key("entropy_derivative", dim, index));
  const double deltas[] = {0.1, 0.3, 0.5};
  const double delta = deltas[index % 3];
  const int cv = (index / 3) % gen::channel_variant_count();
  DensityMatrix eta = gen::faithful_state(dim, rng);
  DensityMatrix rho = random_comparable_state(eta, delta, rng);
  gen::ChannelPick pick = gen::channel_variant(dim, cv, rng);
  return {rho, eta, std::move(pick.ch), delta, std::move(pick.kind)};
}

GapReport run_deriv(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  DerivInstance in = make_deriv(dim, index, seed);
  GapReport rep = check_entropy_derivative(in.rho, in.eta, in.phi);
  rep.instance_id = make_id("entropy_derivative", dim, index);
  rep.diagnostics["dim"] = dim;
  rep.diagnostics["delta"] = in.delta;
  return rep;
}

Json replay_deriv(int dim, int index, std::uint64_t seed, const std::vector<double>&) {
  DerivInstance in = make_deriv(dim, index, seed);
  Json j;
  j["check"] = "entropy_derivative";
  j["dim"] = dim;
  j["index"] = index;
  j["seed"] = seed;
  j["params"] = Json{{"delta", in.delta}, {"kind", in.kind}};
  j["rho"] = matrix_to_json(in.rho.matrix());
  j["eta"] = matrix_to_json(in.eta.matrix());
  j["channel"] = channel_to_json(in.phi);
  return j;
}

Json params_deriv(const std::vector<double>&) {
  return Json{{"delta", {0.1, 0.3, 0.5}}, {"theta_ladder", {1e-2, 1e-3, 1e-4}}};
}

// ---- registry ----

using RunFn = GapReport (*)(int, int, std::uint64_t, const std::vector<double>&);
using ReplayFn = Json (*)(int, int, std::uint64_t, const std::vector<double>&);
using ParamsFn = Json (*)(const std::vector<double>&);

struct CheckDef {
  const char* name;
  RunFn run;
  ReplayFn replay;
  ParamsFn params;
};

const std::vector<CheckDef>& definitions() {
  static const std::vector<CheckDef> defs = {
      {"alt", run_alt, replay_alt, params_alt},
      {"gt", run_gt, replay_gt, params_gt},
      {"lieb", run_lieb, replay_lieb, params_lieb},
      {"dpi_rel_entropy", run_dpi_rel, replay_dpi_rel, params_dpi_rel},
      {"dpi_sandwiched", run_dpi_sandwiched, replay_dpi_sandwiched, params_dpi_sandwiched},
      {"dpi_p_fidelity", run_dpi_pfid, replay_dpi_pfid, params_dpi_pfid},
      {"recovery_p", run_recovery_p, replay_recovery_p, params_recovery_p},
      {"universal_recovery", run_universal, replay_universal, params_universal},
      {"measured_recovery", run_measured, replay_measured, params_measured},
      {"quadratic", run_quadratic, replay_quadratic, params_quadratic},
      {"petz_equality", run_petz_eq, replay_petz_eq, params_petz_eq},
      {"hirschman", run_hirschman, replay_hirschman, params_hirschman},
      {"entropy_derivative", run_deriv, replay_deriv, params_deriv},
  };
  return defs;
}

const CheckDef& find_check(const std::string& name) {
  for (const auto& def : definitions()) {
    if (name == def.name) return def;
  }
  throw std::invalid_argument("unknown check: " + name);
}

int resolve_threads(int requested) {
  int threads = requested;
  if (threads <= 0) {
    const char* env = std::getenv("PETZLAB_THREADS");
    threads = env ? std::atoi(env) : 1;
    if (threads <= 0) threads = 1;
  }
  return std::min(threads, 64);
}

void run_jobs(int threads, std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  const int n = std::min<int>(threads, static_cast<int>(count));
  pool.reserve(n - 1);
  for (int t = 1; t < n; ++t) pool.emplace_back(loop);
  loop();
  for (auto& th : pool) th.join();
}

}  // namespace

const std::vector<std::string>& check_registry() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& def : definitions()) out.emplace_back(def.name);
    return out;
  }();
  return names;
}

bool is_registered_check(const std::string& name) {
  for (const auto& def : definitions()) {
    if (name == def.name) return true;
  }
  return false;
}

GapReport run_check_instance(const std::string& check, int dim, int index,
                             std::uint64_t seed, const std::vector<double>& p_values) {
  return find_check(check).run(dim, index, seed, p_values);
}

std::string replay_instance_json(const std::string& check, int dim, int index,
                                 std::uint64_t seed, const std::vector<double>& p_values) {
  return find_check(check).replay(dim, index, seed, p_values).dump(2);
}

SuiteResult run_suite(const SuiteConfig& config) {
  if (config.instances_per_dim < 1) {
    throw std::invalid_argument("run_suite: instances_per_dim must be positive");
  }
  if (config.dims.empty()) throw std::invalid_argument("run_suite: no dimensions given");
  for (int d : config.dims) {
    if (d < 2 || d > 16) {
      throw std::invalid_argument("run_suite: dimensions must lie in [2, 16]");
    }
  }
  if (config.format != "json" && config.format != "csv") {
    throw std::invalid_argument("run_suite: format must be json or csv");
  }
  std::vector<std::string> selected;
  bool all = config.checks.empty();
  for (const auto& name : config.checks) {
    if (name == "all") {
      all = true;
    } else if (!is_registered_check(name)) {
      throw std::invalid_argument("unknown check: " + name);
    }
  }
  if (all) {
    selected = check_registry();
  } else {
    for (const auto& name : config.checks) {
      if (std::find(selected.begin(), selected.end(), name) == selected.end()) {
        selected.push_back(name);
      }
    }
  }

  const int threads = resolve_threads(config.threads);
  const int per_dim = config.instances_per_dim;
  const std::size_t per_check = config.dims.size() * static_cast<std::size_t>(per_dim);

  SuiteResult result;
  const auto suite_start = std::chrono::steady_clock::now();
  std::mutex err_mutex;
  std::vector<std::string> errors;

  for (const auto& name : selected) {
    const CheckDef& def = find_check(name);
    CheckSummary summary;
    summary.check = name;
    summary.params = def.params(config.p_values).dump();
    summary.instances = static_cast<int>(per_check);
    summary.reports.resize(per_check);

    const auto start = std::chrono::steady_clock::now();
    run_jobs(threads, per_check, [&](std::size_t slot) {
      const int dim = config.dims[slot / per_dim];
      const int index = static_cast<int>(slot % per_dim);
      GapReport rep;
      try {
        rep = def.run(dim, index, config.seed, config.p_values);
      } catch (const std::exception& e) {
        rep.check_name = name;
        rep.instance_id = make_id(def.name, dim, index);
        rep.margin = -1e300;
        rep.pass = false;
        rep.diagnostics["exception"] = 1.0;
        rep.diagnostics["dim"] = dim;
        std::lock_guard<std::mutex> lock(err_mutex);
        errors.push_back(rep.instance_id + ": " + e.what());
      }
      summary.reports[slot] = std::move(rep);
    });
    const auto stop = std::chrono::steady_clock::now();
    summary.runtime_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();

    double min_margin = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& rep : summary.reports) {
      min_margin = std::min(min_margin, rep.margin);
      sum += rep.margin;
      if (!rep.pass) summary.failures.push_back(rep.instance_id);
    }
    summary.min_margin = min_margin;
    summary.mean_margin = sum / static_cast<double>(per_check);

    char line[256];
    if (config.timings) {
      std::snprintf(line, sizeof line,
                    "%-20s instances=%-6d failures=%-5zu min_margin=% .6e "
                    "mean_margin=% .6e (%.0f ms)\n",
                    summary.check.c_str(), summary.instances, summary.failures.size(),
                    summary.min_margin, summary.mean_margin, summary.runtime_ms);
    } else {
      std::snprintf(line, sizeof line,
                    "%-20s instances=%-6d failures=%-5zu min_margin=% .6e "
                    "mean_margin=% .6e\n",
                    summary.check.c_str(), summary.instances, summary.failures.size(),
                    summary.min_margin, summary.mean_margin);
    }
    std::fputs(line, stdout);
    std::fflush(stdout);

    result.total_failures += summary.failures.size();
    result.checks.push_back(std::move(summary));
  }

  const auto suite_stop = std::chrono::steady_clock::now();
  result.runtime_ms = std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
                          suite_stop - suite_start)
                          .count();

  for (const auto& msg : errors) std::fprintf(stderr, "error: %s\n", msg.c_str());

  if (!config.output_path.empty()) write_report(config, result);

  std::string replay_dir = config.replay_dir;
  if (replay_dir.empty() && !config.output_path.empty()) {
    fs::path out(config.output_path);
    fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
    replay_dir = (parent / "replay").string();
  }
  if (!replay_dir.empty() && result.total_failures > 0) {
    std::error_code ec;
    fs::create_directories(replay_dir, ec);
    if (ec) throw std::runtime_error("cannot create replay directory " + replay_dir);
    for (const auto& summary : result.checks) {
      for (std::size_t slot = 0; slot < summary.reports.size(); ++slot) {
        const GapReport& rep = summary.reports[slot];
        if (rep.pass) continue;
        const int dim = config.dims[slot / per_dim];
        const int index = static_cast<int>(slot % per_dim);
        fs::path file = fs::path(replay_dir) / (rep.instance_id + ".json");
        std::ofstream os(file);
        if (!os) throw std::runtime_error("cannot write replay file " + file.string());
        os << replay_instance_json(summary.check, dim, index, config.seed, config.p_values)
           << '\n';
      }
    }
  }
  return result;
}

}  // namespace petzlab
