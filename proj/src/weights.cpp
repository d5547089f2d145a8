#include "petzlab/weights.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace petzlab {

double beta_density(double theta, double t) {
  if (theta < 0.0 || theta >= 1.0) {
    throw std::invalid_argument("beta_density: theta must lie in [0, 1)");
  }
  if (theta == 0.0) {
    return 0.5 * M_PI / (std::cosh(M_PI * t) + 1.0);
  }
  return std::sin(M_PI * theta) /
         (2.0 * theta * (std::cosh(M_PI * t) + std::cos(M_PI * theta)));
}

BetaWeight::BetaWeight(double th) : theta(th) {
  if (th < 0.0 || th >= 1.0) {
    throw std::invalid_argument("BetaWeight: theta must lie in [0, 1)");
  }
}

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
// Classic gauleg; n stays small (<= a few hundred) so this is cheap, but we
// cache per n anyway since integrals are evaluated in bulk.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

const std::pair<std::vector<double>, std::vector<double>>& cached_gl(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    std::pair<std::vector<double>, std::vector<double>> nw;
    gauss_legendre(n, nw.first, nw.second);
    it = cache.emplace(n, std::move(nw)).first;
  }
  return it->second;
}

}  // namespace

QuadratureRule make_quadrature(double half_width, int nodes_per_unit) {
  if (half_width <= 0.0 || nodes_per_unit < 2) {
    throw std::invalid_argument("make_quadrature: bad parameters");
  }
  QuadratureRule rule;
  rule.half_width = half_width;
  rule.nodes_per_unit = nodes_per_unit;
  const int panels = static_cast<int>(std::ceil(2.0 * half_width));
  const double panel_width = 2.0 * half_width / panels;
  const auto& [gx, gw] = cached_gl(nodes_per_unit);
  rule.nodes.reserve(panels * nodes_per_unit);
  rule.weights.reserve(panels * nodes_per_unit);
  for (int p = 0; p < panels; ++p) {
    const double a = -half_width + p * panel_width;
    const double mid = a + 0.5 * panel_width;
    const double half = 0.5 * panel_width;
    for (int i = 0; i < nodes_per_unit; ++i) {
      rule.nodes.push_back(mid + half * gx[i]);
      rule.weights.push_back(half * gw[i]);
    }
  }
  return rule;
}

namespace {

template <typename Value, typename Eval, typename Delta>
Value integrate_adaptive(const Eval& eval_on, const Delta& delta, const QuadratureOptions& opts,
                         QuadratureInfo* info) {
  int npu = opts.base_nodes_per_unit;
  QuadratureInfo local;
  Value current = eval_on(make_quadrature(opts.half_width, npu), local);
  for (int k = 0; k < opts.max_doublings; ++k) {
    npu *= 2;
    Value refined = eval_on(make_quadrature(opts.half_width, npu), local);
    double d = delta(refined, current);
    current = refined;
    local.doublings = k + 1;
    local.last_delta = d;
    if (d <= opts.rel_tol) {
      if (info) *info = local;
      return current;
    }
  }
  throw std::runtime_error("integrate_weighted: refinement cap reached without convergence");
}

}  // namespace

double integrate_weighted(const std::function<double(double)>& f, double theta,
                          const QuadratureOptions& opts, QuadratureInfo* info) {
  BetaWeight beta(theta);
  auto eval_on = [&](const QuadratureRule& rule, QuadratureInfo& li) {
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * beta(rule.nodes[i]) * f(rule.nodes[i]);
      ++li.evaluations;
    }
    return acc;
  };
  auto delta = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
  return integrate_adaptive<double>(eval_on, delta, opts, info);
}

Matrix integrate_weighted_matrix(const std::function<Matrix(double)>& f, double theta,
                                 const QuadratureOptions& opts, QuadratureInfo* info) {
  BetaWeight beta(theta);
  auto eval_on = [&](const QuadratureRule& rule, QuadratureInfo& li) {
    Matrix acc;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      Matrix term = rule.weights[i] * beta(rule.nodes[i]) * f(rule.nodes[i]);
      if (acc.size() == 0) {
        acc = term;
      } else {
        acc += term;
      }
      ++li.evaluations;
    }
    return acc;
  };
  auto delta = [](const Matrix& a, const Matrix& b) {
    return (a - b).norm() / std::max(1.0, a.norm());
  };
  return integrate_adaptive<Matrix>(eval_on, delta, opts, info);
}

}  // namespace petzlab
