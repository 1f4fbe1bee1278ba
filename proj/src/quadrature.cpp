#include "mtc/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <string>

#include "mtc/errors.hpp"
#include "mtc/special_math.hpp"

namespace mtc {

void QuadratureSettings::validate() const {
  if (node_count < 2 || node_count > kMaxHermiteNodes) {
    throw DomainError("quadrature: node_count must lie in [2, 512], got " +
                      std::to_string(node_count));
  }
  if (!(abs_tolerance > 0.0)) {
    throw DomainError("quadrature: abs_tolerance must be positive");
  }
  if (!(truncation_bound >= 8.0)) {
    throw DomainError("quadrature: truncation_bound must be at least 8");
  }
}

GaussHermiteRule gauss_hermite_rule(int k) {
  if (k < 1 || k > kMaxHermiteNodes) {
    throw DomainError("gauss_hermite_rule: k must lie in [1, 512], got " + std::to_string(k));
  }
  GaussHermiteRule rule;
  if (k == 1) {
    rule.nodes = {0.0};
    rule.weights = {kSqrtPi};
    return rule;
  }

  // Jacobi matrix of the monic Hermite recurrence: zero diagonal, sqrt(i/2) off it.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd sub(k - 1);
  for (int i = 1; i < k; ++i) sub(i - 1) = std::sqrt(0.5 * i);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("gauss_hermite_rule: eigen-solve failed for k=" + std::to_string(k));
  }

  const Eigen::VectorXd& values = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  rule.nodes.resize(k);
  rule.weights.resize(k);
  for (int j = 0; j < k; ++j) {
    rule.nodes[j] = values(j);
    rule.weights[j] = kSqrtPi * vectors(0, j) * vectors(0, j);
  }
  // Enforce exact symmetry; the eigen-solver leaves O(eps) asymmetry.
  for (int j = 0; j < k / 2; ++j) {
    const int mirror = k - 1 - j;
    const double node = 0.5 * (rule.nodes[mirror] - rule.nodes[j]);
    const double weight = 0.5 * (rule.weights[mirror] + rule.weights[j]);
    rule.nodes[j] = -node;
    rule.nodes[mirror] = node;
    rule.weights[j] = weight;
    rule.weights[mirror] = weight;
  }
  if (k % 2 == 1) rule.nodes[k / 2] = 0.0;
  return rule;
}

const GaussHermiteRule& cached_gauss_hermite_rule(int k) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[k];
  if (!slot) slot = std::make_unique<const GaussHermiteRule>(gauss_hermite_rule(k));
  return *slot;
}

namespace {

double apply_hermite_rule(const RealFunction& f, const GaussHermiteRule& rule) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(rule.nodes[i] * kSqrt2);
  }
  return sum / kSqrtPi;
}

// QUADPACK QK15 abscissae (descending) and weights.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the Kronrod nodes with odd index (1, 3, 5, 7).
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod_panel(const RealFunction& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const RealFunction& f, std::span<const double> edges,
                                    double abs_tolerance, std::size_t max_evaluations) {
  if (edges.size() < 2) throw DomainError("integrate_adaptive: need at least two edges");
  if (!(abs_tolerance > 0.0)) throw DomainError("integrate_adaptive: tolerance must be positive");

  constexpr std::size_t kPanelCost = 15;
  std::priority_queue<Panel> panels;
  QuadratureResult result;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) {
      throw DomainError("integrate_adaptive: edges must be strictly increasing");
    }
    Panel p = kronrod_panel(f, edges[i], edges[i + 1]);
    result.evaluations += kPanelCost;
    total += p.value;
    total_error += p.error;
    panels.push(p);
  }

  while (total_error > abs_tolerance) {
    if (result.evaluations + 2 * kPanelCost > max_evaluations) {
      throw ConvergenceError("integrate_adaptive: evaluation budget exhausted with error estimate " +
                             std::to_string(total_error));
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(worst.lo < mid && mid < worst.hi)) {
      throw ConvergenceError("integrate_adaptive: panel width reached machine precision");
    }
    const Panel left = kronrod_panel(f, worst.lo, mid);
    const Panel right = kronrod_panel(f, mid, worst.hi);
    result.evaluations += 2 * kPanelCost;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum from the panels; the running total accumulates cancellation error.
  result.value = 0.0;
  result.error_estimate = 0.0;
  while (!panels.empty()) {
    result.value += panels.top().value;
    result.error_estimate += panels.top().error;
    panels.pop();
  }
  return result;
}

QuadratureResult integrate_gaussian_weight_detailed(const RealFunction& f,
                                                    const QuadratureSettings& settings) {
  settings.validate();
  const int fine_k = std::min(2 * settings.node_count, kMaxHermiteNodes);
  // At the node cap the comparison rule is the half-size one instead.
  const int coarse_k = fine_k == settings.node_count ? fine_k / 2 : settings.node_count;

  QuadratureResult result;
  const double coarse = apply_hermite_rule(f, cached_gauss_hermite_rule(coarse_k));
  const double fine = apply_hermite_rule(f, cached_gauss_hermite_rule(fine_k));
  result.evaluations = static_cast<std::size_t>(coarse_k + fine_k);
  result.value = fine;
  result.error_estimate = std::abs(fine - coarse);
  if (result.error_estimate <= settings.abs_tolerance) return result;

  constexpr int kInitialPanels = 32;
  std::array<double, kInitialPanels + 1> edges{};
  const double bound = settings.truncation_bound;
  for (int i = 0; i <= kInitialPanels; ++i) {
    edges[i] = -bound + 2.0 * bound * i / kInitialPanels;
  }
  const RealFunction weighted = [&f](double z) { return f(z) * std_normal_pdf(z); };
  QuadratureResult fallback =
      integrate_adaptive(weighted, edges, settings.abs_tolerance,
                         kDefaultEvaluationBudget - result.evaluations);
  fallback.evaluations += result.evaluations;
  fallback.used_fallback = true;
  return fallback;
}

double integrate_gaussian_weight(const RealFunction& f, const QuadratureSettings& settings) {
  return integrate_gaussian_weight_detailed(f, settings).value;
}

}  // namespace mtc
