#include "csa/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace csa {

namespace {

constexpr double kSignThreshold = 1e-12;
constexpr double kGridBudget = 5e8;

// Reusable buffers for evaluating the objective, its subgradient and the
// sign-operator lower bound without allocating per call.
class Evaluator {
 public:
  Evaluator(const DensityMatrix& rho, const StateSet& set)
      : d_(rho.dim()), n_(set.size()), rho_(rho.matrix().entries().begin(),
                                            rho.matrix().entries().end()) {
    if (set.dim() != d_) {
      throw DimensionMismatch("state set dimension " + std::to_string(set.dim()) +
                              " does not match target dimension " + std::to_string(d_));
    }
    nus_.reserve(n_ * d_ * d_);
    for (const auto& nu : set.elements()) {
      nus_.insert(nus_.end(), nu.matrix().entries().begin(), nu.matrix().entries().end());
    }
    work_.resize(d_ * d_);
    vecs_.resize(d_ * d_);
    sign_.resize(d_ * d_);
    vals_.resize(d_);
  }

  std::size_t size() const { return n_; }

  double value(std::span<const double> p) {
    build(p);
    detail::jacobi_eigen_inplace(work_, d_, vals_, vecs_);
    double sum = 0.0;
    for (double v : vals_) sum += std::abs(v);
    return sum;
  }

  // Returns the objective; fills `grad` and the lower bound certified by S.
  double value_and_subgradient(std::span<const double> p, std::span<double> grad,
                               double& lower_bound) {
    const double f = value(p);
    std::fill(sign_.begin(), sign_.end(), Complex{});
    for (std::size_t j = 0; j < d_; ++j) {
      const double s = vals_[j] > kSignThreshold ? 1.0 : (vals_[j] < -kSignThreshold ? -1.0 : 0.0);
      if (s == 0.0) continue;
      for (std::size_t a = 0; a < d_; ++a) {
        const Complex va = s * vecs_[a * d_ + j];
        for (std::size_t b = 0; b < d_; ++b) sign_[a * d_ + b] += va * std::conj(vecs_[b * d_ + j]);
      }
    }
    const double s_rho = trace_with_sign(rho_.data());
    double min_term = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i) {
      const double s_nu = trace_with_sign(nus_.data() + i * d_ * d_);
      grad[i] = -s_nu;
      min_term = std::min(min_term, s_rho - s_nu);
    }
    lower_bound = std::max(0.0, min_term);
    return f;
  }

 private:
  void build(std::span<const double> p) {
    std::copy(rho_.begin(), rho_.end(), work_.begin());
    const std::size_t block = d_ * d_;
    for (std::size_t i = 0; i < n_; ++i) {
      const double w = p[i];
      if (w == 0.0) continue;
      const Complex* nu = nus_.data() + i * block;
      for (std::size_t e = 0; e < block; ++e) work_[e] -= w * nu[e];
    }
  }

  // Re Tr[S M] for Hermitian S, M.
  double trace_with_sign(const Complex* m) const {
    double t = 0.0;
    for (std::size_t a = 0; a < d_; ++a) {
      for (std::size_t b = 0; b < d_; ++b) t += (sign_[a * d_ + b] * m[b * d_ + a]).real();
    }
    return t;
  }

  std::size_t d_;
  std::size_t n_;
  std::vector<Complex> rho_;
  std::vector<Complex> nus_;
  std::vector<Complex> work_;
  std::vector<Complex> vecs_;
  std::vector<Complex> sign_;
  std::vector<double> vals_;
};

// Euclidean projection of v onto the simplex, written into out; `scratch`
// must hold v.size() doubles.
void project_into(std::span<const double> v, std::span<double> out, std::span<double> scratch) {
  const std::size_t n = v.size();
  std::copy(v.begin(), v.end(), scratch.begin());
  std::sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(n), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    cumsum += scratch[j];
    const double candidate = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (scratch[j] - candidate > 0.0) theta = candidate;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = std::max(v[i] - theta, 0.0);
}

std::vector<double> random_simplex_point(std::size_t n, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double sum = 0.0;
  for (auto& x : p) {
    x = expo(rng);
    sum += x;
  }
  for (auto& x : p) x /= sum;
  return p;
}

std::vector<double> normalized(std::vector<double> p) {
  std::vector<double> scratch(p.size());
  std::vector<double> out(p.size());
  project_into(p, out, scratch);
  return out;
}

}  // namespace

StateSet::StateSet(std::vector<DensityMatrix> elements, std::vector<std::string> labels)
    : elements_(std::move(elements)), labels_(std::move(labels)) {
  if (elements_.empty()) throw std::invalid_argument("StateSet: must be nonempty");
  if (labels_.size() != elements_.size()) {
    throw std::invalid_argument("StateSet: label count does not match element count");
  }
  for (const auto& e : elements_) {
    if (e.dim() != elements_.front().dim()) {
      throw DimensionMismatch("StateSet: elements must share one dimension");
    }
  }
}

Weights::Weights(std::vector<double> values) : values_(std::move(values)) {
  if (!is_feasible(values_)) throw std::invalid_argument("Weights: not a probability vector");
}

Weights Weights::vertex(std::size_t size, std::size_t index) {
  std::vector<double> v(size, 0.0);
  v.at(index) = 1.0;
  return Weights(std::move(v));
}

Weights Weights::uniform(std::size_t size) {
  return Weights(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

bool Weights::is_feasible(std::span<const double> values, double tolerance) {
  if (values.empty()) return false;
  double sum = 0.0;
  for (double v : values) {
    if (!(v >= 0.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

ComplexMatrix mixture(const StateSet& set, std::span<const double> p) {
  if (p.size() != set.size()) throw DimensionMismatch("mixture: weight count mismatch");
  ComplexMatrix out(set.dim());
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (p[i] != 0.0) out += set[i].matrix() * Complex(p[i]);
  }
  return out;
}

double distance_to_mixture(const DensityMatrix& rho, const StateSet& set,
                           std::span<const double> p) {
  if (p.size() != set.size()) throw DimensionMismatch("distance_to_mixture: weight count mismatch");
  Evaluator ev(rho, set);
  return ev.value(p);
}

double objective(const DensityMatrix& rho, const StateSet& set, const Weights& p) {
  return distance_to_mixture(rho, set, p.values());
}

std::vector<double> subgradient(const DensityMatrix& rho, const StateSet& set, const Weights& p) {
  if (p.size() != set.size()) throw DimensionMismatch("subgradient: weight count mismatch");
  Evaluator ev(rho, set);
  std::vector<double> grad(set.size());
  double lb = 0.0;
  ev.value_and_subgradient(p.values(), grad, lb);
  return grad;
}

double dual_lower_bound(const DensityMatrix& rho, const StateSet& set, const Weights& p) {
  if (p.size() != set.size()) throw DimensionMismatch("dual_lower_bound: weight count mismatch");
  Evaluator ev(rho, set);
  std::vector<double> grad(set.size());
  double lb = 0.0;
  ev.value_and_subgradient(p.values(), grad, lb);
  return lb;
}

Weights project_simplex(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("project_simplex: empty vector");
  std::vector<double> scratch(v.size());
  std::vector<double> out(v.size());
  project_into(v, out, scratch);
  return Weights(std::move(out));
}

ApproximationResult minimize(const DensityMatrix& rho, const StateSet& set,
                             const SolverOptions& opts) {
  Evaluator ev(rho, set);
  const std::size_t n = set.size();

  std::vector<std::vector<double>> starts;
  if (opts.warm_start) {
    if (opts.warm_start->size() != n) throw DimensionMismatch("minimize: warm start size mismatch");
    starts.push_back(normalized(*opts.warm_start));
  }
  {
    std::size_t nearest = 0;
    double nearest_value = std::numeric_limits<double>::infinity();
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      e[i] = 1.0;
      const double v = ev.value(e);
      e[i] = 0.0;
      if (v < nearest_value) {
        nearest_value = v;
        nearest = i;
      }
    }
    e[nearest] = 1.0;
    starts.push_back(std::move(e));
  }
  std::mt19937_64 rng(opts.seed);
  for (int r = 0; r < opts.random_restarts; ++r) starts.push_back(random_simplex_point(n, rng));

  std::vector<double> best(n), x(n), y(n), avg(n), grad(n), scratch(n);
  double best_value = std::numeric_limits<double>::infinity();
  double best_lower = 0.0;
  long long iterations = 0;

  auto consider = [&](std::span<const double> p, double value, double lower) {
    best_lower = std::max(best_lower, lower);
    if (value < best_value) {
      best_value = value;
      std::copy(p.begin(), p.end(), best.begin());
    }
  };
  auto certified = [&] { return best_value - best_lower <= opts.gap_tolerance; };

  // Polish the incumbent with Polyak steps aimed at the certified lower bound.
  // Sharp minima (in particular distance zero) are reached far faster than
  // with the diminishing schedule, and only improvements are kept.
  auto polish = [&] {
    if (certified() || n < 2) return;
    x = best;
    for (int t = 1; t <= opts.polish_iterations; ++t) {
      double lower = 0.0;
      const double f = ev.value_and_subgradient(x, grad, lower);
      ++iterations;
      consider(x, f, lower);
      if (certified()) return;
      double mean = 0.0;
      for (double g : grad) mean += g;
      mean /= static_cast<double>(n);
      double g2 = 0.0;
      for (auto& g : grad) {
        g -= mean;
        g2 += g * g;
      }
      if (g2 <= 0.0) return;
      const double step = (f - best_lower) / g2;
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] - step * grad[i];
      project_into(y, x, scratch);
    }
  };

  for (const auto& start : starts) {
    if (certified()) break;
    x = start;
    avg = start;
    long long avg_count = 1;
    long long next_flush = 2;
    for (int t = 1; t <= opts.max_iterations; ++t) {
      double lower = 0.0;
      const double f = ev.value_and_subgradient(x, grad, lower);
      ++iterations;
      consider(x, f, lower);
      if (certified()) break;

      const double step = opts.step_scale / std::sqrt(static_cast<double>(t));
      for (std::size_t i = 0; i < n; ++i) y[i] = x[i] - step * grad[i];
      project_into(y, x, scratch);

      ++avg_count;
      for (std::size_t i = 0; i < n; ++i) avg[i] += (x[i] - avg[i]) / static_cast<double>(avg_count);
      if (t == next_flush || t == opts.max_iterations) {
        // Average over the most recent half of the iterates.
        project_into(avg, y, scratch);
        const double fa = ev.value_and_subgradient(y, grad, lower);
        consider(y, fa, lower);
        avg = x;
        avg_count = 1;
        next_flush *= 2;
      }
    }
    polish();
  }

  bool converged = true;
  if (!certified()) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> dir(n), q(n);
    const std::vector<double> center = best;
    for (int c = 0; c < opts.perturbation_checks && n > 1; ++c) {
      double mean = 0.0;
      for (auto& v : dir) {
        v = gauss(rng);
        mean += v;
      }
      mean /= static_cast<double>(n);
      double norm = 0.0;
      for (auto& v : dir) {
        v -= mean;
        norm += v * v;
      }
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      for (std::size_t i = 0; i < n; ++i) y[i] = center[i] + opts.perturbation_norm * dir[i] / norm;
      project_into(y, q, scratch);
      double lower = 0.0;
      const double fq = ev.value_and_subgradient(q, grad, lower);
      best_lower = std::max(best_lower, lower);
      if (fq < best_value - opts.improvement_tolerance) converged = false;
    }
  }

  Weights weights = project_simplex(best);
  const double distance = ev.value(weights.values());
  return ApproximationResult{std::move(weights), distance, iterations, converged,
                             std::max(0.0, distance - best_lower), best_lower};
}

double simplex_grid_size(std::size_t size, int resolution) {
  // C(resolution + size - 1, size - 1)
  double count = 1.0;
  for (std::size_t j = 1; j < size; ++j) {
    count *= static_cast<double>(resolution + static_cast<int>(j)) / static_cast<double>(j);
  }
  return std::round(count);
}

namespace {

// Exhaustive enumeration for qubit sets. For 2x2 Hermitian A the trace norm is
// max(|Tr A|, sqrt((A00 - A11)^2 + 4|A01|^2)); the search compares squares.
struct QubitGridSearch {
  struct Coords {
    double d0, d1, re, im;
  };
  Coords target;
  std::vector<Coords> nus;
  int resolution;
  std::vector<int> counts, best_counts;
  double best_sq = std::numeric_limits<double>::infinity();
  long long evaluated = 0;

  static Coords coords(const ComplexMatrix& m) {
    return {m(0, 0).real(), m(1, 1).real(), m(0, 1).real(), m(0, 1).imag()};
  }

  void run() {
    const std::size_t n = nus.size();
    counts.assign(n, 0);
    best_counts.assign(n, 0);
    recurse(0, resolution, Coords{0, 0, 0, 0});
  }

  void recurse(std::size_t level, int remaining, Coords acc) {
    const std::size_t n = nus.size();
    if (level + 2 == n) {
      innermost(remaining, acc);
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[level] = c;
      const auto& nu = nus[level];
      recurse(level + 1, remaining - c,
              Coords{acc.d0 + c * nu.d0, acc.d1 + c * nu.d1, acc.re + c * nu.re,
                     acc.im + c * nu.im});
    }
    counts[level] = 0;
  }

  void innermost(int remaining, Coords acc) {
    const std::size_t n = nus.size();
    const auto& a = nus[n - 2];
    const auto& b = nus[n - 1];
    const double h = 1.0 / resolution;
    // A(c) = target - h * (acc + c*a + (remaining - c)*b)
    const Coords base{target.d0 - h * (acc.d0 + remaining * b.d0),
                      target.d1 - h * (acc.d1 + remaining * b.d1),
                      target.re - h * (acc.re + remaining * b.re),
                      target.im - h * (acc.im + remaining * b.im)};
    const Coords slope{h * (a.d0 - b.d0), h * (a.d1 - b.d1), h * (a.re - b.re), h * (a.im - b.im)};
    for (int c = 0; c <= remaining; ++c) {
      const double d0 = base.d0 - c * slope.d0;
      const double d1 = base.d1 - c * slope.d1;
      const double re = base.re - c * slope.re;
      const double im = base.im - c * slope.im;
      const double tr = d0 + d1;
      const double diff = d0 - d1;
      const double sq = std::max(tr * tr, diff * diff + 4.0 * (re * re + im * im));
      if (sq < best_sq) {
        best_sq = sq;
        counts[n - 2] = c;
        counts[n - 1] = remaining - c;
        best_counts = counts;
      }
    }
    evaluated += remaining + 1;
    counts[n - 2] = 0;
    counts[n - 1] = 0;
  }

};

// Generic exhaustive enumeration through the Hermitian eigensolver.
struct GenericGridSearch {
  Evaluator* ev;
  int resolution;
  std::vector<double> p, best_p;
  double best = std::numeric_limits<double>::infinity();
  long long evaluated = 0;

  void run(std::size_t n) {
    p.assign(n, 0.0);
    recurse(0, resolution);
  }

  void recurse(std::size_t level, int remaining) {
    if (level + 1 == p.size()) {
      p[level] = static_cast<double>(remaining) / resolution;
      const double v = ev->value(p);
      ++evaluated;
      if (v < best) {
        best = v;
        best_p = p;
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      p[level] = static_cast<double>(c) / resolution;
      recurse(level + 1, remaining - c);
    }
  }
};

// Local grid with spacing h around `center`: offsets in {-2..2} on the first
// n-1 coordinates, the last one absorbing the sum. Repeats while it improves.
long long refine_locally(Evaluator& ev, std::vector<double>& center, double& center_value,
                         double h) {
  const std::size_t n = center.size();
  if (n < 2) return 0;
  constexpr int kRadius = 2;
  long long evaluated = 0;
  std::vector<int> z(n - 1, -kRadius);
  std::vector<double> q(n);
  for (int pass = 0; pass < 50; ++pass) {
    bool improved = false;
    std::vector<double> best = center;
    double best_value = center_value;
    std::fill(z.begin(), z.end(), -kRadius);
    while (true) {
      int sum = 0;
      bool feasible = true;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        sum += z[i];
        q[i] = center[i] + h * z[i];
        if (q[i] < -1e-15) feasible = false;
      }
      q[n - 1] = center[n - 1] - h * sum;
      if (q[n - 1] < -1e-15) feasible = false;
      if (feasible) {
        for (auto& v : q) v = std::max(v, 0.0);
        const double v = ev.value(q);
        ++evaluated;
        if (v < best_value) {
          best_value = v;
          best = q;
          improved = true;
        }
      }
      std::size_t k = 0;
      while (k < z.size() && z[k] == kRadius) z[k++] = -kRadius;
      if (k == z.size()) break;
      ++z[k];
    }
    center = best;
    center_value = best_value;
    if (!improved) break;
  }
  return evaluated;
}

}  // namespace

ApproximationResult grid_oracle(const DensityMatrix& rho, const StateSet& set, int resolution) {
  const std::size_t n = set.size();
  if (resolution < 1) throw std::invalid_argument("grid_oracle: resolution must be >= 1");
  if (n > 6 && resolution >= 50) {
    throw std::invalid_argument("grid_oracle: sets larger than 6 need resolution < 50");
  }
  if (simplex_grid_size(n, resolution) > kGridBudget) {
    throw std::invalid_argument("grid_oracle: grid exceeds the enumeration budget");
  }
  Evaluator ev(rho, set);

  std::vector<double> center(n);
  long long evaluated = 0;
  if (n == 1) {
    center[0] = 1.0;
    evaluated = 1;
  } else if (rho.dim() == 2) {
    QubitGridSearch search;
    search.target = QubitGridSearch::coords(rho.matrix());
    for (const auto& nu : set.elements()) search.nus.push_back(QubitGridSearch::coords(nu.matrix()));
    search.resolution = resolution;
    search.run();
    for (std::size_t i = 0; i < n; ++i) {
      center[i] = static_cast<double>(search.best_counts[i]) / resolution;
    }
    evaluated = search.evaluated;
  } else {
    GenericGridSearch search{&ev, resolution, {}, {}};
    search.run(n);
    center = search.best_p;
    evaluated = search.evaluated;
  }

  double center_value = ev.value(center);
  double h = 1.0 / resolution;
  for (int round = 0; round < 3; ++round) {
    h *= 0.5;
    evaluated += refine_locally(ev, center, center_value, h);
  }

  Weights weights = project_simplex(center);
  const double distance = ev.value(weights.values());
  std::vector<double> grad(n);
  double lower = 0.0;
  ev.value_and_subgradient(weights.values(), grad, lower);
  return ApproximationResult{std::move(weights), distance, evaluated, true,
                             std::max(0.0, distance - lower), lower};
}

}  // namespace csa
