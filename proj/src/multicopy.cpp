#include "csa/multicopy.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "csa/parallel.hpp"
#include "csa/state_io.hpp"

namespace csa {

namespace {

constexpr double kGridImprovement = 1e-6;

ComplexMatrix mixture_of(const StateSet& set, std::span<const double> w) { return mixture(set, w); }

double product_distance(const DensityMatrix& target, const StateSet& base,
                        const std::vector<std::vector<double>>& w) {
  ComplexMatrix product = mixture_of(base, w[0]);
  for (std::size_t j = 1; j < w.size(); ++j) product = tensor_product(product, mixture_of(base, w[j]));
  return trace_norm(HermitianMatrix(target.matrix() - product));
}

// All weight vectors of the simplex grid with spacing 1/resolution.
std::vector<std::vector<double>> simplex_grid(std::size_t size, int resolution) {
  std::vector<std::vector<double>> out;
  std::vector<int> counts(size, 0);
  auto recurse = [&](auto&& self, std::size_t level, int remaining) -> void {
    if (level + 1 == size) {
      counts[level] = remaining;
      std::vector<double> w(size);
      for (std::size_t i = 0; i < size; ++i) w[i] = static_cast<double>(counts[i]) / resolution;
      out.push_back(std::move(w));
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[level] = c;
      self(self, level + 1, remaining - c);
    }
  };
  recurse(recurse, 0, resolution);
  return out;
}

struct AlternatingOutcome {
  std::vector<std::vector<double>> weights;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
};

AlternatingOutcome alternate(const MultiCopyProblem& prob, const DensityMatrix& target,
                             std::vector<std::vector<double>> w, const FactorizedOptions& opts) {
  const std::size_t copies = static_cast<std::size_t>(prob.copies);
  const StateSet& base = prob.base_set;
  AlternatingOutcome out;
  out.value = product_distance(target, base, w);
  bool inner_converged = true;
  bool settled = false;
  for (int sweep = 0; sweep < opts.max_sweeps && !settled; ++sweep) {
    const double before = out.value;
    for (std::size_t j = 0; j < copies; ++j) {
      std::vector<DensityMatrix> elements;
      elements.reserve(base.size());
      for (std::size_t i = 0; i < base.size(); ++i) {
        ComplexMatrix acc = j == 0 ? base[i].matrix() : mixture_of(base, w[0]);
        for (std::size_t l = 1; l < copies; ++l) {
          acc = tensor_product(acc, l == j ? base[i].matrix() : mixture_of(base, w[l]));
        }
        elements.emplace_back(std::move(acc));
      }
      const StateSet slice(std::move(elements), base.labels());
      SolverOptions inner = opts.inner;
      inner.warm_start = w[j];
      inner.random_restarts = 0;
      const auto r = minimize(target, slice, inner);
      inner_converged = inner_converged && r.converged;
      if (r.distance <= out.value) {
        w[j].assign(r.weights.values().begin(), r.weights.values().end());
        out.value = r.distance;
      }
    }
    settled = before - out.value <= opts.sweep_tolerance;
  }
  out.weights = std::move(w);
  out.converged = settled && inner_converged;
  return out;
}

}  // namespace

StateSet tensor_set(const StateSet& set, int n) {
  if (n < 1) throw std::invalid_argument("tensor_set: n must be >= 1");
  if (std::pow(static_cast<double>(set.size()), n) > kTensorSetBudget) {
    throw std::invalid_argument("tensor_set: more than 4096 elements requested");
  }
  if (std::pow(static_cast<double>(set.dim()), n) > static_cast<double>(kMaxCopyDimension)) {
    throw std::invalid_argument("tensor_set: tensor dimension exceeds " +
                                std::to_string(kMaxCopyDimension));
  }
  std::vector<ComplexMatrix> mats;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < set.size(); ++i) {
    mats.push_back(set[i].matrix());
    labels.push_back(set.labels()[i]);
  }
  for (int c = 1; c < n; ++c) {
    std::vector<ComplexMatrix> next_mats;
    std::vector<std::string> next_labels;
    for (std::size_t m = 0; m < mats.size(); ++m) {
      for (std::size_t i = 0; i < set.size(); ++i) {
        next_mats.push_back(tensor_product(mats[m], set[i].matrix()));
        next_labels.push_back(labels[m] + set.labels()[i]);
      }
    }
    mats = std::move(next_mats);
    labels = std::move(next_labels);
  }
  std::vector<DensityMatrix> states;
  states.reserve(mats.size());
  for (auto& m : mats) states.emplace_back(std::move(m));
  return StateSet(std::move(states), std::move(labels));
}

DensityMatrix MultiCopyProblem::target() const {
  if (copies < 1) throw std::invalid_argument("multicopy: copies must be >= 1");
  if (std::pow(static_cast<double>(base_state.dim()), copies) > static_cast<double>(kMaxCopyDimension)) {
    throw std::invalid_argument("multicopy: tensor dimension exceeds " +
                                std::to_string(kMaxCopyDimension));
  }
  if (base_set.dim() != base_state.dim()) {
    throw DimensionMismatch("multicopy: state set and target dimensions differ");
  }
  return tensor_power(base_state, copies);
}

ApproximationResult correlated_minimize(const MultiCopyProblem& prob, const SolverOptions& opts) {
  const DensityMatrix target = prob.target();
  return minimize(target, tensor_set(prob.base_set, prob.copies), opts);
}

double factorized_objective(const MultiCopyProblem& prob, const std::vector<std::vector<double>>& w) {
  if (w.size() != static_cast<std::size_t>(prob.copies)) {
    throw std::invalid_argument("factorized_objective: need one weight vector per copy");
  }
  return product_distance(prob.target(), prob.base_set, w);
}

FactorizedResult factorized_minimize(const MultiCopyProblem& prob, const FactorizedOptions& opts) {
  const DensityMatrix target = prob.target();
  const std::size_t n = prob.base_set.size();
  const auto copies = static_cast<std::size_t>(prob.copies);
  if (copies * n > kFactorizedVariableBudget) {
    throw std::invalid_argument("factorized_minimize: copies * set size exceeds 24");
  }

  std::vector<std::vector<std::vector<double>>> starts;
  {
    const auto single = minimize(prob.base_state, prob.base_set, opts.inner);
    std::vector<double> w(single.weights.values().begin(), single.weights.values().end());
    starts.emplace_back(copies, w);
  }
  std::mt19937_64 rng(opts.seed);
  std::exponential_distribution<double> expo(1.0);
  for (int s = 0; s < opts.random_starts; ++s) {
    std::vector<std::vector<double>> start(copies, std::vector<double>(n));
    for (auto& w : start) {
      double sum = 0.0;
      for (auto& v : w) sum += (v = expo(rng));
      for (auto& v : w) v /= sum;
    }
    starts.push_back(std::move(start));
  }

  std::vector<AlternatingOutcome> outcomes(starts.size());
  parallel_for(starts.size(), [&](std::size_t s) { outcomes[s] = alternate(prob, target, starts[s], opts); });
  std::size_t best = 0;
  for (std::size_t s = 1; s < outcomes.size(); ++s) {
    if (outcomes[s].value < outcomes[best].value) best = s;
  }
  AlternatingOutcome incumbent = outcomes[best];

  FactorizedResult result;
  result.grid_distance = std::numeric_limits<double>::infinity();
  int resolution = opts.grid_resolution;
  while (resolution >= 2 &&
         std::pow(simplex_grid_size(n, resolution), static_cast<double>(copies)) > opts.grid_budget) {
    --resolution;
  }
  if (resolution >= 2) {
    result.grid_resolution = resolution;
    const auto grid = simplex_grid(n, resolution);
    std::vector<std::size_t> idx(copies, 0);
    std::vector<std::vector<double>> w(copies), best_w;
    while (true) {
      for (std::size_t j = 0; j < copies; ++j) w[j] = grid[idx[j]];
      const double v = product_distance(target, prob.base_set, w);
      if (v < result.grid_distance) {
        result.grid_distance = v;
        best_w = w;
      }
      std::size_t k = 0;
      while (k < copies && ++idx[k] == grid.size()) idx[k++] = 0;
      if (k == copies) break;
    }
    if (result.grid_distance < incumbent.value - kGridImprovement) {
      auto refined = alternate(prob, target, best_w, opts);
      if (refined.value < incumbent.value) incumbent = std::move(refined);
    }
  }

  for (auto& w : incumbent.weights) result.per_copy_weights.push_back(project_simplex(w));
  std::vector<std::vector<double>> final_w;
  for (const auto& w : result.per_copy_weights) final_w.emplace_back(w.values().begin(), w.values().end());
  result.distance = product_distance(target, prob.base_set, final_w);
  result.converged = incumbent.converged &&
                     (result.grid_resolution == 0 || result.distance <= result.grid_distance + kGridImprovement);
  return result;
}

double product_of_single_opt(const MultiCopyProblem& prob, const SolverOptions& opts) {
  const DensityMatrix target = prob.target();
  const auto single = minimize(prob.base_state, prob.base_set, opts);
  const DensityMatrix sigma(mixture(prob.base_set, single.weights.values()));
  return trace_norm(difference(target, tensor_power(sigma, prob.copies)));
}

ChainReport inequality_chain_report(const MultiCopyProblem& prob, const SolverOptions& opts,
                                    const FactorizedOptions& fopts) {
  ChainReport r{prob.copies,
                0.0,
                0.0,
                0.0,
                correlated_minimize(prob, opts),
                tensor_set(prob.base_set, prob.copies),
                factorized_minimize(prob, fopts),
                minimize(prob.base_state, prob.base_set, opts),
                prob.base_set.labels()};
  r.d_corr = r.correlated.distance;
  r.d_fact = r.factorized.distance;
  r.d_prod = product_of_single_opt(prob, opts);
  return r;
}

nlohmann::json to_json(const ChainReport& r) {
  using nlohmann::json;
  json per_copy = json::array();
  for (const auto& w : r.factorized.per_copy_weights) {
    per_copy.push_back(std::vector<double>(w.values().begin(), w.values().end()));
  }
  return {{"schema", kSchemaVersion},
          {"kind", "multicopy"},
          {"copies", r.copies},
          {"d_corr", r.d_corr},
          {"d_fact", r.d_fact},
          {"d_prod", r.d_prod},
          {"base_labels", r.base_labels},
          {"weights_corr", to_json(r.correlated, r.correlated_set)["weights"]},
          {"per_copy_weights", std::move(per_copy)},
          {"single_copy_weights", std::vector<double>(r.single_copy.weights.values().begin(),
                                                      r.single_copy.weights.values().end())},
          {"factorized_grid_distance", r.factorized.grid_distance},
          {"factorized_grid_resolution", r.factorized.grid_resolution},
          {"correlated_bound_gap", r.correlated.bound_gap},
          {"converged",
           {{"correlated", r.correlated.converged},
            {"factorized", r.factorized.converged},
            {"single_copy", r.single_copy.converged}}}};
}

}  // namespace csa
