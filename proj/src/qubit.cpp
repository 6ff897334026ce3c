#include "csa/qubit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace csa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kAngleSlack = 1e-12;
constexpr double kConditionSlack = 1e-12;
constexpr double kWeightSnap = 1e-12;

double coherence_amplitude(double a, double k) { return k * std::sqrt(a * (1.0 - a)); }

}  // namespace

QubitParams QubitParams::make(double a, double k, double phi) {
  if (!std::isfinite(phi)) throw std::invalid_argument("QubitParams: phi must be finite");
  double wrapped = std::fmod(phi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  if (wrapped >= 2.0 * kPi) wrapped = 0.0;
  QubitParams p{a, k, wrapped};
  p.validate();
  return p;
}

void QubitParams::validate() const {
  if (!(a >= 0.0 && a <= 1.0)) throw std::invalid_argument("QubitParams: a must lie in [0, 1]");
  if (!(k >= 0.0 && k <= 1.0)) throw std::invalid_argument("QubitParams: k must lie in [0, 1]");
  if (!(phi >= 0.0 && phi < 2.0 * kPi)) {
    throw std::invalid_argument("QubitParams: phi must lie in [0, 2 pi)");
  }
}

bool QubitParams::is_canonical() const {
  return a >= 0.0 && a <= 0.5 && phi >= 0.0 && phi <= kHalfPi + kAngleSlack;
}

DensityMatrix qubit_from_params(const QubitParams& p) {
  p.validate();
  const double off = coherence_amplitude(p.a, p.k);
  const Complex upper = std::polar(off, -p.phi);
  return DensityMatrix(ComplexMatrix{{1.0 - p.a, upper}, {std::conj(upper), p.a}});
}

BlochVector bloch_expectations(const QubitParams& p) {
  const double off = coherence_amplitude(p.a, p.k);
  return {2.0 * off * std::cos(p.phi), 2.0 * off * std::sin(p.phi), 1.0 - 2.0 * p.a};
}

DensityMatrix qubit_from_bloch(const BlochVector& r) {
  const double norm = std::sqrt(r.x * r.x + r.y * r.y + r.z * r.z);
  if (norm > 1.0 + 1e-12) {
    throw std::invalid_argument("qubit_from_bloch: Bloch vector longer than 1");
  }
  return DensityMatrix(ComplexMatrix{{0.5 * (1.0 + r.z), Complex(0.5 * r.x, -0.5 * r.y)},
                                     {Complex(0.5 * r.x, 0.5 * r.y), 0.5 * (1.0 - r.z)}});
}

QubitParams qubit_params_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw DimensionMismatch("qubit_params_from_density: expected a 2x2 state");
  const double a = std::clamp(rho(1, 1).real(), 0.0, 1.0);
  const double q = a * (1.0 - a);
  const Complex lower = rho(1, 0);  // k sqrt(a(1-a)) e^{i phi}
  if (q <= 0.0 || std::abs(lower) == 0.0) return QubitParams{a, 0.0, 0.0};
  const double k = std::min(1.0, std::abs(lower) / std::sqrt(q));
  return QubitParams::make(a, k, std::arg(lower));
}

StateSet pauli_b3_set() {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  const std::vector<std::array<Complex, 2>> kets = {
      {1.0, 0.0}, {0.0, 1.0}, {h, h}, {h, -h}, {h, h * i}, {h, -h * i},
  };
  std::vector<DensityMatrix> states;
  std::vector<std::string> labels;
  for (std::size_t n = 0; n < kets.size(); ++n) {
    states.emplace_back(ComplexMatrix::projector(kets[n]));
    labels.push_back(std::to_string(n));
  }
  return StateSet(std::move(states), std::move(labels));
}

StateSet pauli_b1_set() {
  const std::array<double, 2> zero = {1.0, 0.0};
  const std::array<double, 2> one = {0.0, 1.0};
  return StateSet({DensityMatrix(ComplexMatrix::diagonal(zero)),
                   DensityMatrix(ComplexMatrix::diagonal(one))},
                  {"0", "1"});
}

B1Solution b1_solution(const QubitParams& p) {
  return {2.0 * coherence_amplitude(p.a, p.k), Weights({1.0 - p.a, p.a})};
}

std::vector<double> CanonicalForm::pull_back(std::span<const double> reduced_weights) const {
  if (reduced_weights.size() != 6) {
    throw std::invalid_argument("CanonicalForm::pull_back: expected 6 weights");
  }
  std::vector<double> out(6);
  for (std::size_t i = 0; i < 6; ++i) out[label_permutation[i]] = reduced_weights[i];
  return out;
}

CanonicalForm canonical_reduce(const QubitParams& p) {
  p.validate();
  CanonicalForm out{p, {0, 1, 2, 3, 4, 5}};
  auto swap_labels = [&](int l, int r) { std::swap(out.label_permutation[l], out.label_permutation[r]); };

  if (p.a > 0.5) {  // z -> -z
    out.params.a = 1.0 - p.a;
    swap_labels(0, 1);
  }
  const double c = std::cos(p.phi);
  const double s = std::sin(p.phi);
  if (c < 0.0) swap_labels(2, 3);  // x -> -x
  if (s < 0.0) swap_labels(4, 5);  // y -> -y
  out.params.phi = std::atan2(std::abs(s), std::abs(c));
  return out;
}

double k_threshold(double a, double phi) {
  if (phi < -kAngleSlack || phi > kHalfPi + kAngleSlack) {
    throw std::domain_error("k_threshold: phi must lie in [0, pi/2]; reduce first");
  }
  if (a < 0.0 || a > 1.0) throw std::domain_error("k_threshold: a must lie in [0, 1]");
  if (a == 0.0) return 0.0;
  const double q = a * (1.0 - a);
  if (q == 0.0) return std::numeric_limits<double>::infinity();
  return a / (std::sqrt(q) * (std::cos(phi) + std::sin(phi)));
}

bool zero_distance_condition(const QubitParams& p) {
  const auto r = bloch_expectations(p);
  return r.x + r.y + r.z <= 1.0 + kConditionSlack;
}

std::vector<double> exact_decomposition_weights(const QubitParams& p) {
  if (!p.is_canonical()) {
    throw std::domain_error("exact_decomposition_weights: parameters are not canonical");
  }
  if (!zero_distance_condition(p)) {
    throw std::domain_error("exact_decomposition_weights: k exceeds the exact-decomposition threshold");
  }
  const double off = coherence_amplitude(p.a, p.k);
  const double c = std::cos(p.phi);
  const double s = std::sin(p.phi);
  std::vector<double> w = {1.0 - p.a - off * (c + s), p.a - off * (c + s), 2.0 * off * c, 0.0,
                           2.0 * off * s, 0.0};
  // Only rounding-level negatives are possible under the precondition.
  for (auto& v : w) {
    if (v < 0.0 && v > -kWeightSnap) v = 0.0;
  }
  return w;
}

std::string_view to_string(AnalyticCase c) {
  switch (c) {
    case AnalyticCase::kExact:
      return "exact";
    case AnalyticCase::kCaseI:
      return "case_i";
    case AnalyticCase::kCaseII:
      return "case_ii";
    case AnalyticCase::kCaseIII:
      return "case_iii";
  }
  return "unknown";
}

double phi_threshold(double a, double k) {
  const double q = a * (1.0 - a);
  const double radicand = 5.0 * k * k * q - a * a;
  if (radicand < 0.0) throw std::domain_error("phi_threshold: undefined for k <= sqrt(a/(1-a))");
  const double off = k * std::sqrt(q);
  return 2.0 * std::atan((std::sqrt(radicand) - 2.0 * off) / (a + off));
}

AnalyticB3Result analytic_b3(const QubitParams& p) {
  p.validate();
  if (!p.is_canonical()) throw std::domain_error("analytic_b3: parameters are not canonical");

  AnalyticB3Result out;
  if (zero_distance_condition(p)) {
    out.case_label = AnalyticCase::kExact;
    out.claimed_distance = 0.0;
    out.claimed_weights = exact_decomposition_weights(p);
    return out;
  }

  const double a = p.a;
  const double k = p.k;
  const double phi = std::min(p.phi, kHalfPi);
  const double q = a * (1.0 - a);
  const double off = k * std::sqrt(q);
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const double k_boundary = a / std::sqrt(q);

  AnalyticCase label = AnalyticCase::kCaseI;
  if (k > k_boundary) {
    const double th = phi_threshold(a, k);
    out.phi_threshold = th;
    const bool below = phi < th;
    const bool above = phi > kHalfPi - th;
    if (below && above) {
      label = phi <= kHalfPi / 2.0 ? AnalyticCase::kCaseII : AnalyticCase::kCaseIII;
    } else if (below) {
      label = AnalyticCase::kCaseII;
    } else if (above) {
      label = AnalyticCase::kCaseIII;
    }
  }
  out.case_label = label;

  switch (label) {
    case AnalyticCase::kCaseI: {
      const double kth = k_threshold(a, phi);
      out.claimed_distance = 2.0 / std::sqrt(3.0) * std::sqrt(q * (1.0 + std::sin(2.0 * phi))) * (k - kth);
      out.claimed_weights = {1.0 - 4.0 / 3.0 * a - 2.0 / 3.0 * off * (c + s),
                             0.0,
                             2.0 / 3.0 * (a + off * (2.0 * c - s)),
                             0.0,
                             2.0 / 3.0 * (a + off * (2.0 * s - c)),
                             0.0};
      break;
    }
    case AnalyticCase::kCaseII:
    case AnalyticCase::kCaseIII: {
      const bool ii = label == AnalyticCase::kCaseII;
      const double trig = ii ? c : s;
      const std::size_t partner = ii ? 2 : 4;
      out.claimed_distance =
          std::sqrt(2.0 * a * (a - 2.0 * off * trig + k * k * (1.0 - a) * (2.0 - trig * trig)));
      out.claimed_weights.assign(6, 0.0);
      out.claimed_weights[0] = 1.0 - a - off * trig;
      out.claimed_weights[partner] = a + off * trig;
      const double literal = k * std::sqrt(q * trig);
      std::vector<double> lw(6, 0.0);
      lw[0] = 1.0 - a - literal;
      lw[partner] = a + literal;
      out.literal_radical_weights = std::move(lw);
      break;
    }
    case AnalyticCase::kExact:
      break;
  }
  return out;
}

}  // namespace csa
