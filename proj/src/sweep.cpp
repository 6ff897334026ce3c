#include "csa/sweep.hpp"

#include <cstdio>
#include <numbers>
#include <optional>

#include "csa/parallel.hpp"

namespace csa {

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kA:
      return "a";
    case SweepAxis::kPhi:
      return "phi";
    case SweepAxis::kK:
      return "k";
  }
  return "?";
}

AxisRange default_range(SweepAxis axis, int points) {
  switch (axis) {
    case SweepAxis::kA:
      return {0.0, 0.5, points};
    case SweepAxis::kPhi:
      return {0.0, std::numbers::pi / 2.0, points};
    case SweepAxis::kK:
      return {0.0, 1.0, points};
  }
  return {0.0, 1.0, points};
}

std::pair<SweepAxis, SweepAxis> free_axes(SweepAxis fixed) {
  switch (fixed) {
    case SweepAxis::kA:
      return {SweepAxis::kPhi, SweepAxis::kK};
    case SweepAxis::kPhi:
      return {SweepAxis::kA, SweepAxis::kK};
    case SweepAxis::kK:
      return {SweepAxis::kA, SweepAxis::kPhi};
  }
  return {SweepAxis::kA, SweepAxis::kPhi};
}

bool predicted_zero_distance(const QubitParams& p) {
  const auto c = canonical_reduce(p);
  if (c.params.a == 0.0) return true;
  return c.params.k <= k_threshold(c.params.a, c.params.phi);
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
  for (const auto* r : {&config.outer, &config.inner}) {
    if (r->points < 2) throw std::invalid_argument("sweep: each axis needs at least 2 points");
    if (!(r->lo <= r->hi)) throw std::invalid_argument("sweep: range must satisfy lo <= hi");
  }
  const auto [outer_axis, inner_axis] = free_axes(config.fixed);

  std::vector<QubitParams> params;
  params.reserve(static_cast<std::size_t>(config.outer.points * config.inner.points));
  for (int i = 0; i < config.outer.points; ++i) {
    for (int j = 0; j < config.inner.points; ++j) {
      double values[3] = {0.0, 0.0, 0.0};  // a, phi, k
      values[static_cast<int>(config.fixed)] = config.fixed_value;
      values[static_cast<int>(outer_axis)] = grid_value(config.outer.lo, config.outer.hi, i, config.outer.points);
      values[static_cast<int>(inner_axis)] = grid_value(config.inner.lo, config.inner.hi, j, config.inner.points);
      params.push_back(QubitParams::make(values[0], values[2], values[1]));
    }
  }

  const StateSet b3 = pauli_b3_set();
  std::vector<std::optional<SweepRow>> rows(params.size());
  parallel_for(params.size(), [&](std::size_t r) {
    SolverOptions solver = config.solver;
    solver.seed = config.solver.seed + r;
    const auto oracle = minimize(qubit_from_params(params[r]), b3, solver);
    rows[r] = SweepRow{check_claim(params[r], oracle), predicted_zero_distance(params[r])};
  });

  std::vector<SweepRow> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(*r));
  return out;
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "a,phi,k,D_oracle,D_analytic,case_label,p0,p1,p2,p3,p4,p5,flags\n";
  for (const auto& row : rows) {
    const auto& c = row.check;
    out << fmt(c.params.a) << ',' << fmt(c.params.phi) << ',' << fmt(c.params.k) << ','
        << fmt(c.oracle_distance) << ',' << fmt(c.analytic.claimed_distance) << ','
        << to_string(c.analytic.case_label);
    for (double w : c.oracle_weights) out << ',' << fmt(w);
    out << ',';
    for (std::size_t f = 0; f < c.flags.size(); ++f) out << (f ? ";" : "") << c.flags[f];
    out << '\n';
  }
}

}  // namespace csa
