#pragma once

#include <functional>
#include <span>
#include <vector>

#include "susy/config.hpp"

namespace susy {

/// (x, y, y') at one abscissa.
struct SolutionState {
  double x = 0.0;
  cplx y;
  cplx dy;
};

/// Spectral parameter s with E = s^2 recomputed on demand.
struct SpectralParameter {
  cplx s;

  cplx energy() const noexcept { return s * s; }
  bool is_real_axis() const noexcept { return s.imag() == 0.0; }
};

enum class TraceKind { JostPlus, JostMinusArg, Regular, Custom };

/// Solution sampled on a strictly increasing grid.
struct SolutionTrace {
  SpectralParameter parameter;
  cplx energy;  // equals parameter.energy() unless built directly from E
  TraceKind kind = TraceKind::Custom;
  std::vector<SolutionState> states;

  std::vector<double> grid() const;
  std::size_t size() const noexcept { return states.size(); }
};

using PotentialFn = std::function<cplx(double)>;

/// Accepted integrator step with the second derivative from the ODE.
struct DenseNode {
  double x = 0.0;
  cplx y;
  cplx dy;
  cplx ddy;
};

/// Continuous solution over [x_lo, x_hi]: quintic Hermite interpolation through the
/// integrator's accepted steps (value, slope and curvature matched at each node).
class DenseSolution {
 public:
  DenseSolution() = default;
  DenseSolution(cplx energy, std::vector<DenseNode> nodes);

  SolutionState state_at(double x) const;
  double x_lo() const noexcept { return nodes_.front().x; }
  double x_hi() const noexcept { return nodes_.back().x; }
  cplx energy() const noexcept { return energy_; }
  std::span<const DenseNode> nodes() const noexcept { return nodes_; }
  bool empty() const noexcept { return nodes_.empty(); }

 private:
  cplx energy_;
  std::vector<DenseNode> nodes_;
  std::vector<double> xs_;
};

struct IntegrationOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.0;  // 0: unlimited
  std::size_t max_steps = 2'000'000;

  static IntegrationOptions from(const NumericConfig& cfg, double max_step = 0.0) {
    return {cfg.rtol, cfg.atol, max_step, cfg.max_steps};
  }
};

/// Integrates y'' = (V(x) - E) y from `start` through `targets` (monotone, all on one side
/// of start.x). Returns the state at each target in the order given. When `nodes` is
/// non-null every accepted step is appended to it.
std::vector<SolutionState> integrate_to_targets(const PotentialFn& V, cplx energy,
                                                const SolutionState& start,
                                                std::span<const double> targets,
                                                const IntegrationOptions& opts,
                                                std::vector<DenseNode>* nodes = nullptr);

/// Dense solution from `start` to `end` (either direction), nodes sorted ascending.
DenseSolution integrate_dense(const PotentialFn& V, cplx energy, const SolutionState& start,
                              double end, const IntegrationOptions& opts);

/// Merges two dense pieces that share the seed abscissa (backward piece, forward piece).
DenseSolution merge_dense(const DenseSolution& left, const DenseSolution& right);

std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

}  // namespace susy
