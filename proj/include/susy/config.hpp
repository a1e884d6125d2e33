#pragma once

#include <complex>
#include <cstddef>
#include <optional>

namespace susy {

using cplx = std::complex<double>;

inline constexpr cplx I{0.0, 1.0};

/// Every numerical knob of the engine. Defaults are the production settings; the CLI
/// exposes a subset and echoes the full set into its JSON output.
struct NumericConfig {
  // ODE integration
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 2'000'000;

  // Jost cutoff: smallest x_max with tail integral below tail_tol, capped at cap_factor / decay_rate
  double tail_tol = 1e-13;
  double cutoff_cap_factor = 200.0;
  std::optional<double> x_max_override;

  // Origin handling for singular potentials (x_min in units of the potential's length scale)
  double origin_x_min = 1e-4;

  // Grids
  std::size_t grid_points = 2000;
  double dense_node_spacing = 0.02;
  double seed_extent_factor = 60.0;  // dense seeds cover at least seed_extent_factor / decay_rate

  // Transformations
  double nodeless_threshold = 1e-6;  // inverse of the largest tolerated scaled log-derivative excess
  double simplicity_threshold = 1e-6;

  // Zero location
  double zero_residual = 1e-8;
  double candidate_threshold = 0.1;
  double exclusion_radius = 0.02;
  double newton_step_rel = 1e-5;
  int newton_max_steps = 50;
  double real_axis_tolerance = 1e-6;
  double singular_point_threshold = 1e-6;  // |A(k)| below this marks k as a spectral singularity

  // Argument principle
  std::size_t edge_samples = 32;
  int max_phase_refinements = 14;
  double boundary_min_modulus = 1e-4;
  double min_rect_diameter = 1e-2;
};

}  // namespace susy
