#pragma once

#include <optional>
#include <span>
#include <vector>

#include "susy/potential.hpp"
#include "susy/schrodinger.hpp"
#include "susy/solution.hpp"

namespace susy {

/// Validates a Transformed spec (recursively for its base) and attaches its evaluator.
/// Catalog and already validated specs are returned unchanged.
PotentialSpec realize(const PotentialSpec& spec, const NumericConfig& cfg = {});

/// Applies the steps to `base` in order. An empty list returns `base`.
PotentialSpec chain_transform(const PotentialSpec& base, std::vector<TransformStep> steps,
                              const NumericConfig& cfg = {});

PotentialSpec susy1_potential(const PotentialSpec& base, const TransformStep& step, const NumericConfig& cfg = {});
/// Second-order step through W(u1, u2); alpha1 == alpha2 is a DomainError.
PotentialSpec susy2_potential(const PotentialSpec& base, TransformStep step1, TransformStep step2,
                              const NumericConfig& cfg = {});

/// The chain followed by the backward steps that undo it, last block first.
std::vector<TransformStep> inverse_chain(const std::vector<TransformStep>& chain);

/// Transformation function of a non-reciprocal step, sampled on the grid at E = alpha.
SolutionTrace build_transformation_function(const PotentialSpec& base, const TransformStep& step,
                                            std::span<const double> grid, const NumericConfig& cfg = {});

/// phi = -psi' + w psi with w = u'/u; for psi.energy == u.energy returns 1/u.
SolutionTrace susy1_map(const SolutionTrace& psi, const SolutionTrace& u, const PotentialFn& V0);

enum class Susy2Form { Fi1, Fi2, Alpha1, Alpha2 };

/// Second-order map. Fi1/Fi2 need E outside {alpha1, alpha2}; Alpha1/Alpha2 return
/// u2/W and u1/W and ignore psi.
SolutionTrace susy2_map(const SolutionTrace& psi, const SolutionTrace& u1, const SolutionTrace& u2,
                        const PotentialFn& V0, Susy2Form form);

/// Maps a base-potential trace through every block of a validated Transformed spec.
SolutionTrace map_through_chain(const PotentialSpec& transformed, const SolutionTrace& psi);

struct WronskianProfile {
  std::vector<double> grid;
  std::vector<cplx> values;
  double min_modulus = 0.0;   // over grid points with x > 0
  double min_location = 0.0;
  cplx boundary_value;        // W at the first grid point
  double identity_deviation = 0.0;  // sup |W'_fd - (alpha1 - alpha2) u1 u2| / sup |(alpha1 - alpha2) u1 u2|
  double node_metric = 0.0;  // sup |W'/W - p/x| * length scale, p the origin power of W
  bool validated = false;
};

WronskianProfile wronskian_profile(const SolutionTrace& u1, const SolutionTrace& u2, cplx alpha1, cplx alpha2,
                                   const NumericConfig& cfg = {});

struct RemovalResult {
  PotentialSpec potential;
  double k0 = 0.0;
  cplx A_prime;
  bool simple = true;  // |A'(k0)| above cfg.simplicity_threshold
};

/// First-order step removing the singularity at a refined real zero k0 of A (either sign of
/// the guess is tried).
/// Without a guess the axis [0.05, 10] is scanned and exactly one zero must be present.
RemovalResult remove_spectral_singularity(const PotentialSpec& spec, std::optional<double> k_guess = {},
                                          const NumericConfig& cfg = {});

/// Wronskian det[u_j^{(m)}] of up to four seeds on a catalog potential, with
/// derivatives from u'' = (V - alpha) u and analytic V', V''.
std::vector<cplx> crum_wronskian_oracle(const PotentialSpec& spec, std::span<const SolutionTrace> seeds);

}  // namespace susy
