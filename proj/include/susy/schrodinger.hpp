#pragma once

#include <span>
#include <vector>

#include "susy/config.hpp"
#include "susy/potential.hpp"
#include "susy/solution.hpp"

namespace susy {

struct JostEvaluation {
  SpectralParameter parameter;
  cplx A;
  double x_max = 0.0;
  double tol_achieved = 0.0;  // tail estimate beyond x_max, or the rounding floor e^{gamma x_max} eps
};

/// Callable view of eval_potential.
PotentialFn potential_function(const PotentialSpec& spec);

/// Uniform grid on [origin_abscissa, x_max] with cfg.grid_points points.
std::vector<double> default_grid(const PotentialSpec& spec, double x_max, const NumericConfig& cfg = {});

/// Integrates from `from` to every grid abscissa (points on either side of from.x).
SolutionTrace integrate(const PotentialSpec& spec, cplx E, const SolutionState& from,
                        std::span<const double> grid, const NumericConfig& cfg = {});

/// Smallest lattice x with tail bound C e^{-(eps - gamma) x} / (eps - gamma) below
/// max(cfg.tail_tol, eps_mach e^{gamma x}), where C bounds |V| e^{eps x} beyond x and
/// gamma = 2 max(0, -Im s).
double jost_cutoff(const PotentialSpec& spec, cplx s, const NumericConfig& cfg = {});

/// Checks s against the Jost strip (s != 0, Im s >= -eps/4). Throws DomainError.
void check_jost_parameter(const PotentialSpec& spec, cplx s);

/// Reusable Jost machinery for one spec: caches the potential callable and the
/// cutoff for Im s >= 0. Thread-safe for concurrent evaluate() calls.
class JostEngine {
 public:
  explicit JostEngine(PotentialSpec spec, NumericConfig cfg = {});

  const PotentialSpec& spec() const noexcept { return spec_; }
  const NumericConfig& config() const noexcept { return cfg_; }
  double cutoff(cplx s) const;

  /// A(s) = e+(0, s); for origin_strength nu > 0 the coefficient of x^{-nu} at the
  /// origin, W(e+, phi) / (2 nu + 1) with phi the x^{nu+1} Frobenius branch.
  JostEvaluation evaluate(cplx s) const;
  /// e+(x, s) on the grid (kind JostPlus).
  SolutionTrace solution(cplx s, std::span<const double> grid) const;

 private:
  PotentialSpec spec_;
  NumericConfig cfg_;
  PotentialFn V_;
  double cutoff_upper_;
  double tail_upper_;
};

SolutionTrace jost_solution(const PotentialSpec& spec, cplx s, std::span<const double> grid,
                            const NumericConfig& cfg = {});
JostEvaluation jost_function(const PotentialSpec& spec, cplx s, const NumericConfig& cfg = {});

/// Analytic A(s) for the catalog: Zero, ShiftedOneSoliton, SechWell with lambda in
/// {1, 2, 4}, SinhBarrier (generalized, 1/(a - i s)) and ClosedForm2Susy.
cplx closed_form_jost(const PotentialSpec& spec, cplx s);
/// Analytic e+(x, s) and its derivative for the same families (x > 0 for SinhBarrier).
SolutionState closed_form_jost_solution(const PotentialSpec& spec, cplx s, double x);

/// x^{nu+1} (1 + c2 x^2) branch at small x, c2 fixed by the constant part of V - nu(nu+1)/x^2.
SolutionState frobenius_seed(const PotentialFn& V, double nu, cplx E, double x);

/// Solution with y(0) = 0, y'(0) = 1, or the x^{nu+1} branch for nu > 0.
SolutionTrace regular_solution(const PotentialSpec& spec, cplx E, std::span<const double> grid,
                               const NumericConfig& cfg = {});

struct PhysicalSolution {
  SolutionTrace trace;
  bool at_spectral_singularity = false;
  cplx A_plus;   // A(k)
  cplx A_minus;  // A(-k)
};

/// psi = [A(-k) e+(x,k) - A(k) e+(x,-k)] / (2 i k) (scaled by 2 nu + 1 for singular origins).
PhysicalSolution physical_solution(const PotentialSpec& spec, double k, std::span<const double> grid,
                                   const NumericConfig& cfg = {});

cplx wronskian(const SolutionState& a, const SolutionState& b);
/// W(x) at every grid point of two traces sharing a grid.
std::vector<cplx> wronskian(const SolutionTrace& a, const SolutionTrace& b);

/// max_i |y''_fd - (V - E) y| / max(sup |(V - E) y|, sup |y|), y''_fd from a central
/// difference of y' (fourth order on uniform grids).
double schrodinger_residual(const SolutionTrace& trace, const PotentialFn& V);

}  // namespace susy
