#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "susy/darboux.hpp"
#include "susy/spectral.hpp"

namespace susy {

struct CheckResult {
  std::string name;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;  // error message or context; empty when nothing to add
};

struct ExampleReport {
  int example_id = 0;
  std::vector<CheckResult> checks;
  bool overall = false;

  /// Appends a check; pass iff deviation is finite and within tolerance.
  void add(std::string name, double deviation, double tolerance, std::string note = {});
  /// Appends a failed check carrying an error message.
  void fail(std::string name, std::string note);
  void finalize();
};

struct GridComparison {
  double max_deviation = 0.0;
  double location = 0.0;
  double max_modulus = 0.0;  // max |V_b|, the reference scale
};

/// max |V_a - V_b| over the grid. Evaluation errors propagate; the abscissa is in the message.
GridComparison compare_on_grid(const PotentialSpec& a, const PotentialSpec& b, std::span<const double> grid);

/// Parameters shared by the example checks.
struct VerifyGrid {
  double x_max = 25.0;
  std::size_t points = 2000;
};

struct Example1Params {
  double a1 = 1.0;
  double k0 = 1.0;
  std::optional<cplx> alpha1;  // overrides -a1^2
  VerifyGrid grid;
  double potential_tol = 1e-7;  // relative to max |V|
  double energy_tol = 1e-6;
  double k_min = 0.05, k_max = 5.0;
};

struct Example2Params {
  double k0 = 1.0;
  std::optional<TransformStep> u1;  // overrides e+(x, i), the ground state
  VerifyGrid grid;
  double jost_tol = 1e-7;  // relative, closed form A(s) at 50 points and e+(x, k) on the grid
  double potential_tol = 1e-7;
  double energy_tol = 1e-6;
  Rect contour{-5.0, 5.0, 0.05, 5.0};
  double k_min = 0.05, k_max = 5.0;
};

struct Example3Params {
  double k0 = 1.0;
  VerifyGrid grid;
  double jost_tol = 1e-7;
  double wronskian_tol = 1e-6;  // pointwise relative after one fitted constant
  double wronskian_lo = 0.5, wronskian_hi = 15.0;
  double potential_tol = 1e-7;
  double energy_tol = 1e-6;
  Rect contour{-5.0, 5.0, 0.05, 5.0};
  double k_min = 0.05, k_max = 5.0;
};

ExampleReport run_example_1(const Example1Params& p = {}, const NumericConfig& cfg = {});
ExampleReport run_example_2(const Example2Params& p = {}, const NumericConfig& cfg = {});
ExampleReport run_example_3(const Example3Params& p = {}, const NumericConfig& cfg = {});

/// w0(x) sech^7(x) e^{i k0 x}, the closed-form Wronskian profile of the -20 sech^2 construction.
cplx example3_wronskian_profile(double k0, double x);

struct RoundTripParams {
  VerifyGrid grid;
  double removal_k_min = 0.1, removal_k_max = 5.0;
  std::size_t removal_samples = 200;
  double absence_threshold = 1e-4;  // min |A| on the scanned axis after removal
  double roundtrip_tol = 1e-7;
};

/// Removes the singularity at E = k0^2, checks it is gone, undoes the step and compares
/// with the input. Reported as example_id 0.
ExampleReport verify_removal_roundtrip(const PotentialSpec& spec, double k0, const RoundTripParams& p = {},
                                       const NumericConfig& cfg = {});

nlohmann::json report_to_json(const ExampleReport& r);

}  // namespace susy
