#pragma once

#include <string>
#include <vector>

#include "susy/kernels.hpp"
#include "susy/schrodinger.hpp"

namespace susy {

enum class PointKind { BoundState, SpectralSingularity };

struct SpectralPoint {
  cplx s;
  cplx E;
  PointKind kind = PointKind::BoundState;
  double residual = 0.0;  // |A(s)| at the returned point
  int newton_steps = 0;
};

struct ScanSample {
  double k = 0.0;
  cplx A;
  bool ok = false;
  bool candidate = false;  // strict local minimum of |A| below the candidate threshold
  std::string error;
};

/// Samples on [-k_max, -k_min] followed by samples on [k_min, k_max].
struct RealAxisScan {
  std::vector<ScanSample> samples;
  std::vector<std::size_t> candidates;
};

/// Axis-aligned rectangle [re0, re1] x [im0, im1] in the s-plane.
struct Rect {
  double re0 = -1.0, re1 = 1.0, im0 = 0.1, im1 = 1.0;

  bool contains(cplx s) const noexcept {
    return s.real() > re0 && s.real() < re1 && s.imag() > im0 && s.imag() < im1;
  }
  double diameter() const noexcept;
  cplx center() const noexcept { return {0.5 * (re0 + re1), 0.5 * (im0 + im1)}; }
};

struct SpectrumReport {
  std::vector<SpectralPoint> bound_states;
  std::vector<SpectralPoint> singularities;
  Rect contour;
  double k_min = 0.0, k_max = 0.0;
  int winding_total = 0;
  bool consistent = true;            // winding == zeros found inside the contour
  std::vector<std::string> diagnostics;  // per-sample and per-candidate failures
};

/// n samples on each of [k_min, k_max] and [-k_max, -k_min].
RealAxisScan scan_real_axis(const JostEngine& engine, double k_min, double k_max, std::size_t n);
RealAxisScan scan_real_axis_serial(const JostEngine& engine, double k_min, double k_max, std::size_t n);

/// Real-restricted Newton iteration from k_guess.
SpectralPoint refine_real_zero(const JostEngine& engine, double k_guess);

/// Argument-principle zero count inside the rectangle.
int count_zeros(const JostEngine& engine, const Rect& rect);

/// Zeros in the rectangle via winding-guided subdivision and complex Newton polish.
std::vector<SpectralPoint> find_bound_states(const JostEngine& engine, const Rect& rect);

SpectrumReport classify_spectrum(const JostEngine& engine, double k_min, double k_max, std::size_t n,
                                 const Rect& rect);

/// Central-difference dA/ds with step cfg.newton_step_rel * max(1, |s|).
cplx jost_derivative(const JostEngine& engine, cplx s);

}  // namespace susy
