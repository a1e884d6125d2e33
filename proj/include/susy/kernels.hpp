#pragma once

#include <span>
#include <string>
#include <vector>

#include "susy/schrodinger.hpp"

namespace susy {

/// One A(s) evaluation; failures are captured per sample instead of aborting the batch.
struct JostSample {
  cplx s;
  cplx A;
  bool ok = false;
  std::string error;
};

/// OpenMP-parallel batch evaluation over s (dynamic schedule).
std::vector<JostSample> jost_batch(const JostEngine& engine, std::span<const cplx> s);
/// Serial reference; produces bit-identical results.
std::vector<JostSample> jost_batch_serial(const JostEngine& engine, std::span<const cplx> s);

/// V on a grid in parallel. Rethrows the first failing abscissa's error.
std::vector<cplx> sample_potential(const PotentialSpec& spec, std::span<const double> grid);
std::vector<cplx> sample_potential_serial(const PotentialSpec& spec, std::span<const double> grid);

/// Thread cap for the parallel kernels. 0 restores the default: SUSY_SPECTRA_THREADS
/// if set to a positive integer, otherwise the OpenMP default.
void set_max_threads(int n);
int max_threads();

}  // namespace susy
