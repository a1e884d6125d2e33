#include "susy/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <exception>
#include <string>

#include "susy/errors.hpp"

namespace susy {

namespace {

std::atomic<int> thread_override{0};

int env_threads() {
  const char* env = std::getenv("SUSY_SPECTRA_THREADS");
  if (!env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v <= 0) return 0;
  return static_cast<int>(v);
}

JostSample evaluate_one(const JostEngine& engine, cplx s) {
  JostSample out{s, {}, false, {}};
  try {
    out.A = engine.evaluate(s).A;
    out.ok = true;
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

void set_max_threads(int n) { thread_override.store(n < 0 ? 0 : n); }

int max_threads() {
  if (const int n = thread_override.load(); n > 0) return n;
  if (const int n = env_threads(); n > 0) return n;
  return omp_get_max_threads();
}

std::vector<JostSample> jost_batch(const JostEngine& engine, std::span<const cplx> s) {
  std::vector<JostSample> out(s.size());
  const auto n = static_cast<std::ptrdiff_t>(s.size());
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = evaluate_one(engine, s[i]);
  return out;
}

std::vector<JostSample> jost_batch_serial(const JostEngine& engine, std::span<const cplx> s) {
  std::vector<JostSample> out;
  out.reserve(s.size());
  for (const cplx v : s) out.push_back(evaluate_one(engine, v));
  return out;
}

std::vector<cplx> sample_potential(const PotentialSpec& spec, std::span<const double> grid) {
  std::vector<cplx> out(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = eval_potential(spec, grid[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<cplx> sample_potential_serial(const PotentialSpec& spec, std::span<const double> grid) {
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (const double x : grid) out.push_back(eval_potential(spec, x));
  return out;
}

}  // namespace susy
