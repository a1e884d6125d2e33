#include "susy/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "susy/errors.hpp"
#include "susy/spectral.hpp"

namespace susy {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// Value, derivative and the magnitude of the terms summed to produce them.
struct Fn {
  cplx y, dy;
  double scale = 0.0;
  bool set = false;
};

struct Block {
  std::size_t first = 0;
  int order = 1;
};

/// Denominator data of one block at one abscissa.
struct Stage {
  cplx den;     // u or W
  cplx logd;    // u'/u or W'/W
  double cancel = 1.0;  // |den| / magnitude of its constituent terms
};

bool same_energy(cplx a, cplx b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

std::vector<Block> blocks_of(const std::vector<TransformStep>& chain) {
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < chain.size();) {
    const int order = chain[i].order;
    if (order != 1 && order != 2) throw DomainError("transform step order must be 1 or 2");
    if (order == 2) {
      if (i + 1 >= chain.size()) throw DomainError("second-order block at the end of the chain has no partner step");
      if (same_energy(chain[i].alpha, chain[i + 1].alpha))
        throw DomainError("second-order block needs distinct factorization energies (confluent case unsupported)");
    }
    blocks.push_back({i, order});
    i += static_cast<std::size_t>(order);
  }
  return blocks;
}

void check_structure(const std::vector<TransformStep>& chain, const std::vector<Block>& blocks) {
  std::vector<std::size_t> block_of(chain.size());
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int j = 0; j < blocks[b].order; ++j) block_of[blocks[b].first + j] = b;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const auto& st = chain[i];
    if (const auto* js = std::get_if<JostSeed>(&st.seed)) {
      if (!same_energy(st.alpha, js->s * js->s)) {
        std::ostringstream os;
        os << "step " << i << ": alpha must equal s^2 for a Jost seed";
        throw DomainError(os.str());
      }
    } else if (const auto* rs = std::get_if<ReciprocalSeed>(&st.seed)) {
      if (rs->of >= chain.size() || block_of[rs->of] >= block_of[i]) {
        std::ostringstream os;
        os << "step " << i << ": reciprocal seed must reference a step of an earlier block";
        throw DomainError(os.str());
      }
      if (!same_energy(st.alpha, chain[rs->of].alpha)) {
        std::ostringstream os;
        os << "step " << i << ": reciprocal seed energy must equal that of step " << rs->of;
        throw DomainError(os.str());
      }
    }
  }
}

Fn map1(const Fn& psi, cplx E, cplx V, cplx w, cplx wp) {
  return {-psi.dy + w * psi.y, -(V - E) * psi.y + wp * psi.y + w * psi.dy,
          std::abs(psi.dy) + std::abs(w * psi.y), true};
}

/// (E - a2) psi + (a1 - a2) [W(u2, psi) / W] u1
Fn map2_fi1(const Fn& psi, cplx E, const Fn& u1, const Fn& u2, cplx a1, cplx a2, cplx W, cplx L) {
  const cplx R = (u2.y * psi.dy - u2.dy * psi.y) / W;
  const cplx Rp = (a2 - E) * u2.y * psi.y / W - R * L;
  const cplx t1 = (E - a2) * psi.y, t2 = (a1 - a2) * R * u1.y;
  return {t1 + t2, (E - a2) * psi.dy + (a1 - a2) * (Rp * u1.y + R * u1.dy), std::abs(t1) + std::abs(t2), true};
}

/// (E - a1) psi + (a2 - a1) [W(u1, psi) / W(u2, u1)] u2
Fn map2_fi2(const Fn& psi, cplx E, const Fn& u1, const Fn& u2, cplx a1, cplx a2, cplx W, cplx L) {
  const cplx W21 = -W;
  const cplx R = (u1.y * psi.dy - u1.dy * psi.y) / W21;
  const cplx Rp = (a1 - E) * u1.y * psi.y / W21 - R * L;
  const cplx t1 = (E - a1) * psi.y, t2 = (a2 - a1) * R * u2.y;
  return {t1 + t2, (E - a1) * psi.dy + (a2 - a1) * (Rp * u2.y + R * u2.dy), std::abs(t1) + std::abs(t2), true};
}

Fn over_wronskian(const Fn& u, cplx W, cplx L) {
  return {u.y / W, (u.dy - u.y * L) / W, std::abs(u.y / W), true};
}

struct Block2 {
  cplx W, Wp, Wpp, L, Lp;
  double scale;
};

Block2 block2(const Fn& u1, const Fn& u2, cplx a1, cplx a2) {
  Block2 b;
  b.W = u1.y * u2.dy - u1.dy * u2.y;
  b.Wp = (a1 - a2) * u1.y * u2.y;
  b.Wpp = (a1 - a2) * (u1.dy * u2.y + u1.y * u2.dy);
  b.L = b.Wp / b.W;
  b.Lp = b.Wpp / b.W - b.L * b.L;
  b.scale = std::abs(u1.y * u2.dy) + std::abs(u1.dy * u2.y);
  return b;
}

/// Runs every block at one abscissa. `f` holds the seeds (reciprocal entries unset);
/// extras are mapped alongside at their own energies. Returns the final potential.
cplx run_chain(const std::vector<TransformStep>& chain, const std::vector<Block>& blocks, cplx V,
               std::vector<Fn>& f, std::span<Fn> extras, std::span<const cplx> extraE,
               std::vector<Stage>* stages) {
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::size_t i = blocks[b].first;
    if (blocks[b].order == 1) {
      const Fn u = f[i];
      const cplx a = chain[i].alpha;
      const cplx w = u.dy / u.y;
      const cplx wp = (V - a) - w * w;
      if (stages) stages->push_back({u.y, w, u.scale > 0.0 ? std::abs(u.y) / u.scale : 1.0});
      for (std::size_t m = i + 1; m < chain.size(); ++m) {
        const auto* rs = std::get_if<ReciprocalSeed>(&chain[m].seed);
        if (rs && rs->of == i)
          f[m] = {1.0 / u.y, -u.dy / (u.y * u.y), std::abs(1.0 / u.y), true};
        else if (f[m].set)
          f[m] = map1(f[m], chain[m].alpha, V, w, wp);
      }
      for (std::size_t e = 0; e < extras.size(); ++e) extras[e] = map1(extras[e], extraE[e], V, w, wp);
      V -= 2.0 * wp;
    } else {
      const Fn u1 = f[i], u2 = f[i + 1];
      const cplx a1 = chain[i].alpha, a2 = chain[i + 1].alpha;
      const Block2 k = block2(u1, u2, a1, a2);
      if (stages) stages->push_back({k.W, k.L, k.scale > 0.0 ? std::abs(k.W) / k.scale : 1.0});
      for (std::size_t m = i + 2; m < chain.size(); ++m) {
        const auto* rs = std::get_if<ReciprocalSeed>(&chain[m].seed);
        if (rs && rs->of == i) {
          f[m] = over_wronskian(u2, k.W, k.L);
        } else if (rs && rs->of == i + 1) {
          f[m] = over_wronskian(u1, k.W, k.L);
        } else if (f[m].set) {
          if (same_energy(chain[m].alpha, a1) || same_energy(chain[m].alpha, a2)) {
            std::ostringstream os;
            os << "step " << m << " shares a factorization energy with the second-order block at step " << i
               << "; use a reciprocal seed";
            throw DomainError(os.str());
          }
          f[m] = map2_fi1(f[m], chain[m].alpha, u1, u2, a1, a2, k.W, k.L);
        }
      }
      for (std::size_t e = 0; e < extras.size(); ++e) {
        if (same_energy(extraE[e], a1) || same_energy(extraE[e], a2))
          throw DomainError("mapped energy equals a block factorization energy; use the reciprocal form");
        extras[e] = map2_fi1(extras[e], extraE[e], u1, u2, a1, a2, k.W, k.L);
      }
      V -= 2.0 * k.Lp;
    }
  }
  return V;
}

DenseSolution scaled(const DenseSolution& d, cplx factor) {
  std::vector<DenseNode> nodes(d.nodes().begin(), d.nodes().end());
  for (auto& n : nodes) {
    n.y *= factor;
    n.dy *= factor;
    n.ddy *= factor;
  }
  return DenseSolution(d.energy(), std::move(nodes));
}

/// Dense solution with nodes ten times denser on [0, near]: seeds vanishing at the
/// origin feed 1/x^2 poles that amplify interpolation error there.
DenseSolution dense_graded(const PotentialFn& V, cplx a, const SolutionState& start, double end,
                           const IntegrationOptions& opts, double near) {
  IntegrationOptions fine = opts;
  fine.max_step = opts.max_step / 10.0;
  const double lo = std::min(start.x, end), hi = std::max(start.x, end);
  if (!(near > lo && near < hi)) return integrate_dense(V, a, start, end, near >= hi ? fine : opts);
  if (start.x < end) {
    const DenseSolution inner = integrate_dense(V, a, start, near, fine);
    return merge_dense(inner, integrate_dense(V, a, inner.state_at(near), end, opts));
  }
  const DenseSolution outer = integrate_dense(V, a, start, near, opts);
  return merge_dense(integrate_dense(V, a, outer.state_at(near), end, fine), outer);
}

DenseSolution build_dense_seed(const PotentialSpec& base, const PotentialFn& Vb, const TransformStep& st,
                               double x_lo, double extent, const NumericConfig& cfg) {
  const cplx a = st.alpha;
  // seeds are integrated once per chain, two digits tighter than the solver default
  auto opts = IntegrationOptions::from(cfg, cfg.dense_node_spacing / std::max(1.0, std::sqrt(std::abs(a))));
  opts.rtol *= 1e-2;
  opts.atol *= 1e-2;
  const double near = base.length_scale();
  return std::visit(
      overloaded{
          [&](const JostSeed& js) {
            check_jost_parameter(base, js.s);
            const DenseSolution d = dense_graded(Vb, a, {extent, 1.0, I * js.s}, x_lo, opts, near);
            return scaled(d, std::exp(I * js.s * extent));
          },
          [&](const RegularSeed&) {
            const double nu = base.nu();
            const SolutionState start = nu == 0.0 ? SolutionState{0.0, 0.0, 1.0} : frobenius_seed(Vb, nu, a, x_lo);
            return dense_graded(Vb, a, start, extent, opts, near);
          },
          [&](const CustomSeed& cs) {
            if (cs.x0 < x_lo || cs.x0 > extent) {
              std::ostringstream os;
              os << "custom seed abscissa " << cs.x0 << " outside [" << x_lo << ", " << extent << "]";
              throw DomainError(os.str());
            }
            const SolutionState start{cs.x0, cs.y0, cs.dy0};
            if (cs.x0 == x_lo) return dense_graded(Vb, a, start, extent, opts, near);
            if (cs.x0 == extent) return dense_graded(Vb, a, start, x_lo, opts, near);
            return merge_dense(dense_graded(Vb, a, start, x_lo, opts, near),
                               dense_graded(Vb, a, start, extent, opts, near));
          },
          [](const ReciprocalSeed&) -> DenseSolution {
            throw PreconditionError("reciprocal seeds are defined only inside a chain");
          },
      },
      st.seed);
}

double round_if_close(double p) {
  const double r = std::round(p);
  return std::abs(p - r) < 0.01 ? r : p;
}

class ChainEvaluatorImpl final : public ChainEvaluator {
 public:
  ChainEvaluatorImpl(std::shared_ptr<const PotentialSpec> base, std::vector<TransformStep> chain,
                     const NumericConfig& cfg, double rate)
      : base_(std::move(base)), chain_(std::move(chain)), blocks_(blocks_of(chain_)), cfg_(cfg) {
    check_structure(chain_, blocks_);
    Vb_ = potential_function(*base_);
    x_lo_ = base_->origin_abscissa(cfg_);
    const double base_cut = JostEngine(*base_, cfg_).cutoff(cplx{1.0, 0.0});
    extent_ = std::max(base_cut + 2.0 / rate, cfg_.seed_extent_factor / rate);
    for (const auto& st : chain_) {
      if (std::holds_alternative<ReciprocalSeed>(st.seed))
        seeds_.emplace_back();
      else
        seeds_.push_back(build_dense_seed(*base_, Vb_, st, x_lo_, extent_, cfg_));
    }
  }

  cplx potential(double x) const override {
    if (x > extent_) return Vb_(x);
    if (x < guard_) {
      // degree-5 extrapolation across the cancelling intermediate origin poles
      constexpr int n = 6;
      const double t = x / guard_;
      cplx acc = 0.0;
      for (int i = 1; i <= n; ++i) {
        double l = 1.0;
        for (int j = 1; j <= n; ++j)
          if (j != i) l *= (t - j) / double(i - j);
        acc += l * evaluate(i * guard_);
      }
      return acc;
    }
    return evaluate(x);
  }

  cplx evaluate(double x, std::span<Fn> extras = {}, std::span<const cplx> extraE = {},
                std::vector<Stage>* stages = nullptr) const {
    if (x > extent_) {
      std::ostringstream os;
      os << "transformation functions are only tabulated up to x = " << extent_;
      throw DomainError(os.str());
    }
    std::vector<Fn> f(chain_.size());
    for (std::size_t i = 0; i < chain_.size(); ++i)
      if (!seeds_[i].empty()) {
        const SolutionState s = seeds_[i].state_at(x);
        f[i] = {s.y, s.dy, std::abs(s.y), true};
      }
    return run_chain(chain_, blocks_, Vb_(x), f, extras, extraE, stages);
  }

  std::vector<Stage> stages_at(double x) const {
    std::vector<Stage> st;
    evaluate(x, {}, {}, &st);
    return st;
  }

  const std::vector<TransformStep>& chain() const noexcept { return chain_; }
  const std::vector<Block>& blocks() const noexcept { return blocks_; }
  double x_lo() const noexcept { return x_lo_; }
  double extent() const noexcept { return extent_; }
  void set_guard(double g) noexcept { guard_ = g; }

 private:
  std::shared_ptr<const PotentialSpec> base_;
  std::vector<TransformStep> chain_;
  std::vector<Block> blocks_;
  NumericConfig cfg_;
  PotentialFn Vb_;
  double x_lo_ = 0.0;
  double extent_ = 0.0;
  double guard_ = 0.0;
  std::vector<DenseSolution> seeds_;
};

/// Decay rate of the transformed potential: growing non-Jost seeds with
/// Re sqrt(-alpha) = kappa contribute e^{-2 kappa x} corrections.
double transformed_rate(const PotentialSpec& base, const std::vector<TransformStep>& chain) {
  double rate = base.decay_rate();
  for (const auto& st : chain) {
    if (std::holds_alternative<JostSeed>(st.seed) || std::holds_alternative<ReciprocalSeed>(st.seed)) continue;
    const double kappa = std::sqrt(-st.alpha).real();
    if (kappa > 0.0) rate = std::min(rate, 2.0 * kappa);
  }
  return rate;
}

struct NodeHit {
  double x;
  double metric;
};

class NodeScanner {
 public:
  NodeScanner(const ChainEvaluatorImpl& ev, std::vector<double> powers, std::vector<double> lengths)
      : ev_(ev), p_(std::move(powers)), ell_(std::move(lengths)) {}

  /// |u'/u - p/x| times the block's length scale; infinite at an exact zero.
  double metric(std::size_t b, double x, const Stage& s) const {
    if (s.den == cplx{} || !std::isfinite(std::abs(s.logd))) return x == 0.0 && p_[b] > 0.5 ? 0.0 : INFINITY;
    cplx g = s.logd;
    if (p_[b] != 0.0) {
      if (x == 0.0) return 0.0;
      g -= p_[b] / x;
    }
    return std::abs(g) * ell_[b];
  }

  double metric_at(std::size_t b, double x) const {
    const auto st = ev_.stages_at(x);
    return metric(b, x, st[b]);
  }

  /// Golden-section maximization of the metric in [lo, hi].
  NodeHit refine(std::size_t b, double lo, double hi) const {
    constexpr double g = 0.6180339887498949;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = metric_at(b, c), fd = metric_at(b, d);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      if (fc > fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = metric_at(b, c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = metric_at(b, d);
      }
      if (!std::isfinite(fc)) return {c, fc};
      if (!std::isfinite(fd)) return {d, fd};
    }
    return fc > fd ? NodeHit{c, fc} : NodeHit{d, fd};
  }

 private:
  const ChainEvaluatorImpl& ev_;
  std::vector<double> p_;
  std::vector<double> ell_;
};

[[noreturn]] void degenerate(std::size_t stage, double x, const std::string& what) {
  std::ostringstream os;
  os << "transformation at stage " << stage << " is degenerate: " << what;
  throw DegenerateTransformError(os.str(), x, stage);
}

PotentialSpec realize_transformed(const Transformed& t, const NumericConfig& cfg) {
  auto base = std::make_shared<const PotentialSpec>(realize(*t.base, cfg));
  if (t.chain.empty()) return *base;
  const double rate = transformed_rate(*base, t.chain);
  auto ev = std::make_shared<ChainEvaluatorImpl>(base, t.chain, cfg, rate);
  const auto& blocks = ev->blocks();
  const double scale = base->length_scale();

  // origin behaviour: each denominator ~ x^p adds 2p / x^2 to the potential
  const double x_p = base->nu() > 0.0 ? ev->x_lo() : 1e-5 * scale;
  {
    // a mapped seed that cancels everywhere would otherwise surface as a bogus origin power
    const auto probe = uniform_grid(x_p, ev->extent(), 64);
    std::vector<std::vector<double>> cancel(blocks.size());
    for (const double x : probe) {
      const auto st = ev->stages_at(x);
      for (std::size_t b = 0; b < blocks.size(); ++b) cancel[b].push_back(st[b].cancel);
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      auto& c = cancel[b];
      std::nth_element(c.begin(), c.begin() + c.size() / 2, c.end());
      if (c[c.size() / 2] < 1e-10) degenerate(blocks[b].first, x_p, "its transformation function vanishes identically");
    }
  }
  const auto near = ev->stages_at(x_p);
  std::vector<double> powers(blocks.size());
  bool singular_stage = false;
  double c = base->nu() * (base->nu() + 1.0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    powers[b] = round_if_close(x_p * near[b].logd.real());
    if (std::abs(powers[b]) > 0.5) singular_stage = true;
    c += 2.0 * powers[b];
  }
  std::optional<double> nu;
  if (c > 1e-6) {
    nu = (-1.0 + std::sqrt(1.0 + 4.0 * c)) / 2.0;
  } else if (c < -1e-6) {
    throw UnsupportedOperation("transformed potential has an attractive 1/x^2 singularity at the origin");
  }
  if (!nu && singular_stage) ev->set_guard(2e-3 * scale);

  // node scan over the tabulated range
  std::vector<double> lengths(blocks.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    double ell = scale;
    for (int j = 0; j < blocks[b].order; ++j) {
      const double m = std::abs(t.chain[blocks[b].first + j].alpha);
      if (m > 0.0) ell = std::min(ell, 1.0 / std::sqrt(m));
    }
    lengths[b] = ell;
  }
  const double start = (singular_stage || base->nu() > 0.0) ? x_p : 0.0;
  const auto grid = uniform_grid(start, ev->extent(), cfg.grid_points);
  std::vector<std::vector<double>> metric(blocks.size(), std::vector<double>(grid.size()));
  std::vector<std::vector<double>> cancel(blocks.size(), std::vector<double>(grid.size()));
  NodeScanner scanner(*ev, powers, lengths);
  const double limit = 1.0 / cfg.nodeless_threshold;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto st = ev->stages_at(grid[i]);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      metric[b][i] = scanner.metric(b, grid[i], st[b]);
      cancel[b][i] = st[b].cancel;
    }
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::size_t stage = blocks[b].first;
    auto c_sorted = cancel[b];
    std::nth_element(c_sorted.begin(), c_sorted.begin() + c_sorted.size() / 2, c_sorted.end());
    if (c_sorted[c_sorted.size() / 2] < 1e-10)
      degenerate(stage, grid.front(), "its transformation function vanishes identically");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double m = metric[b][i];
      if (!(m <= limit)) degenerate(stage, grid[i], "node of the transformation function");
      const bool peak = (i == 0 || m >= metric[b][i - 1]) && (i + 1 == grid.size() || m >= metric[b][i + 1]);
      if (!peak || m < 10.0) continue;
      const double lo = grid[i == 0 ? 0 : i - 1];
      const double hi = grid[std::min(i + 1, grid.size() - 1)];
      const NodeHit hit = scanner.refine(b, lo, hi);
      if (!(hit.metric <= limit)) {
        std::ostringstream os;
        os << "node of the transformation function (log-derivative scale " << hit.metric << ")";
        degenerate(stage, hit.x, os.str());
      }
    }
  }
  return PotentialSpec::transformed_validated(base, t.chain, ev, nu).with_decay_rate(rate);
}

const ChainEvaluatorImpl& evaluator_of(const PotentialSpec& spec) {
  const auto* t = std::get_if<Transformed>(&spec.kind());
  if (!t || !t->evaluator) throw PreconditionError("expected a validated transformed potential");
  const auto* impl = dynamic_cast<const ChainEvaluatorImpl*>(t->evaluator.get());
  if (!impl) throw PreconditionError("transformed potential has a foreign evaluator");
  return *impl;
}

void require_shared_grid(const SolutionTrace& a, const SolutionTrace& b) {
  if (a.size() != b.size()) throw DomainError("traces must share a grid");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.states[i].x != b.states[i].x) throw DomainError("traces must share a grid");
}

Fn fn_of(const SolutionState& s) { return {s.y, s.dy, std::abs(s.y), true}; }

cplx determinant(std::vector<std::vector<cplx>> m) {
  const std::size_t n = m.size();
  cplx det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (m[piv][c] == cplx{}) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const cplx f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

}  // namespace

PotentialSpec realize(const PotentialSpec& spec, const NumericConfig& cfg) {
  const auto* t = std::get_if<Transformed>(&spec.kind());
  if (!t || t->evaluator) return spec;
  return realize_transformed(*t, cfg);
}

PotentialSpec chain_transform(const PotentialSpec& base, std::vector<TransformStep> steps, const NumericConfig& cfg) {
  if (steps.empty()) return base;
  return realize(PotentialSpec::transformed_unvalidated(base, std::move(steps)), cfg);
}

PotentialSpec susy1_potential(const PotentialSpec& base, const TransformStep& step, const NumericConfig& cfg) {
  TransformStep st = step;
  st.order = 1;
  return chain_transform(base, {st}, cfg);
}

PotentialSpec susy2_potential(const PotentialSpec& base, TransformStep step1, TransformStep step2,
                              const NumericConfig& cfg) {
  if (same_energy(step1.alpha, step2.alpha)) throw DomainError("second-order transformation needs alpha1 != alpha2");
  step1.order = 2;
  step2.order = 1;
  return chain_transform(base, {step1, step2}, cfg);
}

std::vector<TransformStep> inverse_chain(const std::vector<TransformStep>& chain) {
  const auto blocks = blocks_of(chain);
  std::vector<TransformStep> out = chain;
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    const std::size_t i = it->first;
    if (it->order == 1) {
      out.push_back(TransformStep::reciprocal(i, chain[i].alpha));
    } else {
      out.push_back(TransformStep::reciprocal(i, chain[i].alpha, 2));
      out.push_back(TransformStep::reciprocal(i + 1, chain[i + 1].alpha));
    }
  }
  return out;
}

SolutionTrace build_transformation_function(const PotentialSpec& base, const TransformStep& step,
                                            std::span<const double> grid, const NumericConfig& cfg) {
  const PotentialSpec spec = realize(base, cfg);
  return std::visit(
      overloaded{
          [&](const JostSeed& js) {
            SolutionTrace t = jost_solution(spec, js.s, grid, cfg);
            t.energy = step.alpha;
            return t;
          },
          [&](const RegularSeed&) { return regular_solution(spec, step.alpha, grid, cfg); },
          [&](const CustomSeed& cs) { return integrate(spec, step.alpha, {cs.x0, cs.y0, cs.dy0}, grid, cfg); },
          [](const ReciprocalSeed&) -> SolutionTrace {
            throw PreconditionError("reciprocal seeds are defined only inside a chain");
          },
      },
      step.seed);
}

SolutionTrace susy1_map(const SolutionTrace& psi, const SolutionTrace& u, const PotentialFn& V0) {
  require_shared_grid(psi, u);
  SolutionTrace out{psi.parameter, psi.energy, TraceKind::Custom, {}};
  out.states.reserve(psi.size());
  const bool backward = same_energy(psi.energy, u.energy);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const auto& us = u.states[i];
    const double x = us.x;
    if (us.y == cplx{}) degenerate(0, x, "transformation function vanishes on the grid");
    if (backward) {
      out.states.push_back({x, 1.0 / us.y, -us.dy / (us.y * us.y)});
      continue;
    }
    const cplx w = us.dy / us.y;
    const cplx V = V0(x);
    const Fn phi = map1(fn_of(psi.states[i]), psi.energy, V, w, (V - u.energy) - w * w);
    out.states.push_back({x, phi.y, phi.dy});
  }
  return out;
}

SolutionTrace susy2_map(const SolutionTrace& psi, const SolutionTrace& u1, const SolutionTrace& u2,
                        const PotentialFn&, Susy2Form form) {
  require_shared_grid(u1, u2);
  const cplx a1 = u1.energy, a2 = u2.energy;
  if (same_energy(a1, a2)) throw DomainError("second-order map needs alpha1 != alpha2");
  const bool generic = form == Susy2Form::Fi1 || form == Susy2Form::Fi2;
  if (generic) {
    require_shared_grid(psi, u1);
    if (same_energy(psi.energy, a1) || same_energy(psi.energy, a2))
      throw DomainError("E equals a factorization energy; use the alpha1/alpha2 form");
  }
  SolutionTrace out;
  out.kind = TraceKind::Custom;
  out.energy = form == Susy2Form::Alpha1 ? a1 : form == Susy2Form::Alpha2 ? a2 : psi.energy;
  out.parameter = {std::sqrt(out.energy)};
  out.states.reserve(u1.size());
  for (std::size_t i = 0; i < u1.size(); ++i) {
    const Fn f1 = fn_of(u1.states[i]), f2 = fn_of(u2.states[i]);
    const double x = u1.states[i].x;
    const Block2 k = block2(f1, f2, a1, a2);
    if (k.W == cplx{}) degenerate(0, x, "Wronskian vanishes on the grid");
    Fn phi;
    switch (form) {
      case Susy2Form::Fi1:
        phi = map2_fi1(fn_of(psi.states[i]), psi.energy, f1, f2, a1, a2, k.W, k.L);
        break;
      case Susy2Form::Fi2:
        phi = map2_fi2(fn_of(psi.states[i]), psi.energy, f1, f2, a1, a2, k.W, k.L);
        break;
      case Susy2Form::Alpha1:
        phi = over_wronskian(f2, k.W, k.L);
        break;
      case Susy2Form::Alpha2:
        phi = over_wronskian(f1, k.W, k.L);
        break;
    }
    out.states.push_back({x, phi.y, phi.dy});
  }
  return out;
}

SolutionTrace map_through_chain(const PotentialSpec& transformed, const SolutionTrace& psi) {
  const ChainEvaluatorImpl& ev = evaluator_of(transformed);
  SolutionTrace out{psi.parameter, psi.energy, TraceKind::Custom, {}};
  out.states.reserve(psi.size());
  const cplx E[1] = {psi.energy};
  for (const auto& s : psi.states) {
    Fn extra[1] = {fn_of(s)};
    ev.evaluate(s.x, extra, E);
    out.states.push_back({s.x, extra[0].y, extra[0].dy});
  }
  return out;
}

WronskianProfile wronskian_profile(const SolutionTrace& u1, const SolutionTrace& u2, cplx alpha1, cplx alpha2,
                                   const NumericConfig& cfg) {
  require_shared_grid(u1, u2);
  const std::size_t n = u1.size();
  WronskianProfile p;
  p.grid = u1.grid();
  p.values = wronskian(u1, u2);
  p.boundary_value = p.values.front();
  p.min_modulus = INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    if (p.grid[i] <= 0.0) continue;
    const double m = std::abs(p.values[i]);
    if (m < p.min_modulus) {
      p.min_modulus = m;
      p.min_location = p.grid[i];
    }
  }

  double dev = 0.0, ref = 0.0;
  if (n >= 5) {
    const double h = p.grid[1] - p.grid[0];
    for (std::size_t i = 0; i < n; ++i) {
      const cplx exact = (alpha1 - alpha2) * u1.states[i].y * u2.states[i].y;
      ref = std::max(ref, std::abs(exact));
      if (i < 2 || i + 2 >= n) continue;
      const cplx fd = (-p.values[i + 2] + 8.0 * p.values[i + 1] - 8.0 * p.values[i - 1] + p.values[i - 2]) / (12.0 * h);
      dev = std::max(dev, std::abs(fd - exact));
    }
  }
  p.identity_deviation = ref > 0.0 ? dev / ref : dev;

  // |W'/W| with the origin power removed, in units of the shortest factorization length
  const double ell = std::min(1.0, 1.0 / std::sqrt(std::max({std::abs(alpha1), std::abs(alpha2), 1e-300})));
  double power = 0.0;
  bool first = true;
  p.node_metric = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = p.grid[i];
    if (x <= 0.0) continue;
    const cplx logd = (alpha1 - alpha2) * u1.states[i].y * u2.states[i].y / p.values[i];
    if (first) {
      power = round_if_close(x * logd.real());
      if (power != std::round(power)) power = 0.0;
      first = false;
    }
    const double m = std::abs(logd - power / x) * ell;
    p.node_metric = std::isfinite(m) ? std::max(p.node_metric, m) : INFINITY;
  }
  p.validated = std::isfinite(p.min_modulus) && p.min_modulus > 0.0 &&
                p.node_metric <= 1.0 / cfg.nodeless_threshold && p.identity_deviation < 1e-6;
  return p;
}

RemovalResult remove_spectral_singularity(const PotentialSpec& spec, std::optional<double> k_guess,
                                          const NumericConfig& cfg) {
  const PotentialSpec base = realize(spec, cfg);
  const JostEngine engine(base, cfg);
  SpectralPoint zero;
  if (k_guess) {
    // E = k0^2 fixes k0 only up to sign
    double k = *k_guess;
    double a = std::abs(engine.evaluate(k).A);
    if (const double am = std::abs(engine.evaluate(-k).A); am < a) {
      a = am;
      k = -k;
    }
    if (a >= cfg.candidate_threshold) {
      std::ostringstream os;
      os << "no spectral singularity near k = +-" << std::abs(*k_guess) << " (|A| = " << a << ")";
      throw PreconditionError(os.str());
    }
    zero = refine_real_zero(engine, k);
  } else {
    const RealAxisScan scan = scan_real_axis(engine, 0.05, 10.0, 400);
    std::vector<SpectralPoint> zeros;
    for (const std::size_t idx : scan.candidates) {
      try {
        const SpectralPoint p = refine_real_zero(engine, scan.samples[idx].k);
        if (std::none_of(zeros.begin(), zeros.end(), [&](const auto& q) { return std::abs(q.s - p.s) < 1e-6; }))
          zeros.push_back(p);
      } catch (const NonConvergenceError&) {
      }
    }
    if (zeros.empty()) throw PreconditionError("potential has no spectral singularity on 0.05 <= |k| <= 10");
    if (zeros.size() > 1) throw PreconditionError("several spectral singularities found; pass k0 explicitly");
    zero = zeros.front();
  }

  RemovalResult out{base, zero.s.real(), jost_derivative(engine, zero.s), true};
  out.simple = std::abs(out.A_prime) > cfg.simplicity_threshold;
  // the eigenfunction at the singularity is the regular solution at E = k0^2
  try {
    out.potential = susy1_potential(base, TransformStep::regular(zero.E), cfg);
  } catch (const DegenerateTransformError& e) {
    throw DegenerateTransformError(std::string("cannot remove the spectral singularity: ") + e.what(), e.location(),
                                   e.stage());
  }
  return out;
}

std::vector<cplx> crum_wronskian_oracle(const PotentialSpec& spec, std::span<const SolutionTrace> seeds) {
  if (!spec.is_catalog()) throw UnsupportedOperation("Crum oracle needs a catalog potential");
  const std::size_t n = seeds.size();
  if (n == 0 || n > 4) throw DomainError("Crum oracle supports one to four seeds");
  for (std::size_t j = 1; j < n; ++j) require_shared_grid(seeds[0], seeds[j]);
  std::vector<cplx> out(seeds[0].size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double x = seeds[0].states[i].x;
    const cplx V = eval_potential(spec, x);
    const cplx dV = n >= 4 ? eval_potential_derivative(spec, x, 1) : cplx{};
    std::vector<std::vector<cplx>> m(n, std::vector<cplx>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const auto& s = seeds[j].states[i];
      const cplx q = V - seeds[j].energy;
      const cplx rows[4] = {s.y, s.dy, q * s.y, dV * s.y + q * s.dy};
      for (std::size_t r = 0; r < n; ++r) m[r][j] = rows[r];
    }
    out[i] = determinant(std::move(m));
  }
  return out;
}

}  // namespace susy
