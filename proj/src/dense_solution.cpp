#include <algorithm>
#include <sstream>

#include "susy/errors.hpp"
#include "susy/solution.hpp"

namespace susy {

DenseSolution::DenseSolution(cplx energy, std::vector<DenseNode> nodes)
    : energy_(energy), nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw DomainError("dense solution needs at least two nodes");
  xs_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i > 0 && !(nodes_[i].x > nodes_[i - 1].x)) throw DomainError("dense nodes must be strictly increasing");
    xs_.push_back(nodes_[i].x);
  }
}

SolutionState DenseSolution::state_at(double x) const {
  if (nodes_.empty()) throw PreconditionError("empty dense solution");
  if (x < xs_.front() || x > xs_.back()) {
    std::ostringstream os;
    os << "dense solution queried at x = " << x << " outside [" << xs_.front() << ", " << xs_.back() << "]";
    throw DomainError(os.str());
  }
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t j = it == xs_.end() ? xs_.size() - 1 : static_cast<std::size_t>(it - xs_.begin());
  if (j == 0) j = 1;
  const DenseNode& a = nodes_[j - 1];
  const DenseNode& b = nodes_[j];
  if (x == a.x) return {x, a.y, a.dy};
  if (x == b.x) return {x, b.y, b.dy};

  const double h = b.x - a.x;
  const double t = (x - a.x) / h;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;

  // quintic Hermite basis: values, slopes, curvatures at both ends
  const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h5 = 0.5 * t3 - t4 + 0.5 * t5;

  const double d0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
  const double d1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
  const double d2 = t - 4.5 * t2 + 6.0 * t3 - 2.5 * t4;
  const double d3 = -d0;
  const double d4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
  const double d5 = 1.5 * t2 - 4.0 * t3 + 2.5 * t4;

  const double hh = h * h;
  const cplx y = h0 * a.y + h * h1 * a.dy + hh * h2 * a.ddy + h3 * b.y + h * h4 * b.dy + hh * h5 * b.ddy;
  const cplx dy = (d0 * a.y + h * d1 * a.dy + hh * d2 * a.ddy + d3 * b.y + h * d4 * b.dy + hh * d5 * b.ddy) / h;
  return {x, y, dy};
}

DenseSolution merge_dense(const DenseSolution& left, const DenseSolution& right) {
  if (left.empty()) return right;
  if (right.empty()) return left;
  std::vector<DenseNode> nodes(left.nodes().begin(), left.nodes().end());
  for (const auto& n : right.nodes())
    if (n.x > nodes.back().x) nodes.push_back(n);
  return DenseSolution(left.energy(), std::move(nodes));
}

}  // namespace susy
