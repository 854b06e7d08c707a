#include "irl/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace irl {

namespace {

int arity(RewardKind kind) {
  return kind == RewardKind::state_only ? 1 : kind == RewardKind::state_action ? 2 : 3;
}

/// Union-find whose nodes carry a potential relative to their root:
/// value(x) = value(root(x)) + offset(x).
class OffsetUnionFind {
 public:
  explicit OffsetUnionFind(std::size_t n) : parent_(n), offset_(n, 0.0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    if (parent_[x] == x) return x;
    const std::size_t root = find(parent_[x]);
    offset_[x] += offset_[parent_[x]];
    parent_[x] = root;
    return root;
  }

  double offset(std::size_t x) {
    find(x);
    return offset_[x];
  }

  /// Imposes value(x) - value(y) = diff. Returns the constraint residual when
  /// x and y are already joined, 0 otherwise.
  double relate(std::size_t x, std::size_t y, double diff) {
    const std::size_t rx = find(x);
    const std::size_t ry = find(y);
    if (rx == ry) return offset_[x] - offset_[y] - diff;
    // value(rx) = value(ry) + offset(y) + diff - offset(x)
    parent_[rx] = ry;
    offset_[rx] = offset_[y] + diff - offset_[x];
    return 0.0;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<double> offset_;
};

}  // namespace

RewardTable shape_reward(const RewardTable& reward, const PotentialFn& potential,
                         double discount, std::size_t n_actions) {
  const std::size_t n = reward.n_states();
  if (potential.phi.size() != n) throw std::invalid_argument("potential size mismatch");
  for (double v : potential.phi) {
    if (!std::isfinite(v)) throw std::invalid_argument("potential has a non-finite entry");
  }
  RewardTable out = reward.broadcast(RewardKind::transition, n_actions);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < n_actions; ++a) {
      for (std::size_t next = 0; next < n; ++next) {
        out.mutable_at(s, a, next) += discount * potential.phi[next] - potential.phi[s];
      }
    }
  }
  return out;
}

StateActionTable advantage(const SoftSolution& solution) {
  StateActionTable out = solution.q;
  for (std::size_t s = 0; s < out.n_states(); ++s) {
    for (auto& x : out.row(s)) x -= solution.v[s];
  }
  return out;
}

RewardTable mean_center(const RewardTable& reward) {
  RewardTable out = reward;
  auto values = out.values();
  if (values.empty()) return out;
  const double mean =
      std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  for (auto& v : values) v -= mean;
  return out;
}

double centered_distance(const RewardTable& a, const RewardTable& b, std::size_t n_actions) {
  const RewardKind kind = arity(a.kind()) >= arity(b.kind()) ? a.kind() : b.kind();
  const RewardTable ca = mean_center(a.broadcast(kind, n_actions));
  const RewardTable cb = mean_center(b.broadcast(kind, n_actions));
  return max_abs_diff(ca.values(), cb.values());
}

std::vector<std::pair<std::size_t, std::size_t>> one_step_support(const TabularMdp& mdp) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t s = 0; s < mdp.n_states; ++s) {
    for (std::size_t next = 0; next < mdp.n_states; ++next) {
      for (std::size_t a = 0; a < mdp.n_actions; ++a) {
        if (mdp.transition(s, a, next) > kPositiveProbability) {
          out.emplace_back(s, next);
          break;
        }
      }
    }
  }
  return out;
}

DecomposeResult decompose_sum(const StateActionTable& table,
                              const std::vector<std::pair<std::size_t, std::size_t>>& support,
                              double tolerance) {
  const std::size_t n = table.n_states();
  if (table.n_actions() != n) throw std::invalid_argument("decompose_sum: table must be square");
  // Nodes 0..n-1 carry f(s); nodes n..2n-1 carry -g(s'), so that
  // f(s) + g(s') = h becomes value(f_s) - value(-g_s') = h.
  OffsetUnionFind uf(2 * n);
  std::vector<bool> touched(2 * n, false);
  double worst = 0.0;
  for (const auto& [s, next] : support) {
    if (s >= n || next >= n) throw std::invalid_argument("decompose_sum: support out of range");
    touched[s] = touched[n + next] = true;
    worst = std::max(worst, std::abs(uf.relate(s, n + next, table(s, next))));
  }

  DecomposeResult out;
  if (worst > tolerance) {
    out.status = DecomposeStatus::inconsistent;
    return out;
  }
  const bool all_touched = std::all_of(touched.begin(), touched.end(), [](bool b) { return b; });
  if (n == 0 || !all_touched) return out;
  const std::size_t root = uf.find(0);
  for (std::size_t x = 1; x < 2 * n; ++x) {
    if (uf.find(x) != root) return out;
  }

  out.status = DecomposeStatus::ok;
  out.f.resize(n);
  out.g.resize(n);
  const double gauge = uf.offset(0);
  for (std::size_t s = 0; s < n; ++s) {
    out.f[s] = uf.offset(s) - gauge;
    out.g[s] = -(uf.offset(n + s) - gauge);
  }
  return out;
}

}  // namespace irl
