#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace irl {

/// Dense row-major table indexed by (state, action).
class StateActionTable {
 public:
  StateActionTable() = default;
  StateActionTable(std::size_t n_states, std::size_t n_actions, double fill = 0.0)
      : n_states_(n_states), n_actions_(n_actions), data_(n_states * n_actions, fill) {}

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }

  double& operator()(std::size_t s, std::size_t a) { return data_[s * n_actions_ + a]; }
  double operator()(std::size_t s, std::size_t a) const { return data_[s * n_actions_ + a]; }

  std::span<double> row(std::size_t s) { return {data_.data() + s * n_actions_, n_actions_}; }
  std::span<const double> row(std::size_t s) const {
    return {data_.data() + s * n_actions_, n_actions_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const StateActionTable&) const = default;

 private:
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::vector<double> data_;
};

/// Action probabilities pi(a|s); each row is a distribution.
using PolicyTable = StateActionTable;

/// Dense row-major table indexed by (state, action, next state).
class TransitionTable {
 public:
  TransitionTable() = default;
  TransitionTable(std::size_t n_states, std::size_t n_actions, double fill = 0.0)
      : n_states_(n_states), n_actions_(n_actions),
        data_(n_states * n_actions * n_states, fill) {}

  std::size_t n_states() const { return n_states_; }
  std::size_t n_actions() const { return n_actions_; }

  double& operator()(std::size_t s, std::size_t a, std::size_t next) {
    return data_[(s * n_actions_ + a) * n_states_ + next];
  }
  double operator()(std::size_t s, std::size_t a, std::size_t next) const {
    return data_[(s * n_actions_ + a) * n_states_ + next];
  }

  /// Distribution (or weights) over next states for one (s, a).
  std::span<double> row(std::size_t s, std::size_t a) {
    return {data_.data() + (s * n_actions_ + a) * n_states_, n_states_};
  }
  std::span<const double> row(std::size_t s, std::size_t a) const {
    return {data_.data() + (s * n_actions_ + a) * n_states_, n_states_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool operator==(const TransitionTable&) const = default;

 private:
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::vector<double> data_;
};

/// Numerically stable log(sum(exp(x))). Returns -inf for an empty span.
double log_sum_exp(std::span<const double> x);

/// Largest absolute entry of a - b. Sizes must match.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

}  // namespace irl
