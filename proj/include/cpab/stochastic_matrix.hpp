#pragma once

// Row-stochastic matrix over an enumerated, ordered state space.

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <vector>

namespace cpab {

template <typename State>
struct StochasticMatrix {
  std::vector<State> states;
  Eigen::MatrixXd probs;  // probs(i, j) = transition states[i] -> states[j]

  StochasticMatrix(std::vector<State> s, Eigen::MatrixXd p)
      : states(std::move(s)), probs(std::move(p)) {
    if (probs.rows() != probs.cols() ||
        static_cast<std::size_t>(probs.rows()) != states.size()) {
      throw std::invalid_argument("stochastic matrix shape mismatch");
    }
    for (std::size_t i = 0; i < states.size(); ++i) index_[states[i]] = i;
  }

  std::size_t size() const { return states.size(); }

  std::size_t index_of(const State& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) throw std::invalid_argument("state not in matrix");
    return it->second;
  }

  double max_row_sum_error() const {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
      worst = std::max(worst, std::abs(probs.row(i).sum() - 1.0));
    }
    return worst;
  }

  void validate(double tol = 1e-9) const {
    if (probs.minCoeff() < -tol) throw std::invalid_argument("negative transition probability");
    if (max_row_sum_error() > tol) throw std::invalid_argument("rows must sum to 1");
  }

 private:
  std::map<State, std::size_t> index_;
};

}  // namespace cpab
