#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace fogloss::markov {

enum class Move { Up1, Down1, Up2, Down2 };

// Continuous-time Markov chain on {0..n1-1} x {0..n2-1} whose jumps change one
// coordinate by +-1. `rate` is only queried for moves that stay on the grid.
struct GridChain {
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::function<double(std::size_t i, std::size_t j, Move move)> rate;
};

// Stationary distribution as an n1 x n2 matrix.
//
// The longer axis is taken as the level of a finite quasi-birth-death process
// and eliminated level by level (linear level reduction). Each censored block
// keeps its diagonal as minus the sum of its off-diagonal entries, and the last
// block is solved with the GTH algorithm, so no step subtracts probabilities.
// Throws Error(SingularSystem) if the chain is not irreducible.
Eigen::MatrixXd stationary(const GridChain& chain);

// Dense GTH solve of pi Q = 0 for a generator given by its off-diagonal
// entries (the diagonal of `generator` is ignored).
Eigen::VectorXd gth_stationary(Eigen::MatrixXd generator);

}  // namespace fogloss::markov
