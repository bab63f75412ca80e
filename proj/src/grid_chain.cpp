#include "fogloss/grid_chain.hpp"

#include <cmath>
#include <vector>

#include <Eigen/LU>

#include "fogloss/error.hpp"

namespace fogloss::markov {

namespace {

// Above this many bytes of stored level matrices the reduction keeps only
// checkpoints and recomputes each segment on the way back up.
constexpr double kStoreAllBytes = 1024.0 * 1024 * 1024;

// View of the chain with the level axis first.
class Levels {
 public:
  explicit Levels(const GridChain& chain) : chain_(chain), level_is_2_(chain.n2 >= chain.n1) {}

  std::size_t levels() const { return level_is_2_ ? chain_.n2 : chain_.n1; }
  std::size_t phases() const { return level_is_2_ ? chain_.n1 : chain_.n2; }

  double up(std::size_t level, std::size_t phase) const {
    if (level + 1 >= levels()) return 0.0;
    return level_is_2_ ? chain_.rate(phase, level, Move::Up2) : chain_.rate(level, phase, Move::Up1);
  }
  double down(std::size_t level, std::size_t phase) const {
    if (level == 0) return 0.0;
    return level_is_2_ ? chain_.rate(phase, level, Move::Down2)
                       : chain_.rate(level, phase, Move::Down1);
  }
  double phase_up(std::size_t level, std::size_t phase) const {
    if (phase + 1 >= phases()) return 0.0;
    return level_is_2_ ? chain_.rate(phase, level, Move::Up1) : chain_.rate(level, phase, Move::Up2);
  }
  double phase_down(std::size_t level, std::size_t phase) const {
    if (phase == 0) return 0.0;
    return level_is_2_ ? chain_.rate(phase, level, Move::Down1)
                       : chain_.rate(level, phase, Move::Down2);
  }

  Eigen::VectorXd up_vector(std::size_t level) const {
    Eigen::VectorXd v(phases());
    for (std::size_t i = 0; i < phases(); ++i) v[i] = up(level, i);
    return v;
  }
  Eigen::VectorXd down_vector(std::size_t level) const {
    Eigen::VectorXd v(phases());
    for (std::size_t i = 0; i < phases(); ++i) v[i] = down(level, i);
    return v;
  }

  // Off-diagonal part of the within-level generator.
  void add_phase_moves(std::size_t level, Eigen::MatrixXd& block) const {
    const std::size_t n = phases();
    for (std::size_t i = 0; i < n; ++i) {
      if (i + 1 < n) block(i, i + 1) += phase_up(level, i);
      if (i > 0) block(i, i - 1) += phase_down(level, i);
    }
  }

  bool level_is_2() const { return level_is_2_; }

 private:
  const GridChain& chain_;
  bool level_is_2_;
};

// Censored generator at the top level: within-level moves only.
Eigen::MatrixXd top_block(const Levels& lv) {
  const std::size_t n = lv.phases();
  const std::size_t top = lv.levels() - 1;
  Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
  lv.add_phase_moves(top, block);
  return block;
}

void set_conservative_diagonal(Eigen::MatrixXd& block, const Eigen::VectorXd& exit_down) {
  for (Eigen::Index i = 0; i < block.rows(); ++i) {
    block(i, i) = 0.0;
    block(i, i) = -(exit_down[i] + block.row(i).sum());
  }
}

struct Step {
  Eigen::MatrixXd R;  // pi_{k+1} = pi_k R
  Eigen::MatrixXd U;  // censored block at level k
};

// Given the censored block at level k+1, the level-k block and the rate matrix
// linking pi_k to pi_{k+1}.
Step reduce(const Levels& lv, std::size_t k, const Eigen::MatrixXd& U_next) {
  const Eigen::VectorXd down_next = lv.down_vector(k + 1);
  // -U_{k+1} is a nonsingular M-matrix once level k+1 can be left downwards.
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(-U_next);
  Eigen::MatrixXd inv = lu.inverse();
  if (!inv.allFinite()) {
    throw Error(ErrorCode::SingularSystem, "level elimination hit a singular block");
  }
  Step s;
  s.R = lv.up_vector(k).asDiagonal() * inv;
  s.U = s.R * down_next.asDiagonal();
  lv.add_phase_moves(k, s.U);
  set_conservative_diagonal(s.U, lv.down_vector(k));
  return s;
}

}  // namespace

Eigen::VectorXd gth_stationary(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd pi = Eigen::VectorXd::Zero(n);
  if (n == 0) return pi;
  a.diagonal().setZero();
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    const double s = a.row(k).head(k).sum();
    if (!(s > 0.0)) {
      throw Error(ErrorCode::SingularSystem, "GTH elimination found a state with no exit");
    }
    a.col(k).head(k) /= s;
    a.topLeftCorner(k, k).noalias() += a.col(k).head(k) * a.row(k).head(k);
  }
  pi[0] = 1.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    pi[j] = pi.head(j).dot(a.col(j).head(j));
  }
  return pi / pi.sum();
}

namespace {

// pi[k+1] = pi[k] R. The levels are scaled down together whenever the newest
// one grows large, since the ratio between the tail and the mode of a big
// finite system exceeds the double range; tiny early levels may underflow.
void advance(std::vector<Eigen::VectorXd>& pi, std::size_t k, const Eigen::MatrixXd& R) {
  constexpr double kRescale = 1e150;
  pi[k + 1] = (pi[k].transpose() * R).transpose();
  const double m = pi[k + 1].maxCoeff();
  if (m > kRescale) {
    for (std::size_t j = 0; j <= k + 1; ++j) pi[j] /= m;
  }
}

}  // namespace

Eigen::MatrixXd stationary(const GridChain& chain) {
  if (chain.n1 == 0 || chain.n2 == 0 || !chain.rate) {
    throw Error(ErrorCode::SingularSystem, "empty grid chain");
  }
  const Levels lv(chain);
  const std::size_t L = lv.levels();
  const std::size_t n = lv.phases();

  std::vector<Eigen::VectorXd> pi(L);
  const double bytes = static_cast<double>(L) * n * n * sizeof(double);

  if (bytes <= kStoreAllBytes) {
    std::vector<Eigen::MatrixXd> R(L > 0 ? L - 1 : 0);
    Eigen::MatrixXd U = top_block(lv);
    set_conservative_diagonal(U, lv.down_vector(L - 1));
    for (std::size_t k = L - 1; k-- > 0;) {
      Step s = reduce(lv, k, U);
      R[k] = std::move(s.R);
      U = std::move(s.U);
    }
    pi[0] = gth_stationary(U);
    for (std::size_t k = 0; k + 1 < L; ++k) advance(pi, k, R[k]);
  } else {
    const std::size_t stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(double(L)))));
    std::vector<Eigen::MatrixXd> checkpoint((L - 1) / stride + 1);
    Eigen::MatrixXd U = top_block(lv);
    set_conservative_diagonal(U, lv.down_vector(L - 1));
    Eigen::MatrixXd top = U;
    if ((L - 1) % stride == 0) checkpoint[(L - 1) / stride] = U;
    for (std::size_t k = L - 1; k-- > 0;) {
      U = reduce(lv, k, U).U;
      if (k % stride == 0) checkpoint[k / stride] = U;
    }
    pi[0] = gth_stationary(checkpoint[0]);
    std::vector<Eigen::MatrixXd> R(stride);
    for (std::size_t a = 0; a + 1 < L; a += stride) {
      const std::size_t b = std::min(a + stride, L - 1);
      Eigen::MatrixXd cur = (b == L - 1) ? top : checkpoint[b / stride];
      for (std::size_t k = b; k-- > a;) {
        Step s = reduce(lv, k, cur);
        R[k - a] = std::move(s.R);
        cur = std::move(s.U);
      }
      for (std::size_t k = a; k < b; ++k) advance(pi, k, R[k - a]);
    }
  }

  Eigen::MatrixXd out(chain.n1, chain.n2);
  double total = 0.0;
  for (std::size_t k = 0; k < L; ++k) total += pi[k].sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::SingularSystem, "stationary vector could not be normalised");
  }
  for (std::size_t k = 0; k < L; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = pi[k][i] / total;
      if (lv.level_is_2()) {
        out(i, k) = v;
      } else {
        out(k, i) = v;
      }
    }
  }
  return out;
}

}  // namespace fogloss::markov
