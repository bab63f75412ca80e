#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fogloss/params.hpp"
#include "fogloss/ring.hpp"

// Finite-N loss systems: the two-center CTMC with overflow rerouting and its
// ring counterpart, by exact stationary solve or discrete-event simulation.
namespace fogloss::sim {

// Capacities C_i = round(c_i N), arrival rates lambda_i N.
struct FiniteSystem {
  int N = 0;
  int C1 = 0;
  int C2 = 0;
  double rate1 = 0.0;  // lambda1 N
  double rate2 = 0.0;  // lambda2 N
  double mu1 = 1.0;
  double mu2 = 1.0;
  double p1 = 0.0;
  double p2 = 0.0;

  static FiniteSystem scaled(const SystemParams& params, int N);
  void validate() const;
  std::size_t states() const { return std::size_t(C1 + 1) * std::size_t(C2 + 1); }
};

// Post-warmup statistics of one arrival class.
struct ClassEstimate {
  double beta_hat = 0.0;
  double half_width = 0.0;  // 95% batch-means confidence half-width
  std::uint64_t arrivals = 0;
  std::uint64_t losses = 0;
  double mean_occupancy = 0.0;  // time average of the number of busy servers
};

struct SimEstimate {
  double beta1_hat = 0.0;
  double beta2_hat = 0.0;
  double half_width1 = 0.0;
  double half_width2 = 0.0;
  std::uint64_t arrivals1 = 0;
  std::uint64_t arrivals2 = 0;
  std::uint64_t losses1 = 0;
  std::uint64_t losses2 = 0;
  double mean_L1 = 0.0;
  double mean_L2 = 0.0;
  std::uint64_t seed = 0;
};

inline constexpr int kBatches = 20;

inline double default_warmup(double horizon) { return 0.1 * horizon; }

// Event-driven simulation over [0, horizon], statistics collected on
// (warmup, horizon] split into kBatches equal batches. Uniforms are the top 53
// bits of std::mt19937_64 draws, so a seed reproduces the run bit for bit on
// any platform. Throws InvalidHorizon unless horizon > warmup >= 0.
SimEstimate simulate_two(const FiniteSystem& sys, double horizon, double warmup, std::uint64_t seed);

// Independent replications on up to `threads` threads, merged with
// merge_estimates.
SimEstimate simulate_two_replicated(const FiniteSystem& sys, double horizon, double warmup,
                                    const std::vector<std::uint64_t>& seeds, unsigned threads = 1);

// Averages the point estimates and pools the half-widths as independent
// replications (sqrt of the mean squared half-width over sqrt(count)).
SimEstimate merge_estimates(const std::vector<SimEstimate>& runs);

struct FiniteBlocking {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double prob_full1 = 0.0;  // P(L1 = C1)
  double prob_full2 = 0.0;  // P(L2 = C2)
  double prob_both = 0.0;   // P(L1 = C1, L2 = C2)
};

inline constexpr std::size_t kMaxExactStates = 500000;

// Exact stationary solve; beta_i = (1 - p_i) P(L_i = C_i) + p_i P(L1 = C1, L2 = C2).
// Throws StateSpaceTooLarge above max_states.
FiniteBlocking exact_finite(const FiniteSystem& sys, std::size_t max_states = kMaxExactStates);

// Erlang loss formula B(servers, offered load) by the stable recursion.
double erlang_b(int servers, double offered);

// Ring of J finite centers with capacities round(c_j N) and single-hop
// rerouting: a job blocked at j tries j+1 with probability p_j, j-1 with
// probability p_j, and is lost if the target is full as well.
std::vector<ClassEstimate> simulate_ring(const ring::RingParams& ring, int N, double horizon, double warmup,
                                         std::uint64_t seed);

}  // namespace fogloss::sim
