#include "fogloss/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include <boost/math/distributions/students_t.hpp>

#include "fogloss/error.hpp"
#include "fogloss/grid_chain.hpp"

namespace fogloss::sim {

namespace {

// Uniform on (0, 1) from the top 53 bits, independent of the standard
// library's distribution implementations.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : gen_(seed) {}
  double operator()() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53; }
  double exponential(double rate) { return -std::log((*this)()) / rate; }

 private:
  std::mt19937_64 gen_;
};

void check_horizon(double horizon, double warmup) {
  if (!(warmup >= 0.0) || !(horizon > warmup) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::InvalidHorizon, "need horizon > warmup >= 0, got horizon " +
                                               std::to_string(horizon) + ", warmup " + std::to_string(warmup));
  }
}

// Per-class arrival/loss counts in equal time batches of the observation
// window, plus time-integrated occupancy.
class BatchStats {
 public:
  BatchStats(std::size_t classes, double warmup, double horizon)
      : warmup_(warmup),
        horizon_(horizon),
        batch_len_((horizon - warmup) / kBatches),
        arrivals_(classes * kBatches, 0),
        losses_(classes * kBatches, 0),
        occupancy_(classes, 0.0) {}

  void arrival(std::size_t cls, double t, bool lost) {
    if (t <= warmup_) return;
    const auto b = std::min<std::size_t>(kBatches - 1, static_cast<std::size_t>((t - warmup_) / batch_len_));
    ++arrivals_[cls * kBatches + b];
    if (lost) ++losses_[cls * kBatches + b];
  }

  // Occupancy held constant on [from, to).
  void hold(std::size_t cls, double from, double to, int busy) {
    const double lo = std::max(from, warmup_);
    const double hi = std::min(to, horizon_);
    if (hi > lo) occupancy_[cls] += busy * (hi - lo);
  }

  ClassEstimate finish(std::size_t cls) const {
    ClassEstimate e;
    double ratio_sum = 0.0;
    double ratio_sq = 0.0;
    int used = 0;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const std::uint64_t a = arrivals_[cls * kBatches + b];
      const std::uint64_t l = losses_[cls * kBatches + b];
      e.arrivals += a;
      e.losses += l;
      if (a == 0) continue;
      const double r = static_cast<double>(l) / static_cast<double>(a);
      ratio_sum += r;
      ratio_sq += r * r;
      ++used;
    }
    e.mean_occupancy = occupancy_[cls] / (horizon_ - warmup_);
    if (e.arrivals == 0) return e;
    e.beta_hat = static_cast<double>(e.losses) / static_cast<double>(e.arrivals);
    if (used >= 2) {
      const double mean = ratio_sum / used;
      const double var = std::max(0.0, (ratio_sq - used * mean * mean) / (used - 1));
      const boost::math::students_t dist(used - 1);
      e.half_width = boost::math::quantile(boost::math::complement(dist, 0.025)) * std::sqrt(var / used);
    }
    return e;
  }

 private:
  double warmup_;
  double horizon_;
  double batch_len_;
  std::vector<std::uint64_t> arrivals_;
  std::vector<std::uint64_t> losses_;
  std::vector<double> occupancy_;
};

}  // namespace

FiniteSystem FiniteSystem::scaled(const SystemParams& p, int N) {
  p.validate();
  if (N < 1) throw Error(ErrorCode::InvalidParams, "N must be >= 1");
  FiniteSystem s;
  s.N = N;
  s.C1 = static_cast<int>(std::lround(p.c1 * N));
  s.C2 = static_cast<int>(std::lround(p.c2 * N));
  s.rate1 = p.lambda1 * N;
  s.rate2 = p.lambda2 * N;
  s.mu1 = p.mu1;
  s.mu2 = p.mu2;
  s.p1 = p.p1;
  s.p2 = p.p2;
  s.validate();
  return s;
}

void FiniteSystem::validate() const {
  if (C1 < 1) throw Error(ErrorCode::InvalidParams, "C1 = round(c1 N) must be >= 1");
  if (C2 < 1) throw Error(ErrorCode::InvalidParams, "C2 = round(c2 N) must be >= 1");
  if (!(rate1 >= 0.0) || !(rate2 >= 0.0)) throw Error(ErrorCode::InvalidParams, "arrival rates must be >= 0");
  if (!(mu1 > 0.0) || !(mu2 > 0.0)) throw Error(ErrorCode::InvalidParams, "service rates must be > 0");
  if (!(p1 >= 0.0 && p1 <= 1.0)) throw Error(ErrorCode::InvalidParams, "p1 must lie in [0, 1]");
  if (!(p2 >= 0.0 && p2 <= 1.0)) throw Error(ErrorCode::InvalidParams, "p2 must lie in [0, 1]");
}

SimEstimate simulate_two(const FiniteSystem& sys, double horizon, double warmup, std::uint64_t seed) {
  sys.validate();
  check_horizon(horizon, warmup);
  Uniform u(seed);
  BatchStats stats(2, warmup, horizon);
  int L1 = 0;
  int L2 = 0;
  double t = 0.0;
  while (true) {
    const double d1 = sys.mu1 * L1;
    const double d2 = sys.mu2 * L2;
    const double total = sys.rate1 + sys.rate2 + d1 + d2;
    if (!(total > 0.0)) break;
    const double next = t + u.exponential(total);
    stats.hold(0, t, next, L1);
    stats.hold(1, t, next, L2);
    if (next > horizon) break;
    t = next;
    const double e = u() * total;
    if (e < sys.rate1) {
      bool lost = false;
      if (L1 < sys.C1) {
        ++L1;
      } else if (u() < sys.p1 && L2 < sys.C2) {
        ++L2;
      } else {
        lost = true;
      }
      stats.arrival(0, t, lost);
    } else if (e < sys.rate1 + sys.rate2) {
      bool lost = false;
      if (L2 < sys.C2) {
        ++L2;
      } else if (u() < sys.p2 && L1 < sys.C1) {
        ++L1;
      } else {
        lost = true;
      }
      stats.arrival(1, t, lost);
    } else if (e < sys.rate1 + sys.rate2 + d1) {
      --L1;
    } else {
      --L2;
    }
  }
  const ClassEstimate c1 = stats.finish(0);
  const ClassEstimate c2 = stats.finish(1);
  SimEstimate out;
  out.beta1_hat = c1.beta_hat;
  out.beta2_hat = c2.beta_hat;
  out.half_width1 = c1.half_width;
  out.half_width2 = c2.half_width;
  out.arrivals1 = c1.arrivals;
  out.arrivals2 = c2.arrivals;
  out.losses1 = c1.losses;
  out.losses2 = c2.losses;
  out.mean_L1 = c1.mean_occupancy;
  out.mean_L2 = c2.mean_occupancy;
  out.seed = seed;
  return out;
}

SimEstimate merge_estimates(const std::vector<SimEstimate>& runs) {
  SimEstimate m;
  if (runs.empty()) return m;
  const double n = static_cast<double>(runs.size());
  double hw1 = 0.0;
  double hw2 = 0.0;
  for (const SimEstimate& r : runs) {
    m.beta1_hat += r.beta1_hat / n;
    m.beta2_hat += r.beta2_hat / n;
    m.mean_L1 += r.mean_L1 / n;
    m.mean_L2 += r.mean_L2 / n;
    hw1 += r.half_width1 * r.half_width1;
    hw2 += r.half_width2 * r.half_width2;
    m.arrivals1 += r.arrivals1;
    m.arrivals2 += r.arrivals2;
    m.losses1 += r.losses1;
    m.losses2 += r.losses2;
  }
  m.half_width1 = std::sqrt(hw1) / n;
  m.half_width2 = std::sqrt(hw2) / n;
  m.seed = runs.front().seed;
  return m;
}

SimEstimate simulate_two_replicated(const FiniteSystem& sys, double horizon, double warmup,
                                    const std::vector<std::uint64_t>& seeds, unsigned threads) {
  std::vector<SimEstimate> runs(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < seeds.size();) {
      try {
        runs[k] = simulate_two(sys, horizon, warmup, seeds[k]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return merge_estimates(runs);
}

FiniteBlocking exact_finite(const FiniteSystem& sys, std::size_t max_states) {
  sys.validate();
  if (sys.states() > max_states) {
    throw Error(ErrorCode::StateSpaceTooLarge, std::to_string(sys.states()) + " states exceed the limit of " +
                                                   std::to_string(max_states));
  }
  const auto C1 = static_cast<std::size_t>(sys.C1);
  const auto C2 = static_cast<std::size_t>(sys.C2);
  markov::GridChain chain;
  chain.n1 = C1 + 1;
  chain.n2 = C2 + 1;
  chain.rate = [&](std::size_t i, std::size_t j, markov::Move move) -> double {
    switch (move) {
      case markov::Move::Up1: return sys.rate1 + (j == C2 ? sys.p2 * sys.rate2 : 0.0);
      case markov::Move::Up2: return sys.rate2 + (i == C1 ? sys.p1 * sys.rate1 : 0.0);
      case markov::Move::Down1: return sys.mu1 * static_cast<double>(i);
      case markov::Move::Down2: return sys.mu2 * static_cast<double>(j);
    }
    return 0.0;
  };
  const Eigen::MatrixXd pi = markov::stationary(chain);
  FiniteBlocking b;
  b.prob_full1 = pi.row(static_cast<Eigen::Index>(C1)).sum();
  b.prob_full2 = pi.col(static_cast<Eigen::Index>(C2)).sum();
  b.prob_both = pi(static_cast<Eigen::Index>(C1), static_cast<Eigen::Index>(C2));
  b.beta1 = (1.0 - sys.p1) * b.prob_full1 + sys.p1 * b.prob_both;
  b.beta2 = (1.0 - sys.p2) * b.prob_full2 + sys.p2 * b.prob_both;
  return b;
}

double erlang_b(int servers, double offered) {
  if (servers < 0 || !(offered >= 0.0)) throw Error(ErrorCode::InvalidParams, "erlang_b needs servers >= 0, load >= 0");
  double b = 1.0;
  for (int k = 1; k <= servers; ++k) b = offered * b / (k + offered * b);
  return b;
}

std::vector<ClassEstimate> simulate_ring(const ring::RingParams& ring, int N, double horizon, double warmup,
                                         std::uint64_t seed) {
  ring.validate();
  check_horizon(horizon, warmup);
  if (N < 1) throw Error(ErrorCode::InvalidParams, "N must be >= 1");
  const int J = ring.J();
  std::vector<int> cap(J);
  std::vector<double> rate(J);
  double arrival_total = 0.0;
  for (int j = 0; j < J; ++j) {
    cap[j] = static_cast<int>(std::lround(ring.at(j).c * N));
    if (cap[j] < 1) throw Error(ErrorCode::InvalidParams, "node " + std::to_string(j) + " has no server");
    rate[j] = ring.at(j).lambda * N;
    arrival_total += rate[j];
  }
  Uniform u(seed);
  BatchStats stats(static_cast<std::size_t>(J), warmup, horizon);
  std::vector<int> L(J, 0);
  double t = 0.0;
  while (true) {
    double departure_total = 0.0;
    for (int j = 0; j < J; ++j) departure_total += ring.at(j).mu * L[j];
    const double total = arrival_total + departure_total;
    const double next = t + u.exponential(total);
    for (int j = 0; j < J; ++j) stats.hold(static_cast<std::size_t>(j), t, next, L[j]);
    if (next > horizon) break;
    t = next;
    double e = u() * total;
    if (e < arrival_total) {
      int j = 0;
      while (j + 1 < J && e >= rate[j]) {
        e -= rate[j];
        ++j;
      }
      bool lost = false;
      if (L[j] < cap[j]) {
        ++L[j];
      } else {
        const double v = u();
        const double p = ring.at(j).p;
        int target = -1;
        if (v < p) {
          target = (j + 1) % J;
        } else if (v < 2 * p) {
          target = (j + J - 1) % J;
        }
        if (target >= 0 && L[target] < cap[target]) {
          ++L[target];
        } else {
          lost = true;
        }
      }
      stats.arrival(static_cast<std::size_t>(j), t, lost);
    } else {
      e -= arrival_total;
      int j = 0;
      while (j + 1 < J && e >= ring.at(j).mu * L[j]) {
        e -= ring.at(j).mu * L[j];
        ++j;
      }
      while (L[j] == 0) j = (j + 1) % J;  // guards against roundoff at the end of the scan
      --L[j];
    }
  }
  std::vector<ClassEstimate> out;
  out.reserve(static_cast<std::size_t>(J));
  for (int j = 0; j < J; ++j) out.push_back(stats.finish(static_cast<std::size_t>(j)));
  return out;
}

}  // namespace fogloss::sim
