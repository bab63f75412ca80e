#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fogloss/analytic.hpp"
#include "fogloss/params.hpp"

// J centers on a ring. A job blocked at node j is sent to j+1 with probability
// p_j, to j-1 with probability p_j and lost otherwise. Node indices are 0-based
// and cyclic.
namespace fogloss::ring {

struct Node {
  double lambda = 0.0;
  double mu = 1.0;
  double c = 0.0;
  double p = 0.0;

  double a() const { return mu * c; }
};

struct RingParams {
  std::vector<Node> nodes;

  int J() const { return static_cast<int>(nodes.size()); }
  const Node& at(int j) const;  // cyclic index

  // Throws InvalidParams (J < 3, nonpositive rates) or
  // InvalidRerouteProbability (p outside [0, 1/2]).
  void validate() const;

  RingParams rotated(int shift) const;  // node j of the result is node j + shift

  // Two-center system of the pair (j, j+1): center 1 is node j, center 2 node j+1.
  SystemParams pair(int j) const;
};

enum class RingCase {
  no_congestion,
  single_saturated,
  pair_saturated,
  multiple_clusters,  // several non-adjacent singletons and pairs
  unsupported,
  critical,
};

std::string_view to_string(RingCase tag);

struct Cluster {
  int first = 0;  // pair clusters are (first, first + 1)
  int size = 1;
};

struct RingClassification {
  RingCase tag = RingCase::unsupported;
  std::vector<Cluster> clusters;
  std::string reason;  // why unsupported or critical
  int j0() const { return clusters.empty() ? -1 : clusters.front().first; }
};

RingClassification classify_ring(const RingParams& ring, double eps = kRegimeEps);

struct RingSolution {
  RingClassification classification;
  std::vector<double> beta;
  // pair clusters only, same order as classification.clusters
  std::vector<std::optional<StationarySolution>> pair_solutions;
};

// Throws UnsupportedTopology or CriticalRegime when classify_ring does.
RingSolution ring_blocking(const RingParams& ring, double tol_quad = analytic::kDefaultQuadTol);

}  // namespace fogloss::ring
