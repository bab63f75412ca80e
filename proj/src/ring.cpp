#include "fogloss/ring.hpp"

#include <cmath>

#include "fogloss/error.hpp"

namespace fogloss::ring {

namespace {

int wrap(int j, int J) { return ((j % J) + J) % J; }

double rel_slack(double lhs, double rhs) { return (lhs - rhs) / (std::abs(lhs) + std::abs(rhs)); }

std::string node_name(int j) { return "node " + std::to_string(j); }

struct Analysis {
  RingClassification cls;
  std::vector<std::optional<StationarySolution>> pairs;
};

Analysis refuse(RingCase tag, std::string reason) {
  Analysis a;
  a.cls.tag = tag;
  a.cls.reason = std::move(reason);
  return a;
}

Analysis analyse(const RingParams& r, double eps, double tol_quad) {
  r.validate();
  const int J = r.J();

  std::vector<bool> over(J);
  for (int j = 0; j < J; ++j) {
    const double s = rel_slack(r.at(j).lambda, r.at(j).a());
    if (std::abs(s) <= eps) return refuse(RingCase::critical, node_name(j) + " load equals its capacity");
    over[j] = s > 0.0;
  }
  int start = -1;
  for (int j = 0; j < J; ++j) {
    if (!over[j]) {
      start = j;
      break;
    }
  }
  if (start < 0) return refuse(RingCase::unsupported, "every node is overloaded");

  // Congested clusters: runs of overloaded nodes, a lone overloaded node
  // absorbing a neighbour its spill saturates.
  std::vector<Cluster> clusters;
  for (int k = 1; k <= J; ++k) {
    const int j = wrap(start + k, J);
    if (!over[j] || over[wrap(j - 1, J)]) continue;
    int len = 0;
    while (over[wrap(j + len, J)]) ++len;
    if (len >= 3) {
      return refuse(RingCase::unsupported, "three or more contiguous congested nodes from " + node_name(j));
    }
    if (len == 2) {
      clusters.push_back({j, 2});
      continue;
    }
    const Node& n = r.at(j);
    const Node& right = r.at(j + 1);
    const Node& left = r.at(j - 1);
    const double s_right = rel_slack(right.lambda + n.p * n.lambda, right.a() + n.p * n.a());
    const double s_left = rel_slack(left.lambda + n.p * n.lambda, left.a() + n.p * n.a());
    if (std::abs(s_right) <= eps || std::abs(s_left) <= eps) {
      return refuse(RingCase::critical, "spill of " + node_name(j) + " exactly saturates a neighbour");
    }
    if (s_right > 0.0 && s_left > 0.0) {
      return refuse(RingCase::unsupported, "spill of " + node_name(j) + " saturates both neighbours");
    }
    if (s_right > 0.0) {
      clusters.push_back({j, 2});
    } else if (s_left > 0.0) {
      clusters.push_back({wrap(j - 1, J), 2});
    } else {
      clusters.push_back({j, 1});
    }
  }

  std::vector<int> owner(J, -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (int k = 0; k < clusters[c].size; ++k) {
      int& o = owner[wrap(clusters[c].first + k, J)];
      if (o >= 0) return refuse(RingCase::unsupported, "congested clusters overlap");
      o = static_cast<int>(c);
    }
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (const int side : {clusters[c].first - 1, clusters[c].first + clusters[c].size}) {
      const int o = owner[wrap(side, J)];
      if (o >= 0 && o != static_cast<int>(c)) {
        return refuse(RingCase::unsupported, "congested clusters are adjacent");
      }
    }
  }

  Analysis out;
  out.pairs.resize(clusters.size());
  std::vector<double> load(J);
  for (int j = 0; j < J; ++j) load[j] = r.at(j).lambda;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const int j = clusters[c].first;
    const Node& n = r.at(j);
    if (clusters[c].size == 1) {
      load[wrap(j - 1, J)] += n.p * (n.lambda - n.a());
      load[wrap(j + 1, J)] += n.p * (n.lambda - n.a());
      continue;
    }
    const SystemParams sp = r.pair(j);
    const Regime reg = regime(sp, eps);
    if (reg.tag == RegimeTag::Critical) {
      return refuse(RingCase::critical, "pair at " + node_name(j) + " is on a regime boundary");
    }
    if (!reg.saturated()) {
      return refuse(RingCase::unsupported, "pair at " + node_name(j) + " is not saturated");
    }
    const StationarySolution s = analytic::blocking(sp, tol_quad);
    const Node& m = r.at(j + 1);
    load[wrap(j - 1, J)] += n.p * n.lambda * s.P01;
    load[wrap(j + 2, J)] += m.p * m.lambda * s.P10;
    out.pairs[c] = s;
  }
  for (int k = 0; k < J; ++k) {
    if (owner[k] >= 0) continue;
    const double s = rel_slack(r.at(k).a(), load[k]);
    if (std::abs(s) <= eps) return refuse(RingCase::critical, "spill exactly saturates " + node_name(k));
    if (s < 0.0) return refuse(RingCase::unsupported, "spill saturates " + node_name(k));
  }

  out.cls.clusters = clusters;
  if (clusters.size() == 1) {
    out.cls.tag = clusters.front().size == 1 ? RingCase::single_saturated : RingCase::pair_saturated;
  } else {
    out.cls.tag = RingCase::multiple_clusters;
  }
  if (clusters.empty()) out.cls.tag = RingCase::no_congestion;
  return out;
}

}  // namespace

const Node& RingParams::at(int j) const { return nodes[static_cast<std::size_t>(wrap(j, J()))]; }

void RingParams::validate() const {
  if (nodes.size() < 3) throw Error(ErrorCode::InvalidParams, "a ring needs at least 3 nodes");
  for (int j = 0; j < J(); ++j) {
    const Node& n = nodes[static_cast<std::size_t>(j)];
    const std::string where = node_name(j);
    if (!(n.lambda > 0.0) || !std::isfinite(n.lambda)) throw Error(ErrorCode::InvalidParams, where + " lambda must be > 0");
    if (!(n.mu > 0.0) || !std::isfinite(n.mu)) throw Error(ErrorCode::InvalidParams, where + " mu must be > 0");
    if (!(n.c > 0.0) || !std::isfinite(n.c)) throw Error(ErrorCode::InvalidParams, where + " c must be > 0");
    if (!(n.p >= 0.0 && n.p <= 0.5)) {
      throw Error(ErrorCode::InvalidRerouteProbability, where + " p must lie in [0, 1/2]");
    }
  }
}

RingParams RingParams::rotated(int shift) const {
  RingParams r;
  r.nodes.reserve(nodes.size());
  for (int j = 0; j < J(); ++j) r.nodes.push_back(at(j + shift));
  return r;
}

SystemParams RingParams::pair(int j) const {
  const Node& n = at(j);
  const Node& m = at(j + 1);
  return {n.lambda, m.lambda, n.mu, m.mu, n.c, m.c, n.p, m.p};
}

std::string_view to_string(RingCase tag) {
  switch (tag) {
    case RingCase::no_congestion: return "no_congestion";
    case RingCase::single_saturated: return "single_saturated";
    case RingCase::pair_saturated: return "pair_saturated";
    case RingCase::multiple_clusters: return "multiple_clusters";
    case RingCase::unsupported: return "unsupported";
    case RingCase::critical: return "critical";
  }
  return "unsupported";
}

RingClassification classify_ring(const RingParams& ring, double eps) {
  return analyse(ring, eps, analytic::kDefaultQuadTol).cls;
}

RingSolution ring_blocking(const RingParams& ring, double tol_quad) {
  Analysis a = analyse(ring, kRegimeEps, tol_quad);
  if (a.cls.tag == RingCase::critical) throw Error(ErrorCode::CriticalRegime, a.cls.reason);
  if (a.cls.tag == RingCase::unsupported) throw Error(ErrorCode::UnsupportedTopology, a.cls.reason);

  RingSolution out;
  out.beta.assign(static_cast<std::size_t>(ring.J()), 0.0);
  for (std::size_t c = 0; c < a.cls.clusters.size(); ++c) {
    const Cluster& cl = a.cls.clusters[c];
    const Node& n = ring.at(cl.first);
    const auto j = static_cast<std::size_t>(cl.first);
    if (cl.size == 1) {
      out.beta[j] = (1.0 - 2.0 * n.p) * (1.0 - n.a() / n.lambda);
      continue;
    }
    const StationarySolution& s = *a.pairs[c];
    const Node& m = ring.at(cl.first + 1);
    const auto k = static_cast<std::size_t>((cl.first + 1) % ring.J());
    out.beta[j] = s.P01 * (1.0 - 2.0 * n.p) + n.p * s.pi00;
    out.beta[k] = s.P10 * (1.0 - 2.0 * m.p) + m.p * s.pi00;
  }
  out.classification = std::move(a.cls);
  out.pair_solutions = std::move(a.pairs);
  return out;
}

}  // namespace fogloss::ring
