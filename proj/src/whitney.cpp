#include "lipquot/whitney.hpp"

#include <algorithm>
#include <limits>

#include "lipquot/errors.hpp"

namespace lipquot {

double WhitneyNet::epsilon_prime() const {
  if (epsilon >= 1.0) return std::numeric_limits<double>::infinity();
  return epsilon / (1.0 - epsilon);
}

namespace {

bool separated(const FiniteMetricSpace& space, const std::vector<double>& to_target, double eps,
               Index u, Index v) {
  return space(u, v) >= eps * std::max(to_target[u], to_target[v]) - kMetricTolerance;
}

std::vector<double> distances_to(const FiniteMetricSpace& space, const IndexSet& target) {
  std::vector<double> out(space.size());
  for (Index x = 0; x < space.size(); ++x) out[x] = space.distance_to(x, target);
  return out;
}

}  // namespace

WhitneyNet whitney_net(const FiniteMetricSpace& space, const IndexSet& source,
                       const IndexSet& target, double epsilon, std::span<const Index> order) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw PreconditionError("whitney_net: epsilon must lie in (0,1]");
  if (target.empty()) throw PreconditionError("whitney_net: target set must be nonempty");

  WhitneyNet result;
  result.epsilon = epsilon;
  result.target = target;
  result.source = source;
  const std::vector<double> to_target = distances_to(space, target);

  const std::vector<Index> walk = order.empty() ? std::vector<Index>(source.begin(), source.end())
                                                : std::vector<Index>(order.begin(), order.end());
  for (Index x : walk) {
    if (!contains(source, x)) throw PreconditionError("whitney_net: order leaves the source set");
    if (contains(target, x) || contains(result.net, x)) continue;
    const bool ok = std::all_of(result.accepted.begin(), result.accepted.end(),
                                [&](Index u) { return separated(space, to_target, epsilon, u, x); });
    if (!ok) continue;
    result.accepted.push_back(x);
    result.net.insert(std::upper_bound(result.net.begin(), result.net.end(), x), x);
  }
  return result;
}

WhitneyAudit audit_whitney_net(const FiniteMetricSpace& space, const WhitneyNet& net) {
  WhitneyAudit audit;
  const std::vector<double> to_target = distances_to(space, net.target);
  for (Index u : net.net)
    if (!contains(net.source, u) || contains(net.target, u)) audit.inside_source = false;
  for (std::size_t a = 0; a < net.net.size() && audit.separated; ++a) {
    for (std::size_t b = a + 1; b < net.net.size(); ++b) {
      if (!separated(space, to_target, net.epsilon, net.net[a], net.net[b])) {
        audit.separated = false;
        audit.separation_witness = std::make_pair(net.net[a], net.net[b]);
        break;
      }
    }
  }
  for (Index x : net.source) {
    if (contains(net.target, x) || contains(net.net, x)) continue;
    const bool ok = std::all_of(net.net.begin(), net.net.end(), [&](Index u) {
      return separated(space, to_target, net.epsilon, u, x);
    });
    if (ok) {
      audit.maximal = false;
      audit.addable = x;
      break;
    }
  }
  return audit;
}

WhitneyCoverage whitney_coverage(const FiniteMetricSpace& space, const WhitneyNet& net) {
  WhitneyCoverage coverage;
  const double eps_prime = net.epsilon_prime();
  for (Index x : net.source) {
    if (contains(net.target, x)) continue;
    ++coverage.checked;
    const double to_a = space.distance_to(x, net.target);
    const double nearest = space.distance_to(x, net.net);
    coverage.worst_ratio = std::max(coverage.worst_ratio, nearest / to_a);
    if (!(nearest <= eps_prime * to_a + kMetricTolerance)) coverage.violations.push_back(x);
  }
  return coverage;
}

}  // namespace lipquot
