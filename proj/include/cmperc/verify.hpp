#pragma once

#include <string>
#include <vector>

#include "cmperc/cmp.hpp"
#include "cmperc/generators.hpp"
#include "cmperc/graph.hpp"

namespace cmperc {

struct VerifyReport {
  std::size_t checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> flags;  // observations that are reported, not fatal
  bool ok() const { return failures.empty(); }
  void merge(const VerifyReport& other);
};

// Structural invariant battery for one weighted graph:
//  - cluster size vs weight bound and acyclicity of the oriented cluster graph
//  - strictly decreasing floor(r^alpha) along oriented edges
//  - cluster diameter bound (violations of the alpha=1 small-r reading are
//    reported as flags) and connectivity of B(C, r(C)^alpha)
//  - locality across stable sets, union/intersection/dilution stability
//  - ball-union fixed point characterization of stable sets
//  - stabiliser = cluster + descendant closure; nested-or-disjoint stabilisers
//  - exploration agrees with iterated expansion and touches nothing beyond
//    the stabiliser and its outer boundary
VerifyReport verify_structure(const WeightedGraph& g, const CmpConfig& cfg, Rng& rng);

// Runs the battery over `instances` seeded instances of the given spec.
VerifyReport verify_model(const ModelSpec& spec, double alpha, int instances,
                          std::uint64_t seed);

}  // namespace cmperc
