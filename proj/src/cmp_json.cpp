#include "cmperc/cmp.hpp"

#include "json.hpp"

namespace cmperc {

std::string cmp_result_to_json(const WeightedGraph& g, const CmpResult& result,
                               const CmpConfig& cfg, int indent) {
  nlohmann::ordered_json j;
  j["n"] = g.n;
  j["alpha"] = cfg.alpha;
  j["cluster_count"] = result.partition.cluster_count();
  nlohmann::ordered_json clusters = nlohmann::ordered_json::array();
  for (Vertex root : result.cluster_index) {
    nlohmann::ordered_json c;
    c["root"] = root;
    c["weight"] = result.partition.root_weight(root);
    c["members"] = result.partition.members(root);
    clusters.push_back(std::move(c));
  }
  j["clusters"] = std::move(clusters);
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (auto [a, b] : result.oriented_edges) {
    edges.push_back(nlohmann::ordered_json::array({a, b}));
  }
  j["oriented_edges"] = std::move(edges);
  return j.dump(indent) + "\n";
}

}  // namespace cmperc
