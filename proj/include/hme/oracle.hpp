#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "hme/semantic.hpp"

namespace hme {

// Build parameters recorded with every oracle graph so that artifacts are
// reproducible bit for bit.
struct OracleManifest {
  int num_objects = 5;
  int plan_extent = 13;
  int max_levels = 5;
  bool allow_bridges = true;
  // fixed model thresholds, recorded for the build record
  int close_sq_dist = 4;
  int close_max_level_diff = 1;
  std::string canonicalization = "per-cluster translation+rotation+reflection";

  friend bool operator==(const OracleManifest&, const OracleManifest&) = default;
};

struct OracleBuildStats {
  std::uint64_t states_explored = 0;
  std::uint64_t moves_explored = 0;
  double seconds = 0.0;
};

// The social partner's graph over every reachable semantic configuration.
// Directed edges connect configurations one legal single-block move apart.
// Immutable once built; nodes are sorted lexicographically and addressed by
// dense index.
class OracleGraph {
 public:
  OracleGraph() = default;
  OracleGraph(OracleManifest manifest, std::vector<Config> sorted_nodes,
              std::vector<std::pair<std::uint32_t, std::uint32_t>> edges);

  const OracleManifest& manifest() const { return manifest_; }
  std::size_t num_nodes() const { return nodes_.size(); }
  std::size_t num_edges() const { return out_targets_.size(); }
  const std::vector<Config>& nodes() const { return nodes_; }
  Config node(std::uint32_t idx) const { return nodes_[idx]; }

  bool has_node(Config c) const { return index_.count(c) != 0; }
  std::optional<std::uint32_t> find(Config c) const;
  std::uint32_t index_of(Config c) const;  // throws if absent

  std::span<const std::uint32_t> out_neighbors(std::uint32_t idx) const;
  std::span<const std::uint32_t> in_neighbors(std::uint32_t idx) const;
  bool has_edge(Config from, Config to) const;

  Config root() const { return Config{}; }  // the all-far configuration
  std::uint32_t root_index() const { return index_of(root()); }

 private:
  OracleManifest manifest_;
  std::vector<Config> nodes_;
  std::unordered_map<Config, std::uint32_t, ConfigHash> index_;
  std::vector<std::uint32_t> out_offsets_, out_targets_;
  std::vector<std::uint32_t> in_offsets_, in_targets_;
};

// Breadth-first closure of the feasibility model from the all-far root.
// Grid states are explored up to a semantics-preserving quotient: blocks are
// grouped into proximity clusters, each cluster is canonicalized by plan
// translation plus rotation/reflection, and mutually far clusters are kept
// at normalized separations. Every explored legal move contributes an edge
// between the projected configurations of its endpoint states.
OracleGraph enumerate_reachable(const SemanticSpace& sp,
                                const OracleManifest& manifest,
                                OracleBuildStats* stats = nullptr);

}  // namespace hme
