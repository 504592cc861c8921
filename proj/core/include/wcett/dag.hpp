#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "wcett/errors.hpp"

namespace wcett {

struct Edge {
  int id;
  int from;
  int to;
};

/// Per-edge costs in cycles, indexed by edge id.
using EdgeWeights = std::vector<double>;

/// Unrolled program graph: a DAG with a designated source and sink.
///
/// Edge ids are dense 0..|E|-1 so they can index weight and incidence
/// vectors directly. Exclusion sets declare groups of edges that may not
/// all co-occur on one feasible path. Instances are immutable values after
/// construction.
class ProgramDag {
 public:
  ProgramDag(std::vector<int> vertices, std::vector<Edge> edges, int source, int sink,
             std::vector<std::vector<int>> exclusions = {});

  const std::vector<int>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_[static_cast<std::size_t>(id)]; }
  int source() const { return source_; }
  int sink() const { return sink_; }
  const std::vector<std::vector<int>>& exclusions() const { return exclusions_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  /// Outgoing/incoming edge ids of a vertex, sorted ascending.
  const std::vector<int>& out_edges(int vertex) const;
  const std::vector<int>& in_edges(int vertex) const;

  bool has_vertex(int vertex) const { return vindex_.count(vertex) != 0; }

  /// Vertex ids in a topological order (smallest-id-first among ready
  /// vertices). Throws CyclicGraph.
  std::vector<int> topo_order() const;

 private:
  std::vector<int> vertices_;
  std::vector<Edge> edges_;
  int source_;
  int sink_;
  std::vector<std::vector<int>> exclusions_;
  std::unordered_map<int, std::vector<int>> out_;
  std::unordered_map<int, std::vector<int>> in_;
  std::unordered_map<int, int> vindex_;
};

/// A source-to-sink path: ordered edge list plus 0/1 incidence vector.
class PathVec {
 public:
  /// Empty placeholder; real paths come from the validating constructor.
  PathVec() = default;

  /// Verifies the edges form a connected s->t walk of the given dag.
  PathVec(const ProgramDag& dag, std::vector<int> edge_ids);

  const std::vector<int>& edges() const { return edge_ids_; }
  int size() const { return static_cast<int>(edge_ids_.size()); }
  bool contains(int edge_id) const {
    return incidence_[static_cast<std::size_t>(edge_id)] != 0;
  }
  /// Incidence over all |E| edges of the owning dag.
  const std::vector<std::uint8_t>& incidence() const { return incidence_; }

  friend bool operator==(const PathVec& a, const PathVec& b) {
    return a.edge_ids_ == b.edge_ids_;
  }
  friend auto operator<=>(const PathVec& a, const PathVec& b) {
    return a.edge_ids_ <=> b.edge_ids_;
  }

 private:
  std::vector<int> edge_ids_;
  std::vector<std::uint8_t> incidence_;
};

/// Checks all ProgramDag invariants: acyclicity, every edge on some s->t
/// path, source != sink, exclusion sets of size >= 2 with in-range ids.
/// Throws CyclicGraph, DisconnectedEdge or BadIds naming the offenders.
void validate(const ProgramDag& dag);

struct EnumerateOptions {
  bool respect_exclusions = false;
  std::uint64_t cap = 1'000'000;
};

/// All s->t paths in lexicographic edge-id order. Throws TooManyPaths if
/// the graph holds more than opts.cap paths.
std::vector<PathVec> enumerate_paths(const ProgramDag& dag, EnumerateOptions opts = {});

/// Number of s->t paths ignoring exclusions (DP over a topological order).
std::uint64_t count_paths(const ProgramDag& dag);

struct MergeResult {
  ProgramDag dag;
  /// merged edge id -> ordered list of original edge ids
  std::vector<std::vector<int>> edge_map;
};

/// Fuses series edges: every internal vertex with in-degree 1 and
/// out-degree 1 is eliminated. Path count is preserved and exclusion sets
/// are rewritten onto merged edges (note a rewritten set can collapse
/// below two edges; such a set forbids the lone merged edge outright).
MergeResult merge_series(const ProgramDag& dag);

enum class Sense { Max, Min };

struct ExtremePath {
  PathVec path;
  double value;
};

/// DP longest/shortest s->t path; weights may be negative. Ties broken by
/// the lexicographically smallest edge-id sequence.
ExtremePath extreme_path(const ProgramDag& dag, const EdgeWeights& weights, Sense sense);

/// Sum of weights over the path's edges.
double path_length(const EdgeWeights& weights, const PathVec& path);

/// True iff the path contains every edge of some exclusion set.
bool violates_exclusions(const ProgramDag& dag, const PathVec& path);

/// The violated exclusion set of minimal cardinality (lowest lexicographic
/// on ties), or nullopt for a feasible path.
std::optional<std::vector<int>> unsat_core(const ProgramDag& dag, const PathVec& path);

}  // namespace wcett
