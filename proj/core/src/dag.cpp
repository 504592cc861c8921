#include "wcett/dag.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <string>

namespace wcett {

namespace {

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(ids[i]);
  }
  return out;
}

}  // namespace

ProgramDag::ProgramDag(std::vector<int> vertices, std::vector<Edge> edges, int source,
                       int sink, std::vector<std::vector<int>> exclusions)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      source_(source),
      sink_(sink),
      exclusions_(std::move(exclusions)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vindex_.emplace(vertices_[i], static_cast<int>(i)).second) {
      throw BadIds("duplicate vertex id " + std::to_string(vertices_[i]));
    }
  }
  if (!vindex_.count(source_)) throw BadIds("unknown source vertex " + std::to_string(source_));
  if (!vindex_.count(sink_)) throw BadIds("unknown sink vertex " + std::to_string(sink_));

  // Edge ids must be dense 0..|E|-1; store edges indexed by id.
  std::vector<Edge> by_id(edges_.size(), Edge{-1, -1, -1});
  for (const Edge& e : edges_) {
    if (e.id < 0 || e.id >= static_cast<int>(edges_.size()) ||
        by_id[static_cast<std::size_t>(e.id)].id != -1) {
      throw BadIds("edge ids are not dense 0..|E|-1 (offending id " + std::to_string(e.id) +
                   ")");
    }
    if (!vindex_.count(e.from) || !vindex_.count(e.to)) {
      throw BadIds("edge " + std::to_string(e.id) + " references unknown vertex");
    }
    by_id[static_cast<std::size_t>(e.id)] = e;
  }
  edges_ = std::move(by_id);

  for (int v : vertices_) {
    out_[v];
    in_[v];
  }
  for (const Edge& e : edges_) {
    out_[e.from].push_back(e.id);
    in_[e.to].push_back(e.id);
  }
  for (auto& [v, ids] : out_) std::sort(ids.begin(), ids.end());
  for (auto& [v, ids] : in_) std::sort(ids.begin(), ids.end());

  for (auto& ex : exclusions_) {
    std::sort(ex.begin(), ex.end());
    ex.erase(std::unique(ex.begin(), ex.end()), ex.end());
    for (int id : ex) {
      if (id < 0 || id >= num_edges()) {
        throw BadIds("exclusion references unknown edge " + std::to_string(id));
      }
    }
  }
}

const std::vector<int>& ProgramDag::out_edges(int vertex) const {
  auto it = out_.find(vertex);
  if (it == out_.end()) throw BadIds("unknown vertex " + std::to_string(vertex));
  return it->second;
}

const std::vector<int>& ProgramDag::in_edges(int vertex) const {
  auto it = in_.find(vertex);
  if (it == in_.end()) throw BadIds("unknown vertex " + std::to_string(vertex));
  return it->second;
}

std::vector<int> ProgramDag::topo_order() const {
  std::unordered_map<int, int> indeg;
  for (int v : vertices_) indeg[v] = static_cast<int>(in_edges(v).size());
  std::priority_queue<int, std::vector<int>, std::greater<>> ready;
  for (int v : vertices_) {
    if (indeg[v] == 0) ready.push(v);
  }
  std::vector<int> order;
  order.reserve(vertices_.size());
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int eid : out_edges(v)) {
      int w = edge(eid).to;
      if (--indeg[w] == 0) ready.push(w);
    }
  }
  if (order.size() != vertices_.size()) {
    std::vector<int> stuck;
    for (int v : vertices_) {
      if (indeg[v] > 0) stuck.push_back(v);
    }
    throw CyclicGraph("graph contains a cycle through vertices {" + join_ids(stuck) + "}");
  }
  return order;
}

PathVec::PathVec(const ProgramDag& dag, std::vector<int> edge_ids)
    : edge_ids_(std::move(edge_ids)),
      incidence_(static_cast<std::size_t>(dag.num_edges()), 0) {
  if (edge_ids_.empty()) throw BadIds("empty path");
  int at = dag.source();
  for (int eid : edge_ids_) {
    if (eid < 0 || eid >= dag.num_edges()) {
      throw BadIds("path references unknown edge " + std::to_string(eid));
    }
    const Edge& e = dag.edge(eid);
    if (e.from != at) {
      throw BadIds("path is not a connected s->t walk at edge " + std::to_string(eid));
    }
    if (incidence_[static_cast<std::size_t>(eid)]) {
      throw BadIds("path repeats edge " + std::to_string(eid));
    }
    incidence_[static_cast<std::size_t>(eid)] = 1;
    at = e.to;
  }
  if (at != dag.sink()) throw BadIds("path does not end at the sink");
}

void validate(const ProgramDag& dag) {
  if (dag.source() == dag.sink()) throw BadIds("source equals sink");
  std::vector<int> order = dag.topo_order();  // throws CyclicGraph

  // Reachability s->v and v->t over vertices.
  std::set<int> from_s{dag.source()};
  for (int v : order) {
    if (!from_s.count(v)) continue;
    for (int eid : dag.out_edges(v)) from_s.insert(dag.edge(eid).to);
  }
  std::set<int> to_t{dag.sink()};
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (!to_t.count(*it)) continue;
    for (int eid : dag.in_edges(*it)) to_t.insert(dag.edge(eid).from);
  }
  std::vector<int> stranded;
  for (const Edge& e : dag.edges()) {
    if (!from_s.count(e.from) || !to_t.count(e.to)) stranded.push_back(e.id);
  }
  if (!stranded.empty()) {
    throw DisconnectedEdge("edges {" + join_ids(stranded) + "} lie on no source-to-sink path");
  }

  for (const auto& ex : dag.exclusions()) {
    if (ex.size() < 2) {
      throw BadIds("exclusion set {" + join_ids(ex) + "} has fewer than 2 edges");
    }
  }
}

std::uint64_t count_paths(const ProgramDag& dag) {
  std::unordered_map<int, std::uint64_t> ways;
  ways[dag.source()] = 1;
  for (int v : dag.topo_order()) {
    std::uint64_t w = ways.count(v) ? ways[v] : 0;
    if (w == 0) continue;
    for (int eid : dag.out_edges(v)) ways[dag.edge(eid).to] += w;
  }
  return ways.count(dag.sink()) ? ways[dag.sink()] : 0;
}

std::vector<PathVec> enumerate_paths(const ProgramDag& dag, EnumerateOptions opts) {
  std::uint64_t total = count_paths(dag);
  if (total > opts.cap) {
    throw TooManyPaths("graph holds " + std::to_string(total) + " paths, cap is " +
                       std::to_string(opts.cap));
  }
  std::vector<PathVec> result;
  std::vector<int> stack;
  // DFS taking out-edges in ascending id order yields lexicographic output.
  auto dfs = [&](auto&& self, int v) -> void {
    if (v == dag.sink()) {
      PathVec p(dag, stack);
      if (!opts.respect_exclusions || !violates_exclusions(dag, p)) {
        result.push_back(std::move(p));
      }
      return;
    }
    for (int eid : dag.out_edges(v)) {
      stack.push_back(eid);
      self(self, dag.edge(eid).to);
      stack.pop_back();
    }
  };
  dfs(dfs, dag.source());
  return result;
}

MergeResult merge_series(const ProgramDag& dag) {
  // Junction vertices survive; chains between junctions fuse into one edge.
  auto is_junction = [&](int v) {
    return v == dag.source() || v == dag.sink() || dag.in_edges(v).size() != 1 ||
           dag.out_edges(v).size() != 1;
  };

  std::vector<std::vector<int>> chains;
  for (const Edge& e : dag.edges()) {
    if (!is_junction(e.from)) continue;
    std::vector<int> chain{e.id};
    int at = e.to;
    while (!is_junction(at)) {
      int next = dag.out_edges(at)[0];
      chain.push_back(next);
      at = dag.edge(next).to;
    }
    chains.push_back(std::move(chain));
  }
  std::sort(chains.begin(), chains.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  std::vector<int> orig_to_merged(static_cast<std::size_t>(dag.num_edges()), -1);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < chains.size(); ++i) {
    const auto& chain = chains[i];
    edges.push_back(Edge{static_cast<int>(i), dag.edge(chain.front()).from,
                         dag.edge(chain.back()).to});
    for (int orig : chain) orig_to_merged[static_cast<std::size_t>(orig)] = static_cast<int>(i);
  }

  std::vector<int> vertices;
  for (int v : dag.vertices()) {
    if (is_junction(v)) vertices.push_back(v);
  }

  std::vector<std::vector<int>> exclusions;
  for (const auto& ex : dag.exclusions()) {
    std::vector<int> mapped;
    for (int id : ex) mapped.push_back(orig_to_merged[static_cast<std::size_t>(id)]);
    std::sort(mapped.begin(), mapped.end());
    mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
    exclusions.push_back(std::move(mapped));
  }

  return MergeResult{
      ProgramDag(std::move(vertices), std::move(edges), dag.source(), dag.sink(),
                 std::move(exclusions)),
      std::move(chains)};
}

ExtremePath extreme_path(const ProgramDag& dag, const EdgeWeights& weights, Sense sense) {
  if (static_cast<int>(weights.size()) != dag.num_edges()) {
    throw BadIds("weight vector length does not match |E|");
  }
  EdgeWeights w = weights;
  if (sense == Sense::Min) {
    for (double& x : w) x = -x;
  }

  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  std::unordered_map<int, double> best;  // best value from v to sink
  std::vector<int> order = dag.topo_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int v = *it;
    if (v == dag.sink()) {
      best[v] = 0.0;
      continue;
    }
    double b = kNegInf;
    for (int eid : dag.out_edges(v)) {
      double cand = best[dag.edge(eid).to];
      if (cand == kNegInf) continue;
      cand += w[static_cast<std::size_t>(eid)];
      if (cand > b) b = cand;
    }
    best[v] = b;
  }
  if (best[dag.source()] == kNegInf) {
    throw DisconnectedEdge("no source-to-sink path exists");
  }

  // Greedy walk taking the smallest edge id that attains the optimum gives
  // the lexicographically smallest optimal edge sequence.
  std::vector<int> ids;
  int at = dag.source();
  while (at != dag.sink()) {
    int pick = -1;
    for (int eid : dag.out_edges(at)) {
      double cand = best[dag.edge(eid).to];
      if (cand == kNegInf) continue;
      cand += w[static_cast<std::size_t>(eid)];
      if (cand == best[at]) {
        pick = eid;
        break;
      }
    }
    if (pick < 0) throw NumericFailure("extreme_path reconstruction failed");
    ids.push_back(pick);
    at = dag.edge(pick).to;
  }

  double value = best[dag.source()];
  if (sense == Sense::Min) value = -value;
  return ExtremePath{PathVec(dag, std::move(ids)), value};
}

double path_length(const EdgeWeights& weights, const PathVec& path) {
  double sum = 0.0;
  for (int eid : path.edges()) sum += weights[static_cast<std::size_t>(eid)];
  return sum;
}

bool violates_exclusions(const ProgramDag& dag, const PathVec& path) {
  return unsat_core(dag, path).has_value();
}

std::optional<std::vector<int>> unsat_core(const ProgramDag& dag, const PathVec& path) {
  std::optional<std::vector<int>> core;
  for (const auto& ex : dag.exclusions()) {
    bool hit = !ex.empty() &&
               std::all_of(ex.begin(), ex.end(), [&](int id) { return path.contains(id); });
    if (!hit) continue;
    if (!core || ex.size() < core->size() || (ex.size() == core->size() && ex < *core)) {
      core = ex;
    }
  }
  return core;
}

}  // namespace wcett
