#include "wcett/platform.hpp"

#include <algorithm>
#include <cmath>

namespace wcett {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform in [0,1); stable across platforms (no std::distribution).
double uniform01(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

std::uint64_t fnv1a(const std::vector<int>& ids) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int id : ids) {
    for (int shift = 0; shift < 32; shift += 8) {
      h ^= static_cast<std::uint64_t>((static_cast<std::uint32_t>(id) >> shift) & 0xff);
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace

void MeasurementSet::upsert(PathVec path, double length) {
  for (Measurement& m : records_) {
    if (m.path == path) {
      m.length = length;
      return;
    }
  }
  records_.push_back(Measurement{std::move(path), length});
}

void MeasurementSet::append_raw(PathVec path, double length) {
  records_.push_back(Measurement{std::move(path), length});
}

std::optional<double> MeasurementSet::length_of(const PathVec& path) const {
  for (const Measurement& m : records_) {
    if (m.path == path) return m.length;
  }
  return std::nullopt;
}

double true_baseline(const PlatformModel& platform, const PathVec& path) {
  return path_length(platform.true_weights, path);
}

double measure(const PlatformModel& platform, const PathVec& path) {
  double d = 0.0;
  switch (platform.law) {
    case PerturbationLaw::Uniform: {
      // Stream keyed by (seed, path identity): order-independent draws.
      std::uint64_t state = platform.seed ^ fnv1a(path.edges());
      d = platform.mu_max * (2.0 * uniform01(state) - 1.0);
      break;
    }
    case PerturbationLaw::Adversarial: {
      for (const auto& [edges, dx] : platform.adversarial) {
        if (edges == path.edges()) {
          d = dx;
          break;
        }
      }
      break;
    }
  }
  if (std::abs(d) > platform.mu_max) {
    throw Error("perturbation exceeds mu_max");
  }
  return true_baseline(platform, path) + d;
}

MeasurementSet measure_all(const PlatformModel& platform,
                           const std::vector<PathVec>& paths) {
  MeasurementSet set;
  for (const PathVec& p : paths) set.upsert(p, measure(platform, p));
  return set;
}

MeasurementSet perturb(const MeasurementSet& measurements, double percent,
                       std::uint64_t seed) {
  if (percent < 0) throw Error("perturbation percent must be >= 0");
  MeasurementSet out;
  std::uint64_t idx = 0;
  for (const Measurement& m : measurements.records()) {
    std::uint64_t state = seed ^ (0x51ed2701a3c5e891ULL * ++idx);
    double u = (percent / 100.0) * (2.0 * uniform01(state) - 1.0);
    out.append_raw(m.path, m.length * (1.0 + u));
  }
  return out;
}

ProgramDag make_diamond_chain(int n) {
  if (n < 1) throw Error("diamond chain needs n >= 1");
  // join_i = 3i, top_i = 3i+1, bot_i = 3i+2.
  std::vector<int> vertices;
  std::vector<Edge> edges;
  for (int i = 0; i <= n; ++i) vertices.push_back(3 * i);
  for (int i = 0; i < n; ++i) {
    vertices.push_back(3 * i + 1);
    vertices.push_back(3 * i + 2);
    edges.push_back(Edge{4 * i + 0, 3 * i, 3 * i + 1});
    edges.push_back(Edge{4 * i + 1, 3 * i + 1, 3 * i + 3});
    edges.push_back(Edge{4 * i + 2, 3 * i, 3 * i + 2});
    edges.push_back(Edge{4 * i + 3, 3 * i + 2, 3 * i + 3});
  }
  std::sort(vertices.begin(), vertices.end());
  return ProgramDag(std::move(vertices), std::move(edges), 0, 3 * n);
}

ProgramDag make_layered(const LayeredParams& params, std::uint64_t seed) {
  if (params.layers < 1 || params.width < 1) throw Error("bad layered params");
  std::uint64_t state = seed ^ 0xa24baed4963ee407ULL;

  // Vertex ids: 0 = source, then layer-major internals, then sink.
  std::vector<std::vector<int>> layer(static_cast<std::size_t>(params.layers) + 2);
  layer[0] = {0};
  int next = 1;
  for (int l = 1; l <= params.layers; ++l) {
    for (int w = 0; w < params.width; ++w) layer[static_cast<std::size_t>(l)].push_back(next++);
  }
  int sink = next;
  layer[static_cast<std::size_t>(params.layers) + 1] = {sink};

  std::vector<std::pair<int, int>> arcs;
  auto has_arc = [&](int u, int v) {
    return std::find(arcs.begin(), arcs.end(), std::make_pair(u, v)) != arcs.end();
  };
  for (std::size_t l = 0; l + 1 < layer.size(); ++l) {
    for (int u : layer[l]) {
      for (int v : layer[l + 1]) {
        if (uniform01(state) < params.edge_prob) arcs.emplace_back(u, v);
      }
    }
    // Every vertex needs at least one outgoing and every successor at
    // least one incoming arc; patch with a pseudo-random partner.
    for (int u : layer[l]) {
      bool any = std::any_of(arcs.begin(), arcs.end(),
                             [&](const auto& a) { return a.first == u; });
      if (!any) {
        int v = layer[l + 1][static_cast<std::size_t>(
            uniform01(state) * static_cast<double>(layer[l + 1].size()))];
        arcs.emplace_back(u, v);
      }
    }
    for (int v : layer[l + 1]) {
      bool any = std::any_of(arcs.begin(), arcs.end(),
                             [&](const auto& a) { return a.second == v; });
      if (!any) {
        int u = layer[l][static_cast<std::size_t>(
            uniform01(state) * static_cast<double>(layer[l].size()))];
        if (!has_arc(u, v)) arcs.emplace_back(u, v);
      }
    }
  }

  std::vector<int> vertices;
  for (const auto& l : layer) vertices.insert(vertices.end(), l.begin(), l.end());
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    edges.push_back(Edge{static_cast<int>(i), arcs[i].first, arcs[i].second});
  }
  return ProgramDag(std::move(vertices), std::move(edges), 0, sink);
}

EdgeWeights random_weights(int num_edges, std::uint64_t seed) {
  std::uint64_t state = seed ^ 0x6c62272e07bb0142ULL;
  EdgeWeights w(static_cast<std::size_t>(num_edges));
  for (double& x : w) x = std::floor(uniform01(state) * 100.0) + 1.0;
  return w;
}

}  // namespace wcett
