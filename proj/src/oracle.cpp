#include "hme/oracle.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <stdexcept>
#include <unordered_set>

#include "hme/grid.hpp"

namespace hme {

// ---------------------------------------------------------------------------
// OracleGraph
// ---------------------------------------------------------------------------

OracleGraph::OracleGraph(OracleManifest manifest, std::vector<Config> sorted_nodes,
                         std::vector<std::pair<std::uint32_t, std::uint32_t>> edges)
    : manifest_(std::move(manifest)), nodes_(std::move(sorted_nodes)) {
  index_.reserve(nodes_.size() * 2);
  for (std::uint32_t i = 0; i < nodes_.size(); ++i) {
    if (i > 0 && !(nodes_[i - 1] < nodes_[i]))
      throw std::invalid_argument("OracleGraph: nodes must be sorted and unique");
    index_.emplace(nodes_[i], i);
  }
  const std::uint32_t n = std::uint32_t(nodes_.size());
  auto build_csr = [&](bool forward, std::vector<std::uint32_t>& offsets,
                       std::vector<std::uint32_t>& targets) {
    offsets.assign(n + 1, 0);
    for (const auto& [u, v] : edges) ++offsets[(forward ? u : v) + 1];
    for (std::uint32_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    targets.resize(edges.size());
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (const auto& [u, v] : edges)
      targets[cursor[forward ? u : v]++] = forward ? v : u;
    for (std::uint32_t i = 0; i < n; ++i)
      std::sort(targets.begin() + offsets[i], targets.begin() + offsets[i + 1]);
  };
  build_csr(true, out_offsets_, out_targets_);
  build_csr(false, in_offsets_, in_targets_);
}

std::optional<std::uint32_t> OracleGraph::find(Config c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t OracleGraph::index_of(Config c) const {
  const auto it = index_.find(c);
  if (it == index_.end())
    throw std::invalid_argument("OracleGraph: configuration is not a node");
  return it->second;
}

std::span<const std::uint32_t> OracleGraph::out_neighbors(std::uint32_t idx) const {
  return {out_targets_.data() + out_offsets_[idx],
          out_targets_.data() + out_offsets_[idx + 1]};
}

std::span<const std::uint32_t> OracleGraph::in_neighbors(std::uint32_t idx) const {
  return {in_targets_.data() + in_offsets_[idx],
          in_targets_.data() + in_offsets_[idx + 1]};
}

bool OracleGraph::has_edge(Config from, Config to) const {
  const auto u = find(from), v = find(to);
  if (!u || !v) return false;
  const auto nb = out_neighbors(*u);
  return std::binary_search(nb.begin(), nb.end(), *v);
}

// ---------------------------------------------------------------------------
// Reachable-space enumeration
// ---------------------------------------------------------------------------
//
// Exhaustive search over raw grid states is hopeless (picking 5 of 169
// columns alone gives ~1e9 states), so the search runs on equivalence
// classes instead. Blocks are grouped into clusters connected by the close
// relation; cluster-internal geometry is what the projection and future
// moves can depend on, while mutually far clusters interact with nothing.
// A state is therefore encoded as the multiset of its clusters, each
// normalized by translation and (optionally) the 8 plan isometries, and
// separate clusters are re-laid out at standard far-apart offsets.
// Destinations are limited to spots that can matter: cells within close
// range of a remaining block (any such column's stacking top), bridge spots
// on equal-height adjacent columns, and one representative isolated spot.

namespace {

struct Key16 {
  std::uint64_t a = 0, b = 0;
  friend bool operator==(const Key16&, const Key16&) = default;
};
struct Key16Hash {
  std::size_t operator()(const Key16& k) const noexcept {
    std::uint64_t z = k.a * 0x9e3779b97f4a7c15ULL ^ k.b;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    return std::size_t(z ^ (z >> 31));
  }
};

constexpr int kClusterSpacing = 48;  // relayout distance between clusters
constexpr int kMaxBlocks = 5;        // key encoding supports up to 5 blocks

using Placements = std::array<GridPos, kMaxBlocks>;

struct Enumerator {
  const SemanticSpace& sp;
  const OracleManifest& mf;
  int n;

  explicit Enumerator(const SemanticSpace& s, const OracleManifest& m)
      : sp(s), mf(m), n(s.num_objects()) {}

  PlacementView view(const Placements& p) const { return {p.data(), size_t(n)}; }

  // --- canonical key ------------------------------------------------------

  // Encodes one cluster, blocks in id order, two bytes per block,
  // minimized over the plan isometries. Returns false if the cluster
  // cannot fit the plan.
  bool encode_cluster(const Placements& st, const std::array<ObjectId, kMaxBlocks>& members,
                      int count, std::array<std::uint8_t, 11>& out, int& out_len) const {
    // bounding box is isometry-invariant up to swapping width/height
    int minx = INT32_MAX, miny = INT32_MAX, maxx = INT32_MIN, maxy = INT32_MIN;
    for (int k = 0; k < count; ++k) {
      const GridPos& p = st[members[k]];
      for (int c = 0; c < p.cell_count(); ++c) {
        const auto [cx, cy] = p.cell(c);
        minx = std::min(minx, cx), maxx = std::max(maxx, cx);
        miny = std::min(miny, cy), maxy = std::max(maxy, cy);
      }
    }
    const int w = maxx - minx, h = maxy - miny;
    if (w >= mf.plan_extent || h >= mf.plan_extent || w >= 16 || h >= 16)
      return false;

    const int num_isos = 8;
    std::array<std::uint8_t, 11> best{};
    bool have_best = false;
    for (int iso = 0; iso < num_isos; ++iso) {
      std::array<std::uint8_t, 11> enc{};
      int tminx = INT32_MAX, tminy = INT32_MAX;
      auto tf = [&](int x, int y) -> std::pair<int, int> {
        switch (iso) {
          case 0: return {x, y};
          case 1: return {y, -x};
          case 2: return {-x, -y};
          case 3: return {-y, x};
          case 4: return {-x, y};
          case 5: return {y, x};
          case 6: return {x, -y};
          default: return {-y, -x};
        }
      };
      for (int k = 0; k < count; ++k) {
        const GridPos& p = st[members[k]];
        for (int c = 0; c < p.cell_count(); ++c) {
          const auto [cx, cy] = p.cell(c);
          const auto [tx, ty] = tf(cx, cy);
          tminx = std::min(tminx, tx);
          tminy = std::min(tminy, ty);
        }
      }
      for (int k = 0; k < count; ++k) {
        const GridPos& p = st[members[k]];
        auto [ax, ay] = tf(p.x, p.y);
        ax -= tminx, ay -= tminy;
        int dir = 0;
        if (p.kind == GridPos::Kind::bridge) {
          auto [bx, by] = tf(p.x2, p.y2);
          bx -= tminx, by -= tminy;
          if (std::pair{bx, by} < std::pair{ax, ay}) std::swap(ax, bx), std::swap(ay, by);
          dir = (by == ay + 1) ? 1 : 0;
          (void)bx;
        }
        enc[2 * k] = std::uint8_t(members[k] | (int(p.kind) << 3) | (dir << 4) |
                                  (p.level << 5));
        enc[2 * k + 1] = std::uint8_t((ax << 4) | ay);
      }
      if (!have_best || std::lexicographical_compare(enc.begin(), enc.begin() + 2 * count,
                                                     best.begin(), best.begin() + 2 * count)) {
        best = enc;
        have_best = true;
      }
    }
    out = best;
    out_len = 2 * count;
    return true;
  }

  // Canonical 16-byte key of a state, or nullopt when some cluster cannot
  // fit the plan bounds.
  std::optional<Key16> canonical_key(const Placements& st) const {
    // close-components by union-find
    std::array<int, kMaxBlocks> parent;
    for (int i = 0; i < n; ++i) parent[i] = i;
    auto root = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (placements_close(st[i], st[j])) parent[root(i)] = root(j);

    struct Cluster {
      std::array<std::uint8_t, 12> bytes{};  // size prefix + encoding
      int len = 0;
    };
    std::array<Cluster, kMaxBlocks> clusters;
    int num_clusters = 0;
    for (int r = 0; r < n; ++r) {
      if (root(r) != r) continue;
      std::array<ObjectId, kMaxBlocks> members{};
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (root(i) == r) members[count++] = i;
      std::array<std::uint8_t, 11> enc{};
      int enc_len = 0;
      if (!encode_cluster(st, members, count, enc, enc_len)) return std::nullopt;
      Cluster& cl = clusters[num_clusters++];
      cl.bytes[0] = std::uint8_t(count);
      std::copy(enc.begin(), enc.begin() + enc_len, cl.bytes.begin() + 1);
      cl.len = enc_len + 1;
    }
    std::sort(clusters.begin(), clusters.begin() + num_clusters,
              [](const Cluster& a, const Cluster& b) {
                return std::lexicographical_compare(a.bytes.begin(), a.bytes.begin() + a.len,
                                                    b.bytes.begin(), b.bytes.begin() + b.len);
              });
    std::array<std::uint8_t, 16> buf{};
    int pos = 0;
    for (int k = 0; k < num_clusters; ++k) {
      std::copy(clusters[k].bytes.begin(), clusters[k].bytes.begin() + clusters[k].len,
                buf.begin() + pos);
      pos += clusters[k].len;
    }
    Key16 key;
    for (int i = 0; i < 8; ++i) key.a |= std::uint64_t(buf[i]) << (8 * i);
    for (int i = 0; i < 8; ++i) key.b |= std::uint64_t(buf[8 + i]) << (8 * i);
    return key;
  }

  // Rebuilds placements from a key, clusters laid out far apart.
  Placements decode(const Key16& key) const {
    std::array<std::uint8_t, 16> buf{};
    for (int i = 0; i < 8; ++i) buf[i] = std::uint8_t(key.a >> (8 * i));
    for (int i = 0; i < 8; ++i) buf[8 + i] = std::uint8_t(key.b >> (8 * i));
    Placements st{};
    int pos = 0, cluster = 0, placed = 0;
    while (placed < n) {
      const int count = buf[pos++];
      const int off = cluster * kClusterSpacing;
      for (int k = 0; k < count; ++k) {
        const std::uint8_t b0 = buf[pos++], b1 = buf[pos++];
        const ObjectId block = b0 & 7;
        const bool bridge = (b0 >> 3) & 1;
        const int dir = (b0 >> 4) & 1;
        const int level = b0 >> 5;
        const int x = (b1 >> 4) + off, y = b1 & 15;
        st[block] = bridge ? GridPos::bridge_at(x, y, x + (dir ? 0 : 1),
                                                y + (dir ? 1 : 0), level)
                           : GridPos::cell_at(x, y, level);
        ++placed;
      }
      ++cluster;
    }
    return st;
  }

  // --- move generation -----------------------------------------------------

  int column_height(const Placements& st, int skip, int cx, int cy) const {
    int h = 0;
    for (int b = 0; b < n; ++b) {
      if (b == skip) continue;
      for (int c = 0; c < st[b].cell_count(); ++c) {
        const auto [x, y] = st[b].cell(c);
        if (x == cx && y == cy) h = std::max(h, st[b].level + 1);
      }
    }
    return h;
  }

  template <typename Fn>
  void each_destination(const Placements& st, ObjectId mover, Fn&& emit) const {
    // candidate cells: within close range of some remaining block
    std::array<std::pair<int, int>, 256> cand{};
    int num_cand = 0;
    for (int b = 0; b < n; ++b) {
      if (b == mover) continue;
      for (int c = 0; c < st[b].cell_count(); ++c) {
        const auto [bx, by] = st[b].cell(c);
        for (int dx = -2; dx <= 2; ++dx)
          for (int dy = -2; dy <= 2; ++dy) cand[num_cand++] = {bx + dx, by + dy};
      }
    }
    std::sort(cand.begin(), cand.begin() + num_cand);
    num_cand = int(std::unique(cand.begin(), cand.begin() + num_cand) - cand.begin());

    for (int k = 0; k < num_cand; ++k) {
      const auto [cx, cy] = cand[k];
      const int lvl = column_height(st, mover, cx, cy);
      if (lvl >= mf.max_levels) continue;
      const GridPos dest = GridPos::cell_at(cx, cy, lvl);
      if (dest == st[mover]) continue;
      emit(dest);
    }

    if (mf.allow_bridges) {
      for (int k = 0; k < num_cand; ++k) {
        const auto [cx, cy] = cand[k];
        const int h = column_height(st, mover, cx, cy);
        if (h < 1 || h >= mf.max_levels) continue;
        const std::pair<int, int> nbr[2] = {{cx + 1, cy}, {cx, cy + 1}};
        for (const auto [nx, ny] : nbr) {
          if (column_height(st, mover, nx, ny) != h) continue;
          const GridPos dest = GridPos::bridge_at(cx, cy, nx, ny, h);
          if (dest == st[mover]) continue;
          emit(dest);
        }
      }
    }

    // representative isolated spot, unless the mover is already isolated
    bool isolated = st[mover].kind == GridPos::Kind::cell && st[mover].level == 0;
    if (isolated)
      for (int b = 0; b < n && isolated; ++b)
        if (b != mover && placements_close(st[b], st[mover])) isolated = false;
    if (!isolated) emit(GridPos::cell_at(100000, 0, 0));
  }

  OracleGraph run(OracleBuildStats* stats) const {
    const auto t0 = std::chrono::steady_clock::now();

    Placements rootp{};
    for (int b = 0; b < n; ++b) rootp[b] = GridPos::cell_at(b * kClusterSpacing, 0, 0);
    const auto root_key = canonical_key(rootp);
    if (!root_key)
      throw std::invalid_argument("enumerate_reachable: plan too small to host the root");

    std::unordered_set<Key16, Key16Hash> visited;
    std::vector<Key16> queue;
    std::unordered_set<std::uint32_t> node_set;
    std::unordered_set<std::uint64_t> edge_set;
    visited.reserve(1 << 20);
    node_set.reserve(1 << 17);
    edge_set.reserve(1 << 22);

    visited.insert(*root_key);
    queue.push_back(*root_key);
    std::uint64_t moves = 0;

    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Placements st = decode(queue[head]);
      const Config from = project_placements(sp, view(st));
      node_set.insert(std::uint32_t(from.bits));

      for (ObjectId mover = 0; mover < n; ++mover) {
        if (is_covered(view(st), mover)) continue;
        each_destination(st, mover, [&](const GridPos& dest) {
          ++moves;
          Placements ns = st;
          ns[mover] = dest;
          const auto key = canonical_key(ns);
          if (!key) return;
          const Config to = project_placements(sp, view(ns));
          node_set.insert(std::uint32_t(to.bits));
          if (to != from)
            edge_set.insert(std::uint64_t(from.bits) << 32 | to.bits);
          if (visited.insert(*key).second) queue.push_back(*key);
        });
      }
    }

    std::vector<Config> nodes;
    nodes.reserve(node_set.size());
    for (std::uint32_t bits : node_set) nodes.push_back(Config{bits});
    std::sort(nodes.begin(), nodes.end());
    std::unordered_map<Config, std::uint32_t, ConfigHash> index;
    index.reserve(nodes.size() * 2);
    for (std::uint32_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(edge_set.size());
    for (std::uint64_t e : edge_set)
      edges.emplace_back(index.at(Config{e >> 32}), index.at(Config{e & 0xffffffffu}));
    std::sort(edges.begin(), edges.end());

    if (stats) {
      stats->states_explored = queue.size();
      stats->moves_explored = moves;
      stats->seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - t0).count();
    }
    return OracleGraph(mf, std::move(nodes), std::move(edges));
  }
};

}  // namespace

OracleGraph enumerate_reachable(const SemanticSpace& sp, const OracleManifest& manifest,
                                OracleBuildStats* stats) {
  if (sp.num_objects() != manifest.num_objects)
    throw std::invalid_argument("enumerate_reachable: manifest/space block count mismatch");
  if (sp.num_objects() > kMaxBlocks)
    throw std::invalid_argument("enumerate_reachable: supports at most 5 blocks");
  if (manifest.plan_extent < 3)
    throw std::invalid_argument("enumerate_reachable: plan too small to host the root");
  if (manifest.plan_extent > 16)
    throw std::invalid_argument("enumerate_reachable: plan extent above 16 unsupported");
  if (manifest.max_levels < 1 || manifest.max_levels > 7)
    throw std::invalid_argument("enumerate_reachable: max_levels out of range");
  // verify the bounded real grid can host the all-far reset
  GridModel(sp, manifest.plan_extent, manifest.max_levels, manifest.allow_bridges)
      .root_state();
  return Enumerator(sp, manifest).run(stats);
}

}  // namespace hme
