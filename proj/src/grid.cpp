#include "hme/grid.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace hme {

GridPos GridPos::bridge_at(int x, int y, int x2, int y2, int level) {
  if (std::pair{x2, y2} < std::pair{x, y}) {
    std::swap(x, x2);
    std::swap(y, y2);
  }
  if (std::abs(x2 - x) + std::abs(y2 - y) != 1)
    throw std::invalid_argument("bridge cells must be horizontally adjacent");
  return GridPos{Kind::bridge, x, y, level, x2, y2};
}

bool operator<(const GridPos& a, const GridPos& b) {
  const auto tup = [](const GridPos& p) {
    return std::tuple(int(p.kind), p.x, p.y, p.level, p.x2, p.y2);
  };
  return tup(a) < tup(b);
}

bool placements_close(const GridPos& a, const GridPos& b) {
  if (std::abs(a.level - b.level) > kCloseMaxLevelDiff) return false;
  const auto [ax, ay] = a.center2();
  const auto [bx, by] = b.center2();
  const long dx = ax - bx, dy = ay - by;
  return dx * dx + dy * dy <= kCloseSqDistDoubled;
}

ObjectId occupant(PlacementView s, int x, int y, int level) {
  for (ObjectId b = 0; b < ObjectId(s.size()); ++b) {
    if (s[b].level != level) continue;
    for (int c = 0; c < s[b].cell_count(); ++c) {
      const auto [cx, cy] = s[b].cell(c);
      if (cx == x && cy == y) return b;
    }
  }
  return -1;
}

std::vector<ObjectId> supports_of(PlacementView s, ObjectId b) {
  std::vector<ObjectId> out;
  if (s[b].level == 0) return out;
  for (int c = 0; c < s[b].cell_count(); ++c) {
    const auto [cx, cy] = s[b].cell(c);
    const ObjectId o = occupant(s, cx, cy, s[b].level - 1);
    if (o >= 0 && std::find(out.begin(), out.end(), o) == out.end())
      out.push_back(o);
  }
  return out;
}

bool is_covered(PlacementView s, ObjectId b) {
  for (int c = 0; c < s[b].cell_count(); ++c) {
    const auto [cx, cy] = s[b].cell(c);
    if (occupant(s, cx, cy, s[b].level + 1) >= 0) return true;
  }
  return false;
}

Config project_placements(const SemanticSpace& sp, PlacementView s) {
  Config cfg;
  const int n = int(s.size());
  for (ObjectId i = 0; i < n; ++i)
    for (ObjectId j = i + 1; j < n; ++j)
      if (placements_close(s[i], s[j]))
        cfg.set(sp.predicate_index(Predicate::close, i, j), true);
  for (ObjectId b = 0; b < n; ++b)
    for (ObjectId under : supports_of(s, b))
      cfg.set(sp.predicate_index(Predicate::above, b, under), true);
  return cfg;
}

GridModel::GridModel(const SemanticSpace& sp, int plan_extent, int max_levels,
                     bool allow_bridges)
    : sp_(&sp),
      plan_extent_(plan_extent),
      max_levels_(max_levels > 0 ? max_levels : sp.num_objects()),
      allow_bridges_(allow_bridges) {
  if (plan_extent_ < 1) throw std::invalid_argument("GridModel: empty plan");
}

GridState GridModel::root_state() const {
  // far = squared distance > 4, so spacing 3 suffices
  GridState s;
  const int per_row = (plan_extent_ + 2) / 3;
  for (ObjectId b = 0; b < sp_->num_objects(); ++b) {
    const int x = 3 * (b % per_row), y = 3 * (b / per_row);
    if (x >= plan_extent_ || y >= plan_extent_)
      throw std::invalid_argument("GridModel: plan too small to host the all-far root");
    s.push_back(GridPos::cell_at(x, y, 0));
  }
  return s;
}

bool GridModel::in_bounds(const GridPos& p) const {
  for (int c = 0; c < p.cell_count(); ++c) {
    const auto [cx, cy] = p.cell(c);
    if (cx < 0 || cy < 0 || cx >= plan_extent_ || cy >= plan_extent_) return false;
  }
  return p.level >= 0 && p.level < max_levels_;
}

void GridModel::validate(const GridState& s) const {
  if (int(s.size()) != sp_->num_objects())
    throw std::invalid_argument("grid state: wrong number of blocks");
  for (ObjectId b = 0; b < ObjectId(s.size()); ++b) {
    const GridPos& p = s[b];
    if (!in_bounds(p)) throw std::invalid_argument("grid state: block out of bounds");
    if (p.kind == GridPos::Kind::bridge) {
      if (!allow_bridges_)
        throw std::invalid_argument("grid state: bridges disabled");
      if (std::abs(p.x2 - p.x) + std::abs(p.y2 - p.y) != 1 ||
          std::pair{p.x2, p.y2} < std::pair{p.x, p.y})
        throw std::invalid_argument("grid state: malformed bridge");
    }
    for (int c = 0; c < p.cell_count(); ++c) {
      const auto [cx, cy] = p.cell(c);
      const ObjectId o = occupant(s, cx, cy, p.level);
      if (o != b) throw std::invalid_argument("grid state: overlapping blocks");
    }
    if (p.level > 0 && int(supports_of(s, b).size()) < p.cell_count())
      for (int c = 0; c < p.cell_count(); ++c) {
        const auto [cx, cy] = p.cell(c);
        if (occupant(s, cx, cy, p.level - 1) < 0)
          throw std::invalid_argument("grid state: unsupported block");
      }
  }
}

Config GridModel::project(const GridState& s) const {
  validate(s);
  return project_placements(*sp_, s);
}

std::optional<std::string> GridModel::move_error(const GridState& s,
                                                 const MoveAction& m) const {
  if (m.block < 0 || m.block >= ObjectId(s.size())) return "no such block";
  if (!in_bounds(m.dest)) return "destination out of bounds";
  if (m.dest.kind == GridPos::Kind::bridge && !allow_bridges_)
    return "bridges disabled";
  if (m.dest == s[m.block]) return "destination equals current placement";
  if (is_covered(s, m.block)) return "covered: block is carrying others";

  GridState rest = s;
  rest.erase(rest.begin() + m.block);
  for (int c = 0; c < m.dest.cell_count(); ++c) {
    const auto [cx, cy] = m.dest.cell(c);
    if (occupant(rest, cx, cy, m.dest.level) >= 0) return "occupied destination";
    if (m.dest.level > 0 && occupant(rest, cx, cy, m.dest.level - 1) < 0)
      return "unsupported destination";
  }
  return std::nullopt;
}

GridState GridModel::apply_move(const GridState& s, const MoveAction& m) const {
  if (const auto err = move_error(s, m))
    throw std::invalid_argument("illegal move: " + *err);
  GridState out = s;
  out[m.block] = m.dest;
  return out;
}

std::vector<MoveAction> GridModel::legal_moves(const GridState& s) const {
  std::vector<MoveAction> moves;
  for (ObjectId b = 0; b < ObjectId(s.size()); ++b) {
    if (is_covered(s, b)) continue;

    GridState rest = s;
    rest.erase(rest.begin() + b);
    // column heights with the mover removed
    std::unordered_map<std::uint32_t, int> height;
    auto col = [](int x, int y) { return std::uint32_t(x) << 16 | std::uint32_t(y); };
    for (const GridPos& p : rest)
      for (int c = 0; c < p.cell_count(); ++c) {
        const auto [cx, cy] = p.cell(c);
        auto& h = height[col(cx, cy)];
        h = std::max(h, p.level + 1);
      }
    auto column_height = [&](int cx, int cy) {
      const auto it = height.find(col(cx, cy));
      return it == height.end() ? 0 : it->second;
    };

    for (int x = 0; x < plan_extent_; ++x)
      for (int y = 0; y < plan_extent_; ++y) {
        const int lvl = column_height(x, y);
        if (lvl >= max_levels_) continue;
        const GridPos dest = GridPos::cell_at(x, y, lvl);
        if (dest == s[b]) continue;
        moves.push_back({b, dest});
      }
    if (allow_bridges_) {
      for (int x = 0; x < plan_extent_; ++x)
        for (int y = 0; y < plan_extent_; ++y) {
          const int h = column_height(x, y);
          if (h < 1 || h >= max_levels_) continue;
          // right and down neighbors; the other directions are covered by
          // the neighbor's own iteration
          const std::pair<int, int> nbr[2] = {{x + 1, y}, {x, y + 1}};
          for (const auto [nx, ny] : nbr) {
            if (nx >= plan_extent_ || ny >= plan_extent_) continue;
            if (column_height(nx, ny) != h) continue;
            const GridPos dest = GridPos::bridge_at(x, y, nx, ny, h);
            if (dest == s[b]) continue;
            moves.push_back({b, dest});
          }
        }
    }
  }
  std::sort(moves.begin(), moves.end(), [](const MoveAction& a, const MoveAction& b) {
    return a.block != b.block ? a.block < b.block : a.dest < b.dest;
  });
  return moves;
}

}  // namespace hme
