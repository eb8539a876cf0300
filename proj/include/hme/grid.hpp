#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hme/semantic.hpp"

namespace hme {

// A block placement. Either a single cell or a bridge resting on two
// horizontally adjacent cells at the same level (the top of a pyramid).
// Bridge cells are kept in lexicographic (x, y) < (x2, y2) order.
struct GridPos {
  enum class Kind : std::uint8_t { cell, bridge };
  Kind kind = Kind::cell;
  int x = 0, y = 0;
  int level = 0;
  int x2 = 0, y2 = 0;  // bridge only

  static GridPos cell_at(int x, int y, int level) {
    return GridPos{Kind::cell, x, y, level, 0, 0};
  }
  static GridPos bridge_at(int x, int y, int x2, int y2, int level);

  friend bool operator==(const GridPos& a, const GridPos& b) {
    if (a.kind != b.kind || a.x != b.x || a.y != b.y || a.level != b.level)
      return false;
    return a.kind == Kind::cell || (a.x2 == b.x2 && a.y2 == b.y2);
  }
  friend bool operator!=(const GridPos& a, const GridPos& b) { return !(a == b); }
  // Deterministic destination ordering: cells before bridges, then coords.
  friend bool operator<(const GridPos& a, const GridPos& b);

  // Doubled plan coordinates of the block's center (bridge centers sit
  // between their two cells).
  std::pair<int, int> center2() const {
    if (kind == Kind::cell) return {2 * x, 2 * y};
    return {x + x2, y + y2};
  }
  int cell_count() const { return kind == Kind::cell ? 1 : 2; }
  std::pair<int, int> cell(int idx) const {
    return idx == 0 ? std::pair<int, int>{x, y} : std::pair<int, int>{x2, y2};
  }
};

using GridState = std::vector<GridPos>;
using PlacementView = std::span<const GridPos>;

struct MoveAction {
  ObjectId block = 0;
  GridPos dest;
};

// close(a, b): squared horizontal center distance <= 4 plan units and level
// difference <= 1. These thresholds define the whole feasibility model.
inline constexpr int kCloseSqDistDoubled = 16;  // (2*distance)^2 <= 16
inline constexpr int kCloseMaxLevelDiff = 1;

bool placements_close(const GridPos& a, const GridPos& b);
// Block occupying cell (x, y, level), or -1.
ObjectId occupant(PlacementView s, int x, int y, int level);
// Blocks directly supporting `b` (occupants of the cells below b's).
std::vector<ObjectId> supports_of(PlacementView s, ObjectId b);
// True if anything rests on block b (including a bridge it supports).
bool is_covered(PlacementView s, ObjectId b);
// Semantic configuration of a placement set; does not check validity.
Config project_placements(const SemanticSpace& sp, PlacementView s);

// The discrete feasibility model on a bounded plan grid. Blocks live in a
// plan_extent x plan_extent square, stacked up to max_levels levels; one
// legal move relocates a single uncovered block onto a supported free spot.
class GridModel {
 public:
  GridModel(const SemanticSpace& sp, int plan_extent = 13, int max_levels = 0,
            bool allow_bridges = true);

  const SemanticSpace& space() const { return *sp_; }
  int plan_extent() const { return plan_extent_; }
  int max_levels() const { return max_levels_; }
  bool allow_bridges() const { return allow_bridges_; }

  // All blocks on the table in separate columns, pairwise far. Throws if
  // the plan is too small to host it.
  GridState root_state() const;

  // Throws std::invalid_argument describing the first structural problem.
  void validate(const GridState& s) const;

  Config project(const GridState& s) const;

  // Every legal move, ordered by (block, destination).
  std::vector<MoveAction> legal_moves(const GridState& s) const;

  // Reason the move is illegal, or nullopt if legal.
  std::optional<std::string> move_error(const GridState& s, const MoveAction& m) const;

  GridState apply_move(const GridState& s, const MoveAction& m) const;

 private:
  bool in_bounds(const GridPos& p) const;

  const SemanticSpace* sp_;
  int plan_extent_;
  int max_levels_;
  bool allow_bridges_;
};

}  // namespace hme
