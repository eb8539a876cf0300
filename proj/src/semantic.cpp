#include "hme/semantic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hme {

std::uint64_t Config::bit_reverse64(std::uint64_t x) {
  x = ((x >> 1) & 0x5555555555555555ULL) | ((x & 0x5555555555555555ULL) << 1);
  x = ((x >> 2) & 0x3333333333333333ULL) | ((x & 0x3333333333333333ULL) << 2);
  x = ((x >> 4) & 0x0f0f0f0f0f0f0f0fULL) | ((x & 0x0f0f0f0f0f0f0f0fULL) << 4);
  x = ((x >> 8) & 0x00ff00ff00ff00ffULL) | ((x & 0x00ff00ff00ff00ffULL) << 8);
  x = ((x >> 16) & 0x0000ffff0000ffffULL) | ((x & 0x0000ffff0000ffffULL) << 16);
  return (x >> 32) | (x << 32);
}

const std::array<EvalClass, kNumEvalClasses> kAllEvalClasses = {
    EvalClass::C1,   EvalClass::C2,   EvalClass::C3, EvalClass::S2,
    EvalClass::S3,   EvalClass::S2S2, EvalClass::S2S3, EvalClass::P3,
    EvalClass::P3S2, EvalClass::S4,   EvalClass::S5,
};

const char* to_string(EvalClass k) {
  switch (k) {
    case EvalClass::C1: return "C1";
    case EvalClass::C2: return "C2";
    case EvalClass::C3: return "C3";
    case EvalClass::S2: return "S2";
    case EvalClass::S3: return "S3";
    case EvalClass::S2S2: return "S2&S2";
    case EvalClass::S2S3: return "S2&S3";
    case EvalClass::P3: return "P3";
    case EvalClass::P3S2: return "P3&S2";
    case EvalClass::S4: return "S4";
    case EvalClass::S5: return "S5";
  }
  return "?";
}

std::optional<EvalClass> eval_class_from_string(const std::string& name) {
  for (EvalClass k : kAllEvalClasses)
    if (name == to_string(k)) return k;
  return std::nullopt;
}

SemanticSpace::SemanticSpace(int num_objects) : n_(num_objects) {
  if (n_ < 2) throw std::invalid_argument("SemanticSpace: need at least 2 objects");
  p_ = n_ * (n_ - 1) / 2;
  d_ = 3 * p_;
  if (d_ > 64) throw std::invalid_argument("SemanticSpace: too many objects (dims > 64)");

  pair_index_.assign(n_, std::vector<int>(n_, -1));
  for (ObjectId i = 0; i < n_; ++i)
    for (ObjectId j = i + 1; j < n_; ++j) {
      pair_index_[i][j] = pair_index_[j][i] = int(pairs_.size());
      pairs_.emplace_back(i, j);
    }

  // All n! relabelings with their induced dimension permutations.
  Permutation perm(n_);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<int> dim_map(d_);
    for (int d = 0; d < d_; ++d) {
      const int pr = d % p_;
      const auto [i, j] = pairs_[pr];
      if (d < p_) {
        dim_map[d] = predicate_index(Predicate::close, perm[i], perm[j]);
      } else if (d < 2 * p_) {
        dim_map[d] = predicate_index(Predicate::above, perm[i], perm[j]);
      } else {
        dim_map[d] = predicate_index(Predicate::above, perm[j], perm[i]);
      }
    }
    perms_.push_back(perm);
    perm_dim_maps_.push_back(std::move(dim_map));
  } while (std::next_permutation(perm.begin(), perm.end()));

  build_classes();
}

int SemanticSpace::pair_index(ObjectId i, ObjectId j) const {
  if (i == j || i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::invalid_argument("pair_index: invalid object pair");
  return pair_index_[i][j];
}

int SemanticSpace::predicate_index(Predicate kind, ObjectId i, ObjectId j) const {
  const int pr = pair_index(i, j);
  if (kind == Predicate::close) return pr;
  return (i < j ? p_ : 2 * p_) + pr;
}

std::pair<ObjectId, ObjectId> SemanticSpace::objects_of_dim(int dim) const {
  return pairs_[dim % p_];
}

Config SemanticSpace::apply_permutation(Config c, const Permutation& perm) const {
  Config out;
  for (std::uint64_t rest = c.bits; rest;) {
    const int d = __builtin_ctzll(rest);
    rest &= rest - 1;
    const int pr = d % p_;
    const auto [i, j] = pairs_[pr];
    int target;
    if (d < p_)
      target = predicate_index(Predicate::close, perm[i], perm[j]);
    else if (d < 2 * p_)
      target = predicate_index(Predicate::above, perm[i], perm[j]);
    else
      target = predicate_index(Predicate::above, perm[j], perm[i]);
    out.bits |= std::uint64_t(1) << target;
  }
  return out;
}

Config SemanticSpace::apply_permutation(Config c, int perm_idx) const {
  const auto& map = perm_dim_maps_[perm_idx];
  Config out;
  for (std::uint64_t rest = c.bits; rest;) {
    const int d = __builtin_ctzll(rest);
    rest &= rest - 1;
    out.bits |= std::uint64_t(1) << map[d];
  }
  return out;
}

Config SemanticSpace::orbit_representative(Config c) const {
  Config best = c;
  for (int p = 0; p < int(perm_dim_maps_.size()); ++p) {
    const Config img = apply_permutation(c, p);
    if (img < best) best = img;
  }
  return best;
}

Transition SemanticSpace::canonical_transition(Config from, Config to) const {
  Transition best{from, to};
  for (int p = 0; p < int(perm_dim_maps_.size()); ++p) {
    const Config f = apply_permutation(from, p);
    const Config t = apply_permutation(to, p);
    if (f < best.from || (f == best.from && t < best.to)) best = {f, t};
  }
  return best;
}

ChangedObjects SemanticSpace::changed_objects(const Transition& t) const {
  if (t.from == t.to)
    throw std::invalid_argument("changed_objects: empty transition (from == to)");
  ChangedObjects r;
  std::uint64_t common_mask = (std::uint64_t(1) << n_) - 1;
  for (std::uint64_t diff = t.from.bits ^ t.to.bits; diff;) {
    const int d = __builtin_ctzll(diff);
    diff &= diff - 1;
    r.dims.push_back(d);
    const auto [i, j] = objects_of_dim(d);
    common_mask &= (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
  }
  for (ObjectId o = 0; o < n_; ++o)
    if ((common_mask >> o) & 1) r.common.push_back(o);
  r.single_object = !r.common.empty();
  return r;
}

bool SemanticSpace::is_single_object(Config from, Config to) const {
  std::uint64_t common_mask = (std::uint64_t(1) << n_) - 1;
  for (std::uint64_t diff = from.bits ^ to.bits; diff && common_mask;) {
    const int d = __builtin_ctzll(diff);
    diff &= diff - 1;
    const auto [i, j] = objects_of_dim(d);
    common_mask &= (std::uint64_t(1) << i) | (std::uint64_t(1) << j);
  }
  return common_mask != 0;
}

int SemanticSpace::max_stack_height(Config c) const {
  // above(i,j) edges form a DAG on <= n_ nodes; longest path + 1.
  std::vector<std::vector<ObjectId>> below(n_);  // i -> objects i rests on
  for (ObjectId i = 0; i < n_; ++i)
    for (ObjectId j = 0; j < n_; ++j) {
      if (i == j) continue;
      if (c.get(predicate_index(Predicate::above, i, j))) below[i].push_back(j);
    }
  std::vector<int> depth(n_, -1);
  // depth = longest chain of supports under an object
  auto dfs = [&](auto&& self, ObjectId o) -> int {
    if (depth[o] >= 0) return depth[o];
    int best = 0;
    for (ObjectId s : below[o]) best = std::max(best, self(self, s) + 1);
    return depth[o] = best;
  };
  int h = 1;
  for (ObjectId o = 0; o < n_; ++o) h = std::max(h, dfs(dfs, o) + 1);
  return h;
}

void SemanticSpace::build_classes() {
  auto close = [&](Config& c, ObjectId a, ObjectId b) {
    c.set(predicate_index(Predicate::close, a, b), true);
  };
  auto stack = [&](Config& c, ObjectId top, ObjectId bottom) {
    c.set(predicate_index(Predicate::above, top, bottom), true);
    c.set(predicate_index(Predicate::close, top, bottom), true);
  };

  // Ci: exactly i pairs close and nothing stacked.
  const std::array<EvalClass, 3> ci = {EvalClass::C1, EvalClass::C2, EvalClass::C3};
  for (int i = 1; i <= 3; ++i) {
    std::vector<int> sel(i);
    auto rec = [&](auto&& self, int start, int depth) -> void {
      if (depth == i) {
        Config c;
        for (int pr : sel) c.set(pr, true);
        class_bucket(ci[i - 1]).push_back(c);
        return;
      }
      for (int pr = start; pr < p_; ++pr) {
        sel[depth] = pr;
        self(self, pr + 1, depth + 1);
      }
    };
    rec(rec, 0, 0);
  }

  // Helpers over ordered tuples of distinct objects.
  auto each_tuple = [&](int len, auto&& fn) {
    std::vector<ObjectId> t(len);
    auto rec = [&](auto&& self, int depth, std::uint32_t used) -> void {
      if (depth == len) {
        fn(t);
        return;
      }
      for (ObjectId o = 0; o < n_; ++o) {
        if ((used >> o) & 1) continue;
        t[depth] = o;
        self(self, depth + 1, used | (1u << o));
      }
    };
    rec(rec, 0, 0);
  };
  auto tower = [&](Config& c, const std::vector<ObjectId>& t, int first, int len) {
    for (int k = first; k + 1 < first + len; ++k) stack(c, t[k], t[k + 1]);
  };

  if (n_ >= 2) each_tuple(2, [&](const std::vector<ObjectId>& t) {
    Config c;
    tower(c, t, 0, 2);
    class_bucket(EvalClass::S2).push_back(c);
  });
  if (n_ >= 3) each_tuple(3, [&](const std::vector<ObjectId>& t) {
    Config c;
    tower(c, t, 0, 3);
    class_bucket(EvalClass::S3).push_back(c);
  });
  if (n_ >= 4) each_tuple(4, [&](const std::vector<ObjectId>& t) {
    // two disjoint 2-stacks; order the two stacks by their top to dedupe
    if (t[0] < t[2]) {
      Config c;
      tower(c, t, 0, 2);
      tower(c, t, 2, 2);
      class_bucket(EvalClass::S2S2).push_back(c);
    }
    Config c;
    tower(c, t, 0, 4);
    class_bucket(EvalClass::S4).push_back(c);
  });
  if (n_ >= 5) each_tuple(5, [&](const std::vector<ObjectId>& t) {
    {
      Config c;
      tower(c, t, 0, 2);
      tower(c, t, 2, 3);
      class_bucket(EvalClass::S2S3).push_back(c);
    }
    Config c;
    tower(c, t, 0, 5);
    class_bucket(EvalClass::S5).push_back(c);
  });

  // P3: top bridging two supports; supports are unordered.
  auto pyramid = [&](Config& c, ObjectId top, ObjectId u, ObjectId v) {
    stack(c, top, u);
    stack(c, top, v);
    close(c, u, v);
  };
  if (n_ >= 3)
    for (ObjectId top = 0; top < n_; ++top)
      for (ObjectId u = 0; u < n_; ++u)
        for (ObjectId v = u + 1; v < n_; ++v) {
          if (u == top || v == top) continue;
          Config c;
          pyramid(c, top, u, v);
          class_bucket(EvalClass::P3).push_back(c);
          if (n_ >= 5) {
            // the remaining two objects form the 2-stack, either way up
            std::vector<ObjectId> rest;
            for (ObjectId o = 0; o < n_; ++o)
              if (o != top && o != u && o != v) rest.push_back(o);
            for (int k = 0; k < 2; ++k) {
              Config cc = c;
              stack(cc, rest[k], rest[1 - k]);
              class_bucket(EvalClass::P3S2).push_back(cc);
            }
          }
        }

  for (EvalClass k : kAllEvalClasses)
    for (Config c : classes_[int(k)]) {
      auto [it, inserted] = class_of_.emplace(c, k);
      if (!inserted)
        throw std::logic_error("evaluation classes are not disjoint");
    }
}

const std::vector<Config>& SemanticSpace::enumerate_class(EvalClass k) const {
  return classes_[int(k)];
}

std::optional<EvalClass> SemanticSpace::classify(Config c) const {
  const auto it = class_of_.find(c);
  if (it == class_of_.end()) return std::nullopt;
  return it->second;
}

std::string SemanticSpace::to_string(Config c) const {
  std::string s(d_, '0');
  for (int d = 0; d < d_; ++d)
    if (c.get(d)) s[d] = '1';
  return s;
}

Config SemanticSpace::from_string(const std::string& s) const {
  if (int(s.size()) != d_)
    throw std::invalid_argument("Config::from_string: expected " +
                                std::to_string(d_) + " characters");
  Config c;
  for (int d = 0; d < d_; ++d) {
    if (s[d] == '1')
      c.set(d, true);
    else if (s[d] != '0')
      throw std::invalid_argument("Config::from_string: invalid character");
  }
  return c;
}

Config SemanticSpace::from_uint(std::uint64_t v) const {
  if (d_ < 64 && (v >> d_) != 0)
    throw std::invalid_argument("Config::from_uint: value exceeds dimension count");
  return Config{v};
}

}  // namespace hme
