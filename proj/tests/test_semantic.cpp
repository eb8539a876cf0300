#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "hme/rng.hpp"
#include "hme/semantic.hpp"

using namespace hme;

namespace {

// Test-side reference for changed_objects: naive dim scan + set intersection,
// independent of the bit tricks in the implementation.
struct NaiveChanged {
  std::vector<int> dims;
  std::set<ObjectId> common;
};
NaiveChanged naive_changed(const SemanticSpace& sp, Config from, Config to) {
  NaiveChanged r;
  bool first = true;
  for (int d = 0; d < sp.dims(); ++d) {
    if (from.get(d) == to.get(d)) continue;
    r.dims.push_back(d);
    const auto [i, j] = sp.objects_of_dim(d);
    std::set<ObjectId> here = {i, j};
    if (first) {
      r.common = here;
      first = false;
    } else {
      std::set<ObjectId> inter;
      std::set_intersection(r.common.begin(), r.common.end(), here.begin(),
                            here.end(), std::inserter(inter, inter.begin()));
      r.common = inter;
    }
  }
  return r;
}

Config cfg_with(const SemanticSpace& sp,
                std::initializer_list<std::tuple<Predicate, int, int>> preds) {
  Config c;
  for (const auto& [k, i, j] : preds) c.set(sp.predicate_index(k, i, j), true);
  return c;
}

}  // namespace

TEST_CASE("predicate_index layout") {
  SemanticSpace sp(5);
  CHECK(sp.dims() == 30);
  CHECK(sp.predicate_index(Predicate::close, 0, 1) == 0);
  CHECK(sp.predicate_index(Predicate::close, 1, 0) == 0);
  CHECK(sp.predicate_index(Predicate::close, 3, 4) == 9);
  CHECK(sp.predicate_index(Predicate::above, 0, 1) == 10);
  CHECK(sp.predicate_index(Predicate::above, 1, 0) == 20);
  CHECK_THROWS_AS(sp.predicate_index(Predicate::close, 2, 2), std::invalid_argument);

  // bijective over all 30 dimensions
  std::set<int> seen;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      if (i < j) seen.insert(sp.predicate_index(Predicate::close, i, j));
      seen.insert(sp.predicate_index(Predicate::above, i, j));
    }
  CHECK(seen.size() == 30);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == 29);
}

TEST_CASE("apply_permutation basics") {
  SemanticSpace sp(5);
  Rng rng(7);

  Permutation ident = {0, 1, 2, 3, 4};
  Permutation swap01 = {1, 0, 2, 3, 4};

  for (int trial = 0; trial < 50; ++trial) {
    Config c{rng.u64() & ((1ull << 30) - 1)};
    CHECK(sp.apply_permutation(c, ident) == c);
  }

  Config c = cfg_with(sp, {{Predicate::close, 0, 2}});
  CHECK(sp.apply_permutation(c, swap01) == cfg_with(sp, {{Predicate::close, 1, 2}}));

  // above(i,j) maps to above(perm(i), perm(j))
  Config a = cfg_with(sp, {{Predicate::above, 0, 1}});
  CHECK(sp.apply_permutation(a, swap01) == cfg_with(sp, {{Predicate::above, 1, 0}}));
}

TEST_CASE("permutation action composition law") {
  // exhaustive at n=3: all 512 configs, all 36 permutation pairs
  SemanticSpace sp3(3);
  CHECK(sp3.num_permutations() == 6);
  for (std::uint64_t bits = 0; bits < (1ull << 9); ++bits) {
    Config c{bits};
    for (int s = 0; s < 6; ++s)
      for (int t = 0; t < 6; ++t) {
        const auto& sigma = sp3.permutation(s);
        const auto& tau = sp3.permutation(t);
        Permutation comp(3);
        for (int i = 0; i < 3; ++i) comp[i] = tau[sigma[i]];
        CHECK(sp3.apply_permutation(sp3.apply_permutation(c, sigma), tau) ==
              sp3.apply_permutation(c, comp));
      }
  }

  // sampled at n=5 over all 120x120 pairs for a few random configs
  SemanticSpace sp5(5);
  CHECK(sp5.num_permutations() == 120);
  Rng rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    Config c{rng.u64() & ((1ull << 30) - 1)};
    for (int s = 0; s < 120; s += 7)
      for (int t = 0; t < 120; t += 7) {
        const auto& sigma = sp5.permutation(s);
        const auto& tau = sp5.permutation(t);
        Permutation comp(5);
        for (int i = 0; i < 5; ++i) comp[i] = tau[sigma[i]];
        CHECK(sp5.apply_permutation(sp5.apply_permutation(c, sigma), tau) ==
              sp5.apply_permutation(c, comp));
      }
  }
}

TEST_CASE("changed_objects against naive oracle") {
  SemanticSpace sp(5);

  Config z;
  Config a = cfg_with(sp, {{Predicate::close, 0, 1}});
  auto r = sp.changed_objects({z, a});
  CHECK(r.single_object);
  CHECK(r.common == std::vector<ObjectId>{0, 1});

  Config b = cfg_with(sp, {{Predicate::close, 0, 1}, {Predicate::close, 0, 2}});
  r = sp.changed_objects({z, b});
  CHECK(r.single_object);
  CHECK(r.common == std::vector<ObjectId>{0});

  Config c = cfg_with(sp, {{Predicate::close, 0, 1}, {Predicate::close, 2, 3}});
  r = sp.changed_objects({z, c});
  CHECK_FALSE(r.single_object);
  CHECK(r.common.empty());

  CHECK_THROWS_AS(sp.changed_objects({a, a}), std::invalid_argument);

  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    Config f{rng.u64() & ((1ull << 30) - 1)};
    Config t{rng.u64() & ((1ull << 30) - 1)};
    if (f == t) continue;
    const auto got = sp.changed_objects({f, t});
    const auto want = naive_changed(sp, f, t);
    CHECK(got.dims == want.dims);
    CHECK(std::set<ObjectId>(got.common.begin(), got.common.end()) == want.common);
    CHECK(got.single_object == !want.common.empty());
    // symmetry under from/to swap
    const auto rev = sp.changed_objects({t, f});
    CHECK(rev.dims == got.dims);
    CHECK(rev.common == got.common);
  }
}

TEST_CASE("evaluation class counts match the published table") {
  SemanticSpace sp(5);
  auto size = [&](EvalClass k) { return sp.enumerate_class(k).size(); };
  CHECK(size(EvalClass::C1) == 10);
  CHECK(size(EvalClass::C2) == 45);
  CHECK(size(EvalClass::C3) == 120);
  CHECK(size(EvalClass::S2) == 20);
  CHECK(size(EvalClass::S3) == 60);
  CHECK(size(EvalClass::S2S2) == 60);
  CHECK(size(EvalClass::S2S3) == 120);
  CHECK(size(EvalClass::P3) == 30);
  CHECK(size(EvalClass::P3S2) == 60);
  CHECK(size(EvalClass::S4) == 120);
  CHECK(size(EvalClass::S5) == 120);

  std::size_t total = 0;
  std::set<std::uint64_t> all;
  for (EvalClass k : kAllEvalClasses) {
    total += size(k);
    for (Config c : sp.enumerate_class(k)) all.insert(c.bits);
  }
  CHECK(total == 765);
  CHECK(all.size() == 765);  // pairwise disjoint
}

TEST_CASE("classify") {
  SemanticSpace sp(5);
  CHECK(!sp.classify(Config{}).has_value());

  CHECK(sp.classify(cfg_with(sp, {{Predicate::close, 0, 1}})) == EvalClass::C1);
  CHECK(sp.classify(cfg_with(sp, {{Predicate::above, 0, 1},
                                  {Predicate::close, 0, 1}})) == EvalClass::S2);

  // classify is constant on permutation orbits
  Rng rng(5);
  for (EvalClass k : kAllEvalClasses)
    for (Config c : sp.enumerate_class(k))
      for (int t = 0; t < 4; ++t) {
        const int p = int(rng.below(120));
        CHECK(sp.classify(sp.apply_permutation(c, p)) == k);
      }
}

TEST_CASE("orbit representative") {
  SemanticSpace sp(5);

  auto orbit_size = [&](Config c) {
    std::set<std::uint64_t> images;
    for (int p = 0; p < 120; ++p) images.insert(sp.apply_permutation(c, p).bits);
    return images.size();
  };

  CHECK(sp.orbit_representative(Config{}) == Config{});
  CHECK(orbit_size(Config{}) == 1);

  Config s2 = cfg_with(sp, {{Predicate::above, 2, 4}, {Predicate::close, 2, 4}});
  CHECK(orbit_size(s2) == 20);
  Config s5rep = sp.orbit_representative(sp.enumerate_class(EvalClass::S5)[7]);
  CHECK(orbit_size(s5rep) == 120);

  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    Config c{rng.u64() & ((1ull << 30) - 1)};
    const Config rep = sp.orbit_representative(c);
    // idempotent and constant on the orbit
    CHECK(sp.orbit_representative(rep) == rep);
    const int p = int(rng.below(120));
    CHECK(sp.orbit_representative(sp.apply_permutation(c, p)) == rep);
    // rep is the lexicographic minimum of all images
    CHECK(!(sp.apply_permutation(c, p) < rep));
    CHECK(120 % orbit_size(c) == 0);
  }
}

TEST_CASE("string and integer forms round-trip") {
  SemanticSpace sp(5);
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    Config c{rng.u64() & ((1ull << 30) - 1)};
    CHECK(sp.from_string(sp.to_string(c)) == c);
    CHECK(sp.from_uint(sp.to_uint(c)) == c);
  }
  CHECK(sp.to_string(Config{}) == std::string(30, '0'));
  Config first = cfg_with(sp, {{Predicate::close, 0, 1}});
  CHECK(sp.to_string(first)[0] == '1');
  CHECK(sp.to_uint(first) == 1);
  CHECK_THROWS_AS(sp.from_string("01"), std::invalid_argument);
  CHECK_THROWS_AS(sp.from_uint(1ull << 30), std::invalid_argument);

  // operator< agrees with string order (the tie-break everywhere)
  for (int trial = 0; trial < 200; ++trial) {
    Config a{rng.u64() & ((1ull << 30) - 1)};
    Config b{rng.u64() & ((1ull << 30) - 1)};
    CHECK((a < b) == (sp.to_string(a) < sp.to_string(b)));
  }
}

TEST_CASE("small-n spaces") {
  SemanticSpace sp2(2);
  CHECK(sp2.dims() == 3);
  CHECK(sp2.enumerate_class(EvalClass::S2).size() == 2);
  CHECK(sp2.enumerate_class(EvalClass::S5).empty());

  SemanticSpace sp3(3);
  CHECK(sp3.dims() == 9);
  CHECK(sp3.enumerate_class(EvalClass::C1).size() == 3);
  CHECK(sp3.enumerate_class(EvalClass::S3).size() == 6);
  CHECK(sp3.enumerate_class(EvalClass::P3).size() == 3);
  CHECK(sp3.enumerate_class(EvalClass::S2S2).empty());
}
