#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hme {

// A semantic configuration: one bit per spatial predicate over object pairs.
// For n objects there are p = C(n,2) pairs and 3p dimensions laid out as
//   [0, p)    close(i,j)            one bit per unordered pair
//   [p, 2p)   above(i,j) with i<j
//   [2p, 3p)  above(j,i) with i<j
// Bit d of `bits` is dimension d. n = 5 gives the 30-dimensional space.
struct Config {
  std::uint64_t bits = 0;

  friend bool operator==(Config a, Config b) { return a.bits == b.bits; }
  friend bool operator!=(Config a, Config b) { return a.bits != b.bits; }
  // Lexicographic order on the dimension-ordered bit string (dim 0 first,
  // '0' < '1'). Used for every deterministic tie-break in the project.
  friend bool operator<(Config a, Config b) {
    return bit_reverse64(a.bits) < bit_reverse64(b.bits);
  }

  bool get(int dim) const { return (bits >> dim) & 1u; }
  void set(int dim, bool v) {
    if (v)
      bits |= std::uint64_t(1) << dim;
    else
      bits &= ~(std::uint64_t(1) << dim);
  }

  static std::uint64_t bit_reverse64(std::uint64_t x);
};

struct ConfigHash {
  std::size_t operator()(Config c) const noexcept {
    std::uint64_t z = c.bits + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return std::size_t(z ^ (z >> 31));
  }
};

struct Transition {
  Config from;
  Config to;

  friend bool operator==(const Transition& a, const Transition& b) {
    return a.from == b.from && a.to == b.to;
  }
};

using ObjectId = int;
using Permutation = std::vector<ObjectId>;  // mapping[i] = new label of object i

enum class Predicate { close, above };

// The 11 evaluation classes. Ci: exactly i pairs close, nothing stacked.
// Si: a stack of i blocks. P3: a three-block pyramid. '&' combines disjoint
// structures. All unspecified predicates are false, so the classes are
// pairwise disjoint sets of configurations.
enum class EvalClass : int {
  C1 = 0,
  C2,
  C3,
  S2,
  S3,
  S2S2,
  S2S3,
  P3,
  P3S2,
  S4,
  S5,
};
inline constexpr int kNumEvalClasses = 11;
extern const std::array<EvalClass, kNumEvalClasses> kAllEvalClasses;

const char* to_string(EvalClass k);
std::optional<EvalClass> eval_class_from_string(const std::string& name);

struct ChangedObjects {
  std::vector<int> dims;           // dimensions that differ between from/to
  std::vector<ObjectId> common;    // objects shared by every changed dimension
  bool single_object = false;      // true iff `common` is non-empty
};

// Predicate indexing, permutation action, transition analysis and the
// evaluation classes for a fixed number of objects. Everything is
// precomputed at construction and immutable afterwards; instances can be
// shared freely across threads.
class SemanticSpace {
 public:
  explicit SemanticSpace(int num_objects = 5);

  int num_objects() const { return n_; }
  int num_pairs() const { return p_; }
  int dims() const { return d_; }
  int num_permutations() const { return int(perm_dim_maps_.size()); }

  // --- predicate indexing ------------------------------------------------
  int pair_index(ObjectId i, ObjectId j) const;
  std::pair<ObjectId, ObjectId> pair_of(int pair_idx) const { return pairs_[pair_idx]; }
  int predicate_index(Predicate kind, ObjectId i, ObjectId j) const;
  // The unordered object pair a dimension talks about.
  std::pair<ObjectId, ObjectId> objects_of_dim(int dim) const;

  // --- permutation action -------------------------------------------------
  // Relabels objects: the output has bit (k, perm[i], perm[j]) wherever the
  // input has bit (k, i, j).
  Config apply_permutation(Config c, const Permutation& perm) const;
  Config apply_permutation(Config c, int perm_idx) const;
  const Permutation& permutation(int perm_idx) const { return perms_[perm_idx]; }

  // Lexicographic minimum of the orbit of c under all n! relabelings.
  Config orbit_representative(Config c) const;
  // Joint canonical form of a transition (minimum over relabelings applied
  // to both endpoints). Key for the permutation-sharing biases.
  Transition canonical_transition(Config from, Config to) const;

  // --- transitions ---------------------------------------------------------
  // Throws if from == to. `single_object` is true iff some object is
  // involved in every changed dimension, i.e. one moved block explains the
  // whole change.
  ChangedObjects changed_objects(const Transition& t) const;
  bool is_single_object(Config from, Config to) const;

  // --- evaluation classes ---------------------------------------------------
  const std::vector<Config>& enumerate_class(EvalClass k) const;
  std::optional<EvalClass> classify(Config c) const;

  // Height of the tallest stack in c (1 = nothing stacked), measured as the
  // longest chain of above predicates plus one.
  int max_stack_height(Config c) const;

  // --- serialization ---------------------------------------------------------
  std::string to_string(Config c) const;           // dims() many '0'/'1' chars
  Config from_string(const std::string& s) const;  // accepts what to_string emits
  std::uint64_t to_uint(Config c) const { return c.bits; }
  Config from_uint(std::uint64_t v) const;

 private:
  void build_classes();
  std::vector<Config>& class_bucket(EvalClass k) { return classes_[int(k)]; }

  int n_, p_, d_;
  std::vector<std::pair<ObjectId, ObjectId>> pairs_;  // pair_idx -> (i, j), i < j
  std::vector<std::vector<int>> pair_index_;          // [i][j] -> pair_idx
  std::vector<Permutation> perms_;
  std::vector<std::vector<int>> perm_dim_maps_;  // [perm][dim_in] -> dim_out
  std::array<std::vector<Config>, kNumEvalClasses> classes_;
  std::unordered_map<Config, EvalClass, ConfigHash> class_of_;
};

}  // namespace hme
