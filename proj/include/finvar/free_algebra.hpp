#ifndef FINVAR_FREE_ALGEBRA_HPP
#define FINVAR_FREE_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>

#include "finvar/subalgebra.hpp"

namespace finvar {

// Closure of a set of vectors inside a power A^N, computed componentwise.
// Elements are deduplicated by full-vector equality and discovered in the
// same breadth-first order as generate_subalgebra.  Binary operations are
// stored factored: each element carries a row/column class id per symbol
// and the table is a (row class x column class) grid, which keeps the
// closure cheap even when |F|^2 is large.
class VectorClosure {
 public:
  struct BinTable {
    std::vector<int> row_class_of_base;   // per base-algebra element
    std::vector<int> col_class_of_base;
    std::vector<int> rid;                 // per element of first arg sort
    std::vector<int> cid;                 // per element of second arg sort
    std::vector<std::vector<int>> grid;   // [rid][cid] -> element index
  };

  // initial_supports may be empty (all-zero masks); otherwise one mask per
  // initial vector
  VectorClosure(const FiniteAlgebra& base,
                std::vector<std::vector<std::vector<Elem>>> initial,
                std::vector<std::vector<std::uint32_t>> initial_supports,
                const Budget& budget);

  const FiniteAlgebra& base() const { return *base_; }
  std::uint64_t width() const { return width_; }
  int size(int sort) const { return static_cast<int>(vectors_[sort].size()); }
  const std::vector<Elem>& vec(int sort, int idx) const { return vectors_[sort][idx]; }
  const Origin& origin(int sort, int idx) const { return origins_[sort][idx]; }
  std::uint32_t support(int sort, int idx) const { return support_[sort][idx]; }

  int apply(int sym, std::span<const int> args) const;
  Term rep_term(int sort, int idx) const;
  int round_of(int sort, int idx) const { return rounds_[sort][idx]; }
  int initial_index(int sort, int i) const { return initial_index_[sort][i]; }
  const BinTable* bin(int sym) const;
  int unary_image(int sym, int idx) const { return unary_[sym][idx]; }
  int nullary_value(int sym) const { return nullary_[sym]; }

  // elements ordered so that each one's origin arguments come earlier
  const std::vector<std::pair<int, int>>& processing_order() const;

  // dense tables; guarded by the table budget
  FiniteAlgebra materialize(const Budget& budget = {}) const;

 private:
  const FiniteAlgebra* base_;
  std::uint64_t width_;
  std::vector<std::vector<std::vector<Elem>>> vectors_;  // [sort][idx]
  std::vector<std::vector<Origin>> origins_;
  std::vector<std::vector<std::uint32_t>> support_;      // generator bitmask
  std::vector<std::vector<int>> rounds_;
  std::vector<std::vector<int>> initial_index_;
  std::vector<BinTable> bins_;                           // per binary symbol
  std::vector<std::vector<int>> unary_;                  // per unary symbol
  std::vector<int> nullary_;                             // per nullary symbol
  std::vector<std::map<std::vector<Elem>, int>> dedup_;
  std::vector<std::map<std::vector<int>, int>> row_key_maps_, col_key_maps_;
  mutable std::vector<std::pair<int, int>> proc_order_;

  void close(const Budget& budget);
  int insert(int sort, std::vector<Elem> v, Origin o, std::uint32_t supp,
             int round, const Budget& budget);
  int current_round_ = 0;
};

// V(A)-free algebra on gens_per_sort generators: the closure of the
// projection vectors inside A^N, where N ranges over all sort-correct
// assignments of the generators into A (lexicographic, first generator
// most significant).
struct FreeAlgebra {
  std::vector<int> gens_per_sort;
  std::vector<std::vector<int>> designations;  // per sort: gen -> element idx
  std::vector<std::pair<int, int>> slots;      // assignment digits: (sort, gen)
  std::shared_ptr<VectorClosure> closure;

  int size(int sort) const { return closure->size(sort); }
  Term rep(int sort, int idx) const { return closure->rep_term(sort, idx); }
};

FreeAlgebra free_algebra(const FiniteAlgebra& a,
                         const std::vector<int>& gens_per_sort,
                         const Budget& budget = {});

// A failed forced-map extension: the operation-table entry of the free
// algebra whose induced identity the target violates.
struct QuotientViolation {
  int sym;                     // -1: generator designation mismatch
  int sort;
  std::vector<int> args;       // free-element indices
  int result;                  // free-element index
  Identity identity(const FreeAlgebra& f, const Signature& sig) const;
};

// The unique candidate homomorphism F -> T sending the free generators to
// `images` (per sort, one target element per generator).  Returns the first
// violated table entry, or nullopt when the map is a homomorphism.
std::optional<QuotientViolation> check_free_quotient(
    const FreeAlgebra& f, const FiniteAlgebra& target,
    const std::vector<std::vector<Elem>>& images);

// Explicit chain B -> (subalgebra of A^m)/theta witnessing B in V(A).
struct MembershipCertificate {
  std::uint64_t exponent = 0;  // m
  // per sort: generating vectors of the subalgebra of A^m
  std::vector<std::vector<std::vector<Elem>>> generators;
  // per sort: block id per closure element, aligned with the canonical
  // closure discovery order
  std::vector<std::vector<int>> congruence_blocks;
  // per sort: B element -> block id (injective)
  std::vector<std::vector<int>> embedding;
};

bool verify_certificate(const FiniteAlgebra& b, const FiniteAlgebra& a,
                        const MembershipCertificate& cert,
                        const Budget& budget = {}, std::string* why = nullptr);

struct InVarietyResult {
  bool member = false;
  std::optional<MembershipCertificate> certificate;
  std::optional<QuotientViolation> violation;
};

// Finite membership test: B in V(A) iff the map sending the free
// generators of free_algebra(A, |B|-many) to the elements of B extends to
// a homomorphism onto B.
InVarietyResult in_variety(const FiniteAlgebra& b, const FiniteAlgebra& a,
                           const Budget& budget = {});

struct InVnResult {
  bool member = true;
  std::vector<std::vector<Elem>> failing_gens;  // set when !member
  std::optional<QuotientViolation> violation;
  std::uint64_t subalgebras_tested = 0;
  std::uint64_t candidates_pruned = 0;
};

// B in V(A)^(n): every everywhere-nonempty subalgebra of B generated by at
// most n elements per sort lies in V(A).  Generator subsets are enumerated
// largest-first with subsumption pruning (a subset inside an already
// verified subalgebra is skipped); each distinct subalgebra is tested via
// the forced map from free_algebra(A, n).
InVnResult in_Vn(const FiniteAlgebra& b, const FiniteAlgebra& a, int n,
                 const Budget& budget = {});

// Finite identity basis for V(A)^(n): generator-designation identities
// plus one identity per operation-table entry of the n-generated free
// algebra (syntactically trivial entries are dropped).
std::vector<Identity> vn_basis(const FiniteAlgebra& a, int n,
                               const Budget& budget = {});

struct BasisCheckResult {
  bool ok = true;
  std::optional<QuotientViolation> violation;
  std::vector<std::vector<Elem>> failing_assignment;  // generator images
  std::uint64_t assignments_checked = 0;
};

// Checks that every vn_basis(A, n) identity holds in `target`, without
// materializing the identities: for each assignment of the free generators
// into the target, the forced map must be a homomorphism.  Sorts in which
// every free element syntactically depends on at most one generator are
// enumerated diagonally (one shared value), which is exhaustive for the
// corresponding identities.
BasisCheckResult basis_holds_in(const FreeAlgebra& f,
                                const FiniteAlgebra& target,
                                const Budget& budget = {});

}  // namespace finvar

#endif
