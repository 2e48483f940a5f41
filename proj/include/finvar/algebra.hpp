#ifndef FINVAR_ALGEBRA_HPP
#define FINVAR_ALGEBRA_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finvar/signature.hpp"

namespace finvar {

// A finite multi-sorted algebra: one dense operation table per symbol.
// Tables are row-major with the first argument most significant, so the
// serialized and in-memory layouts agree entry for entry.
struct FiniteAlgebra {
  Signature sig;
  std::vector<int> sizes;                            // one per sort, all >= 1
  std::vector<std::vector<Elem>> tables;             // one per symbol
  std::vector<std::vector<std::string>> labels;      // per sort; may be empty

  static FiniteAlgebra make(Signature sig, std::vector<int> sizes,
                            std::vector<std::vector<Elem>> tables,
                            std::vector<std::vector<std::string>> labels = {});

  std::size_t table_size(int sym) const;

  Elem apply(int sym, std::span<const Elem> args) const {
    const OpSym& op = sig.symbols[sym];
    std::size_t idx = 0;
    for (int i = 0; i < op.arity(); ++i)
      idx = idx * sizes[op.arg_sorts[i]] + args[i];
    return tables[sym][idx];
  }

  Elem apply1(int sym, Elem a) const { return tables[sym][a]; }
  Elem apply2(int sym, Elem a, Elem b) const {
    return tables[sym][static_cast<std::size_t>(a) *
                           sizes[sig.symbols[sym].arg_sorts[1]] +
                       b];
  }

  std::string label(int sort, Elem e) const;
  std::size_t total_size() const;
};

// One subset of each universe, stored as membership flags.
struct SubUniverse {
  std::vector<std::vector<char>> in;  // per sort, size = universe size

  static SubUniverse empty(const FiniteAlgebra& alg);
  static SubUniverse full(const FiniteAlgebra& alg);

  bool contains(int sort, Elem e) const { return in[sort][e] != 0; }
  bool subset_of(const SubUniverse& other) const;
  bool operator==(const SubUniverse&) const = default;
  std::vector<Elem> elements(int sort) const;
  std::size_t count(int sort) const;
  std::size_t total() const;
  bool everywhere_nonempty() const;
};

// A partition of each universe, as block index per element.  Blocks are
// numbered by first occurrence, so the representation is canonical.
struct Congruence {
  std::vector<std::vector<int>> block;   // per sort: element -> block id
  std::vector<int> block_count;          // per sort

  static Congruence identity(const FiniteAlgebra& alg);
  static Congruence all_in_one(const FiniteAlgebra& alg);
  static Congruence from_blocks(std::vector<std::vector<int>> block);
  bool is_identity() const;
};

struct Homomorphism {
  std::vector<std::vector<Elem>> map;  // per sort: dom element -> cod element

  bool injective(const FiniteAlgebra& cod) const;
  bool surjective(const FiniteAlgebra& cod) const;
};

// Table-level compatibility test: congruent argument tuples must give
// congruent results for every operation.
bool is_congruence(const FiniteAlgebra& alg, const Congruence& theta);

struct QuotientResult {
  FiniteAlgebra algebra;
  Homomorphism projection;
};

// Quotient by a verified congruence, plus the canonical projection.
QuotientResult quotient(const FiniteAlgebra& alg, const Congruence& theta);

// Componentwise product over one signature.  Element encoding per sort is
// mixed-radix with the first factor most significant.
FiniteAlgebra direct_product(const std::vector<const FiniteAlgebra*>& algs,
                             const Budget& budget = {});
FiniteAlgebra direct_power(const FiniteAlgebra& alg, int exponent,
                           const Budget& budget = {});

// Exact table-by-table check that `h` commutes with every operation.
bool is_homomorphism(const FiniteAlgebra& dom, const FiniteAlgebra& cod,
                     const Homomorphism& h);

// Restriction of `alg` to a subuniverse closed under all operations;
// elements are renumbered in ascending order per sort.  Also returns the
// inclusion-as-index map per sort (new index -> old index).
struct InducedResult {
  FiniteAlgebra algebra;
  std::vector<std::vector<Elem>> old_index;
};
InducedResult induced_algebra(const FiniteAlgebra& alg, const SubUniverse& u);

}  // namespace finvar

#endif
