#ifndef FINVAR_SUBALGEBRA_HPP
#define FINVAR_SUBALGEBRA_HPP

#include "finvar/term.hpp"

namespace finvar {

// How an element entered a closure: as the i-th generator of its sort, or
// as sym applied to earlier elements (argument values are discovery indices
// in the sort dictated by the symbol).
struct Origin {
  int sym = -1;             // -1: generator
  int gen_index = -1;       // valid when sym < 0
  std::vector<int> args;    // discovery indices, when sym >= 0
};

struct ClosureResult {
  SubUniverse universe;
  // per sort: elements in discovery order (generators first, in input order)
  std::vector<std::vector<Elem>> order;
  std::vector<std::vector<Origin>> origins;   // aligned with `order`
  std::vector<std::vector<int>> discovery;    // per sort: element -> index, -1 outside

  // Representative term for a closed element, over variables x_i naming the
  // i-th generator of each sort.
  Term rep_term(const FiniteAlgebra& alg, int sort, Elem e) const;
};

// Least subuniverse containing `gens`.  Discovery is breadth-first: within
// one round, symbols in signature order and argument tuples in mixed-radix
// order over previously discovered elements (first argument most
// significant), so representative terms are depth-minimal and ties break by
// symbol then argument order.
ClosureResult generate_subalgebra(const FiniteAlgebra& alg,
                                  const std::vector<std::vector<Elem>>& gens,
                                  const Budget& budget = {});

// Same closure but without the everywhere-nonempty requirement on the
// result (used by enumeration sweeps that tolerate empty sorts).
ClosureResult close_under_ops(const FiniteAlgebra& alg,
                              const std::vector<std::vector<Elem>>& gens,
                              const Budget& budget = {});

}  // namespace finvar

#endif
