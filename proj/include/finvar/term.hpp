#ifndef FINVAR_TERM_HPP
#define FINVAR_TERM_HPP

#include <optional>
#include <vector>

#include "finvar/algebra.hpp"

namespace finvar {

// Sorted syntax tree.  A node is a typed variable (symbol < 0) or an
// application of a signature symbol to sort-correct children.
struct Term {
  int sort = 0;
  int symbol = -1;                 // -1 for variables
  int var_index = -1;              // valid when symbol < 0
  std::vector<Term> children;

  bool is_var() const { return symbol < 0; }

  static Term var(int sort, int index) {
    Term t;
    t.sort = sort;
    t.var_index = index;
    return t;
  }

  static Term app(const Signature& sig, int symbol, std::vector<Term> children);

  bool operator==(const Term&) const = default;
  std::size_t depth() const;
  std::size_t node_count() const;

  // highest variable index used per sort, -1 when unused
  void max_vars(std::vector<int>& out) const;
};

struct Identity {
  Term lhs;
  Term rhs;

  static Identity make(Term lhs, Term rhs);  // checks equal sort
  bool operator==(const Identity&) const = default;
};

// Assignment of elements to typed variables: env[sort][var_index].
// An entry of -1 means unbound.
struct Assignment {
  std::vector<std::vector<Elem>> val;

  static Assignment for_term_vars(const FiniteAlgebra& alg, const Term& t);
  Elem get(int sort, int index) const;
};

Elem eval_term(const FiniteAlgebra& alg, const Term& t, const Assignment& env);

struct HoldsResult {
  bool holds = true;
  std::optional<Assignment> witness;  // falsifying assignment when !holds
};

// Exhaustive satisfaction check over all assignments to the variables of
// both sides.  Assignment enumeration is lexicographic over variables
// ordered by (sort, index).
HoldsResult holds(const FiniteAlgebra& alg, const Identity& id,
                  const Budget& budget = {});

}  // namespace finvar

#endif
