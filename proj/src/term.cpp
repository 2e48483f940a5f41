#include "finvar/term.hpp"

#include <algorithm>

namespace finvar {

Term Term::app(const Signature& sig, int symbol, std::vector<Term> children) {
  const OpSym& op = sig.symbols[symbol];
  if (static_cast<int>(children.size()) != op.arity())
    throw ArityMismatch("'" + op.name + "' expects " + std::to_string(op.arity()) +
                        " arguments");
  for (int i = 0; i < op.arity(); ++i)
    if (children[i].sort != op.arg_sorts[i])
      throw SortMismatch("argument " + std::to_string(i) + " of '" + op.name +
                         "' has wrong sort");
  Term t;
  t.sort = op.out_sort;
  t.symbol = symbol;
  t.children = std::move(children);
  return t;
}

std::size_t Term::depth() const {
  std::size_t d = 0;
  for (const Term& c : children) d = std::max(d, c.depth());
  return d + 1;
}

std::size_t Term::node_count() const {
  std::size_t n = 1;
  for (const Term& c : children) n += c.node_count();
  return n;
}

void Term::max_vars(std::vector<int>& out) const {
  if (is_var()) {
    if (sort >= static_cast<int>(out.size())) out.resize(sort + 1, -1);
    out[sort] = std::max(out[sort], var_index);
  }
  for (const Term& c : children) c.max_vars(out);
}

Identity Identity::make(Term lhs, Term rhs) {
  if (lhs.sort != rhs.sort)
    throw SortMismatch("identity sides have different sorts");
  return Identity{std::move(lhs), std::move(rhs)};
}

Assignment Assignment::for_term_vars(const FiniteAlgebra& alg, const Term& t) {
  std::vector<int> mv(alg.sig.sort_count, -1);
  t.max_vars(mv);
  Assignment env;
  for (int s = 0; s < alg.sig.sort_count; ++s)
    env.val.emplace_back(mv[s] + 1, -1);
  return env;
}

Elem Assignment::get(int sort, int index) const {
  if (sort >= static_cast<int>(val.size()) ||
      index >= static_cast<int>(val[sort].size()) || val[sort][index] < 0)
    throw UnboundVariable("variable (" + std::to_string(sort) + "," +
                          std::to_string(index) + ") unbound");
  return val[sort][index];
}

Elem eval_term(const FiniteAlgebra& alg, const Term& t, const Assignment& env) {
  if (t.is_var()) {
    Elem e = env.get(t.sort, t.var_index);
    if (e >= alg.sizes[t.sort])
      throw SortMismatch("assignment value out of range");
    return e;
  }
  std::vector<Elem> args(t.children.size());
  for (std::size_t i = 0; i < t.children.size(); ++i)
    args[i] = eval_term(alg, t.children[i], env);
  return alg.apply(t.symbol, args);
}

HoldsResult holds(const FiniteAlgebra& alg, const Identity& id,
                  const Budget& budget) {
  if (id.lhs.sort != id.rhs.sort) throw SortMismatch();
  std::vector<int> mv(alg.sig.sort_count, -1);
  id.lhs.max_vars(mv);
  id.rhs.max_vars(mv);

  // variables in (sort, index) order; first variable most significant
  struct Slot {
    int sort;
    int index;
  };
  std::vector<Slot> slots;
  std::uint64_t total = 1;
  for (int s = 0; s < alg.sig.sort_count; ++s)
    for (int i = 0; i <= mv[s]; ++i) {
      slots.push_back({s, i});
      total *= static_cast<std::uint64_t>(alg.sizes[s]);
      if (total > budget.assignment_cap)
        throw BudgetExceeded("holds: assignment count exceeds budget");
    }

  Assignment env;
  for (int s = 0; s < alg.sig.sort_count; ++s) env.val.emplace_back(mv[s] + 1, 0);

  for (std::uint64_t n = 0; n < total; ++n) {
    if (eval_term(alg, id.lhs, env) != eval_term(alg, id.rhs, env))
      return {false, env};
    for (int i = static_cast<int>(slots.size()) - 1; i >= 0; --i) {
      Elem& v = env.val[slots[i].sort][slots[i].index];
      if (++v < alg.sizes[slots[i].sort]) break;
      v = 0;
    }
  }
  return {true, std::nullopt};
}

}  // namespace finvar
