#include "finvar/subalgebra.hpp"

namespace finvar {

Term ClosureResult::rep_term(const FiniteAlgebra& alg, int sort, Elem e) const {
  int idx = discovery[sort][e];
  if (idx < 0) throw Error("element not in closure");
  const Origin& o = origins[sort][idx];
  if (o.sym < 0) return Term::var(sort, o.gen_index);
  const OpSym& op = alg.sig.symbols[o.sym];
  std::vector<Term> children;
  children.reserve(o.args.size());
  for (std::size_t i = 0; i < o.args.size(); ++i) {
    int as = op.arg_sorts[i];
    children.push_back(rep_term(alg, as, order[as][o.args[i]]));
  }
  return Term::app(alg.sig, o.sym, std::move(children));
}

ClosureResult close_under_ops(const FiniteAlgebra& alg,
                              const std::vector<std::vector<Elem>>& gens,
                              const Budget& budget) {
  const int ns = alg.sig.sort_count;
  if (static_cast<int>(gens.size()) != ns)
    throw Error("generator list does not match sort count");

  ClosureResult r;
  r.universe = SubUniverse::empty(alg);
  r.order.resize(ns);
  r.origins.resize(ns);
  r.discovery.resize(ns);
  for (int s = 0; s < ns; ++s) r.discovery[s].assign(alg.sizes[s], -1);

  std::uint64_t total = 0;
  auto add = [&](int sort, Elem e, Origin o) {
    if (r.discovery[sort][e] >= 0) return false;
    if (++total > budget.element_cap)
      throw BudgetExceeded("closure exceeds element cap");
    r.discovery[sort][e] = static_cast<int>(r.order[sort].size());
    r.order[sort].push_back(e);
    r.origins[sort].push_back(std::move(o));
    r.universe.in[sort][e] = 1;
    return true;
  };

  for (int s = 0; s < ns; ++s)
    for (std::size_t i = 0; i < gens[s].size(); ++i) {
      Elem e = gens[s][i];
      if (e < 0 || e >= alg.sizes[s]) throw Error("generator out of range");
      Origin o;
      o.gen_index = static_cast<int>(i);
      add(s, e, std::move(o));
    }

  // snapshot counts at the start of each round; a tuple is scanned only if
  // it involves an element from the newest frontier
  std::vector<int> prev(ns, 0);
  bool first_round = true;
  for (;;) {
    std::vector<int> snap(ns);
    for (int s = 0; s < ns; ++s) snap[s] = static_cast<int>(r.order[s].size());
    bool grew = false;

    for (std::size_t sym = 0; sym < alg.sig.symbols.size(); ++sym) {
      const OpSym& op = alg.sig.symbols[sym];
      int k = op.arity();
      if (k == 0) {
        if (first_round) {
          Origin o;
          o.sym = static_cast<int>(sym);
          grew |= add(op.out_sort, alg.tables[sym][0], std::move(o));
        }
        continue;
      }
      std::vector<int> idx(k, 0);
      bool any = true;
      for (int i = 0; i < k; ++i)
        if (snap[op.arg_sorts[i]] == 0) any = false;
      if (!any) continue;
      std::vector<Elem> args(k);
      for (;;) {
        bool fresh = first_round;
        for (int i = 0; i < k && !fresh; ++i)
          if (idx[i] >= prev[op.arg_sorts[i]]) fresh = true;
        if (fresh) {
          for (int i = 0; i < k; ++i) args[i] = r.order[op.arg_sorts[i]][idx[i]];
          Elem res = alg.apply(static_cast<int>(sym), args);
          if (r.discovery[op.out_sort][res] < 0) {
            Origin o;
            o.sym = static_cast<int>(sym);
            o.args = idx;
            add(op.out_sort, res, std::move(o));
            grew = true;
          }
        }
        int i = k - 1;
        for (; i >= 0; --i) {
          if (++idx[i] < snap[op.arg_sorts[i]]) break;
          idx[i] = 0;
        }
        if (i < 0) break;
      }
    }
    first_round = false;
    if (!grew) break;
    prev = std::move(snap);
  }
  return r;
}

ClosureResult generate_subalgebra(const FiniteAlgebra& alg,
                                  const std::vector<std::vector<Elem>>& gens,
                                  const Budget& budget) {
  ClosureResult r = close_under_ops(alg, gens, budget);
  for (int s = 0; s < alg.sig.sort_count; ++s)
    if (r.order[s].empty())
      throw EmptySortUnreachable("closure leaves sort " + std::to_string(s) +
                                 " empty");
  return r;
}

}  // namespace finvar
