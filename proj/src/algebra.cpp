#include "finvar/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace finvar {

std::size_t FiniteAlgebra::table_size(int sym) const {
  std::size_t n = 1;
  for (int s : sig.symbols[sym].arg_sorts) n *= static_cast<std::size_t>(sizes[s]);
  return n;
}

FiniteAlgebra FiniteAlgebra::make(Signature sig, std::vector<int> sizes,
                                  std::vector<std::vector<Elem>> tables,
                                  std::vector<std::vector<std::string>> labels) {
  sig.validate();
  FiniteAlgebra a;
  a.sig = std::move(sig);
  a.sizes = std::move(sizes);
  a.tables = std::move(tables);
  a.labels = std::move(labels);
  if (static_cast<int>(a.sizes.size()) != a.sig.sort_count)
    throw Error("size list does not match sort count");
  for (int n : a.sizes)
    if (n < 1) throw EmptySortUnreachable("every sort must be nonempty");
  if (a.tables.size() != a.sig.symbols.size())
    throw Error("table list does not match symbol count");
  for (std::size_t i = 0; i < a.tables.size(); ++i) {
    const OpSym& op = a.sig.symbols[i];
    if (a.tables[i].size() != a.table_size(static_cast<int>(i)))
      throw Error("table for '" + op.name + "' has wrong length");
    for (Elem e : a.tables[i])
      if (e < 0 || e >= a.sizes[op.out_sort])
        throw Error("table entry for '" + op.name + "' out of range");
  }
  if (!a.labels.empty()) {
    if (static_cast<int>(a.labels.size()) != a.sig.sort_count)
      throw Error("label list does not match sort count");
    for (int s = 0; s < a.sig.sort_count; ++s)
      if (!a.labels[s].empty() &&
          a.labels[s].size() != static_cast<std::size_t>(a.sizes[s]))
        throw Error("labels for sort " + std::to_string(s) + " have wrong length");
  }
  return a;
}

std::string FiniteAlgebra::label(int sort, Elem e) const {
  if (!labels.empty() && !labels[sort].empty()) return labels[sort][e];
  return std::to_string(e);
}

std::size_t FiniteAlgebra::total_size() const {
  std::size_t n = 0;
  for (int s : sizes) n += static_cast<std::size_t>(s);
  return n;
}

SubUniverse SubUniverse::empty(const FiniteAlgebra& alg) {
  SubUniverse u;
  for (int n : alg.sizes) u.in.emplace_back(n, 0);
  return u;
}

SubUniverse SubUniverse::full(const FiniteAlgebra& alg) {
  SubUniverse u;
  for (int n : alg.sizes) u.in.emplace_back(n, 1);
  return u;
}

bool SubUniverse::subset_of(const SubUniverse& other) const {
  for (std::size_t s = 0; s < in.size(); ++s)
    for (std::size_t e = 0; e < in[s].size(); ++e)
      if (in[s][e] && !other.in[s][e]) return false;
  return true;
}

std::vector<Elem> SubUniverse::elements(int sort) const {
  std::vector<Elem> out;
  for (std::size_t e = 0; e < in[sort].size(); ++e)
    if (in[sort][e]) out.push_back(static_cast<Elem>(e));
  return out;
}

std::size_t SubUniverse::count(int sort) const {
  return static_cast<std::size_t>(
      std::count(in[sort].begin(), in[sort].end(), 1));
}

std::size_t SubUniverse::total() const {
  std::size_t n = 0;
  for (std::size_t s = 0; s < in.size(); ++s) n += count(static_cast<int>(s));
  return n;
}

bool SubUniverse::everywhere_nonempty() const {
  for (std::size_t s = 0; s < in.size(); ++s)
    if (count(static_cast<int>(s)) == 0) return false;
  return true;
}

Congruence Congruence::identity(const FiniteAlgebra& alg) {
  Congruence c;
  for (int n : alg.sizes) {
    std::vector<int> b(n);
    std::iota(b.begin(), b.end(), 0);
    c.block.push_back(std::move(b));
    c.block_count.push_back(n);
  }
  return c;
}

Congruence Congruence::all_in_one(const FiniteAlgebra& alg) {
  Congruence c;
  for (int n : alg.sizes) {
    c.block.emplace_back(n, 0);
    c.block_count.push_back(1);
  }
  return c;
}

Congruence Congruence::from_blocks(std::vector<std::vector<int>> block) {
  // renumber blocks by first occurrence
  Congruence c;
  for (auto& b : block) {
    std::map<int, int> renum;
    std::vector<int> nb(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      auto it = renum.find(b[i]);
      if (it == renum.end())
        it = renum.emplace(b[i], static_cast<int>(renum.size())).first;
      nb[i] = it->second;
    }
    c.block.push_back(std::move(nb));
    c.block_count.push_back(static_cast<int>(renum.size()));
  }
  return c;
}

bool Congruence::is_identity() const {
  for (std::size_t s = 0; s < block.size(); ++s)
    if (block_count[s] != static_cast<int>(block[s].size())) return false;
  return true;
}

bool Homomorphism::injective(const FiniteAlgebra& cod) const {
  for (std::size_t s = 0; s < map.size(); ++s) {
    std::vector<char> seen(cod.sizes[s], 0);
    for (Elem e : map[s]) {
      if (seen[e]) return false;
      seen[e] = 1;
    }
  }
  return true;
}

bool Homomorphism::surjective(const FiniteAlgebra& cod) const {
  for (std::size_t s = 0; s < map.size(); ++s) {
    std::vector<char> seen(cod.sizes[s], 0);
    for (Elem e : map[s]) seen[e] = 1;
    for (char c : seen)
      if (!c) return false;
  }
  return true;
}

namespace {

// Iterate all argument tuples of `op` over the given per-sort sizes in
// mixed-radix order (first argument most significant), calling fn with the
// tuple and its flat index.
template <typename Fn>
void for_each_tuple(const OpSym& op, const std::vector<int>& sizes, Fn&& fn) {
  int k = op.arity();
  std::vector<Elem> args(k, 0);
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(sizes[op.arg_sorts[i]]);
  for (std::size_t idx = 0; idx < total; ++idx) {
    fn(args, idx);
    for (int i = k - 1; i >= 0; --i) {
      if (++args[i] < sizes[op.arg_sorts[i]]) break;
      args[i] = 0;
    }
  }
}

}  // namespace

bool is_congruence(const FiniteAlgebra& alg, const Congruence& theta) {
  for (std::size_t sym = 0; sym < alg.sig.symbols.size(); ++sym) {
    const OpSym& op = alg.sig.symbols[sym];
    int k = op.arity();
    // map block tuples to result blocks; a clash means incompatibility
    std::map<std::vector<int>, int> seen;
    std::vector<int> key(k);
    bool ok = true;
    for_each_tuple(op, alg.sizes, [&](const std::vector<Elem>& args, std::size_t idx) {
      if (!ok) return;
      for (int i = 0; i < k; ++i) key[i] = theta.block[op.arg_sorts[i]][args[i]];
      int rb = theta.block[op.out_sort][alg.tables[sym][idx]];
      auto [it, inserted] = seen.emplace(key, rb);
      if (!inserted && it->second != rb) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

QuotientResult quotient(const FiniteAlgebra& alg, const Congruence& theta) {
  if (!is_congruence(alg, theta)) throw NotACongruence();
  FiniteAlgebra q;
  q.sig = alg.sig;
  q.sizes.assign(theta.block_count.begin(), theta.block_count.end());
  // representative per block: least element
  std::vector<std::vector<Elem>> rep(alg.sig.sort_count);
  for (int s = 0; s < alg.sig.sort_count; ++s) {
    rep[s].assign(theta.block_count[s], -1);
    for (Elem e = 0; e < alg.sizes[s]; ++e)
      if (rep[s][theta.block[s][e]] < 0) rep[s][theta.block[s][e]] = e;
  }
  for (std::size_t sym = 0; sym < alg.sig.symbols.size(); ++sym) {
    const OpSym& op = alg.sig.symbols[sym];
    int k = op.arity();
    std::vector<Elem> table;
    std::vector<Elem> lifted(k);
    for_each_tuple(op, q.sizes, [&](const std::vector<Elem>& args, std::size_t) {
      for (int i = 0; i < k; ++i) lifted[i] = rep[op.arg_sorts[i]][args[i]];
      table.push_back(theta.block[op.out_sort][alg.apply(
          static_cast<int>(sym), lifted)]);
    });
    q.tables.push_back(std::move(table));
  }
  Homomorphism proj;
  for (int s = 0; s < alg.sig.sort_count; ++s)
    proj.map.emplace_back(theta.block[s].begin(), theta.block[s].end());
  return {std::move(q), std::move(proj)};
}

FiniteAlgebra direct_product(const std::vector<const FiniteAlgebra*>& algs,
                             const Budget& budget) {
  if (algs.empty()) throw Error("direct_product of empty list");
  const Signature& sig = algs[0]->sig;
  for (const auto* a : algs)
    if (a->sig != sig) throw SignatureMismatch();

  FiniteAlgebra p;
  p.sig = sig;
  for (int s = 0; s < sig.sort_count; ++s) {
    std::uint64_t n = 1;
    for (const auto* a : algs) {
      n *= static_cast<std::uint64_t>(a->sizes[s]);
      if (n > budget.element_cap) throw BudgetExceeded("product universe too large");
    }
    p.sizes.push_back(static_cast<int>(n));
  }
  int m = static_cast<int>(algs.size());
  // decode tables per sort: element -> factor components, first factor most
  // significant
  auto decode = [&](int sort, Elem e, std::vector<Elem>& out) {
    for (int j = m - 1; j >= 0; --j) {
      int sz = algs[j]->sizes[sort];
      out[j] = e % sz;
      e /= sz;
    }
  };
  for (std::size_t sym = 0; sym < sig.symbols.size(); ++sym) {
    const OpSym& op = sig.symbols[sym];
    int k = op.arity();
    std::size_t tsize = 1;
    for (int i = 0; i < k; ++i)
      tsize *= static_cast<std::size_t>(p.sizes[op.arg_sorts[i]]);
    if (tsize > budget.table_cap) throw BudgetExceeded("product table too large");
    std::vector<Elem> table;
    table.reserve(tsize);
    std::vector<std::vector<Elem>> comp(k, std::vector<Elem>(m));
    std::vector<Elem> argbuf(k);
    for_each_tuple(op, p.sizes, [&](const std::vector<Elem>& args, std::size_t) {
      for (int i = 0; i < k; ++i) decode(op.arg_sorts[i], args[i], comp[i]);
      Elem res = 0;
      for (int j = 0; j < m; ++j) {
        for (int i = 0; i < k; ++i) argbuf[i] = comp[i][j];
        res = res * algs[j]->sizes[op.out_sort] +
              algs[j]->apply(static_cast<int>(sym), argbuf);
      }
      table.push_back(res);
    });
    p.tables.push_back(std::move(table));
  }
  return p;
}

FiniteAlgebra direct_power(const FiniteAlgebra& alg, int exponent,
                           const Budget& budget) {
  std::vector<const FiniteAlgebra*> algs(exponent, &alg);
  return direct_product(algs, budget);
}

bool is_homomorphism(const FiniteAlgebra& dom, const FiniteAlgebra& cod,
                     const Homomorphism& h) {
  if (dom.sig != cod.sig) throw SignatureMismatch();
  for (std::size_t sym = 0; sym < dom.sig.symbols.size(); ++sym) {
    const OpSym& op = dom.sig.symbols[sym];
    int k = op.arity();
    std::vector<Elem> mapped(k);
    bool ok = true;
    for_each_tuple(op, dom.sizes, [&](const std::vector<Elem>& args, std::size_t idx) {
      if (!ok) return;
      for (int i = 0; i < k; ++i) mapped[i] = h.map[op.arg_sorts[i]][args[i]];
      if (cod.apply(static_cast<int>(sym), mapped) !=
          h.map[op.out_sort][dom.tables[sym][idx]])
        ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

InducedResult induced_algebra(const FiniteAlgebra& alg, const SubUniverse& u) {
  InducedResult r;
  r.algebra.sig = alg.sig;
  std::vector<std::vector<int>> new_index(alg.sig.sort_count);
  for (int s = 0; s < alg.sig.sort_count; ++s) {
    new_index[s].assign(alg.sizes[s], -1);
    std::vector<Elem> olds = u.elements(s);
    if (olds.empty()) throw EmptySortUnreachable("induced universe empty in sort " +
                                                 std::to_string(s));
    for (std::size_t i = 0; i < olds.size(); ++i) new_index[s][olds[i]] = static_cast<int>(i);
    r.algebra.sizes.push_back(static_cast<int>(olds.size()));
    r.old_index.push_back(std::move(olds));
  }
  for (std::size_t sym = 0; sym < alg.sig.symbols.size(); ++sym) {
    const OpSym& op = alg.sig.symbols[sym];
    int k = op.arity();
    std::vector<Elem> table;
    std::vector<Elem> lifted(k);
    for_each_tuple(op, r.algebra.sizes, [&](const std::vector<Elem>& args, std::size_t) {
      for (int i = 0; i < k; ++i) lifted[i] = r.old_index[op.arg_sorts[i]][args[i]];
      Elem res = alg.apply(static_cast<int>(sym), lifted);
      Elem ni = new_index[op.out_sort][res];
      if (ni < 0) throw Error("subuniverse not closed under '" + op.name + "'");
      table.push_back(ni);
    });
    r.algebra.tables.push_back(std::move(table));
  }
  if (!alg.labels.empty()) {
    r.algebra.labels.resize(alg.sig.sort_count);
    for (int s = 0; s < alg.sig.sort_count; ++s)
      if (!alg.labels[s].empty())
        for (Elem old : r.old_index[s])
          r.algebra.labels[s].push_back(alg.labels[s][old]);
  }
  return r;
}

}  // namespace finvar
