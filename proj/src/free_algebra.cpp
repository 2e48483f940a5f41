#include "finvar/free_algebra.hpp"

#include <algorithm>

namespace finvar {

namespace {

// row/column classes of a binary table over the base algebra: two first
// arguments are equivalent when they induce the same row, so results of
// componentwise application depend only on the class vectors.
void base_classes(const FiniteAlgebra& a, int sym, std::vector<int>& row_cls,
                  std::vector<int>& col_cls) {
  const OpSym& op = a.sig.symbols[sym];
  int n1 = a.sizes[op.arg_sorts[0]];
  int n2 = a.sizes[op.arg_sorts[1]];
  row_cls.assign(n1, 0);
  col_cls.assign(n2, 0);
  {
    std::map<std::vector<Elem>, int> seen;
    std::vector<Elem> row(n2);
    for (int x = 0; x < n1; ++x) {
      for (int y = 0; y < n2; ++y) row[y] = a.tables[sym][static_cast<std::size_t>(x) * n2 + y];
      row_cls[x] = seen.emplace(row, static_cast<int>(seen.size())).first->second;
    }
  }
  {
    std::map<std::vector<Elem>, int> seen;
    std::vector<Elem> col(n1);
    for (int y = 0; y < n2; ++y) {
      for (int x = 0; x < n1; ++x) col[x] = a.tables[sym][static_cast<std::size_t>(x) * n2 + y];
      col_cls[y] = seen.emplace(col, static_cast<int>(seen.size())).first->second;
    }
  }
}

}  // namespace

VectorClosure::VectorClosure(const FiniteAlgebra& base,
                             std::vector<std::vector<std::vector<Elem>>> initial,
                             std::vector<std::vector<std::uint32_t>> initial_supports,
                             const Budget& budget)
    : base_(&base) {
  const int ns = base.sig.sort_count;
  if (static_cast<int>(initial.size()) != ns)
    throw Error("initial vector list does not match sort count");
  width_ = 0;
  for (int s = 0; s < ns && width_ == 0; ++s)
    if (!initial[s].empty()) width_ = initial[s][0].size();
  if (width_ == 0) throw Error("vector closure needs at least one vector");
  if (width_ > budget.vector_cap) throw BudgetExceeded("vector width exceeds budget");

  vectors_.resize(ns);
  origins_.resize(ns);
  support_.resize(ns);
  rounds_.resize(ns);
  initial_index_.resize(ns);
  dedup_.resize(ns);
  bins_.resize(base.sig.symbols.size());
  unary_.resize(base.sig.symbols.size());
  nullary_.assign(base.sig.symbols.size(), -1);
  row_key_maps_.resize(base.sig.symbols.size());
  col_key_maps_.resize(base.sig.symbols.size());

  for (std::size_t sym = 0; sym < base.sig.symbols.size(); ++sym) {
    if (base.sig.symbols[sym].arity() == 2)
      base_classes(base, static_cast<int>(sym), bins_[sym].row_class_of_base,
                   bins_[sym].col_class_of_base);
  }

  for (int s = 0; s < ns; ++s) {
    for (std::size_t i = 0; i < initial[s].size(); ++i) {
      auto& v = initial[s][i];
      if (v.size() != width_) throw Error("initial vectors have unequal widths");
      for (Elem e : v)
        if (e < 0 || e >= base.sizes[s]) throw Error("initial vector value out of range");
      Origin o;
      o.gen_index = static_cast<int>(i);
      std::uint32_t supp = initial_supports.empty() ? 0u : initial_supports[s][i];
      initial_index_[s].push_back(insert(s, std::move(v), std::move(o), supp, 0, budget));
    }
  }
  close(budget);
}

int VectorClosure::insert(int sort, std::vector<Elem> v, Origin o,
                          std::uint32_t supp, int round, const Budget& budget) {
  auto [it, fresh] =
      dedup_[sort].emplace(std::move(v), static_cast<int>(vectors_[sort].size()));
  if (!fresh) return it->second;
  std::uint64_t total = 0;
  for (const auto& vs : vectors_) total += vs.size();
  if (total + 1 > budget.element_cap)
    throw BudgetExceeded("vector closure exceeds element cap");
  int idx = it->second;
  vectors_[sort].push_back(it->first);
  origins_[sort].push_back(std::move(o));
  support_[sort].push_back(supp);
  rounds_[sort].push_back(round);

  // class ids for every binary symbol taking this sort as an argument
  for (std::size_t sym = 0; sym < base_->sig.symbols.size(); ++sym) {
    const OpSym& op = base_->sig.symbols[sym];
    if (op.arity() != 2) continue;
    BinTable& bt = bins_[sym];
    const std::vector<Elem>& vec = vectors_[sort].back();
    if (op.arg_sorts[0] == sort) {
      std::vector<int> cls(width_);
      for (std::uint64_t i = 0; i < width_; ++i) cls[i] = bt.row_class_of_base[vec[i]];
      auto& m = row_key_maps_[sym];
      auto [cit, cfresh] = m.emplace(std::move(cls), static_cast<int>(m.size()));
      bt.rid.push_back(cit->second);
      if (cfresh) bt.grid.emplace_back();  // new row
      std::size_t cols = col_key_maps_[sym].size();
      for (auto& rowv : bt.grid) rowv.resize(cols, -1);
    }
    if (op.arg_sorts[1] == sort) {
      std::vector<int> cls(width_);
      for (std::uint64_t i = 0; i < width_; ++i) cls[i] = bt.col_class_of_base[vec[i]];
      auto& m = col_key_maps_[sym];
      auto [cit, cfresh] = m.emplace(std::move(cls), static_cast<int>(m.size()));
      bt.cid.push_back(cit->second);
      std::size_t cols = m.size();
      for (auto& rowv : bt.grid) rowv.resize(cols, -1);
    }
  }
  return idx;
}

void VectorClosure::close(const Budget& budget) {
  const Signature& sig = base_->sig;
  const int ns = sig.sort_count;
  std::vector<int> prev(ns, 0);
  bool first_round = true;
  int round = 1;
  for (;;) {
    std::vector<int> snap(ns);
    for (int s = 0; s < ns; ++s) snap[s] = size(s);
    bool grew = false;

    for (std::size_t sym = 0; sym < sig.symbols.size(); ++sym) {
      const OpSym& op = sig.symbols[sym];
      if (op.arity() == 0) {
        if (first_round) {
          std::vector<Elem> v(width_, base_->tables[sym][0]);
          Origin o;
          o.sym = static_cast<int>(sym);
          int before = size(op.out_sort);
          insert(op.out_sort, std::move(v), std::move(o), 0, round, budget);
          grew |= size(op.out_sort) != before;
        }
        nullary_[sym] = dedup_[op.out_sort].at(
            std::vector<Elem>(width_, base_->tables[sym][0]));
        continue;
      }
      if (op.arity() == 1) {
        int s0 = op.arg_sorts[0];
        unary_[sym].resize(snap[s0], -1);
        int start = first_round ? 0 : prev[s0];
        for (int i = start; i < snap[s0]; ++i) {
          const std::vector<Elem>& u = vectors_[s0][i];
          std::vector<Elem> v(width_);
          for (std::uint64_t t = 0; t < width_; ++t) v[t] = base_->tables[sym][u[t]];
          Origin o;
          o.sym = static_cast<int>(sym);
          o.args = {i};
          int before = size(op.out_sort);
          int res = insert(op.out_sort, std::move(v), std::move(o),
                           support_[s0][i], round, budget);
          grew |= size(op.out_sort) != before;
          unary_[sym][i] = res;
        }
        continue;
      }
      if (op.arity() == 2) {
        int s0 = op.arg_sorts[0], s1 = op.arg_sorts[1];
        BinTable& bt = bins_[sym];
        int n2 = base_->sizes[s1];
        for (int i = 0; i < snap[s0]; ++i) {
          bool i_new = first_round || i >= prev[s0];
          int jstart = i_new ? 0 : prev[s1];
          const std::vector<Elem>* u = &vectors_[s0][i];
          for (int j = jstart; j < snap[s1]; ++j) {
            int cell = bt.grid[bt.rid[i]][bt.cid[j]];
            if (cell >= 0) continue;
            const std::vector<Elem>& w = vectors_[s1][j];
            std::vector<Elem> v(width_);
            for (std::uint64_t t = 0; t < width_; ++t)
              v[t] = base_->tables[sym][static_cast<std::size_t>((*u)[t]) * n2 + w[t]];
            Origin o;
            o.sym = static_cast<int>(sym);
            o.args = {i, j};
            int before = size(op.out_sort);
            int res = insert(op.out_sort, std::move(v), std::move(o),
                             support_[s0][i] | support_[s1][j], round, budget);
            grew |= size(op.out_sort) != before;
            u = &vectors_[s0][i];  // insert may reallocate
            bt.grid[bt.rid[i]][bt.cid[j]] = res;
          }
        }
        continue;
      }
      // general arity: plain frontier scan
      int k = op.arity();
      std::vector<int> idx(k, 0);
      bool any = true;
      for (int i = 0; i < k; ++i)
        if (snap[op.arg_sorts[i]] == 0) any = false;
      if (!any) continue;
      for (;;) {
        bool fresh = first_round;
        for (int i = 0; i < k && !fresh; ++i)
          if (idx[i] >= prev[op.arg_sorts[i]]) fresh = true;
        if (fresh) {
          std::vector<Elem> v(width_);
          std::vector<Elem> args(k);
          for (std::uint64_t t = 0; t < width_; ++t) {
            for (int i = 0; i < k; ++i) args[i] = vectors_[op.arg_sorts[i]][idx[i]][t];
            v[t] = base_->apply(static_cast<int>(sym), args);
          }
          std::uint32_t supp = 0;
          for (int i = 0; i < k; ++i) supp |= support_[op.arg_sorts[i]][idx[i]];
          Origin o;
          o.sym = static_cast<int>(sym);
          o.args = idx;
          int before = size(op.out_sort);
          insert(op.out_sort, std::move(v), std::move(o), supp, round, budget);
          grew |= size(op.out_sort) != before;
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
    if (!grew) {
      // final pass filled every reachable grid cell and unary image
      for (std::size_t sym = 0; sym < sig.symbols.size(); ++sym)
        if (sig.symbols[sym].arity() == 1)
          unary_[sym].resize(size(sig.symbols[sym].arg_sorts[0]), -1);
      break;
    }
    prev = std::move(snap);
    ++round;
  }
  current_round_ = round;
}

const VectorClosure::BinTable* VectorClosure::bin(int sym) const {
  if (base_->sig.symbols[sym].arity() != 2) return nullptr;
  return &bins_[sym];
}

int VectorClosure::apply(int sym, std::span<const int> args) const {
  const OpSym& op = base_->sig.symbols[sym];
  switch (op.arity()) {
    case 0:
      return nullary_[sym];
    case 1:
      return unary_[sym][args[0]];
    case 2: {
      const BinTable& bt = bins_[sym];
      int r = bt.grid[bt.rid[args[0]]][bt.cid[args[1]]];
      if (r < 0) throw Error("vector closure grid cell missing");
      return r;
    }
    default: {
      std::vector<Elem> v(width_);
      std::vector<Elem> a(op.arity());
      for (std::uint64_t t = 0; t < width_; ++t) {
        for (int i = 0; i < op.arity(); ++i) a[i] = vectors_[op.arg_sorts[i]][args[i]][t];
        v[t] = base_->apply(sym, a);
      }
      auto it = dedup_[op.out_sort].find(v);
      if (it == dedup_[op.out_sort].end()) throw Error("vector closure not closed");
      return it->second;
    }
  }
}

Term VectorClosure::rep_term(int sort, int idx) const {
  const Origin& o = origins_[sort][idx];
  if (o.sym < 0) return Term::var(sort, o.gen_index);
  const OpSym& op = base_->sig.symbols[o.sym];
  std::vector<Term> children;
  for (std::size_t i = 0; i < o.args.size(); ++i)
    children.push_back(rep_term(op.arg_sorts[i], o.args[i]));
  return Term::app(base_->sig, o.sym, std::move(children));
}

const std::vector<std::pair<int, int>>& VectorClosure::processing_order() const {
  if (proc_order_.empty()) {
    for (int s = 0; s < base_->sig.sort_count; ++s)
      for (int i = 0; i < size(s); ++i) proc_order_.push_back({s, i});
    std::stable_sort(proc_order_.begin(), proc_order_.end(),
                     [&](const auto& x, const auto& y) {
                       return rounds_[x.first][x.second] < rounds_[y.first][y.second];
                     });
  }
  return proc_order_;
}

FiniteAlgebra VectorClosure::materialize(const Budget& budget) const {
  FiniteAlgebra out;
  out.sig = base_->sig;
  for (int s = 0; s < base_->sig.sort_count; ++s) out.sizes.push_back(size(s));
  for (std::size_t sym = 0; sym < base_->sig.symbols.size(); ++sym) {
    const OpSym& op = base_->sig.symbols[sym];
    std::size_t tsize = 1;
    for (int s : op.arg_sorts) tsize *= static_cast<std::size_t>(out.sizes[s]);
    if (tsize > budget.table_cap)
      throw BudgetExceeded("free-algebra table exceeds budget");
    std::vector<Elem> table;
    table.reserve(tsize);
    int k = op.arity();
    std::vector<int> idx(k, 0);
    for (std::size_t n = 0; n < tsize; ++n) {
      table.push_back(apply(static_cast<int>(sym), idx));
      for (int i = k - 1; i >= 0; --i) {
        if (++idx[i] < out.sizes[op.arg_sorts[i]]) break;
        idx[i] = 0;
      }
    }
    out.tables.push_back(std::move(table));
  }
  return out;
}

FreeAlgebra free_algebra(const FiniteAlgebra& a,
                         const std::vector<int>& gens_per_sort,
                         const Budget& budget) {
  const int ns = a.sig.sort_count;
  if (static_cast<int>(gens_per_sort.size()) != ns)
    throw Error("generator counts do not match sort count");
  FreeAlgebra f;
  f.gens_per_sort = gens_per_sort;
  int total_gens = 0;
  for (int s = 0; s < ns; ++s) {
    if (gens_per_sort[s] < 0) throw Error("negative generator count");
    for (int i = 0; i < gens_per_sort[s]; ++i) f.slots.push_back({s, i});
    total_gens += gens_per_sort[s];
  }
  if (total_gens == 0) throw Error("free algebra needs at least one generator");
  if (total_gens > 31) throw BudgetExceeded("too many free generators");

  std::uint64_t n_assign = 1;
  for (auto [s, i] : f.slots) {
    n_assign *= static_cast<std::uint64_t>(a.sizes[s]);
    if (n_assign > budget.vector_cap)
      throw BudgetExceeded("free algebra assignment space exceeds budget");
  }

  // projection vectors: slot t cycles with period = product of later sizes
  std::vector<std::uint64_t> period(f.slots.size());
  {
    std::uint64_t p = 1;
    for (int t = static_cast<int>(f.slots.size()) - 1; t >= 0; --t) {
      period[t] = p;
      p *= static_cast<std::uint64_t>(a.sizes[f.slots[t].first]);
    }
  }
  std::vector<std::vector<std::vector<Elem>>> initial(ns);
  std::vector<std::vector<std::uint32_t>> supports(ns);
  for (std::size_t t = 0; t < f.slots.size(); ++t) {
    auto [s, i] = f.slots[t];
    std::vector<Elem> v(n_assign);
    int sz = a.sizes[s];
    for (std::uint64_t x = 0; x < n_assign; ++x)
      v[x] = static_cast<Elem>((x / period[t]) % sz);
    initial[s].push_back(std::move(v));
    supports[s].push_back(1u << t);
  }
  f.closure = std::make_shared<VectorClosure>(a, std::move(initial),
                                              std::move(supports), budget);
  f.designations.resize(ns);
  std::vector<int> seen(ns, 0);
  for (auto [s, i] : f.slots)
    f.designations[s].push_back(f.closure->initial_index(s, seen[s]++));
  return f;
}

Identity QuotientViolation::identity(const FreeAlgebra& f,
                                     const Signature& sig) const {
  if (sym < 0)
    return Identity::make(Term::var(sort, args[0]), f.rep(sort, result));
  const OpSym& op = sig.symbols[sym];
  std::vector<Term> children;
  for (std::size_t i = 0; i < args.size(); ++i)
    children.push_back(f.rep(op.arg_sorts[i], args[i]));
  Term lhs = Term::app(sig, sym, std::move(children));
  return Identity::make(std::move(lhs), f.rep(op.out_sort, result));
}

namespace {

// forced-map walk: vals of every free element under the given generator
// images, processed so arguments are always evaluated first
void walk_vals(const FreeAlgebra& f, const FiniteAlgebra& target,
               const std::vector<std::vector<Elem>>& images,
               std::vector<std::vector<Elem>>& vals) {
  const VectorClosure& c = *f.closure;
  const Signature& sig = target.sig;
  vals.resize(sig.sort_count);
  for (int s = 0; s < sig.sort_count; ++s) vals[s].assign(c.size(s), -1);
  for (const auto& [s, i] : c.processing_order()) {
    const Origin& o = c.origin(s, i);
    if (o.sym < 0) {
      vals[s][i] = images[s][o.gen_index];
    } else {
      const OpSym& op = sig.symbols[o.sym];
      std::vector<Elem> a(o.args.size());
      for (std::size_t t = 0; t < o.args.size(); ++t)
        a[t] = vals[op.arg_sorts[t]][o.args[t]];
      vals[s][i] = target.apply(o.sym, a);
    }
  }
}

std::optional<QuotientViolation> scan_entries(
    const FreeAlgebra& f, const FiniteAlgebra& target,
    const std::vector<std::vector<Elem>>& images,
    const std::vector<std::vector<Elem>>& vals) {
  const VectorClosure& c = *f.closure;
  const Signature& sig = target.sig;
  // generator designations: collapsed generators force target equalities
  for (int s = 0; s < sig.sort_count; ++s)
    for (int g = 0; g < f.gens_per_sort[s]; ++g) {
      int e = f.designations[s][g];
      if (vals[s][e] != images[s][g]) {
        QuotientViolation v;
        v.sym = -1;
        v.sort = s;
        v.args = {g};
        v.result = e;
        return v;
      }
    }
  for (std::size_t sym = 0; sym < sig.symbols.size(); ++sym) {
    const OpSym& op = sig.symbols[sym];
    if (op.arity() == 0) {
      int e = f.closure->nullary_value(static_cast<int>(sym));
      if (vals[op.out_sort][e] != target.tables[sym][0]) {
        QuotientViolation v;
        v.sym = static_cast<int>(sym);
        v.sort = op.out_sort;
        v.result = e;
        return v;
      }
    } else if (op.arity() == 1) {
      int s0 = op.arg_sorts[0];
      for (int i = 0; i < c.size(s0); ++i) {
        int e = c.unary_image(static_cast<int>(sym), i);
        if (vals[op.out_sort][e] != target.apply1(static_cast<int>(sym), vals[s0][i])) {
          QuotientViolation v;
          v.sym = static_cast<int>(sym);
          v.sort = op.out_sort;
          v.args = {i};
          v.result = e;
          return v;
        }
      }
    } else if (op.arity() == 2) {
      int s0 = op.arg_sorts[0], s1 = op.arg_sorts[1];
      const auto* bt = c.bin(static_cast<int>(sym));
      int n2 = target.sizes[s1];
      const std::vector<Elem>& tbl = target.tables[sym];
      const std::vector<Elem>& v0 = vals[s0];
      const std::vector<Elem>& v1 = vals[s1];
      const std::vector<Elem>& vo = vals[op.out_sort];
      for (int i = 0; i < c.size(s0); ++i) {
        const std::vector<int>& row = bt->grid[bt->rid[i]];
        std::size_t base = 0;
        Elem vi = v0[i];
        for (int j = 0; j < c.size(s1); ++j) {
          int e = row[bt->cid[j]];
          if (vo[e] != tbl[static_cast<std::size_t>(vi) * n2 + v1[j]]) {
            QuotientViolation v;
            v.sym = static_cast<int>(sym);
            v.sort = op.out_sort;
            v.args = {i, j};
            v.result = e;
            return v;
          }
        }
        (void)base;
      }
    } else {
      int k = op.arity();
      std::vector<int> idx(k, 0);
      std::vector<Elem> a(k);
      for (;;) {
        for (int i = 0; i < k; ++i) a[i] = vals[op.arg_sorts[i]][idx[i]];
        int e = c.apply(static_cast<int>(sym), idx);
        if (vals[op.out_sort][e] != target.apply(static_cast<int>(sym), a)) {
          QuotientViolation v;
          v.sym = static_cast<int>(sym);
          v.sort = op.out_sort;
          v.args = idx;
          v.result = e;
          return v;
        }
        int i = k - 1;
        for (; i >= 0; --i) {
          if (++idx[i] < c.size(op.arg_sorts[i])) break;
          idx[i] = 0;
        }
        if (i < 0) break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<QuotientViolation> check_free_quotient(
    const FreeAlgebra& f, const FiniteAlgebra& target,
    const std::vector<std::vector<Elem>>& images) {
  if (f.closure->base().sig != target.sig) throw SignatureMismatch();
  std::vector<std::vector<Elem>> vals;
  walk_vals(f, target, images, vals);
  return scan_entries(f, target, images, vals);
}

InVarietyResult in_variety(const FiniteAlgebra& b, const FiniteAlgebra& a,
                           const Budget& budget) {
  if (b.sig != a.sig) throw SignatureMismatch();
  FreeAlgebra f = free_algebra(a, b.sizes, budget);
  std::vector<std::vector<Elem>> images(b.sig.sort_count);
  for (int s = 0; s < b.sig.sort_count; ++s)
    for (Elem e = 0; e < b.sizes[s]; ++e) images[s].push_back(e);

  std::vector<std::vector<Elem>> vals;
  walk_vals(f, b, images, vals);
  if (auto viol = scan_entries(f, b, images, vals))
    return {false, std::nullopt, viol};

  MembershipCertificate cert;
  cert.exponent = f.closure->width();
  cert.generators.resize(b.sig.sort_count);
  cert.congruence_blocks.resize(b.sig.sort_count);
  cert.embedding.resize(b.sig.sort_count);
  std::vector<int> seen(b.sig.sort_count, 0);
  for (auto [s, i] : f.slots) {
    (void)i;
    cert.generators[s].push_back(
        f.closure->vec(s, f.closure->initial_index(s, seen[s]++)));
  }
  for (int s = 0; s < b.sig.sort_count; ++s) {
    // blocks = kernel of the forced map, numbered by first occurrence
    std::map<Elem, int> block_of_val;
    for (int i = 0; i < f.closure->size(s); ++i) {
      auto it = block_of_val.emplace(vals[s][i], static_cast<int>(block_of_val.size())).first;
      cert.congruence_blocks[s].push_back(it->second);
    }
    cert.embedding[s].resize(b.sizes[s]);
    for (Elem e = 0; e < b.sizes[s]; ++e) cert.embedding[s][e] = block_of_val.at(e);
  }
  return {true, std::move(cert), std::nullopt};
}

bool verify_certificate(const FiniteAlgebra& b, const FiniteAlgebra& a,
                        const MembershipCertificate& cert, const Budget& budget,
                        std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (b.sig != a.sig) return fail("signature mismatch");
  // stage 1: re-close the generators; a closed set is a subuniverse
  std::vector<std::vector<std::uint32_t>> no_supports;
  VectorClosure cl(a, cert.generators, no_supports, budget);
  for (int s = 0; s < a.sig.sort_count; ++s)
    if (static_cast<int>(cert.congruence_blocks[s].size()) != cl.size(s))
      return fail("congruence blocks misaligned with closure");

  // stage 2: compatibility of the block partition with every table
  int ns = a.sig.sort_count;
  std::vector<int> nblocks(ns, 0);
  for (int s = 0; s < ns; ++s) {
    for (int blk : cert.congruence_blocks[s]) {
      if (blk < 0 || blk >= cl.size(s)) return fail("block id out of range");
      nblocks[s] = std::max(nblocks[s], blk + 1);
    }
  }
  // result map per symbol: block tuple -> result block
  std::vector<std::map<std::vector<int>, int>> qtable(a.sig.symbols.size());
  for (std::size_t sym = 0; sym < a.sig.symbols.size(); ++sym) {
    const OpSym& op = a.sig.symbols[sym];
    int k = op.arity();
    std::vector<int> idx(k, 0);
    bool any = true;
    for (int i = 0; i < k; ++i)
      if (cl.size(op.arg_sorts[i]) == 0) any = false;
    if (!any) continue;
    std::vector<int> key(k);
    for (;;) {
      for (int i = 0; i < k; ++i) key[i] = cert.congruence_blocks[op.arg_sorts[i]][idx[i]];
      int res = cl.apply(static_cast<int>(sym), idx);
      int rb = cert.congruence_blocks[op.out_sort][res];
      auto [it, fresh] = qtable[sym].emplace(key, rb);
      if (!fresh && it->second != rb) return fail("partition is not a congruence");
      int i = k - 1;
      for (; i >= 0; --i) {
        if (++idx[i] < cl.size(op.arg_sorts[i])) break;
        idx[i] = 0;
      }
      if (i < 0) break;
    }
  }

  // stage 3: the embedding is an injective homomorphism into the quotient
  for (int s = 0; s < ns; ++s) {
    if (static_cast<int>(cert.embedding[s].size()) != b.sizes[s])
      return fail("embedding has wrong domain");
    std::vector<char> used(nblocks[s], 0);
    for (int blk : cert.embedding[s]) {
      if (blk < 0 || blk >= nblocks[s]) return fail("embedding block out of range");
      if (used[blk]) return fail("embedding not injective");
      used[blk] = 1;
    }
  }
  for (std::size_t sym = 0; sym < b.sig.symbols.size(); ++sym) {
    const OpSym& op = b.sig.symbols[sym];
    int k = op.arity();
    std::vector<Elem> idx(k, 0);
    std::size_t tsize = b.table_size(static_cast<int>(sym));
    std::vector<int> key(k);
    for (std::size_t n = 0; n < tsize; ++n) {
      for (int i = 0; i < k; ++i) key[i] = cert.embedding[op.arg_sorts[i]][idx[i]];
      auto it = qtable[sym].find(key);
      if (it == qtable[sym].end()) return fail("embedding image not closed in quotient");
      if (it->second != cert.embedding[op.out_sort][b.tables[sym][n]])
        return fail("embedding does not commute with operations");
      for (int i = k - 1; i >= 0; --i) {
        if (++idx[i] < b.sizes[op.arg_sorts[i]]) break;
        idx[i] = 0;
      }
    }
  }
  return true;
}

namespace {

// next k-combination of {0..n-1} in lexicographic order; false when done
bool next_combination(std::vector<int>& c, int n) {
  int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - (k - i)) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

InVnResult in_Vn(const FiniteAlgebra& b, const FiniteAlgebra& a, int n,
                 const Budget& budget) {
  if (b.sig != a.sig) throw SignatureMismatch();
  if (n < 1) throw Error("n must be positive");
  const int ns = b.sig.sort_count;
  FreeAlgebra f = free_algebra(a, std::vector<int>(ns, n), budget);

  InVnResult out;
  std::vector<SubUniverse> verified;

  // per-sort subset sizes, largest totals first so subsumption prunes most
  std::vector<std::vector<int>> size_vectors;
  {
    std::vector<int> sv(ns, 1);
    for (;;) {
      size_vectors.push_back(sv);
      int i = ns - 1;
      for (; i >= 0; --i) {
        if (sv[i] < std::min(n, b.sizes[i])) {
          ++sv[i];
          for (int j = i + 1; j < ns; ++j) sv[j] = 1;
          break;
        }
      }
      if (i < 0) break;
    }
    std::stable_sort(size_vectors.begin(), size_vectors.end(),
                     [](const auto& x, const auto& y) {
                       int sx = 0, sy = 0;
                       for (int v : x) sx += v;
                       for (int v : y) sy += v;
                       if (sx != sy) return sx > sy;
                       return x > y;
                     });
  }

  for (const auto& sv : size_vectors) {
    // odometer over per-sort combinations
    std::vector<std::vector<int>> combos(ns);
    for (int s = 0; s < ns; ++s) {
      combos[s].resize(sv[s]);
      for (int i = 0; i < sv[s]; ++i) combos[s][i] = i;
    }
    for (;;) {
      ++out.subalgebras_tested;
      if (out.subalgebras_tested > budget.search_cap)
        throw BudgetExceeded("in_Vn candidate budget exceeded");
      // subsumption: generators inside an already verified subalgebra
      bool pruned = false;
      for (const SubUniverse& u : verified) {
        bool inside = true;
        for (int s = 0; s < ns && inside; ++s)
          for (int e : combos[s])
            if (!u.in[s][e]) {
              inside = false;
              break;
            }
        if (inside) {
          pruned = true;
          break;
        }
      }
      if (pruned) {
        ++out.candidates_pruned;
      } else {
        std::vector<std::vector<Elem>> gens(ns);
        for (int s = 0; s < ns; ++s)
          gens[s].assign(combos[s].begin(), combos[s].end());
        ClosureResult cl = close_under_ops(b, gens, budget);
        std::vector<std::vector<Elem>> images(ns);
        for (int s = 0; s < ns; ++s)
          for (int g = 0; g < n; ++g)
            images[s].push_back(gens[s][std::min<std::size_t>(g, gens[s].size() - 1)]);
        if (auto viol = check_free_quotient(f, b, images)) {
          out.member = false;
          out.failing_gens = gens;
          out.violation = viol;
          return out;
        }
        verified.push_back(std::move(cl.universe));
      }
      // advance odometer
      int s = ns - 1;
      for (; s >= 0; --s) {
        if (next_combination(combos[s], b.sizes[s])) break;
        for (int i = 0; i < sv[s]; ++i) combos[s][i] = i;
      }
      if (s < 0) break;
    }
  }
  return out;
}

std::vector<Identity> vn_basis(const FiniteAlgebra& a, int n,
                               const Budget& budget) {
  FreeAlgebra f = free_algebra(a, std::vector<int>(a.sig.sort_count, n), budget);
  const VectorClosure& c = *f.closure;
  std::uint64_t total = 0;
  for (std::size_t sym = 0; sym < a.sig.symbols.size(); ++sym) {
    const OpSym& op = a.sig.symbols[sym];
    std::uint64_t t = 1;
    for (int s : op.arg_sorts) t *= static_cast<std::uint64_t>(c.size(s));
    total += t;
  }
  if (total > budget.element_cap)
    throw BudgetExceeded("vn_basis identity count exceeds budget");

  std::vector<Identity> out;
  for (int s = 0; s < a.sig.sort_count; ++s)
    for (int g = 0; g < n; ++g) {
      Term var = Term::var(s, g);
      Term rep = f.rep(s, f.designations[s][g]);
      if (!(var == rep)) out.push_back(Identity::make(var, rep));
    }
  for (std::size_t sym = 0; sym < a.sig.symbols.size(); ++sym) {
    const OpSym& op = a.sig.symbols[sym];
    int k = op.arity();
    std::vector<int> idx(k, 0);
    bool any = true;
    for (int i = 0; i < k; ++i)
      if (c.size(op.arg_sorts[i]) == 0) any = false;
    if (!any) continue;
    for (;;) {
      std::vector<Term> children;
      for (int i = 0; i < k; ++i) children.push_back(f.rep(op.arg_sorts[i], idx[i]));
      Term lhs = Term::app(a.sig, static_cast<int>(sym), std::move(children));
      Term rhs = f.rep(op.out_sort, c.apply(static_cast<int>(sym), idx));
      if (!(lhs == rhs)) out.push_back(Identity::make(std::move(lhs), std::move(rhs)));
      int i = k - 1;
      for (; i >= 0; --i) {
        if (++idx[i] < c.size(op.arg_sorts[i])) break;
        idx[i] = 0;
      }
      if (i < 0) break;
    }
  }
  return out;
}

BasisCheckResult basis_holds_in(const FreeAlgebra& f,
                                const FiniteAlgebra& target,
                                const Budget& budget) {
  const VectorClosure& c = *f.closure;
  const Signature& sig = target.sig;
  const int ns = sig.sort_count;

  // a sort is collapsible when every table entry's syntactic support uses
  // at most one generator of that sort; then checking diagonal assignments
  // is exhaustive for the induced identities
  std::vector<char> collapsible(ns, 1);
  std::vector<std::uint32_t> sort_mask(ns, 0);
  for (std::size_t t = 0; t < f.slots.size(); ++t)
    sort_mask[f.slots[t].first] |= (1u << t);
  auto check_mask = [&](std::uint32_t m) {
    for (int s = 0; s < ns; ++s)
      if (collapsible[s]) {
        std::uint32_t bits = m & sort_mask[s];
        if (bits & (bits - 1)) collapsible[s] = 0;
      }
  };
  for (std::size_t sym = 0; sym < sig.symbols.size(); ++sym) {
    const OpSym& op = sig.symbols[sym];
    if (op.arity() == 1) {
      for (int i = 0; i < c.size(op.arg_sorts[0]); ++i)
        check_mask(c.support(op.arg_sorts[0], i) |
                   c.support(op.out_sort, c.unary_image(static_cast<int>(sym), i)));
    } else if (op.arity() == 2) {
      const auto* bt = c.bin(static_cast<int>(sym));
      int s0 = op.arg_sorts[0], s1 = op.arg_sorts[1];
      for (int i = 0; i < c.size(s0); ++i) {
        const std::vector<int>& row = bt->grid[bt->rid[i]];
        std::uint32_t mi = c.support(s0, i);
        for (int j = 0; j < c.size(s1); ++j)
          check_mask(mi | c.support(s1, j) | c.support(op.out_sort, row[bt->cid[j]]));
      }
    }
  }

  // enumeration: one shared value for collapsible sorts, full tuples else
  std::vector<int> tuple_len(ns);
  std::uint64_t total = 1;
  for (int s = 0; s < ns; ++s) {
    tuple_len[s] = collapsible[s] ? 1 : f.gens_per_sort[s];
    for (int i = 0; i < tuple_len[s]; ++i) {
      total *= static_cast<std::uint64_t>(target.sizes[s]);
      if (total > budget.assignment_cap)
        throw BudgetExceeded("basis check assignment budget exceeded");
    }
  }

  BasisCheckResult out;
  std::vector<std::vector<Elem>> tuple(ns);
  for (int s = 0; s < ns; ++s) tuple[s].assign(tuple_len[s], 0);
  std::vector<std::vector<Elem>> images(ns);
  for (std::uint64_t it = 0; it < total; ++it) {
    for (int s = 0; s < ns; ++s) {
      images[s].clear();
      for (int g = 0; g < f.gens_per_sort[s]; ++g)
        images[s].push_back(collapsible[s] ? tuple[s][0] : tuple[s][g]);
    }
    ++out.assignments_checked;
    if (auto viol = check_free_quotient(f, target, images)) {
      out.ok = false;
      out.violation = viol;
      out.failing_assignment = images;
      return out;
    }
    // odometer
    bool done = true;
    for (int s = ns - 1; s >= 0 && done; --s)
      for (int i = tuple_len[s] - 1; i >= 0; --i) {
        if (++tuple[s][i] < target.sizes[s]) {
          done = false;
          break;
        }
        tuple[s][i] = 0;
      }
    if (done) break;
  }
  return out;
}

}  // namespace finvar
