#include "finvar/hom_search.hpp"

#include <algorithm>
#include <map>

namespace finvar {

namespace {

struct EntryRef {
  int sym;
  std::size_t idx;
};

struct Searcher {
  const FiniteAlgebra& dom;
  const FiniteAlgebra& cod;
  bool onto;
  bool injective;
  const Budget& budget;

  std::vector<std::vector<Elem>> map;           // current partial map
  std::vector<std::vector<int>> used;           // cod usage counts (injective)
  std::vector<std::vector<std::vector<EntryRef>>> touching;  // [sort][elem]
  std::vector<std::vector<std::vector<Elem>>> entry_args;    // [sym][idx]
  std::uint64_t steps = 0;

  Searcher(const FiniteAlgebra& d, const FiniteAlgebra& c, bool onto_,
           bool injective_, const Budget& b)
      : dom(d), cod(c), onto(onto_), injective(injective_), budget(b) {
    touching.resize(dom.sig.sort_count);
    for (int s = 0; s < dom.sig.sort_count; ++s) touching[s].resize(dom.sizes[s]);
    entry_args.resize(dom.sig.symbols.size());
    for (std::size_t sym = 0; sym < dom.sig.symbols.size(); ++sym) {
      const OpSym& op = dom.sig.symbols[sym];
      int k = op.arity();
      std::size_t tsize = dom.table_size(static_cast<int>(sym));
      entry_args[sym].resize(tsize);
      std::vector<Elem> args(k, 0);
      for (std::size_t idx = 0; idx < tsize; ++idx) {
        entry_args[sym][idx] = args;
        for (int i = 0; i < k; ++i)
          touching[op.arg_sorts[i]][args[i]].push_back(
              {static_cast<int>(sym), idx});
        touching[op.out_sort][dom.tables[sym][idx]].push_back(
            {static_cast<int>(sym), idx});
        for (int i = k - 1; i >= 0; --i) {
          if (++args[i] < dom.sizes[op.arg_sorts[i]]) break;
          args[i] = 0;
        }
      }
    }
    used.resize(dom.sig.sort_count);
    for (int s = 0; s < dom.sig.sort_count; ++s) used[s].assign(cod.sizes[s], 0);
  }

  struct TrailEntry {
    int sort;
    Elem elem;
  };
  std::vector<TrailEntry> trail;
  std::vector<std::vector<int>> dom_pid, cod_pid;  // profile classes, optional

  bool assign(int sort, Elem e, Elem image, std::vector<TrailEntry>& local) {
    if (map[sort][e] >= 0) return map[sort][e] == image;
    if (injective && used[sort][image]) return false;
    map[sort][e] = image;
    used[sort][image]++;
    local.push_back({sort, e});
    // propagate through every table entry touching e
    for (const EntryRef& er : touching[sort][e]) {
      const OpSym& op = dom.sig.symbols[er.sym];
      const std::vector<Elem>& args = entry_args[er.sym][er.idx];
      int k = op.arity();
      bool all = true;
      for (int i = 0; i < k && all; ++i)
        if (map[op.arg_sorts[i]][args[i]] < 0) all = false;
      if (!all) continue;
      std::vector<Elem> mapped(k);
      for (int i = 0; i < k; ++i) mapped[i] = map[op.arg_sorts[i]][args[i]];
      Elem forced = cod.apply(er.sym, mapped);
      Elem res = dom.tables[er.sym][er.idx];
      Elem cur = map[op.out_sort][res];
      if (cur >= 0) {
        if (cur != forced) return false;
      } else {
        if (!assign(op.out_sort, res, forced, local)) return false;
      }
    }
    return true;
  }

  void undo(const std::vector<TrailEntry>& local) {
    for (auto it = local.rbegin(); it != local.rend(); ++it) {
      used[it->sort][map[it->sort][it->elem]]--;
      map[it->sort][it->elem] = -1;
    }
  }

  bool onto_feasible() const {
    if (!onto) return true;
    for (int s = 0; s < dom.sig.sort_count; ++s) {
      int unassigned = 0;
      for (Elem e = 0; e < dom.sizes[s]; ++e)
        if (map[s][e] < 0) unassigned++;
      int uncovered = 0;
      for (Elem c = 0; c < cod.sizes[s]; ++c)
        if (!used[s][c]) uncovered++;
      if (unassigned < uncovered) return false;
    }
    return true;
  }

  bool search(int sort, Elem e) {
    // advance to next unassigned slot
    while (sort < dom.sig.sort_count) {
      if (e >= dom.sizes[sort]) {
        ++sort;
        e = 0;
        continue;
      }
      if (map[sort][e] < 0) break;
      ++e;
    }
    if (sort >= dom.sig.sort_count) {
      if (onto)
        for (int s = 0; s < dom.sig.sort_count; ++s)
          for (Elem c = 0; c < cod.sizes[s]; ++c)
            if (!used[s][c]) return false;
      return true;
    }
    for (Elem img = 0; img < cod.sizes[sort]; ++img) {
      if (!dom_pid.empty() && dom_pid[sort][e] != cod_pid[sort][img]) continue;
      if (++steps > budget.search_cap)
        throw BudgetExceeded("homomorphism search exceeds step budget");
      std::vector<TrailEntry> local;
      if (assign(sort, e, img, local) && onto_feasible() &&
          search(sort, e + 1))
        return true;
      undo(local);
    }
    return false;
  }
};

}  // namespace

std::optional<Homomorphism> find_homomorphism(
    const FiniteAlgebra& dom, const FiniteAlgebra& cod,
    const std::vector<std::vector<Elem>>& partial, bool onto,
    const Budget& budget) {
  if (dom.sig != cod.sig) throw SignatureMismatch();
  Searcher s(dom, cod, onto, false, budget);
  s.map.resize(dom.sig.sort_count);
  for (int srt = 0; srt < dom.sig.sort_count; ++srt)
    s.map[srt].assign(dom.sizes[srt], -1);
  std::vector<Searcher::TrailEntry> seed;
  for (int srt = 0; srt < dom.sig.sort_count; ++srt)
    for (Elem e = 0; e < dom.sizes[srt]; ++e) {
      Elem img = partial.empty() ? -1 : partial[srt][e];
      if (img >= 0 && !s.assign(srt, e, img, seed)) return std::nullopt;
    }
  if (!s.search(0, 0)) return std::nullopt;
  Homomorphism h;
  h.map = s.map;
  return h;
}

std::optional<Homomorphism> find_homomorphism(const FiniteAlgebra& dom,
                                              const FiniteAlgebra& cod,
                                              bool onto, const Budget& budget) {
  return find_homomorphism(dom, cod, {}, onto, budget);
}

namespace {

// cheap per-element invariant used to reject candidate images early
std::vector<std::vector<std::vector<int>>> profiles(const FiniteAlgebra& a) {
  std::vector<std::vector<std::vector<int>>> prof(a.sig.sort_count);
  for (int s = 0; s < a.sig.sort_count; ++s)
    prof[s].assign(a.sizes[s], {});
  for (std::size_t sym = 0; sym < a.sig.symbols.size(); ++sym) {
    const OpSym& op = a.sig.symbols[sym];
    // result multiplicity
    std::vector<int> res_count(a.sizes[op.out_sort], 0);
    for (Elem r : a.tables[sym]) res_count[r]++;
    for (Elem e = 0; e < a.sizes[op.out_sort]; ++e)
      prof[op.out_sort][e].push_back(res_count[e]);
    if (op.arity() == 1) {
      // orbit length under the unary map
      for (Elem e = 0; e < a.sizes[op.arg_sorts[0]]; ++e) {
        Elem x = e;
        int len = 0;
        do {
          x = a.tables[sym][x];
          ++len;
        } while (x != e && len <= a.sizes[op.arg_sorts[0]]);
        prof[op.arg_sorts[0]][e].push_back(x == e ? len : 0);
      }
    }
    if (op.arity() == 2 && op.arg_sorts[0] == op.arg_sorts[1] &&
        op.arg_sorts[0] == op.out_sort) {
      for (Elem e = 0; e < a.sizes[op.out_sort]; ++e)
        prof[op.out_sort][e].push_back(a.apply2(static_cast<int>(sym), e, e) == e
                                           ? 1
                                           : 0);
    }
  }
  return prof;
}

}  // namespace

std::optional<Homomorphism> find_isomorphism(const FiniteAlgebra& a,
                                             const FiniteAlgebra& b,
                                             const Budget& budget) {
  if (a.sig != b.sig) throw SignatureMismatch();
  if (a.sizes != b.sizes) return std::nullopt;
  auto pa = profiles(a), pb = profiles(b);
  // profile multisets must match
  for (int s = 0; s < a.sig.sort_count; ++s) {
    auto ma = pa[s], mb = pb[s];
    std::sort(ma.begin(), ma.end());
    std::sort(mb.begin(), mb.end());
    if (ma != mb) return std::nullopt;
  }
  Searcher s(a, b, true, true, budget);
  s.map.resize(a.sig.sort_count);
  for (int srt = 0; srt < a.sig.sort_count; ++srt)
    s.map[srt].assign(a.sizes[srt], -1);

  // candidate images must share the element profile
  std::map<std::vector<int>, int> pid;
  s.dom_pid.resize(a.sig.sort_count);
  s.cod_pid.resize(a.sig.sort_count);
  for (int srt = 0; srt < a.sig.sort_count; ++srt) {
    for (Elem e = 0; e < a.sizes[srt]; ++e) {
      auto it = pid.emplace(pa[srt][e], static_cast<int>(pid.size())).first;
      s.dom_pid[srt].push_back(it->second);
    }
    for (Elem e = 0; e < b.sizes[srt]; ++e) {
      auto it = pid.emplace(pb[srt][e], static_cast<int>(pid.size())).first;
      s.cod_pid[srt].push_back(it->second);
    }
  }
  if (!s.search(0, 0)) return std::nullopt;
  Homomorphism h;
  h.map = s.map;
  if (!h.injective(b) || !h.surjective(b)) return std::nullopt;
  return h;
}

}  // namespace finvar
