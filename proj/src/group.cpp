#include "finvar/group.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace finvar {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FiniteGroup FiniteGroup::make(int size, std::vector<Elem> mult,
                              std::vector<std::string> labels, bool trusted,
                              const Budget& budget) {
  if (size < 1) throw Error("group must be nonempty");
  if (mult.size() != static_cast<std::size_t>(size) * size)
    throw Error("multiplication table has wrong size");
  for (Elem e : mult)
    if (e < 0 || e >= size) throw Error("multiplication entry out of range");

  FiniteGroup g;
  g.size = size;
  g.mult = std::move(mult);
  g.labels = std::move(labels);

  // locate the two-sided identity
  g.id = -1;
  for (Elem e = 0; e < size; ++e) {
    bool ok = true;
    for (Elem a = 0; a < size && ok; ++a)
      if (g.op(e, a) != a || g.op(a, e) != a) ok = false;
    if (ok) {
      g.id = e;
      break;
    }
  }
  if (g.id < 0) throw Error("no identity element");

  g.inv.assign(size, -1);
  for (Elem a = 0; a < size; ++a) {
    for (Elem b = 0; b < size; ++b)
      if (g.op(a, b) == g.id && g.op(b, a) == g.id) {
        g.inv[a] = b;
        break;
      }
    if (g.inv[a] < 0) throw Error("element without inverse");
  }

  std::uint64_t n3 = static_cast<std::uint64_t>(size) * size * size;
  if (n3 <= budget.search_cap) {
    for (Elem a = 0; a < size; ++a)
      for (Elem b = 0; b < size; ++b)
        for (Elem c = 0; c < size; ++c)
          if (g.op(g.op(a, b), c) != g.op(a, g.op(b, c)))
            throw Error("multiplication is not associative");
  } else if (!trusted) {
    throw BudgetExceeded("group too large for full associativity check");
  }
  return g;
}

int FiniteGroup::order_of(Elem a) const {
  Elem x = a;
  int n = 1;
  while (x != id) {
    x = op(x, a);
    ++n;
  }
  return n;
}

bool FiniteGroup::is_abelian() const {
  for (Elem a = 0; a < size; ++a)
    for (Elem b = a + 1; b < size; ++b)
      if (op(a, b) != op(b, a)) return false;
  return true;
}

Elem FiniteGroup::power(Elem a, int k) const {
  Elem r = id;
  for (int i = 0; i < k; ++i) r = op(r, a);
  return r;
}

std::string FiniteGroup::label(Elem e) const {
  return labels.empty() ? std::to_string(e) : labels[e];
}

FiniteAlgebra FiniteGroup::as_algebra() const {
  FiniteAlgebra a;
  a.sig = group_signature();
  a.sizes = {size};
  a.tables = {mult};
  if (!labels.empty()) a.labels = {labels};
  return a;
}

GroupAction GroupAction::make(FiniteGroup g, int set_size, std::vector<Elem> act,
                              std::vector<std::string> point_labels) {
  if (set_size < 1) throw Error("action set must be nonempty");
  if (act.size() != static_cast<std::size_t>(g.size) * set_size)
    throw Error("action table has wrong size");
  for (Elem e : act)
    if (e < 0 || e >= set_size) throw Error("action entry out of range");
  GroupAction a;
  a.group = std::move(g);
  a.set_size = set_size;
  a.act = std::move(act);
  a.point_labels = std::move(point_labels);
  for (Elem s = 0; s < set_size; ++s)
    if (a.apply(a.group.id, s) != s) throw ActionMismatch("identity must act trivially");
  for (Elem g1 = 0; g1 < a.group.size; ++g1)
    for (Elem g2 = 0; g2 < a.group.size; ++g2)
      for (Elem s = 0; s < set_size; ++s)
        if (a.apply(a.group.op(g1, g2), s) != a.apply(g1, a.apply(g2, s)))
          throw ActionMismatch("not a left action");
  return a;
}

bool is_faithful(const GroupAction& a) {
  for (Elem g = 0; g < a.group.size; ++g) {
    if (g == a.group.id) continue;
    bool moves = false;
    for (Elem s = 0; s < a.set_size && !moves; ++s)
      if (a.apply(g, s) != s) moves = true;
    if (!moves) return false;
  }
  return true;
}

FiniteGroup trivial_group() { return FiniteGroup::make(1, {0}, {"e"}); }

FiniteGroup cyclic_group(int n) {
  std::vector<Elem> mult(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) mult[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
  std::vector<std::string> labels;
  for (int a = 0; a < n; ++a) labels.push_back("g" + std::to_string(a));
  return FiniteGroup::make(n, std::move(mult), std::move(labels));
}

FiniteGroup dihedral_group(int m) {
  // element (i, f) is the map x -> i + (-1)^f x mod m; index f*m + i
  int n = 2 * m;
  auto enc = [m](int i, int f) { return f * m + i; };
  std::vector<Elem> mult(static_cast<std::size_t>(n) * n);
  for (int f = 0; f < 2; ++f)
    for (int i = 0; i < m; ++i)
      for (int g = 0; g < 2; ++g)
        for (int j = 0; j < m; ++j) {
          int ci = ((i + (f ? m - j : j)) % m + m) % m;
          mult[static_cast<std::size_t>(enc(i, f)) * n + enc(j, g)] = enc(ci, f ^ g);
        }
  std::vector<std::string> labels;
  for (int f = 0; f < 2; ++f)
    for (int i = 0; i < m; ++i)
      labels.push_back((f ? "sr" : "r") + std::to_string(i));
  return FiniteGroup::make(n, std::move(mult), std::move(labels));
}

FiniteGroup quaternion_group() {
  // 0:1, 1:-1, 2:i, 3:-i, 4:j, 5:-j, 6:k, 7:-k
  auto neg = [](int x) { return x ^ 1; };
  std::vector<Elem> mult(64);
  auto set = [&](int a, int b, int c) { mult[a * 8 + b] = c; };
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      int ua = a & ~1, ub = b & ~1;  // unsigned parts
      int r;
      if (ua == 0)
        r = ub;
      else if (ub == 0)
        r = ua;
      else if (ua == ub)
        r = 0 ^ 1;  // i*i = -1
      else {
        // i*j=k, j*k=i, k*i=j; reverse order gives the negative
        auto nxt = [](int x) { return x == 2 ? 4 : x == 4 ? 6 : 2; };
        if (nxt(ua) == ub)
          r = (ua == 2 && ub == 4) ? 6 : (ua == 4 && ub == 6) ? 2 : 4;
        else
          r = ((ub == 2 && ua == 4)   ? 6
               : (ub == 4 && ua == 6) ? 2
                                      : 4) ^
              1;
      }
      int sign = (a & 1) ^ (b & 1);
      set(a, b, r ^ sign);
    }
  return FiniteGroup::make(
      8, std::move(mult), {"1", "-1", "i", "-i", "j", "-j", "k", "-k"});
}

namespace {

std::string perm_cycle_label(const std::vector<int>& p) {
  int n = static_cast<int>(p.size());
  std::vector<char> seen(n, 0);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (seen[i] || p[i] == i) continue;
    out += '(';
    int x = i;
    bool first = true;
    while (!seen[x]) {
      seen[x] = 1;
      if (!first) out += ' ';
      out += std::to_string(x + 1);
      first = false;
      x = p[x];
    }
    out += ')';
  }
  return out.empty() ? "e" : out;
}

FiniteGroup perm_group_from(const std::vector<std::vector<int>>& perms) {
  int n = static_cast<int>(perms.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < n; ++i) index[perms[i]] = i;
  std::vector<Elem> mult(static_cast<std::size_t>(n) * n);
  int deg = static_cast<int>(perms[0].size());
  std::vector<int> comp(deg);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int x = 0; x < deg; ++x) comp[x] = perms[a][perms[b][x]];  // b first
      mult[static_cast<std::size_t>(a) * n + b] = index.at(comp);
    }
  std::vector<std::string> labels;
  for (const auto& p : perms) labels.push_back(perm_cycle_label(p));
  return FiniteGroup::make(n, std::move(mult), std::move(labels));
}

}  // namespace

FiniteGroup symmetric_s3() {
  std::vector<int> base{0, 1, 2};
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return perm_group_from(perms);
}

FiniteGroup alternating_a4() {
  std::vector<int> base{0, 1, 2, 3};
  std::vector<std::vector<int>> perms;
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (base[i] > base[j]) ++inversions;
    if (inversions % 2 == 0) perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return perm_group_from(perms);
}

FiniteGroup elementary_abelian(int q, int n) {
  int size = 1;
  for (int i = 0; i < n; ++i) size *= q;
  std::vector<Elem> mult(static_cast<std::size_t>(size) * size);
  for (int a = 0; a < size; ++a)
    for (int b = 0; b < size; ++b) {
      int x = a, y = b, r = 0, place = 1;
      std::vector<int> da(n), db(n);
      for (int i = n - 1; i >= 0; --i) {
        da[i] = x % q;
        db[i] = y % q;
        x /= q;
        y /= q;
      }
      for (int i = 0; i < n; ++i) r = r * q + (da[i] + db[i]) % q;
      (void)place;
      mult[static_cast<std::size_t>(a) * size + b] = r;
    }
  std::vector<std::string> labels;
  for (int a = 0; a < size; ++a) {
    std::string l;
    int x = a;
    std::vector<int> d(n);
    for (int i = n - 1; i >= 0; --i) {
      d[i] = x % q;
      x /= q;
    }
    for (int i = 0; i < n; ++i) l += std::to_string(d[i]);
    labels.push_back(l);
  }
  return FiniteGroup::make(size, std::move(mult), std::move(labels));
}

FiniteGroup direct_product_group(const FiniteGroup& a, const FiniteGroup& b) {
  int n = a.size * b.size;
  std::vector<Elem> mult(static_cast<std::size_t>(n) * n);
  auto enc = [&](Elem x, Elem y) { return x * b.size + y; };
  for (Elem x1 = 0; x1 < a.size; ++x1)
    for (Elem y1 = 0; y1 < b.size; ++y1)
      for (Elem x2 = 0; x2 < a.size; ++x2)
        for (Elem y2 = 0; y2 < b.size; ++y2)
          mult[static_cast<std::size_t>(enc(x1, y1)) * n + enc(x2, y2)] =
              enc(a.op(x1, x2), b.op(y1, y2));
  std::vector<std::string> labels;
  for (Elem x = 0; x < a.size; ++x)
    for (Elem y = 0; y < b.size; ++y)
      labels.push_back("(" + a.label(x) + "," + b.label(y) + ")");
  return FiniteGroup::make(n, std::move(mult), std::move(labels), true);
}

GroupAction regular_action(const FiniteGroup& g) {
  std::vector<Elem> act = g.mult;
  std::vector<std::string> pts = g.labels;
  return GroupAction::make(g, g.size, std::move(act), std::move(pts));
}

GroupAction natural_s3_action() {
  FiniteGroup s3 = symmetric_s3();
  // recover each permutation from its action on the regular representation:
  // rebuild from lexicographic enumeration instead
  std::vector<int> base{0, 1, 2};
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  std::vector<Elem> act(6 * 3);
  for (int g = 0; g < 6; ++g)
    for (int s = 0; s < 3; ++s) act[g * 3 + s] = perms[g][s];
  return GroupAction::make(std::move(s3), 3, std::move(act), {"1", "2", "3"});
}

GroupAction coset_action(const FiniteGroup& g, const std::vector<Elem>& gens) {
  std::vector<Elem> h = subgroup_generated(g, gens);
  std::vector<char> in_h(g.size, 0);
  for (Elem e : h) in_h[e] = 1;
  // left cosets xH, numbered by least representative
  std::vector<int> coset_of(g.size, -1);
  std::vector<Elem> reps;
  for (Elem x = 0; x < g.size; ++x) {
    if (coset_of[x] >= 0) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(x);
    for (Elem e : h) coset_of[g.op(x, e)] = c;
  }
  int m = static_cast<int>(reps.size());
  std::vector<Elem> act(static_cast<std::size_t>(g.size) * m);
  for (Elem a = 0; a < g.size; ++a)
    for (int c = 0; c < m; ++c) act[static_cast<std::size_t>(a) * m + c] =
        coset_of[g.op(a, reps[c])];
  return GroupAction::make(g, m, std::move(act));
}

Elem left_commutator(const FiniteGroup& g, const std::vector<Elem>& xs) {
  if (xs.size() < 2) throw Error("commutator needs at least two entries");
  auto comm2 = [&](Elem x, Elem y) {
    return g.op(g.op(g.op(g.inv[x], g.inv[y]), x), y);
  };
  Elem acc = comm2(xs[0], xs[1]);
  for (std::size_t i = 2; i < xs.size(); ++i) acc = comm2(acc, xs[i]);
  return acc;
}

std::vector<Elem> subgroup_generated(const FiniteGroup& g,
                                     const std::vector<Elem>& gens) {
  std::vector<char> in(g.size, 0);
  std::vector<Elem> order;
  auto add = [&](Elem e) {
    if (!in[e]) {
      in[e] = 1;
      order.push_back(e);
    }
  };
  add(g.id);
  for (Elem e : gens) add(e);
  std::size_t prev = 0;
  while (true) {
    std::size_t snap = order.size();
    if (prev == snap) break;
    for (std::size_t i = 0; i < snap; ++i)
      for (std::size_t j = 0; j < snap; ++j) {
        if (i < prev && j < prev) continue;
        add(g.op(order[i], order[j]));
      }
    prev = snap;
  }
  std::vector<Elem> out(order);
  std::sort(out.begin(), out.end());
  return out;
}

SubgroupResult subgroup_as_group(const FiniteGroup& g,
                                 const std::vector<Elem>& gens) {
  SubgroupResult r;
  r.elements = subgroup_generated(g, gens);
  r.index_in_sub.assign(g.size, -1);
  for (std::size_t i = 0; i < r.elements.size(); ++i)
    r.index_in_sub[r.elements[i]] = static_cast<int>(i);
  int n = static_cast<int>(r.elements.size());
  std::vector<Elem> mult(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      mult[static_cast<std::size_t>(a) * n + b] =
          r.index_in_sub[g.op(r.elements[a], r.elements[b])];
  std::vector<std::string> labels;
  if (!g.labels.empty())
    for (Elem e : r.elements) labels.push_back(g.labels[e]);
  r.group = FiniteGroup::make(n, std::move(mult), std::move(labels), true);
  return r;
}

NilpotencyResult nilpotency(const FiniteGroup& g) {
  NilpotencyResult r;
  std::vector<Elem> whole;
  for (Elem e = 0; e < g.size; ++e) whole.push_back(e);
  r.series.push_back(whole);
  while (true) {
    const std::vector<Elem>& cur = r.series.back();
    std::vector<Elem> comms;
    for (Elem a : cur)
      for (Elem b = 0; b < g.size; ++b) comms.push_back(left_commutator(g, {a, b}));
    std::vector<Elem> next = subgroup_generated(g, comms);
    if (next.size() == 1) {
      r.series.push_back(next);
      r.nilpotent = true;
      r.cls = static_cast<int>(r.series.size()) - 1;
      // gamma_1 trivial means the group itself is trivial: class 0
      if (g.size == 1) r.cls = 0;
      return r;
    }
    if (next == r.series.back()) {
      r.nilpotent = false;
      return r;
    }
    r.series.push_back(std::move(next));
  }
}

ApAqResult in_ApAq(const FiniteGroup& h, int p, int q) {
  if (!is_prime(p) || !is_prime(q)) throw NotPrime();
  std::vector<Elem> words;
  for (Elem a = 0; a < h.size; ++a) {
    for (Elem b = 0; b < h.size; ++b) words.push_back(left_commutator(h, {a, b}));
    words.push_back(h.power(a, q));
  }
  ApAqResult r;
  r.witness_subgroup = subgroup_generated(h, words);
  for (Elem a : r.witness_subgroup)
    for (Elem b : r.witness_subgroup)
      if (h.op(a, b) != h.op(b, a)) {
        r.member = false;
        r.violation = {a, b};
        r.reason = "verbal subgroup is not abelian";
        return r;
      }
  for (Elem a : r.witness_subgroup)
    if (h.power(a, p) != h.id) {
      r.member = false;
      r.violation = {a, a};
      r.reason = "verbal subgroup exponent does not divide p";
      return r;
    }
  r.member = true;
  return r;
}

FiniteGroup semidirect_product(const FiniteGroup& n, const FiniteGroup& k,
                               const std::vector<std::vector<Elem>>& phi,
                               const Budget& budget) {
  if (static_cast<int>(phi.size()) != k.size)
    throw NotAHomomorphism("phi must assign a map to every element of K");
  for (const auto& f : phi) {
    if (static_cast<int>(f.size()) != n.size)
      throw NotAHomomorphism("phi entry has wrong domain");
    std::vector<char> seen(n.size, 0);
    for (Elem e : f) {
      if (e < 0 || e >= n.size || seen[e])
        throw NotAHomomorphism("phi entry is not a permutation");
      seen[e] = 1;
    }
  }
  for (Elem e = 0; e < n.size; ++e)
    if (phi[k.id][e] != e) throw NotAHomomorphism("phi(identity) must be trivial");
  for (Elem kk = 0; kk < k.size; ++kk)
    for (Elem a = 0; a < n.size; ++a)
      for (Elem b = 0; b < n.size; ++b)
        if (phi[kk][n.op(a, b)] != n.op(phi[kk][a], phi[kk][b]))
          throw NotAHomomorphism("phi entry is not an automorphism");
  for (Elem k1 = 0; k1 < k.size; ++k1)
    for (Elem k2 = 0; k2 < k.size; ++k2)
      for (Elem a = 0; a < n.size; ++a)
        if (phi[k.op(k1, k2)][a] != phi[k1][phi[k2][a]])
          throw NotAHomomorphism("phi is not a homomorphism into Aut(N)");

  int sz = n.size * k.size;
  auto enc = [&](Elem a, Elem b) { return a * k.size + b; };
  std::vector<Elem> mult(static_cast<std::size_t>(sz) * sz);
  for (Elem n1 = 0; n1 < n.size; ++n1)
    for (Elem k1 = 0; k1 < k.size; ++k1)
      for (Elem n2 = 0; n2 < n.size; ++n2)
        for (Elem k2 = 0; k2 < k.size; ++k2)
          mult[static_cast<std::size_t>(enc(n1, k1)) * sz + enc(n2, k2)] =
              enc(n.op(n1, phi[k1][n2]), k.op(k1, k2));
  std::vector<std::string> labels;
  if (!n.labels.empty() && !k.labels.empty())
    for (Elem a = 0; a < n.size; ++a)
      for (Elem b = 0; b < k.size; ++b)
        labels.push_back("(" + n.label(a) + "," + k.label(b) + ")");
  return FiniteGroup::make(sz, std::move(mult), std::move(labels), true, budget);
}

FnpqReport check_Fnpq_witness(const FiniteGroup& p_group,
                              const std::vector<Elem>& x, int n, int p, int q) {
  if (static_cast<int>(x.size()) != n + 1)
    throw Error("witness set must have n+1 elements");
  FnpqReport rep;
  rep.generates =
      subgroup_generated(p_group, x).size() == static_cast<std::size_t>(p_group.size);
  rep.ok = rep.generates;
  for (int omit = 0; omit < n + 1; ++omit) {
    std::vector<Elem> subset;
    for (int i = 0; i < n + 1; ++i)
      if (i != omit) subset.push_back(x[i]);
    SubgroupResult sub = subgroup_as_group(p_group, subset);
    ApAqResult a = in_ApAq(sub.group, p, q);
    rep.subsets.push_back({subset, a.member, static_cast<std::size_t>(sub.group.size)});
    rep.ok = rep.ok && a.member;
  }
  // report lines in lexicographic subset order
  std::sort(rep.subsets.begin(), rep.subsets.end(),
            [](const auto& l, const auto& r) { return l.subset < r.subset; });
  return rep;
}

// ---- group variety membership -------------------------------------------

namespace {

// smallest lexicographic generating subset among non-identity elements
std::vector<Elem> minimal_generating_set(const FiniteGroup& h,
                                         const Budget& budget) {
  if (h.size == 1) return {};
  std::vector<Elem> cands;
  for (Elem e = 0; e < h.size; ++e)
    if (e != h.id) cands.push_back(e);
  std::uint64_t steps = 0;
  for (int k = 1; k <= static_cast<int>(cands.size()); ++k) {
    std::vector<int> c(k);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
      if (++steps > budget.search_cap)
        throw BudgetExceeded("generating-set search budget exceeded");
      std::vector<Elem> gens;
      for (int i : c) gens.push_back(cands[i]);
      if (subgroup_generated(h, gens).size() == static_cast<std::size_t>(h.size))
        return gens;
      int i = k - 1;
      for (; i >= 0; --i)
        if (c[i] < static_cast<int>(cands.size()) - (k - i)) break;
      if (i < 0) break;
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
  }
  throw Error("no generating set found");
}

// all homomorphisms H -> G by images of the given generators
struct HomCandidate {
  std::vector<Elem> images;        // per generator
  std::vector<Elem> full;          // per H element
  std::vector<char> kernel;        // full[h] == id
};

std::vector<HomCandidate> all_homs(const FiniteGroup& h, const FiniteGroup& g,
                                   const std::vector<Elem>& gens,
                                   const Budget& budget) {
  std::vector<HomCandidate> out;
  int k = static_cast<int>(gens.size());
  std::vector<Elem> img(k, 0);
  std::vector<int> ordh(k);
  for (int i = 0; i < k; ++i) ordh[i] = h.order_of(gens[i]);
  std::uint64_t steps = 0;
  for (;;) {
    if (++steps > budget.search_cap)
      throw BudgetExceeded("hom enumeration budget exceeded");
    bool plausible = true;
    for (int i = 0; i < k && plausible; ++i)
      if (ordh[i] % g.order_of(img[i]) != 0) plausible = false;
    if (plausible) {
      // grow the map over the Cayley graph; clashes mean no such hom
      std::vector<Elem> full(h.size, -1);
      full[h.id] = g.id;
      std::vector<Elem> queue{h.id};
      bool ok = true;
      for (std::size_t qi = 0; qi < queue.size() && ok; ++qi) {
        Elem a = queue[qi];
        for (int i = 0; i < k && ok; ++i) {
          Elem b = h.op(a, gens[i]);
          Elem v = g.op(full[a], img[i]);
          if (full[b] < 0) {
            full[b] = v;
            queue.push_back(b);
          } else if (full[b] != v) {
            ok = false;
          }
        }
      }
      if (ok && queue.size() == static_cast<std::size_t>(h.size)) {
        // verify multiplicativity on the full table
        for (Elem a = 0; a < h.size && ok; ++a)
          for (Elem b = 0; b < h.size && ok; ++b)
            if (full[h.op(a, b)] != g.op(full[a], full[b])) ok = false;
        if (ok) {
          HomCandidate hc;
          hc.images = img;
          hc.full = full;
          hc.kernel.assign(h.size, 0);
          for (Elem a = 0; a < h.size; ++a) hc.kernel[a] = (full[a] == g.id);
          out.push_back(std::move(hc));
        }
      }
    }
    int i = k - 1;
    for (; i >= 0; --i) {
      if (++img[i] < g.size) break;
      img[i] = 0;
    }
    if (i < 0) break;
  }
  return out;
}

// closure of the pairs (tuple_j, gen_j) inside G^m x H; nullopt when the
// fiber over the identity tuple is nontrivial (no induced map K -> H)
struct GraphClosure {
  std::vector<std::vector<Elem>> k_elements;
  std::vector<Elem> hom;
};

std::optional<GraphClosure> graph_closure(
    const FiniteGroup& g, const FiniteGroup& h, int m,
    const std::vector<std::vector<Elem>>& tuples, const std::vector<Elem>& gens,
    const Budget& budget) {
  std::map<std::vector<Elem>, int> index;
  GraphClosure out;
  auto add = [&](std::vector<Elem> t, Elem hv) -> std::optional<int> {
    auto it = index.find(t);
    if (it != index.end()) {
      if (out.hom[it->second] != hv) return std::nullopt;  // not a function
      return it->second;
    }
    if (out.k_elements.size() + 1 >
        budget.element_cap)
      throw BudgetExceeded("graph closure exceeds element cap");
    int id = static_cast<int>(out.k_elements.size());
    index.emplace(std::move(t), id);
    out.k_elements.push_back(index.find(out.k_elements.empty() && false
                                            ? std::vector<Elem>{}
                                            : std::vector<Elem>{}) ==
                                     index.end()
                                 ? std::vector<Elem>{}
                                 : std::vector<Elem>{});
    return id;
  };
  (void)add;

  // identity seed
  std::vector<Elem> idt(m, g.id);
  index.emplace(idt, 0);
  out.k_elements.push_back(idt);
  out.hom.push_back(h.id);

  std::vector<int> queue{0};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int cur = queue[qi];
    for (std::size_t j = 0; j < tuples.size(); ++j) {
      std::vector<Elem> t(m);
      for (int i = 0; i < m; ++i) t[i] = g.op(out.k_elements[cur][i], tuples[j][i]);
      Elem hv = h.op(out.hom[cur], gens[j]);
      auto it = index.find(t);
      if (it != index.end()) {
        if (out.hom[it->second] != hv) return std::nullopt;
        continue;
      }
      if (out.k_elements.size() + 1 > budget.element_cap)
        throw BudgetExceeded("graph closure exceeds element cap");
      int id = static_cast<int>(out.k_elements.size());
      index.emplace(t, id);
      out.k_elements.push_back(std::move(t));
      out.hom.push_back(hv);
      queue.push_back(id);
    }
  }
  return out;
}

}  // namespace

bool verify_group_certificate(const FiniteGroup& h, const FiniteGroup& g,
                              const GroupMembershipCertificate& cert,
                              std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (cert.m < 1) return fail("exponent must be positive");
  for (const auto& t : cert.tuples)
    if (static_cast<int>(t.size()) != cert.m) return fail("tuple length mismatch");
  if (cert.tuples.size() != cert.h_generators.size())
    return fail("tuple/generator count mismatch");
  if (subgroup_generated(h, cert.h_generators).size() !=
      static_cast<std::size_t>(h.size))
    return fail("declared generators do not generate H");
  auto gc = graph_closure(g, h, cert.m, cert.tuples, cert.h_generators, {});
  if (!gc) return fail("tuples do not induce a map onto H");
  if (gc->k_elements != cert.k_elements) return fail("closure mismatch");
  if (gc->hom != cert.hom) return fail("hom mismatch");
  // surjectivity and kernel
  std::vector<char> seen(h.size, 0);
  for (Elem v : gc->hom) seen[v] = 1;
  for (char c : seen)
    if (!c) return fail("map is not onto H");
  std::vector<int> kernel;
  for (std::size_t i = 0; i < gc->hom.size(); ++i)
    if (gc->hom[i] == h.id) kernel.push_back(static_cast<int>(i));
  if (kernel != cert.kernel) return fail("kernel mismatch");
  if (gc->k_elements.size() != kernel.size() * static_cast<std::size_t>(h.size))
    return fail("coset counting failed");
  return true;
}

std::optional<GroupMembershipCertificate> group_in_variety(
    const FiniteGroup& h, const FiniteGroup& g, int m_max, const Budget& budget) {
  GroupMembershipCertificate cert;
  if (h.size == 1) {
    cert.m = 1;
    cert.h_generators = {};
    cert.tuples = {};
    cert.k_elements = {{g.id}};
    cert.hom = {h.id};
    cert.kernel = {0};
    return cert;
  }
  std::vector<Elem> gens = minimal_generating_set(h, budget);
  int k = static_cast<int>(gens.size());

  auto finish = [&](int m, std::vector<std::vector<Elem>> tuples)
      -> std::optional<GroupMembershipCertificate> {
    auto gc = graph_closure(g, h, m, tuples, gens, budget);
    if (!gc) return std::nullopt;
    std::vector<char> seen(h.size, 0);
    for (Elem v : gc->hom) seen[v] = 1;
    for (char c : seen)
      if (!c) return std::nullopt;
    cert.m = m;
    cert.h_generators = gens;
    cert.tuples = std::move(tuples);
    cert.k_elements = std::move(gc->k_elements);
    cert.hom = std::move(gc->hom);
    cert.kernel.clear();
    for (std::size_t i = 0; i < cert.hom.size(); ++i)
      if (cert.hom[i] == h.id) cert.kernel.push_back(static_cast<int>(i));
    return cert;
  };

  // embedding route: homomorphisms with jointly trivial kernels
  std::vector<HomCandidate> homs = all_homs(h, g, gens, budget);
  {
    // depth-first over hom subsets of size <= m_max
    std::vector<int> chosen;
    std::vector<char> inter(h.size, 1);
    std::uint64_t steps = 0;
    std::optional<std::vector<int>> found;
    auto trivial = [&](const std::vector<char>& v) {
      for (Elem e = 0; e < h.size; ++e)
        if (v[e] && e != h.id) return false;
      return true;
    };
    std::function<bool(int)> dfs = [&](int start) -> bool {
      if (trivial(inter)) {
        found = chosen;
        return true;
      }
      if (static_cast<int>(chosen.size()) >= m_max) return false;
      for (int i = start; i < static_cast<int>(homs.size()); ++i) {
        if (++steps > budget.search_cap) return false;
        // adding a hom must shrink the intersection
        bool shrinks = false;
        for (Elem e = 0; e < h.size && !shrinks; ++e)
          if (inter[e] && !homs[i].kernel[e]) shrinks = true;
        if (!shrinks) continue;
        std::vector<char> saved = inter;
        for (Elem e = 0; e < h.size; ++e) inter[e] = inter[e] && homs[i].kernel[e];
        chosen.push_back(i);
        if (dfs(i + 1)) return true;
        chosen.pop_back();
        inter = std::move(saved);
      }
      return false;
    };
    if (dfs(0) && found) {
      int m = static_cast<int>(found->size());
      std::vector<std::vector<Elem>> tuples(k, std::vector<Elem>(m));
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < m; ++i) tuples[j][i] = homs[(*found)[i]].images[j];
      if (auto c = finish(m, std::move(tuples))) return c;
    }
  }

  // quotient route: generator tuples in G^m
  std::vector<int> gen_ord(k);
  for (int j = 0; j < k; ++j) gen_ord[j] = h.order_of(gens[j]);
  std::uint64_t gm = 1;
  for (int m = 1; m <= m_max; ++m) {
    gm *= static_cast<std::uint64_t>(g.size);
    std::uint64_t total = 1;
    bool overflow = false;
    for (int j = 0; j < k; ++j) {
      total *= gm;
      if (total > budget.search_cap) overflow = true;
    }
    if (overflow) throw BudgetExceeded("tuple search budget exceeded");
    std::vector<std::uint64_t> idx(k, 0);
    for (;;) {
      std::vector<std::vector<Elem>> tuples(k, std::vector<Elem>(m));
      bool plausible = true;
      for (int j = 0; j < k; ++j) {
        std::uint64_t x = idx[j];
        int ord = 1;
        for (int i = m - 1; i >= 0; --i) {
          tuples[j][i] = static_cast<Elem>(x % g.size);
          x /= g.size;
          ord = std::lcm(ord, g.order_of(tuples[j][i]));
        }
        if (gen_ord[j] % ord != 0) plausible = false;
      }
      if (plausible) {
        if (auto c = finish(m, std::move(tuples))) return c;
      }
      int j = k - 1;
      for (; j >= 0; --j) {
        if (++idx[j] < gm) break;
        idx[j] = 0;
      }
      if (j < 0) break;
    }
  }
  return std::nullopt;
}

}  // namespace finvar
