#include "finvar/words.hpp"

#include <algorithm>
#include <map>

namespace finvar {

int Word::distinct_letters() const {
  std::vector<int> seen;
  for (int l : letters)
    if (std::find(seen.begin(), seen.end(), l) == seen.end()) seen.push_back(l);
  return static_cast<int>(seen.size());
}

Word Word::canonical() const {
  std::map<int, int> renum;
  Word w;
  for (int l : letters) {
    auto it = renum.emplace(l, static_cast<int>(renum.size())).first;
    w.letters.push_back(it->second);
  }
  return w;
}

std::string Word::str() const {
  std::string s;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) s += ' ';
    s += 'x';
    s += std::to_string(letters[i]);
  }
  return s.empty() ? "e" : s;
}

namespace {

const Signature& auto_sig() {
  static const Signature sig = automatic_signature();
  return sig;
}

const Signature& tau_sig() {
  static const Signature sig = tau_signature();
  return sig;
}

}  // namespace

Term word_term(const Word& w, int y_index) {
  if (y_index < 0) {
    y_index = 0;
    for (int l : w.letters) y_index = std::max(y_index, l + 1);
  }
  Term t = Term::var(0, y_index);
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    t = Term::app(auto_sig(), 0, {Term::var(0, *it), std::move(t)});
  return t;
}

Term word_term_sharp(const Word& w, int y_index) {
  Term t = Term::var(1, y_index);
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    t = Term::app(tau_sig(), 0, {Term::var(0, *it), std::move(t)});
  return t;
}

Term sharp(const Term& t) {
  // peel the right-nested applications of "."
  Word w;
  const Term* cur = &t;
  while (!cur->is_var()) {
    if (cur->symbol != 0 || cur->children.size() != 2 ||
        !cur->children[0].is_var())
      throw NotAWordTerm("term is not of the form [w]y");
    w.letters.push_back(cur->children[0].var_index);
    cur = &cur->children[1];
  }
  int y = cur->var_index;
  for (int l : w.letters)
    if (l == y) throw NotAWordTerm("trailing variable occurs in the word");
  return word_term_sharp(w, 0);
}

std::vector<Identity> delta_identities(int N) {
  const Signature& sig = auto_sig();
  auto dot = [&](Term a, Term b) {
    return Term::app(sig, 0, {std::move(a), std::move(b)});
  };
  auto zero = [&](int z) { return dot(Term::var(0, z), Term::var(0, z)); };
  auto v = [](int i) { return Term::var(0, i); };

  std::vector<Identity> out;
  out.push_back(Identity::make(dot(zero(1), v(0)), zero(1)));       // 0.x ~ 0
  out.push_back(Identity::make(dot(v(0), zero(1)), zero(1)));       // x.0 ~ 0
  out.push_back(Identity::make(dot(v(0), v(0)), zero(1)));          // x.x ~ 0
  out.push_back(Identity::make(dot(dot(v(0), v(1)), v(2)), zero(3)));
  for (int n = 0; n <= N; ++n) {
    Word w;
    for (int i = 0; i <= n; ++i) w.letters.push_back(i);
    out.push_back(Identity::make(word_term(w, 0), zero(n + 1)));
  }
  return out;
}

int PsiClasses::class_of(const Word& w) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (const Word& u : classes[i])
      if (u == w) return static_cast<int>(i);
  return -1;
}

std::vector<std::pair<Word, Word>> PsiClasses::pairs() const {
  std::vector<std::pair<Word, Word>> out;
  for (const auto& cls : classes)
    for (std::size_t i = 0; i < cls.size(); ++i)
      for (std::size_t j = i + 1; j < cls.size(); ++j)
        out.emplace_back(cls[i], cls[j]);
  return out;
}

PsiClasses psi_classes(const FiniteAlgebra& alg, Elem zero0, Elem zero1, int L,
                       const Budget& budget) {
  if (!is_tau(alg.sig)) throw SignatureMismatch("psi_classes needs the two-sorted signature");
  const int n0 = alg.sizes[0], n1 = alg.sizes[1];
  if (zero0 < 0 || zero0 >= n0 || zero1 < 0 || zero1 >= n1)
    throw NotZeroAdjoined("zero elements out of range");
  for (Elem y = 0; y < n1; ++y)
    if (alg.apply2(0, zero0, y) != zero1)
      throw NotZeroAdjoined("s(0, y) != 0");
  for (Elem x = 0; x < n0; ++x)
    if (alg.apply2(0, x, zero1) != zero1)
      throw NotZeroAdjoined("s(x, 0) != 0");
  // nonzero arguments must stay nonzero; this is what separates words with
  // different variable sets into different classes
  for (Elem x = 0; x < n0; ++x)
    for (Elem y = 0; y < n1; ++y)
      if (x != zero0 && y != zero1 && alg.apply2(0, x, y) == zero1)
        throw NotZeroAdjoined("s maps nonzero arguments to 0");

  PsiClasses out;
  out.max_len = L;

  // canonical words of length <= L grouped by distinct-letter count;
  // processing order is (length, lex), which fixes class numbering
  std::vector<std::vector<Word>> by_m(L + 1);
  by_m[0].push_back(Word{});  // the empty word
  {
    std::vector<Word> cur{Word{}};
    for (int len = 1; len <= L; ++len) {
      std::vector<Word> next;
      for (const Word& w : cur) {
        int m = w.distinct_letters();
        for (int l = 0; l <= m && l < L; ++l) {
          Word u = w;
          u.letters.push_back(l);
          next.push_back(u);
        }
      }
      for (const Word& w : next) by_m[w.distinct_letters()].push_back(w);
      cur = std::move(next);
    }
  }

  int next_class = 0;
  std::vector<std::vector<Word>> classes;

  for (int m = 0; m <= L; ++m) {
    if (by_m[m].empty()) continue;
    std::sort(by_m[m].begin(), by_m[m].end(), [](const Word& a, const Word& b) {
      if (a.length() != b.length()) return a.length() < b.length();
      return a.letters < b.letters;
    });
    std::uint64_t assigns = static_cast<std::uint64_t>(n1);
    for (int i = 0; i < m; ++i) {
      assigns *= static_cast<std::uint64_t>(n0);
      if (assigns > budget.assignment_cap)
        throw BudgetExceeded("psi_classes assignment budget exceeded");
    }
    std::map<std::vector<Elem>, int> fp_class;
    for (const Word& w : by_m[m]) {
      // fingerprint: value of [w]y# at every assignment (x0..xm-1, y)
      std::vector<Elem> fp;
      fp.reserve(assigns);
      std::vector<Elem> xs(m, 0);
      bool all_zero = true;
      for (std::uint64_t a = 0; a < assigns; ++a) {
        Elem y = static_cast<Elem>(a % n1);
        std::uint64_t rest = a / n1;
        for (int i = m - 1; i >= 0; --i) {
          xs[i] = static_cast<Elem>(rest % n0);
          rest /= n0;
        }
        Elem v = y;
        for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
          v = alg.apply2(0, xs[*it], v);
        fp.push_back(v);
        if (v != zero1) all_zero = false;
      }
      if (all_zero && !w.letters.empty()) out.zero_words.push_back(w);
      auto it = fp_class.find(fp);
      if (it == fp_class.end()) {
        fp_class.emplace(std::move(fp), next_class);
        classes.emplace_back();
        classes.back().push_back(w);
        ++next_class;
      } else {
        classes[it->second].push_back(w);
      }
    }
  }
  out.classes = std::move(classes);
  return out;
}

}  // namespace finvar
