#ifndef FINVAR_WORDS_HPP
#define FINVAR_WORDS_HPP

#include "finvar/term.hpp"

namespace finvar {

// A word over the variable alphabet x0, x1, ...; the empty word is allowed.
struct Word {
  std::vector<int> letters;

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;
  std::size_t length() const { return letters.size(); }
  int distinct_letters() const;

  // rename variables by first occurrence so x0, x1, ... appear in order
  Word canonical() const;
  std::string str() const;  // e.g. "x0 x1 x0"
};

// [w]y over the one-sorted "." signature: [e]y = y, [xw']y = x . [w']y.
// The y variable index defaults to one past the largest letter index.
Term word_term(const Word& w, int y_index = -1);

// The two-sorted reinterpretation: letters become sort-1 variables, y a
// sort-2 variable, every "." becomes s.
Term word_term_sharp(const Word& w, int y_index = 0);

// Validates that t is a word term and rebuilds it over the two-sorted
// signature.  The trailing variable must not occur among the letters.
Term sharp(const Term& t);

// The fixed identity family: 0.x ~ 0, x.0 ~ 0, x.x ~ 0, (x.y).z ~ 0 and
// [x0...xn]x0 ~ 0 for 0 <= n <= N, where the zero term is z.z with z
// numbered after the word variables.
std::vector<Identity> delta_identities(int N);

struct PsiClasses {
  int max_len = 0;
  // canonical words partitioned by induced sharp-term function; classes
  // ordered by their first word (length, then lexicographic)
  std::vector<std::vector<Word>> classes;
  std::vector<Word> zero_words;  // sharp term constantly the zero element

  // class index of a canonical word, or -1
  int class_of(const Word& w) const;
  // all unordered pairs within classes: the bounded Psi fragment
  std::vector<std::pair<Word, Word>> pairs() const;
};

// Partition of all canonical words of length <= L by the function their
// sharp term induces on the zero-adjoined two-sorted algebra.  zero0/zero1
// are the designated zero elements per sort (checked).
PsiClasses psi_classes(const FiniteAlgebra& alg, Elem zero0, Elem zero1, int L,
                       const Budget& budget = {});

}  // namespace finvar

#endif
