#ifndef FINVAR_SIGNATURE_HPP
#define FINVAR_SIGNATURE_HPP

#include <string>
#include <vector>

#include "finvar/budget.hpp"

namespace finvar {

using Elem = int;  // dense 0-based element index within one sort

struct OpSym {
  std::string name;
  std::vector<int> arg_sorts;
  int out_sort = 0;

  int arity() const { return static_cast<int>(arg_sorts.size()); }
  bool operator==(const OpSym&) const = default;
};

// A multi-sorted similarity type: how many sorts, and which operation
// symbols with which argument/result sorts.
struct Signature {
  int sort_count = 1;
  std::vector<OpSym> symbols;

  bool operator==(const Signature&) const = default;

  int symbol_index(const std::string& name) const;
  void validate() const;
};

// The two-sorted action signature: one symbol s of type 1x2 -> 2
// (0-based: (0,1) -> 1).
Signature tau_signature();

// Its one-sorted counterpart: binary d and unary f.
Signature tau_star_signature();

// One sort with a single binary symbol ".".
Signature automatic_signature();

// One sort with a single binary symbol "*" (groups as algebras).
Signature group_signature();

bool is_tau(const Signature& sig);
bool is_tau_star(const Signature& sig);

}  // namespace finvar

#endif
