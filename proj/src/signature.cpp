#include "finvar/signature.hpp"

#include <set>

namespace finvar {

int Signature::symbol_index(const std::string& name) const {
  for (std::size_t i = 0; i < symbols.size(); ++i)
    if (symbols[i].name == name) return static_cast<int>(i);
  throw UnknownSymbol("unknown symbol '" + name + "'");
}

void Signature::validate() const {
  if (sort_count < 1) throw Error("signature needs at least one sort");
  std::set<std::string> names;
  for (const auto& sym : symbols) {
    if (sym.name.empty()) throw Error("empty symbol name");
    if (!names.insert(sym.name).second)
      throw Error("duplicate symbol name '" + sym.name + "'");
    if (sym.out_sort < 0 || sym.out_sort >= sort_count)
      throw Error("symbol '" + sym.name + "' has out-of-range result sort");
    for (int s : sym.arg_sorts)
      if (s < 0 || s >= sort_count)
        throw Error("symbol '" + sym.name + "' has out-of-range argument sort");
  }
}

Signature tau_signature() {
  return Signature{2, {OpSym{"s", {0, 1}, 1}}};
}

Signature tau_star_signature() {
  return Signature{1, {OpSym{"d", {0, 0}, 0}, OpSym{"f", {0}, 0}}};
}

Signature automatic_signature() {
  return Signature{1, {OpSym{".", {0, 0}, 0}}};
}

Signature group_signature() {
  return Signature{1, {OpSym{"*", {0, 0}, 0}}};
}

bool is_tau(const Signature& sig) { return sig == tau_signature(); }
bool is_tau_star(const Signature& sig) { return sig == tau_star_signature(); }

}  // namespace finvar
