#ifndef FINVAR_TERM_IO_HPP
#define FINVAR_TERM_IO_HPP

#include <iosfwd>
#include <string>

#include "finvar/term.hpp"

namespace finvar {

// Concrete term syntax:
//   term := var | sym "(" term {"," term} ")" | term "." term
//         | "[" var {var} "]" var
// with "." right-associative and bracket terms expanding to nested
// applications of "." (or of the action symbol in a two-sorted signature).
//
// Variable names resolve per sort: the canonical letter of sort k is
// "xyzuvw"[k]; that letter followed by digits denotes the index directly
// and the bare letter denotes index 0.  Any other name is numbered after
// the largest explicit index of its sort, in first-occurrence order.
Term parse_term(const std::string& text, const Signature& sig);

std::string format_term(const Term& t, const Signature& sig);

Identity parse_identity(const std::string& line, const Signature& sig);
std::string format_identity(const Identity& id, const Signature& sig);

// Identity files: one "lhs =~ rhs" per line; '#' starts a comment.
std::vector<Identity> read_identities(std::istream& in, const Signature& sig);
void write_identities(std::ostream& out, const std::vector<Identity>& ids,
                      const Signature& sig);

}  // namespace finvar

#endif
