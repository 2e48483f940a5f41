#ifndef FINVAR_BUDGET_HPP
#define FINVAR_BUDGET_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace finvar {

// Resource caps for the search/closure routines.  Exceeding a cap raises
// BudgetExceeded instead of silently truncating.
struct Budget {
  std::uint64_t element_cap    = 200000;    // closure / free-algebra elements
  std::uint64_t assignment_cap = 10000000;  // assignments per holds() call
  std::uint64_t table_cap      = 50000000;  // entries per materialized table
  std::uint64_t vector_cap     = 2000000;   // coordinates per power vector
  std::uint64_t coset_limit    = 1000000;   // Todd-Coxeter live cosets
  std::uint64_t search_cap     = 20000000;  // generic backtracking steps
  int           max_c          = 6;         // nilpotency-class ladder limit
};

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define FINVAR_ERROR(Name)                                          \
  struct Name : Error {                                             \
    explicit Name(const std::string& msg = #Name) : Error(msg) {}   \
  }

FINVAR_ERROR(SortMismatch);
FINVAR_ERROR(UnboundVariable);
FINVAR_ERROR(SignatureMismatch);
FINVAR_ERROR(NotACongruence);
FINVAR_ERROR(EmptySortUnreachable);
FINVAR_ERROR(BudgetExceeded);
FINVAR_ERROR(UnknownSymbol);
FINVAR_ERROR(ArityMismatch);
FINVAR_ERROR(NotAWordTerm);
FINVAR_ERROR(NotZeroAdjoined);
FINVAR_ERROR(NotPrime);
FINVAR_ERROR(NotExtendable);
FINVAR_ERROR(NotAHomomorphism);
FINVAR_ERROR(DomainViolation);
FINVAR_ERROR(ActionMismatch);
FINVAR_ERROR(WitnessCheckFailed);
FINVAR_ERROR(CosetDivisionFailure);

#undef FINVAR_ERROR

struct SyntaxError : Error {
  std::size_t position;
  SyntaxError(const std::string& msg, std::size_t pos)
      : Error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

}  // namespace finvar

#endif
