#ifndef FINVAR_HOM_SEARCH_HPP
#define FINVAR_HOM_SEARCH_HPP

#include "finvar/algebra.hpp"

namespace finvar {

// Backtracking extension of a partial map (entries of -1 are free) to a
// full homomorphism.  Search order is deterministic: slots by (sort,
// element) ascending, candidate images ascending.  Forced values are
// propagated through operation tables.
std::optional<Homomorphism> find_homomorphism(
    const FiniteAlgebra& dom, const FiniteAlgebra& cod,
    const std::vector<std::vector<Elem>>& partial, bool onto,
    const Budget& budget = {});

std::optional<Homomorphism> find_homomorphism(const FiniteAlgebra& dom,
                                              const FiniteAlgebra& cod,
                                              bool onto = false,
                                              const Budget& budget = {});

// Bijective homomorphism search; sizes are compared first as a fast reject.
std::optional<Homomorphism> find_isomorphism(const FiniteAlgebra& a,
                                             const FiniteAlgebra& b,
                                             const Budget& budget = {});

}  // namespace finvar

#endif
