#ifndef FINVAR_GROUP_HPP
#define FINVAR_GROUP_HPP

#include <optional>
#include <string>
#include <vector>

#include "finvar/algebra.hpp"

namespace finvar {

// A finite group as a dense multiplication table.  The product convention
// is function composition: mult(g, h) applies h first, so the natural
// permutation action is a left action.
struct FiniteGroup {
  int size = 1;
  std::vector<Elem> mult;  // size*size, row-major
  Elem id = 0;
  std::vector<Elem> inv;
  std::vector<std::string> labels;  // optional

  Elem op(Elem a, Elem b) const { return mult[static_cast<std::size_t>(a) * size + b]; }

  // identity and inverses are located; associativity is verified when
  // size^3 stays within the budget, otherwise rejected unless trusted
  static FiniteGroup make(int size, std::vector<Elem> mult,
                          std::vector<std::string> labels = {},
                          bool trusted = false, const Budget& budget = {});

  int order_of(Elem a) const;
  bool is_abelian() const;
  Elem power(Elem a, int k) const;
  std::string label(Elem e) const;
  FiniteAlgebra as_algebra() const;  // one sort, one binary symbol "*"
};

struct GroupAction {
  FiniteGroup group;
  int set_size = 1;
  std::vector<Elem> act;  // group.size * set_size
  std::vector<std::string> point_labels;  // optional

  Elem apply(Elem g, Elem s) const {
    return act[static_cast<std::size_t>(g) * set_size + s];
  }
  static GroupAction make(FiniteGroup g, int set_size, std::vector<Elem> act,
                          std::vector<std::string> point_labels = {});
};

bool is_faithful(const GroupAction& a);

// ---- small-group builders ----------------------------------------------
FiniteGroup trivial_group();
FiniteGroup cyclic_group(int n);
FiniteGroup dihedral_group(int m);          // order 2m, m >= 1
FiniteGroup quaternion_group();             // order 8
FiniteGroup symmetric_s3();                 // permutations of 3 points
FiniteGroup alternating_a4();
FiniteGroup elementary_abelian(int q, int n);  // (Z/q)^n, mixed-radix indices
FiniteGroup direct_product_group(const FiniteGroup& a, const FiniteGroup& b);

GroupAction regular_action(const FiniteGroup& g);
GroupAction natural_s3_action();            // S3 on {1,2,3}
// left multiplication on left cosets of the subgroup generated by `gens`
GroupAction coset_action(const FiniteGroup& g, const std::vector<Elem>& gens);

// ---- structure ----------------------------------------------------------
Elem left_commutator(const FiniteGroup& g, const std::vector<Elem>& xs);

// sorted element list of the least subgroup containing gens
std::vector<Elem> subgroup_generated(const FiniteGroup& g,
                                     const std::vector<Elem>& gens);

// dense group on a subgroup's elements plus the element maps both ways
struct SubgroupResult {
  FiniteGroup group;
  std::vector<Elem> elements;       // new index -> parent element (sorted)
  std::vector<int> index_in_sub;    // parent element -> new index or -1
};
SubgroupResult subgroup_as_group(const FiniteGroup& g,
                                 const std::vector<Elem>& gens);

struct NilpotencyResult {
  bool nilpotent = false;
  int cls = 0;                              // defined when nilpotent
  std::vector<std::vector<Elem>> series;    // gamma_1 >= gamma_2 >= ...
};
NilpotencyResult nilpotency(const FiniteGroup& g);

struct ApAqResult {
  bool member = false;
  std::vector<Elem> witness_subgroup;           // N
  std::optional<std::pair<Elem, Elem>> violation;
  std::string reason;
};

// H lies in the product variety iff the verbal subgroup generated by all
// commutators and all q-th powers is abelian of exponent dividing p.
ApAqResult in_ApAq(const FiniteGroup& h, int p, int q);

// phi[k] is the automorphism of N paired with k; verified to be a
// homomorphism into Aut(N) before the product is built.
FiniteGroup semidirect_product(const FiniteGroup& n, const FiniteGroup& k,
                               const std::vector<std::vector<Elem>>& phi,
                               const Budget& budget = {});

struct FnpqReport {
  bool ok = false;
  bool generates = false;
  // one entry per size-n subset of X, in lexicographic order
  struct SubsetLine {
    std::vector<Elem> subset;
    bool in_apaq = false;
    std::size_t subgroup_order = 0;
  };
  std::vector<SubsetLine> subsets;
};

// Checks that X generates P and that every size-n subset of X generates a
// subgroup inside the (p, q) product variety.  Smaller subsets follow by
// closure under subgroups.
FnpqReport check_Fnpq_witness(const FiniteGroup& p_group,
                              const std::vector<Elem>& x, int n, int p, int q);

// ---- membership in group varieties --------------------------------------
struct GroupMembershipCertificate {
  int m = 1;
  std::vector<Elem> h_generators;            // chosen generators of H
  std::vector<std::vector<Elem>> tuples;     // per generator: its m-tuple in G^m
  std::vector<std::vector<Elem>> k_elements; // closure of tuples, BFS order
  std::vector<Elem> hom;                     // K element -> H element
  std::vector<int> kernel;                   // K indices mapping to identity
};

bool verify_group_certificate(const FiniteGroup& h, const FiniteGroup& g,
                              const GroupMembershipCertificate& cert,
                              std::string* why = nullptr);

// Search for a witness that H is a quotient of a subgroup of G^m for some
// m <= m_max.  Homomorphism combinations with trivially intersecting
// kernels are tried first (pure embeddings), then generator-tuple search.
// nullopt means not found within bounds, which is not a disproof.
std::optional<GroupMembershipCertificate> group_in_variety(
    const FiniteGroup& h, const FiniteGroup& g, int m_max,
    const Budget& budget = {});

bool is_prime(int n);

}  // namespace finvar

#endif
