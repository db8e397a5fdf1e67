#ifndef HICOMM_TERMS_HPP
#define HICOMM_TERMS_HPP

#include <map>
#include <string>
#include <vector>

#include "hicomm/commutator.hpp"
#include "hicomm/malcev.hpp"
#include "hicomm/term.hpp"

namespace hicomm {

struct TermVerdict {
  bool ok = true;
  bool exact = true;  // false when a needed commutator was only bracketed
  std::string failed;
  std::vector<Elem> witness;
  std::vector<std::string> caps;
};

// c(a,b,b) [t,t] a [t,t] c(b,b,a) with t = Cg(a,b).
TermVerdict verify_weak_difference(CommutatorEngine& engine, const Term& c);
// Same with the n-fold commutator.
TermVerdict verify_weak_n_difference(CommutatorEngine& engine, const Term& c, std::size_t n);
// c(a,b,b) [t]_n a and c(b,b,a) = a.
TermVerdict verify_n_difference(CommutatorEngine& engine, const Term& c, std::size_t n);

IdentityCheck verify_gumm_terms(const FiniteAlgebra& A, const std::vector<Term>& d, const Term& q);
IdentityCheck verify_jonsson_terms(const FiniteAlgebra& A, const std::vector<Term>& d);

struct TermSequence {
  std::string kind;  // gumm | jonsson | q-chain | tv-family
  std::vector<std::pair<std::string, Term>> terms;
  std::size_t n = 0;
  bool verified = false;
};

// d1..dn (and q) from a term file; names d1, d2, ... and q.
TermSequence gumm_sequence(const std::map<std::string, Term>& named);
// Duplicates the last d-term when n is even; re-verifies.
TermSequence pad_to_odd(const FiniteAlgebra& A, TermSequence seq);

// q_2 = q, q_{m+1}(x,y,z) = q(x, q_m(x,y,y), q_m(x,y,z)).
Term build_qn(const Term& q, std::size_t m);

// k_3 = 3, k_{m+1} = 2 k_m + 1; returns m for a valid length, 0 otherwise.
std::size_t tv_level(std::size_t length);
std::size_t tv_length(std::size_t m);

// t_v with parameters a, b substituted; v holds 1-based indices into d.
FunctionTable build_tv(const FiniteAlgebra& A, const std::vector<Term>& d, const std::vector<std::size_t>& v, Elem a,
                       Elem b);

// Both Claim families for every v in [n]^{k_m} and every pair (a,b).
IdentityCheck verify_tv_claims(const FiniteAlgebra& A, const std::vector<Term>& d, std::size_t m);

// D^k_{o,(a_1..a_k)}(f); anchors are consecutive coordinate blocks.
FunctionTable difference_operator(const FiniteAlgebra& A, const Term& m, Elem o,
                                  const std::vector<std::vector<Elem>>& anchors, const FunctionTable& f);

bool theta_absorbs(const FunctionTable& f, const std::vector<std::vector<std::size_t>>& blocks,
                   std::span<const Elem> point, Elem value, const Partition& theta);

struct CongruenceMap {
  std::string spec;
  std::vector<Partition> values;  // one per lattice element
  bool exact = true;
  Partition operator()(const CongruenceLattice& L, const Partition& p) const;
};

// "const:zero", "const:one", "identity", "lcs:k", "derived:k", "supernil:m:k".
CongruenceMap parse_congruence_map(CommutatorEngine& engine, const std::string& spec);
bool is_order_preserving(const CongruenceLattice& L, const CongruenceMap& f);

TermVerdict verify_weak_f_term(CommutatorEngine& engine, const Term& p, const CongruenceMap& f);

struct TSet {
  std::vector<ElemPair> pairs;
  Partition generated;
  bool complete = true;
  std::size_t candidates = 0;
  std::vector<std::string> caps;
};

TSet generate_T(CommutatorEngine& engine, const Partition& theta, const CongruenceMap& f,
                const std::vector<Partition>& thetas, std::size_t budget = 1'000'000);

}  // namespace hicomm

#endif
