#ifndef HICOMM_MALCEV_HPP
#define HICOMM_MALCEV_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hicomm/algebra.hpp"
#include "hicomm/clone.hpp"
#include "hicomm/commutator.hpp"
#include "hicomm/term.hpp"

namespace hicomm {

struct MalcevSearch {
  std::optional<Term> term;
  // "quasigroup" or "closure"; when no term is returned, exhausted tells
  // whether the closure converged (no Mal'cev term exists) or hit the budget.
  std::string method;
  bool exhausted = false;
  std::size_t explored = 0;
};

MalcevSearch find_malcev_term(const FiniteAlgebra& A, std::size_t budget = std::size_t{1} << 20);

// First (x, y) with m(x,y,y) != x or m(y,y,x) != x.
std::optional<std::pair<Elem, Elem>> malcev_violation(const FiniteAlgebra& A, const Term& m);

struct FgTerms {
  Term f, g;
};
FgTerms build_fg_terms(const Term& m, std::size_t k);

struct IdentityCheck {
  bool ok = true;
  std::string failed;          // name of the identity
  std::vector<Elem> witness;   // argument tuple
};

// Inverse pairs m(-,b,c) / f_n(-,b,c) and m(c,b,-) / g_n(c,b,-), and the
// four identities f_n(y,x,x)=y, f_n(x,y,x)=y, g_n(x,x,y)=y, g_n(x,y,x)=y.
IdentityCheck verify_fg_inverses(const FiniteAlgebra& A, const Term& m, std::size_t class_n);

struct LoopReduct {
  const FiniteAlgebra* base = nullptr;
  Elem zero = 0;
  FunctionTable mult, ldiv, rdiv;
  std::map<std::string, FunctionTable> extras;

  std::size_t size() const { return mult.universe; }
  Elem mul(Elem x, Elem y) const { return mult.values[x * size() + y]; }
  Elem left_div(Elem x, Elem y) const { return ldiv.values[x * size() + y]; }
  Elem right_div(Elem x, Elem y) const { return rdiv.values[x * size() + y]; }
};

// Loop axioms with identity element zero.
IdentityCheck verify_loop(const LoopReduct& L);

// Throws AlgebraError when the inverse check or a loop axiom fails.
LoopReduct loop_reduct(const FiniteAlgebra& A, const Term& m, Elem zero, std::size_t class_n);

// The expanded loop as an algebra: "*", "\\", "/", the extras, and the base
// operations when include_base is set.
FiniteAlgebra loop_algebra(const LoopReduct& L, bool include_base = true);

struct RepresentationEntry {
  std::vector<std::size_t> subset;  // sorted coordinates
  FunctionTable table;              // arity subset.size(), 0-absorbing
};

struct Representation {
  std::size_t arity = 0;
  std::size_t degree = 0;
  Elem c = 0;
  std::vector<std::vector<RepresentationEntry>> layers;  // layers[m-1] holds the |S| = m entries
};

class ResidualError : public AlgebraError {
 public:
  ResidualError(const std::string& what, std::vector<std::size_t> subset)
      : AlgebraError(what), subset_(std::move(subset)) {}
  const std::vector<std::size_t>& subset() const { return subset_; }

 private:
  std::vector<std::size_t> subset_;
};

Representation interpolation_representation(const LoopReduct& L, const FunctionTable& f, std::size_t degree);
Elem evaluate_representation(const LoopReduct& L, const Representation& rep, std::span<const Elem> args);
IdentityCheck verify_representation(const LoopReduct& L, const Representation& rep, const FunctionTable& f);

std::string representation_to_json(const Representation& rep);
Representation representation_from_json(const std::string& text, std::size_t universe);

struct NtypeCondition {
  std::string status;  // pass | fail | indeterminate
  std::string detail;
};

struct NtypeReport {
  std::size_t n = 0;
  NtypeCondition generation, distributivity, nested;
  bool passes() const {
    return generation.status == "pass" && distributivity.status == "pass" && nested.status == "pass";
  }
};

NtypeReport verify_ntype(const LoopReduct& L, std::size_t n, const EngineOptions& options = {});

struct MeasureTerms {
  FunctionTable commutator;          // [x,y]
  FunctionTable inverse_commutator;  // [x^-1,y^-1]
  FunctionTable mixed_commutator;    // [y^-1,x]
  FunctionTable assoc_left;          // a1
  FunctionTable assoc_right;         // a2
  std::optional<FunctionTable> distributor;  // d_t
  IdentityCheck equations;
  IdentityCheck absorption;
};

MeasureTerms loop_measure_terms(const LoopReduct& L, const FunctionTable* t = nullptr);

// (t o s)(x1..x_max) = t(s(x1..x_k), x2..x_m).
FunctionTable compose_first_slot(const FunctionTable& t, const FunctionTable& s);

}  // namespace hicomm

#endif
