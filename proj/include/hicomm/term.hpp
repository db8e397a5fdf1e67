#ifndef HICOMM_TERM_HPP
#define HICOMM_TERM_HPP

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hicomm/algebra.hpp"

namespace hicomm {

// Immutable term DAG. Copies share structure.
class Term {
 public:
  enum class Kind { variable, constant, apply };

  Term() = default;

  static Term var(std::size_t index);
  static Term constant(Elem value);
  static Term apply(std::string symbol, std::vector<Term> children);

  // Prefix syntax: (f (p x0 x1) x1 x2). x, y, z, w are accepted for x0..x3.
  static Term parse(std::string_view text);

  bool empty() const { return !node_; }
  Kind kind() const { return node_->kind; }
  std::size_t var_index() const { return node_->index; }
  Elem value() const { return node_->value; }
  const std::string& symbol() const { return node_->symbol; }
  const std::vector<Term>& children() const { return node_->children; }

  // Number of variables needed: 1 + largest variable index, 0 if ground.
  std::size_t arity() const;
  std::size_t node_count() const;
  std::string to_string() const;

  // Replaces variable i by args[i].
  Term substitute(std::span<const Term> args) const;
  Term substitute(std::initializer_list<Term> args) const {
    return substitute(std::span<const Term>(args.begin(), args.size()));
  }

  const void* id() const { return node_.get(); }

 private:
  struct Node {
    Kind kind = Kind::variable;
    std::size_t index = 0;
    Elem value = 0;
    std::string symbol;
    std::vector<Term> children;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Elem eval_term(const FiniteAlgebra& A, const Term& t, std::span<const Elem> assignment);

// Evaluates t at every assignment of k variables; shared subterms are
// evaluated once.
FunctionTable term_to_table(const FiniteAlgebra& A, const Term& t, std::size_t arity);

// Term files: one "NAME = (term)" per line, '#' comments.
std::map<std::string, Term> parse_term_file(std::string_view text);

}  // namespace hicomm

#endif
