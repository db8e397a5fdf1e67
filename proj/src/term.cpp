#include "hicomm/term.hpp"

#include <cctype>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace hicomm {

Term Term::var(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->index = index;
  return Term(std::move(n));
}

Term Term::constant(Elem value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::constant;
  n->value = value;
  return Term(std::move(n));
}

Term Term::apply(std::string symbol, std::vector<Term> children) {
  for (const auto& c : children)
    if (c.empty()) throw AlgebraError("empty subterm");
  auto n = std::make_shared<Node>();
  n->kind = Kind::apply;
  n->symbol = std::move(symbol);
  n->children = std::move(children);
  return Term(std::move(n));
}

namespace {

struct TermParser {
  std::string_view s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw AlgebraError("term syntax error at offset " + std::to_string(pos) + ": " + what);
  }

  std::string_view atom() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) && s[pos] != '(' && s[pos] != ')')
      ++pos;
    if (start == pos) fail("expected symbol");
    return s.substr(start, pos - start);
  }

  static bool all_digits(std::string_view a) {
    if (a.empty()) return false;
    for (char c : a)
      if (c < '0' || c > '9') return false;
    return true;
  }

  Term leaf(std::string_view a) {
    if (all_digits(a)) {
      long v = std::stol(std::string(a));
      if (v < 0 || v >= static_cast<long>(kMaxUniverse)) fail("constant out of range");
      return Term::constant(static_cast<Elem>(v));
    }
    if (a.size() >= 2 && a[0] == 'x' && all_digits(a.substr(1))) return Term::var(std::stoul(std::string(a.substr(1))));
    if (a == "x") return Term::var(0);
    if (a == "y") return Term::var(1);
    if (a == "z") return Term::var(2);
    if (a == "w") return Term::var(3);
    fail("unknown leaf '" + std::string(a) + "' (use x0, x1, ... or integers; wrap op symbols in parentheses)");
  }

  Term term() {
    skip();
    if (pos >= s.size()) fail("unexpected end");
    if (s[pos] == '(') {
      ++pos;
      std::string sym(atom());
      std::vector<Term> kids;
      while (true) {
        skip();
        if (pos >= s.size()) fail("missing ')'");
        if (s[pos] == ')') {
          ++pos;
          break;
        }
        kids.push_back(term());
      }
      return Term::apply(std::move(sym), std::move(kids));
    }
    if (s[pos] == ')') fail("unexpected ')'");
    return leaf(atom());
  }
};

}  // namespace

Term Term::parse(std::string_view text) {
  TermParser p{text};
  Term t = p.term();
  p.skip();
  if (p.pos != text.size()) p.fail("trailing input");
  return t;
}

std::size_t Term::arity() const {
  std::unordered_map<const void*, std::size_t> memo;
  std::function<std::size_t(const Term&)> go = [&](const Term& t) -> std::size_t {
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    std::size_t r = 0;
    if (t.kind() == Kind::variable) r = t.var_index() + 1;
    for (const auto& c : t.children()) r = std::max(r, go(c));
    memo[t.id()] = r;
    return r;
  };
  return go(*this);
}

std::size_t Term::node_count() const {
  std::unordered_set<const void*> seen;
  std::function<void(const Term&)> go = [&](const Term& t) {
    if (!seen.insert(t.id()).second) return;
    for (const auto& c : t.children()) go(c);
  };
  go(*this);
  return seen.size();
}

std::string Term::to_string() const {
  switch (kind()) {
    case Kind::variable:
      return "x" + std::to_string(var_index());
    case Kind::constant:
      return std::to_string(static_cast<int>(value()));
    case Kind::apply: {
      std::string r = "(" + symbol();
      for (const auto& c : children()) r += " " + c.to_string();
      return r + ")";
    }
  }
  return {};
}

Term Term::substitute(std::span<const Term> args) const {
  std::unordered_map<const void*, Term> memo;
  std::function<Term(const Term&)> go = [&](const Term& t) -> Term {
    if (auto it = memo.find(t.id()); it != memo.end()) return it->second;
    Term r;
    if (t.kind() == Kind::variable) {
      if (t.var_index() >= args.size()) throw AlgebraError("substitution misses variable x" + std::to_string(t.var_index()));
      r = args[t.var_index()];
    } else if (t.kind() == Kind::constant) {
      r = t;
    } else {
      std::vector<Term> kids;
      kids.reserve(t.children().size());
      for (const auto& c : t.children()) kids.push_back(go(c));
      r = Term::apply(t.symbol(), std::move(kids));
    }
    memo.emplace(t.id(), r);
    return r;
  };
  return go(*this);
}

namespace {

std::size_t resolve_op(const FiniteAlgebra& A, const Term& t) {
  auto i = A.find_op(t.symbol());
  if (!i) throw AlgebraError("unknown op symbol " + t.symbol());
  if (A.op(*i).arity != t.children().size())
    throw AlgebraError("arity mismatch for " + t.symbol() + ": expected " + std::to_string(A.op(*i).arity) +
                       ", got " + std::to_string(t.children().size()));
  return *i;
}

}  // namespace

Elem eval_term(const FiniteAlgebra& A, const Term& t, std::span<const Elem> assignment) {
  switch (t.kind()) {
    case Term::Kind::variable:
      if (t.var_index() >= assignment.size())
        throw AlgebraError("variable x" + std::to_string(t.var_index()) + " out of range");
      return assignment[t.var_index()];
    case Term::Kind::constant:
      if (t.value() >= A.size()) throw AlgebraError("constant out of range");
      return t.value();
    case Term::Kind::apply: {
      std::size_t oi = resolve_op(A, t);
      std::vector<Elem> args;
      args.reserve(t.children().size());
      for (const auto& c : t.children()) args.push_back(eval_term(A, c, assignment));
      return A.apply(oi, args);
    }
  }
  return 0;
}

FunctionTable term_to_table(const FiniteAlgebra& A, const Term& t, std::size_t arity) {
  const std::size_t n = A.size();
  const std::size_t len = checked_pow(n, arity);
  std::unordered_map<const void*, std::vector<Elem>> memo;
  std::function<const std::vector<Elem>&(const Term&)> go = [&](const Term& s) -> const std::vector<Elem>& {
    if (auto it = memo.find(s.id()); it != memo.end()) return it->second;
    std::vector<Elem> out(len);
    if (s.kind() == Term::Kind::variable) {
      if (s.var_index() >= arity) throw AlgebraError("variable x" + std::to_string(s.var_index()) + " out of range");
      out = FunctionTable::projection(n, arity, s.var_index()).values;
    } else if (s.kind() == Term::Kind::constant) {
      if (s.value() >= n) throw AlgebraError("constant out of range");
      std::fill(out.begin(), out.end(), s.value());
    } else {
      std::size_t oi = resolve_op(A, s);
      std::vector<const std::vector<Elem>*> kids;
      for (const auto& c : s.children()) kids.push_back(&go(c));
      const auto& table = A.op(oi).table;
      for (std::size_t idx = 0; idx < len; ++idx) {
        std::size_t code = 0;
        for (const auto* k : kids) code = code * n + (*k)[idx];
        out[idx] = table[code];
      }
    }
    return memo.emplace(s.id(), std::move(out)).first->second;
  };
  return FunctionTable(n, arity, go(t));
}

std::map<std::string, Term> parse_term_file(std::string_view text) {
  std::map<std::string, Term> out;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected NAME = (term)");
    std::string_view name = line.substr(0, eq);
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.remove_suffix(1);
    if (name.empty()) throw ParseError(line_no, "missing term name");
    try {
      out[std::string(name)] = Term::parse(line.substr(eq + 1));
    } catch (const ParseError&) {
      throw;
    } catch (const AlgebraError& e) {
      throw ParseError(line_no, e.what());
    }
    if (end == text.size()) break;
  }
  return out;
}

}  // namespace hicomm
