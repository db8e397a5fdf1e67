#include "hicomm/algebra.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace hicomm {

std::size_t checked_pow(std::size_t n, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (n != 0 && r > SIZE_MAX / n) throw AlgebraError("table size overflow");
    r *= n;
  }
  return r;
}

FiniteAlgebra::FiniteAlgebra(std::string name, std::size_t size, std::vector<Operation> ops)
    : name_(std::move(name)), size_(size), ops_(std::move(ops)) {
  if (size_ == 0 || size_ > kMaxUniverse)
    throw AlgebraError("universe size must be in 1.." + std::to_string(kMaxUniverse));
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const auto& o = ops_[i];
    if (o.symbol.empty()) throw AlgebraError("empty op symbol");
    for (std::size_t j = 0; j < i; ++j)
      if (ops_[j].symbol == o.symbol) throw AlgebraError("duplicate op symbol " + o.symbol);
    std::size_t len = checked_pow(size_, o.arity);
    if (o.table.size() != len)
      throw AlgebraError("op " + o.symbol + ": table length " + std::to_string(o.table.size()) +
                         " ≠ " + std::to_string(len));
    for (Elem v : o.table)
      if (v >= size_) throw AlgebraError("op " + o.symbol + ": entry " + std::to_string(v) + " out of range");
  }
}

std::optional<std::size_t> FiniteAlgebra::find_op(std::string_view symbol) const {
  for (std::size_t i = 0; i < ops_.size(); ++i)
    if (ops_[i].symbol == symbol) return i;
  return std::nullopt;
}

const Operation& FiniteAlgebra::op(std::string_view symbol) const {
  auto i = find_op(symbol);
  if (!i) throw AlgebraError("unknown op symbol " + std::string(symbol));
  return ops_[*i];
}

std::uint64_t FiniteAlgebra::content_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  mix(size_);
  for (const auto& o : ops_) {
    for (char c : o.symbol) mix(static_cast<unsigned char>(c));
    mix(0xff);
    mix(o.arity);
    for (Elem v : o.table) mix(v);
  }
  return h;
}

FunctionTable::FunctionTable(std::size_t n, std::size_t k, std::vector<Elem> table,
                             std::optional<Elem> zero_point)
    : universe(n), arity(k), zero(zero_point), values(std::move(table)) {
  if (values.size() != checked_pow(n, k))
    throw AlgebraError("function table length " + std::to_string(values.size()) + " ≠ " +
                       std::to_string(checked_pow(n, k)));
  for (Elem v : values)
    if (v >= n) throw AlgebraError("function table entry out of range");
}

FunctionTable FunctionTable::constant(std::size_t n, std::size_t k, Elem c) {
  return FunctionTable(n, k, std::vector<Elem>(checked_pow(n, k), c));
}

FunctionTable FunctionTable::projection(std::size_t n, std::size_t k, std::size_t i) {
  std::vector<Elem> t(checked_pow(n, k));
  std::size_t stride = checked_pow(n, k - 1 - i);
  for (std::size_t idx = 0; idx < t.size(); ++idx) t[idx] = static_cast<Elem>((idx / stride) % n);
  return FunctionTable(n, k, std::move(t));
}

bool FunctionTable::is_constant(Elem c) const {
  return std::all_of(values.begin(), values.end(), [c](Elem v) { return v == c; });
}

namespace {

struct Tokenizer {
  std::string_view text;
  std::size_t pos = 0;
  std::size_t line = 1;

  // Next whitespace-delimited token, skipping comments; empty at end.
  std::string_view next() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (c == '\n') {
        ++line;
        ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) && text[pos] != '#')
      ++pos;
    return text.substr(start, pos - start);
  }

  std::size_t peek_line() {
    Tokenizer copy = *this;
    copy.next();
    return copy.line;
  }
};

long parse_int(std::string_view tok, std::size_t line) {
  if (tok.empty()) throw ParseError(line, "unexpected end of input");
  long v = 0;
  for (char c : tok) {
    if (c < '0' || c > '9') throw ParseError(line, "expected integer, got '" + std::string(tok) + "'");
    v = v * 10 + (c - '0');
    if (v > 1'000'000'000) throw ParseError(line, "integer too large");
  }
  return v;
}

}  // namespace

FiniteAlgebra parse_algebra(std::string_view text) {
  Tokenizer tk{text};
  std::string name;
  std::size_t size = 0;
  std::vector<Operation> ops;

  auto tok = tk.next();
  if (tok != "algebra") throw ParseError(tk.line, "expected 'algebra'");
  auto nm = tk.next();
  if (nm.empty()) throw ParseError(tk.line, "missing algebra name");
  name = std::string(nm);
  tok = tk.next();
  if (tok != "size") throw ParseError(tk.line, "expected 'size'");
  tok = tk.next();
  long sz = parse_int(tok, tk.line);
  if (sz < 1 || static_cast<std::size_t>(sz) > kMaxUniverse)
    throw ParseError(tk.line, "size must be in 1.." + std::to_string(kMaxUniverse));
  size = static_cast<std::size_t>(sz);

  tok = tk.next();
  while (!tok.empty()) {
    if (tok != "op") throw ParseError(tk.line, "expected 'op', got '" + std::string(tok) + "'");
    std::size_t op_line = tk.line;
    Operation o;
    auto sym = tk.next();
    if (sym.empty()) throw ParseError(tk.line, "missing op symbol");
    o.symbol = std::string(sym);
    for (const auto& prev : ops)
      if (prev.symbol == o.symbol) throw ParseError(tk.line, "duplicate op symbol " + o.symbol);
    o.arity = static_cast<std::size_t>(parse_int(tk.next(), tk.line));
    if (o.arity > 16) throw ParseError(tk.line, "arity too large");
    std::size_t len = checked_pow(size, o.arity);
    while (true) {
      std::size_t save_pos = tk.pos, save_line = tk.line;
      auto v = tk.next();
      if (v.empty() || v == "op") {
        tk.pos = save_pos;
        tk.line = save_line;
        break;
      }
      long x = parse_int(v, tk.line);
      if (static_cast<std::size_t>(x) >= size)
        throw ParseError(tk.line, "entry " + std::to_string(x) + " out of range 0.." + std::to_string(size - 1));
      o.table.push_back(static_cast<Elem>(x));
      if (o.table.size() > len) break;
    }
    if (o.table.size() != len)
      throw ParseError(op_line, "table length " + std::to_string(o.table.size()) + " ≠ " + std::to_string(len));
    ops.push_back(std::move(o));
    tok = tk.next();
  }
  return FiniteAlgebra(std::move(name), size, std::move(ops));
}

std::string serialize_algebra(const FiniteAlgebra& A) {
  std::ostringstream out;
  out << "algebra " << A.name() << "\n";
  out << "size " << A.size() << "\n";
  for (const auto& o : A.ops()) {
    out << "op " << o.symbol << " " << o.arity << "\n";
    std::size_t row = A.size();
    for (std::size_t i = 0; i < o.table.size(); ++i) {
      out << static_cast<int>(o.table[i]);
      out << (((i + 1) % row == 0 || i + 1 == o.table.size()) ? "\n" : " ");
    }
  }
  return out.str();
}

FunctionTable parse_function_table(std::string_view text, std::size_t universe) {
  Tokenizer tk{text};
  if (tk.next() != "fn") throw ParseError(tk.line, "expected 'fn'");
  std::size_t k = static_cast<std::size_t>(parse_int(tk.next(), tk.line));
  std::size_t len = checked_pow(universe, k);
  std::vector<Elem> vals;
  for (auto v = tk.next(); !v.empty(); v = tk.next()) {
    long x = parse_int(v, tk.line);
    if (static_cast<std::size_t>(x) >= universe) throw ParseError(tk.line, "entry out of range");
    vals.push_back(static_cast<Elem>(x));
  }
  if (vals.size() != len)
    throw ParseError(tk.line, "table length " + std::to_string(vals.size()) + " ≠ " + std::to_string(len));
  return FunctionTable(universe, k, std::move(vals));
}

std::string serialize_function_table(const FunctionTable& f) {
  std::ostringstream out;
  out << "fn " << f.arity << "\n";
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    out << static_cast<int>(f.values[i]);
    out << (((i + 1) % f.universe == 0 || i + 1 == f.values.size()) ? "\n" : " ");
  }
  return out.str();
}

FiniteAlgebra load_algebra(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.rfind(prefix, 0) == 0) return builtin_example(std::string_view(source).substr(prefix.size()));
  std::ifstream in(source);
  if (!in) throw AlgebraError("cannot open algebra file " + source);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_algebra(ss.str());
}

bool is_quasigroup(const FiniteAlgebra& A, const QuasigroupOps& q) {
  std::size_t n = A.size();
  const auto& m = A.op(q.mult).table;
  const auto& l = A.op(q.ldiv).table;
  const auto& r = A.op(q.rdiv).table;
  auto at = [n](const std::vector<Elem>& t, std::size_t x, std::size_t y) { return t[x * n + y]; };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (at(l, x, at(m, x, y)) != y) return false;  // x\(xy) = y
      if (at(r, at(m, x, y), y) != x) return false;  // (xy)/y = x
      if (at(m, x, at(l, x, y)) != y) return false;  // x(x\y) = y
      if (at(m, at(r, x, y), y) != x) return false;  // (x/y)y = x
      if (at(r, x, at(l, y, x)) != y) return false;  // x/(y\x) = y
      if (at(l, at(r, x, y), x) != y) return false;  // (x/y)\x = y
    }
  return true;
}

std::optional<QuasigroupOps> find_quasigroup_ops(const FiniteAlgebra& A) {
  auto mi = A.find_op("*"), li = A.find_op("\\"), ri = A.find_op("/");
  if (mi && li && ri) {
    QuasigroupOps q{*mi, *li, *ri};
    if (A.op(*mi).arity == 2 && A.op(*li).arity == 2 && A.op(*ri).arity == 2 && is_quasigroup(A, q)) return q;
  }
  std::vector<std::size_t> bin;
  for (std::size_t i = 0; i < A.ops().size(); ++i)
    if (A.op(i).arity == 2) bin.push_back(i);
  for (auto a : bin)
    for (auto b : bin)
      for (auto c : bin) {
        if (a == b || b == c || a == c) continue;
        QuasigroupOps q{a, b, c};
        if (is_quasigroup(A, q)) return q;
      }
  return std::nullopt;
}

}  // namespace hicomm
