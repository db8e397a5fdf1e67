#include "hicomm/subpower.hpp"

#include <unordered_map>

namespace hicomm {

std::optional<std::size_t> find_group_op(const FiniteAlgebra& A) {
  const std::size_t n = A.size();
  for (std::size_t oi = 0; oi < A.ops().size(); ++oi) {
    const auto& op = A.op(oi);
    if (op.arity != 2) continue;
    auto mul = [&](std::size_t x, std::size_t y) { return op.table[x * n + y]; };
    std::optional<std::size_t> e;
    for (std::size_t c = 0; c < n && !e; ++c) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) ok = mul(c, x) == x && mul(x, c) == x;
      if (ok) e = c;
    }
    if (!e) continue;
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) {
      bool has_inv = false;
      for (std::size_t y = 0; y < n && !has_inv; ++y) has_inv = mul(x, y) == *e;
      ok = has_inv;
    }
    for (std::size_t x = 0; x < n && ok; ++x)
      for (std::size_t y = 0; y < n && ok; ++y)
        for (std::size_t z = 0; z < n && ok; ++z) ok = mul(mul(x, y), z) == mul(x, mul(y, z));
    if (ok) return oi;
  }
  return std::nullopt;
}

namespace {

struct Abort {};

// Coordinatewise unary maps obtained by fixing all but the last argument.
struct SectionTable {
  std::size_t op = 0;
  std::size_t arity = 0;
  std::vector<std::vector<Elem>> maps;     // distinct rows
  std::vector<std::uint16_t> row_to_map;   // prefix index -> map id
  std::unique_ptr<BasicTupleStore<std::uint16_t>> keys;
  std::vector<std::uint32_t> reps;         // representative argument tuples, (arity-1) per key
};

}  // namespace

class ClosureRun {
 public:
  ClosureRun(const FiniteAlgebra& A, Subpower& out, const ClosureOptions& opt)
      : A_(A), out_(out), opt_(opt), n_(A.size()), w_(out.width()) {
    out_.cap_ = opt.cap;
    if (opt.allow_group_path) group_ = find_group_op(A);
    out_.group_op_ = group_;
    buf_.resize(w_);
    for (std::size_t oi = 0; oi < A.ops().size(); ++oi) {
      const auto& op = A.op(oi);
      if (op.arity < 2 || (group_ && *group_ == oi)) continue;
      SectionTable st;
      st.op = oi;
      st.arity = op.arity;
      std::size_t rows = checked_pow(n_, op.arity - 1);
      st.row_to_map.resize(rows);
      std::unordered_map<std::string, std::uint16_t> seen;
      if (rows > 65535) throw AlgebraError("op " + op.symbol + " too large for section tables");
      for (std::size_t r = 0; r < rows; ++r) {
        std::string key(op.table.begin() + r * n_, op.table.begin() + (r + 1) * n_);
        auto [it, inserted] = seen.emplace(key, static_cast<std::uint16_t>(st.maps.size()));
        if (inserted) st.maps.emplace_back(op.table.begin() + r * n_, op.table.begin() + (r + 1) * n_);
        st.row_to_map[r] = it->second;
      }
      st.keys = std::make_unique<BasicTupleStore<std::uint16_t>>(st.maps.size(), w_);
      sections_.push_back(std::move(st));
    }
  }

  void run(const std::vector<std::vector<Elem>>& gens) {
    try {
      for (std::size_t oi = 0; oi < A_.ops().size(); ++oi) {
        const auto& op = A_.op(oi);
        if (op.arity != 0) continue;
        std::fill(buf_.begin(), buf_.end(), op.table[0]);
        add_seed(static_cast<int>(oi), {});
      }
      for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        const auto& g = gens[gi];
        if (g.size() != w_) throw AlgebraError("generator width mismatch");
        std::copy(g.begin(), g.end(), buf_.begin());
        add_seed(-1, {static_cast<std::uint32_t>(gi)});
      }
      std::size_t old = 0;
      while (true) {
        const std::size_t end = out_.size();
        if (old == end) break;
        for (std::size_t oi = 0; oi < A_.ops().size(); ++oi) {
          if (A_.op(oi).arity == 1) apply_unary(oi, old, end);
        }
        for (auto& st : sections_) apply_sections(st, old, end);
        old = end;
      }
      out_.complete_ = true;
    } catch (const Abort&) {
      out_.complete_ = false;
    }
  }

 private:
  void count_work(std::size_t units) {
    work_ += units;
    if (work_ > opt_.max_work) {
      out_.work_exceeded_ = true;
      out_.cap_exceeded_ = true;
      throw Abort{};
    }
  }

  // Inserts buf_; returns true when new.
  bool add(int op, std::initializer_list<std::uint32_t> args, const std::uint32_t* extra = nullptr,
           std::size_t extra_len = 0) {
    if (out_.store_.contains(buf_)) return false;
    if (out_.store_.size() >= opt_.cap) {
      out_.cap_exceeded_ = true;
      throw Abort{};
    }
    out_.store_.insert(buf_);
    if (opt_.provenance) {
      Provenance p;
      p.op = op;
      if (extra) p.args.assign(extra, extra + extra_len);
      p.args.insert(p.args.end(), args.begin(), args.end());
      out_.prov_.push_back(std::move(p));
    }
    if (group_) mult_done_.push_back(0);
    if (opt_.stop_when && opt_.stop_when(buf_)) {
      out_.stopped_ = out_.store_.size() - 1;
      throw Abort{};
    }
    return true;
  }

  void add_seed(int op, std::initializer_list<std::uint32_t> args) {
    if (add(op, args) && group_) {
      gens_.push_back(static_cast<std::uint32_t>(out_.size() - 1));
      group_sweep();
    }
  }

  void add_derived(int op, std::initializer_list<std::uint32_t> args, const std::uint32_t* extra = nullptr,
                   std::size_t extra_len = 0) {
    if (add(op, args, extra, extra_len) && group_) {
      gens_.push_back(static_cast<std::uint32_t>(out_.size() - 1));
      group_sweep();
    }
  }

  // Right-multiplies every element by every generator not yet applied to it.
  void group_sweep() {
    const auto& table = A_.op(*group_).table;
    for (std::size_t i = 0; i < out_.size(); ++i) {
      while (mult_done_[i] < gens_.size()) {
        std::uint32_t g = gens_[mult_done_[i]++];
        auto x = out_.store_[i];
        auto y = out_.store_[g];
        for (std::size_t v = 0; v < w_; ++v) buf_[v] = table[x[v] * n_ + y[v]];
        count_work(1);
        add(static_cast<int>(*group_), {static_cast<std::uint32_t>(i), g});
      }
    }
  }

  void apply_unary(std::size_t oi, std::size_t old, std::size_t end) {
    const auto& table = A_.op(oi).table;
    for (std::size_t i = old; i < end; ++i) {
      auto x = out_.store_[i];
      for (std::size_t v = 0; v < w_; ++v) buf_[v] = table[x[v]];
      count_work(1);
      add_derived(static_cast<int>(oi), {static_cast<std::uint32_t>(i)});
    }
  }

  void apply_section(const SectionTable& st, std::size_t key, std::size_t elem) {
    auto phi = (*st.keys)[key];
    auto x = out_.store_[elem];
    for (std::size_t v = 0; v < w_; ++v) buf_[v] = st.maps[phi[v]][x[v]];
    count_work(1);
    const std::uint32_t* rep = st.reps.data() + key * (st.arity - 1);
    add_derived(static_cast<int>(st.op), {static_cast<std::uint32_t>(elem)}, rep, st.arity - 1);
  }

  void apply_sections(SectionTable& st, std::size_t old, std::size_t end) {
    const std::size_t m = st.arity - 1;
    const std::size_t first_new = st.keys->size();
    // Discover sections from (arity-1)-tuples touching the frontier. The first
    // frontier slot is j: slots before j range over [0,old), slot j over
    // [old,end), slots after j over [0,end).
    std::vector<std::uint32_t> idx(m);
    std::vector<std::uint16_t> key(w_);
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<std::size_t> lo(m), hi(m);
      bool empty = false;
      for (std::size_t s = 0; s < m; ++s) {
        if (s < j) {
          lo[s] = 0;
          hi[s] = old;
        } else if (s == j) {
          lo[s] = old;
          hi[s] = end;
        } else {
          lo[s] = 0;
          hi[s] = end;
        }
        if (lo[s] >= hi[s]) empty = true;
        idx[s] = static_cast<std::uint32_t>(lo[s]);
      }
      if (empty) continue;
      while (true) {
        for (std::size_t v = 0; v < w_; ++v) {
          std::size_t prefix = 0;
          for (std::size_t s = 0; s < m; ++s) prefix = prefix * n_ + out_.store_[idx[s]][v];
          key[v] = st.row_to_map[prefix];
        }
        count_work(1);
        if (st.keys->insert(key)) st.reps.insert(st.reps.end(), idx.begin(), idx.end());
        std::size_t s = m;
        while (s-- > 0) {
          if (++idx[s] < hi[s]) break;
          idx[s] = static_cast<std::uint32_t>(lo[s]);
        }
        if (s == static_cast<std::size_t>(-1)) break;
      }
    }
    const std::size_t last = st.keys->size();
    for (std::size_t k = 0; k < first_new; ++k)
      for (std::size_t e = old; e < end; ++e) apply_section(st, k, e);
    for (std::size_t k = first_new; k < last; ++k)
      for (std::size_t e = 0; e < end; ++e) apply_section(st, k, e);
  }

  const FiniteAlgebra& A_;
  Subpower& out_;
  const ClosureOptions& opt_;
  std::size_t n_, w_;
  std::optional<std::size_t> group_;
  std::vector<std::uint32_t> gens_;
  std::vector<std::uint32_t> mult_done_;
  std::vector<SectionTable> sections_;
  std::vector<Elem> buf_;
  std::size_t work_ = 0;
};

Subpower generate_subpower(const FiniteAlgebra& A, std::size_t width,
                           const std::vector<std::vector<Elem>>& generators, const ClosureOptions& options) {
  Subpower out(A.size(), width);
  ClosureRun run(A, out, options);
  run.run(generators);
  return out;
}

}  // namespace hicomm
