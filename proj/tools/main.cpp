#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cache.hpp"
#include "hicomm/commutator.hpp"
#include "hicomm/malcev.hpp"
#include "hicomm/terms.hpp"
#include "json.hpp"

using json = nlohmann::ordered_json;
using namespace hicomm;

namespace {

constexpr const char* kReportVersion = "hicomm-report/1";

struct Config {
  std::string command;
  std::string algebra;
  std::string args;
  std::string delta;
  std::string term_file;
  std::string term;
  std::string term_name;
  std::string kind;
  std::string map = "const:zero";
  std::string props;
  std::size_t n = 0;
  std::size_t max_n = 8;
  std::size_t degree = 0;
  std::size_t klass = 0;
  int zero = 0;
  std::size_t delta_cap = std::size_t{1} << 22;
  std::size_t clone_cap = 1'000'000;
  std::size_t lattice_cap = 100000;
  std::size_t budget = 100000;
  std::size_t threads = 1;
  std::string format = "text";
  std::string cache_dir;
  bool no_cache = false;
};

// Definite answers exit 0, budget-bound ones 2.
struct Outcome {
  json result = json::object();
  std::vector<std::string> caps;
  bool indeterminate = false;
  std::optional<std::string> dot;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

// Splits "--args" on commas, then glues bare "a-b" pieces back onto a
// preceding cg: spec so "cg:0-4,0-2,one" reads as two arguments.
std::vector<std::string> split_args(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty()) continue;
    bool bare_pair = piece.find(':') == std::string::npos && piece.find('-') != std::string::npos;
    if (bare_pair && !out.empty() && out.back().rfind("cg:", 0) == 0)
      out.back() += "," + piece;
    else
      out.push_back(piece);
  }
  return out;
}

json partition_json(const Partition& p, const CongruenceLattice* L = nullptr) {
  json blocks = json::array();
  for (const auto& b : p.blocks()) {
    json blk = json::array();
    for (Elem e : b) blk.push_back(static_cast<int>(e));
    blocks.push_back(blk);
  }
  json j{{"blocks", blocks}, {"string", p.to_string()}};
  if (L)
    if (auto i = L->index_of(p)) j["index"] = *i;
  return j;
}

json elems_json(const std::vector<Elem>& v) {
  json a = json::array();
  for (Elem e : v) a.push_back(static_cast<int>(e));
  return a;
}

json certificate_json(const Certificate& c) {
  json j{{"kind", c.kind}};
  if (!c.term.empty()) j["term"] = c.term;
  if (!c.args.empty()) j["args"] = elems_json(c.args);
  if (!c.cube.empty()) j["cube"] = elems_json(c.cube);
  if (c.pair) j["pair"] = json::array({c.pair->first, c.pair->second});
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j;
}

json commutator_json(const CommutatorResult& r, const CongruenceLattice* L) {
  json args = json::array();
  for (const auto& t : r.inputs) args.push_back(partition_json(t, L));
  json j{{"arguments", args},
         {"exact", r.exact},
         {"value", partition_json(r.value, L)},
         {"upper", partition_json(r.upper, L)},
         {"method", to_string(r.method)},
         {"upper_method", to_string(r.upper_method)},
         {"path", r.path},
         {"delta_log2_size", std::round(r.delta_log2_size * 1000) / 1000}};
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(certificate_json(c));
  j["certificates"] = certs;
  j["caps"] = r.caps;
  return j;
}

json identity_json(const IdentityCheck& c) {
  json j{{"ok", c.ok}};
  if (!c.ok) {
    j["failed"] = c.failed;
    j["witness"] = elems_json(c.witness);
  }
  return j;
}

json verdict_json(const TermVerdict& v) {
  json j{{"ok", v.ok}, {"exact", v.exact}};
  if (!v.failed.empty()) j["failed"] = v.failed;
  if (!v.witness.empty()) j["witness"] = elems_json(v.witness);
  j["caps"] = v.caps;
  return j;
}

void add_caps(Outcome& o, const std::vector<std::string>& caps) {
  for (const auto& c : caps)
    if (std::find(o.caps.begin(), o.caps.end(), c) == o.caps.end()) o.caps.push_back(c);
}

class Runner {
 public:
  explicit Runner(const Config& cfg) : cfg_(cfg) {}

  Outcome run() {
    const auto& c = cfg_.command;
    if (c == "conlat") return conlat();
    if (c == "comm") return comm();
    if (c == "centralize") return centralize();
    if (c == "series") return series();
    if (c == "snclass") return snclass();
    if (c == "neutrality") return neutrality();
    if (c == "hc-props") return hc_props();
    if (c == "malcev") return malcev();
    if (c == "loopify") return loopify();
    if (c == "represent") return represent();
    if (c == "ntype") return ntype();
    if (c == "verify-term") return verify_term();
    if (c == "gen-t") return gen_t();
    throw UsageError("unknown command " + c);
  }

  const FiniteAlgebra& algebra() {
    if (!A_) {
      if (cfg_.algebra.empty()) throw UsageError("--algebra is required");
      A_ = load_algebra(cfg_.algebra);
    }
    return *A_;
  }

  EngineOptions engine_options() const {
    EngineOptions eo;
    eo.delta_cap = cfg_.delta_cap;
    eo.clone_cap = cfg_.clone_cap;
    eo.lattice_cap = cfg_.lattice_cap;
    eo.threads = cfg_.threads;
    return eo;
  }

  CommutatorEngine& engine() {
    if (!engine_) engine_ = std::make_unique<CommutatorEngine>(algebra(), engine_options());
    return *engine_;
  }

 private:
  std::vector<Partition> congruence_args(const std::string& text, std::size_t min_count) {
    auto specs = split_args(text);
    if (specs.size() < min_count) throw UsageError("--args needs at least " + std::to_string(min_count) + " congruences");
    std::vector<Partition> out;
    for (const auto& s : specs) out.push_back(congruence(s));
    return out;
  }

  Partition congruence(const std::string& spec) {
    const CongruenceLattice* L = spec.rfind("idx:", 0) == 0 ? &engine().lattice() : nullptr;
    auto p = parse_congruence_spec(algebra(), spec, L);
    if (!is_congruence(algebra(), p)) throw AlgebraError("'" + spec + "' is not a congruence");
    return p;
  }

  const CongruenceLattice* lattice_if_built() {
    // Only index results against the lattice when it is cheap to have.
    try {
      return &engine().lattice();
    } catch (const LatticeCapExceeded&) {
      return nullptr;
    }
  }

  std::map<std::string, Term> terms() {
    std::map<std::string, Term> named;
    if (!cfg_.term_file.empty()) {
      std::ifstream in(cfg_.term_file);
      if (!in) throw AlgebraError("cannot read term file " + cfg_.term_file);
      std::stringstream ss;
      ss << in.rdbuf();
      named = parse_term_file(ss.str());
    }
    if (!cfg_.term.empty()) named[cfg_.term_name.empty() ? "t" : cfg_.term_name] = Term::parse(cfg_.term);
    return named;
  }

  Term single_term(const std::map<std::string, Term>& named, std::initializer_list<const char*> preferred) {
    if (!cfg_.term_name.empty()) {
      auto it = named.find(cfg_.term_name);
      if (it == named.end()) throw UsageError("no term named " + cfg_.term_name);
      return it->second;
    }
    if (named.size() == 1) return named.begin()->second;
    for (const char* p : preferred)
      if (auto it = named.find(p); it != named.end()) return it->second;
    throw UsageError("give the term with --term, or pick one with --term-name");
  }

  std::vector<Term> d_sequence(const std::map<std::string, Term>& named) {
    std::vector<Term> d;
    for (std::size_t i = 1;; ++i) {
      auto it = named.find("d" + std::to_string(i));
      if (it == named.end()) break;
      d.push_back(it->second);
    }
    if (d.empty()) throw UsageError("term file needs d1, d2, ...");
    return d;
  }

  Outcome conlat() {
    Outcome o;
    auto L = congruence_lattice(algebra(), cfg_.lattice_cap, cfg_.threads);
    json elems = json::array();
    for (std::size_t i = 0; i < L.size(); ++i) {
      auto j = partition_json(L[i], &L);
      j["block_count"] = L[i].block_count();
      elems.push_back(j);
    }
    json covers = json::array();
    for (std::size_t i = 0; i < L.size(); ++i)
      for (auto k : L.covers()[i]) covers.push_back(json::array({i, k}));
    auto sd = is_meet_semidistributive(L);
    json sdj{{"holds", sd.holds}};
    if (sd.witness) sdj["witness"] = json::array({(*sd.witness)[0], (*sd.witness)[1], (*sd.witness)[2]});
    o.result = json{{"size", L.size()}, {"elements", elems}, {"covers", covers}, {"meet_semidistributive", sdj}};
    o.dot = lattice_to_dot(L, algebra().name());
    return o;
  }

  Outcome comm() {
    Outcome o;
    auto thetas = congruence_args(cfg_.args, 1);
    auto r = engine().commutator(thetas);
    o.result = commutator_json(r, lattice_if_built());
    o.indeterminate = !r.exact;
    add_caps(o, r.caps);
    return o;
  }

  Outcome centralize() {
    Outcome o;
    auto all = congruence_args(cfg_.args, 2);
    if (cfg_.delta.empty()) throw UsageError("centralize needs --delta");
    Partition beta = all.back();
    all.pop_back();
    auto delta = congruence(cfg_.delta);
    try {
      auto r = engine().centralizes(all, beta, delta);
      o.result = json{{"holds", r.holds}};
      if (r.violating_cube) o.result["violating_cube"] = elems_json(*r.violating_cube);
    } catch (const IndeterminateError& e) {
      o.indeterminate = true;
      o.result = json{{"holds", nullptr}, {"reason", e.what()}};
      add_caps(o, {e.cap()});
    }
    return o;
  }

  Outcome series() {
    Outcome o;
    Partition theta = cfg_.args.empty() ? Partition::one(algebra().size()) : congruence(cfg_.args);
    std::string kind = cfg_.kind.empty() ? "lower-central" : cfg_.kind;
    std::size_t m = cfg_.n ? cfg_.n : 2;
    auto r = engine().series(theta, kind, cfg_.max_n, m);
    const auto* L = lattice_if_built();
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back(partition_json(t, L));
    o.result = json{{"kind", r.kind}, {"terms", terms}, {"stabilized", r.stabilized}, {"exact", r.exact}};
    o.indeterminate = !r.exact;
    return o;
  }

  Outcome snclass() {
    Outcome o;
    auto r = engine().supernilpotence_class(cfg_.max_n);
    const auto* L = lattice_if_built();
    json ev = json::array();
    bool all_exact = true;
    for (const auto& e : r.evidence) {
      all_exact = all_exact && e.exact;
      add_caps(o, e.caps);
      ev.push_back(json{{"arity", e.inputs.size()},
                        {"exact", e.exact},
                        {"value", partition_json(e.value, L)},
                        {"upper", partition_json(e.upper, L)},
                        {"method", to_string(e.method)},
                        {"upper_method", to_string(e.upper_method)}});
    }
    o.result = json{{"class", r.klass ? json(*r.klass) : json(nullptr)}, {"lower_bound", r.lower_bound},
                    {"max_n", cfg_.max_n}, {"evidence", ev}};
    o.indeterminate = !r.klass && !all_exact;
    return o;
  }

  Outcome neutrality() {
    Outcome o;
    std::size_t n = cfg_.n ? cfg_.n : 2;
    auto r = engine().check_neutrality(n, cfg_.budget);
    const auto* L = lattice_if_built();
    o.result = json{{"n", n}, {"holds", r.holds}, {"exhaustive", r.exhaustive}, {"tuples_checked", r.tuples_checked}};
    if (!r.counterexample.empty()) {
      json ce = json::array();
      for (const auto& p : r.counterexample) ce.push_back(partition_json(p, L));
      o.result["counterexample"] = ce;
      if (r.counterexample_value) o.result["counterexample_value"] = partition_json(*r.counterexample_value, L);
    }
    if (!r.exhaustive) add_caps(o, {"budget=" + std::to_string(cfg_.budget)});
    o.indeterminate = r.holds && !r.exhaustive;
    return o;
  }

  Outcome hc_props() {
    Outcome o;
    std::set<std::string> props;
    if (cfg_.props.empty())
      for (int i = 1; i <= 8; ++i) props.insert("HC" + std::to_string(i));
    else
      for (auto p : split_args(cfg_.props)) props.insert(p);
    std::size_t n = cfg_.n ? cfg_.n : 2;
    bool malcev = find_malcev_term(algebra(), cfg_.clone_cap).term.has_value();
    auto r = engine().check_hc_properties(props, n, cfg_.budget, malcev);
    json entries = json::array();
    for (const auto& e : r.entries) {
      json j{{"property", e.property}, {"status", e.status}, {"cases", e.cases}};
      if (!e.witness.empty()) j["witness"] = e.witness;
      entries.push_back(j);
      if (e.status == "indeterminate") o.indeterminate = true;
    }
    o.result = json{{"n", n}, {"malcev", malcev}, {"exhaustive", r.exhaustive}, {"all_pass", r.all_pass()},
                    {"entries", entries}};
    if (!r.exhaustive) add_caps(o, {"sample=" + std::to_string(cfg_.budget)});
    return o;
  }

  Outcome malcev() {
    Outcome o;
    auto r = find_malcev_term(algebra(), cfg_.clone_cap);
    o.result = json{{"found", r.term.has_value()}, {"method", r.method}, {"exhausted", r.exhausted},
                    {"explored", r.explored}};
    if (r.term) o.result["term"] = r.term->to_string();
    if (!r.term && !r.exhausted) {
      o.indeterminate = true;
      add_caps(o, {"clone-cap=" + std::to_string(cfg_.clone_cap)});
    }
    return o;
  }

  // Loop reduct from a given or searched Mal'cev term; class from --class
  // or from the lower central series.
  LoopReduct reduct(json& info) {
    auto named = terms();
    Term m;
    if (auto it = named.find("m"); it != named.end()) {
      m = it->second;
    } else {
      auto s = find_malcev_term(algebra(), cfg_.clone_cap);
      if (!s.term) throw AlgebraError(s.exhausted ? "algebra has no Mal'cev term" : "no Mal'cev term within clone cap");
      m = *s.term;
    }
    std::size_t klass = cfg_.klass;
    if (!klass) {
      auto lcs = engine().series(Partition::one(algebra().size()), "lower-central", 32);
      if (lcs.terms.empty() || !lcs.terms.back().is_zero()) throw AlgebraError("algebra is not nilpotent; pass --n");
      klass = std::max<std::size_t>(1, lcs.terms.size() - 1);
    }
    if (cfg_.zero < 0 || static_cast<std::size_t>(cfg_.zero) >= algebra().size()) throw UsageError("--zero out of range");
    info = json{{"malcev_term", m.to_string()}, {"zero", cfg_.zero}, {"class", klass}};
    return loop_reduct(algebra(), m, static_cast<Elem>(cfg_.zero), klass);
  }

  Outcome loopify() {
    Outcome o;
    json info;
    auto L = reduct(info);
    auto lc = verify_loop(L);
    o.result = info;
    o.result["loop"] = identity_json(lc);
    o.result["mult"] = elems_json(L.mult.values);
    o.result["ldiv"] = elems_json(L.ldiv.values);
    o.result["rdiv"] = elems_json(L.rdiv.values);
    return o;
  }

  Outcome represent() {
    Outcome o;
    json info;
    auto L = reduct(info);
    auto named = terms();
    named.erase("m");
    if (named.empty()) throw UsageError("represent needs a polynomial via --term or --term-file");
    Term t = single_term(named, {"f", "p", "t"});
    std::size_t arity = std::max<std::size_t>(t.arity(), 1);
    auto f = term_to_table(algebra(), t, arity);
    std::size_t degree = cfg_.degree ? cfg_.degree : arity;
    auto rep = interpolation_representation(L, f, degree);
    auto check = verify_representation(L, rep, f);
    o.result = info;
    o.result["term"] = t.to_string();
    o.result["representation"] = json::parse(representation_to_json(rep));
    o.result["verified"] = identity_json(check);
    return o;
  }

  Outcome ntype() {
    Outcome o;
    json info;
    auto L = reduct(info);
    std::size_t n = cfg_.n ? cfg_.n : 2;
    auto r = verify_ntype(L, n, engine_options());
    auto cond = [&](const NtypeCondition& c) {
      if (c.status == "indeterminate") o.indeterminate = true;
      return json{{"status", c.status}, {"detail", c.detail}};
    };
    o.result = info;
    o.result["n"] = n;
    o.result["generation"] = cond(r.generation);
    o.result["distributivity"] = cond(r.distributivity);
    o.result["nested"] = cond(r.nested);
    o.result["passes"] = r.passes();
    return o;
  }

  Outcome verify_term() {
    Outcome o;
    auto named = terms();
    const std::string& k = cfg_.kind;
    auto verdict = [&](const TermVerdict& v) {
      o.result = verdict_json(v);
      o.indeterminate = !v.exact;
      add_caps(o, v.caps);
    };
    if (k == "weak-difference") {
      verdict(verify_weak_difference(engine(), single_term(named, {"c", "d", "t"})));
    } else if (k == "weak-n-difference") {
      verdict(verify_weak_n_difference(engine(), single_term(named, {"c", "d", "t"}), cfg_.n ? cfg_.n : 2));
    } else if (k == "n-difference") {
      verdict(verify_n_difference(engine(), single_term(named, {"c", "d", "t"}), cfg_.n ? cfg_.n : 2));
    } else if (k == "weak-f") {
      auto f = parse_congruence_map(engine(), cfg_.map);
      verdict(verify_weak_f_term(engine(), single_term(named, {"p", "t"}), f));
      o.result["map"] = cfg_.map;
      o.result["order_preserving"] = is_order_preserving(engine().lattice(), f);
    } else if (k == "malcev") {
      auto m = single_term(named, {"m"});
      auto v = malcev_violation(algebra(), m);
      o.result = json{{"ok", !v}};
      if (v) o.result["witness"] = json::array({v->first, v->second});
    } else if (k == "gumm") {
      auto q = named.find("q");
      if (q == named.end()) throw UsageError("gumm needs q in the term file");
      o.result = identity_json(verify_gumm_terms(algebra(), d_sequence(named), q->second));
    } else if (k == "jonsson") {
      o.result = identity_json(verify_jonsson_terms(algebra(), d_sequence(named)));
    } else if (k == "tv-claims") {
      auto d = d_sequence(named);
      std::size_t m = cfg_.n ? cfg_.n : 3;
      o.result = identity_json(verify_tv_claims(algebra(), d, m));
      o.result["m"] = m;
    } else if (k == "q-chain") {
      auto q = single_term(named, {"q"});
      std::size_t m = cfg_.n ? cfg_.n : 3;
      auto qm = build_qn(q, m);
      auto v = verify_weak_n_difference(engine(), qm, m);
      verdict(v);
      o.result["q_m"] = qm.to_string();
      o.result["m"] = m;
    } else {
      throw UsageError("--kind must be one of weak-difference, weak-n-difference, n-difference, weak-f, malcev, "
                       "gumm, jonsson, tv-claims, q-chain");
    }
    json head{{"kind", k}};
    head.update(o.result);
    o.result = head;
    return o;
  }

  Outcome gen_t() {
    Outcome o;
    auto all = congruence_args(cfg_.args, 2);
    Partition theta = all.front();
    std::vector<Partition> thetas(all.begin() + 1, all.end());
    auto f = parse_congruence_map(engine(), cfg_.map);
    auto t = generate_T(engine(), theta, f, thetas, cfg_.clone_cap);
    json pairs = json::array();
    for (auto [a, b] : t.pairs) pairs.push_back(json::array({a, b}));
    const auto* L = lattice_if_built();
    o.result = json{{"map", cfg_.map}, {"complete", t.complete}, {"candidates", t.candidates},
                    {"pairs", pairs}, {"generated", partition_json(t.generated, L)}};
    o.indeterminate = !t.complete;
    add_caps(o, t.caps);
    return o;
  }

  const Config& cfg_;
  std::optional<FiniteAlgebra> A_;
  std::unique_ptr<CommutatorEngine> engine_;
};

void render_text(const json& j, std::ostream& out, int indent) {
  const std::string pad(indent, ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    out << pad << it.key() << ":";
    if (v.is_object() && v.contains("string") && v.contains("blocks")) {
      out << " " << v["string"].get<std::string>();
      if (v.contains("index")) out << "  (idx " << v["index"] << ")";
      out << "\n";
    } else if (v.is_object()) {
      out << "\n";
      render_text(v, out, indent + 2);
    } else if (v.is_array() && !v.empty() && v.front().is_object()) {
      out << "\n";
      for (const auto& e : v) {
        if (e.contains("string") && e.contains("blocks")) {
          out << pad << "  - " << e["string"].get<std::string>();
          if (e.contains("index")) out << "  (idx " << e["index"] << ")";
          out << "\n";
        } else {
          out << pad << "  -\n";
          render_text(e, out, indent + 4);
        }
      }
    } else if (v.is_string()) {
      out << " " << v.get<std::string>() << "\n";
    } else {
      out << " " << v.dump() << "\n";
    }
  }
}

std::string render(const Config& cfg, const FiniteAlgebra& A, const Outcome& o) {
  if (cfg.format == "dot") {
    if (!o.dot) throw UsageError("--format dot is only available for conlat");
    return *o.dot;
  }
  json report{{"version", kReportVersion},
              {"command", cfg.command},
              {"algebra", {{"name", A.name()}, {"size", A.size()}, {"hash", hex64(A.content_hash())}}},
              {"status", o.indeterminate ? "indeterminate" : "definite"},
              {"caps", o.caps},
              {"result", o.result}};
  if (cfg.format == "json") return report.dump(2) + "\n";
  std::ostringstream out;
  out << cfg.command << " on " << A.name() << " (size " << A.size() << "): "
      << (o.indeterminate ? "indeterminate" : "definite") << "\n";
  if (!o.caps.empty()) {
    out << "caps:";
    for (const auto& c : o.caps) out << " " << c;
    out << "\n";
  }
  render_text(o.result, out, 0);
  return out.str();
}

std::string cache_key(const Config& c, const FiniteAlgebra& A) {
  std::ostringstream k;
  k << kReportVersion << "|" << A.name() << "|" << hex64(A.content_hash()) << "|" << c.command << "|args=" << c.args
    << "|delta=" << c.delta << "|kind=" << c.kind << "|map=" << c.map << "|props=" << c.props << "|n=" << c.n
    << "|max-n=" << c.max_n << "|degree=" << c.degree << "|class=" << c.klass << "|zero=" << c.zero << "|budget=" << c.budget
    << "|delta-cap=" << c.delta_cap << "|clone-cap=" << c.clone_cap << "|lattice-cap=" << c.lattice_cap
    << "|format=" << c.format << "|term=" << c.term << "|term-name=" << c.term_name;
  if (!c.term_file.empty()) {
    std::ifstream in(c.term_file);
    std::stringstream ss;
    ss << in.rdbuf();
    k << "|term-file=" << cli::fnv1a_hex(ss.str());
  }
  return k.str();
}

int examples(const Config& cfg) {
  json list = json::array();
  for (const auto& name : builtin_names()) {
    if (name == "zN-group") {
      list.push_back(json{{"name", "zN-group"}, {"note", "use a concrete N, e.g. builtin:z4-group"}});
      continue;
    }
    auto A = builtin_example(name);
    json ops = json::array();
    for (const auto& op : A.ops()) ops.push_back(op.symbol + "/" + std::to_string(op.arity));
    list.push_back(json{{"name", name}, {"size", A.size()}, {"ops", ops}});
  }
  json usage = json::array({"hicomm conlat --algebra builtin:z8-bulatov --format dot",
                            "hicomm comm --algebra builtin:z8-bulatov --args one,one --format json",
                            "hicomm comm --algebra builtin:z8-bulatov --args one,one,one,one",
                            "hicomm snclass --algebra builtin:z8-bulatov --max-n 6",
                            "hicomm centralize --algebra builtin:z4-group --args one,one --delta zero",
                            "hicomm loopify --algebra builtin:d4-group",
                            "hicomm verify-term --algebra builtin:two-lattice --kind weak-difference "
                            "--term '(join (join (meet x y) (meet y z)) (meet x z))'",
                            "hicomm gen-t --algebra builtin:z8-bulatov --args one,one,one --map const:zero"});
  if (cfg.format == "json") {
    json report{{"version", kReportVersion}, {"command", "examples"}, {"status", "definite"},
                {"result", {{"builtins", list}, {"usage", usage}}}};
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << "builtin algebras:\n";
    for (const auto& e : list) {
      std::cout << "  builtin:" << e["name"].get<std::string>();
      if (e.contains("size")) {
        std::cout << "  size " << e["size"] << "  ops";
        for (const auto& op : e["ops"]) std::cout << " " << op.get<std::string>();
      } else {
        std::cout << "  " << e["note"].get<std::string>();
      }
      std::cout << "\n";
    }
    std::cout << "usage:\n";
    for (const auto& u : usage) std::cout << "  " << u.get<std::string>() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Config cfg;
  CLI::App app{"Higher commutators of finite algebras"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs{
      {"conlat", "congruence lattice, covers and meet-semidistributivity"},
      {"comm", "higher commutator [t1,...,tn] of --args"},
      {"centralize", "does t1..t(n-1) centralize the last --args entry modulo --delta"},
      {"series", "lower-central, derived, supernil or nested series of --args (default one)"},
      {"snclass", "supernilpotence class up to --max-n"},
      {"neutrality", "is [t1..tn] = t1 ^ ... ^ tn for all congruences"},
      {"hc-props", "check commutator properties HC1..HC8"},
      {"malcev", "search for a Mal'cev term"},
      {"loopify", "loop reduct from a Mal'cev term"},
      {"represent", "layered representation of a polynomial over the loop reduct"},
      {"ntype", "check the n-type loop conditions"},
      {"verify-term", "verify a term scheme (--kind)"},
      {"gen-t", "T-set of --args theta,t1..tn under --map"},
      {"examples", "list builtin algebras and sample invocations"}};

  for (const auto& s : subs) {
    auto* sc = app.add_subcommand(s.name, s.help);
    sc->callback([&cfg, name = std::string(s.name)] { cfg.command = name; });
    sc->add_option("--algebra", cfg.algebra, "builtin:NAME or algebra file");
    sc->add_option("--args", cfg.args, "comma-separated congruences: zero, one, cg:a-b[,c-d], idx:k");
    sc->add_option("--delta", cfg.delta, "modulus congruence for centralize");
    sc->add_option("--term-file", cfg.term_file, "file of NAME = (term) lines");
    sc->add_option("--term", cfg.term, "inline term");
    sc->add_option("--term-name", cfg.term_name, "which named term to use");
    sc->add_option("--kind", cfg.kind, "series kind or term scheme");
    sc->add_option("--map", cfg.map, "congruence map: const:zero|one, identity, lcs:k, derived:k, supernil:m:k");
    sc->add_option("--props", cfg.props, "comma-separated HC properties");
    sc->add_option("--n", cfg.n, "arity, class or degree parameter");
    sc->add_option("--max-n", cfg.max_n, "largest arity or series length");
    sc->add_option("--degree", cfg.degree, "representation degree");
    sc->add_option("--class", cfg.klass, "nilpotence class for the loop reduct (default: computed)");
    sc->add_option("--zero", cfg.zero, "loop identity element");
    sc->add_option("--budget", cfg.budget, "tuple budget for scans and samples")->check(CLI::PositiveNumber);
    sc->add_option("--delta-cap", cfg.delta_cap, "cube set size cap")->check(CLI::PositiveNumber);
    sc->add_option("--clone-cap", cfg.clone_cap, "polynomial table cap")->check(CLI::PositiveNumber);
    sc->add_option("--lattice-cap", cfg.lattice_cap, "congruence lattice size cap")->check(CLI::PositiveNumber);
    sc->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    sc->add_option("--format", cfg.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
    sc->add_option("--cache-dir", cfg.cache_dir, "result cache directory");
    sc->add_flag("--no-cache", cfg.no_cache, "ignore the cache");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (cfg.command == "examples") return examples(cfg);

  try {
    Runner runner(cfg);
    const auto& A = runner.algebra();

    std::string dir = cfg.cache_dir;
    if (const char* env = std::getenv("HICOMM_CACHE"); env && *env) dir = env;
    std::optional<cli::ResultCache> cache;
    std::string key;
    if (!dir.empty() && !cfg.no_cache) {
      cache.emplace(dir);
      key = cache_key(cfg, A);
      if (auto hit = cache->lookup(key)) {
        std::cerr << "cache-hit " << cache->path_for(key).string() << "\n";
        std::cout << hit->output;
        return hit->exit_code;
      }
    }

    auto outcome = runner.run();
    std::string text = render(cfg, A, outcome);
    int code = outcome.indeterminate ? 2 : 0;
    if (cache) cache->store(key, {code, text});
    std::cout << text;
    return code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ResidualError& e) {
    std::string s;
    for (auto i : e.subset()) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
    std::cerr << "error: " << e.what() << " (subset {" << s << "})\n";
    return 1;
  } catch (const IndeterminateError& e) {
    std::cerr << "indeterminate: " << e.what() << " [" << e.cap() << "]\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
