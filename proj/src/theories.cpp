#include "wb/theories.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "wb/rewrite.hpp"

namespace wb {

std::string BoomFlags::id() const {
  std::string s = "boom:";
  s += unit ? 'U' : '-';
  s += assoc ? 'A' : '-';
  s += comm ? 'C' : '-';
  s += idem ? 'I' : '-';
  return s;
}

std::string BoomFlags::label() const {
  std::string s;
  if (assoc && comm) {
    s = idem ? "P" : "M";
  } else if (assoc) {
    s = idem ? "AI" : "L";
  } else if (comm) {
    s = idem ? "CI" : "C";
  } else {
    s = idem ? "I" : "T";
  }
  if (!unit) s += "+";
  return s;
}

std::optional<BoomFlags> BoomFlags::parse(std::string_view id) {
  if (id.size() != 9 || id.substr(0, 5) != "boom:") return std::nullopt;
  const char want[] = {'U', 'A', 'C', 'I'};
  bool f[4];
  for (int i = 0; i < 4; ++i) {
    char c = id[5 + i];
    if (c == want[i])
      f[i] = true;
    else if (c == '-')
      f[i] = false;
    else
      return std::nullopt;
  }
  return BoomFlags{f[0], f[1], f[2], f[3]};
}

// Table order: T, I, C, CI, L, AI, M, P, then the same without unit.
std::vector<BoomFlags> BoomFlags::all() {
  std::vector<BoomFlags> out;
  for (bool unit : {true, false})
    for (bool assoc : {false, true})
      for (bool comm : {false, true})
        for (bool idem : {false, true}) out.push_back({unit, assoc, comm, idem});
  return out;
}

namespace {

const char* kPropertyNames[] = {"P1", "P2", "P3", "V1", "V2", "V3", "S1", "S2",
                                "S3", "S4a", "S4b", "T1", "T2", "T3", "T4a", "T4b"};

TermPtr y(int i) { return Term::var("y" + std::to_string(i)); }

std::string describe_status(CertStatus s) {
  switch (s) {
    case CertStatus::HoldsAnalytic: return "holds (exact)";
    case CertStatus::HoldsBounded: return "holds (bounded)";
    case CertStatus::Fails: return "fails";
    case CertStatus::Unknown: return "unknown";
  }
  return "?";
}

}  // namespace

std::string to_string(PropertyId p) { return kPropertyNames[static_cast<int>(p)]; }

std::optional<PropertyId> parse_property(std::string_view s) {
  for (int i = 0; i < 16; ++i)
    if (s == kPropertyNames[i]) return static_cast<PropertyId>(i);
  return std::nullopt;
}

bool is_bounded_property(PropertyId p) {
  switch (p) {
    case PropertyId::P3:
    case PropertyId::V2:
    case PropertyId::V3:
    case PropertyId::S1:
    case PropertyId::S2:
    case PropertyId::T1:
    case PropertyId::T2: return true;
    default: return false;
  }
}

std::string PropertyCertificate::describe() const {
  std::string s = to_string(property) + ": " + describe_status(status);
  if (status == CertStatus::HoldsBounded || (status == CertStatus::Fails && depth > 0))
    s += " [depth " + std::to_string(depth) + ", vars " + std::to_string(vars) + "]";
  if (witness) s += " witness " + to_string(witness->first) + " = " + to_string(witness->second);
  if (!note.empty()) s += " (" + note + ")";
  return s;
}

TheoryEntry boom_theory(BoomFlags f) {
  TheoryEntry e;
  e.id = f.id();
  e.label = f.label();
  e.flags = f;
  Presentation& p = e.presentation;
  p.name = e.id;
  if (f.unit) p.signature.add({"e", 0});
  p.signature.add({"mul", 2});
  if (f.unit) {
    p.add_axiom("mul(e,x) = x");
    p.add_axiom("mul(x,e) = x");
  }
  if (f.assoc) p.add_axiom("mul(mul(x,y),z) = mul(x,mul(y,z))");
  if (f.comm) p.add_axiom("mul(x,y) = mul(y,x)");
  if (f.idem) p.add_axiom("mul(x,x) = x");
  e.designated.binary = Term::app("mul", {y(1), y(2)});
  if (f.unit) e.designated.unit_constant = Term::app("e");
  e.procedure = make_boom_procedure(f.unit, f.assoc, f.comm, f.idem);
  return e;
}

namespace {

TheoryEntry exception_theory(const std::vector<std::string>& labels, std::string id) {
  TheoryEntry e;
  e.id = std::move(id);
  e.label = e.id;
  e.presentation.name = e.id;
  for (const auto& l : labels) e.presentation.signature.add({l, 0});
  if (!labels.empty()) e.designated.unit_constant = Term::app(labels.front());
  e.procedure = make_free_procedure();
  return e;
}

TheoryEntry abgroup_theory() {
  TheoryEntry e;
  e.id = e.label = "abgroup";
  Presentation& p = e.presentation;
  p.name = e.id;
  p.signature = Signature{{"e", 0}, {"mul", 2}, {"inv", 1}};
  p.add_axiom("mul(e,x) = x");
  p.add_axiom("mul(x,e) = x");
  p.add_axiom("mul(mul(x,y),z) = mul(x,mul(y,z))");
  p.add_axiom("mul(x,y) = mul(y,x)");
  p.add_axiom("mul(inv(x),x) = e");
  p.add_axiom("mul(x,inv(x)) = e");
  e.designated.binary = Term::app("mul", {y(1), y(2)});
  e.designated.unit_constant = Term::app("e");
  e.procedure = make_abgroup_procedure();
  auto chain = [&](std::initializer_list<const char*> steps) {
    std::vector<TermPtr> c;
    for (const char* t : steps) c.push_back(e.parse(t));
    e.lemmas.push_back(std::move(c));
  };
  chain({"mul(inv(x),mul(x,y))", "mul(mul(inv(x),x),y)", "mul(e,y)", "y"});
  chain({"mul(x,mul(inv(x),y))", "mul(mul(x,inv(x)),y)", "mul(e,y)", "y"});
  chain({"mul(x,mul(y,z))", "mul(mul(x,y),z)", "mul(mul(y,x),z)", "mul(y,mul(x,z))"});
  chain({"inv(inv(x))", "mul(inv(inv(x)),e)", "mul(inv(inv(x)),mul(inv(x),x))", "x"});
  chain({"inv(e)", "mul(inv(e),e)", "e"});
  chain({"inv(mul(x,y))", "mul(inv(mul(x,y)),e)", "mul(inv(mul(x,y)),mul(y,inv(y)))",
         "mul(inv(mul(x,y)),mul(x,mul(inv(x),mul(y,inv(y)))))",
         "mul(inv(mul(x,y)),mul(x,mul(y,mul(inv(x),inv(y)))))",
         "mul(inv(mul(x,y)),mul(mul(x,y),mul(inv(x),inv(y))))", "mul(inv(x),inv(y))"});
  return e;
}

TheoryEntry convex_theory() {
  TheoryEntry e;
  e.id = e.label = "convex";
  Presentation& p = e.presentation;
  p.name = e.id;
  p.signature = Signature{{"mix0", 2}, {"mixh", 2}, {"mix1", 2}};
  p.add_axiom("mixh(x,x) = x");
  p.add_axiom("mixh(x,y) = mixh(y,x)");
  p.add_axiom("mixh(mixh(w,x),mixh(y,z)) = mixh(mixh(w,y),mixh(x,z))");
  p.add_axiom("mix1(x,y) = x");
  p.add_axiom("mix0(x,y) = y");
  e.designated.binary = Term::app("mixh", {y(1), y(2)});
  e.procedure = make_convex_procedure();
  e.universal_excluded_ops = {"mix0", "mix1"};
  return e;
}

TheoryEntry reader_theory() {
  TheoryEntry e;
  e.id = e.label = "reader2";
  Presentation& p = e.presentation;
  p.name = e.id;
  p.signature = Signature{{"get", 2}};
  p.add_axiom("get(x,x) = x");
  p.add_axiom("get(get(w,x),get(y,z)) = get(w,z)");
  e.designated.binary = Term::app("get", {y(1), y(2)});
  e.procedure = make_reader_procedure();
  return e;
}

TheoryEntry ternary_tree_theory() {
  TheoryEntry e;
  e.id = e.label = "tree3";
  Presentation& p = e.presentation;
  p.name = e.id;
  p.signature = Signature{{"e", 0}, {"phi", 3}};
  p.add_axiom("phi(x,e,e) = x");
  p.add_axiom("phi(e,x,e) = x");
  p.add_axiom("phi(e,e,x) = x");
  e.designated.binary = Term::app("phi", {y(1), y(2), Term::app("e")});
  e.designated.unit_constant = Term::app("e");
  e.procedure = make_ternary_tree_procedure();
  return e;
}

TheoryEntry ring_theory() {
  TheoryEntry e;
  e.id = e.label = "ring";
  Presentation& p = e.presentation;
  p.name = e.id;
  p.signature = Signature{{"zero", 0}, {"one", 0}, {"add", 2}, {"neg", 1}, {"mul", 2}};
  p.add_axiom("add(zero,x) = x");
  p.add_axiom("add(x,zero) = x");
  p.add_axiom("add(add(x,y),z) = add(x,add(y,z))");
  p.add_axiom("add(x,y) = add(y,x)");
  p.add_axiom("add(neg(x),x) = zero");
  p.add_axiom("add(x,neg(x)) = zero");
  p.add_axiom("mul(one,x) = x");
  p.add_axiom("mul(x,one) = x");
  p.add_axiom("mul(mul(x,y),z) = mul(x,mul(y,z))");
  p.add_axiom("mul(x,add(y,z)) = add(mul(x,y),mul(x,z))");
  p.add_axiom("mul(add(x,y),z) = add(mul(x,z),mul(y,z))");
  e.designated.binary = Term::app("add", {y(1), y(2)});
  e.designated.unit_constant = Term::app("zero");
  e.procedure = make_ring_procedure();
  return e;
}

struct Registry {
  std::vector<std::unique_ptr<TheoryEntry>> listed;
  std::map<std::string, const TheoryEntry*, std::less<>> by_id;
  std::map<std::string, std::vector<std::string>> aliases;
  std::vector<std::unique_ptr<TheoryEntry>> extra;
  std::mutex mu;

  void add(TheoryEntry e, bool list, std::vector<std::string> alias = {}) {
    auto p = std::make_unique<TheoryEntry>(std::move(e));
    by_id[p->id] = p.get();
    for (const auto& a : alias) by_id[a] = p.get();
    aliases[p->id] = std::move(alias);
    (list ? listed : extra).push_back(std::move(p));
  }

  Registry() {
    std::map<std::string, std::vector<std::string>> boom_alias = {
        {"boom:U---", {"tree"}},
        {"boom:UA--", {"monoid"}},
        {"boom:UAC-", {"cmonoid"}},
        {"boom:UACI", {"jsl"}},
        {"boom:-A--", {"semigroup"}},
        {"boom:-A-I", {"band"}}};
    for (const auto& f : BoomFlags::all()) add(boom_theory(f), true, boom_alias[f.id()]);
    add(exception_theory({"c"}, "pointed"), true);
    add(exception_theory({"a", "b"}, "exception:{a,b}"), true);
    add(abgroup_theory(), true);
    add(convex_theory(), true);
    add(reader_theory(), true);
    add(ternary_tree_theory(), false);
    add(ring_theory(), false);
  }

  const TheoryEntry* find(std::string_view id) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = by_id.find(id);
    if (it != by_id.end()) return it->second;
    // exception:{l1,...,ln}
    if (id.rfind("exception:{", 0) == 0 && id.back() == '}') {
      std::string inner(id.substr(11, id.size() - 12));
      std::vector<std::string> labels;
      std::size_t start = 0;
      while (start <= inner.size()) {
        auto comma = inner.find(',', start);
        std::string l = inner.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (l.empty() || !std::isalpha(static_cast<unsigned char>(l[0]))) return nullptr;
        for (char c : l)
          if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return nullptr;
        if (std::find(labels.begin(), labels.end(), l) != labels.end()) return nullptr;
        labels.push_back(l);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      auto p = std::make_unique<TheoryEntry>(exception_theory(labels, std::string(id)));
      const TheoryEntry* raw = p.get();
      by_id[std::string(id)] = raw;
      extra.push_back(std::move(p));
      return raw;
    }
    return nullptr;
  }
};

Registry& registry() {
  static Registry r;
  return r;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

const TheoryEntry* find_theory(std::string_view id) { return registry().find(id); }

const TheoryEntry& get_theory(std::string_view id) {
  if (const TheoryEntry* e = find_theory(id)) return *e;
  std::vector<std::string> close;
  for (const auto& [name, entry] : registry().by_id)
    if (edit_distance(name, id) <= 2 || name.find(id) != std::string::npos) close.push_back(name);
  std::string msg = "unknown theory '" + std::string(id) + "'";
  if (!close.empty()) {
    msg += "; did you mean:";
    for (const auto& c : close) msg += " " + c;
  }
  msg += " (see `theories list`)";
  throw std::invalid_argument(msg);
}

std::vector<const TheoryEntry*> registered_theories() {
  std::vector<const TheoryEntry*> out;
  for (const auto& e : registry().listed) out.push_back(e.get());
  return out;
}

std::vector<std::string> theory_aliases(const TheoryEntry& e) {
  auto it = registry().aliases.find(e.id);
  return it == registry().aliases.end() ? std::vector<std::string>{} : it->second;
}

TheoryEntry user_theory(const Presentation& p) {
  TheoryEntry e;
  e.id = e.label = p.name;
  e.presentation = p;
  for (const auto& op : p.signature.ops())
    if (op.arity == 2) {
      e.designated.binary = Term::app(op.name, {y(1), y(2)});
      break;
    }
  return e;
}

std::optional<bool> theory_equal(const TheoryEntry& e, const TermPtr& a, const TermPtr& b,
                                 int proof_depth) {
  if (e.procedure) return decide_eq(*e.procedure, a, b);
  if (eq_bounded(e.presentation, a, b, proof_depth) == EqOutcome::Equal) return true;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Census

namespace {

struct Key {
  int op, a, b, c;
  bool operator==(const Key& o) const { return op == o.op && a == o.a && b == o.b && c == o.c; }
};
struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = static_cast<std::uint64_t>(k.op) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(k.a) + 0x632BE59BD9B4E019ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.b) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.c) + 0xBF58476D1CE4E5B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

double Census::count(const TheoryEntry& e, int depth, int vars, const std::set<std::string>& excluded) {
  double atoms = vars;
  for (const auto& op : e.presentation.signature.ops())
    if (op.arity == 0 && !excluded.count(op.name)) atoms += 1;
  double n = atoms;
  for (int d = 1; d <= depth; ++d) {
    double next = atoms;
    for (const auto& op : e.presentation.signature.ops())
      if (op.arity > 0 && !excluded.count(op.name)) next += std::pow(n, op.arity);
    n = next;
  }
  return n;
}

std::pair<int, int> Census::fit(const TheoryEntry& e, const Bounds& b,
                                const std::set<std::string>& excluded) {
  for (int d = b.depth; d >= 1; --d)
    for (int k = b.vars; k >= std::min(2, b.vars); --k)
      if (count(e, d, k, excluded) <= static_cast<double>(b.max_terms)) return {d, k};
  return {0, b.vars};
}

Census::Census(const TheoryEntry& e, int depth, int vars, const std::set<std::string>& excluded)
    : depth_(depth), vars_(vars) {
  if (!e.procedure) throw std::invalid_argument("census needs a decision procedure: " + e.id);
  if (vars > 31) throw std::invalid_argument("too many variables");
  const Procedure& proc = *e.procedure;
  auto intern = [&](const TermPtr& nf) {
    auto [it, inserted] = nf_index_.emplace(nf, static_cast<int>(nf_terms_.size()));
    if (inserted) nf_terms_.push_back(nf);
    return it->second;
  };

  for (int i = 1; i <= vars; ++i) {
    atom_names_.push_back(canonical_var(i));
    nodes_.push_back({-1, static_cast<int>(atom_names_.size()) - 1, 0, 0,
                      intern(proc.variable(canonical_var(i))), 1u << (i - 1)});
  }
  std::vector<const OpSymbol*> ops;
  for (const auto& op : e.presentation.signature.ops()) {
    if (excluded.count(op.name)) continue;
    if (op.arity == 0) {
      atom_names_.push_back(op.name);
      nodes_.push_back({-2, static_cast<int>(atom_names_.size()) - 1, 0, 0,
                        intern(proc.apply(op.name, {})), 0u});
    } else {
      if (op.arity > 3) throw std::invalid_argument("census supports arity up to 3");
      ops.push_back(&op);
      op_names_.push_back(op.name);
      op_arity_.push_back(op.arity);
    }
  }

  std::unordered_map<Key, int, KeyHash> memo;
  std::size_t prev_end = 0, cur_end = nodes_.size();
  for (int d = 1; d <= depth; ++d) {
    for (std::size_t oi = 0; oi < ops.size(); ++oi) {
      int arity = ops[oi]->arity;
      std::vector<std::size_t> idx(arity, 0);
      for (;;) {
        bool fresh = false;
        for (auto i : idx) fresh = fresh || i >= prev_end;
        if (fresh || d == 1) {
          Key k{static_cast<int>(oi), -1, -1, -1};
          std::uint32_t mask = 0;
          int* slots[3] = {&k.a, &k.b, &k.c};
          for (int j = 0; j < arity; ++j) {
            *slots[j] = nodes_[idx[j]].nf;
            mask |= nodes_[idx[j]].mask;
          }
          int id;
          auto it = memo.find(k);
          if (it != memo.end()) {
            id = it->second;
          } else {
            std::vector<TermPtr> args;
            for (int j = 0; j < arity; ++j) args.push_back(nf_terms_[nodes_[idx[j]].nf]);
            id = intern(proc.apply(ops[oi]->name, args));
            memo.emplace(k, id);
          }
          Node n{static_cast<int>(oi), static_cast<int>(idx[0]), arity > 1 ? static_cast<int>(idx[1]) : 0,
                 arity > 2 ? static_cast<int>(idx[2]) : 0, id, mask};
          nodes_.push_back(n);
        }
        int j = arity - 1;
        while (j >= 0 && ++idx[j] == cur_end) idx[j--] = 0;
        if (j < 0) break;
      }
    }
    prev_end = cur_end;
    cur_end = nodes_.size();
  }
}

TermPtr Census::term(std::size_t i) const {
  const Node& n = nodes_[i];
  if (n.op == -1) return Term::var(atom_names_[n.a]);
  if (n.op == -2) return Term::app(atom_names_[n.a]);
  const int kids[3] = {n.a, n.b, n.c};
  std::vector<TermPtr> args;
  for (int j = 0; j < op_arity_[n.op]; ++j) args.push_back(term(static_cast<std::size_t>(kids[j])));
  return Term::app(op_names_[n.op], std::move(args));
}

int Census::find_nf(const TermPtr& nf) const {
  auto it = nf_index_.find(nf);
  return it == nf_index_.end() ? -1 : it->second;
}

// ---------------------------------------------------------------------------
// Property certificates

namespace {

std::shared_ptr<const Census> cached_census(const TheoryEntry& e, int depth, int vars,
                                            const std::set<std::string>& excluded) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const Census>> cache;
  std::string key = e.id + "|" + std::to_string(depth) + "|" + std::to_string(vars);
  for (const auto& op : excluded) key += "|" + op;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto c = std::make_shared<const Census>(e, depth, vars, excluded);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, c).first->second;
}

TermPtr with_args(const TermPtr& binary, const TermPtr& a, const TermPtr& b) {
  return substitute(binary, {{"y1", a}, {"y2", b}});
}

PropertyCertificate exact(PropertyId p, const TheoryEntry& e,
                          const std::vector<std::pair<TermPtr, TermPtr>>& equations, bool want_equal) {
  PropertyCertificate c{p};
  for (const auto& [l, r] : equations) {
    std::optional<bool> eq = theory_equal(e, l, r);
    if (!eq) {
      c.status = CertStatus::Unknown;
      c.note = "no decision procedure and no bounded derivation found";
      return c;
    }
    if (*eq != want_equal) {
      c.status = CertStatus::Fails;
      c.witness = std::make_pair(l, r);
      if (!want_equal) c.note = "both sides are equal";
      return c;
    }
  }
  c.status = CertStatus::HoldsAnalytic;
  if (!e.procedure) c.provenance = "eq_bounded derivation";
  return c;
}

const TermPtr& need(const TermPtr& t, const TheoryEntry& e, const char* what) {
  if (!t) throw MissingDesignatedError(e.id + " has no designated " + what);
  return t;
}

PropertyCertificate units_for_every_op(const TheoryEntry& e) {
  PropertyCertificate c{PropertyId::S3};
  c.status = CertStatus::HoldsAnalytic;
  std::vector<std::string> constants = e.presentation.signature.constants();
  TermPtr x = Term::var("x");
  for (const auto& op : e.presentation.signature.ops()) {
    if (op.arity == 0) continue;
    std::optional<std::pair<TermPtr, TermPtr>> first_failure;
    bool found = false;
    for (const auto& k : constants) {
      bool ok = true;
      for (int i = 0; i < op.arity && ok; ++i) {
        std::vector<TermPtr> args(op.arity, Term::app(k));
        args[i] = x;
        TermPtr lhs = Term::app(op.name, args);
        std::optional<bool> eq = theory_equal(e, lhs, x);
        if (!eq) {
          c.status = CertStatus::Unknown;
          c.note = "no decision procedure";
          return c;
        }
        if (!*eq) {
          ok = false;
          if (!first_failure) first_failure = std::make_pair(lhs, x);
        }
      }
      if (ok) {
        found = true;
        break;
      }
    }
    if (!found) {
      c.status = CertStatus::Fails;
      if (first_failure) {
        c.witness = first_failure;
        c.note = "no constant is a unit for " + op.name;
      } else {
        c.note = "no constant in the signature to act as unit for " + op.name;
      }
      return c;
    }
  }
  return c;
}

}  // namespace

std::pair<TermPtr, TermPtr> abides_pair(const TheoryEntry& e) {
  const TermPtr& b = need(e.designated.binary, e, "binary term");
  TermPtr y1 = y(1), y2 = y(2), y3 = y(3), y4 = y(4);
  return {with_args(b, with_args(b, y1, y2), with_args(b, y3, y4)),
          with_args(b, with_args(b, y1, y3), with_args(b, y2, y4))};
}

bool abides_holds(const TheoryEntry& e) {
  auto [l, r] = abides_pair(e);
  std::optional<bool> eq = theory_equal(e, l, r);
  if (!eq) throw std::invalid_argument(e.id + ": abides undecided (no decision procedure)");
  return *eq;
}

PropertyCertificate check_property(const TheoryEntry& e, PropertyId p, const Bounds& b,
                                   const TermPtr& term) {
  TermPtr y1 = y(1), y2 = y(2);
  switch (p) {
    case PropertyId::P1: {
      const TermPtr& t = need(term ? term : e.designated.binary, e, "binary term");
      return exact(p, e, {{with_args(t, y1, y2), with_args(t, y2, y1)}}, true);
    }
    case PropertyId::P2:
    case PropertyId::V1:
    case PropertyId::S4b: {
      const TermPtr& t = need(p == PropertyId::S4b ? e.designated.binary : (term ? term : e.designated.binary),
                              e, "binary term");
      return exact(p, e, {{with_args(t, y1, y1), y1}}, true);
    }
    case PropertyId::S3: return units_for_every_op(e);
    case PropertyId::S4a:
    case PropertyId::T4a: {
      const TermPtr& t = need(e.designated.binary, e, "binary term");
      const TermPtr& u = need(e.designated.unit_constant, e, "unit constant");
      return exact(p, e, {{with_args(t, y1, u), y1}, {with_args(t, u, y1), y1}}, true);
    }
    case PropertyId::T3: {
      PropertyCertificate c{p};
      if (e.designated.unit_constant || !e.presentation.signature.constants().empty()) {
        c.status = CertStatus::HoldsAnalytic;
      } else {
        c.status = CertStatus::Fails;
        c.note = "no constant in the signature";
      }
      return c;
    }
    case PropertyId::T4b: {
      auto pair = abides_pair(e);
      return exact(p, e, {pair}, false);
    }
    default: break;
  }

  // Properties over all terms: exhaustive enumeration.
  PropertyCertificate c{p};
  bool filtered = p == PropertyId::P3 || p == PropertyId::V2 || p == PropertyId::V3;
  std::set<std::string> excluded = filtered ? e.universal_excluded_ops : std::set<std::string>{};
  if (!e.procedure) {
    c.note = "no decision procedure; bounded enumeration unavailable";
    return c;
  }
  TermPtr special;
  if (p == PropertyId::P3 || p == PropertyId::V3) special = need(term ? term : e.designated.binary, e, "binary term");
  auto [depth, vars] = Census::fit(e, b, excluded);
  if (depth == 0 || vars < 2) {
    c.note = "enumeration bound too large";
    return c;
  }
  auto census = cached_census(e, depth, vars, excluded);
  c.depth = depth;
  c.vars = vars;
  if (!excluded.empty()) {
    c.note = "universal set excludes";
    for (const auto& op : excluded) c.note += " " + op;
  }
  const Census& cs = *census;
  auto fail = [&](std::size_t i, const TermPtr& other) {
    c.status = CertStatus::Fails;
    c.witness = std::make_pair(cs.term(i), other);
    return c;
  };

  switch (p) {
    case PropertyId::S1:
    case PropertyId::T1: {
      std::vector<long> closed(cs.classes(), -1), open(cs.classes(), -1);
      for (std::size_t i = 0; i < cs.size(); ++i) {
        auto& slot = cs.mask(i) == 0 ? closed[cs.nf(i)] : open[cs.nf(i)];
        if (slot < 0) slot = static_cast<long>(i);
      }
      for (std::size_t k = 0; k < cs.classes(); ++k)
        if (closed[k] >= 0 && open[k] >= 0)
          return fail(static_cast<std::size_t>(closed[k]), cs.term(static_cast<std::size_t>(open[k])));
      break;
    }
    case PropertyId::S2:
    case PropertyId::T2:
    case PropertyId::V2: {
      for (int v = 1; v <= vars; ++v) {
        int id = cs.find_nf(normalize(*e.procedure, Term::var(canonical_var(v))));
        std::uint32_t allowed = 1u << (v - 1);
        for (std::size_t i = 0; i < cs.size(); ++i)
          if (cs.nf(i) == id && (cs.mask(i) & ~allowed)) return fail(i, Term::var(canonical_var(v)));
      }
      break;
    }
    case PropertyId::P3: {
      TermPtr target = with_args(special, Term::var("v1"), Term::var("v2"));
      int id = cs.find_nf(normalize(*e.procedure, target));
      for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs.nf(i) == id && (cs.mask(i) & ~3u)) return fail(i, target);
      break;
    }
    case PropertyId::V3: {
      TermPtr target = with_args(special, Term::var("v1"), Term::var("v2"));
      int id = cs.find_nf(normalize(*e.procedure, target));
      for (std::size_t i = 0; i < cs.size(); ++i)
        if (cs.nf(i) == id && ((cs.mask(i) & ~1u) == 0 || (cs.mask(i) & ~2u) == 0)) return fail(i, target);
      break;
    }
    default: break;
  }
  c.status = CertStatus::HoldsBounded;
  return c;
}

Presentation with_lemmas(const TheoryEntry& e) {
  Presentation p = e.presentation;
  for (const auto& c : e.lemmas) {
    int bad = check_derivation(p, c);
    if (bad >= 0)
      throw std::logic_error(e.id + ": lemma derivation breaks at " + to_string(c[bad]) + " = " +
                             to_string(c[bad + 1]));
    p.axioms.push_back(Equation::make(c.front(), c.back()));
  }
  return p;
}

AgreementReport closure_agreement(const TheoryEntry& e, int depth, int vars, int proof_depth) {
  if (!e.procedure) throw std::invalid_argument("closure_agreement needs a decision procedure: " + e.id);
  const Procedure& proc = *e.procedure;
  const Presentation pres = with_lemmas(e);
  AgreementReport r;
  r.depth = depth;
  r.vars = vars;
  r.terms = Census::count(e, depth, vars);

  // Classes with the least depth at which they occur.
  std::vector<TermPtr> classes;
  std::vector<int> first_depth;
  std::unordered_map<TermPtr, int, TermHash, TermEq> index;
  auto intern = [&](const TermPtr& nf, int d) {
    auto [it, inserted] = index.emplace(nf, static_cast<int>(classes.size()));
    if (inserted) {
      classes.push_back(nf);
      first_depth.push_back(d);
    }
  };
  for (int i = 1; i <= vars; ++i) intern(proc.variable(canonical_var(i)), 0);
  for (const auto& op : pres.signature.ops())
    if (op.arity == 0) intern(proc.apply(op.name, {}), 0);

  EqBoundedOptions opt;
  for (int d = 1; d <= depth; ++d) {
    std::size_t below = classes.size();
    for (const auto& op : pres.signature.ops()) {
      if (op.arity == 0) continue;
      std::vector<std::size_t> idx(op.arity, 0);
      for (;;) {
        bool fresh = d == 1;
        for (auto i : idx) fresh = fresh || first_depth[i] == d - 1;
        if (fresh) {
          std::vector<TermPtr> args;
          for (auto i : idx) args.push_back(classes[i]);
          TermPtr key = Term::app(op.name, args);
          TermPtr nf = proc.apply(op.name, args);
          ++r.keys;
          if (equal(key, nf)) {
            ++r.trivial_keys;
          } else if (eq_bounded(pres, key, nf, proof_depth, opt) == EqOutcome::Equal) {
            r.proved.emplace_back(key, nf);
          } else {
            r.unproved.emplace_back(key, nf);
          }
          intern(nf, d);
        }
        int j = op.arity - 1;
        while (j >= 0 && ++idx[j] == below) idx[j--] = 0;
        if (j < 0) break;
      }
    }
  }
  r.classes = classes.size();

  for (const auto& ax : pres.axioms) {
    // Least depth at which each variable occurs on either side.
    std::map<std::string, int> least;
    std::function<void(const TermPtr&, int)> scan = [&](const TermPtr& t, int d) {
      if (t->is_var()) {
        auto [it, inserted] = least.emplace(t->name(), d);
        if (!inserted) it->second = std::min(it->second, d);
        return;
      }
      for (const auto& a : t->args()) scan(a, d + 1);
    };
    scan(ax.lhs, 0);
    scan(ax.rhs, 0);
    std::vector<std::string> names;
    std::vector<std::vector<int>> ranges;
    for (const auto& [name, d] : least) {
      names.push_back(name);
      ranges.emplace_back();
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (first_depth[c] <= depth - d) ranges.back().push_back(static_cast<int>(c));
    }
    std::vector<std::size_t> idx(names.size(), 0);
    for (;;) {
      Substitution s;
      for (std::size_t j = 0; j < names.size(); ++j) s[names[j]] = classes[ranges[j][idx[j]]];
      TermPtr l = substitute(ax.lhs, s), rr = substitute(ax.rhs, s);
      ++r.assignments;
      if (!decide_eq(proc, l, rr)) r.unsound.emplace_back(l, rr);
      std::size_t j = names.size();
      while (j > 0 && ++idx[j - 1] == ranges[j - 1].size()) idx[--j] = 0;
      if (j == 0) break;
    }
  }
  return r;
}

}  // namespace wb
