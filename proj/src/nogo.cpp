#include "wb/nogo.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wb/distlaw.hpp"
#include "wb/monads.hpp"

namespace wb {

// ---------------------------------------------------------------------------
// Permutations and the filter lemma

bool Permutation::valid() const {
  std::vector<bool> seen(map.size(), false);
  for (int x : map) {
    if (x < 1 || x > size() || seen[static_cast<std::size_t>(x - 1)]) return false;
    seen[static_cast<std::size_t>(x - 1)] = true;
  }
  return true;
}

bool Permutation::fixed_point_free() const {
  for (int i = 1; i <= size(); ++i)
    if ((*this)(i) == i) return false;
  return true;
}

std::string Permutation::str() const {
  std::string s = "[";
  for (std::size_t i = 0; i < map.size(); ++i) s += (i ? "," : "") + std::to_string(map[i]);
  return s + "]";
}

Permutation Permutation::swap() { return {{2, 1}}; }

Permutation Permutation::cycle(int m) {
  Permutation p;
  for (int i = 1; i <= m; ++i) p.map.push_back(i % m + 1);
  return p;
}

std::vector<Permutation> Permutation::derangements(int m) {
  std::vector<Permutation> out;
  Permutation p;
  p.map.resize(static_cast<std::size_t>(m));
  std::iota(p.map.begin(), p.map.end(), 1);
  do {
    if (p.fixed_point_free()) out.push_back(p);
  } while (std::next_permutation(p.map.begin(), p.map.end()));
  return out;
}

namespace {

void check_filter_args(int n, int m, const Permutation& sigma, const std::vector<int>& choices) {
  if (n < 1 || m < 1) throw std::invalid_argument("filter lemma needs n, m >= 1");
  if (sigma.size() != m || !sigma.valid()) throw std::invalid_argument("sigma " + sigma.str() + " is not a permutation of 1.." + std::to_string(m));
  if (!sigma.fixed_point_free()) throw std::invalid_argument("sigma " + sigma.str() + " has a fixed point");
  if (static_cast<int>(choices.size()) != n)
    throw std::invalid_argument("expected " + std::to_string(n) + " choices, got " + std::to_string(choices.size()));
  for (std::size_t k = 0; k < choices.size(); ++k)
    if (choices[k] < 1 || choices[k] > m)
      throw std::invalid_argument("choice i" + std::to_string(k + 1) + " = " + std::to_string(choices[k]) +
                                  " is outside 1.." + std::to_string(m));
}

}  // namespace

std::vector<std::set<FilterVar>> filter_rows(int n, int m, const Permutation& sigma, const std::vector<int>& choices) {
  check_filter_args(n, m, sigma, choices);
  std::vector<std::set<FilterVar>> rows;
  for (int k = 1; k <= n; ++k) {
    int i = choices[static_cast<std::size_t>(k - 1)];
    std::set<FilterVar> row;
    for (int j = 1; j <= n; ++j) row.insert({j, (k >= 2 && j == k) ? sigma(i) : i});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::set<FilterVar> filter_common(int n, int m, const Permutation& sigma, const std::vector<int>& choices) {
  auto rows = filter_rows(n, m, sigma, choices);
  std::set<FilterVar> common = rows.front();
  for (std::size_t k = 1; k < rows.size(); ++k) {
    std::set<FilterVar> next;
    std::set_intersection(common.begin(), common.end(), rows[k].begin(), rows[k].end(),
                          std::inserter(next, next.begin()));
    common = std::move(next);
  }
  return common;
}

// ---------------------------------------------------------------------------
// Hypotheses and certificates

const char* to_string(TheoremId t) {
  switch (t) {
    case TheoremId::Plotkin1: return "Plotkin1";
    case TheoremId::Plotkin2: return "Plotkin2";
    case TheoremId::TooManyConstants: return "TooManyConstants";
    case TheoremId::LackingAbides: return "LackingAbides";
    case TheoremId::IdemUnits: return "IdemUnits";
  }
  return "?";
}

std::optional<TheoremId> parse_theorem(std::string_view s) {
  for (TheoremId t : {TheoremId::Plotkin1, TheoremId::Plotkin2, TheoremId::TooManyConstants,
                      TheoremId::LackingAbides, TheoremId::IdemUnits})
    if (s == to_string(t)) return t;
  return std::nullopt;
}

namespace {

const char* status_word(CertStatus s) {
  switch (s) {
    case CertStatus::HoldsAnalytic: return "holds";
    case CertStatus::HoldsBounded: return "holds (bounded)";
    case CertStatus::Fails: return "fails";
    case CertStatus::Unknown: return "unknown";
  }
  return "?";
}

}  // namespace

std::string Hypothesis::describe() const {
  std::string s = role + ":" + name + " on " + theory + " " + status_word(status);
  if (bounded()) s += " [depth " + std::to_string(depth) + ", " + std::to_string(vars) + " vars]";
  if (witness) s += ": " + to_string(witness->first) + " = " + to_string(witness->second);
  if (!note.empty()) s += " (" + note + ")";
  return s;
}

bool TheoremCheck::applicable() const {
  if (hypotheses.empty()) return false;
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.holds(); });
}

const Hypothesis* TheoremCheck::first_gap() const {
  for (const auto& h : hypotheses)
    if (!h.holds()) return &h;
  return nullptr;
}

std::string TheoremCheck::describe() const {
  std::string s = std::string(to_string(theorem)) + (applicable() ? " applies" : " does not apply");
  if (!note.empty()) s += " (" + note + ")";
  s += "\n";
  for (const auto& h : hypotheses) s += "  " + h.describe() + "\n";
  return s;
}

namespace {

std::string bounds_key(const Bounds& b) {
  return std::to_string(b.depth) + "/" + std::to_string(b.vars) + "/" + std::to_string(b.max_terms);
}

PropertyCertificate cached_property(const TheoryEntry& e, PropertyId p, const Bounds& b, const TermPtr& term) {
  static std::mutex mu;
  static std::map<std::string, PropertyCertificate> cache;
  std::string key = e.id + "|" + to_string(p) + "|" + bounds_key(b) + "|" + (term ? to_string(term) : "");
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  PropertyCertificate c{p};
  try {
    c = check_property(e, p, b, term);
  } catch (const MissingDesignatedError& ex) {
    c.status = CertStatus::Fails;
    c.note = ex.what();
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, c).first->second;
}

Hypothesis from_cert(const TheoryEntry& e, std::string role, std::string name, const PropertyCertificate& c,
                     const TermPtr& term) {
  Hypothesis h;
  h.theory = e.id;
  h.role = std::move(role);
  h.name = std::move(name);
  h.property = c.property;
  h.term = term;
  h.status = c.status;
  if (c.status == CertStatus::HoldsBounded || (c.status == CertStatus::Fails && c.depth > 0)) {
    h.depth = c.depth;
    h.vars = c.vars;
  }
  h.witness = c.witness;
  h.provenance = c.provenance;
  h.note = c.note;
  return h;
}

Hypothesis property(const TheoryEntry& e, const std::string& role, PropertyId p, const Bounds& b,
                    const TermPtr& term = nullptr, std::string name = {}) {
  if (name.empty()) name = to_string(p);
  return from_cert(e, role, std::move(name), cached_property(e, p, b, term), term);
}

Hypothesis blank(const TheoryEntry& e, std::string role, std::string name) {
  Hypothesis h;
  h.theory = e.id;
  h.role = std::move(role);
  h.name = std::move(name);
  h.provenance = "machine-checked";
  return h;
}

// Exact equation through the theory's procedure, or eq_bounded without one.
Hypothesis equation(const TheoryEntry& e, std::string role, std::string name, const TermPtr& l, const TermPtr& r) {
  Hypothesis h = blank(e, std::move(role), std::move(name));
  std::optional<bool> eq = theory_equal(e, l, r);
  if (!eq) {
    h.note = "no decision procedure and no bounded derivation found";
  } else if (*eq) {
    h.status = CertStatus::HoldsAnalytic;
    if (!e.procedure) h.provenance = "eq_bounded derivation";
  } else {
    h.status = CertStatus::Fails;
    h.witness = std::make_pair(l, r);
  }
  return h;
}

TermPtr y(int i) { return Term::var("y" + std::to_string(i)); }

constexpr const char* kWideTerm = "term with two or more variables";
constexpr const char* kTwoConstants = "two distinct constants";

Hypothesis wide_term(const TheoryEntry& e) {
  Hypothesis h = blank(e, "S", kWideTerm);
  h.status = CertStatus::Fails;
  h.note = "every operation has arity below 2";
  for (const auto& op : e.presentation.signature.ops()) {
    if (op.arity < 2) continue;
    std::vector<TermPtr> args;
    for (int i = 1; i <= op.arity; ++i) args.push_back(y(i));
    TermPtr t = Term::app(op.name, args);
    TermPtr nf = e.procedure ? normalize(*e.procedure, t) : t;
    if (vars(nf).size() >= 2) {
      h.status = CertStatus::HoldsAnalytic;
      h.note = to_string(t);
      return h;
    }
    h.note = "no operation keeps two variables";
  }
  return h;
}

Hypothesis two_constants(const TheoryEntry& e) {
  Hypothesis h = blank(e, "T", kTwoConstants);
  std::vector<std::string> cs = e.presentation.signature.constants();
  h.status = CertStatus::Fails;
  h.note = cs.size() < 2 ? std::to_string(cs.size()) + " constant(s) in the signature" : "all constants are equal";
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j) {
      std::optional<bool> eq = theory_equal(e, Term::app(cs[i]), Term::app(cs[j]));
      if (!eq) {
        h.status = CertStatus::Unknown;
        h.note = "cannot decide " + cs[i] + " = " + cs[j];
        continue;
      }
      if (!*eq) {
        h.status = CertStatus::HoldsAnalytic;
        h.note = cs[i] + " != " + cs[j];
        return h;
      }
    }
  return h;
}

TermPtr rename_vars(const TermPtr& t, int arity, const std::function<int(int)>& f, const char* prefix = "y") {
  Substitution s;
  for (int i = 1; i <= arity; ++i) s["y" + std::to_string(i)] = Term::var(prefix + std::to_string(f(i)));
  return substitute(t, s);
}

std::shared_ptr<const Census> census_for(const TheoryEntry& e, const Bounds& b, const std::set<std::string>& excluded) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const Census>> cache;
  auto [depth, vars] = Census::fit(e, b, excluded);
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

// Scans every enumerated term equal to `target` (over v1..vk) and fails on
// the first one whose variable mask `bad` rejects.
Hypothesis scan_equal_terms(const TheoryEntry& e, std::string role, std::string name, const Bounds& b,
                            const TermPtr& target, int needed_vars, const std::function<bool(std::uint32_t)>& bad) {
  Hypothesis h = blank(e, std::move(role), std::move(name));
  if (!e.procedure) {
    h.note = "no decision procedure; bounded enumeration unavailable";
    return h;
  }
  auto [depth, nvars] = Census::fit(e, b, e.universal_excluded_ops);
  if (depth == 0 || nvars < needed_vars) {
    h.note = "enumeration bound too large for " + std::to_string(needed_vars) + " variables";
    return h;
  }
  auto census = census_for(e, b, e.universal_excluded_ops);
  const Census& cs = *census;
  h.depth = cs.depth();
  h.vars = cs.vars();
  if (!e.universal_excluded_ops.empty()) {
    h.note = "universal set excludes";
    for (const auto& op : e.universal_excluded_ops) h.note += " " + op;
  }
  int id = cs.find_nf(normalize(*e.procedure, target));
  for (std::size_t i = 0; id >= 0 && i < cs.size(); ++i)
    if (cs.nf(i) == id && bad(cs.mask(i))) {
      h.status = CertStatus::Fails;
      h.witness = std::make_pair(cs.term(i), target);
      return h;
    }
  h.status = CertStatus::HoldsBounded;
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Theorem checkers

TheoremCheck check_plotkin_binary(const TheoryEntry& P, const TheoryEntry& V, const TermPtr& p, const TermPtr& v,
                                  const Bounds& b) {
  TheoremCheck c;
  c.theorem = TheoremId::Plotkin1;
  c.hypotheses.push_back(property(P, "P", PropertyId::P1, b, p));
  c.hypotheses.push_back(property(P, "P", PropertyId::P2, b, p));
  c.hypotheses.push_back(property(P, "P", PropertyId::P3, b, p));
  c.hypotheses.push_back(property(V, "V", PropertyId::V1, b, v));
  c.hypotheses.push_back(property(V, "V", PropertyId::V2, b, v));
  c.hypotheses.push_back(property(V, "V", PropertyId::V3, b, v));
  c.note = "no law " + V.id + " " + P.id + " => " + P.id + " " + V.id;
  return c;
}

TheoremCheck check_plotkin_general(const TheoryEntry& P, const TheoryEntry& V, const TermPtr& p, int m,
                                   const TermPtr& v, int n, const Permutation& sigma, const Bounds& b) {
  if (sigma.size() != m || !sigma.valid())
    throw std::invalid_argument("sigma " + sigma.str() + " is not a permutation of 1.." + std::to_string(m));
  if (!sigma.fixed_point_free()) throw std::invalid_argument("sigma " + sigma.str() + " has a fixed point");
  if (!p || !v) throw std::invalid_argument("Plotkin2 needs explicit p and v");
  TheoremCheck c;
  c.theorem = TheoremId::Plotkin2;
  auto all_one = [](int) { return 1; };
  auto id = [](int i) { return i; };
  c.hypotheses.push_back(
      equation(P, "P", "P1'", p, rename_vars(p, m, [&](int i) { return sigma(i); })));
  c.hypotheses.push_back(equation(P, "P", "P2'", rename_vars(p, m, all_one), y(1)));
  std::uint32_t allowed = (1u << m) - 1;
  c.hypotheses.push_back(scan_equal_terms(P, "P", "P3'", b, rename_vars(p, m, id, "v"), m + 1,
                                          [&](std::uint32_t mask) { return (mask & ~allowed) != 0; }));
  c.hypotheses.push_back(equation(V, "V", "V1'", rename_vars(v, n, all_one), y(1)));
  c.hypotheses.push_back(property(V, "V", PropertyId::V2, b, nullptr, "V2'"));
  c.hypotheses.push_back(scan_equal_terms(V, "V", "V3'", b, rename_vars(v, n, id, "v"), n,
                                          [](std::uint32_t mask) { return std::popcount(mask) <= 1; }));
  c.note = "m = " + std::to_string(m) + ", n = " + std::to_string(n) + ", sigma = " + sigma.str();
  return c;
}

TheoremCheck check_too_many_constants(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b) {
  TheoremCheck c;
  c.theorem = TheoremId::TooManyConstants;
  c.hypotheses.push_back(property(S, "S", PropertyId::S3, b));
  c.hypotheses.push_back(wide_term(S));
  c.hypotheses.push_back(property(T, "T", PropertyId::T1, b));
  c.hypotheses.push_back(two_constants(T));
  return c;
}

TheoremCheck check_lacking_abides(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b) {
  TheoremCheck c;
  c.theorem = TheoremId::LackingAbides;
  for (PropertyId p : {PropertyId::S1, PropertyId::S2, PropertyId::S3, PropertyId::S4a})
    c.hypotheses.push_back(property(S, "S", p, b));
  for (PropertyId p : {PropertyId::T1, PropertyId::T2, PropertyId::T3, PropertyId::T4a, PropertyId::T4b})
    c.hypotheses.push_back(property(T, "T", p, b));
  return c;
}

TheoremCheck check_idem_units(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b) {
  TheoremCheck c;
  c.theorem = TheoremId::IdemUnits;
  for (PropertyId p : {PropertyId::S1, PropertyId::S2, PropertyId::S3, PropertyId::S4a, PropertyId::S4b})
    c.hypotheses.push_back(property(S, "S", p, b));
  for (PropertyId p : {PropertyId::T1, PropertyId::T2, PropertyId::T3, PropertyId::T4a})
    c.hypotheses.push_back(property(T, "T", p, b));
  return c;
}

namespace {

bool constant_plus_binary(const TheoryEntry& e) {
  const auto& ops = e.presentation.signature.ops();
  if (ops.size() != 2) return false;
  int a = std::min(ops[0].arity, ops[1].arity), z = std::max(ops[0].arity, ops[1].arity);
  return a == 0 && z == 2;
}

}  // namespace

bool uniqueness_applies(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b) {
  if (!constant_plus_binary(S) || !constant_plus_binary(T)) return false;
  for (PropertyId p : {PropertyId::S4a, PropertyId::S1, PropertyId::S2})
    if (!property(S, "S", p, b).holds()) return false;
  for (PropertyId p : {PropertyId::T4a, PropertyId::T1, PropertyId::T2})
    if (!property(T, "T", p, b).holds()) return false;
  return true;
}

bool replay(const Hypothesis& h, const Bounds& b) {
  const TheoryEntry& e = get_theory(h.theory);
  if (h.property) {
    Bounds rb = b;
    if (h.bounded()) {
      rb.depth = h.depth;
      rb.vars = h.vars;
    }
    PropertyCertificate c{*h.property};
    try {
      c = check_property(e, *h.property, rb, h.term);
    } catch (const MissingDesignatedError&) {
      return false;
    }
    return c.holds() == h.holds() && (!c.holds() || c.status == h.status);
  }
  if (h.name == kWideTerm) return wide_term(e).holds() == h.holds();
  if (h.name == kTwoConstants) return two_constants(e).holds() == h.holds();
  throw std::invalid_argument("hypothesis " + h.name + " has no replay");
}

// ---------------------------------------------------------------------------
// Positive registry and verdicts

const std::vector<PositiveLaw>& positive_registry() {
  static const std::vector<PositiveLaw> reg = [] {
    std::vector<PositiveLaw> r;
    const std::string mm = "ManesMulry2007 Thm 4.3.4";
    struct Row {
      const char* id;
      const char* monad;  // choice-law source monad, or null
    };
    const Row rows[] = {{"boom:U---", "bintree"}, {"boom:U-C-", nullptr}, {"boom:UA--", "list"},
                        {"boom:UAC-", "multiset"}, {"boom:----", nullptr}, {"boom:--C-", nullptr},
                        {"boom:-A--", nullptr},     {"boom:-AC-", nullptr}};
    const std::pair<const char*, const char*> cols[] = {
        {"boom:UAC-", "multiset"}, {"boom:UACI", "powerset"}, {"boom:-AC-", nullptr}, {"boom:-ACI", nullptr}};
    for (const auto& row : rows) {
      for (const auto& [col, target] : cols) {
        std::string law = row.monad && target ? std::string("choice:") + row.monad + ":" + target : "";
        r.push_back({row.id, col, law, mm});
      }
      bool tree = std::string(row.id) == "boom:----";
      r.push_back({row.id, "boom:----", "", tree ? "ManesMulry2008 Ex 3.9" : "ManesMulry2008 Ex 4.9"});
    }
    r.push_back({"boom:-A--", "boom:-A--", "mm-nel-1", "ManesMulry2007 Ex 5.1.10; ManesMulry2008 Ex 4.10"});
    return r;
  }();
  return reg;
}

const PositiveLaw* find_positive(std::string_view s, std::string_view t) {
  const TheoryEntry* se = find_theory(s);
  const TheoryEntry* te = find_theory(t);
  if (!se || !te) return nullptr;
  for (const auto& p : positive_registry())
    if (p.s == se->id && p.t == te->id) return &p;
  return nullptr;
}

namespace {

// Literature confirming negative cells alongside the theorems.
const std::vector<std::pair<std::pair<std::string, std::string>, std::string>>& negative_citations() {
  static const std::vector<std::pair<std::pair<std::string, std::string>, std::string>> c = {
      {{"boom:UACI", "boom:UACI"}, "KlinSalamanca2018 Thm 3.2"},
      {{"convex", "boom:UACI"}, "VaraccaWinskel2006"},
  };
  return c;
}

const BeckReport& cached_beck(const std::string& law) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<BeckReport>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[law];
  if (!slot) {
    FinCarrier x = FinCarrier::of_size(2);
    slot = std::make_unique<BeckReport>(check_beck(get_law(law), x, x, 3));
  }
  return *slot;
}

}  // namespace

const char* to_string(NoGoVerdict::Status s) {
  switch (s) {
    case NoGoVerdict::Status::NoDistLaw: return "NoDistLaw";
    case NoGoVerdict::Status::Exists: return "Exists";
    case NoGoVerdict::Status::Unknown: return "Unknown";
  }
  return "?";
}

std::vector<TheoremId> NoGoVerdict::theorem_ids() const {
  std::vector<TheoremId> ids;
  for (const auto& c : applicable) ids.push_back(c.theorem);
  return ids;
}

std::string NoGoVerdict::headline() const {
  switch (status) {
    case Status::NoDistLaw: {
      std::string s = "NO (";
      for (std::size_t i = 0; i < applicable.size(); ++i) s += (i ? ", " : "") + std::string(to_string(applicable[i].theorem));
      return s + ")";
    }
    case Status::Exists: return "YES (" + (law.empty() ? citations.front() + ", citation only" : law) + ")";
    case Status::Unknown: return "UNKNOWN";
  }
  return "?";
}

std::string NoGoVerdict::text() const {
  std::ostringstream os;
  os << "law " << s << " . " << t << " => " << t << " . " << s << ": " << headline() << "\n";
  for (const auto& c : citations) os << "citation: " << c << "\n";
  if (beck_ok) os << "beck: " << beck_summary << "\n";
  for (const auto& c : applicable) os << c.describe();
  for (const auto& c : rejected) {
    os << to_string(c.theorem) << " does not apply";
    if (const Hypothesis* g = c.first_gap()) os << ": " << g->describe();
    os << "\n";
  }
  return os.str();
}

namespace {

nlohmann::ordered_json hypothesis_json(const Hypothesis& h) {
  nlohmann::ordered_json j;
  j["theory"] = h.theory;
  j["role"] = h.role;
  j["name"] = h.name;
  j["status"] = status_word(h.status);
  if (h.bounded()) j["bounds"] = {{"depth", h.depth}, {"vars", h.vars}};
  if (h.witness) j["witness"] = {to_string(h.witness->first), to_string(h.witness->second)};
  j["provenance"] = h.provenance;
  if (!h.note.empty()) j["note"] = h.note;
  return j;
}

nlohmann::ordered_json theorem_json(const TheoremCheck& c) {
  nlohmann::ordered_json j;
  j["theorem"] = to_string(c.theorem);
  j["applicable"] = c.applicable();
  j["hypotheses"] = nlohmann::ordered_json::array();
  for (const auto& h : c.hypotheses) j["hypotheses"].push_back(hypothesis_json(h));
  return j;
}

}  // namespace

std::string NoGoVerdict::json() const {
  nlohmann::ordered_json j;
  j["s"] = s;
  j["t"] = t;
  j["status"] = to_string(status);
  j["theorems"] = nlohmann::ordered_json::array();
  for (const auto& c : applicable) j["theorems"].push_back(to_string(c.theorem));
  j["citations"] = citations;
  if (!law.empty()) j["law"] = law;
  j["citation_only"] = citation_only;
  if (beck_ok) j["beck"] = {{"ok", *beck_ok}, {"summary", beck_summary}};
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : applicable) j["checks"].push_back(theorem_json(c));
  for (const auto& c : rejected) j["checks"].push_back(theorem_json(c));
  return j.dump(2);
}

NoGoVerdict verdict(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b) {
  NoGoVerdict v;
  v.s = S.id;
  v.t = T.id;
  std::vector<TheoremCheck> checks = {check_too_many_constants(S, T, b), check_lacking_abides(S, T, b),
                                      check_idem_units(S, T, b), check_plotkin_binary(T, S, nullptr, nullptr, b)};
  for (auto& c : checks) (c.applicable() ? v.applicable : v.rejected).push_back(std::move(c));
  if (!v.applicable.empty()) {
    v.status = NoGoVerdict::Status::NoDistLaw;
    for (const auto& [pair, cite] : negative_citations())
      if (pair.first == S.id && pair.second == T.id) v.citations.push_back(cite);
    return v;
  }
  const PositiveLaw* pos = find_positive(S.id, T.id);
  if (!pos) return v;
  v.citations.push_back(pos->citation);
  v.status = NoGoVerdict::Status::Exists;
  if (pos->law.empty()) {
    v.citation_only = true;
    return v;
  }
  v.law = pos->law;
  const BeckReport& rep = cached_beck(pos->law);
  v.beck_ok = rep.ok();
  std::size_t total = 0;
  for (const auto& [axiom, n] : rep.checked) total += n;
  v.beck_summary = pos->law + " at |X| = |Y| = 2, bound 3: " + std::to_string(total) + " instances, " +
                   std::to_string(rep.violations.size()) + " violations";
  if (!rep.ok()) v.status = NoGoVerdict::Status::Unknown;
  return v;
}

// ---------------------------------------------------------------------------
// The Plotkin counterexample on a bounded universe

namespace {

Value atom(const char* s) { return Value::atom(s); }

Value half(const Value& a, const Value& b) {
  return Value::dist({a, b}, {Rational(1, 2), Rational(1, 2)});
}

ValueFn relabel(std::map<std::string, std::string> m) {
  return [m](const Value& v) { return Value::atom(m.at(v.label)); };
}

}  // namespace

PlotkinRefutation plotkin_refute_bounded(bool include_empty) {
  MonadPtr D = distribution_monad(2), P = powerset_monad();
  MonadStack dp{D, P}, pd{P, D};
  PlotkinRefutation r;
  std::vector<std::string> xs = {"a", "b", "c", "d"};
  r.xi = half(Value::set({atom("a"), atom("b")}), Value::set({atom("c"), atom("d")}));
  for (const auto& x : xs) r.distributions.push_back(D->unit(Value::atom(x)));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      r.distributions.push_back(half(Value::atom(xs[i]), Value::atom(xs[j])));

  const std::pair<const char*, std::map<std::string, std::string>> fs[] = {
      {"f1", {{"a", "a"}, {"b", "b"}, {"c", "a"}, {"d", "b"}}},
      {"f2", {{"a", "a"}, {"b", "b"}, {"c", "b"}, {"d", "a"}}},
      {"f3", {{"a", "a"}, {"b", "a"}, {"c", "c"}, {"d", "c"}}},
  };
  std::vector<ValueFn> maps;
  for (const auto& [name, m] : fs) {
    PlotkinConstraint c;
    c.name = name;
    maps.push_back(relabel(m));
    c.image_of_xi = map_at(dp, 2, maps.back(), r.xi);
    const Value& img = c.image_of_xi;
    bool point = img.items.size() == 1;
    bool singletons = std::all_of(img.items.begin(), img.items.end(),
                                  [](const Value& s) { return s.items.size() == 1; });
    if (point) {
      // lambda . eta_D P = P eta_D
      c.unit_axiom = "lambda . eta_D P = P eta_D";
      c.required = P->map([&](const Value& x) { return D->unit(x); }, img.items[0]);
    } else if (singletons) {
      // lambda . D eta_P = eta_P D
      c.unit_axiom = "lambda . D eta_P = eta_P D";
      c.required = P->unit(D->map([](const Value& s) { return s.items[0]; }, img));
    } else {
      throw std::logic_error("no unit axiom determines lambda at " + to_string(img));
    }
    r.constraints.push_back(std::move(c));
  }

  std::size_t n = r.distributions.size();
  for (std::uint32_t mask = include_empty ? 0 : 1; mask < (1u << n); ++mask) {
    std::vector<Value> members;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) members.push_back(r.distributions[i]);
    PlotkinCandidate cand;
    cand.value = Value::set(std::move(members));
    for (std::size_t k = 0; k < maps.size(); ++k) {
      cand.images.push_back(map_at(pd, 2, maps[k], cand.value));
      if (cand.images.back() != r.constraints[k].required) cand.failed.push_back(r.constraints[k].name);
    }
    if (cand.failed.empty()) ++r.survivors;
    r.candidates.push_back(std::move(cand));
  }
  return r;
}

std::string PlotkinRefutation::text(bool all_candidates) const {
  std::ostringstream os;
  os << "Xi = " << to_string(xi) << " in DP({a,b,c,d})\n";
  os << "universe: P(D2(X)), " << distributions.size() << " distributions, " << candidates.size() << " candidates\n";
  for (const auto& c : constraints)
    os << c.name << ": DP(" << c.name << ")(Xi) = " << to_string(c.image_of_xi) << ", " << c.unit_axiom
       << " forces lambda = " << to_string(c.required) << "\n";
  std::map<std::string, std::size_t> by;
  for (const auto& c : candidates)
    for (const auto& f : c.failed) ++by[f];
  for (const auto& [f, k] : by) os << "violating " << f << ": " << k << "\n";
  if (all_candidates)
    for (const auto& c : candidates) {
      os << to_string(c.value) << ":";
      if (c.failed.empty()) os << " survives";
      for (const auto& f : c.failed) os << " " << f;
      os << "\n";
    }
  os << "survivors: " << survivors << "\n";
  return os.str();
}

std::string PlotkinRefutation::json() const {
  nlohmann::ordered_json j;
  j["xi"] = to_string(xi);
  j["distributions"] = nlohmann::ordered_json::array();
  for (const auto& d : distributions) j["distributions"].push_back(to_string(d));
  j["constraints"] = nlohmann::ordered_json::array();
  for (const auto& c : constraints)
    j["constraints"].push_back({{"name", c.name},
                                {"image_of_xi", to_string(c.image_of_xi)},
                                {"unit_axiom", c.unit_axiom},
                                {"required", to_string(c.required)}});
  j["candidates"] = nlohmann::ordered_json::array();
  for (const auto& c : candidates) j["candidates"].push_back({{"value", to_string(c.value)}, {"failed", c.failed}});
  j["survivors"] = survivors;
  return j.dump(2);
}

}  // namespace wb
