#include "wb/distlaw.hpp"

#include <json.hpp>

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wb {

namespace {

[[noreturn]] void bad_input(const std::string& law, const Value& v) {
  throw std::invalid_argument(law + ": input " + to_string(v) + " is not in the law's domain");
}

// ---------------------------------------------------------------- choice

// One position of an S-value: the T-value sitting there.
std::vector<Value> positions(const Monad& s, const Value& v) {
  std::vector<Value> out;
  s.for_each_slot(v, [&](const Value& x, int mult) {
    for (int i = 0; i < mult; ++i) out.push_back(x);
  });
  return out;
}

// The S-value of the same shape as v with its positions replaced, in order.
Value refill(const Monad& s, const Value& v, const std::vector<Value>& chosen) {
  if (v.kind == Kind::Bag) return Value::bag(chosen, std::vector<Rational>(chosen.size(), Rational(1)));
  std::size_t i = 0;
  return s.map([&](const Value&) { return chosen.at(i++); }, v);
}

// The elements of a T-value with their coefficients.
std::vector<std::pair<Value, Rational>> weighted_elements(const Value& t) {
  std::vector<std::pair<Value, Rational>> out;
  for (std::size_t i = 0; i < t.items.size(); ++i)
    out.emplace_back(t.items[i], t.kind == Kind::Set ? Rational(1) : t.weights[i]);
  return out;
}

Value choice_apply(const Monad& s, const Monad& t, const std::string& law, const Value& v) {
  std::vector<Value> pos = positions(s, v);
  std::vector<std::vector<std::pair<Value, Rational>>> opts;
  for (const auto& p : pos) {
    if (!t.well_formed(p)) bad_input(law, v);
    opts.push_back(weighted_elements(p));
  }
  std::vector<Value> results;
  std::vector<Rational> weights;
  std::vector<Value> chosen;
  std::function<void(std::size_t, Rational)> go = [&](std::size_t i, Rational w) {
    if (i == pos.size()) {
      results.push_back(refill(s, v, chosen));
      weights.push_back(w);
      return;
    }
    for (const auto& [x, c] : opts[i]) {
      chosen.push_back(x);
      go(i + 1, w * c);
      chosen.pop_back();
    }
  };
  go(0, Rational(1));
  if (t.name() == "powerset") return Value::set(std::move(results));
  return Value::bag(std::move(results), std::move(weights));
}

// ---------------------------------------------------------------- nonempty lists

void require_nested_nonempty(const std::string& law, const Value& v) {
  if (v.kind != Kind::Seq || v.items.empty()) bad_input(law, v);
  for (const auto& l : v.items)
    if (l.kind != Kind::Seq || l.items.empty()) bad_input(law, v);
}

// Reads the list of lists as a token stream and exchanges "," with "],[".
Value nel_swap(const Value& v) {
  std::vector<Value> elems;
  std::vector<bool> same_inner;  // separator before elems[i], i >= 1
  for (std::size_t i = 0; i < v.items.size(); ++i)
    for (std::size_t j = 0; j < v.items[i].items.size(); ++j) {
      if (!elems.empty()) same_inner.push_back(j > 0);
      elems.push_back(v.items[i].items[j]);
    }
  std::vector<Value> out;
  std::vector<Value> cur{elems[0]};
  for (std::size_t i = 1; i < elems.size(); ++i) {
    if (same_inner[i - 1]) {
      out.push_back(Value::seq(std::move(cur)));
      cur.clear();
    }
    cur.push_back(elems[i]);
  }
  out.push_back(Value::seq(std::move(cur)));
  return Value::seq(std::move(out));
}

Value nel_pick(const Value& v, bool first) {
  if (v.items.size() == 1) {
    std::vector<Value> out;
    for (const auto& x : v.items[0].items) out.push_back(Value::seq({x}));
    return Value::seq(std::move(out));
  }
  std::vector<Value> picked;
  for (const auto& l : v.items) picked.push_back(first ? l.items.front() : l.items.back());
  return Value::seq({Value::seq(std::move(picked))});
}

// ---------------------------------------------------------------- registry

std::vector<std::string> split_colon(std::string_view id) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : id) {
    if (c == '{') ++depth;
    if (c == '}') --depth;
    if (c == ':' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool choice_supported(const MonadPtr& s, const MonadPtr& t) {
  static const std::set<std::string> ss = {"bintree", "list", "multiset"}, ts = {"multiset", "powerset"};
  return ss.count(s->name()) && ts.count(t->name());
}

std::optional<DistLaw> make_law(std::string_view id) {
  if (id == "ring") return law_times_over_plus();
  if (id == "mset-cartesian") return law_multiset_cartesian();
  if (id == "mm-nel-1") return law_mm_nonempty_list(1);
  if (id == "mm-nel-2") return law_mm_nonempty_list(2);
  if (id == "mm-nel-3") return law_mm_nonempty_list(3);
  if (id == "faulty-list-exception") return law_faulty_list_exception();
  if (id == "lift-swap") return law_lift_swap();
  auto parts = split_colon(id);
  if (parts.size() == 3 && parts[0] == "choice") {
    MonadPtr s = find_monad(parts[1]), t = find_monad(parts[2]);
    if (s && t && choice_supported(s, t)) return law_choice(s, t);
  }
  if (parts.size() >= 2 && parts[0] == "exception-over") {
    std::string rest(id.substr(parts[0].size() + 1));
    if (MonadPtr s = find_monad(rest)) return law_exception_over(s);
  }
  return std::nullopt;
}

std::string function_text(const FinCarrier& x, const FinCarrier& y, const std::vector<int>& img) {
  std::string s;
  for (std::size_t i = 0; i < img.size(); ++i) s += (i ? "," : "") + x.labels[i] + "->" + y.labels[img[i]];
  return s;
}

// Calls f with every function from n elements to m elements.
void for_each_function(int n, int m, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> img(n, 0);
  if (m == 0 && n > 0) return;
  for (;;) {
    f(img);
    int i = 0;
    while (i < n && ++img[i] == m) img[i++] = 0;
    if (i == n) return;
  }
}

ValueFn relabel(const FinCarrier& x, const FinCarrier& y, const std::vector<int>& img) {
  return [&x, &y, img](const Value& a) {
    auto it = std::find(x.labels.begin(), x.labels.end(), a.label);
    if (a.kind != Kind::Atom || it == x.labels.end()) return a;
    return Value::atom(y.labels[img[it - x.labels.begin()]]);
  };
}

void collect_layer(const MonadStack& stack, std::size_t layer, const Value& v, std::set<Value>& out) {
  if (layer == 0) {
    out.insert(v);
    return;
  }
  MonadStack rest(stack.begin() + 1, stack.end());
  stack[0]->for_each_slot(v, [&](const Value& x, int) { collect_layer(rest, layer - 1, x, out); });
}

}  // namespace

// ---------------------------------------------------------------- laws

DistLaw law_times_over_plus() {
  DistLaw l;
  l.id = "ring";
  l.s = list_monad();
  l.t = abgroup_monad();
  l.provenance = "Beck1969 (ring monad)";
  MonadPtr s = l.s, t = l.t;
  l.apply = [s, t](const Value& v) {
    if (v.kind != Kind::Seq) bad_input("ring", v);
    return choice_apply(*s, *t, "ring", v);
  };
  return l;
}

DistLaw law_multiset_cartesian() {
  DistLaw l;
  l.id = "mset-cartesian";
  l.s = multiset_monad();
  l.t = multiset_monad();
  l.provenance = "multiset over multiset, Cartesian product";
  l.apply = [](const Value& v) {
    if (v.kind != Kind::Bag) bad_input("mset-cartesian", v);
    // Running product: multisets gathered so far, with multiplicities.
    std::vector<Value> acc{Value::bag({}, {})};
    std::vector<Rational> accw{Rational(1)};
    for (std::size_t i = 0; i < v.items.size(); ++i) {
      const Value& inner = v.items[i];
      if (inner.kind != Kind::Bag) bad_input("mset-cartesian", v);
      for (int copy = 0; copy < static_cast<int>(v.weights[i]); ++copy) {
        std::vector<Value> next;
        std::vector<Rational> nextw;
        for (std::size_t a = 0; a < acc.size(); ++a)
          for (std::size_t j = 0; j < inner.items.size(); ++j) {
            std::vector<Value> items = acc[a].items;
            std::vector<Rational> ws = acc[a].weights;
            items.push_back(inner.items[j]);
            ws.push_back(Rational(1));
            next.push_back(Value::bag(std::move(items), std::move(ws)));
            nextw.push_back(accw[a] * inner.weights[j]);
          }
        acc = std::move(next);
        accw = std::move(nextw);
      }
    }
    return Value::bag(std::move(acc), std::move(accw));
  };
  return l;
}

DistLaw law_choice(const MonadPtr& s, const MonadPtr& t) {
  if (!choice_supported(s, t))
    throw std::invalid_argument("choice law needs S in {bintree, list, multiset} and T in {multiset, powerset}, got " +
                                s->name() + ", " + t->name());
  DistLaw l;
  l.id = "choice:" + s->name() + ":" + t->name();
  l.s = s;
  l.t = t;
  l.provenance = "ManesMulry2007 Thm 4.3.4";
  std::string id = l.id;
  l.apply = [s, t, id](const Value& v) {
    if (!s->well_formed(v)) bad_input(id, v);
    return choice_apply(*s, *t, id, v);
  };
  return l;
}

DistLaw law_mm_nonempty_list(int variant) {
  if (variant < 1 || variant > 3) throw std::invalid_argument("nonempty-list law variant must be 1, 2 or 3");
  DistLaw l;
  l.id = "mm-nel-" + std::to_string(variant);
  l.s = nonempty_list_monad();
  l.t = nonempty_list_monad();
  l.provenance = variant == 1 ? "ManesMulry2007" : "ManesMulry2008";
  std::string id = l.id;
  l.apply = [variant, id](const Value& v) {
    require_nested_nonempty(id, v);
    return variant == 1 ? nel_swap(v) : nel_pick(v, variant == 2);
  };
  return l;
}

DistLaw law_exception_over(const MonadPtr& s, std::vector<std::string> labels) {
  DistLaw l;
  l.s = exception_monad(std::move(labels));
  l.t = s;
  l.id = "exception-over:" + s->name();
  l.provenance = "exception over any monad";
  MonadPtr t = s;
  std::string id = l.id;
  l.apply = [t, id](const Value& v) {
    if (v.kind == Kind::Left) return t->map([](const Value& x) { return Value::left(x); }, v.items[0]);
    if (v.kind == Kind::Right) return t->unit(v);
    bad_input(id, v);
  };
  return l;
}

DistLaw law_faulty_list_exception() {
  DistLaw l;
  l.id = "faulty-list-exception";
  l.s = list_monad();
  l.t = exception_monad({"a", "b"});
  l.provenance = "claimed law for E = {a,b}; fails mult1";
  l.apply = [](const Value& v) {
    if (v.kind != Kind::Seq) bad_input("faulty-list-exception", v);
    if (v.items.size() == 1 && v.items[0].kind == Kind::Right) return v.items[0];
    std::vector<Value> xs;
    for (const auto& e : v.items) {
      if (e.kind == Kind::Right) return Value::right("a");
      if (e.kind != Kind::Left) bad_input("faulty-list-exception", v);
      xs.push_back(e.items[0]);
    }
    return Value::left(Value::seq(std::move(xs)));
  };
  return l;
}

DistLaw law_lift_swap() {
  DistLaw l;
  l.id = "lift-swap";
  l.s = lift_monad();
  l.t = lift_monad();
  l.provenance = "exchange of the two bottoms";
  l.apply = [](const Value& v) {
    if (v.kind == Kind::Bottom) return Value::left(Value::bottom());
    if (v.kind == Kind::Left && v.items[0].kind == Kind::Bottom) return Value::bottom();
    if (v.kind == Kind::Left && v.items[0].kind == Kind::Left) return v;
    bad_input("lift-swap", v);
  };
  return l;
}

std::vector<std::string> law_ids() {
  return {"ring",
          "mset-cartesian",
          "choice:bintree:multiset",
          "choice:bintree:powerset",
          "choice:list:multiset",
          "choice:list:powerset",
          "choice:multiset:multiset",
          "choice:multiset:powerset",
          "mm-nel-1",
          "mm-nel-2",
          "mm-nel-3",
          "exception-over:list",
          "faulty-list-exception",
          "lift-swap"};
}

const DistLaw* find_law(std::string_view id) {
  static std::mutex mu;
  static std::map<std::string, DistLaw, std::less<>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(id);
  if (it != cache.end()) return &it->second;
  std::optional<DistLaw> l = make_law(id);
  if (!l) return nullptr;
  return &cache.emplace(std::string(id), std::move(*l)).first->second;
}

const DistLaw& get_law(std::string_view id) {
  if (const DistLaw* l = find_law(id)) return *l;
  std::string msg = "unknown law '" + std::string(id) + "'; known:";
  for (const auto& k : law_ids()) msg += " " + k;
  msg += " (also choice:<S>:<T>, exception-over:<S>)";
  throw std::invalid_argument(msg);
}

Value apply_law(const DistLaw& l, std::string_view input) { return l.apply(parse_value(MonadStack{l.s, l.t}, input)); }

// ---------------------------------------------------------------- Beck

std::vector<BeckViolation> BeckReport::of(std::string_view axiom) const {
  std::vector<BeckViolation> out;
  for (const auto& v : violations)
    if (v.axiom == axiom) out.push_back(v);
  return out;
}

std::string BeckReport::text() const {
  std::ostringstream os;
  os << "law " << law << " |X|=" << carrier << " |Y|=" << codomain << " bound " << bound;
  if (extra) os << "+" << extra;
  os << "\n";
  for (const auto& [axiom, n] : checked) os << "checked " << axiom << " " << n << "\n";
  for (const auto& v : violations) {
    os << "violation " << v.axiom << " input " << to_string(v.input) << " lhs " << to_string(v.lhs) << " rhs "
       << to_string(v.rhs);
    if (!v.f.empty()) os << " f " << v.f;
    os << "\n";
  }
  os << (ok() ? "OK" : "FAIL " + std::to_string(violations.size()) + " violations") << "\n";
  return os.str();
}

std::string BeckReport::json() const {
  nlohmann::ordered_json j;
  j["law"] = law;
  j["carrier"] = carrier;
  j["codomain"] = codomain;
  j["bound"] = bound;
  j["extra"] = extra;
  j["checked"] = nlohmann::ordered_json::object();
  for (const auto& [axiom, n] : checked) j["checked"][axiom] = n;
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : violations) {
    nlohmann::ordered_json e;
    e["axiom"] = v.axiom;
    if (!v.f.empty()) e["f"] = v.f;
    e["input"] = to_string(v.input);
    e["lhs"] = to_string(v.lhs);
    e["rhs"] = to_string(v.rhs);
    j["violations"].push_back(e);
  }
  j["ok"] = ok();
  return j.dump(2);
}

BeckReport check_beck(const DistLaw& l, const FinCarrier& x, const FinCarrier& y, int bound, int extra) {
  BeckReport rep;
  rep.law = l.id;
  rep.carrier = static_cast<int>(x.labels.size());
  rep.codomain = static_cast<int>(y.labels.size());
  rep.bound = bound;
  rep.extra = extra;
  const Monad& s = *l.s;
  const Monad& t = *l.t;
  MonadStack st{l.s, l.t}, ts{l.t, l.s};
  auto lam = [&](const Value& v) { return l.apply(v); };
  auto check = [&](const char* axiom, const Value& in, const Value& lhs, const Value& rhs, std::string f = {}) {
    if (lhs != rhs) rep.violations.push_back({axiom, std::move(f), in, lhs, rhs});
  };

  std::vector<Value> inputs = enumerate(st, x, bound, extra);
  std::size_t n = 0;
  for_each_function(rep.carrier, rep.codomain, [&](const std::vector<int>& img) {
    ValueFn f = relabel(x, y, img);
    std::string ftext = function_text(x, y, img);
    for (const auto& v : inputs) {
      ++n;
      check("naturality", v, lam(map_at(st, 2, f, v)), map_at(ts, 2, f, lam(v)), ftext);
    }
  });
  rep.checked.emplace_back("naturality", n);

  n = 0;
  for (const auto& tv : enumerate(l.t, x, bound)) {
    ++n;
    check("unit1", tv, lam(s.unit(tv)), t.map([&](const Value& a) { return s.unit(a); }, tv));
  }
  rep.checked.emplace_back("unit1", n);

  n = 0;
  for (const auto& sv : enumerate(l.s, x, bound)) {
    ++n;
    check("unit2", sv, lam(s.map([&](const Value& a) { return t.unit(a); }, sv)), t.unit(sv));
  }
  rep.checked.emplace_back("unit2", n);

  n = 0;
  for (const auto& w : enumerate(MonadStack{l.s, l.s, l.t}, x, bound, extra)) {
    ++n;
    Value lhs = lam(s.join(w));
    Value rhs = t.map([&](const Value& a) { return s.join(a); }, lam(s.map(lam, w)));
    check("mult1", w, lhs, rhs);
  }
  rep.checked.emplace_back("mult1", n);

  n = 0;
  for (const auto& w : enumerate(MonadStack{l.s, l.t, l.t}, x, bound, extra)) {
    ++n;
    Value lhs = lam(s.map([&](const Value& a) { return t.join(a); }, w));
    Value rhs = t.join(t.map(lam, lam(w)));
    check("mult2", w, lhs, rhs);
  }
  rep.checked.emplace_back("mult2", n);
  return rep;
}

bool check_times_over_plus_form(const DistLaw& l) {
  Value y1 = Value::atom("y1"), y2 = Value::atom("y2"), x0 = Value::atom("x0");
  auto bin = [](const MonadPtr& m, const Value& a, const Value& b) {
    std::optional<Value> v = generic_operation(m, "mul", {a, b});
    if (!v) throw std::invalid_argument("encoding unsupported: " + m->name() + " has no designated binary");
    return *v;
  };
  Value ty = bin(l.t, y1, y2);
  Value tx = l.t->unit(x0);
  Value lhs1 = l.apply(bin(l.s, ty, tx));
  Value rhs1 = bin(l.t, bin(l.s, y1, x0), bin(l.s, y2, x0));
  Value lhs2 = l.apply(bin(l.s, tx, ty));
  Value rhs2 = bin(l.t, bin(l.s, x0, y1), bin(l.s, x0, y2));
  return lhs1 == rhs1 && lhs2 == rhs2;
}

std::vector<BeckViolation> check_multiplicative_zero(const DistLaw& l, const FinCarrier& x, int bound) {
  std::vector<BeckViolation> out;
  std::optional<Value> zero = generic_operation(l.t, "e", {});
  if (!zero) return out;
  for (const auto& v : enumerate(MonadStack{l.s, l.t}, x, bound)) {
    bool contains = false;
    l.s->for_each_slot(v, [&](const Value& slot, int) { contains = contains || slot == *zero; });
    if (!contains) continue;
    Value r = l.apply(v);
    if (r != *zero) out.push_back({"zero", "", v, r, *zero});
  }
  return out;
}

// ---------------------------------------------------------------- search

namespace {

struct Unclosed {};
struct Blocked {
  int index;
};

struct Constraint {
  std::string name;
  Value input;
  std::function<std::pair<Value, Value>(const std::function<Value(const Value&)>&)> sides;
};

}  // namespace

const char* to_string(SearchResult::Status s) {
  switch (s) {
    case SearchResult::Status::NoLawInFragment: return "NoLawInFragment";
    case SearchResult::Status::Candidates: return "Candidates";
    case SearchResult::Status::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string SearchResult::describe() const {
  std::ostringstream os;
  os << to_string(status) << ": " << inputs.size() << " inputs, " << constraints << " constraints (" << unclosed
     << " leave the fragment), " << nodes << " nodes, output domain " << (domain_saturated ? "saturated" : "truncated");
  if (status == Status::Candidates) os << ", " << candidate_count << " candidate tables";
  os << "\n";
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    os << "candidate " << c + 1 << ":";
    for (std::size_t i = 0; i < inputs.size(); ++i)
      os << (i ? "; " : " ") << to_string(inputs[i]) << " -> " << to_string(candidates[c][i]);
    os << "\n";
  }
  for (const auto& line : trace) os << line << "\n";
  return os.str();
}

SearchResult search_distlaw_bounded(const MonadPtr& sp, const MonadPtr& tp, const SearchOptions& opt) {
  SearchResult res;
  if (opt.bound <= 0 || opt.carrier <= 0) {
    res.trace.push_back("empty fragment");
    return res;
  }
  const Monad& s = *sp;
  const Monad& t = *tp;
  MonadStack st{sp, tp}, ts{tp, sp};
  std::vector<std::string> reserved = s.reserved_labels();
  for (const auto& r : t.reserved_labels()) reserved.push_back(r);
  const int m = opt.table_carrier < 0 ? opt.carrier + 1 : std::max(opt.table_carrier, opt.carrier);
  FinCarrier c = FinCarrier::of_size(m, reserved);
  FinCarrier cx = FinCarrier::of_size(opt.carrier, reserved);

  res.inputs = enumerate(st, c, opt.bound, opt.extra);
  const std::vector<Value>& in = res.inputs;
  const int n = static_cast<int>(in.size());
  std::map<Value, int> index;
  for (int i = 0; i < n; ++i) index.emplace(in[i], i);

  // Outputs are capped by layer size only; b * b covers any total weight.
  constexpr std::size_t out_limit = 50000;
  std::vector<Value> outs;
  auto outputs = [&](int b) { return enumerate_limited(ts, c, b, b * b, out_limit); };
  try {
    if (opt.out_bound >= 0) {
      outs = outputs(opt.out_bound);
      res.domain_saturated = outputs(opt.out_bound + 1).size() == outs.size();
    } else {
      outs = outputs(opt.bound);
      for (int b = opt.bound + 1; b <= opt.bound + 8; ++b) {
        std::vector<Value> next = outputs(b);
        if (next.size() == outs.size()) {
          res.domain_saturated = true;
          break;
        }
        outs = std::move(next);
      }
    }
  } catch (const EnumerationLimit&) {
    if (outs.empty()) {
      res.trace.push_back("output domain exceeds " + std::to_string(out_limit) + " values");
      return res;
    }
  }

  // Candidate outputs: no labels outside the input's own.
  std::vector<std::vector<Value>> domain(n);
  for (int i = 0; i < n; ++i) {
    std::set<Value> ia;
    collect_layer(st, 2, in[i], ia);
    for (const auto& o : outs) {
      std::set<Value> oa;
      collect_layer(ts, 2, o, oa);
      if (std::includes(ia.begin(), ia.end(), oa.begin(), oa.end())) domain[i].push_back(o);
    }
  }

  // Unit axioms fix values outright.
  std::vector<std::optional<Value>> forced(n);
  auto force = [&](const char* axiom, const Value& input, const Value& out) {
    auto it = index.find(input);
    if (it == index.end()) return true;
    auto& f = forced[it->second];
    if (f && *f != out) {
      res.trace.push_back(std::string(axiom) + " forces lambda(" + to_string(input) + ") = " + to_string(out) +
                          ", already forced to " + to_string(*f));
      return false;
    }
    f = out;
    return true;
  };
  bool consistent = true;
  for (const auto& tv : enumerate(tp, c, opt.bound))
    consistent = force("unit1", s.unit(tv), t.map([&](const Value& a) { return s.unit(a); }, tv)) && consistent;
  for (const auto& sv : enumerate(sp, c, opt.bound))
    consistent = force("unit2", s.map([&](const Value& a) { return t.unit(a); }, sv), t.unit(sv)) && consistent;
  if (!consistent) {
    res.status = res.domain_saturated ? SearchResult::Status::NoLawInFragment : SearchResult::Status::Inconclusive;
    return res;
  }
  for (int i = 0; i < n; ++i)
    if (forced[i]) domain[i] = {*forced[i]};

  // The remaining axioms as deferred equations over the table.
  std::vector<Constraint> cons;
  for (int i = 0; i < n; ++i) {
    for_each_function(m, m, [&](const std::vector<int>& img) {
      bool identity = true;
      for (int k = 0; k < m; ++k) identity = identity && img[k] == k;
      if (identity) return;
      ValueFn f = relabel(c, c, img);
      Value moved = map_at(st, 2, f, in[i]);
      if (!index.count(moved)) return;
      Value input = in[i];
      cons.push_back({"naturality[" + function_text(c, c, img) + "]", input, [input, moved, f, &ts](const auto& lam) {
                        return std::make_pair(lam(moved), map_at(ts, 2, f, lam(input)));
                      }});
    });
  }
  // lambda at another component, moved to the carrier by an injection.
  auto lam_any = [&, c](const std::function<Value(const Value&)>& lam, const Value& v) {
    std::set<Value> atoms;
    collect_layer(st, 2, v, atoms);
    if (static_cast<int>(atoms.size()) > m) throw Unclosed{};
    std::vector<Value> order(atoms.begin(), atoms.end());
    auto to_c = [&](const Value& a) {
      return Value::atom(c.labels[std::find(order.begin(), order.end(), a) - order.begin()]);
    };
    auto from_c = [&](const Value& a) {
      auto it = std::find(c.labels.begin(), c.labels.end(), a.label);
      return order.at(it - c.labels.begin());
    };
    return map_at(ts, 2, from_c, lam(map_at(st, 2, to_c, v)));
  };
  for (const auto& w : enumerate(MonadStack{sp, sp, tp}, cx, opt.bound, opt.extra)) {
    cons.push_back({"mult1", w, [=, &s, &t](const auto& lam) {
                      Value lhs = lam(s.join(w));
                      Value rhs = t.map([&](const Value& a) { return s.join(a); }, lam_any(lam, s.map(lam, w)));
                      return std::make_pair(lhs, rhs);
                    }});
  }
  for (const auto& w : enumerate(MonadStack{sp, tp, tp}, cx, opt.bound, opt.extra)) {
    cons.push_back({"mult2", w, [=, &s, &t](const auto& lam) {
                      Value lhs = lam(s.map([&](const Value& a) { return t.join(a); }, w));
                      Value rhs = t.join(t.map(lam, lam_any(lam, w)));
                      return std::make_pair(lhs, rhs);
                    }});
  }
  res.constraints = cons.size();

  std::vector<const Value*> assigned(n, nullptr);
  std::vector<char> dropped(cons.size(), 0), ever_dropped(cons.size(), 0);
  auto drop = [&](std::size_t k) {
    dropped[k] = 1;
    if (!ever_dropped[k]) {
      ever_dropped[k] = 1;
      ++res.unclosed;
    }
  };
  std::function<Value(const Value&)> lookup = [&](const Value& v) -> Value {
    auto it = index.find(v);
    if (it == index.end()) throw Unclosed{};
    if (!assigned[it->second]) throw Blocked{it->second};
    return *assigned[it->second];
  };
  // 1 = holds, 0 = fails, -1 = blocked (bucket set), -2 = dropped.
  auto evaluate = [&](std::size_t k, int& blocked_on, std::string* why) {
    try {
      auto [lhs, rhs] = cons[k].sides(lookup);
      if (lhs == rhs) return 1;
      if (why) *why = cons[k].name + " at " + to_string(cons[k].input) + ": " + to_string(lhs) + " vs " + to_string(rhs);
      return 0;
    } catch (const Blocked& b) {
      blocked_on = b.index;
      return -1;
    } catch (const Unclosed&) {
      return -2;
    }
  };
  std::vector<std::vector<std::size_t>> bucket(n + 1);
  for (std::size_t k = 0; k < cons.size(); ++k) {
    int j = 0;
    int r = evaluate(k, j, nullptr);
    if (r == -1) {
      bucket[j].push_back(k);
    } else if (r == -2) {
      drop(k);
    }
  }

  bool capped = false;
  std::size_t trace_budget = 40;
  std::function<void(int)> dfs = [&](int d) {
    if (capped) return;
    if (d == n) {
      ++res.candidate_count;
      if (res.candidates.size() < opt.max_candidates) {
        std::vector<Value> table;
        for (int i = 0; i < n; ++i) table.push_back(*assigned[i]);
        res.candidates.push_back(std::move(table));
      }
      return;
    }
    for (const Value& val : domain[d]) {
      if (++res.nodes > opt.node_cap) {
        capped = true;
        return;
      }
      assigned[d] = &val;
      std::vector<int> moved_to;
      std::vector<std::size_t> dropped_here;
      bool ok = true;
      for (std::size_t k : bucket[d]) {
        if (dropped[k]) continue;
        int j = 0;
        std::string why;
        int r = evaluate(k, j, trace_budget ? &why : nullptr);
        if (r == 0) {
          if (trace_budget) {
            --trace_budget;
            res.trace.push_back("lambda(" + to_string(in[d]) + ") = " + to_string(val) + " refuted by " + why);
          }
          ok = false;
          break;
        }
        if (r == -1) {
          bucket[j].push_back(k);
          moved_to.push_back(j);
        } else if (r == -2) {
          drop(k);
          dropped_here.push_back(k);
        }
      }
      if (ok) dfs(d + 1);
      for (auto it = moved_to.rbegin(); it != moved_to.rend(); ++it) bucket[*it].pop_back();
      for (std::size_t k : dropped_here) dropped[k] = 0;
      assigned[d] = nullptr;
      if (capped) return;
    }
  };
  dfs(0);

  if (capped) {
    res.status = SearchResult::Status::Inconclusive;
    res.trace.push_back("node cap reached");
  } else if (res.candidate_count > 0) {
    res.status = SearchResult::Status::Candidates;
  } else if (res.domain_saturated) {
    res.status = SearchResult::Status::NoLawInFragment;
  } else {
    res.status = SearchResult::Status::Inconclusive;
    res.trace.push_back("no table within the output bound; the output domain is not saturated");
  }
  return res;
}

}  // namespace wb
