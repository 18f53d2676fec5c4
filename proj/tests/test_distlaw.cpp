#include <doctest.h>

#include <json.hpp>
#include <set>

#include "wb/distlaw.hpp"

using namespace wb;

namespace {

std::string applied(const char* id, const char* text) { return to_string(apply_law(get_law(id), text)); }

class IdentityMonad : public Monad {
 public:
  std::string name() const override { return "identity"; }
  Value unit(const Value& x) const override { return x; }
  Value map(const ValueFn& f, const Value& v) const override { return f(v); }
  Value join(const Value& v) const override { return v; }
  int size(const Value&) const override { return 0; }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override { f(v, 1); }
  void enumerate_size(const std::vector<Value>& e, const std::vector<int>& w, int s, int b,
                      std::vector<Value>& out) const override {
    if (s != 0) return;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (w[i] <= b) out.push_back(e[i]);
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override { return inner(r); }
  bool well_formed(const Value&) const override { return true; }
};

// Expands both multiplicities and picks one element per copy of each inner multiset.
Value brute_cartesian(const Value& mm) {
  std::vector<std::vector<Value>> rows;
  for (std::size_t i = 0; i < mm.items.size(); ++i)
    for (int c = 0; c < mm.weights[i]; ++c) {
      std::vector<Value> row;
      const Value& inner = mm.items[i];
      for (std::size_t j = 0; j < inner.items.size(); ++j)
        for (int k = 0; k < inner.weights[j]; ++k) row.push_back(inner.items[j]);
      rows.push_back(row);
    }
  std::map<Value, int> counts;
  std::vector<std::size_t> pick(rows.size(), 0);
  for (const auto& row : rows)
    if (row.empty()) return Value::bag({}, {});
  while (true) {
    std::map<Value, int> chosen;
    for (std::size_t r = 0; r < rows.size(); ++r) ++chosen[rows[r][pick[r]]];
    std::vector<Value> items;
    std::vector<Rational> ws;
    for (const auto& [x, n] : chosen) {
      items.push_back(x);
      ws.push_back(n);
    }
    ++counts[Value::bag(items, ws)];
    std::size_t r = 0;
    while (r < rows.size() && ++pick[r] == rows[r].size()) pick[r++] = 0;
    if (r == rows.size()) break;
  }
  std::vector<Value> items;
  std::vector<Rational> ws;
  for (const auto& [x, n] : counts) {
    items.push_back(x);
    ws.push_back(n);
  }
  return Value::bag(items, ws);
}

void atoms_of(const Value& v, std::set<std::string>& out) {
  if (v.kind == Kind::Atom) out.insert(v.label);
  for (const auto& i : v.items) atoms_of(i, out);
}

FinCarrier carrier_for(const DistLaw& l, int n) {
  std::vector<std::string> reserved = l.s->reserved_labels();
  for (const auto& r : l.t->reserved_labels()) reserved.push_back(r);
  return FinCarrier::of_size(n, reserved);
}

}  // namespace

TEST_CASE("worked examples") {
  CHECK(applied("ring", "[{a:1},{b:1,c:1}]") == "{[a,b]:1,[a,c]:1}");
  CHECK(applied("ring", "[]") == "{[]:1}");
  CHECK(applied("ring", "[{a:1,b:-1},{c:1}]") == "{[a,c]:1,[b,c]:-1}");
  CHECK(applied("mset-cartesian", "{{a:1,b:2}:2}") == "{{a:2}:1,{a:1,b:1}:4,{b:2}:4}");
  CHECK(applied("mset-cartesian", "{{a:1}:1,{b:1,c:1}:1}") == "{{a:1,b:1}:1,{a:1,c:1}:1}");
  CHECK(applied("mset-cartesian", "{{}:1}") == "{}");
  CHECK(applied("choice:list:powerset", "[{a,b},{c}]") == "{[a,c],[b,c]}");
  CHECK(applied("choice:list:powerset", "[{},{a}]") == "{}");
  CHECK(applied("mm-nel-1", "[[a],[b,c,d],[e,f]]") == "[[a,b],[c],[d,e],[f]]");
  CHECK(applied("mm-nel-2", "[[a],[b,c],[d,e]]") == "[[a,b,d]]");
  CHECK(applied("mm-nel-2", "[[a,b,c]]") == "[[a],[b],[c]]");
  CHECK(applied("mm-nel-3", "[[a],[b,c],[d,e]]") == "[[a,c,e]]");
  CHECK(applied("exception-over:list", "[a,b]") == "[a,b]");
  CHECK(applied("exception-over:list", "e1") == "[e1]");
  CHECK(applied("faulty-list-exception", "[x,y]") == "[x,y]");
  CHECK(applied("faulty-list-exception", "[b]") == "b");
  CHECK(applied("faulty-list-exception", "[x,b,y]") == "a");
  CHECK(applied("faulty-list-exception", "[]") == "[]");
  CHECK(applied("lift-swap", "bot") == "inl(bot)");
  CHECK_THROWS_AS(apply_law(get_law("mm-nel-1"), "[[a],[]]"), ValueParseError);
  CHECK_THROWS_AS(get_law("no-such-law"), std::invalid_argument);
  CHECK_THROWS_AS(law_choice(get_monad("powerset"), get_monad("powerset")), std::invalid_argument);
}

TEST_CASE("registered genuine laws satisfy Beck's axioms") {
  for (const auto& id : law_ids()) {
    if (id == "faulty-list-exception") continue;
    const DistLaw& l = get_law(id);
    for (int n = 1; n <= 2; ++n) {
      BeckReport r = check_beck(l, carrier_for(l, n), carrier_for(l, 2), 3);
      CHECK_MESSAGE(r.ok(), r.text());
      for (const auto& [axiom, count] : r.checked) CHECK_MESSAGE(count > 0, id << " " << axiom);
    }
  }
  const DistLaw& ex = get_law("exception-over:list");
  CHECK(check_beck(ex, carrier_for(ex, 2), carrier_for(ex, 2), 3, 1).ok());
}

TEST_CASE("the faulty law fails the first multiplication axiom") {
  const DistLaw& l = get_law("faulty-list-exception");
  BeckReport r = check_beck(l, FinCarrier::of_size(1, {"a", "b"}), FinCarrier::of_size(1, {"a", "b"}), 2);
  REQUIRE_FALSE(r.ok());
  CHECK(r.of("naturality").empty());
  CHECK(r.of("unit1").empty());
  CHECK(r.of("unit2").empty());
  bool found = false;
  for (const auto& v : r.of("mult1")) {
    CHECK(v.lhs != v.rhs);
    if (to_string(v.input) == "[[b],[]]") {
      found = true;
      CHECK(to_string(v.lhs) == "b");
      CHECK(to_string(v.rhs) == "a");
    }
  }
  CHECK(found);
}

TEST_CASE("identity law over the identity monad") {
  auto id = std::make_shared<IdentityMonad>();
  DistLaw l{"identity", id, id, [](const Value& v) { return v; }, "user"};
  BeckReport r = check_beck(l, FinCarrier::of_size(2), FinCarrier::of_size(2), 2);
  CHECK(r.ok());
  CHECK(r.checked.front().second == 8);
}

TEST_CASE("Cartesian law agrees with the choice law and a brute-force product") {
  const DistLaw& cart = get_law("mset-cartesian");
  const DistLaw& choice = get_law("choice:multiset:multiset");
  std::size_t n = 0;
  for (const Value& v : enumerate(MonadStack{cart.s, cart.t}, FinCarrier::of_size(2), 3, 2)) {
    Value expect = brute_cartesian(v);
    CHECK_MESSAGE(cart.apply(v) == expect, to_string(v));
    CHECK(choice.apply(v) == expect);
    ++n;
  }
  CHECK(n > 50);
}

TEST_CASE("times over plus in closed form") {
  for (const char* id : {"ring", "mset-cartesian", "choice:list:powerset", "choice:list:multiset",
                         "choice:multiset:powerset", "choice:bintree:multiset"})
    CHECK_MESSAGE(check_times_over_plus_form(get_law(id)), id);
  CHECK_FALSE(check_times_over_plus_form(get_law("mm-nel-1")));
  DistLaw twisted = get_law("choice:list:powerset");
  auto inner = twisted.apply;
  twisted.apply = [inner](const Value& v) {
    Value out = inner(v);
    std::vector<Value> rev;
    for (Value l : out.items) {
      std::reverse(l.items.begin(), l.items.end());
      rev.push_back(l);
    }
    return Value::set(rev);
  };
  CHECK_FALSE(check_times_over_plus_form(twisted));
  CHECK_THROWS_AS(check_times_over_plus_form(get_law("exception-over:list")), std::invalid_argument);
}

TEST_CASE("multiplicative zero") {
  for (const char* id : {"ring", "mset-cartesian", "choice:list:powerset", "choice:list:multiset",
                         "choice:multiset:powerset", "choice:multiset:multiset", "choice:bintree:powerset",
                         "choice:bintree:multiset"})
    CHECK_MESSAGE(check_multiplicative_zero(get_law(id), FinCarrier::of_size(2), 3).empty(), id);
}

TEST_CASE("laws never invent labels") {
  for (const auto& id : law_ids()) {
    const DistLaw& l = get_law(id);
    for (const Value& v : enumerate(MonadStack{l.s, l.t}, carrier_for(l, 3), 3)) {
      std::set<std::string> in, out;
      atoms_of(v, in);
      atoms_of(l.apply(v), out);
      CHECK_MESSAGE(std::includes(in.begin(), in.end(), out.begin(), out.end()), id << " " << to_string(v));
    }
  }
}

TEST_CASE("report formats") {
  BeckReport r = check_beck(get_law("faulty-list-exception"), FinCarrier::of_size(1, {"a", "b"}),
                            FinCarrier::of_size(1, {"a", "b"}), 2);
  auto j = nlohmann::json::parse(r.json());
  CHECK(j["law"] == "faulty-list-exception");
  CHECK(j["ok"] == false);
  CHECK(j["violations"].size() == r.violations.size());
  CHECK(j["checked"]["mult1"].get<std::size_t>() > 0);
  CHECK(r.text().find("violation mult1 input [[b],[]] lhs b rhs a") != std::string::npos);
  CHECK(r.text().find("FAIL") != std::string::npos);
  CHECK(check_beck(get_law("lift-swap"), FinCarrier::of_size(1), FinCarrier::of_size(1), 2).text().ends_with("OK\n"));
}

TEST_CASE("bounded search: lift over lift contains the swap law") {
  SearchResult r = search_distlaw_bounded(lift_monad(), lift_monad(), {});
  REQUIRE(r.status == SearchResult::Status::Candidates);
  const DistLaw& swap = get_law("lift-swap");
  bool found = false;
  for (const auto& table : r.candidates) {
    bool same = true;
    for (std::size_t i = 0; i < r.inputs.size(); ++i) same = same && table[i] == swap.apply(r.inputs[i]);
    found = found || same;
  }
  CHECK(found);
}

TEST_CASE("bounded search keeps every restriction of a genuine law") {
  for (const char* id : {"mm-nel-1", "mm-nel-2", "mm-nel-3", "choice:list:powerset", "lift-swap"}) {
    const DistLaw& l = get_law(id);
    SearchOptions o;
    o.max_candidates = 1000;
    SearchResult r = search_distlaw_bounded(l.s, l.t, o);
    REQUIRE_MESSAGE(r.status == SearchResult::Status::Candidates, id << "\n" << r.describe());
    bool found = false;
    for (const auto& table : r.candidates) {
      bool same = true;
      for (std::size_t i = 0; i < r.inputs.size(); ++i) same = same && table[i] == l.apply(r.inputs[i]);
      found = found || same;
    }
    CHECK_MESSAGE(found, id);
  }
}

TEST_CASE("bounded search: powerset over powerset") {
  // At |X| = 1 the choice table satisfies every axiom instance, so the fragment cannot refute it.
  SearchResult one = search_distlaw_bounded(powerset_monad(), powerset_monad(), {});
  CHECK(one.status == SearchResult::Status::Candidates);
  CHECK(one.domain_saturated);
  SearchOptions o;
  o.carrier = 2;
  o.extra = 6;
  SearchResult two = search_distlaw_bounded(powerset_monad(), powerset_monad(), o);
  CHECK_MESSAGE(two.status == SearchResult::Status::NoLawInFragment, two.describe());
  CHECK(two.domain_saturated);
  CHECK_FALSE(two.trace.empty());
}

TEST_CASE("bounded search: empty fragment") {
  SearchOptions o;
  o.bound = 0;
  for (const auto& [s, t] : {std::pair{"lift", "lift"}, {"list", "powerset"}, {"powerset", "powerset"}}) {
    SearchResult r = search_distlaw_bounded(get_monad(s), get_monad(t), o);
    CHECK(r.status == SearchResult::Status::Inconclusive);
    CHECK(r.trace == std::vector<std::string>{"empty fragment"});
  }
}
