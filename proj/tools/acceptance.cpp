#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "wb/distlaw.hpp"
#include "wb/hierarchy.hpp"
#include "wb/monads.hpp"
#include "wb/nogo.hpp"
#include "wb/normalize.hpp"
#include "wb/rewrite.hpp"
#include "wb/theories.hpp"

using namespace wb;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double s) {
  std::ostringstream os;
  os.precision(1);
  os << std::fixed << s << " s";
  return os.str();
}

FinCarrier carrier(int n, const std::vector<MonadPtr>& monads) {
  std::vector<std::string> reserved;
  for (const auto& m : monads)
    for (const auto& r : m->reserved_labels()) reserved.push_back(r);
  return FinCarrier::of_size(n, reserved);
}

Outcome monad_law_suite() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::vector<MonadPtr> monads = shipped_monads();
  monads.push_back(get_monad("exception:{e1}"));
  std::size_t checked = 0;
  for (const auto& m : monads)
    for (int n = 1; n <= 3; ++n) {
      MonadLawReport r = check_monad_laws(m, carrier(n, {m}), 3, 2);
      o.require(r.ok(), r.describe());
      checked += r.checked_t + r.checked_ttt;
    }
  double s = seconds_since(t0);
  o.require(s < 60, "runtime " + fixed(s) + " exceeds 60 s");
  o.note(std::to_string(monads.size()) + " monads, |X| = 1..3, bound 3, extra 2, " + std::to_string(checked) +
         " instances, " + fixed(s));
  return o;
}

Outcome value_reproduction() {
  Outcome o;
  auto joined = [](const char* monad, const char* text) {
    MonadPtr m = get_monad(monad);
    return to_string(m->join(parse_value(MonadStack{m, m}, text)));
  };
  auto applied = [](const char* law, const char* text) { return to_string(apply_law(get_law(law), text)); };
  struct Case {
    std::string got, expected;
  };
  std::vector<Case> cases = {
      {joined("list", "[[a,b],[c,d,e],[f]]"), "[a,b,c,d,e,f]"},
      {joined("powerset", "{{a,b,c},{b,c},{c,d,e}}"), "{a,b,c,d,e}"},
      {joined("multiset", "{{a:1,b:2}:1,{b:1}:3}"), "{a:1,b:5}"},
      {applied("mset-cartesian", "{{a:1,b:2}:2}"), "{{a:2}:1,{a:1,b:1}:4,{b:2}:4}"},
      {applied("mset-cartesian", "{{a:1}:1,{b:1,c:1}:1}"), "{{a:1,b:1}:1,{a:1,c:1}:1}"},
      {applied("mm-nel-1", "[[a],[b,c,d],[e,f]]"), "[[a,b],[c],[d,e],[f]]"},
      {applied("mm-nel-2", "[[a],[b,c],[d,e]]"), "[[a,b,d]]"},
  };
  for (const auto& c : cases) o.require(c.got == c.expected, c.got + " != " + c.expected);
  o.note(std::to_string(cases.size()) + " values exact");
  return o;
}

Outcome beck_verification() {
  Outcome o;
  for (const char* id :
       {"mset-cartesian", "choice:list:powerset", "exception-over:list", "mm-nel-1", "mm-nel-2", "mm-nel-3"}) {
    const DistLaw& l = get_law(id);
    BeckReport r = check_beck(l, carrier(2, {l.s, l.t}), carrier(2, {l.s, l.t}), 3);
    o.require(r.ok(), r.text());
    std::size_t n = 0;
    for (const auto& [axiom, count] : r.checked) n += count;
    o.require(n > 0, std::string(id) + " checked nothing");
  }
  const DistLaw& faulty = get_law("faulty-list-exception");
  BeckReport r = check_beck(faulty, carrier(1, {faulty.s, faulty.t}), carrier(1, {faulty.s, faulty.t}), 2);
  bool witness = false;
  for (const auto& v : r.of("mult1"))
    witness = witness || (to_string(v.input) == "[[b],[]]" && to_string(v.lhs) == "b" && to_string(v.rhs) == "a");
  o.require(witness, "faulty law: no mult1 witness [[b],[]] with b vs a");
  o.note("6 laws clean at |X| = |Y| = 2, bound 3; faulty law mult1 [[b],[]]: b vs a");
  return o;
}

Outcome table_reproduction() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t cells = 0, unknown = 0;
  for (TableVariant v : {TableVariant::Original, TableVariant::Extended, TableVariant::Full}) {
    VerdictTable t = build_table(v);
    auto diff = diff_table_file(t, std::string(WB_DATA_DIR) + "/golden_" + to_string(v) + ".csv");
    for (const auto& m : diff)
      o.require(false, std::string(to_string(v)) + " " + m.row + "/" + m.column + ": expected " + m.expected +
                           ", got " + m.got);
    for (const auto& row : t.cells)
      for (const auto& c : row) {
        ++cells;
        unknown += c.status == NoGoVerdict::Status::Unknown;
      }
  }
  double s = seconds_since(t0);
  o.require(cells == 16 + 64 + 256, "cell count " + std::to_string(cells));
  o.require(s < 300, "runtime " + fixed(s) + " exceeds 5 min");
  o.note(std::to_string(cells) + " cells (" + std::to_string(unknown) + " unknown) match the goldens, " + fixed(s));
  return o;
}

Outcome plotkin_mechanization() {
  Outcome o;
  PlotkinRefutation r = plotkin_refute_bounded();
  o.require(r.candidates.size() == 1024, "candidate count " + std::to_string(r.candidates.size()));
  o.require(r.survivors == 0, std::to_string(r.survivors) + " survivors");
  std::size_t points = 0;
  for (const auto& c : r.candidates) {
    o.require(!c.failed.empty(), to_string(c.value) + " has no elimination reason");
    bool only_points = std::all_of(c.value.items.begin(), c.value.items.end(),
                                   [](const Value& d) { return d.items.size() == 1; });
    if (!only_points) continue;
    ++points;
    o.require(std::find(c.failed.begin(), c.failed.end(), "f3") != c.failed.end(),
              to_string(c.value) + " not eliminated by f3");
  }
  o.require(points == 16, std::to_string(points) + " point-mass subsets");
  o.note("1024 candidates, 0 survivors, 16 point-mass subsets all violate f3");
  return o;
}

Outcome filter_lemma() {
  Outcome o;
  std::size_t cases = 0;
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (const auto& sigma : Permutation::derangements(m)) {
        std::vector<int> t(static_cast<std::size_t>(n), 1);
        for (;;) {
          auto common = filter_common(n, m, sigma, t);
          ++cases;
          if (common.size() > 1) o.require(false, "n=" + std::to_string(n) + " sigma=" + sigma.str());
          int k = n - 1;
          while (k >= 0 && ++t[static_cast<std::size_t>(k)] > m) t[static_cast<std::size_t>(k--)] = 1;
          if (k < 0) break;
        }
      }
  o.note(std::to_string(cases) + " cases, at most one common element in each");
  return o;
}

Outcome abides() {
  Outcome o;
  int noncomm = 0;
  for (const auto& f : BoomFlags::all()) {
    if (f.comm) continue;
    ++noncomm;
    o.require(!abides_holds(boom_theory(f)), f.id() + " satisfies abides");
  }
  o.require(noncomm == 8, std::to_string(noncomm) + " non-commutative Boom theories");
  o.require(abides_holds(get_theory("cmonoid")), "commutative monoid");
  o.require(abides_holds(get_theory("jsl")), "join semilattice");
  o.note("false on 8 non-commutative Boom theories, true on cmonoid and jsl");
  return o;
}

std::vector<TermPtr> band_terms(int depth) {
  std::vector<TermPtr> ts = {Term::var("x"), Term::var("y")};
  for (int d = 1; d <= depth; ++d) {
    std::vector<TermPtr> next = {Term::var("x"), Term::var("y")};
    for (const auto& a : ts)
      for (const auto& b : ts) next.push_back(Term::app("mul", {a, b}));
    ts = std::move(next);
  }
  return ts;
}

void leaves(const TermPtr& t, std::vector<std::string>& out) {
  if (t->is_var()) {
    out.push_back(t->name());
    return;
  }
  for (const auto& a : t->args()) leaves(a, out);
}

Outcome oracle_agreement() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t theories = 0, keys = 0;
  for (const TheoryEntry* e : registered_theories()) {
    ++theories;
    AgreementReport r = closure_agreement(*e, 3, 2, 8);
    keys += r.keys;
    o.require(r.ok(), e->id + ": " + std::to_string(r.unproved.size()) + " unproved, " +
                          std::to_string(r.unsound.size()) + " unsound");
  }
  const TheoryEntry& band = get_theory("band");
  auto terms = band_terms(2);
  std::size_t equal_pairs = 0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (eq_bounded(band.presentation, terms[i], terms[j], 4) != EqOutcome::Equal) continue;
      ++equal_pairs;
      std::vector<std::string> a, b;
      leaves(terms[i], a);
      leaves(terms[j], b);
      o.require(band_canonical(a) == band_canonical(b),
                "band: " + to_string(terms[i]) + " = " + to_string(terms[j]) + " proved, canonical words differ");
    }
  o.note(std::to_string(theories) + " theories, depth 3, 2 vars, " + std::to_string(keys) + " keys; band: " +
         std::to_string(equal_pairs) + " proved pairs agree; " + fixed(seconds_since(t0)));
  return o;
}

Outcome free_models() {
  Outcome o;
  struct Case {
    const char* theory;
    const char* monad;
    int depth, bound;
  };
  for (const Case& c : {Case{"monoid", "list", 2, 3}, Case{"cmonoid", "multiset", 2, 3},
                        Case{"jsl", "powerset", 2, 3}, Case{"pointed", "lift", 1, 1}})
    for (int n = 1; n <= 3; ++n) {
      FreeModelReport r =
          free_model_iso_check(get_theory(c.theory), get_monad(c.monad), FinCarrier::of_size(n), c.depth, c.bound);
      o.require(r.ok() && r.values == r.matched,
                std::string(c.theory) + "/" + c.monad + " |X|=" + std::to_string(n) + ": " + r.describe());
    }
  o.note("monoid/list, cmonoid/multiset, jsl/powerset, pointed/lift at |X| = 1..3");
  return o;
}

Outcome bounded_search() {
  Outcome o;
  SearchResult pp = search_distlaw_bounded(powerset_monad(), powerset_monad(), {});
  o.require(pp.status == SearchResult::Status::NoLawInFragment,
            std::string("P over P at |X| = 1, bound 2 gives ") + to_string(pp.status) + " (" +
                std::to_string(pp.candidate_count) + " candidate tables)");
  SearchOptions two;
  two.carrier = 2;
  two.extra = 6;
  SearchResult pp2 = search_distlaw_bounded(powerset_monad(), powerset_monad(), two);
  o.note(std::string("P over P at |X| = 2, bound 2, extra 6 gives ") + to_string(pp2.status));

  SearchResult ll = search_distlaw_bounded(lift_monad(), lift_monad(), {});
  const DistLaw& swap = get_law("lift-swap");
  bool found = false;
  for (const auto& table : ll.candidates) {
    bool same = true;
    for (std::size_t i = 0; i < ll.inputs.size(); ++i) same = same && table[i] == swap.apply(ll.inputs[i]);
    found = found || same;
  }
  o.require(ll.status == SearchResult::Status::Candidates && found, "lift over lift misses the swap law");
  if (found) o.note("lift over lift contains the swap law");
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"monad laws", monad_law_suite},
      {"worked values", value_reproduction},
      {"Beck axioms", beck_verification},
      {"Boom tables", table_reproduction},
      {"Plotkin refutation", plotkin_mechanization},
      {"filter lemma", filter_lemma},
      {"abides", abides},
      {"oracle agreement", oracle_agreement},
      {"free models", free_models},
      {"bounded law search", bounded_search},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << "criterion " << i + 1 << " " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first;
    for (const auto& n : o.notes) std::cout << "; " << n;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
