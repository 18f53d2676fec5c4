#include <doctest.h>

#include <json.hpp>
#include <map>
#include <set>

#include "wb/distlaw.hpp"
#include "wb/nogo.hpp"

using namespace wb;

namespace {

const TheoryEntry& th(const char* id) { return get_theory(id); }

// Membership straight from the table of sets: column j of row k holds index
// i_k, except column k of rows k >= 2, which holds sigma(i_k).
std::size_t brute_common(int n, int m, const Permutation& s, const std::vector<int>& choice) {
  std::size_t count = 0;
  for (int j = 1; j <= n; ++j)
    for (int i = 1; i <= m; ++i) {
      bool everywhere = true;
      for (int k = 1; k <= n && everywhere; ++k) {
        int ik = choice[static_cast<std::size_t>(k - 1)];
        int held = (k >= 2 && j == k) ? s(ik) : ik;
        everywhere = held == i;
      }
      if (everywhere) ++count;
    }
  return count;
}

std::vector<std::vector<int>> tuples(int n, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> t(static_cast<std::size_t>(n), 1);
  for (;;) {
    out.push_back(t);
    int k = n - 1;
    while (k >= 0 && ++t[static_cast<std::size_t>(k)] > m) t[static_cast<std::size_t>(k--)] = 1;
    if (k < 0) return out;
  }
}

const Hypothesis* find(const TheoremCheck& c, const std::string& name) {
  for (const auto& h : c.hypotheses)
    if (h.name == name) return &h;
  return nullptr;
}

// Reads a monoid term as the word of its variables, left to right.
void word(const TermPtr& t, std::vector<std::string>& out) {
  if (t->is_var()) {
    out.push_back(t->name());
    return;
  }
  for (const auto& a : t->args()) word(a, out);
}

std::map<std::string, Rational> dist_map(const Value& d) {
  std::map<std::string, Rational> m;
  for (std::size_t i = 0; i < d.items.size(); ++i) m[d.items[i].label] += d.weights[i];
  return m;
}

// PD(f) on a set of distributions, computed on label maps.
std::set<std::map<std::string, Rational>> pd_image(const Value& set, const std::map<std::string, std::string>& f) {
  std::set<std::map<std::string, Rational>> out;
  for (const auto& d : set.items) {
    std::map<std::string, Rational> img;
    for (const auto& [x, w] : dist_map(d)) img[f.at(x)] += w;
    out.insert(img);
  }
  return out;
}

}  // namespace

TEST_CASE("permutations") {
  CHECK(Permutation::swap().fixed_point_free());
  CHECK(Permutation::cycle(3).map == std::vector<int>{2, 3, 1});
  CHECK_FALSE(Permutation{{1, 3, 2}}.fixed_point_free());
  CHECK_FALSE(Permutation{{1, 1}}.valid());
  CHECK(Permutation::derangements(1).empty());
  CHECK(Permutation::derangements(2).size() == 1);
  CHECK(Permutation::derangements(3).size() == 2);
  CHECK(Permutation::derangements(4).size() == 9);
}

TEST_CASE("filter lemma worked cases") {
  SUBCASE("one row is the whole first row") {
    for (int m = 2; m <= 4; ++m)
      for (int i = 1; i <= m; ++i) {
        auto c = filter_common(1, m, Permutation::cycle(m), {i});
        CHECK(c == std::set<FilterVar>{{1, i}});
      }
  }
  SUBCASE("two rows, swap, choices 1 2") {
    auto rows = filter_rows(2, 2, Permutation::swap(), {1, 2});
    CHECK(rows[0] == std::set<FilterVar>{{1, 1}, {2, 1}});
    CHECK(rows[1] == std::set<FilterVar>{{1, 2}, {2, 1}});
    auto c = filter_common(2, 2, Permutation::swap(), {1, 2});
    CHECK(c == std::set<FilterVar>{{2, 1}});
  }
  SUBCASE("3-cycle, all 27 tuples") {
    for (const auto& t : tuples(3, 3)) {
      auto c = filter_common(3, 3, Permutation::cycle(3), t);
      CHECK(c.size() <= 1);
      CHECK(c.size() == brute_common(3, 3, Permutation::cycle(3), t));
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(filter_common(2, 2, Permutation::swap(), {1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(filter_common(2, 2, Permutation::swap(), {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(filter_common(2, 3, Permutation{{1, 3, 2}}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(filter_common(2, 3, Permutation::swap(), {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(filter_common(2, 2, Permutation::swap(), {1}), std::invalid_argument);
  }
}

TEST_CASE("filter lemma exhaustive up to 4") {
  std::size_t cases = 0;
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 4; ++m)
      for (const auto& s : Permutation::derangements(m))
        for (const auto& t : tuples(n, m)) {
          auto c = filter_common(n, m, s, t);
          REQUIRE(c.size() <= 1);
          REQUIRE(c.size() == brute_common(n, m, s, t));
          ++cases;
        }
  // sum over n of m^n * derangements(m) for m = 2, 3, 4
  CHECK(cases == (2 + 4 + 8 + 16) * 1 + (3 + 9 + 27 + 81) * 2 + (4 + 16 + 64 + 256) * 9);
}

TEST_CASE("Plotkin binary") {
  SUBCASE("join semilattice over convex algebras") {
    auto c = check_plotkin_binary(th("jsl"), th("convex"));
    CHECK(c.applicable());
    CHECK(find(c, "V3")->note.find("mix0") != std::string::npos);
  }
  SUBCASE("join semilattice over itself") { CHECK(check_plotkin_binary(th("jsl"), th("jsl")).applicable()); }
  SUBCASE("reader has no commutative binary") {
    auto c = check_plotkin_binary(th("reader2"), th("reader2"));
    CHECK_FALSE(c.applicable());
    CHECK(c.first_gap()->name == "P1");
    CHECK(find(c, "P2")->holds());
    CHECK(find(c, "V1")->holds());
  }
  SUBCASE("explicit terms override the designated ones") {
    const TheoryEntry& j = th("jsl");
    auto c = check_plotkin_binary(j, j, j.parse("mul(y1,mul(y2,e))"), j.parse("mul(y2,y1)"));
    CHECK(c.applicable());
  }
}

TEST_CASE("Plotkin general") {
  const TheoryEntry& jsl = th("jsl");
  const TheoryEntry& convex = th("convex");
  SUBCASE("m = n = 2 with the swap matches the binary checker") {
    auto bin = check_plotkin_binary(jsl, jsl);
    auto gen = check_plotkin_general(jsl, jsl, jsl.designated.binary, 2, jsl.designated.binary, 2,
                                     Permutation::swap());
    REQUIRE(bin.hypotheses.size() == gen.hypotheses.size());
    for (std::size_t i = 0; i < bin.hypotheses.size(); ++i) {
      CHECK(bin.hypotheses[i].holds() == gen.hypotheses[i].holds());
      CHECK(gen.hypotheses[i].name.substr(0, 2) == bin.hypotheses[i].name.substr(0, 2));
    }
    CHECK(gen.applicable() == bin.applicable());
  }
  SUBCASE("ternary join with a 3-cycle over convex") {
    TermPtr p = jsl.parse("mul(mul(y1,y2),y3)");
    auto c = check_plotkin_general(jsl, convex, p, 3, convex.designated.binary, 2, Permutation::cycle(3));
    CHECK(c.applicable());
    // Set normal form: the variables of p and p[sigma] coincide.
    std::vector<std::string> w;
    word(p, w);
    std::set<std::string> vs(w.begin(), w.end()), moved;
    for (const auto& x : w) moved.insert("y" + std::to_string(Permutation::cycle(3)(x[1] - '0')));
    CHECK(vs == moved);
    CHECK(find(c, "P1'")->status == CertStatus::HoldsAnalytic);
    CHECK(find(c, "P3'")->status == CertStatus::HoldsBounded);
    CHECK(find(c, "P3'")->vars >= 4);
  }
  SUBCASE("monoid is not idempotent") {
    const TheoryEntry& mon = th("monoid");
    auto c = check_plotkin_general(mon, convex, mon.designated.binary, 2, convex.designated.binary, 2,
                                   Permutation::swap());
    CHECK_FALSE(c.applicable());
    const Hypothesis* idem = find(c, "P2'");
    REQUIRE(idem->witness);
    std::vector<std::string> lhs, rhs;
    word(idem->witness->first, lhs);
    word(idem->witness->second, rhs);
    CHECK(lhs == std::vector<std::string>{"y1", "y1"});
    CHECK(rhs == std::vector<std::string>{"y1"});
    CHECK(idem->status == CertStatus::Fails);
  }
  SUBCASE("sigma with a fixed point") {
    CHECK_THROWS_AS(check_plotkin_general(jsl, jsl, jsl.designated.binary, 2, jsl.designated.binary, 2,
                                          Permutation{{1, 2}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(check_plotkin_general(jsl, jsl, jsl.designated.binary, 2, jsl.designated.binary, 2,
                                          Permutation::cycle(3)),
                    std::invalid_argument);
  }
}

TEST_CASE("too many constants") {
  CHECK(check_too_many_constants(th("monoid"), th("exception:{a,b}")).applicable());
  CHECK(check_too_many_constants(th("jsl"), th("exception:{a,b}")).applicable());
  SUBCASE("ring equates a closed term with an open one") {
    auto c = check_too_many_constants(th("monoid"), th("ring"));
    CHECK_FALSE(c.applicable());
    CHECK(c.first_gap()->name == "T1");
    CHECK(find(c, "two distinct constants")->holds());
    CHECK(find(c, "S3")->holds());
  }
  SUBCASE("a single exception has no two-variable term") {
    auto c = check_too_many_constants(th("exception:{a}"), th("exception:{a,b}"));
    CHECK_FALSE(c.applicable());
    CHECK(c.first_gap()->name == "term with two or more variables");
  }
  SUBCASE("one constant is not enough") {
    auto c = check_too_many_constants(th("monoid"), th("pointed"));
    CHECK_FALSE(c.applicable());
    CHECK(c.first_gap()->name == "two distinct constants");
  }
}

TEST_CASE("lacking abides") {
  CHECK(check_lacking_abides(th("monoid"), th("monoid")).applicable());
  CHECK(check_lacking_abides(th("tree"), th("tree")).applicable());
  auto c = check_lacking_abides(th("monoid"), th("cmonoid"));
  CHECK_FALSE(c.applicable());
  CHECK(c.first_gap()->name == "T4b");
  CHECK(c.first_gap()->note == "both sides are equal");
  SUBCASE("no unit constant") {
    auto d = check_lacking_abides(th("semigroup"), th("monoid"));
    CHECK_FALSE(d.applicable());
    CHECK_FALSE(find(d, "S4a")->holds());
  }
}

TEST_CASE("idempotence and units") {
  CHECK(check_idem_units(th("jsl"), th("cmonoid")).applicable());
  CHECK(check_idem_units(th("jsl"), th("jsl")).applicable());
  auto c = check_idem_units(th("cmonoid"), th("jsl"));
  CHECK_FALSE(c.applicable());
  CHECK(c.first_gap()->name == "S4b");
}

TEST_CASE("uniqueness") {
  CHECK(uniqueness_applies(th("monoid"), th("monoid")));
  CHECK(uniqueness_applies(th("cmonoid"), th("cmonoid")));
  CHECK_FALSE(uniqueness_applies(th("exception:{a,b}"), th("monoid")));
  CHECK_FALSE(uniqueness_applies(th("monoid"), th("semigroup")));
}

TEST_CASE("verdicts") {
  SUBCASE("list over list") {
    auto v = verdict(th("boom:UA--"), th("boom:UA--"));
    CHECK(v.status == NoGoVerdict::Status::NoDistLaw);
    CHECK(v.theorem_ids() == std::vector<TheoremId>{TheoremId::LackingAbides});
    CHECK(v.headline() == "NO (LackingAbides)");
  }
  SUBCASE("list over powerset") {
    auto v = verdict(th("boom:UA--"), th("boom:UACI"));
    CHECK(v.status == NoGoVerdict::Status::Exists);
    CHECK(v.law == "choice:list:powerset");
    CHECK(v.citations == std::vector<std::string>{"ManesMulry2007 Thm 4.3.4"});
    CHECK_FALSE(v.citation_only);
    REQUIRE(v.beck_ok);
    CHECK(*v.beck_ok);
  }
  SUBCASE("nonempty tree over nonempty idempotent tree") {
    auto v = verdict(th("boom:----"), th("boom:---I"));
    CHECK(v.status == NoGoVerdict::Status::Unknown);
    CHECK(v.headline() == "UNKNOWN");
    CHECK(v.applicable.empty());
  }
  SUBCASE("citation-only cells are flagged") {
    auto v = verdict(th("boom:-AC-"), th("boom:-ACI"));
    CHECK(v.status == NoGoVerdict::Status::Exists);
    CHECK(v.citation_only);
    CHECK(v.headline() == "YES (ManesMulry2007 Thm 4.3.4, citation only)");
  }
  SUBCASE("powerset over powerset collects every theorem") {
    auto v = verdict(th("jsl"), th("jsl"));
    CHECK(v.theorem_ids() ==
          std::vector<TheoremId>{TheoremId::IdemUnits, TheoremId::Plotkin1});
    CHECK(v.citations == std::vector<std::string>{"KlinSalamanca2018 Thm 3.2"});
  }
  SUBCASE("distribution over powerset") {
    auto v = verdict(th("convex"), th("jsl"));
    CHECK(v.theorem_ids() == std::vector<TheoremId>{TheoremId::Plotkin1});
    CHECK(verdict(th("jsl"), th("convex")).theorem_ids() == std::vector<TheoremId>{TheoremId::Plotkin1});
    CHECK(verdict(th("convex"), th("convex")).theorem_ids() == std::vector<TheoremId>{TheoremId::Plotkin1});
  }
  SUBCASE("list over exceptions") {
    auto v = verdict(th("monoid"), th("exception:{a,b}"));
    CHECK(v.theorem_ids() == std::vector<TheoremId>{TheoremId::TooManyConstants});
  }
  SUBCASE("structured output") {
    auto v = verdict(th("boom:UA--"), th("boom:UA--"));
    auto j = nlohmann::json::parse(v.json());
    CHECK(j["status"] == "NoDistLaw");
    CHECK(j["theorems"] == nlohmann::json::array({"LackingAbides"}));
    CHECK(j["checks"].size() == 4);
    bool bounded = false;
    for (const auto& h : j["checks"][0]["hypotheses"])
      if (h.contains("bounds")) bounded = true;
    CHECK(bounded);
    CHECK(v.text().find("law boom:UA-- . boom:UA-- => boom:UA-- . boom:UA--: NO (LackingAbides)") == 0);
  }
}

TEST_CASE("every no-go certificate replays") {
  Bounds b;
  const char* pairs[][2] = {{"boom:UA--", "boom:UA--"}, {"jsl", "jsl"},          {"convex", "jsl"},
                            {"monoid", "exception:{a,b}"}, {"boom:U-CI", "boom:--CI"}, {"boom:U--I", "boom:UAC-"}};
  for (const auto& p : pairs) {
    auto v = verdict(th(p[0]), th(p[1]), b);
    REQUIRE(v.status == NoGoVerdict::Status::NoDistLaw);
    for (const auto& c : v.applicable)
      for (const auto& h : c.hypotheses) {
        INFO(h.describe());
        CHECK(replay(h, b));
      }
  }
}

TEST_CASE("law search never contradicts a positive verdict") {
  const std::pair<const char*, const char*> monads[] = {
      {"bintree", "boom:U---"}, {"list", "boom:UA--"}, {"multiset", "boom:UAC-"}, {"powerset", "boom:UACI"}};
  std::size_t refuted = 0;
  auto cross = [&](const std::pair<const char*, const char*>& s, const std::pair<const char*, const char*>& t,
                   const SearchOptions& o) {
    auto r = search_distlaw_bounded(get_monad(s.first), get_monad(t.first), o);
    if (r.status != SearchResult::Status::NoLawInFragment) return;
    ++refuted;
    INFO(s.first << " over " << t.first);
    CHECK(verdict(th(s.second), th(t.second)).status != NoGoVerdict::Status::Exists);
  };
  SearchOptions small;
  small.bound = 2;
  small.max_candidates = 2;
  for (const auto& s : monads)
    for (const auto& t : monads) cross(s, t, small);
  SearchOptions wide;
  wide.carrier = 2;
  wide.bound = 2;
  wide.extra = 6;
  cross(monads[3], monads[3], wide);
  CHECK(refuted >= 1);
}

TEST_CASE("Plotkin counterexample on denominators up to 2") {
  auto r = plotkin_refute_bounded();
  CHECK(r.distributions.size() == 10);
  CHECK(r.candidates.size() == 1024);
  CHECK(r.survivors == 0);
  for (const auto& c : r.candidates) CHECK_FALSE(c.failed.empty());
  CHECK(to_string(r.xi) == "{{a,b}:1/2,{c,d}:1/2}");
  REQUIRE(r.constraints.size() == 3);
  CHECK(to_string(r.constraints[0].image_of_xi) == "{{a,b}:1}");
  CHECK(to_string(r.constraints[0].required) == "{{a:1},{b:1}}");
  CHECK(to_string(r.constraints[1].required) == "{{a:1},{b:1}}");
  CHECK(to_string(r.constraints[2].image_of_xi) == "{{a}:1/2,{c}:1/2}");
  CHECK(to_string(r.constraints[2].required) == "{{a:1/2,c:1/2}}");

  const std::map<std::string, std::string> f1 = {{"a", "a"}, {"b", "b"}, {"c", "a"}, {"d", "b"}};
  const std::map<std::string, std::string> f2 = {{"a", "a"}, {"b", "b"}, {"c", "b"}, {"d", "a"}};
  const std::map<std::string, std::string> f3 = {{"a", "a"}, {"b", "a"}, {"c", "c"}, {"d", "c"}};
  const std::set<std::map<std::string, Rational>> ab = {{{"a", 1}}, {{"b", 1}}};
  const std::set<std::map<std::string, Rational>> ac = {{{"a", Rational(1, 2)}, {"c", Rational(1, 2)}}};
  std::size_t point_only = 0;
  for (const auto& c : r.candidates) {
    std::vector<std::string> expect;
    if (pd_image(c.value, f1) != ab) expect.push_back("f1");
    if (pd_image(c.value, f2) != ab) expect.push_back("f2");
    if (pd_image(c.value, f3) != ac) expect.push_back("f3");
    CHECK(c.failed == expect);
    bool points = std::all_of(c.value.items.begin(), c.value.items.end(),
                              [](const Value& d) { return d.items.size() == 1; });
    if (points) {
      ++point_only;
      CHECK(std::find(c.failed.begin(), c.failed.end(), "f3") != c.failed.end());
    }
  }
  CHECK(point_only == 16);

  auto lookup = [&](const std::string& text) -> const PlotkinCandidate& {
    for (const auto& c : r.candidates)
      if (to_string(c.value) == text) return c;
    FAIL("missing candidate " << text);
    return r.candidates.front();
  };
  CHECK(lookup("{{a:1},{b:1}}").failed == std::vector<std::string>{"f3"});
  CHECK(lookup("{{a:1/2,c:1/2}}").failed.front() == "f1");
  CHECK(plotkin_refute_bounded(false).candidates.size() == 1023);
  auto j = nlohmann::json::parse(r.json());
  CHECK(j["survivors"] == 0);
  CHECK(j["candidates"].size() == 1024);
}
