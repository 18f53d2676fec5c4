#include <doctest.h>

#include <set>

#include "wb/monads.hpp"

using namespace wb;

namespace {

std::string joined(const char* monad, const char* text) {
  MonadPtr m = get_monad(monad);
  return to_string(m->join(parse_value(MonadStack{m, m}, text)));
}

// Deliberately wrong: concatenates, then drops the last element.
class DropLastList : public Monad {
 public:
  std::string name() const override { return "drop-last"; }
  Value unit(const Value& x) const override { return base_->unit(x); }
  Value map(const ValueFn& f, const Value& v) const override { return base_->map(f, v); }
  Value join(const Value& vv) const override {
    Value v = base_->join(vv);
    if (!v.items.empty()) v.items.pop_back();
    return v;
  }
  int size(const Value& v) const override { return base_->size(v); }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override {
    base_->for_each_slot(v, f);
  }
  void enumerate_size(const std::vector<Value>& e, const std::vector<int>& w, int s, int b,
                      std::vector<Value>& out) const override {
    base_->enumerate_size(e, w, s, b, out);
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override {
    return base_->parse(r, inner);
  }
  bool well_formed(const Value& v) const override { return base_->well_formed(v); }

 private:
  MonadPtr base_ = list_monad();
};

}  // namespace

TEST_CASE("joins on worked examples") {
  CHECK(joined("list", "[[a,b],[c,d,e],[f]]") == "[a,b,c,d,e,f]");
  CHECK(joined("powerset", "{{a,b,c},{b,c},{c,d,e}}") == "{a,b,c,d,e}");
  CHECK(joined("multiset", "{{a:1,b:2}:1,{b:1}:3}") == "{a:1,b:5}");
  CHECK(joined("reader", "((a,b),(c,d))") == "(a,d)");
  CHECK(joined("abgroup", "{{a:1,b:-1}:2,{b:1}:2}") == "{a:2}");
  CHECK(joined("bintree", "<a,<>>") == "a");
  CHECK(joined("bintree", "<<a,b>,@<c,d>>") == "<<a,b>,<c,d>>");
  CHECK(joined("bintree", "<<>,<>>") == "<>");
  CHECK(joined("exception:{e1,e2}", "e1") == "e1");
  CHECK(joined("exception:{e1,e2}", "inl(e2)") == "e2");
  CHECK(joined("exception:{e1,e2}", "a") == "a");
  CHECK(joined("lift", "inl(bot)") == "bot");
}

TEST_CASE("distribution join is an exact weighted average") {
  CHECK(joined("dist", "{{a:1}:1}") == "{a:1}");
  CHECK(joined("dist", "{{a:1}:1/2,{a:1/2,b:1/2}:1/2}") == "{a:3/4,b:1/4}");
  CHECK(joined("dist", "{{a:1/3,b:2/3}:1}") == "{a:1/3,b:2/3}");
  CHECK_THROWS_AS(parse_value(get_monad("dist"), "{a:1/2,b:1/3}"), ValueParseError);
  MonadPtr d = get_monad("dist");
  for (const Value& v : enumerate(MonadStack{d, d}, FinCarrier::of_size(3), 2)) {
    Value j = d->join(v);
    Rational sum = 0;
    for (const auto& w : j.weights) sum += w;
    CHECK(sum == 1);
  }
}

TEST_CASE("text form round-trips") {
  for (const MonadPtr& m : shipped_monads()) {
    MonadStack st{m, m};
    FinCarrier x = FinCarrier::of_size(2, m->reserved_labels());
    for (const Value& v : enumerate(st, x, 2)) {
      CHECK(well_formed(st, v));
      CHECK_MESSAGE(parse_value(st, to_string(v)) == v, m->name() << " " << to_string(v));
    }
  }
  MonadPtr e = get_monad("exception:{a,b}");
  CHECK(parse_value(MonadStack{e, e}, "inl(a)").kind == Kind::Left);
  CHECK(to_string(parse_value(MonadStack{e, e}, "inl(a)")) == "inl(a)");
  CHECK(parse_value(e, "inr(b)") == Value::right("b"));
  CHECK_THROWS_AS(parse_value(get_monad("nelist"), "[]"), ValueParseError);
  CHECK_THROWS_AS(parse_value(get_monad("multiset"), "{a:0}"), ValueParseError);
  CHECK_THROWS_AS(parse_value(get_monad("list"), "[a,b"), ValueParseError);
  CHECK(to_string(parse_value(get_monad("ntree:3"), "<a,<>,<b,<>,c>>")) == "<a,<>,<b,<>,c>>");
  CHECK(to_string(parse_value(get_monad("ntree:3"), "<a,<>,<>>")) == "a");
}

TEST_CASE("enumeration sizes") {
  FinCarrier two = FinCarrier::of_size(2);
  CHECK(enumerate(list_monad(), two, 3).size() == 15);
  CHECK(enumerate(nonempty_list_monad(), two, 3).size() == 14);
  CHECK(enumerate(multiset_monad(), two, 3).size() == 10);
  CHECK(enumerate(powerset_monad(), two, 3).size() == 4);
  CHECK(enumerate(binary_tree_monad(), two, 3).size() == 1 + 2 + 4 + 16);
  CHECK(enumerate(distribution_monad(4), two, 2).size() == 7);
  CHECK(enumerate(reader_monad(2), two, 0).size() == 4);
  CHECK(enumerate(lift_monad(), two, 1).size() == 3);
  CHECK(enumerate(abgroup_monad(), FinCarrier::of_size(1), 2).size() == 5);
  // [], [a], [a,a] inside lists of length <= 2 with total weight <= 3.
  auto ll = enumerate(MonadStack{list_monad(), list_monad()}, FinCarrier::of_size(1), 2);
  CHECK(ll.size() == 7);
  auto ll2 = enumerate(MonadStack{list_monad(), list_monad()}, two, 2);
  std::set<std::string> texts;
  for (const auto& v : ll2) texts.insert(to_string(v));
  CHECK(texts.count("[[b],[]]"));
  CHECK(texts.size() == ll2.size());
  CHECK_THROWS_AS(enumerate(get_monad("exception:{a,b}"), two, 1), std::invalid_argument);
}

TEST_CASE("enumeration is monotone in the bound and duplicate-free") {
  for (const MonadPtr& m : shipped_monads()) {
    FinCarrier x = FinCarrier::of_size(2, m->reserved_labels());
    std::vector<Value> prev;
    for (int b = 0; b <= 3; ++b) {
      std::vector<Value> cur = enumerate(m, x, b);
      REQUIRE(cur.size() >= prev.size());
      for (std::size_t i = 0; i < prev.size(); ++i) CHECK_MESSAGE(cur[i] == prev[i], m->name());
      std::set<Value> uniq(cur.begin(), cur.end());
      CHECK(uniq.size() == cur.size());
      for (const auto& v : cur) CHECK(m->size(v) <= b);
      prev = std::move(cur);
    }
  }
}

TEST_CASE("monad laws hold for shipped monads") {
  for (const MonadPtr& m : shipped_monads()) {
    MonadLawReport r = check_monad_laws(m, FinCarrier::of_size(2, m->reserved_labels()), 2);
    CHECK_MESSAGE(r.ok(), r.describe());
    CHECK(r.checked_ttt > 0);
  }
  MonadLawReport list3 = check_monad_laws(list_monad(), FinCarrier::of_size(2), 3);
  CHECK(list3.ok());
  CHECK(list3.checked_t == 15);
}

TEST_CASE("a broken join is caught") {
  MonadLawReport r = check_monad_laws(std::make_shared<DropLastList>(), FinCarrier::of_size(2), 2);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations.front().law == "unit1");
  CHECK(to_string(r.violations.front().input) == "[a]");
}

TEST_CASE("naturality of unit and join") {
  for (const MonadPtr& m : shipped_monads()) {
    CHECK_MESSAGE(check_monad_naturality(m, 2, 2, 2).empty(), m->name());
    CHECK(check_monad_naturality(m, 3, 1, 1).empty());
  }
}

TEST_CASE("exception join collapses the two copies of E") {
  for (int n = 1; n <= 2; ++n) {
    std::vector<std::string> labels;
    for (int i = 1; i <= n; ++i) labels.push_back("e" + std::to_string(i));
    MonadPtr m = exception_monad(labels);
    for (const auto& l : labels) {
      CHECK(m->join(Value::right(l)) == Value::right(l));
      CHECK(m->join(Value::left(Value::right(l))) == Value::right(l));
    }
  }
}

TEST_CASE("free models match their monads") {
  struct Case {
    const char* theory;
    const char* monad;
    int carrier, depth, bound;
    std::size_t values;
  };
  for (const Case& c : {Case{"monoid", "list", 2, 2, 3, 15}, Case{"jsl", "powerset", 3, 2, 3, 8},
                        Case{"pointed", "lift", 2, 1, 1, 3}, Case{"cmonoid", "multiset", 2, 2, 3, 10},
                        Case{"boom:U---", "bintree", 2, 2, 3, 23}, Case{"reader2", "reader", 2, 1, 0, 4},
                        Case{"abgroup", "abgroup", 1, 2, 2, 5}}) {
    FreeModelReport r = free_model_iso_check(get_theory(c.theory), get_monad(c.monad),
                                             FinCarrier::of_size(c.carrier), c.depth, c.bound);
    CHECK_MESSAGE(r.ok(), c.theory << ": " << r.describe());
    CHECK(r.values == c.values);
    CHECK(r.matched == c.values);
  }
  FreeModelReport jsl = free_model_iso_check(get_theory("jsl"), powerset_monad(), FinCarrier::of_size(3), 2, 3);
  CHECK(jsl.classes == 8);
  FreeModelReport pt = free_model_iso_check(get_theory("pointed"), lift_monad(), FinCarrier::of_size(2), 1, 1);
  CHECK(pt.classes == 3);
  // A theory paired with the wrong monad is rejected.
  FreeModelReport wrong = free_model_iso_check(get_theory("monoid"), multiset_monad(), FinCarrier::of_size(2), 2, 3);
  CHECK_FALSE(wrong.ok());
}
