#include "wb/monads.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wb {

namespace {

thread_local std::size_t enum_limit = SIZE_MAX;

// Every enumerated value passes through here so a limit can stop runaway enumerations.
void emit(std::vector<Value>& out, Value v) {
  if (out.size() >= enum_limit) throw EnumerationLimit(enum_limit);
  out.push_back(std::move(v));
}

int to_int(const Rational& r) { return static_cast<int>(boost::multiprecision::numerator(r)); }

[[noreturn]] void malformed(const std::string& monad, const Value& v) {
  throw std::invalid_argument(monad + ": malformed value " + to_string(v));
}

enum class Order { Any, NonDecreasing, Increasing };

// Index tuples of length s over elems, lexicographic, with weight pruning.
void index_tuples(const std::vector<int>& weights, int s, Order order, int budget,
                  const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> cur;
  int n = static_cast<int>(weights.size());
  std::function<void(int, int)> go = [&](int start, int left) {
    if (static_cast<int>(cur.size()) == s) {
      f(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      if (weights[i] > left) continue;
      cur.push_back(i);
      int next = order == Order::Any ? 0 : order == Order::NonDecreasing ? i : i + 1;
      go(next, left - weights[i]);
      cur.pop_back();
    }
  };
  go(0, budget);
}

std::vector<Value> parse_items(ValueReader& r, char close, const std::function<Value(ValueReader&)>& inner,
                               std::vector<Rational>* weights) {
  std::vector<Value> items;
  if (r.peek() == close) {
    r.expect(close);
    return items;
  }
  for (;;) {
    items.push_back(inner(r));
    if (weights) {
      r.expect(':');
      weights->push_back(r.number());
    }
    if (r.peek() == ',') {
      r.expect(',');
      continue;
    }
    r.expect(close);
    return items;
  }
}

bool strictly_sorted(const std::vector<Value>& items) {
  for (std::size_t i = 1; i < items.size(); ++i)
    if (!(items[i - 1] < items[i])) return false;
  return true;
}

// ---------------------------------------------------------------- lists

class ListMonad : public Monad {
 public:
  explicit ListMonad(bool nonempty) : nonempty_(nonempty) {}
  std::string name() const override { return nonempty_ ? "nelist" : "list"; }
  Value unit(const Value& x) const override { return Value::seq({x}); }
  Value map(const ValueFn& f, const Value& v) const override {
    if (v.kind != Kind::Seq) malformed(name(), v);
    std::vector<Value> out;
    for (const auto& x : v.items) out.push_back(f(x));
    return Value::seq(std::move(out));
  }
  Value join(const Value& vv) const override {
    if (vv.kind != Kind::Seq) malformed(name(), vv);
    std::vector<Value> out;
    for (const auto& inner : vv.items) {
      if (inner.kind != Kind::Seq) malformed(name(), vv);
      out.insert(out.end(), inner.items.begin(), inner.items.end());
    }
    return Value::seq(std::move(out));
  }
  int size(const Value& v) const override { return static_cast<int>(v.items.size()); }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override {
    for (const auto& x : v.items) f(x, 1);
  }
  void enumerate_size(const std::vector<Value>& elems, const std::vector<int>& weights, int s, int budget,
                      std::vector<Value>& out) const override {
    if (nonempty_ && s == 0) return;
    index_tuples(weights, s, Order::Any, budget, [&](const std::vector<int>& idx) {
      std::vector<Value> items;
      for (int i : idx) items.push_back(elems[i]);
      emit(out, Value::seq(std::move(items)));
    });
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override {
    r.expect('[');
    Value v = Value::seq(parse_items(r, ']', inner, nullptr));
    if (nonempty_ && v.items.empty()) r.fail("nonempty list expected");
    return v;
  }
  bool well_formed(const Value& v) const override {
    return v.kind == Kind::Seq && !(nonempty_ && v.items.empty());
  }

 private:
  bool nonempty_;
};

// ---------------------------------------------------------------- sets

class PowersetMonad : public Monad {
 public:
  std::string name() const override { return "powerset"; }
  Value unit(const Value& x) const override { return Value::set({x}); }
  Value map(const ValueFn& f, const Value& v) const override {
    if (v.kind != Kind::Set) malformed(name(), v);
    std::vector<Value> out;
    for (const auto& x : v.items) out.push_back(f(x));
    return Value::set(std::move(out));
  }
  Value join(const Value& vv) const override {
    if (vv.kind != Kind::Set) malformed(name(), vv);
    std::vector<Value> out;
    for (const auto& inner : vv.items) {
      if (inner.kind != Kind::Set) malformed(name(), vv);
      out.insert(out.end(), inner.items.begin(), inner.items.end());
    }
    return Value::set(std::move(out));
  }
  int size(const Value& v) const override { return static_cast<int>(v.items.size()); }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override {
    for (const auto& x : v.items) f(x, 1);
  }
  void enumerate_size(const std::vector<Value>& elems, const std::vector<int>& weights, int s, int budget,
                      std::vector<Value>& out) const override {
    index_tuples(weights, s, Order::Increasing, budget, [&](const std::vector<int>& idx) {
      std::vector<Value> items;
      for (int i : idx) items.push_back(elems[i]);
      emit(out, Value::set(std::move(items)));
    });
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override {
    r.expect('{');
    return Value::set(parse_items(r, '}', inner, nullptr));
  }
  bool well_formed(const Value& v) const override { return v.kind == Kind::Set && strictly_sorted(v.items); }
};

// ---------------------------------------------------------------- bags

class BagMonad : public Monad {
 public:
  explicit BagMonad(bool is_signed) : signed_(is_signed) {}
  std::string name() const override { return signed_ ? "abgroup" : "multiset"; }
  Value unit(const Value& x) const override { return Value::bag({x}, {Rational(1)}); }
  Value map(const ValueFn& f, const Value& v) const override {
    if (v.kind != Kind::Bag) malformed(name(), v);
    std::vector<Value> out;
    for (const auto& x : v.items) out.push_back(f(x));
    return Value::bag(std::move(out), v.weights);
  }
  Value join(const Value& vv) const override {
    if (vv.kind != Kind::Bag) malformed(name(), vv);
    std::vector<Value> items;
    std::vector<Rational> weights;
    for (std::size_t i = 0; i < vv.items.size(); ++i) {
      const Value& inner = vv.items[i];
      if (inner.kind != Kind::Bag) malformed(name(), vv);
      for (std::size_t j = 0; j < inner.items.size(); ++j) {
        items.push_back(inner.items[j]);
        weights.push_back(vv.weights[i] * inner.weights[j]);
      }
    }
    return Value::bag(std::move(items), std::move(weights));
  }
  int size(const Value& v) const override {
    int n = 0;
    for (const auto& w : v.weights) n += std::abs(to_int(w));
    return n;
  }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override {
    for (std::size_t i = 0; i < v.items.size(); ++i) f(v.items[i], std::abs(to_int(v.weights[i])));
  }
  void enumerate_size(const std::vector<Value>& elems, const std::vector<int>& weights, int s, int budget,
                      std::vector<Value>& out) const override {
    index_tuples(weights, s, Order::NonDecreasing, budget, [&](const std::vector<int>& idx) {
      std::vector<int> distinct;
      std::vector<int> counts;
      for (int i : idx) {
        if (!distinct.empty() && distinct.back() == i) {
          ++counts.back();
        } else {
          distinct.push_back(i);
          counts.push_back(1);
        }
      }
      std::size_t signs = signed_ ? (std::size_t{1} << distinct.size()) : 1;
      for (std::size_t mask = 0; mask < signs; ++mask) {
        std::vector<Value> items;
        std::vector<Rational> ws;
        for (std::size_t k = 0; k < distinct.size(); ++k) {
          items.push_back(elems[distinct[k]]);
          ws.push_back(Rational((mask >> k) & 1 ? -counts[k] : counts[k]));
        }
        emit(out, Value::bag(std::move(items), std::move(ws)));
      }
    });
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override {
    r.expect('{');
    std::vector<Rational> ws;
    std::vector<Value> items = parse_items(r, '}', inner, &ws);
    for (const auto& w : ws) {
      if (boost::multiprecision::denominator(w) != 1) r.fail("integer multiplicity expected");
      if (signed_ ? w == 0 : w <= 0) r.fail(signed_ ? "nonzero coefficient expected" : "positive multiplicity expected");
    }
    return Value::bag(std::move(items), std::move(ws));
  }
  bool well_formed(const Value& v) const override {
    if (v.kind != Kind::Bag || v.items.size() != v.weights.size() || !strictly_sorted(v.items)) return false;
    for (const auto& w : v.weights)
      if (boost::multiprecision::denominator(w) != 1 || w == 0 || (!signed_ && w < 0)) return false;
    return true;
  }

 private:
  bool signed_;
};

// ---------------------------------------------------------------- distributions

class DistMonad : public Monad {
 public:
  explicit DistMonad(int max_den) : max_den_(max_den) {
    std::set<Rational> fr;
    for (int q = 1; q <= max_den_; ++q)
      for (int p = 1; p <= q; ++p) fr.insert(Rational(p, q));
    fractions_.assign(fr.begin(), fr.end());
  }
  std::string name() const override { return max_den_ == 4 ? "dist" : "dist:" + std::to_string(max_den_); }
  Value unit(const Value& x) const override { return Value::dist({x}, {Rational(1)}); }
  Value map(const ValueFn& f, const Value& v) const override {
    if (v.kind != Kind::Dist) malformed(name(), v);
    std::vector<Value> out;
    for (const auto& x : v.items) out.push_back(f(x));
    return Value::dist(std::move(out), v.weights);
  }
  Value join(const Value& vv) const override {
    if (!normalized(vv)) malformed(name(), vv);
    std::vector<Value> items;
    std::vector<Rational> weights;
    for (std::size_t i = 0; i < vv.items.size(); ++i) {
      const Value& inner = vv.items[i];
      if (!normalized(inner)) malformed(name(), vv);
      for (std::size_t j = 0; j < inner.items.size(); ++j) {
        items.push_back(inner.items[j]);
        weights.push_back(vv.weights[i] * inner.weights[j]);
      }
    }
    return Value::dist(std::move(items), std::move(weights));
  }
  int size(const Value& v) const override { return static_cast<int>(v.items.size()); }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override {
    for (const auto& x : v.items) f(x, 1);
  }
  void enumerate_size(const std::vector<Value>& elems, const std::vector<int>& weights, int s, int budget,
                      std::vector<Value>& out) const override {
    if (s == 0) return;
    const auto& splits = weight_splits(s);
    index_tuples(weights, s, Order::Increasing, budget, [&](const std::vector<int>& idx) {
      for (const auto& split : splits) {
        std::vector<Value> items;
        for (int i : idx) items.push_back(elems[i]);
        emit(out, Value::dist(std::move(items), split));
      }
    });
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override {
    r.expect('{');
    std::vector<Rational> ws;
    std::vector<Value> items = parse_items(r, '}', inner, &ws);
    Rational sum = 0;
    for (const auto& w : ws) {
      if (w <= 0) r.fail("positive probability expected");
      sum += w;
    }
    if (sum != 1) r.fail("probabilities sum to " + to_string(sum) + ", not 1");
    return Value::dist(std::move(items), std::move(ws));
  }
  bool well_formed(const Value& v) const override { return normalized(v) && strictly_sorted(v.items); }

 private:
  static bool normalized(const Value& v) {
    if (v.kind != Kind::Dist || v.items.size() != v.weights.size() || v.items.empty()) return false;
    Rational sum = 0;
    for (const auto& w : v.weights) {
      if (w <= 0) return false;
      sum += w;
    }
    return sum == 1;
  }

  // Ordered tuples of s allowed fractions summing to 1.
  const std::vector<std::vector<Rational>>& weight_splits(int s) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = splits_.find(s);
    if (it != splits_.end()) return it->second;
    std::vector<std::vector<Rational>> res;
    std::vector<Rational> cur;
    std::function<void(Rational)> go = [&](Rational left) {
      if (static_cast<int>(cur.size()) == s) {
        if (left == 0) res.push_back(cur);
        return;
      }
      for (const auto& f : fractions_) {
        if (f > left) break;
        cur.push_back(f);
        go(left - f);
        cur.pop_back();
      }
    };
    go(Rational(1));
    return splits_.emplace(s, std::move(res)).first->second;
  }

  int max_den_;
  std::vector<Rational> fractions_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<std::vector<Rational>>> splits_;
};

// ---------------------------------------------------------------- trees

// Leaf-labelled n-ary trees with an empty tree e and the unit equations
// phi(.., e, x, e, ..) = x, kept pruned: every node has at least two
// nonempty children.
class TreeMonad : public Monad {
 public:
  TreeMonad(int n, std::string name) : n_(n), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  Value unit(const Value& x) const override { return Value::leaf(x); }
  Value map(const ValueFn& f, const Value& v) const override {
    switch (v.kind) {
      case Kind::Nil: return v;
      case Kind::Leaf: return Value::leaf(f(v.items[0]));
      case Kind::Node: {
        std::vector<Value> cs;
        for (const auto& c : v.items) cs.push_back(map(f, c));
        return Value::node(std::move(cs));
      }
      default: malformed(name_, v);
    }
  }
  Value join(const Value& vv) const override {
    switch (vv.kind) {
      case Kind::Nil: return vv;
      case Kind::Leaf: {
        const Value& t = vv.items[0];
        if (t.kind != Kind::Nil && t.kind != Kind::Leaf && t.kind != Kind::Node) malformed(name_, vv);
        return t;
      }
      case Kind::Node: {
        std::vector<Value> cs;
        for (const auto& c : vv.items) cs.push_back(join(c));
        return prune(std::move(cs));
      }
      default: malformed(name_, vv);
    }
  }
  int size(const Value& v) const override {
    if (v.kind == Kind::Leaf) return 1;
    int n = 0;
    for (const auto& c : v.items) n += size(c);
    return n;
  }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override {
    if (v.kind == Kind::Leaf) {
      f(v.items[0], 1);
      return;
    }
    if (v.kind == Kind::Node)
      for (const auto& c : v.items) for_each_slot(c, f);
  }
  void enumerate_size(const std::vector<Value>& elems, const std::vector<int>& weights, int s, int budget,
                      std::vector<Value>& out) const override {
    std::vector<std::vector<std::pair<Value, int>>> memo(s + 1);
    for (int k = 0; k <= s; ++k) memo[k] = trees(elems, weights, k, budget, memo);
    for (auto& [t, w] : memo[s]) emit(out, std::move(t));
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override {
    if (r.try_consume("<>")) return Value::nil();
    if (r.peek() == '<') {
      r.expect('<');
      std::vector<Value> cs;
      for (;;) {
        cs.push_back(parse(r, inner));
        if (r.peek() == ',') {
          r.expect(',');
          continue;
        }
        r.expect('>');
        break;
      }
      if (static_cast<int>(cs.size()) != n_) r.fail("node with " + std::to_string(n_) + " children expected");
      return prune(std::move(cs));
    }
    r.try_consume("@");
    return Value::leaf(inner(r));
  }
  bool well_formed(const Value& v) const override {
    switch (v.kind) {
      case Kind::Nil: return true;
      case Kind::Leaf: return v.items.size() == 1;
      case Kind::Node: {
        if (static_cast<int>(v.items.size()) != n_) return false;
        int nonempty = 0;
        for (const auto& c : v.items) {
          if (!well_formed(c)) return false;
          nonempty += c.kind != Kind::Nil;
        }
        return nonempty >= 2;
      }
      default: return false;
    }
  }

 private:
  static Value prune(std::vector<Value> cs) {
    int nonempty = 0;
    const Value* only = nullptr;
    for (const auto& c : cs)
      if (c.kind != Kind::Nil) {
        ++nonempty;
        only = &c;
      }
    if (nonempty == 0) return Value::nil();
    if (nonempty == 1) return *only;
    return Value::node(std::move(cs));
  }

  // Pruned trees with exactly s leaves and slot weight <= budget.
  std::vector<std::pair<Value, int>> trees(const std::vector<Value>& elems, const std::vector<int>& weights, int s,
                                           int budget,
                                           const std::vector<std::vector<std::pair<Value, int>>>& memo) const {
    std::vector<std::pair<Value, int>> res;
    if (s == 0) {
      res.emplace_back(Value::nil(), 0);
      return res;
    }
    if (s == 1) {
      for (std::size_t i = 0; i < elems.size(); ++i)
        if (weights[i] <= budget) res.emplace_back(Value::leaf(elems[i]), weights[i]);
      return res;
    }
    std::vector<int> parts(n_, 0);
    std::vector<Value> cs(n_);
    std::function<void(int, int)> fill = [&](int i, int left) {
      if (i == n_) {
        if (res.size() >= enum_limit) throw EnumerationLimit(enum_limit);
        std::vector<Value> copy = cs;
        res.emplace_back(Value::node(std::move(copy)), budget - left);
        return;
      }
      for (const auto& [t, w] : memo[parts[i]]) {
        if (w > left) continue;
        cs[i] = t;
        fill(i + 1, left - w);
      }
    };
    std::function<void(int, int)> split = [&](int i, int left) {
      if (i == n_ - 1) {
        parts[i] = left;
        int nonempty = 0;
        for (int p : parts) nonempty += p > 0;
        if (nonempty >= 2) fill(0, budget);
        return;
      }
      for (int p = 0; p <= left; ++p) {
        parts[i] = p;
        split(i + 1, left - p);
      }
    };
    split(0, s);
    return res;
  }

  int n_;
  std::string name_;
};

// ---------------------------------------------------------------- exceptions

class ExceptionMonad : public Monad {
 public:
  // An empty label list with lift = true gives X + {bot}.
  ExceptionMonad(std::vector<std::string> labels, bool lift) : labels_(std::move(labels)), lift_(lift) {}
  std::string name() const override {
    if (lift_) return "lift";
    std::string s = "exception:{";
    for (std::size_t i = 0; i < labels_.size(); ++i) s += (i ? "," : "") + labels_[i];
    return s + "}";
  }
  Value unit(const Value& x) const override { return Value::left(x); }
  Value map(const ValueFn& f, const Value& v) const override {
    if (v.kind == Kind::Left) return Value::left(f(v.items[0]));
    if (v.kind == Kind::Right || v.kind == Kind::Bottom) return v;
    malformed(name(), v);
  }
  Value join(const Value& vv) const override {
    if (vv.kind == Kind::Left) {
      const Value& inner = vv.items[0];
      if (inner.kind != Kind::Left && inner.kind != Kind::Right && inner.kind != Kind::Bottom) malformed(name(), vv);
      return inner;
    }
    if (vv.kind == Kind::Right || vv.kind == Kind::Bottom) return vv;
    malformed(name(), vv);
  }
  int size(const Value& v) const override { return v.kind == Kind::Left ? 1 : 0; }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override {
    if (v.kind == Kind::Left) f(v.items[0], 1);
  }
  void enumerate_size(const std::vector<Value>& elems, const std::vector<int>& weights, int s, int budget,
                      std::vector<Value>& out) const override {
    if (s == 0) {
      if (lift_) emit(out, Value::bottom());
      for (const auto& l : labels_) emit(out, Value::right(l));
    } else if (s == 1) {
      for (std::size_t i = 0; i < elems.size(); ++i)
        if (weights[i] <= budget) emit(out, Value::left(elems[i]));
    }
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override {
    if (r.try_consume("inl(")) {
      Value v = Value::left(inner(r));
      r.expect(')');
      return v;
    }
    if (!lift_ && r.try_consume("inr(")) {
      std::string l = r.identifier();
      if (!is_label(l)) r.fail("'" + l + "' is not an exception label of " + name());
      r.expect(')');
      return Value::right(l);
    }
    std::string id = r.peek_identifier();
    if (lift_ && id == "bot") {
      r.identifier();
      return Value::bottom();
    }
    if (!lift_ && is_label(id)) {
      r.identifier();
      return Value::right(id);
    }
    return Value::left(inner(r));
  }
  bool well_formed(const Value& v) const override {
    if (v.kind == Kind::Left) return v.items.size() == 1;
    if (v.kind == Kind::Right) return !lift_ && is_label(v.label);
    return v.kind == Kind::Bottom && lift_;
  }
  std::vector<std::string> reserved_labels() const override {
    return lift_ ? std::vector<std::string>{"bot"} : labels_;
  }

 private:
  bool is_label(const std::string& l) const { return std::find(labels_.begin(), labels_.end(), l) != labels_.end(); }

  std::vector<std::string> labels_;
  bool lift_;
};

// ---------------------------------------------------------------- reader

class ReaderMonad : public Monad {
 public:
  explicit ReaderMonad(int states) : states_(states) {}
  std::string name() const override { return states_ == 2 ? "reader" : "reader:" + std::to_string(states_); }
  Value unit(const Value& x) const override { return Value::tuple(std::vector<Value>(states_, x)); }
  Value map(const ValueFn& f, const Value& v) const override {
    if (!well_formed(v)) malformed(name(), v);
    std::vector<Value> out;
    for (const auto& x : v.items) out.push_back(f(x));
    return Value::tuple(std::move(out));
  }
  // mu(f)(r) = f(r)(r)
  Value join(const Value& vv) const override {
    if (!well_formed(vv)) malformed(name(), vv);
    std::vector<Value> out;
    for (int r = 0; r < states_; ++r) {
      if (!well_formed(vv.items[r])) malformed(name(), vv);
      out.push_back(vv.items[r].items[r]);
    }
    return Value::tuple(std::move(out));
  }
  // A reader value is a function, not a container; it has no size of its own.
  int size(const Value&) const override { return 0; }
  void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const override {
    for (const auto& x : v.items) f(x, 1);
  }
  void enumerate_size(const std::vector<Value>& elems, const std::vector<int>& weights, int s, int budget,
                      std::vector<Value>& out) const override {
    if (s != 0) return;
    index_tuples(weights, states_, Order::Any, budget, [&](const std::vector<int>& idx) {
      std::vector<Value> items;
      for (int i : idx) items.push_back(elems[i]);
      emit(out, Value::tuple(std::move(items)));
    });
  }
  Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const override {
    r.expect('(');
    std::vector<Value> items = parse_items(r, ')', inner, nullptr);
    if (static_cast<int>(items.size()) != states_) r.fail(std::to_string(states_) + " components expected");
    return Value::tuple(std::move(items));
  }
  bool well_formed(const Value& v) const override {
    return v.kind == Kind::Tuple && static_cast<int>(v.items.size()) == states_;
  }

 private:
  int states_;
};

// ---------------------------------------------------------------- stacks

struct Weighted {
  std::vector<Value> values;
  std::vector<int> weights;
};

Weighted enumerate_weighted(const MonadStack& stack, std::size_t layer, const std::vector<Value>& atoms, int bound,
                            int budget) {
  Weighted res;
  if (layer == stack.size()) {
    res.values = atoms;
    res.weights.assign(atoms.size(), 0);
    return res;
  }
  Weighted inner = enumerate_weighted(stack, layer + 1, atoms, bound, budget);
  MonadStack rest(stack.begin() + static_cast<std::ptrdiff_t>(layer), stack.end());
  for (int s = 0; s <= bound && s <= budget; ++s) {
    std::size_t from = res.values.size();
    stack[layer]->enumerate_size(inner.values, inner.weights, s, budget - s, res.values);
    for (std::size_t i = from; i < res.values.size(); ++i) res.weights.push_back(weight(rest, res.values[i]));
  }
  return res;
}

void check_disjoint(const MonadStack& stack, const FinCarrier& x) {
  for (const auto& m : stack)
    for (const auto& l : m->reserved_labels())
      if (std::find(x.labels.begin(), x.labels.end(), l) != x.labels.end())
        throw std::invalid_argument("carrier label '" + l + "' clashes with " + m->name());
}

std::vector<std::string> split_labels(std::string_view body) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : body) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::optional<int> parse_suffix(std::string_view id, std::string_view prefix) {
  if (id.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string rest(id.substr(prefix.size()));
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(), ::isdigit) || rest.size() > 3) return std::nullopt;
  return std::stoi(rest);
}

}  // namespace

FinCarrier FinCarrier::of_size(int n, const std::vector<std::string>& avoid) {
  FinCarrier x;
  for (int i = 0; static_cast<int>(x.labels.size()) < n; ++i) {
    std::string l = i < 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i);
    if (std::find(avoid.begin(), avoid.end(), l) == avoid.end()) x.labels.push_back(l);
  }
  return x;
}

std::vector<Value> FinCarrier::atoms() const {
  std::vector<Value> out;
  for (const auto& l : labels) out.push_back(Value::atom(l));
  return out;
}

MonadPtr list_monad() { return std::make_shared<ListMonad>(false); }
MonadPtr nonempty_list_monad() { return std::make_shared<ListMonad>(true); }
MonadPtr multiset_monad() { return std::make_shared<BagMonad>(false); }
MonadPtr abgroup_monad() { return std::make_shared<BagMonad>(true); }
MonadPtr powerset_monad() { return std::make_shared<PowersetMonad>(); }
MonadPtr binary_tree_monad() { return std::make_shared<TreeMonad>(2, "bintree"); }
MonadPtr nary_tree_monad(int n) {
  if (n < 2) throw std::invalid_argument("ntree: arity must be at least 2");
  return std::make_shared<TreeMonad>(n, "ntree:" + std::to_string(n));
}
MonadPtr exception_monad(std::vector<std::string> labels) {
  return std::make_shared<ExceptionMonad>(std::move(labels), false);
}
MonadPtr lift_monad() { return std::make_shared<ExceptionMonad>(std::vector<std::string>{}, true); }
MonadPtr reader_monad(int states) {
  if (states < 1) throw std::invalid_argument("reader: at least one state");
  return std::make_shared<ReaderMonad>(states);
}
MonadPtr distribution_monad(int max_denominator) {
  if (max_denominator < 1) throw std::invalid_argument("dist: denominator bound must be positive");
  return std::make_shared<DistMonad>(max_denominator);
}

std::vector<std::string> monad_ids() {
  return {"list", "nelist", "multiset", "powerset", "bintree", "ntree:3", "exception:{e1,e2}", "lift",
          "reader", "dist", "abgroup"};
}

std::vector<MonadPtr> shipped_monads() {
  std::vector<MonadPtr> out;
  for (const auto& id : monad_ids()) out.push_back(get_monad(id));
  return out;
}

MonadPtr find_monad(std::string_view id) {
  if (id == "list" || id == "L") return list_monad();
  if (id == "nelist" || id == "L+") return nonempty_list_monad();
  if (id == "multiset" || id == "M") return multiset_monad();
  if (id == "powerset" || id == "P") return powerset_monad();
  if (id == "bintree" || id == "tree") return binary_tree_monad();
  if (id == "ntree") return nary_tree_monad(3);
  if (auto n = parse_suffix(id, "ntree:"); n && *n >= 2) return nary_tree_monad(*n);
  if (id == "exception") return exception_monad({"e1", "e2"});
  if (id.substr(0, 11) == "exception:{" && id.back() == '}') {
    auto labels = split_labels(id.substr(11, id.size() - 12));
    if (labels.empty()) return nullptr;
    return exception_monad(labels);
  }
  if (id == "lift") return lift_monad();
  if (id == "reader") return reader_monad(2);
  if (auto n = parse_suffix(id, "reader:"); n && *n >= 1) return reader_monad(*n);
  if (id == "dist" || id == "D") return distribution_monad(4);
  if (auto n = parse_suffix(id, "dist:"); n && *n >= 1) return distribution_monad(*n);
  if (id == "abgroup" || id == "A") return abgroup_monad();
  return nullptr;
}

MonadPtr get_monad(std::string_view id) {
  if (MonadPtr m = find_monad(id)) return m;
  std::string msg = "unknown monad '" + std::string(id) + "'; known:";
  for (const auto& k : monad_ids()) msg += " " + k;
  msg += " (also ntree:N, dist:N, reader:N, exception:{..})";
  throw std::invalid_argument(msg);
}

int weight(const MonadStack& stack, const Value& v) {
  if (stack.empty()) return 0;
  MonadStack rest(stack.begin() + 1, stack.end());
  int w = stack[0]->size(v);
  stack[0]->for_each_slot(v, [&](const Value& x, int mult) { w += mult * weight(rest, x); });
  return w;
}

std::vector<Value> enumerate(const MonadStack& stack, const FinCarrier& x, int bound, int extra) {
  check_disjoint(stack, x);
  int budget = bound + static_cast<int>(stack.size()) - 1 + extra;
  return enumerate_weighted(stack, 0, x.atoms(), bound, budget).values;
}

std::vector<Value> enumerate_limited(const MonadStack& stack, const FinCarrier& x, int bound, int extra,
                                     std::size_t limit) {
  std::size_t saved = enum_limit;
  enum_limit = limit;
  try {
    std::vector<Value> out = enumerate(stack, x, bound, extra);
    enum_limit = saved;
    if (out.size() > limit) throw EnumerationLimit(limit);
    return out;
  } catch (...) {
    enum_limit = saved;
    throw;
  }
}

std::vector<Value> enumerate(const MonadPtr& m, const FinCarrier& x, int bound) {
  return enumerate(MonadStack{m}, x, bound);
}

Value map_at(const MonadStack& stack, std::size_t layer, const ValueFn& f, const Value& v) {
  if (layer == 0) return f(v);
  if (stack.empty()) throw std::invalid_argument("map_at: layer deeper than the stack");
  MonadStack rest(stack.begin() + 1, stack.end());
  return stack[0]->map([&](const Value& x) { return map_at(rest, layer - 1, f, x); }, v);
}

Value parse_value(const MonadStack& stack, std::string_view text) {
  ValueReader r(text);
  std::function<Value(ValueReader&, std::size_t)> layer = [&](ValueReader& rd, std::size_t i) -> Value {
    if (i == stack.size()) return Value::atom(rd.identifier());
    return stack[i]->parse(rd, [&](ValueReader& inner) { return layer(inner, i + 1); });
  };
  Value v = layer(r, 0);
  if (!r.at_end()) r.fail("unexpected trailing text");
  return v;
}

Value parse_value(const MonadPtr& m, std::string_view text) { return parse_value(MonadStack{m}, text); }

bool well_formed(const MonadStack& stack, const Value& v) {
  if (stack.empty()) return v.kind == Kind::Atom;
  if (!stack[0]->well_formed(v)) return false;
  MonadStack rest(stack.begin() + 1, stack.end());
  bool ok = true;
  stack[0]->for_each_slot(v, [&](const Value& x, int) { ok = ok && well_formed(rest, x); });
  return ok;
}

std::string MonadLawReport::describe() const {
  std::ostringstream os;
  os << monad << " |X|=" << carrier << " bound " << bound;
  if (extra) os << "+" << extra;
  os << ": " << checked_t << " T-values, " << checked_ttt
     << " TTT-values, " << violations.size() << " violations";
  for (std::size_t i = 0; i < violations.size() && i < 5; ++i) {
    const auto& v = violations[i];
    os << "\n  " << v.law << " at " << to_string(v.input) << ": " << to_string(v.lhs) << " != " << to_string(v.rhs);
  }
  return os.str();
}

MonadLawReport check_monad_laws(const MonadPtr& m, const FinCarrier& x, int bound, int extra) {
  MonadLawReport rep;
  rep.extra = extra;
  rep.monad = m->name();
  rep.carrier = static_cast<int>(x.labels.size());
  rep.bound = bound;
  auto unit = [&](const Value& v) { return m->unit(v); };
  auto join = [&](const Value& v) { return m->join(v); };
  for (const Value& t : enumerate(m, x, bound)) {
    ++rep.checked_t;
    Value u1 = m->join(m->map(unit, t));
    if (u1 != t) rep.violations.push_back({"unit1", t, u1, t});
    Value u2 = m->join(m->unit(t));
    if (u2 != t) rep.violations.push_back({"unit2", t, u2, t});
  }
  for (const Value& ttt : enumerate(MonadStack{m, m, m}, x, bound, extra)) {
    ++rep.checked_ttt;
    Value l = m->join(m->map(join, ttt));
    Value r = m->join(m->join(ttt));
    if (l != r) rep.violations.push_back({"assoc", ttt, l, r});
  }
  return rep;
}

std::vector<LawViolation> check_monad_naturality(const MonadPtr& m, int from_size, int to_size, int bound) {
  std::vector<LawViolation> out;
  FinCarrier x = FinCarrier::of_size(from_size, m->reserved_labels());
  FinCarrier y = FinCarrier::of_size(to_size, m->reserved_labels());
  std::vector<Value> tt = enumerate(MonadStack{m, m}, x, bound);
  std::vector<int> img(from_size, 0);
  for (;;) {
    auto f = [&](const Value& a) {
      auto it = std::find(x.labels.begin(), x.labels.end(), a.label);
      return Value::atom(y.labels[img[it - x.labels.begin()]]);
    };
    for (const auto& a : x.atoms()) {
      Value l = m->map(f, m->unit(a)), r = m->unit(f(a));
      if (l != r) out.push_back({"naturality", a, l, r});
    }
    for (const auto& v : tt) {
      Value l = m->map(f, m->join(v));
      Value r = m->join(m->map([&](const Value& inner) { return m->map(f, inner); }, v));
      if (l != r) out.push_back({"naturality", v, l, r});
    }
    int i = 0;
    while (i < from_size && ++img[i] == to_size) img[i++] = 0;
    if (i == from_size) break;
  }
  return out;
}

const std::vector<FreeModelPair>& free_model_pairs() {
  static const std::vector<FreeModelPair> pairs = {
      {"monoid", "list", {{"e", "[]"}, {"mul", "[x1,x2]"}}},
      {"boom:-A--", "nelist", {{"mul", "[x1,x2]"}}},
      {"cmonoid", "multiset", {{"e", "{}"}, {"mul", "{x1:1,x2:1}"}}},
      {"jsl", "powerset", {{"e", "{}"}, {"mul", "{x1,x2}"}}},
      {"boom:U---", "bintree", {{"e", "<>"}, {"mul", "<x1,x2>"}}},
      {"tree3", "ntree:3", {{"e", "<>"}, {"phi", "<x1,x2,x3>"}}},
      {"pointed", "lift", {{"c", "bot"}}},
      {"exception:{a,b}", "exception:{a,b}", {{"a", "a"}, {"b", "b"}}},
      {"reader2", "reader", {{"get", "(x1,x2)"}}},
      {"abgroup", "abgroup", {{"e", "{}"}, {"mul", "{x1:1,x2:1}"}, {"inv", "{x1:-1}"}}},
  };
  return pairs;
}

std::optional<Value> generic_operation(const MonadPtr& m, const std::string& op, const std::vector<Value>& args) {
  for (const auto& p : free_model_pairs()) {
    if (get_monad(p.monad)->name() != m->name()) continue;
    for (const auto& [name, text] : p.generic_ops) {
      if (name != op) continue;
      return m->map([&](const Value& xi) { return args.at(std::stoul(xi.label.substr(1)) - 1); },
                    parse_value(m, text));
    }
  }
  return std::nullopt;
}

std::string FreeModelReport::describe() const {
  std::ostringstream os;
  os << terms << " terms, " << classes << " classes, " << values << " monad values, " << matched << " matched, "
     << substitutions << " substitutions, " << mismatches.size() << " mismatches";
  for (std::size_t i = 0; i < mismatches.size() && i < 5; ++i) os << "\n  " << mismatches[i];
  return os.str();
}

FreeModelReport free_model_iso_check(const TheoryEntry& e, const MonadPtr& m, const FinCarrier& x, int depth,
                                     int bound) {
  FreeModelReport rep;
  const FreeModelPair* pair = nullptr;
  for (const auto& p : free_model_pairs())
    if (get_theory(p.theory).id == e.id && get_monad(p.monad)->name() == m->name()) pair = &p;
  if (!pair) {
    rep.mismatches.push_back("no operation interpretation known for " + e.id + " in " + m->name());
    return rep;
  }
  if (!e.decides()) {
    rep.mismatches.push_back(e.id + " has no decision procedure");
    return rep;
  }
  check_disjoint({m}, x);

  std::map<std::string, Value> generic;
  for (const auto& [op, text] : pair->generic_ops) generic.emplace(op, parse_value(m, text));

  std::function<Value(const TermPtr&, const std::map<std::string, Value>&)> interpret =
      [&](const TermPtr& t, const std::map<std::string, Value>& env) -> Value {
    if (t->is_var()) return env.at(t->name());
    std::vector<Value> args;
    for (const auto& a : t->args()) args.push_back(interpret(a, env));
    return m->join(m->map([&](const Value& xi) { return args.at(std::stoul(xi.label.substr(1)) - 1); },
                          generic.at(t->name())));
  };

  int k = static_cast<int>(x.labels.size());
  std::map<std::string, Value> env;
  for (int i = 0; i < k; ++i) env.emplace(canonical_var(i + 1), m->unit(Value::atom(x.labels[i])));

  Census census(e, depth, k);
  rep.terms = census.size();
  rep.classes = census.classes();
  std::vector<std::optional<Value>> class_value(census.classes());
  for (std::size_t i = 0; i < census.size(); ++i) {
    TermPtr t = census.term(i);
    Value v = interpret(t, env);
    auto& cv = class_value[census.nf(i)];
    if (!cv) {
      cv = v;
    } else if (*cv != v) {
      rep.mismatches.push_back("equal terms " + to_string(t) + " and " + to_string(census.nf_term(census.nf(i))) +
                               " denote " + to_string(v) + " and " + to_string(*cv));
    }
  }
  std::map<Value, int> by_value;
  for (std::size_t c = 0; c < class_value.size(); ++c) {
    auto [it, fresh] = by_value.emplace(*class_value[c], static_cast<int>(c));
    if (!fresh)
      rep.mismatches.push_back("distinct classes " + to_string(census.nf_term(it->second)) + " and " +
                               to_string(census.nf_term(static_cast<int>(c))) + " both denote " +
                               to_string(it->first));
  }
  std::vector<Value> values = enumerate(m, x, bound);
  rep.values = values.size();
  std::set<Value> listed(values.begin(), values.end());
  for (const auto& v : values) {
    if (by_value.count(v)) {
      ++rep.matched;
    } else {
      rep.mismatches.push_back("value " + to_string(v) + " is not denoted by any term of depth <= " +
                               std::to_string(depth));
    }
  }
  for (const auto& [v, c] : by_value)
    if (m->size(v) <= bound && !listed.count(v))
      rep.mismatches.push_back("enumeration misses " + to_string(v) + " denoted by " + to_string(census.nf_term(c)));

  // Substitution: [[t[s]]] = mu(map(x_i -> [[s(v_i)]])([[t]])).
  std::size_t reps = std::min<std::size_t>(census.classes(), 8);
  std::vector<int> idx(k, 0);
  for (std::size_t c = 0; c < reps; ++c) {
    TermPtr t = census.nf_term(static_cast<int>(c));
    std::fill(idx.begin(), idx.end(), 0);
    for (;;) {
      Substitution sigma;
      std::map<std::string, Value> image;
      for (int i = 0; i < k; ++i) {
        sigma[canonical_var(i + 1)] = census.nf_term(idx[i]);
        image.emplace(x.labels[i], *class_value[idx[i]]);
      }
      Value lhs = interpret(substitute(t, sigma), env);
      Value rhs = m->join(m->map([&](const Value& a) { return image.at(a.label); }, *class_value[c]));
      ++rep.substitutions;
      if (lhs != rhs)
        rep.mismatches.push_back("substitution into " + to_string(t) + " gives " + to_string(lhs) + ", join gives " +
                                 to_string(rhs));
      int i = 0;
      while (i < k && ++idx[i] == static_cast<int>(reps)) idx[i++] = 0;
      if (i == k) break;
    }
  }
  return rep;
}

}  // namespace wb
