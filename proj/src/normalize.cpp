#include "wb/normalize.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace wb {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

TermPtr normalize(const Procedure& proc, const TermPtr& t) {
  if (t->is_var()) return proc.variable(t->name());
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  for (const auto& a : t->args()) args.push_back(normalize(proc, a));
  return proc.apply(t->name(), args);
}

bool decide_eq(const Procedure& proc, const TermPtr& a, const TermPtr& b) {
  return equal(normalize(proc, a), normalize(proc, b));
}

namespace {

[[noreturn]] void unknown_op(const std::string& proc, const std::string& op) {
  throw std::invalid_argument(proc + ": unknown operation '" + op + "'");
}

TermPtr right_comb(const std::string& op, const std::vector<TermPtr>& items, const TermPtr& empty) {
  if (items.empty()) return empty;
  TermPtr acc = items.back();
  for (std::size_t i = items.size() - 1; i-- > 0;) acc = Term::app(op, {items[i], acc});
  return acc;
}

void flatten(const TermPtr& t, const std::string& op, const std::string& unit,
             std::vector<TermPtr>& out) {
  if (!t->is_var() && t->name() == op) {
    for (const auto& a : t->args()) flatten(a, op, unit, out);
  } else if (t->is_var() || t->name() != unit) {
    out.push_back(t);
  }
}

struct BandInvariants {
  std::set<std::string> content;
  std::vector<std::string> prefix, suffix;
  std::string first_missing, last_missing;
};

BandInvariants band_invariants(const std::vector<std::string>& w) {
  BandInvariants inv;
  inv.content.insert(w.begin(), w.end());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < w.size(); ++i) {
    seen.insert(w[i]);
    if (seen.size() == inv.content.size()) {
      inv.prefix.assign(w.begin(), w.begin() + static_cast<long>(i));
      inv.first_missing = w[i];
      break;
    }
  }
  seen.clear();
  for (std::size_t i = w.size(); i-- > 0;) {
    seen.insert(w[i]);
    if (seen.size() == inv.content.size()) {
      inv.suffix.assign(w.begin() + static_cast<long>(i) + 1, w.end());
      inv.last_missing = w[i];
      break;
    }
  }
  return inv;
}

bool same_band_element(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  return band_canonical(a) == band_canonical(b);
}

class BoomProcedure : public Procedure {
 public:
  BoomProcedure(bool unit, bool assoc, bool comm, bool idem)
      : unit_(unit), assoc_(assoc), comm_(comm), idem_(idem) {}

  std::string id() const override {
    std::string s = "boom:";
    s += unit_ ? 'U' : '-';
    s += assoc_ ? 'A' : '-';
    s += comm_ ? 'C' : '-';
    s += idem_ ? 'I' : '-';
    return s;
  }

  TermPtr apply(const std::string& op, const std::vector<TermPtr>& args) const override {
    if (op == "e" && unit_ && args.empty()) return Term::app("e");
    if (op != "mul" || args.size() != 2) unknown_op(id(), op);
    return assoc_ ? apply_assoc(args[0], args[1]) : apply_magma(args[0], args[1]);
  }

 private:
  bool is_unit(const TermPtr& t) const { return unit_ && !t->is_var() && t->name() == "e"; }

  TermPtr apply_magma(TermPtr a, TermPtr b) const {
    if (is_unit(a)) return b;
    if (is_unit(b)) return a;
    if (idem_ && equal(a, b)) return a;
    if (comm_ && less(b, a)) std::swap(a, b);
    return Term::app("mul", {a, b});
  }

  TermPtr apply_assoc(const TermPtr& a, const TermPtr& b) const {
    std::vector<TermPtr> items;
    flatten(a, "mul", "e", items);
    flatten(b, "mul", "e", items);
    if (comm_) {
      std::sort(items.begin(), items.end(), less);
      if (idem_)
        items.erase(std::unique(items.begin(), items.end(),
                                [](const TermPtr& x, const TermPtr& y) { return equal(x, y); }),
                    items.end());
    } else if (idem_) {
      std::vector<std::string> word;
      for (const auto& t : items) word.push_back(t->name());
      word = band_canonical(word);
      items.clear();
      for (const auto& w : word) items.push_back(Term::var(w));
    }
    return right_comb("mul", items, Term::app("e"));
  }

  bool unit_, assoc_, comm_, idem_;
};

class FreeProcedure : public Procedure {
 public:
  std::string id() const override { return "free"; }
  TermPtr apply(const std::string& op, const std::vector<TermPtr>& args) const override {
    return Term::app(op, args);
  }
};

class AbGroupProcedure : public Procedure {
 public:
  std::string id() const override { return "abgroup"; }

  TermPtr apply(const std::string& op, const std::vector<TermPtr>& args) const override {
    std::map<std::string, cpp_int> acc;
    if (op == "e" && args.empty()) {
    } else if (op == "mul" && args.size() == 2) {
      read(args[0], 1, acc);
      read(args[1], 1, acc);
    } else if (op == "inv" && args.size() == 1) {
      read(args[0], -1, acc);
    } else {
      unknown_op(id(), op);
    }
    std::vector<TermPtr> items;
    for (const auto& [v, c] : acc) {
      if (c == 0) continue;
      TermPtr x = Term::var(v);
      TermPtr item = c > 0 ? x : Term::app("inv", {x});
      for (cpp_int k = abs(c); k > 0; --k) items.push_back(item);
    }
    return right_comb("mul", items, Term::app("e"));
  }

 private:
  static void read(const TermPtr& t, int sign, std::map<std::string, cpp_int>& acc) {
    if (t->is_var()) {
      acc[t->name()] += sign;
    } else if (t->name() == "mul") {
      for (const auto& a : t->args()) read(a, sign, acc);
    } else if (t->name() == "inv") {
      read(t->args()[0], -sign, acc);
    }
  }
};

class ConvexProcedure : public Procedure {
 public:
  std::string id() const override { return "convex"; }

  TermPtr apply(const std::string& op, const std::vector<TermPtr>& args) const override {
    if (args.size() != 2 || (op != "mix0" && op != "mixh" && op != "mix1")) unknown_op(id(), op);
    if (op == "mix1") return args[0];
    if (op == "mix0") return args[1];
    std::map<std::string, cpp_rational> d;
    read(args[0], cpp_rational(1, 2), d);
    read(args[1], cpp_rational(1, 2), d);
    return build(d);
  }

  static void read(const TermPtr& t, const cpp_rational& w, std::map<std::string, cpp_rational>& d) {
    if (t->is_var()) {
      d[t->name()] += w;
    } else if (t->name() == "mixh") {
      read(t->args()[0], w / 2, d);
      read(t->args()[1], w / 2, d);
    } else if (t->name() == "mix1") {
      read(t->args()[0], w, d);
    } else if (t->name() == "mix0") {
      read(t->args()[1], w, d);
    }
  }

  // Perfect binary tree over 2^n slots, slots filled in variable order, with
  // equal siblings collapsed.
  static TermPtr build(const std::map<std::string, cpp_rational>& d) {
    cpp_int denom = 1;
    for (const auto& [v, w] : d) denom = std::max(denom, cpp_int(denominator(w)));
    std::vector<TermPtr> level;
    for (const auto& [v, w] : d) {
      cpp_int k = numerator(cpp_rational(w * denom));
      for (; k > 0; --k) level.push_back(Term::var(v));
    }
    while (level.size() > 1) {
      std::vector<TermPtr> next;
      for (std::size_t i = 0; i < level.size(); i += 2) {
        if (equal(level[i], level[i + 1]))
          next.push_back(level[i]);
        else
          next.push_back(Term::app("mixh", {level[i], level[i + 1]}));
      }
      level = std::move(next);
    }
    return level.front();
  }
};

class ReaderProcedure : public Procedure {
 public:
  std::string id() const override { return "reader2"; }

  TermPtr apply(const std::string& op, const std::vector<TermPtr>& args) const override {
    if (op != "get" || args.size() != 2) unknown_op(id(), op);
    TermPtr first = component(args[0], 0), second = component(args[1], 1);
    if (equal(first, second)) return first;
    return Term::app("get", {first, second});
  }

 private:
  static TermPtr component(const TermPtr& t, int i) {
    if (t->is_var()) return t;
    return component(t->args()[i], i);
  }
};

class TernaryTreeProcedure : public Procedure {
 public:
  std::string id() const override { return "tree3"; }

  TermPtr apply(const std::string& op, const std::vector<TermPtr>& args) const override {
    if (op == "e" && args.empty()) return Term::app("e");
    if (op != "phi" || args.size() != 3) unknown_op(id(), op);
    int units = 0;
    const TermPtr* other = nullptr;
    for (const auto& a : args) {
      if (!a->is_var() && a->name() == "e")
        ++units;
      else
        other = &a;
    }
    if (units == 3) return Term::app("e");
    if (units == 2) return *other;
    return Term::app("phi", args);
  }
};

class RingProcedure : public Procedure {
 public:
  using Word = std::vector<std::string>;
  using Poly = std::map<Word, cpp_int>;

  std::string id() const override { return "ring"; }

  TermPtr apply(const std::string& op, const std::vector<TermPtr>& args) const override {
    Poly p;
    if (op == "zero" && args.empty()) {
    } else if (op == "one" && args.empty()) {
      p[{}] = 1;
    } else if (op == "add" && args.size() == 2) {
      p = read(args[0]);
      for (const auto& [w, c] : read(args[1])) p[w] += c;
    } else if (op == "neg" && args.size() == 1) {
      for (const auto& [w, c] : read(args[0])) p[w] -= c;
    } else if (op == "mul" && args.size() == 2) {
      Poly a = read(args[0]), b = read(args[1]);
      for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
          Word w = wa;
          w.insert(w.end(), wb.begin(), wb.end());
          p[w] += ca * cb;
        }
    } else {
      unknown_op(id(), op);
    }
    return build(p);
  }

 private:
  static Poly read(const TermPtr& t) {
    Poly p;
    if (t->is_var()) {
      p[{t->name()}] = 1;
      return p;
    }
    const std::string& op = t->name();
    if (op == "one") {
      p[{}] = 1;
    } else if (op == "add") {
      p = read(t->args()[0]);
      for (const auto& [w, c] : read(t->args()[1])) p[w] += c;
    } else if (op == "neg") {
      for (const auto& [w, c] : read(t->args()[0])) p[w] -= c;
    } else if (op == "mul") {
      Poly a = read(t->args()[0]), b = read(t->args()[1]);
      for (const auto& [wa, ca] : a)
        for (const auto& [wb, cb] : b) {
          Word w = wa;
          w.insert(w.end(), wb.begin(), wb.end());
          p[w] += ca * cb;
        }
    }
    return p;
  }

  static TermPtr build(const Poly& p) {
    std::vector<std::pair<Word, cpp_int>> terms;
    for (const auto& [w, c] : p)
      if (c != 0) terms.emplace_back(w, c);
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& a, const auto& b) { return a.first.size() < b.first.size(); });
    std::vector<TermPtr> items;
    for (const auto& [w, c] : terms) {
      std::vector<TermPtr> letters;
      for (const auto& x : w) letters.push_back(Term::var(x));
      TermPtr mono = right_comb("mul", letters, Term::app("one"));
      TermPtr item = c > 0 ? mono : Term::app("neg", {mono});
      for (cpp_int k = abs(c); k > 0; --k) items.push_back(item);
    }
    return right_comb("add", items, Term::app("zero"));
  }
};

}  // namespace

std::vector<std::string> band_canonical(const std::vector<std::string>& word) {
  std::set<std::string> content(word.begin(), word.end());
  if (content.size() <= 1) return content.empty() ? word : std::vector<std::string>{*content.begin()};
  BandInvariants inv = band_invariants(word);
  std::vector<std::string> left = band_canonical(inv.prefix);
  left.push_back(inv.first_missing);
  std::vector<std::string> right{inv.last_missing};
  std::vector<std::string> tail = band_canonical(inv.suffix);
  right.insert(right.end(), tail.begin(), tail.end());
  // Largest overlap of left's suffix with right's prefix that keeps the
  // content/prefix/suffix invariants; overlap 0 always does.
  for (std::size_t k = std::min(left.size(), right.size()); k > 0; --k) {
    if (!std::equal(left.end() - static_cast<long>(k), left.end(), right.begin())) continue;
    std::vector<std::string> merged = left;
    merged.insert(merged.end(), right.begin() + static_cast<long>(k), right.end());
    BandInvariants m = band_invariants(merged);
    if (m.content == inv.content && m.first_missing == inv.first_missing &&
        m.last_missing == inv.last_missing && same_band_element(m.prefix, inv.prefix) &&
        same_band_element(m.suffix, inv.suffix))
      return merged;
  }
  left.insert(left.end(), right.begin(), right.end());
  return left;
}

ProcedurePtr make_boom_procedure(bool unit, bool assoc, bool comm, bool idem) {
  return std::make_shared<BoomProcedure>(unit, assoc, comm, idem);
}
ProcedurePtr make_free_procedure() { return std::make_shared<FreeProcedure>(); }
ProcedurePtr make_abgroup_procedure() { return std::make_shared<AbGroupProcedure>(); }
ProcedurePtr make_convex_procedure() { return std::make_shared<ConvexProcedure>(); }
ProcedurePtr make_reader_procedure() { return std::make_shared<ReaderProcedure>(); }
ProcedurePtr make_ternary_tree_procedure() { return std::make_shared<TernaryTreeProcedure>(); }
ProcedurePtr make_ring_procedure() { return std::make_shared<RingProcedure>(); }

}  // namespace wb
