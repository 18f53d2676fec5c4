#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wb/theories.hpp"
#include "wb/value.hpp"

namespace wb {

// Ordered element names of a base set X.
struct FinCarrier {
  std::vector<std::string> labels;

  // The first n of a, b, c, ... that are not in `avoid`.
  static FinCarrier of_size(int n, const std::vector<std::string>& avoid = {});
  std::vector<Value> atoms() const;
};

using ValueFn = std::function<Value(const Value&)>;

// A finitary set monad acting on values one layer deep: the slots of a T-value
// hold arbitrary values (atoms or inner monad layers).
class Monad {
 public:
  virtual ~Monad() = default;

  virtual std::string name() const = 0;
  virtual Value unit(const Value& x) const = 0;
  virtual Value map(const ValueFn& f, const Value& v) const = 0;
  virtual Value join(const Value& vv) const = 0;

  // Structural size of the outer layer.
  virtual int size(const Value& v) const = 0;
  // Calls f on each slot with its multiplicity (|weight| for bags).
  virtual void for_each_slot(const Value& v, const std::function<void(const Value&, int)>& f) const = 0;
  // Appends the values of size exactly `s` whose slots come from `elems`, with
  // the sum over slots of multiplicity * weight at most `budget`.
  virtual void enumerate_size(const std::vector<Value>& elems, const std::vector<int>& weights, int s,
                              int budget, std::vector<Value>& out) const = 0;
  // Parses one outer layer; `inner` parses a slot.
  virtual Value parse(ValueReader& r, const std::function<Value(ValueReader&)>& inner) const = 0;
  // Checks that v is a well-formed outer layer (canonical form, weights).
  virtual bool well_formed(const Value& v) const = 0;
  // Labels that are never carrier elements at this layer (exception labels).
  virtual std::vector<std::string> reserved_labels() const { return {}; }
};

using MonadPtr = std::shared_ptr<const Monad>;

MonadPtr list_monad();
MonadPtr nonempty_list_monad();
MonadPtr multiset_monad();
MonadPtr powerset_monad();
MonadPtr binary_tree_monad();
MonadPtr nary_tree_monad(int n);
MonadPtr exception_monad(std::vector<std::string> labels);
MonadPtr lift_monad();
MonadPtr reader_monad(int states = 2);
MonadPtr distribution_monad(int max_denominator = 4);
MonadPtr abgroup_monad();

// Ids: list, nelist, multiset, powerset, bintree, ntree[:n], exception[:{a,b}],
// lift, reader, dist[:N], abgroup, plus the short aliases L, L+, M, P, D, A.
MonadPtr find_monad(std::string_view id);
MonadPtr get_monad(std::string_view id);  // throws with suggestions
std::vector<std::string> monad_ids();     // the 11 shipped defaults
std::vector<MonadPtr> shipped_monads();

// A composite functor T1 T2 ... Tk applied to a carrier, outermost first.
using MonadStack = std::vector<MonadPtr>;

// All values of the stacked functor over X: every layer has size <= bound and
// the total weight (each layer's own size plus its slots' weights counted with
// multiplicity) is at most bound + layers - 1 + extra. Deterministic,
// duplicate-free, ordered by outer size.
std::vector<Value> enumerate(const MonadStack& stack, const FinCarrier& x, int bound, int extra = 0);
std::vector<Value> enumerate(const MonadPtr& m, const FinCarrier& x, int bound);

struct EnumerationLimit : std::runtime_error {
  explicit EnumerationLimit(std::size_t limit)
      : std::runtime_error("enumeration exceeds " + std::to_string(limit) + " values") {}
};
// As enumerate, but throws EnumerationLimit once any layer would hold more than `limit` values.
std::vector<Value> enumerate_limited(const MonadStack& stack, const FinCarrier& x, int bound, int extra,
                                     std::size_t limit);
int weight(const MonadStack& stack, const Value& v);

// Applies f to the values `layer` layers down: layer 0 is v itself, layer 1
// the slots of the outer monad, and so on.
Value map_at(const MonadStack& stack, std::size_t layer, const ValueFn& f, const Value& v);

// Canonical text form, read back according to the stack.
Value parse_value(const MonadStack& stack, std::string_view text);
Value parse_value(const MonadPtr& m, std::string_view text);
bool well_formed(const MonadStack& stack, const Value& v);

struct LawViolation {
  std::string law;  // unit1, unit2, assoc, naturality
  Value input;
  Value lhs, rhs;
};

struct MonadLawReport {
  std::string monad;
  int carrier = 0, bound = 0, extra = 0;
  std::size_t checked_t = 0, checked_ttt = 0;
  std::vector<LawViolation> violations;

  bool ok() const { return violations.empty(); }
  std::string describe() const;
};

// mu . T eta = id and mu . eta T = id on T X, associativity on T T T X
// (enumerated with `extra` additional total weight).
MonadLawReport check_monad_laws(const MonadPtr& m, const FinCarrier& x, int bound, int extra = 0);

// map(f) . eta = eta . f and map(f) . mu = mu . map(map f) for every function
// between carriers of the given sizes.
std::vector<LawViolation> check_monad_naturality(const MonadPtr& m, int from_size, int to_size, int bound);

// Interprets each operation of a theory as a value of T over the atoms
// x1..xn; the term op(t1..tn) denotes mu(map(xi -> [[ti]])(generic(op))).
struct FreeModelPair {
  std::string theory;
  std::string monad;
  std::vector<std::pair<std::string, std::string>> generic_ops;  // op -> value text
};

const std::vector<FreeModelPair>& free_model_pairs();

// The value op(args) in m, from the table above; nullopt when m has no
// interpretation of op.
std::optional<Value> generic_operation(const MonadPtr& m, const std::string& op, const std::vector<Value>& args);

struct FreeModelReport {
  std::size_t terms = 0, classes = 0, values = 0, matched = 0, substitutions = 0;
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
  std::string describe() const;
};

// Classes of terms of depth <= depth over X versus enumerate(m, X, bound):
// the interpretation is constant on classes, injective on classes, and hits
// every value of size <= bound; substituting terms for variables agrees with
// the monad's join.
FreeModelReport free_model_iso_check(const TheoryEntry& e, const MonadPtr& m, const FinCarrier& x, int depth,
                                     int bound);

}  // namespace wb
