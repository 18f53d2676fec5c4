#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "wb/monads.hpp"

namespace wb {

// lambda : S T => T S. `apply` takes a value of S(T(Y)) for any Y (the slots
// below the T layer are left untouched) and returns a value of T(S(Y)).
struct DistLaw {
  std::string id;
  MonadPtr s, t;
  std::function<Value(const Value&)> apply;
  std::string provenance;  // citation, or "user"
};

DistLaw law_times_over_plus();                      // list over abgroup
DistLaw law_multiset_cartesian();                   // multiset over multiset
DistLaw law_choice(const MonadPtr& s, const MonadPtr& t);  // s in {bintree, list, multiset}, t in {multiset, powerset}
DistLaw law_mm_nonempty_list(int variant);          // 1, 2, 3
DistLaw law_exception_over(const MonadPtr& s, std::vector<std::string> labels = {"e1", "e2"});
DistLaw law_faulty_list_exception();                // L(X+E) -> L(X)+E, E = {a,b}
DistLaw law_lift_swap();                            // lift over lift

// Ids: ring, mset-cartesian, choice:<S>:<T>, mm-nel-1|2|3, exception-over:<S>,
// faulty-list-exception, lift-swap.
const DistLaw* find_law(std::string_view id);
const DistLaw& get_law(std::string_view id);  // throws with suggestions
std::vector<std::string> law_ids();

// Parses a value of S(T(X)) and applies the law.
Value apply_law(const DistLaw& l, std::string_view input);

struct BeckViolation {
  std::string axiom;  // naturality, unit1, unit2, mult1, mult2
  std::string f;      // the function X -> Y for naturality, else empty
  Value input, lhs, rhs;
};

struct BeckReport {
  std::string law;
  int carrier = 0, codomain = 0, bound = 0, extra = 0;
  std::vector<std::pair<std::string, std::size_t>> checked;  // per axiom
  std::vector<BeckViolation> violations;

  bool ok() const { return violations.empty(); }
  std::vector<BeckViolation> of(std::string_view axiom) const;
  std::string text() const;
  std::string json() const;
};

// Exhaustive check of naturality (every function X -> Y) and Beck's four
// axioms on all enumerated inputs.
BeckReport check_beck(const DistLaw& l, const FinCarrier& x, const FinCarrier& y, int bound, int extra = 0);

// lambda on S(T(y1,y2), x0) and S(x0, T(y1,y2)) gives T(S(y1,x0), S(y2,x0))
// and T(S(x0,y1), S(x0,y2)), with S and T the designated binaries. Throws
// std::invalid_argument when a monad has no binary encoding.
bool check_times_over_plus_form(const DistLaw& l);

// Inputs containing the T-unit-constant encoding are sent to it.
std::vector<BeckViolation> check_multiplicative_zero(const DistLaw& l, const FinCarrier& x, int bound);

struct SearchOptions {
  int carrier = 1;         // |X| for the multiplication axiom instances
  int table_carrier = -1;  // lambda is tabulated on this carrier (default: carrier + 1)
  int bound = 2;           // inputs: S(T(X)) with this bound
  int extra = 0;           // extra total weight for inputs and axiom instances
  int out_bound = -1;      // outputs: T(S(X)) with this bound (default: smallest saturated, else bound)
  std::size_t max_candidates = 16;
  std::size_t node_cap = 1000000;
};

struct SearchResult {
  enum class Status { NoLawInFragment, Candidates, Inconclusive } status = Status::Inconclusive;
  std::vector<Value> inputs;
  // Each candidate assigns outputs to `inputs` position-wise.
  std::vector<std::vector<Value>> candidates;
  std::size_t candidate_count = 0;  // may exceed candidates.size()
  std::size_t constraints = 0, unclosed = 0, nodes = 0;
  bool domain_saturated = false;
  std::vector<std::string> trace;

  std::string describe() const;
};

// Backtracking search for tables lambda on the bounded inputs over the table
// carrier that satisfy the unit axioms, naturality (every endofunction of the
// table carrier) and both multiplication axioms over the smaller carrier
// wherever every value they need lies in the fragment. lambda at other
// components is read off the table through an order-preserving renaming.
// Outputs never mention labels absent from the input. NoLawInFragment
// requires the output domain to be saturated (the next output bound adds
// nothing).
SearchResult search_distlaw_bounded(const MonadPtr& s, const MonadPtr& t, const SearchOptions& opt = {});

const char* to_string(SearchResult::Status s);

}  // namespace wb
