#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wb/term.hpp"

namespace wb {

// Extends `s` so that pattern[s] == t. Returns false (leaving `s` in an
// unspecified state) when no such extension exists.
bool match(const TermPtr& pattern, const TermPtr& t, Substitution& s);

struct StepOptions {
  // Terms substituted for variables that occur on only one side of an axiom
  // (e.g. y when rewriting x to mix1(x, y)).
  std::vector<TermPtr> fillers;
  // Results larger than this many nodes are discarded.
  int max_size = 1 << 30;
};

// All terms obtained from t by one axiom application, in either direction,
// at any position.
void for_each_step(const Presentation& p, const TermPtr& t, const StepOptions& opt,
                   const std::function<void(const TermPtr&)>& visit);
std::vector<TermPtr> neighbors(const Presentation& p, const TermPtr& t, const StepOptions& opt);

// True when t follows from s by exactly one axiom instance applied at one position.
bool is_one_step(const Presentation& p, const TermPtr& s, const TermPtr& t);
// Checks a chain t0 = t1 = ... where consecutive terms differ by one step.
// Returns the index of the first bad link, or -1.
int check_derivation(const Presentation& p, const std::vector<TermPtr>& chain);

enum class EqOutcome { Equal, Unknown };

struct EqBoundedOptions {
  // Extra nodes allowed above the larger input; negative means "size of the
  // largest axiom side".
  int slack = -1;
  std::size_t node_cap = 200000;
};

// Bidirectional breadth-first search over one-step rewrites. `depth` bounds
// the total number of rule applications on the connecting path.
EqOutcome eq_bounded(const Presentation& p, const TermPtr& t1, const TermPtr& t2, int depth,
                     const EqBoundedOptions& opt = {});

int default_slack(const Presentation& p);
std::vector<TermPtr> default_fillers(const Presentation& p, const std::vector<TermPtr>& terms);

// Equivalence classes generated by "u is reachable from t within `steps`
// rewrites through terms no larger than size(t) + slack", computed on the
// given universe. Returns a class index per universe term.
std::vector<int> closure_classes(const Presentation& p, const std::vector<TermPtr>& universe,
                                 int steps, const EqBoundedOptions& opt = {});

}  // namespace wb
