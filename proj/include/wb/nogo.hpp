#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wb/theories.hpp"
#include "wb/value.hpp"

namespace wb {

// A bijection on {1..m}, stored 1-based: map[i-1] is the image of i.
struct Permutation {
  std::vector<int> map;

  int size() const { return static_cast<int>(map.size()); }
  int operator()(int i) const { return map.at(static_cast<std::size_t>(i - 1)); }
  bool fixed_point_free() const;
  bool valid() const;
  std::string str() const;  // one-line form "[2,3,1]"

  static Permutation swap();            // (1 2)
  static Permutation cycle(int m);      // i -> i+1 mod m
  // All fixed-point-free permutations of {1..m}.
  static std::vector<Permutation> derangements(int m);
};

// Variable a^j_i of the filter lemma: column j (1..n), index i (1..m).
struct FilterVar {
  int column = 0, index = 0;
  auto operator<=>(const FilterVar&) const = default;
};

// Row 1 is {a^j_{i_1} : j}; row k >= 2 is {a^j_{i_k} : j != k} plus a^k_{sigma(i_k)}.
std::vector<std::set<FilterVar>> filter_rows(int n, int m, const Permutation& sigma, const std::vector<int>& choices);
// Intersection of the rows. Throws std::invalid_argument on a choice outside
// 1..m, a sigma with a fixed point or of the wrong size, or n, m < 1.
std::set<FilterVar> filter_common(int n, int m, const Permutation& sigma, const std::vector<int>& choices);

enum class TheoremId { Plotkin1, Plotkin2, TooManyConstants, LackingAbides, IdemUnits };

const char* to_string(TheoremId t);
std::optional<TheoremId> parse_theorem(std::string_view s);

// One hypothesis of a theorem, certified for one of the two theories.
struct Hypothesis {
  std::string theory;
  std::string role;  // S, T, P or V
  std::string name;  // S1, T4b, P1', "two distinct constants", ...
  std::optional<PropertyId> property;  // set when check_property certifies it
  TermPtr term;                        // override term handed to check_property
  CertStatus status = CertStatus::Unknown;
  int depth = 0, vars = 0;
  std::optional<std::pair<TermPtr, TermPtr>> witness;
  std::string provenance;
  std::string note;

  bool holds() const { return status == CertStatus::HoldsAnalytic || status == CertStatus::HoldsBounded; }
  bool bounded() const { return depth > 0; }
  std::string describe() const;
};

struct TheoremCheck {
  TheoremId theorem = TheoremId::Plotkin1;
  std::vector<Hypothesis> hypotheses;
  std::string note;

  bool applicable() const;
  // The first hypothesis that does not hold, if any.
  const Hypothesis* first_gap() const;
  std::string describe() const;
};

// Plotkin-style theorems: no law VP => PV. p and v default to the designated binaries.
TheoremCheck check_plotkin_binary(const TheoryEntry& P, const TheoryEntry& V, const TermPtr& p = nullptr,
                                  const TermPtr& v = nullptr, const Bounds& b = {});
// p is an m-ary term over y1..ym, v an n-ary term over y1..yn. Throws
// std::invalid_argument when sigma has a fixed point or does not act on m.
TheoremCheck check_plotkin_general(const TheoryEntry& P, const TheoryEntry& V, const TermPtr& p, int m,
                                   const TermPtr& v, int n, const Permutation& sigma, const Bounds& b = {});

// Constant-based theorems: no law ST => TS.
TheoremCheck check_too_many_constants(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b = {});
TheoremCheck check_lacking_abides(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b = {});
TheoremCheck check_idem_units(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b = {});

// At most one law ST => TS: both signatures are one constant plus one binary
// operation, units hold, and S1, S2 (resp. T1, T2) are certified.
bool uniqueness_applies(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b = {});

// Re-certifies a hypothesis from scratch and reports whether it still holds.
bool replay(const Hypothesis& h, const Bounds& b);

// Literature-backed positive cells.
struct PositiveLaw {
  std::string s, t;          // theory ids
  std::string law;           // implemented law id, empty when citation-only
  std::string citation;
};

const std::vector<PositiveLaw>& positive_registry();
const PositiveLaw* find_positive(std::string_view s, std::string_view t);

struct NoGoVerdict {
  enum class Status { NoDistLaw, Exists, Unknown };

  std::string s, t;
  Status status = Status::Unknown;
  std::vector<TheoremCheck> applicable;  // every theorem that applies
  std::vector<TheoremCheck> rejected;    // the others, with their gaps
  std::vector<std::string> citations;    // literature backing the status
  std::string law;                       // implemented law for Exists
  bool citation_only = false;
  std::optional<bool> beck_ok;           // Beck re-verification of `law`
  std::string beck_summary;

  std::vector<TheoremId> theorem_ids() const;
  // "NO (LackingAbides, IdemUnits)", "YES (choice:list:powerset)", "UNKNOWN".
  std::string headline() const;
  std::string text() const;
  std::string json() const;
};

const char* to_string(NoGoVerdict::Status s);

// Runs every checker (TooManyConstants, LackingAbides, IdemUnits, Plotkin1
// with V = S and P = T on the designated binaries) and records all that apply.
// Without a theorem, the positive registry decides, re-verified by check_beck
// at |X| = |Y| = 2, bound 3 when the law is implemented. Certificates are
// cached per (theory, property, bounds).
NoGoVerdict verdict(const TheoryEntry& S, const TheoryEntry& T, const Bounds& b = {});

// The fixed Plotkin instance: X = {a,b,c,d}, Xi = {a,b} +1/2 {c,d} in DP(X),
// candidate values of lambda_X(Xi) range over P(D2(X)), D2 = distributions
// with denominators <= 2.
struct PlotkinConstraint {
  std::string name;   // f1, f2, f3
  Value image_of_xi;  // DP(f)(Xi)
  Value required;     // lambda at that image, forced by a unit axiom
  std::string unit_axiom;
};

struct PlotkinCandidate {
  Value value;
  std::vector<std::string> failed;  // names of the constraints it violates
  std::vector<Value> images;        // PD(f)(value), one per constraint
};

struct PlotkinRefutation {
  Value xi;
  std::vector<Value> distributions;  // D2(X)
  std::vector<PlotkinConstraint> constraints;
  std::vector<PlotkinCandidate> candidates;
  std::size_t survivors = 0;

  std::string text(bool all_candidates = false) const;
  std::string json() const;
};

PlotkinRefutation plotkin_refute_bounded(bool include_empty = true);

}  // namespace wb
