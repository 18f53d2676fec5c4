#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wb/normalize.hpp"
#include "wb/term.hpp"

namespace wb {

struct BoomFlags {
  bool unit = false;
  bool assoc = false;
  bool comm = false;
  bool idem = false;

  // "boom:UAC-" style id.
  std::string id() const;
  // Table label: T, I, C, CI, L, AI, M, P with a trailing '+' when there is no unit.
  std::string label() const;
  static std::optional<BoomFlags> parse(std::string_view id);
  static std::vector<BoomFlags> all();
};

struct DesignatedOps {
  TermPtr binary;         // over y1, y2
  TermPtr unit_constant;  // may be null
};

enum class PropertyId { P1, P2, P3, V1, V2, V3, S1, S2, S3, S4a, S4b, T1, T2, T3, T4a, T4b };

std::string to_string(PropertyId p);
std::optional<PropertyId> parse_property(std::string_view s);
// Properties quantifying over all terms, certified by enumeration.
bool is_bounded_property(PropertyId p);

enum class CertStatus { HoldsAnalytic, HoldsBounded, Fails, Unknown };

struct PropertyCertificate {
  explicit PropertyCertificate(PropertyId p = PropertyId::P1) : property(p) {}

  PropertyId property;
  CertStatus status = CertStatus::Unknown;
  int depth = 0;  // bound actually used for HoldsBounded and bounded Fails
  int vars = 0;
  std::optional<std::pair<TermPtr, TermPtr>> witness;
  std::string provenance = "machine-checked";
  std::string note;

  bool holds() const { return status == CertStatus::HoldsAnalytic || status == CertStatus::HoldsBounded; }
  std::string describe() const;
};

struct Bounds {
  int depth = 3;
  int vars = 4;
  // Enumeration size cap; larger requests shrink vars, then depth.
  std::size_t max_terms = 2000000;
};

struct TheoryEntry {
  std::string id;
  std::string label;  // short name used in tables and messages
  Presentation presentation;
  std::optional<BoomFlags> flags;
  DesignatedOps designated;
  ProcedurePtr procedure;  // null when only eq_bounded is available
  // Operations excluded from the stable universal term set used by the
  // Plotkin-style properties (P3, V2, V3).
  std::set<std::string> universal_excluded_ops;
  // Derived equations given as one-step derivation chains; each chain may use
  // the axioms and the lemmas before it.
  std::vector<std::vector<TermPtr>> lemmas;

  bool decides() const { return procedure != nullptr; }
  TermPtr parse(std::string_view text) const { return parse_term(presentation.signature, text); }
};

class MissingDesignatedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

TheoryEntry boom_theory(BoomFlags flags);

// Registry of built-in theories; ids such as boom:UAC-, monoid, jsl, convex,
// exception:{a,b}. Returns null for unknown ids.
const TheoryEntry* find_theory(std::string_view id);
// Same, but throws with a list of suggestions.
const TheoryEntry& get_theory(std::string_view id);
// The registered theories (Boom variants, pointed, exception:{a,b}, abgroup,
// convex, reader2) in listing order. tree3 and ring are addressable by id only.
std::vector<const TheoryEntry*> registered_theories();
std::vector<std::string> theory_aliases(const TheoryEntry& e);
TheoryEntry user_theory(const Presentation& p);

// Equality inside a theory: the registered procedure when present, otherwise
// eq_bounded (nullopt when inconclusive).
std::optional<bool> theory_equal(const TheoryEntry& e, const TermPtr& a, const TermPtr& b,
                                 int proof_depth = 6);

// `term` overrides the designated binary for P1-P3 and V1-V3.
PropertyCertificate check_property(const TheoryEntry& e, PropertyId p, const Bounds& b = {},
                                   const TermPtr& term = nullptr);

bool abides_holds(const TheoryEntry& e);
std::pair<TermPtr, TermPtr> abides_pair(const TheoryEntry& e);

// The presentation extended by the entry's lemmas, after replaying every
// derivation. Throws std::logic_error naming the first bad link.
Presentation with_lemmas(const TheoryEntry& e);

// Cross-check of the decision procedure against bounded proof search on all
// terms of depth <= `depth` over `vars` variables. Completeness: for every
// distinct (operation, argument classes) combination the term op(nf1..nfn) is
// connected to its normal form by eq_bounded; congruence and transitivity then
// connect every enumerated term to its normal form. Soundness: every axiom
// holds in the normal-form algebra for all assignments of enumerated classes
// that can occur in an instance inside an enumerated term.
struct AgreementReport {
  int depth = 0, vars = 0;
  double terms = 0;
  std::size_t classes = 0, keys = 0, trivial_keys = 0, assignments = 0;
  std::vector<std::pair<TermPtr, TermPtr>> proved;
  std::vector<std::pair<TermPtr, TermPtr>> unproved;
  std::vector<std::pair<TermPtr, TermPtr>> unsound;

  bool ok() const { return unproved.empty() && unsound.empty(); }
};

AgreementReport closure_agreement(const TheoryEntry& e, int depth, int vars, int proof_depth);

// Exhaustive enumeration of terms of bounded depth over v1..vk with their
// normal-form classes.
class Census {
 public:
  Census(const TheoryEntry& e, int depth, int vars, const std::set<std::string>& excluded_ops = {});

  std::size_t size() const { return nodes_.size(); }
  int depth() const { return depth_; }
  int vars() const { return vars_; }
  int nf(std::size_t i) const { return nodes_[i].nf; }
  std::uint32_t mask(std::size_t i) const { return nodes_[i].mask; }
  TermPtr term(std::size_t i) const;
  const TermPtr& nf_term(int id) const { return nf_terms_[id]; }
  std::size_t classes() const { return nf_terms_.size(); }
  // Class id of a normal form, or -1 if no enumerated term has it.
  int find_nf(const TermPtr& nf) const;

  // Largest (depth, vars) within the cap, preferring depth.
  static std::pair<int, int> fit(const TheoryEntry& e, const Bounds& b,
                                 const std::set<std::string>& excluded_ops = {});
  static double count(const TheoryEntry& e, int depth, int vars,
                      const std::set<std::string>& excluded_ops = {});

 private:
  struct Node {
    int op;  // -1 variable, -2 constant
    int a, b, c;
    int nf;
    std::uint32_t mask;
  };
  std::vector<Node> nodes_;
  std::vector<TermPtr> nf_terms_;
  std::vector<std::string> op_names_;
  std::vector<int> op_arity_;
  std::unordered_map<TermPtr, int, TermHash, TermEq> nf_index_;
  std::vector<std::string> atom_names_;
  int depth_, vars_;
};

}  // namespace wb
