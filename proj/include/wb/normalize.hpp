#pragma once

#include <memory>
#include <string>
#include <vector>

#include "wb/term.hpp"

namespace wb {

// A decision procedure given as an algebra on normal forms: apply() receives
// normal-form arguments and returns the normal form of op(args).
class Procedure {
 public:
  virtual ~Procedure() = default;
  virtual std::string id() const = 0;
  virtual TermPtr apply(const std::string& op, const std::vector<TermPtr>& args) const = 0;
  virtual TermPtr variable(const std::string& name) const { return Term::var(name); }
};

using ProcedurePtr = std::shared_ptr<const Procedure>;

TermPtr normalize(const Procedure& proc, const TermPtr& t);
bool decide_eq(const Procedure& proc, const TermPtr& a, const TermPtr& b);

// Boom-hierarchy theories over {e/0 (with unit), mul/2}.
ProcedurePtr make_boom_procedure(bool unit, bool assoc, bool comm, bool idem);
// Theories without axioms: normal form is the term itself.
ProcedurePtr make_free_procedure();
// {e/0, mul/2, inv/1}: integer coefficient vectors.
ProcedurePtr make_abgroup_procedure();
// {mix0/2, mixh/2, mix1/2}: exact dyadic distributions over variables.
ProcedurePtr make_convex_procedure();
// {get/2}: pairs indexed by a two-element state set.
ProcedurePtr make_reader_procedure();
// {e/0, phi/3}: ternary trees with unit pruning.
ProcedurePtr make_ternary_tree_procedure();
// {zero/0, one/0, add/2, neg/1, mul/2}: noncommutative integer polynomials.
ProcedurePtr make_ring_procedure();

// Free band word problem: canonical representative of a word in the free
// idempotent semigroup. Two words are equal in every band iff their canonical
// representatives coincide.
std::vector<std::string> band_canonical(const std::vector<std::string>& word);

}  // namespace wb
