#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wb {

struct OpSymbol {
  std::string name;
  int arity = 0;
};

class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<OpSymbol> ops);

  void add(OpSymbol op);
  const OpSymbol* find(std::string_view name) const;
  const std::vector<OpSymbol>& ops() const { return ops_; }
  std::vector<std::string> constants() const;

 private:
  std::vector<OpSymbol> ops_;
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable syntax tree. Hash, size and depth are computed once at
// construction so that hashing terms in closures stays cheap.
class Term {
 public:
  static TermPtr var(std::string name);
  static TermPtr app(std::string op, std::vector<TermPtr> args = {});

  bool is_var() const { return is_var_; }
  const std::string& name() const { return name_; }
  const std::vector<TermPtr>& args() const { return args_; }
  std::size_t hash() const { return hash_; }
  int size() const { return size_; }
  int depth() const { return depth_; }

 private:
  Term() = default;
  bool is_var_ = false;
  std::string name_;
  std::vector<TermPtr> args_;
  std::size_t hash_ = 0;
  int size_ = 1;
  int depth_ = 0;
};

bool equal(const Term& a, const Term& b);
inline bool equal(const TermPtr& a, const TermPtr& b) { return a == b || equal(*a, *b); }
// Total order: variables before applications, then by name, then by arguments.
int compare(const Term& a, const Term& b);
inline bool less(const TermPtr& a, const TermPtr& b) { return compare(*a, *b) < 0; }

struct TermHash {
  std::size_t operator()(const TermPtr& t) const { return t->hash(); }
};
struct TermEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return equal(a, b); }
};
struct TermLess {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return less(a, b); }
};

std::string to_string(const Term& t);
inline std::string to_string(const TermPtr& t) { return to_string(*t); }

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Prefix notation. Identifiers absent from the signature are variables.
TermPtr parse_term(const Signature& sig, std::string_view text);

std::set<std::string> vars(const Term& t);
inline std::set<std::string> vars(const TermPtr& t) { return vars(*t); }
bool is_well_formed(const Signature& sig, const Term& t);

using Substitution = std::map<std::string, TermPtr>;
TermPtr substitute(const TermPtr& t, const Substitution& s);

struct Equation {
  TermPtr lhs;
  TermPtr rhs;
  std::set<std::string> context;

  static Equation make(TermPtr lhs, TermPtr rhs);
};

struct Presentation {
  std::string name;
  Signature signature;
  std::vector<Equation> axioms;

  void add_axiom(std::string_view text);
};

// Theory file:
//   name: monoid
//   ops: e/0, mul/2
//   axioms:
//     mul(e, x) = x
// Lines starting with '#' are ignored.
Presentation parse_presentation(std::string_view text);
std::string format_presentation(const Presentation& p);

// Canonical variables v1..vk used by generated contexts.
std::string canonical_var(int i);

}  // namespace wb
