#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wb {

using Rational = boost::multiprecision::cpp_rational;

// One node of a (possibly nested) monad value. Constructors below keep every
// value canonical, so structural equality is value equality.
enum class Kind : std::uint8_t {
  Atom,    // carrier or exception label
  Seq,     // list, nonempty list
  Set,     // finite set, items sorted and distinct
  Bag,     // multiset / integer combination, items sorted, weights nonzero
  Dist,    // distribution, weights positive and summing to 1
  Nil,     // empty tree
  Leaf,    // tree leaf holding items[0]
  Node,    // tree node
  Left,    // exception / lift: normal value items[0]
  Right,   // exception label
  Bottom,  // lift bottom
  Tuple,   // reader: one component per state
};

struct Value {
  Kind kind = Kind::Atom;
  std::string label;
  std::vector<Value> items;
  std::vector<Rational> weights;

  static Value atom(std::string l);
  static Value seq(std::vector<Value> items);
  static Value set(std::vector<Value> items);
  // Merges duplicate items and drops zero weights.
  static Value bag(std::vector<Value> items, std::vector<Rational> weights);
  static Value dist(std::vector<Value> items, std::vector<Rational> weights);
  static Value nil();
  static Value leaf(Value v);
  static Value node(std::vector<Value> children);
  static Value left(Value v);
  static Value right(std::string label);
  static Value bottom();
  static Value tuple(std::vector<Value> items);
};

int compare(const Value& a, const Value& b);
inline bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
inline bool operator!=(const Value& a, const Value& b) { return compare(a, b) != 0; }
inline bool operator<(const Value& a, const Value& b) { return compare(a, b) < 0; }

std::string to_string(const Value& v);
std::string to_string(const Rational& r);

class ValueParseError : public std::runtime_error {
 public:
  ValueParseError(const std::string& what, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Cursor over value text, shared by the per-monad parsers.
class ValueReader {
 public:
  explicit ValueReader(std::string_view text) : text_(text) {}

  void skip_ws();
  bool at_end();
  char peek();
  bool try_consume(std::string_view s);
  void expect(char c);
  std::string identifier();
  // The label at the cursor without consuming it (empty if none).
  std::string peek_identifier();
  Rational number();
  std::size_t position() const { return pos_; }
  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace wb
