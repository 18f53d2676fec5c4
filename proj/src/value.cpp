#include "wb/value.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace wb {

namespace {

// Sorts items, adding the weights of equal ones and dropping zeros.
void merge_weighted(std::vector<Value>& items, std::vector<Rational>& weights) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return items[a] < items[b]; });
  std::vector<Value> out_items;
  std::vector<Rational> out_weights;
  for (std::size_t i : order) {
    if (!out_items.empty() && out_items.back() == items[i]) {
      out_weights.back() += weights[i];
    } else {
      out_items.push_back(std::move(items[i]));
      out_weights.push_back(weights[i]);
    }
  }
  items.clear();
  weights.clear();
  for (std::size_t i = 0; i < out_items.size(); ++i) {
    if (out_weights[i] == 0) continue;
    items.push_back(std::move(out_items[i]));
    weights.push_back(out_weights[i]);
  }
}

bool is_tagged(const Value& v) { return v.kind == Kind::Left || v.kind == Kind::Right || v.kind == Kind::Bottom; }

void print(const Value& v, std::string& out) {
  auto list = [&](char open, char close, bool with_weights) {
    out += open;
    for (std::size_t i = 0; i < v.items.size(); ++i) {
      if (i) out += ',';
      print(v.items[i], out);
      if (with_weights) {
        out += ':';
        out += to_string(v.weights[i]);
      }
    }
    out += close;
  };
  switch (v.kind) {
    case Kind::Atom: out += v.label; break;
    case Kind::Seq: list('[', ']', false); break;
    case Kind::Set: list('{', '}', false); break;
    case Kind::Bag:
    case Kind::Dist: list('{', '}', true); break;
    case Kind::Nil: out += "<>"; break;
    case Kind::Leaf: {
      std::string inner;
      print(v.items[0], inner);
      if (!inner.empty() && (inner[0] == '<' || inner[0] == '@')) out += '@';
      out += inner;
      break;
    }
    case Kind::Node: list('<', '>', false); break;
    case Kind::Left:
      if (is_tagged(v.items[0])) {
        out += "inl(";
        print(v.items[0], out);
        out += ')';
      } else {
        print(v.items[0], out);
      }
      break;
    case Kind::Right: out += v.label; break;
    case Kind::Bottom: out += "bot"; break;
    case Kind::Tuple: list('(', ')', false); break;
  }
}

}  // namespace

Value Value::atom(std::string l) {
  Value v;
  v.label = std::move(l);
  return v;
}

Value Value::seq(std::vector<Value> items) {
  Value v;
  v.kind = Kind::Seq;
  v.items = std::move(items);
  return v;
}

Value Value::set(std::vector<Value> items) {
  Value v;
  v.kind = Kind::Set;
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  v.items = std::move(items);
  return v;
}

Value Value::bag(std::vector<Value> items, std::vector<Rational> weights) {
  Value v;
  v.kind = Kind::Bag;
  merge_weighted(items, weights);
  v.items = std::move(items);
  v.weights = std::move(weights);
  return v;
}

Value Value::dist(std::vector<Value> items, std::vector<Rational> weights) {
  Value v;
  v.kind = Kind::Dist;
  merge_weighted(items, weights);
  v.items = std::move(items);
  v.weights = std::move(weights);
  return v;
}

Value Value::nil() {
  Value v;
  v.kind = Kind::Nil;
  return v;
}

Value Value::leaf(Value x) {
  Value v;
  v.kind = Kind::Leaf;
  v.items.push_back(std::move(x));
  return v;
}

Value Value::node(std::vector<Value> children) {
  Value v;
  v.kind = Kind::Node;
  v.items = std::move(children);
  return v;
}

Value Value::left(Value x) {
  Value v;
  v.kind = Kind::Left;
  v.items.push_back(std::move(x));
  return v;
}

Value Value::right(std::string label) {
  Value v;
  v.kind = Kind::Right;
  v.label = std::move(label);
  return v;
}

Value Value::bottom() {
  Value v;
  v.kind = Kind::Bottom;
  return v;
}

Value Value::tuple(std::vector<Value> items) {
  Value v;
  v.kind = Kind::Tuple;
  v.items = std::move(items);
  return v;
}

// Dictionary order; a multiset compares as its sorted expansion, so
// {a:2} < {a:1,b:1} < {b:2}.
int compare(const Value& a, const Value& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (int c = a.label.compare(b.label)) return c < 0 ? -1 : 1;
  std::size_t n = std::min(a.items.size(), b.items.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a.items[i], b.items[i])) return c;
    if (i >= a.weights.size() || a.weights[i] == b.weights[i]) continue;
    const Rational& wa = a.weights[i];
    const Rational& wb = b.weights[i];
    if (a.kind == Kind::Bag && wa > 0 && wb > 0) {
      // The side with fewer copies continues with a larger item or ends.
      if (wa < wb) return i + 1 == a.items.size() ? -1 : 1;
      return i + 1 == b.items.size() ? 1 : -1;
    }
    return wa < wb ? -1 : 1;
  }
  if (a.items.size() != b.items.size()) return a.items.size() < b.items.size() ? -1 : 1;
  return 0;
}

std::string to_string(const Value& v) {
  std::string out;
  print(v, out);
  return out;
}

std::string to_string(const Rational& r) { return r.str(); }

ValueParseError::ValueParseError(const std::string& what, std::size_t position)
    : std::runtime_error(what + " at position " + std::to_string(position)), position_(position) {}

void ValueReader::skip_ws() {
  while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
}

bool ValueReader::at_end() {
  skip_ws();
  return pos_ >= text_.size();
}

char ValueReader::peek() {
  skip_ws();
  return pos_ < text_.size() ? text_[pos_] : '\0';
}

bool ValueReader::try_consume(std::string_view s) {
  skip_ws();
  if (text_.substr(pos_, s.size()) != s) return false;
  pos_ += s.size();
  return true;
}

void ValueReader::expect(char c) {
  if (peek() != c) fail(std::string("expected '") + c + "'");
  ++pos_;
}

std::string ValueReader::identifier() {
  skip_ws();
  std::size_t start = pos_;
  while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
    ++pos_;
  if (start == pos_) fail("expected a label");
  return std::string(text_.substr(start, pos_ - start));
}

std::string ValueReader::peek_identifier() {
  skip_ws();
  std::size_t end = pos_;
  while (end < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_')) ++end;
  return std::string(text_.substr(pos_, end - pos_));
}

Rational ValueReader::number() {
  skip_ws();
  std::size_t start = pos_;
  if (pos_ < text_.size() && text_[pos_] == '-') ++pos_;
  while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/'))
    ++pos_;
  std::string s(text_.substr(start, pos_ - start));
  if (s.empty() || s == "-") fail("expected a number");
  try {
    return Rational(s);
  } catch (const std::exception&) {
    pos_ = start;
    fail("malformed number '" + s + "'");
  }
}

void ValueReader::fail(const std::string& what) const { throw ValueParseError(what, pos_); }

}  // namespace wb
