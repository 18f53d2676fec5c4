#include "wb/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace wb {

Signature::Signature(std::initializer_list<OpSymbol> ops) {
  for (const auto& op : ops) add(op);
}

void Signature::add(OpSymbol op) {
  if (op.name.empty()) throw std::invalid_argument("empty operation name");
  if (op.arity < 0) throw std::invalid_argument("negative arity for " + op.name);
  if (find(op.name)) throw std::invalid_argument("duplicate operation " + op.name);
  ops_.push_back(std::move(op));
}

const OpSymbol* Signature::find(std::string_view name) const {
  for (const auto& op : ops_)
    if (op.name == name) return &op;
  return nullptr;
}

std::vector<std::string> Signature::constants() const {
  std::vector<std::string> out;
  for (const auto& op : ops_)
    if (op.arity == 0) out.push_back(op.name);
  return out;
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

TermPtr Term::var(std::string name) {
  auto t = std::shared_ptr<Term>(new Term());
  t->is_var_ = true;
  t->hash_ = mix(0x51ed27, std::hash<std::string>{}(name));
  t->name_ = std::move(name);
  return t;
}

TermPtr Term::app(std::string op, std::vector<TermPtr> args) {
  auto t = std::shared_ptr<Term>(new Term());
  std::size_t h = mix(0x2545f491, std::hash<std::string>{}(op));
  int size = 1, depth = 0;
  for (const auto& a : args) {
    h = mix(h, a->hash_);
    size += a->size_;
    depth = std::max(depth, a->depth_ + 1);
  }
  t->name_ = std::move(op);
  t->args_ = std::move(args);
  t->hash_ = h;
  t->size_ = size;
  t->depth_ = depth;
  return t;
}

bool equal(const Term& a, const Term& b) {
  if (&a == &b) return true;
  if (a.hash() != b.hash() || a.is_var() != b.is_var() || a.size() != b.size() ||
      a.name() != b.name() || a.args().size() != b.args().size())
    return false;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (!equal(a.args()[i], b.args()[i])) return false;
  return true;
}

int compare(const Term& a, const Term& b) {
  if (&a == &b) return 0;
  if (a.is_var() != b.is_var()) return a.is_var() ? -1 : 1;
  if (int c = a.name().compare(b.name())) return c < 0 ? -1 : 1;
  if (a.args().size() != b.args().size()) return a.args().size() < b.args().size() ? -1 : 1;
  for (std::size_t i = 0; i < a.args().size(); ++i)
    if (int c = compare(*a.args()[i], *b.args()[i])) return c;
  return 0;
}

namespace {

void print(const Term& t, std::string& out) {
  out += t.name();
  if (t.is_var() || t.args().empty()) return;
  out += '(';
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ',';
    print(*t.args()[i], out);
  }
  out += ')';
}

class TermParser {
 public:
  TermParser(const Signature& sig, std::string_view text) : sig_(sig), s_(text) {}

  TermPtr parse() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty input", pos_);
    TermPtr t = term();
    skip();
    if (pos_ < s_.size()) {
      if (s_[pos_] == ')') throw ParseError("unbalanced parentheses: unexpected ')'", pos_);
      throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    }
    return t;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string ident() {
    skip();
    std::size_t start = pos_;
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    if (!std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '(' || s_[pos_] == ')')
        throw ParseError("unbalanced parentheses: expected identifier", pos_);
      throw ParseError(std::string("expected identifier, found '") + s_[pos_] + "'", pos_);
    }
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  TermPtr term() {
    std::size_t start = (skip(), pos_);
    std::string name = ident();
    skip();
    const OpSymbol* op = sig_.find(name);
    bool has_parens = pos_ < s_.size() && s_[pos_] == '(';
    if (!op) {
      if (has_parens) throw ParseError("unknown operation '" + name + "'", start);
      return Term::var(std::move(name));
    }
    std::vector<TermPtr> args;
    if (has_parens) {
      std::size_t open = pos_++;
      skip();
      if (pos_ < s_.size() && s_[pos_] == ')') {
        ++pos_;
      } else {
        for (;;) {
          args.push_back(term());
          skip();
          if (pos_ >= s_.size())
            throw ParseError("unbalanced parentheses: '(' never closed", open);
          if (s_[pos_] == ',') {
            ++pos_;
            continue;
          }
          if (s_[pos_] == ')') {
            ++pos_;
            break;
          }
          throw ParseError(std::string("expected ',' or ')', found '") + s_[pos_] + "'", pos_);
        }
      }
    }
    if (static_cast<int>(args.size()) != op->arity)
      throw ParseError("arity mismatch: " + name + " expects " + std::to_string(op->arity) +
                           " argument(s), got " + std::to_string(args.size()),
                       start);
    return Term::app(std::move(name), std::move(args));
  }

  const Signature& sig_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(*a, out);
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print(t, out);
  return out;
}

TermPtr parse_term(const Signature& sig, std::string_view text) {
  return TermParser(sig, text).parse();
}

std::set<std::string> vars(const Term& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

bool is_well_formed(const Signature& sig, const Term& t) {
  if (t.is_var()) return !sig.find(t.name());
  const OpSymbol* op = sig.find(t.name());
  if (!op || op->arity != static_cast<int>(t.args().size())) return false;
  for (const auto& a : t.args())
    if (!is_well_formed(sig, *a)) return false;
  return true;
}

TermPtr substitute(const TermPtr& t, const Substitution& s) {
  if (t->is_var()) {
    auto it = s.find(t->name());
    return it == s.end() ? t : it->second;
  }
  if (t->args().empty()) return t;
  std::vector<TermPtr> args;
  args.reserve(t->args().size());
  bool changed = false;
  for (const auto& a : t->args()) {
    args.push_back(substitute(a, s));
    changed = changed || args.back() != a;
  }
  return changed ? Term::app(t->name(), std::move(args)) : t;
}

Equation Equation::make(TermPtr lhs, TermPtr rhs) {
  Equation e{std::move(lhs), std::move(rhs), {}};
  e.context = vars(e.lhs);
  for (const auto& v : vars(e.rhs)) e.context.insert(v);
  return e;
}

void Presentation::add_axiom(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ParseError("axiom without '='", 0);
  auto rhs_text = text.substr(eq + 1);
  if (rhs_text.find('=') != std::string_view::npos)
    throw ParseError("axiom with more than one '='", eq + 1 + rhs_text.find('='));
  TermPtr lhs, rhs;
  try {
    lhs = parse_term(signature, text.substr(0, eq));
  } catch (const ParseError& e) {
    throw ParseError(std::string("left side: ") + e.what(), e.position());
  }
  try {
    rhs = parse_term(signature, rhs_text);
  } catch (const ParseError& e) {
    throw ParseError(std::string("right side: ") + e.what(), eq + 1 + e.position());
  }
  axioms.push_back(Equation::make(lhs, rhs));
}

Presentation parse_presentation(std::string_view text) {
  Presentation p;
  std::istringstream in{std::string(text)};
  std::string line;
  bool in_axioms = false, have_name = false;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("name:", 0) == 0) {
      p.name = trim(std::string_view(t).substr(5));
      have_name = !p.name.empty();
      in_axioms = false;
    } else if (t.rfind("ops:", 0) == 0) {
      std::string rest = trim(std::string_view(t).substr(4));
      std::stringstream ss(rest);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        auto slash = item.find('/');
        if (slash == std::string::npos) fail("operation '" + item + "' lacks /arity");
        std::string name = trim(std::string_view(item).substr(0, slash));
        int arity = 0;
        try {
          arity = std::stoi(item.substr(slash + 1));
        } catch (...) {
          fail("bad arity in '" + item + "'");
        }
        try {
          p.signature.add({name, arity});
        } catch (const std::exception& e) {
          fail(e.what());
        }
      }
      in_axioms = false;
    } else if (t.rfind("axioms:", 0) == 0) {
      in_axioms = true;
      std::string rest = trim(std::string_view(t).substr(7));
      if (!rest.empty()) p.add_axiom(rest);
    } else if (in_axioms) {
      try {
        p.add_axiom(t);
      } catch (const ParseError& e) {
        fail(e.what());
      }
    } else {
      fail("unexpected line '" + t + "'");
    }
  }
  if (!have_name) throw std::runtime_error("theory file lacks a name field");
  return p;
}

std::string format_presentation(const Presentation& p) {
  std::string out = "name: " + p.name + "\nops: ";
  for (std::size_t i = 0; i < p.signature.ops().size(); ++i) {
    if (i) out += ", ";
    out += p.signature.ops()[i].name + "/" + std::to_string(p.signature.ops()[i].arity);
  }
  out += "\naxioms:\n";
  for (const auto& ax : p.axioms) out += "  " + to_string(ax.lhs) + " = " + to_string(ax.rhs) + "\n";
  return out;
}

std::string canonical_var(int i) { return "v" + std::to_string(i); }

}  // namespace wb
