#include "wb/rewrite.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace wb {

bool match(const TermPtr& pattern, const TermPtr& t, Substitution& s) {
  if (pattern->is_var()) {
    auto [it, inserted] = s.emplace(pattern->name(), t);
    return inserted || equal(it->second, t);
  }
  if (t->is_var() || pattern->name() != t->name() || pattern->args().size() != t->args().size())
    return false;
  for (std::size_t i = 0; i < t->args().size(); ++i)
    if (!match(pattern->args()[i], t->args()[i], s)) return false;
  return true;
}

namespace {

using Emit = std::function<void(const TermPtr&)>;

void unbound_vars(const TermPtr& t, const Substitution& s, std::vector<std::string>& out) {
  if (t->is_var()) {
    if (!s.count(t->name()) && std::find(out.begin(), out.end(), t->name()) == out.end())
      out.push_back(t->name());
    return;
  }
  for (const auto& a : t->args()) unbound_vars(a, s, out);
}

void instantiate(const TermPtr& to, Substitution& s, const std::vector<std::string>& free,
                 std::size_t k, const std::vector<TermPtr>& fillers, int budget, const Emit& emit) {
  if (k == free.size()) {
    TermPtr r = substitute(to, s);
    if (r->size() <= budget) emit(r);
    return;
  }
  for (const auto& f : fillers) {
    s[free[k]] = f;
    instantiate(to, s, free, k + 1, fillers, budget, emit);
  }
  s.erase(free[k]);
}

void root_steps(const Presentation& p, const TermPtr& t, const StepOptions& opt, int budget,
                const Emit& emit) {
  for (const auto& ax : p.axioms) {
    for (int dir = 0; dir < 2; ++dir) {
      const TermPtr& from = dir == 0 ? ax.lhs : ax.rhs;
      const TermPtr& to = dir == 0 ? ax.rhs : ax.lhs;
      Substitution s;
      if (!match(from, t, s)) continue;
      std::vector<std::string> free;
      unbound_vars(to, s, free);
      instantiate(to, s, free, 0, opt.fillers, budget, emit);
    }
  }
}

void steps_at(const Presentation& p, const TermPtr& t, const StepOptions& opt, int budget,
              const Emit& emit) {
  root_steps(p, t, opt, budget, emit);
  if (t->is_var()) return;
  for (std::size_t i = 0; i < t->args().size(); ++i) {
    const TermPtr& a = t->args()[i];
    int inner_budget = budget - (t->size() - a->size());
    if (inner_budget <= 0) continue;
    steps_at(p, a, opt, inner_budget, [&](const TermPtr& r) {
      std::vector<TermPtr> args = t->args();
      args[i] = r;
      emit(Term::app(t->name(), std::move(args)));
    });
  }
}

bool root_one_step(const Presentation& p, const TermPtr& s, const TermPtr& t) {
  for (const auto& ax : p.axioms) {
    for (int dir = 0; dir < 2; ++dir) {
      const TermPtr& from = dir == 0 ? ax.lhs : ax.rhs;
      const TermPtr& to = dir == 0 ? ax.rhs : ax.lhs;
      Substitution sub;
      if (match(from, s, sub) && match(to, t, sub)) return true;
    }
  }
  return false;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

void for_each_step(const Presentation& p, const TermPtr& t, const StepOptions& opt,
                   const std::function<void(const TermPtr&)>& visit) {
  steps_at(p, t, opt, opt.max_size, visit);
}

std::vector<TermPtr> neighbors(const Presentation& p, const TermPtr& t, const StepOptions& opt) {
  std::vector<TermPtr> out;
  std::unordered_set<TermPtr, TermHash, TermEq> seen;
  for_each_step(p, t, opt, [&](const TermPtr& r) {
    if (seen.insert(r).second) out.push_back(r);
  });
  return out;
}

bool is_one_step(const Presentation& p, const TermPtr& s, const TermPtr& t) {
  if (root_one_step(p, s, t)) return true;
  if (s->is_var() || t->is_var() || s->name() != t->name() ||
      s->args().size() != t->args().size())
    return false;
  int differing = -1;
  for (std::size_t i = 0; i < s->args().size(); ++i) {
    if (equal(s->args()[i], t->args()[i])) continue;
    if (differing >= 0) return false;
    differing = static_cast<int>(i);
  }
  return differing >= 0 && is_one_step(p, s->args()[differing], t->args()[differing]);
}

int check_derivation(const Presentation& p, const std::vector<TermPtr>& chain) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!is_one_step(p, chain[i], chain[i + 1])) return static_cast<int>(i);
  return -1;
}

int default_slack(const Presentation& p) {
  int m = 0;
  for (const auto& ax : p.axioms) m = std::max({m, ax.lhs->size(), ax.rhs->size()});
  return m;
}

std::vector<TermPtr> default_fillers(const Presentation& p, const std::vector<TermPtr>& terms) {
  std::set<std::string> names;
  for (const auto& t : terms)
    for (const auto& v : vars(t)) names.insert(v);
  std::vector<TermPtr> out;
  for (const auto& v : names) out.push_back(Term::var(v));
  for (const auto& c : p.signature.constants()) out.push_back(Term::app(c));
  return out;
}

EqOutcome eq_bounded(const Presentation& p, const TermPtr& t1, const TermPtr& t2, int depth,
                     const EqBoundedOptions& opt) {
  if (equal(t1, t2)) return EqOutcome::Equal;
  StepOptions so;
  so.fillers = default_fillers(p, {t1, t2});
  so.max_size = std::max(t1->size(), t2->size()) + (opt.slack < 0 ? default_slack(p) : opt.slack);

  using Seen = std::unordered_set<TermPtr, TermHash, TermEq>;
  Seen seen[2];
  std::vector<TermPtr> frontier[2];
  seen[0].insert(t1);
  seen[1].insert(t2);
  frontier[0].push_back(t1);
  frontier[1].push_back(t2);

  for (int used = 0; used < depth; ++used) {
    int side;
    if (frontier[0].empty() && frontier[1].empty()) break;
    if (frontier[0].empty())
      side = 1;
    else if (frontier[1].empty())
      side = 0;
    else
      side = frontier[0].size() <= frontier[1].size() ? 0 : 1;
    std::vector<TermPtr> next;
    bool met = false;
    for (const auto& t : frontier[side]) {
      for_each_step(p, t, so, [&](const TermPtr& r) {
        if (met) return;
        if (seen[1 - side].count(r)) {
          met = true;
          return;
        }
        if (seen[side].insert(r).second) next.push_back(r);
      });
      if (met) return EqOutcome::Equal;
      if (seen[0].size() + seen[1].size() > opt.node_cap) return EqOutcome::Unknown;
    }
    frontier[side] = std::move(next);
  }
  return EqOutcome::Unknown;
}

std::vector<int> closure_classes(const Presentation& p, const std::vector<TermPtr>& universe,
                                 int steps, const EqBoundedOptions& opt) {
  std::unordered_map<TermPtr, int, TermHash, TermEq> index;
  for (std::size_t i = 0; i < universe.size(); ++i) index.emplace(universe[i], static_cast<int>(i));
  UnionFind uf(universe.size());
  StepOptions so;
  so.fillers = default_fillers(p, universe);
  int slack = opt.slack < 0 ? default_slack(p) : opt.slack;

  for (std::size_t i = 0; i < universe.size(); ++i) {
    so.max_size = universe[i]->size() + slack;
    std::unordered_set<TermPtr, TermHash, TermEq> seen{universe[i]};
    std::vector<TermPtr> frontier{universe[i]};
    for (int r = 0; r < steps && !frontier.empty(); ++r) {
      std::vector<TermPtr> next;
      for (const auto& t : frontier) {
        for_each_step(p, t, so, [&](const TermPtr& u) {
          if (!seen.insert(u).second) return;
          next.push_back(u);
          auto it = index.find(u);
          if (it != index.end()) uf.unite(static_cast<int>(i), it->second);
        });
      }
      if (seen.size() > opt.node_cap) break;
      frontier = std::move(next);
    }
  }
  std::vector<int> cls(universe.size());
  std::unordered_map<int, int> renumber;
  for (std::size_t i = 0; i < universe.size(); ++i) {
    int root = uf.find(static_cast<int>(i));
    auto [it, inserted] = renumber.emplace(root, static_cast<int>(renumber.size()));
    cls[i] = it->second;
  }
  return cls;
}

}  // namespace wb
