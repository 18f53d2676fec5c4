#pragma once

// Plain term enumerator for tests, independent of the library's census code.

#include <vector>

#include "wb/term.hpp"

namespace wbtest {

inline std::vector<wb::TermPtr> all_terms(const wb::Signature& sig,
                                          const std::vector<std::string>& vars, int depth) {
  std::vector<wb::TermPtr> level;
  for (const auto& v : vars) level.push_back(wb::Term::var(v));
  for (const auto& op : sig.ops())
    if (op.arity == 0) level.push_back(wb::Term::app(op.name));
  std::size_t atoms = level.size();
  for (int d = 1; d <= depth; ++d) {
    std::vector<wb::TermPtr> next(level.begin(), level.begin() + static_cast<long>(atoms));
    for (const auto& op : sig.ops()) {
      if (op.arity == 0) continue;
      std::vector<std::size_t> idx(op.arity, 0);
      for (;;) {
        std::vector<wb::TermPtr> args;
        for (auto i : idx) args.push_back(level[i]);
        next.push_back(wb::Term::app(op.name, args));
        int k = op.arity - 1;
        while (k >= 0 && ++idx[k] == level.size()) idx[k--] = 0;
        if (k < 0) break;
      }
    }
    level = std::move(next);
  }
  return level;
}

}  // namespace wbtest
