#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "wb/distlaw.hpp"
#include "wb/hierarchy.hpp"
#include "wb/monads.hpp"
#include "wb/nogo.hpp"
#include "wb/rewrite.hpp"
#include "wb/theories.hpp"

using namespace wb;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A registered id, or a presentation file.
const TheoryEntry& resolve_theory(const std::string& arg) {
  if (const TheoryEntry* e = find_theory(arg)) return *e;
  if (std::filesystem::is_regular_file(arg)) {
    static std::vector<std::unique_ptr<TheoryEntry>> loaded;
    std::ifstream f(arg);
    std::stringstream ss;
    ss << f.rdbuf();
    loaded.push_back(std::make_unique<TheoryEntry>(user_theory(parse_presentation(ss.str()))));
    return *loaded.back();
  }
  return get_theory(arg);
}

std::string signature_text(const Signature& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.ops().size(); ++i)
    out += (i ? ", " : "") + s.ops()[i].name + "/" + std::to_string(s.ops()[i].arity);
  return out + "}";
}

int theories_list(const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const TheoryEntry* e : registered_theories())
      j.push_back({{"id", e->id},
                   {"label", e->label},
                   {"aliases", theory_aliases(*e)},
                   {"signature", signature_text(e->presentation.signature)},
                   {"procedure", e->decides()}});
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (const TheoryEntry* e : registered_theories()) {
    std::cout << e->id << "  " << e->label << "  " << signature_text(e->presentation.signature);
    auto aliases = theory_aliases(*e);
    if (!aliases.empty()) {
      std::cout << "  aka";
      for (const auto& a : aliases) std::cout << " " << a;
    }
    std::cout << "\n";
  }
  return 0;
}

int normalize_cmd(const std::string& theory, const std::string& term) {
  const TheoryEntry& e = resolve_theory(theory);
  if (!e.procedure) throw UsageError(e.id + " has no decision procedure; use prove-eq");
  std::cout << to_string(normalize(*e.procedure, e.parse(term))) << "\n";
  return 0;
}

int prove_eq(const std::string& theory, const std::string& a, const std::string& b, int depth) {
  const TheoryEntry& e = resolve_theory(theory);
  Presentation p = e.lemmas.empty() ? e.presentation : with_lemmas(e);
  TermPtr l = e.parse(a), r = e.parse(b);
  EqOutcome found = eq_bounded(p, l, r, depth);
  if (e.procedure) {
    bool eq = decide_eq(*e.procedure, l, r);
    std::cout << (eq ? "EQUAL" : "NOT EQUAL") << " (decision procedure)\n";
    std::cout << "derivation within " << depth << " steps: " << (found == EqOutcome::Equal ? "found" : "not found")
              << "\n";
    return eq ? 0 : 1;
  }
  if (found == EqOutcome::Equal) {
    std::cout << "EQUAL (derivation within " << depth << " steps)\n";
    return 0;
  }
  std::cout << "UNKNOWN (no derivation within " << depth << " steps)\n";
  return 1;
}

// Carrier labels avoid the constants of the monads involved.
FinCarrier carrier(int n, const std::vector<MonadPtr>& monads) {
  std::vector<std::string> reserved;
  for (const auto& m : monads)
    for (const auto& r : m->reserved_labels()) reserved.push_back(r);
  return FinCarrier::of_size(n, reserved);
}

int monad_laws(const std::string& monad, int n, int bound, int extra) {
  MonadPtr m = get_monad(monad);
  auto rep = check_monad_laws(m, carrier(n, {m}), bound, extra);
  std::string text = rep.describe();
  std::cout << text << (text.ends_with('\n') ? "" : "\n");
  return rep.ok() ? 0 : 1;
}

int law_check(const std::string& law, int n, int codomain, int bound, int extra, const std::string& format) {
  const DistLaw& l = get_law(law);
  BeckReport rep = check_beck(l, carrier(n, {l.s, l.t}), carrier(codomain < 0 ? n : codomain, {l.s, l.t}), bound, extra);
  if (format == "json") {
    std::cout << rep.json() << "\n";
  } else {
    std::cout << rep.text();
    for (const auto& v : rep.violations)
      std::cout << "witness " << to_string(v.input) << " " << v.axiom << " " << to_string(v.lhs)
                << " ≠ " << to_string(v.rhs) << "\n";
  }
  return rep.ok() ? 0 : 1;
}

int law_search(const std::string& s, const std::string& t, const SearchOptions& o) {
  auto r = search_distlaw_bounded(get_monad(s), get_monad(t), o);
  std::cout << r.describe();
  return r.status == SearchResult::Status::Candidates ? 0 : 1;
}

int nogo(const std::string& s, const std::string& t, const Bounds& b, const std::string& format) {
  NoGoVerdict v = verdict(resolve_theory(s), resolve_theory(t), b);
  if (format == "json") {
    std::cout << v.json() << "\n";
  } else {
    std::cout << v.headline() << "\n" << v.text();
  }
  return v.status == NoGoVerdict::Status::NoDistLaw ? 1 : 0;
}

int boom_table(const std::string& variant, const std::string& format, const std::string& golden, const Bounds& b) {
  auto v = parse_variant(variant);
  if (!v) throw UsageError("unknown table '" + variant + "'; use original, extended or full");
  VerdictTable t = build_table(*v, b);
  std::cout << (format == "csv" ? t.csv() : t.markdown());
  if (golden.empty()) return 0;
  auto diff = diff_table_file(t, golden);
  std::cout << "\ngolden " << golden << ": " << diff.size() << " mismatches\n";
  for (const auto& m : diff)
    std::cout << "cell " << m.row << "/" << m.column << ": expected " << m.expected << ", got " << m.got << "\n";
  return diff.empty() ? 0 : 1;
}

int plotkin(bool all, const std::string& format) {
  auto r = plotkin_refute_bounded();
  std::cout << (format == "json" ? r.json() + "\n" : r.text(all));
  return r.survivors == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for distributive laws, algebraic theories and no-go theorems"};
  app.require_subcommand(1);
  int result = 0;

  std::string format = "text";
  auto formats = CLI::IsMember({"text", "json"});

  auto* theories = app.add_subcommand("theories", "Registered algebraic theories");
  theories->require_subcommand(1);
  auto* tlist = theories->add_subcommand("list", "List registered theories");
  tlist->add_option("--format", format, "text or json")->check(formats);
  tlist->callback([&] { result = theories_list(format); });

  std::string theory, t1, t2;
  int depth = 3;
  auto* norm = app.add_subcommand("normalize", "Normal form of a term");
  norm->add_option("theory", theory, "Theory id or presentation file")->required();
  norm->add_option("term", t1, "Term in prefix notation")->required();
  norm->callback([&] { result = normalize_cmd(theory, t1); });

  auto* prove = app.add_subcommand("prove-eq", "Decide or search for an equation");
  prove->add_option("theory", theory, "Theory id or presentation file")->required();
  prove->add_option("lhs", t1)->required();
  prove->add_option("rhs", t2)->required();
  prove->add_option("--depth", depth, "Rewrite steps for the bounded search")->capture_default_str();
  prove->callback([&] { result = prove_eq(theory, t1, t2, depth); });

  std::string monad;
  int carrier = 2, bound = 3, extra = 0, codomain = -1;
  auto* laws = app.add_subcommand("monad-laws", "Check unit and associativity laws of a monad");
  laws->add_option("monad", monad)->required();
  laws->add_option("--carrier", carrier)->capture_default_str();
  laws->add_option("--bound", bound)->capture_default_str();
  laws->add_option("--extra", extra, "Extra total weight")->capture_default_str();
  laws->callback([&] { result = monad_laws(monad, carrier, bound, extra); });

  auto* law = app.add_subcommand("law", "Distributive laws");
  law->require_subcommand(1);
  std::string law_id, value;
  auto* apply = law->add_subcommand("apply", "Apply a law to a value of S(T(X))");
  apply->add_option("law", law_id)->required();
  apply->add_option("value", value)->required();
  apply->callback([&] {
    std::cout << to_string(apply_law(get_law(law_id), value)) << "\n";
    result = 0;
  });

  auto* check = law->add_subcommand("check", "Check naturality and Beck's axioms");
  check->add_option("law", law_id)->required();
  check->add_option("--carrier", carrier)->capture_default_str();
  check->add_option("--codomain", codomain, "Size of Y for naturality (default: carrier)");
  check->add_option("--bound", bound)->capture_default_str();
  check->add_option("--extra", extra)->capture_default_str();
  check->add_option("--format", format)->check(formats);
  check->callback([&] { result = law_check(law_id, carrier, codomain, bound, extra, format); });

  std::string s_id, t_id;
  SearchOptions so;
  int search_carrier = 1, search_bound = 2;
  auto* search = law->add_subcommand("search", "Bounded search for laws S T => T S");
  search->add_option("S", s_id)->required();
  search->add_option("T", t_id)->required();
  search->add_option("--carrier", search_carrier, "Carrier of the multiplication instances")->capture_default_str();
  search->add_option("--bound", search_bound)->capture_default_str();
  search->add_option("--extra", so.extra)->capture_default_str();
  search->add_option("--table-carrier", so.table_carrier, "Carrier of the tabulated law (default: carrier + 1)");
  search->add_option("--max-candidates", so.max_candidates)->capture_default_str();
  search->callback([&] {
    so.carrier = search_carrier;
    so.bound = search_bound;
    result = law_search(s_id, t_id, so);
  });

  Bounds bounds;
  auto* ng = app.add_subcommand("nogo", "Verdict on a law S T => T S");
  ng->add_option("S", s_id)->required();
  ng->add_option("T", t_id)->required();
  ng->add_option("--depth", bounds.depth, "Term depth for bounded certificates")->capture_default_str();
  ng->add_option("--vars", bounds.vars, "Variables for bounded certificates")->capture_default_str();
  ng->add_option("--format", format)->check(formats);
  ng->callback([&] { result = nogo(s_id, t_id, bounds, format); });

  std::string variant, table_format = "md", golden;
  auto* table = app.add_subcommand("boom-table", "Distributive laws in the Boom hierarchy");
  table->add_option("variant", variant, "original, extended or full")->required();
  table->add_option("--format", table_format)->check(CLI::IsMember({"md", "csv"}))->capture_default_str();
  table->add_option("--golden", golden, "Golden CSV to diff against");
  table->add_option("--depth", bounds.depth)->capture_default_str();
  table->add_option("--vars", bounds.vars)->capture_default_str();
  table->callback([&] { result = boom_table(variant, table_format, golden, bounds); });

  bool all = false;
  auto* pk = app.add_subcommand("plotkin-refute", "Plotkin's counterexample on denominators up to 2");
  pk->add_flag("--all", all, "List every candidate with its violated constraints");
  pk->add_option("--format", format)->check(formats);
  pk->callback([&] { result = plotkin(all, format); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValueParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const GoldenFormatError& e) {
    std::cerr << "golden file: " << e.what() << "\n";
    return 2;
  } catch (const GoldenDimensionError& e) {
    std::cerr << "golden file: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return result;
}
