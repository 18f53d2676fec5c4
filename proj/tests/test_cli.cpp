#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run wb(const std::string& args) {
  std::string cmd = std::string(WB_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("law apply") {
  auto r = wb("law apply mset-cartesian '{{a:1,b:2}:2}'");
  CHECK(r.code == 0);
  CHECK(r.out == "{{a:2}:1,{a:1,b:1}:4,{b:2}:4}\n");
  CHECK(wb("law apply list-swap-typo '[]'").code == 2);
  CHECK(wb("law apply mset-cartesian '{{a:1'").code == 2);
}

TEST_CASE("law check on the faulty law reports the mult1 witness") {
  auto r = wb("law check faulty-list-exception --carrier 1 --bound 2");
  CHECK(r.code == 1);
  CHECK(contains(r.out, "witness [[b],[]] mult1 b ≠ a"));
  CHECK_FALSE(contains(r.out, "witness [[b],[]] naturality"));
  auto ok = wb("law check choice:list:powerset --carrier 2 --bound 2");
  CHECK(ok.code == 0);
  CHECK_FALSE(contains(ok.out, "witness"));
  auto j = wb("law check faulty-list-exception --carrier 1 --bound 2 --format json");
  CHECK(j.code == 1);
  CHECK(j.out.front() == '{');
}

TEST_CASE("nogo headline and exit code") {
  auto r = wb("nogo boom:UA-- boom:UA--");
  CHECK(r.code == 1);
  CHECK(first_line(r.out) == "NO (LackingAbides)");
  auto y = wb("nogo boom:UA-- boom:UAC-");
  CHECK(y.code == 0);
  CHECK(first_line(y.out) == "YES (choice:list:multiset)");
  auto u = wb("nogo boom:---- boom:---I");
  CHECK(u.code == 0);
  CHECK(first_line(u.out) == "UNKNOWN");
  CHECK(wb("nogo boom:UA-- nosuch").code == 2);
}

TEST_CASE("theories, normalize, prove-eq") {
  auto l = wb("theories list");
  CHECK(l.code == 0);
  CHECK(contains(l.out, "boom:UA--  L"));
  CHECK(contains(l.out, "jsl"));
  auto n = wb("normalize boom:UAC- 'mul(y1,mul(e,y0))'");
  CHECK(n.code == 0);
  CHECK(n.out == "mul(y0,y1)\n");
  CHECK(wb("normalize boom:UAC- 'plus(y0'").code == 2);
  CHECK(wb("prove-eq monoid 'mul(x,mul(y,z))' 'mul(mul(x,y),z)'").code == 0);
  auto ne = wb("prove-eq monoid 'mul(x,y)' 'mul(y,x)'");
  CHECK(ne.code == 1);
  CHECK(first_line(ne.out) == "NOT EQUAL (decision procedure)");
}

TEST_CASE("presentation file as theory") {
  std::string path = "test_cli_semilattice.txt";
  {
    std::ofstream f(path);
    f << "name: semilattice\n"
         "ops: j/2\n"
         "axioms:\n"
         "  j(x, j(y, z)) = j(j(x, y), z)\n"
         "  j(x, y) = j(y, x)\n"
         "  j(x, x) = x\n";
  }
  auto r = wb("prove-eq " + path + " 'j(x,j(y,x))' 'j(x,y)' --depth 4");
  CHECK(r.code == 0);
  CHECK(first_line(r.out) == "EQUAL (derivation within 4 steps)");
  auto u = wb("prove-eq " + path + " 'j(x,y)' 'x' --depth 2");
  CHECK(u.code == 1);
  CHECK(first_line(u.out) == "UNKNOWN (no derivation within 2 steps)");
  CHECK(wb("normalize " + path + " 'j(x,y)'").code == 2);
}

TEST_CASE("monad-laws and law search") {
  auto m = wb("monad-laws multiset --carrier 2 --bound 2");
  CHECK(m.code == 0);
  CHECK(m.out.back() == '\n');
  auto s = wb("law search list list --carrier 1 --bound 2");
  CHECK(s.code == 0);
  CHECK(s.out.rfind("Candidates", 0) == 0);
}

TEST_CASE("boom-table and golden diff") {
  std::string golden = std::string(WB_DATA_DIR) + "/golden_original.csv";
  auto r = wb("boom-table original --golden " + golden);
  CHECK(r.code == 0);
  CHECK(contains(r.out, "0 mismatches"));
  auto csv = wb("boom-table original --format csv");
  CHECK(csv.out.rfind("# variant: original\n,T,L,M,P\n", 0) == 0);

  std::string flipped = "test_cli_flipped.csv";
  {
    std::ofstream f(flipped);
    std::string text = csv.out;
    text.replace(text.find("N:LackingAbides"), 15, "Y:Invented");
    f << text;
  }
  auto bad = wb("boom-table original --format csv --golden " + flipped);
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "1 mismatches"));
  CHECK(contains(bad.out, "cell T/T: expected Y:Invented, got N:LackingAbides"));
  CHECK(wb("boom-table extended --golden " + golden).code == 2);
  CHECK(wb("boom-table huge").code == 2);
  CHECK(wb("boom-table original --golden /nonexistent.csv").code == 2);
}

TEST_CASE("plotkin-refute") {
  auto r = wb("plotkin-refute");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "survivors: 0"));
}

TEST_CASE("usage errors exit 2") {
  CHECK(wb("").code == 2);
  CHECK(wb("frobnicate").code == 2);
  CHECK(wb("law check choice:list:powerset --carrier x").code == 2);
  CHECK(wb("nogo boom:UA-- boom:UA-- --format yaml").code == 2);
  CHECK(wb("--help").code == 0);
}
