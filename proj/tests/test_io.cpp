#include "relk/dot.hpp"
#include "relk/json_io.hpp"
#include "relk/randgen.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace relk;

namespace {

const FreeModule P = zmod(1, "P");
const FreeModule Q = zmod(1, "Q");

BassSwanTriple t_of(long v) { return make_triple(P, mat_from_rows(1, 1, {{v}}), Q); }

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("rationals and matrices round trip") {
  Rat r(-7, 3);
  CHECK(rat_from_json(to_json(r)) == r);
  RatMat m(2, 3, {Rat(1, 2), Rat(0), Rat(-3), Rat(5, 7), Rat(2), Rat(9, 4)});
  CHECK(mat_from_json(to_json(m)) == m);
  // Big integers survive through the string fallback.
  Rat big = Rat(Int("123456789012345678901234567890"), Int(7));
  CHECK(rat_from_json(to_json(big)) == big);
}

TEST_CASE("triples round trip and revalidate") {
  BassSwanTriple t = t_of(2);
  BassSwanTriple back = triple_from_json(to_json(t));
  CHECK(back.P == t.P);
  CHECK(back.Q == t.Q);
  CHECK(back.phi == t.phi);
  Json j = to_json(t);
  j["phi"][0][0] = 0;
  CHECK_THROWS_AS(triple_from_json(j), Error);
}

TEST_CASE("schematic round trips to an equal compilation") {
  Schematic s = theta_schematic(t_of(2));
  Schematic back = schematic_from_json(to_json(s));
  CHECK(des_equal(compile_schematic(s), compile_schematic(back)));
}

TEST_CASE("emitted JSON is deterministic") {
  Schematic s = theta_schematic(t_of(3));
  CHECK(dump_json(to_json(s)) == dump_json(to_json(theta_schematic(t_of(3)))));
  Derivation d1 = replay(builtin_sv1_script(P));
  Derivation d2 = replay(builtin_sv1_script(P));
  CHECK(dump_json(derivation_to_json(d1)) == dump_json(derivation_to_json(d2)));
}

TEST_CASE("proof scripts round trip through JSON and replay identically") {
  ProofScript sc = builtin_sv1_script(P);
  ProofScript back = script_from_json(to_json(sc));
  Derivation a = replay(sc);
  Derivation b = replay(back);
  CHECK(dump_json(derivation_to_json(a)) == dump_json(derivation_to_json(b)));
}

TEST_CASE("relation B script JSON round trip") {
  BassSwanTriple t1 = t_of(2);
  BassSwanTriple t2 = make_triple(Q, mat_from_rows(1, 1, {{3}}), zmod(1, "R"));
  ProofScript sc = builtin_relation_b_script(t1, t2);
  ProofScript back = script_from_json(to_json(sc));
  CHECK(dump_json(derivation_to_json(replay(sc))) ==
        dump_json(derivation_to_json(replay(back))));
}

TEST_CASE("morphism expression trees round trip") {
  ExprPtr e = ex_sum(ex_comp(ex_quot(P), ex_iota(P)), ex_neg(ex_comp(ex_quot(P), ex_iota(P))));
  ExprPtr back = expr_from_json(to_json(e));
  CHECK(back->key() == e->key());
}

TEST_CASE("ledger generators re-parse to equal classes") {
  Derivation d = replay(builtin_relation_b_script(
      t_of(2), make_triple(Q, mat_from_rows(1, 1, {{3}}), zmod(1, "R"))));
  Json ledger = derivation_to_json(d);
  for (const auto& g : ledger["generators"]) {
    DoubleExact back = des_from_json(g["des"]);
    CHECK(d.identity.count(des_key(back)) == 1);
  }
}

TEST_CASE("dot output marks Yin solid and Yang dashed") {
  std::string dot = dot_of_des(theta(t_of(2)), "test");
  CHECK(dot.find("style=solid") != std::string::npos);
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("iota") != std::string::npos);
  std::string pathdot = dot_of_path(boundary(t_of(2)).path, "path");
  CHECK(pathdot.find("reversed") != std::string::npos);
}

TEST_SUITE_END();

// Exec-level tests for the installed binary; enabled when RELK_CLI_BIN points
// at it (ctest sets this).
namespace {

struct CliResult {
  int status = -1;
  std::string out;
};

CliResult run_cli(const std::string& args, const std::string& stdin_text) {
  const char* bin = std::getenv("RELK_CLI_BIN");
  REQUIRE(bin != nullptr);
  std::string in_path = std::string("/tmp/relk_cli_in_") + std::to_string(::getpid()) + ".json";
  {
    std::ofstream f(in_path);
    f << stdin_text;
  }
  std::string cmd = std::string(bin) + " " + args + " --in " + in_path + " 2>/tmp/relk_cli_err.txt";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  std::remove(in_path.c_str());
  return CliResult{WEXITSTATUS(status), out};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli_exec");

TEST_CASE("invariant prints the exact rational") {
  auto r = run_cli("invariant", dump_json(to_json(t_of(2))));
  CHECK(r.status == 0);
  CHECK(r.out == "2/1\n");
}

TEST_CASE("theta emits a reparseable schematic") {
  auto r = run_cli("theta", dump_json(to_json(t_of(2))));
  CHECK(r.status == 0);
  Schematic s = schematic_from_json(Json::parse(r.out));
  CHECK(s.above.size() == 5);
}

TEST_CASE("replay of the builtin relation B ledger") {
  Json req{{"builtin", "relation_b"},
           {"t1", to_json(t_of(2))},
           {"t2", to_json(make_triple(Q, mat_from_rows(1, 1, {{3}}), zmod(1, "R")))}};
  auto r = run_cli("replay", dump_json(req));
  CHECK(r.status == 0);
  Json ledger = Json::parse(r.out);
  std::multiset<int> coeffs;
  for (const auto& [k, v] : ledger["identity"].items()) coeffs.insert(v.get<int>());
  CHECK(coeffs == std::multiset<int>{-1, 1, 1});
}

TEST_CASE("check-33 names the failing square and exits 1") {
  // A valid split diagram first.
  ShortExact row = canonical_of(Cert::lattice(P));
  DoubleExact d1 = des_doubled(row);
  DoubleExact both = direct_sum_des(d1, d1);
  auto split = [&](const Obj& a, const Obj& b) {
    return des_doubled(
        canonical_of(Cert::direct_sum({Cert::identity_left(a), Cert::identity_right(b)})));
  };
  Nen33 n;
  n.rows = {d1, both, d1};
  n.cols = {split(d1.yin.left, d1.yin.left), split(d1.yin.mid, d1.yin.mid),
            split(d1.yin.right, d1.yin.right)};
  auto ok = run_cli("check-33", dump_json(to_json(n)));
  CHECK(ok.status == 0);

  // Now a diagram whose certificates survive but whose Yang square breaks:
  // negate the first conjugation column of the mirror-swap diagram.
  BassSwanTriple tid = make_triple(P, RatMat::identity(1), zmod(1, "P"));
  Schematic sch = theta_schematic(tid);
  Obj la = col_left(sch.above), ma = col_mid(sch.above), ra = col_right(sch.above);
  Mor sl = swap_pairs_mor(la, {{0, 2}, {1, 3}});
  Mor sm = swap_pairs_mor(ma, {{0, 3}, {2, 4}});
  Mor sr = swap_pairs_mor(ra, {{0, 2}, {1, 3}});
  DoubleExact kappa = compile_schematic(sch);
  DoubleExact swapped = compile_schematic(rewire_schematic(sch, sl, sm, sr));
  Nen33 conj;
  conj.rows = {kappa, swapped, zero_des()};
  conj.cols = {conj_col_des(la, -sl), conj_col_des(ma, sm), conj_col_des(ra, sr)};
  auto bad = run_cli("check-33", dump_json(to_json(conj)));
  CHECK(bad.status == 1);
  std::string err = slurp("/tmp/relk_cli_err.txt");
  CHECK(err.find("square") != std::string::npos);
}

TEST_CASE("parse errors exit 2") {
  auto r = run_cli("theta", "{this is not json");
  CHECK(r.status == 2);
}

TEST_CASE("invalid scripts exit 1 on replay") {
  ProofScript sc;
  Step st;
  st.kind = StepKind::LinearCombine;
  st.refs = {3};
  st.coeffs = {Int(1)};
  sc.steps.push_back(st);
  auto r = run_cli("replay", dump_json(to_json(sc)));
  CHECK(r.status == 1);
  CHECK(slurp("/tmp/relk_cli_err.txt").find("StepInvalid") != std::string::npos);
}

TEST_CASE("boundary reports endpoint labels") {
  auto r = run_cli("boundary", dump_json(to_json(t_of(2))));
  CHECK(r.status == 0);
  Json j = Json::parse(r.out);
  CHECK(j["endpoint"] == Json::array({"Q", "P"}));
  CHECK(j["class"] == Json::array({0}));
}

TEST_CASE("identical inputs produce byte-identical outputs") {
  std::string in = dump_json(to_json(t_of(2)));
  auto a = run_cli("theta", in);
  auto b = run_cli("theta", in);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("render emits DOT for triples and schematics") {
  auto r = run_cli("render", dump_json(to_json(t_of(2))));
  CHECK(r.status == 0);
  CHECK(r.out.find("digraph") != std::string::npos);
  auto r2 = run_cli("render", dump_json(to_json(theta_schematic(t_of(2)))));
  CHECK(r2.status == 0);
  CHECK(r2.out.find("style=dashed") != std::string::npos);
}

TEST_SUITE_END();
