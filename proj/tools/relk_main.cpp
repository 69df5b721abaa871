#include "relk/dot.hpp"
#include "relk/json_io.hpp"
#include "relk/randgen.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace relk;

int g_log_level = 0;  // 0 quiet, 1 info, 2 debug

void init_log() {
  const char* env = std::getenv("RELK_LOG");
  if (!env) return;
  std::string v(env);
  if (v == "info") g_log_level = 1;
  if (v == "debug") g_log_level = 2;
}

void log_info(const std::string& msg) {
  if (g_log_level >= 1) std::cerr << "[relk] " << msg << "\n";
}

Json read_json(const std::string& path) {
  std::istream* in = &std::cin;
  std::ifstream file;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) fail(Err::ParseError, "cannot open input file " + path);
    in = &file;
  }
  Json j;
  try {
    *in >> j;
  } catch (const std::exception& e) {
    fail(Err::ParseError, std::string("invalid JSON: ") + e.what());
  }
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) fail(Err::ParseError, "cannot open output file " + path);
  out << text;
}

struct Options {
  std::string in, out, dot;
  unsigned long seed = 0;
  int max_rank = 3;
};

int run_theta(const Options& opt) {
  BassSwanTriple t = triple_from_json(read_json(opt.in));
  Schematic s = theta_schematic(t);
  DoubleExact d = theta(t);
  log_info("compiled schematic with " + std::to_string(s.above.size()) + "+" +
           std::to_string(s.below.size()) + " rows");
  write_text(opt.out, dump_json(to_json(s)));
  if (!opt.dot.empty()) write_text(opt.dot, dot_of_des(d, "theta"));
  return 0;
}

int run_check33(const Options& opt) {
  Nen33 n = nen33_from_json(read_json(opt.in));
  Derivation d = check_33(n);
  Json rep{{"schema_version", 1}, {"valid", true}, {"derivation", derivation_to_json(d)}};
  write_text(opt.out, dump_json(rep));
  return 0;
}

ProofScript script_from_request(const Json& j, const Options& opt) {
  if (!j.contains("builtin")) return script_from_json(j);
  std::string which = j["builtin"].get<std::string>();
  bool randomize = j.value("random", false);
  std::mt19937_64 rng(opt.seed);
  if (which == "sv1") {
    FreeModule P = randomize ? zmod(std::uniform_int_distribution<int>(1, opt.max_rank)(rng), "P")
                             : module_from_json(j.at("P"));
    return builtin_sv1_script(P);
  }
  if (which == "relation_a") {
    if (randomize) {
      SplitInstance inst = random_split_instance(rng, std::min(opt.max_rank, 2));
      return builtin_relation_a_script(inst.a, inst.b, inst.split_p, inst.split_q);
    }
    return builtin_relation_a_script(swan_from_json(j.at("a")), swan_from_json(j.at("b")),
                                     split_from_json(j.at("split_p")),
                                     split_from_json(j.at("split_q")));
  }
  if (which == "relation_b") {
    if (randomize) {
      auto [t1, t2] = random_composable_pair(rng, opt.max_rank);
      return builtin_relation_b_script(t1, t2);
    }
    return builtin_relation_b_script(triple_from_json(j.at("t1")), triple_from_json(j.at("t2")));
  }
  if (which == "sw1") {
    if (randomize) {
      int n = std::uniform_int_distribution<int>(1, opt.max_rank)(rng);
      return builtin_sw1_script(random_invertible(rng, static_cast<std::size_t>(n)), n);
    }
    int n = j.at("n").get<int>();
    return builtin_sw1_script(
        mat_from_entries(j.at("phi"), static_cast<std::size_t>(n), static_cast<std::size_t>(n)),
        n);
  }
  fail(Err::ParseError, "unknown builtin script '" + which + "'");
}

int run_replay(const Options& opt) {
  Json j = read_json(opt.in);
  ProofScript sc = script_from_request(j, opt);
  log_info("replaying " + std::to_string(sc.steps.size()) + " steps");
  Derivation d = replay(sc);
  write_text(opt.out, dump_json(derivation_to_json(d)));
  return 0;
}

int run_boundary(const Options& opt) {
  BassSwanTriple t = triple_from_json(read_json(opt.in));
  BoundaryResult r = boundary(t);
  write_text(opt.out, dump_json(boundary_to_json(r)));
  if (!opt.dot.empty()) write_text(opt.dot, dot_of_path(r.path, "lifted path"));
  return 0;
}

int run_invariant(const Options& opt) {
  BassSwanTriple t = triple_from_json(read_json(opt.in));
  Rat v = det_invariant(t);
  write_text(opt.out, rat_str(v) + "\n");
  return 0;
}

int run_render(const Options& opt) {
  Json j = read_json(opt.in);
  std::string out = opt.dot.empty() ? opt.out : opt.dot;
  if (j.contains("above")) {
    write_text(out, dot_of_schematic(schematic_from_json(j), "schematic"));
  } else if (j.contains("phi")) {
    write_text(out, dot_of_des(theta(triple_from_json(j)), "theta"));
  } else if (j.contains("yin")) {
    write_text(out, dot_of_des(des_from_json(j), "double exact sequence"));
  } else {
    fail(Err::ParseError, "render expects a schematic, triple or double exact sequence");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_log();
  CLI::App app{"relk - explicit presentations of relative K-groups over LCA modules"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool with_dot) {
    sub->add_option("--in", opt.in, "input JSON path ('-' for stdin)");
    sub->add_option("--out", opt.out, "output path ('-' for stdout)");
    if (with_dot) sub->add_option("--dot", opt.dot, "also write a DOT figure here");
  };

  CLI::App* c_theta = app.add_subcommand("theta", "triple -> schematic JSON (+ DOT)");
  add_common(c_theta, true);
  CLI::App* c_check = app.add_subcommand("check-33", "validate a 3x3 diagram");
  add_common(c_check, false);
  CLI::App* c_replay = app.add_subcommand("replay", "replay a proof script, emit the ledger");
  add_common(c_replay, false);
  c_replay->add_option("--seed", opt.seed, "seed for builtin script fuzzing");
  c_replay->add_option("--max-rank", opt.max_rank, "rank bound for fuzzing");
  CLI::App* c_boundary = app.add_subcommand("boundary", "triple -> class + endpoint + path");
  add_common(c_boundary, true);
  CLI::App* c_inv = app.add_subcommand("invariant", "triple -> exact |det|");
  add_common(c_inv, false);
  CLI::App* c_render = app.add_subcommand("render", "emit a DOT figure");
  add_common(c_render, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_theta->parsed()) return run_theta(opt);
    if (c_check->parsed()) return run_check33(opt);
    if (c_replay->parsed()) return run_replay(opt);
    if (c_boundary->parsed()) return run_boundary(opt);
    if (c_inv->parsed()) return run_invariant(opt);
    if (c_render->parsed()) return run_render(opt);
  } catch (const relk::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == relk::Err::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
