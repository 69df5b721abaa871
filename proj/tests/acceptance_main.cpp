// Acceptance suite: one line per criterion, exact arithmetic throughout.
// Exits nonzero if any criterion fails or exceeds its runtime budget.

#include "relk/dot.hpp"
#include "relk/gillet_grayson.hpp"
#include "relk/json_io.hpp"
#include "relk/randgen.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <vector>

using namespace relk;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int num, const std::string& name, bool pass, const std::string& detail, double secs,
            double budget) {
  bool in_budget = budget <= 0 || secs < budget;
  bool ok = pass && in_budget;
  if (!ok) ++g_failures;
  std::printf("%s  %d  %s (%s, %.2fs%s)\n", ok ? "PASS" : "FAIL", num, name.c_str(),
              detail.c_str(), secs, in_budget ? "" : " OVER BUDGET");
  std::fflush(stdout);
}

template <typename F>
void criterion(int num, const std::string& name, double budget, F&& body) {
  auto start = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    detail = body();
    pass = true;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  report(num, name, pass, detail, secs, budget);
}

std::string c1_theta_well_formed() {
  std::mt19937_64 rng(1001);
  int n = 200;
  for (int i = 0; i < n; ++i) {
    BassSwanTriple t = random_triple(rng, 3);
    DoubleExact d = theta(t);
    revalidate(d);  // exact certificate checks on both sequences
    if (!is_zero_morphism(compose(d.yin.sur, d.yin.inc)))
      throw std::runtime_error("r.p != 0");
    if (!is_zero_morphism(compose(d.yang.sur, d.yang.inc)))
      throw std::runtime_error("s.q != 0");
  }
  return std::to_string(n) + "/" + std::to_string(n) + " triples";
}

std::string c2_relation_a() {
  std::mt19937_64 rng(1002);
  int n = 50;
  for (int i = 0; i < n; ++i) {
    SplitInstance inst = random_split_instance(rng, 2);
    while (inst.a.target.P.rank > 2) inst = random_split_instance(rng, 2);  // every rank <= 2
    ProofScript sc = builtin_relation_a_script(inst.a, inst.b, inst.split_p, inst.split_q);
    Derivation d = replay(sc);
    if (d.identity.at(des_key(theta(inst.a.target))) != -1)
      throw std::runtime_error("middle coefficient is not -1");
    if (d.identity.at(des_key(theta(inst.a.source))) != 1 ||
        d.identity.at(des_key(theta(inst.b.target))) != 1)
      throw std::runtime_error("outer coefficients are not +1");
  }
  return std::to_string(n) + " split instances, 8 squares + 6 exactness checks each";
}

std::string c3_relation_b() {
  std::mt19937_64 rng(1003);
  int n = 50;
  for (int i = 0; i < n; ++i) {
    auto [t1, t2] = random_composable_pair(rng, 3);
    Derivation d = replay(builtin_relation_b_script(t1, t2));
    if (d.identity.size() != 3) throw std::runtime_error("identity does not have 3 generators");
    if (d.identity.at(des_key(theta(t1))) != 1 || d.identity.at(des_key(theta(t2))) != 1 ||
        d.identity.at(des_key(theta(relation_b_combine(t1, t2)))) != -1)
      throw std::runtime_error("identity is not [t1] + [t2] - [t1t2] = 0");
  }
  return std::to_string(n) + " composable pairs, identity +1 +1 -1";
}

std::string c4_det_invariant() {
  std::mt19937_64 rng(1004);
  int n = 500;
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> sz(1, 4);
    int r = sz(rng);
    std::size_t rs = static_cast<std::size_t>(r);
    BassSwanTriple t1 = make_triple(zmod(r, "P"), random_invertible(rng, rs), zmod(r, "Q"));
    BassSwanTriple t2 = make_triple(zmod(r, "Q"), random_invertible(rng, rs), zmod(r, "R"));
    if (det_invariant(relation_b_combine(t1, t2)) != det_invariant(t1) * det_invariant(t2))
      throw std::runtime_error("invariant is not multiplicative");
    RatMat phi = random_invertible(rng, rs);
    Rat expected = phi.det();
    if (expected < 0) expected = -expected;
    if (det_invariant(delta(phi, r)) != expected)
      throw std::runtime_error("delta invariant differs from |det|");
  }
  return std::to_string(n) + " pairs, exact equality";
}

std::string c5_boundary() {
  std::mt19937_64 rng(1005);
  int n = 100;
  for (int i = 0; i < n; ++i) {
    BassSwanTriple t = random_triple(rng, 3);
    BoundaryResult r = boundary(t);

    // Reduced schematic is structurally the four shift rows.
    const Schematic& s = r.reduced_schematic;
    if (s.above.size() != 2 || s.below.size() != 2)
      throw std::runtime_error("reduced schematic does not have 2 + 2 rows");
    ShortExact e_idp = canonical_of(Cert::identity_right(Obj::single(coprod_disc(t.P))));
    ShortExact e_shq = canonical_of(Cert::quotient_cg_of(Cert::coprod_shift(t.Q)));
    ShortExact e_shp = canonical_of(Cert::quotient_cg_of(Cert::coprod_shift(t.P)));
    ShortExact e_idq = canonical_of(Cert::identity_right(Obj::single(coprod_disc(t.Q))));
    DoubleExact expected =
        des_of(se_direct_sum({e_idp, e_shq}), se_direct_sum({e_shp, e_idq}));
    if (des_key(r.reduced) != des_key(expected))
      throw std::runtime_error("reduced class is not the expected shift pair");

    LiftedEdge lift = lift_edge(r.reduced, t);
    if (lift.edge.dotted.right != lift.edge.solid.right)
      throw std::runtime_error("lift cokernels differ");
    if (!(r.endpoint.first == Obj::single(disc(t.Q))) ||
        !(r.endpoint.second == Obj::single(disc(t.P))))
      throw std::runtime_error("endpoint is not (Q, P)");
    if (r.k0 != std::vector<int>{0}) throw std::runtime_error("boundary class is not zero");
  }
  return std::to_string(n) + " triples, endpoint (Q, P), class 0";
}

std::string c6_sw1() {
  std::mt19937_64 rng(1006);
  int n = 50;
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> sz(1, 3);
    int r = sz(rng);
    RatMat phi = random_invertible(rng, static_cast<std::size_t>(r));
    ProofScript sc = builtin_sw1_script(phi, r);
    bool has_lr = false;
    for (const auto& st : sc.steps) has_lr |= st.kind == StepKind::LeftRightSwap;
    if (!has_lr) throw std::runtime_error("script has no left-right swap step");
    Derivation d = replay(sc);
    // Final identity: [theta(delta(phi))] equals a one-sided automorphism
    // representative.
    BassSwanTriple t = delta(phi, r);
    if (d.identity.at(des_key(theta(t))) != 1)
      throw std::runtime_error("theta(delta(phi)) coefficient is not +1");
    Obj X = Obj::single(vect(t.P));
    Mor phiinv(X, X);
    phiinv.set_block(0, 0, ex_mat(vect(t.P), vect(t.P), *phi.inverse()));
    if (d.identity.at(des_key(aut_right_des(X, phiinv))) != -1)
      throw std::runtime_error("final representative is not the one-sided class");
  }
  return std::to_string(n) + " matrices, ends in a left-right swap";
}

std::string c7_mutations() {
  // Corpus of valid diagrams drawn from the builtin scripts.
  std::vector<Nen33> corpus;
  auto harvest = [&](const ProofScript& sc) {
    for (const auto& st : sc.steps)
      if (st.kind == StepKind::ThreeByThree) corpus.push_back(*st.diagram);
  };
  std::mt19937_64 rng(1007);
  harvest(builtin_sv1_script(zmod(1, "P")));
  harvest(builtin_sv1_script(zmod(2, "P")));
  {
    auto [t1, t2] = random_composable_pair(rng, 2);
    harvest(builtin_relation_b_script(t1, t2));
  }
  harvest(builtin_sw1_script(random_invertible(rng, 2), 2));
  {
    SplitInstance inst = random_split_instance(rng, 2);
    harvest(builtin_relation_a_script(inst.a, inst.b, inst.split_p, inst.split_q));
  }

  int tried = 0, rejected = 0;
  // Family one: flip one arrow in place. Detection may come from certificate
  // validation or from a commutativity square.
  for (const auto& n : corpus) {
    for (int slot = 0; slot < 24 && tried < 94; ++slot) {
      Nen33 m = n;
      DoubleExact& des = (slot % 6 < 3) ? m.rows[slot % 3] : m.cols[slot % 3];
      Mor* arrows[4] = {&des.yin.inc, &des.yin.sur, &des.yang.inc, &des.yang.sur};
      Mor& arrow = *arrows[slot / 6];
      if (is_zero_morphism(arrow)) continue;
      arrow = -arrow;
      ++tried;
      try {
        check_33(m);
      } catch (const Error&) {
        ++rejected;
      }
    }
    if (tried >= 94) break;
  }

  // Family two: negate a conjugation column arrow while refreshing its
  // certificate, so only the characteristic-zero commutativity check can
  // catch it.
  {
    BassSwanTriple tid = make_triple(zmod(1, "P"), RatMat::identity(1), zmod(1, "P"));
    Schematic sch = theta_schematic(tid);
    Obj la = col_left(sch.above), ma = col_mid(sch.above), ra = col_right(sch.above);
    Mor sl = swap_pairs_mor(la, {{0, 2}, {1, 3}});
    Mor sm = swap_pairs_mor(ma, {{0, 3}, {2, 4}});
    Mor sr = swap_pairs_mor(ra, {{0, 2}, {1, 3}});
    DoubleExact kappa = compile_schematic(sch);
    DoubleExact swapped = compile_schematic(rewire_schematic(sch, sl, sm, sr));
    Nen33 conj;
    conj.rows = {kappa, swapped, zero_des()};
    conj.cols = {conj_col_des(la, sl), conj_col_des(ma, sm), conj_col_des(ra, sr)};
    check_33(conj);  // sound before mutation
    const Mor* sigmas[3] = {&sl, &sm, &sr};
    const Obj* objs[3] = {&la, &ma, &ra};
    for (int c = 0; c < 3 && tried < 100; ++c) {
      for (int flip_row = 0; flip_row < 2 && tried < 100; ++flip_row) {
        Nen33 m = conj;
        if (flip_row == 0) {
          m.cols[c] = conj_col_des(*objs[c], -*sigmas[c]);
        } else {
          // Negate the Yin side of the column instead.
          ShortExact yin = certify_exact(
              *objs[c], *objs[c], Obj::zero(), -mor_id(*objs[c]), mor_zero(*objs[c], Obj::zero()),
              Cert::rewired(Cert::identity_left(*objs[c]),
                            IsoTriple{mor_id(*objs[c]), -mor_id(*objs[c]), mor_id(Obj::zero())}));
          m.cols[c] = DoubleExact{yin, m.cols[c].yang};
        }
        ++tried;
        try {
          check_33(m);
        } catch (const Error& e) {
          if (e.code() == Err::YinDiagramNotCommuting || e.code() == Err::YangDiagramNotCommuting)
            ++rejected;
          else
            throw std::runtime_error(std::string("expected a commutativity rejection, got ") +
                                     e.what());
        }
      }
    }
  }
  if (tried != 100) throw std::runtime_error("corpus produced " + std::to_string(tried));
  if (rejected != tried)
    throw std::runtime_error(std::to_string(tried - rejected) + " mutations were accepted");
  return std::to_string(rejected) + "/" + std::to_string(tried) + " negations rejected";
}

std::string c8_loops() {
  std::mt19937_64 rng(1008);
  int checked = 0;
  std::vector<DoubleExact> corpus;
  for (int i = 0; i < 10; ++i) {
    BassSwanTriple t = random_triple(rng, 3);
    corpus.push_back(theta(t));
    corpus.push_back(quotient_cg(theta(t)));
  }
  corpus.push_back(zero_des());
  corpus.push_back(swap_des(Obj({disc(zmod(1, "P")), torus(zmod(1, "P"))}), false));
  for (const auto& d : corpus) {
    GGPath loop = loop_e(d);
    if (!loop.closed()) throw std::runtime_error("loop not closed");
    ++checked;
  }
  for (const auto& d : corpus) {
    GGEdge e = e_of_object(d.yin.mid, Ambient::LCA);
    if (!(e.dotted.left == e.solid.left) || !equal_morphisms(e.dotted.sur, e.solid.sur))
      throw std::runtime_error("e(A) sides differ");
  }
  return std::to_string(checked) + " loops closed, e(A) sides identical";
}

std::string c9_selfconsistency() {
  long n = eval_disagreement_count();
  if (n != 0) throw std::runtime_error(std::to_string(n) + " disagreement events");
  return "0 normal form vs evaluation disagreements";
}

}  // namespace

int main() {
  std::printf("relk acceptance suite (exact arithmetic; all tolerances zero)\n");
  criterion(1, "theta well-formed on 200 random triples", 30.0, c1_theta_well_formed);
  criterion(2, "relation A replay on 50 split instances", 60.0, c2_relation_a);
  criterion(3, "relation B replay on 50 composable pairs", 60.0, c3_relation_b);
  criterion(4, "determinant invariant consistency on 500 pairs", 0.0, c4_det_invariant);
  criterion(5, "boundary compatibility on 100 triples", 30.0, c5_boundary);
  criterion(6, "automorphism square replay on 50 matrices", 0.0, c6_sw1);
  criterion(7, "mutation robustness on 100 arrow negations", 0.0, c7_mutations);
  criterion(8, "loop closure across the corpus", 0.0, c8_loops);
  criterion(9, "engine self-consistency", 0.0, c9_selfconsistency);
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
