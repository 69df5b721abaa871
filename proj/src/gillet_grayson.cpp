#include "relk/gillet_grayson.hpp"

namespace relk {

const char* ambient_name(Ambient a) {
  switch (a) {
    case Ambient::LCA: return "LCA";
    case Ambient::Mod: return "Mod";
    case Ambient::LCA_mod_cg: return "LCA/cg";
    case Ambient::Mod_mod_fg: return "Mod/fg";
  }
  return "?";
}

std::string GGVertex::str() const {
  return "(" + first.str() + ", " + second.str() + ")@" + ambient_name(amb);
}

GGEdge make_edge(Ambient amb, const ShortExact& dotted, const ShortExact& solid) {
  if (dotted.right != solid.right)
    fail(Err::EndpointMismatch, "edge sequences have different cokernels: " + dotted.right.str() +
                                    " vs " + solid.right.str());
  revalidate(dotted);
  revalidate(solid);
  return GGEdge{amb, dotted, solid};
}

GGVertex GGPath::start() const {
  if (edges.empty()) fail(Err::EndpointMismatch, "empty path");
  const auto& [e, rev] = edges.front();
  return rev ? e.target() : e.source();
}

GGVertex GGPath::end() const {
  if (edges.empty()) fail(Err::EndpointMismatch, "empty path");
  const auto& [e, rev] = edges.back();
  return rev ? e.source() : e.target();
}

bool GGPath::closed() const { return !edges.empty() && start() == end(); }

GGEdge e_of_object(const Obj& A, Ambient amb) {
  ShortExact se = canonical_of(Cert::identity_right(A));
  return make_edge(amb, se, se);
}

GGPath loop_e(const DoubleExact& d, Ambient amb) {
  revalidate(d);
  GGPath p;
  p.edges.push_back({e_of_object(d.yin.left, amb), false});
  p.edges.push_back({make_edge(amb, d.yang, d.yin), false});
  p.edges.push_back({e_of_object(d.yin.mid, amb), true});
  if (!p.closed()) fail(Err::EndpointMismatch, "loop is not closed");
  if (!(p.start() == GGVertex{amb, Obj::zero(), Obj::zero()}))
    fail(Err::EndpointMismatch, "loop is not based at (0,0)");
  return p;
}

namespace {

bool seq_pair_equal(const ShortExact& a, const ShortExact& b) {
  return a.left == b.left && a.mid == b.mid && a.right == b.right &&
         equal_morphisms(a.inc, b.inc) && equal_morphisms(a.sur, b.sur);
}

}  // namespace

LiftedEdge lift_edge(const DoubleExact& reduced, const BassSwanTriple& t) {
  // The reduced class lives on 0 -> coprod P + coprod Q -> coprod P + coprod Q
  // with Yin (1, shift) and Yang (shift, 1).
  Obj M({coprod_disc(t.P), coprod_disc(t.Q)});
  if (!reduced.yin.left.is_zero() || reduced.yin.mid != M || reduced.yin.right != M)
    fail(Err::LiftProjectionMismatch, "input is not the reduced class of this triple");

  ShortExact dotted = se_direct_sum({canonical_of(Cert::identity_right(Obj::single(coprod_disc(t.P)))),
                                     canonical_of(Cert::coprod_shift(t.Q))});
  ShortExact solid = se_direct_sum({canonical_of(Cert::coprod_shift(t.P)),
                                    canonical_of(Cert::identity_right(Obj::single(coprod_disc(t.Q))))});
  if (dotted.right != solid.right)
    fail(Err::LiftProjectionMismatch, "lift cokernels differ");
  GGEdge edge = make_edge(Ambient::Mod, dotted, solid);

  // Project back: kernels are finitely generated so they die; the sequences
  // must reproduce the middle edge of the loop, up to the dotted / solid
  // labelling of the pair.
  ShortExact proj_dotted = quotient_cg(dotted);
  ShortExact proj_solid = quotient_cg(solid);
  bool straight =
      seq_pair_equal(proj_dotted, reduced.yang) && seq_pair_equal(proj_solid, reduced.yin);
  bool swapped =
      seq_pair_equal(proj_dotted, reduced.yin) && seq_pair_equal(proj_solid, reduced.yang);
  if (!straight && !swapped)
    fail(Err::LiftProjectionMismatch, "projected lift is not the reduced middle edge");
  return LiftedEdge{edge, swapped};
}

BoundaryResult boundary(const BassSwanTriple& t) {
  Schematic reduced_sch = quotient_cg(theta_schematic(t));
  DoubleExact l = compile_schematic(reduced_sch);
  // Validates closedness of the loop being lifted.
  loop_e(l, Ambient::Mod_mod_fg);
  LiftedEdge lift = lift_edge(l, t);

  // Traverse the loop backwards from the basepoint and lift edge by edge:
  // e(M) forward, then the lifted middle edge reversed. Its source is the
  // endpoint (Q, P).
  GGPath path;
  path.edges.push_back({e_of_object(lift.edge.dotted.mid, Ambient::Mod), false});
  path.edges.push_back({lift.edge, true});
  GGVertex endpoint = path.end();

  std::vector<int> kp = k0_class(t.P), kq = k0_class(t.Q);
  std::vector<int> val(kp.size());
  for (std::size_t i = 0; i < kp.size(); ++i) val[i] = kp[i] - kq[i];
  return BoundaryResult{val, endpoint, path, l, reduced_sch};
}

ProofScript builtin_sw1_script(const RatMat& phi, int n) {
  BassSwanTriple t = delta(phi, n);
  Schematic sch = theta_schematic(t);

  // Conjugate the Yang side by the mirror swap; only the bent vector row
  // survives with differing Yin and Yang.
  ScriptBuilder b;
  Obj la = col_left(sch.above), ma = col_mid(sch.above), ra = col_right(sch.above);
  Mor sigma_l = la.is_zero() ? mor_id(la) : swap_pairs_mor(la, {{0, 2}, {1, 3}});
  Mor sigma_m = ma.is_zero() ? mor_id(ma) : swap_pairs_mor(ma, {{0, 3}, {2, 4}});
  Mor sigma_r = ra.is_zero() ? mor_id(ra) : swap_pairs_mor(ra, {{0, 2}, {1, 3}});

  std::size_t e1 = b.conjugation_equality(sch, sigma_l, sigma_m, sigma_r);
  Schematic swapped = rewire_schematic(sch, sigma_l, sigma_m, sigma_r);

  auto e2 = b.excision(swapped, {1}, {3});
  std::size_t zrest = b.zero_rule(e2.quot);
  DoubleExact bent = e2.sub;

  // The printed square: bent row over the doubled natural row, with the
  // one-sided automorphism class in the middle column.
  Obj X = Obj::single(vect(t.P));
  Mor phim = X.is_zero() ? mor_id(X) : [&] {
    Mor m(X, X);
    m.set_block(0, 0, ex_mat(vect(t.P), vect(t.P), phi));
    return m;
  }();
  DoubleExact nat = des_doubled(canonical_of(Cert::lattice(t.P)));
  Nen33 printed;
  printed.rows = {bent, nat, zero_des()};
  printed.cols = {conj_col_des(bent.yin.left, mor_id(bent.yin.left)), aut_left_des(X, phim),
                  conj_col_des(bent.yin.right, mor_id(bent.yin.right))};
  std::size_t e3 = b.three(printed);
  std::size_t znat = b.zero_rule(nat);
  std::size_t z0 = b.zero_rule(zero_des());
  std::size_t zcl = b.zero_rule(printed.cols[0]);
  std::size_t zcr = b.zero_rule(printed.cols[2]);
  // e3: [bent] - [nat] + [0] - [colL] + [ltilde(phi)] - [colR] = 0.
  std::size_t bent_eq = b.combine({{e3, 1}, {znat, 1}, {z0, -1}, {zcl, 1}, {zcr, 1}});

  // Additivity: [ltilde(phi^{-1})] + [ltilde(phi)] = 0.
  auto inv = phi.inverse();
  if (!inv) fail(Err::SingularMatrix, "phi is singular");
  Mor phiinv = X.is_zero() ? mor_id(X) : [&] {
    Mor m(X, X);
    m.set_block(0, 0, ex_mat(vect(t.P), vect(t.P), *inv));
    return m;
  }();
  DoubleExact lt_inv = aut_left_des(X, phiinv);
  DoubleExact lt_id = aut_left_des(X, mor_id(X));
  Nen33 add;
  add.rows = {lt_inv, lt_id, zero_des()};
  add.cols = {conj_col_des(X, mor_id(X)), aut_left_des(X, phim), zero_des()};
  std::size_t e4 = b.three(add);
  std::size_t zid = b.zero_rule(lt_id);
  std::size_t zc1 = b.zero_rule(add.cols[0]);
  // e4: [lt_inv] - [lt_id] + [0] - [col1] + [ltilde(phi)] - [0] = 0; the two
  // zero corners cancel each other inside the relation.
  std::size_t add_eq = b.combine({{e4, 1}, {zid, 1}, {zc1, 1}});

  std::size_t e5 = b.lr_swap(X, phiinv);

  // [theta(delta(phi))] = [0 -> X =(phi^{-1},1)=> X]:
  //   e1:      [kappa] - [S] = 0
  //   e2-ish:  [S] = [bent]
  //   bent_eq: [bent] + [ltilde(phi)] = 0
  //   add_eq:  [lt_inv] + [ltilde(phi)] = 0
  //   e5:      [lt_inv] - [l(phi^{-1})] = 0
  b.combine({{e1, 1}, {e2.step, -1}, {zrest, 1}, {bent_eq, 1}, {add_eq, -1}, {e5, 1}});
  return b.script();
}

}  // namespace relk
