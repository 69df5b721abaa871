#include "relk/nenashev.hpp"

#include "relk/theta.hpp"

#include <algorithm>
#include <sstream>

namespace relk {

namespace {

void add_gen(Derivation& d, const DoubleExact& g, const Int& coeff) {
  std::string k = des_key(g);
  d.identity[k] += coeff;
  if (d.identity[k] == 0) d.identity.erase(k);
  d.gens.emplace(k, g);
}

enum class TopoClass { Compact, Vector, Discrete };

TopoClass topo_class(AtomKind k) {
  switch (k) {
    case AtomKind::Torus:
    case AtomKind::ProdTorus:
      return TopoClass::Compact;
    case AtomKind::Vect:
      return TopoClass::Vector;
    default:
      return TopoClass::Discrete;
  }
}

bool uniform_class(const Obj& X, TopoClass& cls) {
  if (X.is_zero()) return false;
  cls = topo_class(X.atoms[0].kind);
  for (const auto& a : X.atoms)
    if (topo_class(a.kind) != cls) return false;
  return true;
}

const char* class_name(TopoClass c) {
  switch (c) {
    case TopoClass::Compact: return "compact";
    case TopoClass::Vector: return "vector";
    case TopoClass::Discrete: return "discrete";
  }
  return "?";
}

// A = X restricted to idx, plus the merge permutation [A ++ B] -> X.
Mor merge_perm(const Obj& X, const std::vector<std::size_t>& first,
               const std::vector<std::size_t>& second) {
  Obj src = obj_concat(obj_select(X, first), obj_select(X, second));
  Mor v(src, X);
  std::size_t k = 0;
  for (auto i : first) v.set_block(i, k++, ex_id(X.atoms[i]));
  for (auto i : second) v.set_block(i, k++, ex_id(X.atoms[i]));
  return v;
}

// Split column [A -> A+B -> B] placed inside X along the index partition.
DoubleExact split_col_des(const Obj& A, const Obj& X, const Obj& B,
                          const std::vector<std::size_t>& a_idx,
                          const std::vector<std::size_t>& b_idx) {
  Cert base = Cert::direct_sum({Cert::identity_left(A), Cert::identity_right(B)});
  IsoTriple t{mor_id(A), merge_perm(X, a_idx, b_idx), mor_id(B)};
  ShortExact se = canonical_of(Cert::rewired(base, t));
  return des_doubled(se);
}

// Plain split column [A -> A++B -> B] with the concatenated middle.
DoubleExact plain_split_col(const Obj& A, const Obj& B) {
  ShortExact se = canonical_of(Cert::direct_sum({Cert::identity_left(A), Cert::identity_right(B)}));
  return des_doubled(se);
}

Derivation swap_vanish_auto(const Obj& X, bool signed_swap);

}  // namespace

Derivation derivation_combine(const std::vector<std::pair<const Derivation*, Int>>& terms) {
  Derivation out;
  for (const auto& [d, c] : terms) {
    if (c == 0) continue;
    for (const auto& [k, coeff] : d->identity) {
      out.identity[k] += c * coeff;
      if (out.identity[k] == 0) out.identity.erase(k);
      auto it = d->gens.find(k);
      if (it != d->gens.end()) out.gens.emplace(k, it->second);
    }
    for (const auto& a : d->admitted) out.admitted.push_back(a);
  }
  return out;
}

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::ZeroRule: return "zero_rule";
    case StepKind::ThreeByThree: return "three_by_three";
    case StepKind::DoubleIso: return "double_iso";
    case StepKind::LeftRightSwap: return "left_right_swap";
    case StepKind::SwapVanish: return "swap_vanish";
    case StepKind::LinearCombine: return "linear_combine";
  }
  return "?";
}

Derivation check_zero_rule(const DoubleExact& d) {
  revalidate(d);
  if (!equal_morphisms(d.yin.inc, d.yang.inc))
    fail(Err::YinYangDiffer, "inclusions differ between Yin and Yang");
  if (!equal_morphisms(d.yin.sur, d.yang.sur))
    fail(Err::YinYangDiffer, "surjections differ between Yin and Yang");
  Derivation out;
  add_gen(out, d, 1);
  return out;
}

Derivation check_33(const Nen33& n) {
  for (int i = 0; i < 3; ++i) {
    try {
      revalidate(n.rows[i]);
    } catch (const Error& e) {
      fail(Err::RowNotExact, "row " + std::to_string(i + 1) + ": " + e.what());
    }
    try {
      revalidate(n.cols[i]);
    } catch (const Error& e) {
      fail(Err::ColNotExact, "column " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  // Shared corners.
  auto need = [](bool ok, const std::string& what) {
    if (!ok) fail(Err::EndpointMismatch, "corner objects disagree at " + what);
  };
  need(n.rows[0].yin.left == n.cols[0].yin.left, "A");
  need(n.rows[0].yin.mid == n.cols[1].yin.left, "B");
  need(n.rows[0].yin.right == n.cols[2].yin.left, "C");
  need(n.rows[1].yin.left == n.cols[0].yin.mid, "D");
  need(n.rows[1].yin.mid == n.cols[1].yin.mid, "E");
  need(n.rows[1].yin.right == n.cols[2].yin.mid, "F");
  need(n.rows[2].yin.left == n.cols[0].yin.right, "G");
  need(n.rows[2].yin.mid == n.cols[1].yin.right, "H");
  need(n.rows[2].yin.right == n.cols[2].yin.right, "I");

  struct Side {
    const ShortExact& r1;
    const ShortExact& r2;
    const ShortExact& r3;
    const ShortExact& c1;
    const ShortExact& c2;
    const ShortExact& c3;
    Err err;
    const char* name;
  };
  Side sides[2] = {
      {n.rows[0].yin, n.rows[1].yin, n.rows[2].yin, n.cols[0].yin, n.cols[1].yin, n.cols[2].yin,
       Err::YinDiagramNotCommuting, "yin"},
      {n.rows[0].yang, n.rows[1].yang, n.rows[2].yang, n.cols[0].yang, n.cols[1].yang,
       n.cols[2].yang, Err::YangDiagramNotCommuting, "yang"},
  };
  for (const auto& s : sides) {
    auto square = [&](const Mor& lhs, const Mor& rhs, const char* which) {
      if (!equal_morphisms(lhs, rhs))
        fail(s.err, std::string(s.name) + " square " + which + " does not commute");
    };
    square(compose(s.c2.inc, s.r1.inc), compose(s.r2.inc, s.c1.inc), "(A->B->E vs A->D->E)");
    square(compose(s.c3.inc, s.r1.sur), compose(s.r2.sur, s.c2.inc), "(B->C->F vs B->E->F)");
    square(compose(s.r3.inc, s.c1.sur), compose(s.c2.sur, s.r2.inc), "(D->G->H vs D->E->H)");
    square(compose(s.r3.sur, s.c2.sur), compose(s.c3.sur, s.r2.sur), "(E->H->I vs E->F->I)");
  }

  Derivation out;
  add_gen(out, n.rows[0], 1);
  add_gen(out, n.rows[1], -1);
  add_gen(out, n.rows[2], 1);
  add_gen(out, n.cols[0], -1);
  add_gen(out, n.cols[1], 1);
  add_gen(out, n.cols[2], -1);
  return out;
}

Mor half_swap(const Obj& X, bool signed_swap) {
  Obj XX = obj_concat(X, X);
  Mor m(XX, XX);
  std::size_t k = X.size();
  for (std::size_t i = 0; i < k; ++i) {
    m.set_block(i, k + i, ex_id(X.atoms[i]));
    ExprPtr back = ex_id(X.atoms[i]);
    m.set_block(k + i, i, signed_swap ? ex_neg(back) : back);
  }
  return m;
}

Mor swap_pairs_mor(const Obj& X, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  Mor m = mor_id(X);
  for (const auto& [i, j] : pairs) {
    if (X.atoms.at(i) != X.atoms.at(j))
      fail(Err::NotIso, "cannot swap distinct atoms " + X.atoms[i].str() + ", " + X.atoms[j].str());
    m.set_block(i, i, nullptr);
    m.set_block(j, j, nullptr);
    m.set_block(i, j, ex_id(X.atoms[j]));
    m.set_block(j, i, ex_id(X.atoms[i]));
  }
  return m;
}

DoubleExact conj_col_des(const Obj& X, const Mor& sigma) {
  ShortExact yin = certify_exact(X, X, Obj::zero(), mor_id(X), mor_zero(X, Obj::zero()),
                                 Cert::identity_left(X));
  IsoTriple t{mor_id(X), sigma, mor_id(Obj::zero())};
  ShortExact yang = certify_exact(X, X, Obj::zero(), sigma, mor_zero(X, Obj::zero()),
                                  Cert::rewired(Cert::identity_left(X), t));
  return des_of(yin, yang);
}

DoubleExact swap_des(const Obj& X, bool signed_swap) {
  return conj_col_des(obj_concat(X, X), half_swap(X, signed_swap));
}

DoubleExact aut_left_des(const Obj& X, const Mor& phi) { return conj_col_des(X, phi); }

DoubleExact aut_right_des(const Obj& X, const Mor& phi) {
  ShortExact yang = certify_exact(Obj::zero(), X, X, mor_zero(Obj::zero(), X), mor_id(X),
                                  Cert::identity_right(X));
  IsoTriple t{mor_id(Obj::zero()), mor_id(X), phi};
  ShortExact yin = certify_exact(Obj::zero(), X, X, mor_zero(Obj::zero(), X), phi,
                                 Cert::rewired(Cert::identity_right(X), t));
  return des_of(yin, yang);
}

Derivation double_iso_rule(const DoubleExact& d1, const DoubleExact& d2, const IsoTriple& iso) {
  revalidate(d1);
  revalidate(d2);
  if (!is_blockperm_iso(iso.u, true) || !is_blockperm_iso(iso.v, true) ||
      !is_blockperm_iso(iso.w, true))
    fail(Err::NotIso, "component maps are not isomorphisms");
  if (iso.u.src() != d1.yin.left || iso.u.dst() != d2.yin.left || iso.v.src() != d1.yin.mid ||
      iso.v.dst() != d2.yin.mid || iso.w.src() != d1.yin.right || iso.w.dst() != d2.yin.right)
    fail(Err::EndpointMismatch, "isomorphism endpoints do not connect the two sequences");

  auto col = [&](const Obj& a, const Obj& b, const Mor& x) {
    ShortExact se = certify_exact(
        a, b, Obj::zero(), x, mor_zero(b, Obj::zero()),
        Cert::rewired(Cert::identity_left(a), IsoTriple{mor_id(a), x, mor_id(Obj::zero())}));
    return des_doubled(se);
  };
  Nen33 n;
  n.rows = {d1, d2, zero_des()};
  n.cols = {col(d1.yin.left, d2.yin.left, iso.u), col(d1.yin.mid, d2.yin.mid, iso.v),
            col(d1.yin.right, d2.yin.right, iso.w)};
  Derivation e = check_33(n);
  Derivation z0 = check_zero_rule(zero_des());
  Derivation zl = check_zero_rule(n.cols[0]);
  Derivation zm = check_zero_rule(n.cols[1]);
  Derivation zr = check_zero_rule(n.cols[2]);
  return derivation_combine({{&e, 1}, {&z0, -1}, {&zl, 1}, {&zm, -1}, {&zr, 1}});
}

Derivation left_right_swap(const Obj& X, const Mor& phi) {
  if (phi.src() != X || phi.dst() != X)
    fail(Err::NotAutomorphism, "phi is not an endomorphism of X");
  if (!is_blockperm_iso(phi, true)) fail(Err::NotAutomorphism, "phi is not invertible");
  Derivation out;
  add_gen(out, aut_left_des(X, phi), 1);
  add_gen(out, aut_right_des(X, phi), -1);
  out.admitted.push_back("left_right_swap on " + X.str());
  return out;
}

namespace {

Derivation swap_primitive(const Obj& X, bool signed_swap, TopoClass cls) {
  Derivation out;
  add_gen(out, swap_des(X, signed_swap), 1);
  std::ostringstream tag;
  tag << "swap_vanish[" << class_name(cls) << (signed_swap ? ",signed" : "") << "] on "
      << X.str();
  out.admitted.push_back(tag.str());
  return out;
}

// [s_X] = [s_A] + [s_B] through the doubled split sequence.
Derivation swap_split(const ShortExact& dec, bool signed_swap, const Derivation& dA,
                      const Derivation& dB) {
  ShortExact doubled = se_direct_sum({dec, dec});
  DoubleExact S = des_doubled(doubled);
  Nen33 n;
  n.rows = {S, S, zero_des()};
  n.cols = {swap_des(dec.left, signed_swap), swap_des(dec.mid, signed_swap),
            swap_des(dec.right, signed_swap)};
  Derivation e = check_33(n);
  Derivation z0 = check_zero_rule(zero_des());
  // e reads: [0] - [s_A] + [s_X] - [s_B] = 0.
  return derivation_combine({{&e, 1}, {&z0, -1}, {&dA, 1}, {&dB, 1}});
}

Derivation swap_vanish_auto(const Obj& X, bool signed_swap) {
  if (X.is_zero()) return check_zero_rule(swap_des(X, signed_swap));
  TopoClass cls;
  if (uniform_class(X, cls)) return swap_primitive(X, signed_swap, cls);

  // Sort atoms by topological class, transporting the swap along the
  // reordering, then split off the leading class.
  std::vector<std::size_t> order(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return static_cast<int>(topo_class(X.atoms[a].kind)) <
           static_cast<int>(topo_class(X.atoms[b].kind));
  });
  Obj Xs = obj_select(X, order);
  Derivation reorder;
  bool resorted = !(Xs == X);
  if (resorted) {
    Mor rho(X, Xs);
    for (std::size_t n = 0; n < order.size(); ++n) rho.set_block(n, order[n], ex_id(X.atoms[order[n]]));
    Mor rho2 = direct_sum(rho, rho);
    IsoTriple t{rho2, rho2, mor_id(Obj::zero())};
    reorder = double_iso_rule(swap_des(X, signed_swap), swap_des(Xs, signed_swap), t);
  }

  TopoClass lead = topo_class(Xs.atoms[0].kind);
  std::vector<std::size_t> a_idx, b_idx;
  for (std::size_t i = 0; i < Xs.size(); ++i)
    (topo_class(Xs.atoms[i].kind) == lead ? a_idx : b_idx).push_back(i);
  Obj A = obj_select(Xs, a_idx), B = obj_select(Xs, b_idx);
  ShortExact dec = canonical_of(Cert::direct_sum({Cert::identity_left(A), Cert::identity_right(B)}));
  Derivation dA = swap_vanish_auto(A, signed_swap);
  Derivation dB = swap_vanish_auto(B, signed_swap);
  Derivation split = swap_split(dec, signed_swap, dA, dB);
  if (!resorted) return split;
  // reorder: [s_X] - [s_Xs] = 0;  split: [s_Xs] = 0.
  return derivation_combine({{&reorder, 1}, {&split, 1}});
}

}  // namespace

Derivation swap_vanish(const Obj& X, bool signed_swap,
                       const std::optional<ShortExact>& decomposition) {
  if (X.is_zero()) return check_zero_rule(swap_des(X, signed_swap));
  TopoClass cls;
  if (uniform_class(X, cls)) return swap_primitive(X, signed_swap, cls);
  if (!decomposition)
    fail(Err::MissingDecomposition,
         "mixed object " + X.str() + " needs a compact / vector / discrete decomposition");
  const ShortExact& dec = *decomposition;
  try {
    revalidate(dec);
  } catch (const Error& e) {
    fail(Err::DecompositionInvalid, e.what());
  }
  if (dec.mid != X) fail(Err::DecompositionInvalid, "decomposition middle is not X");
  if (dec.left.is_zero() || dec.right.is_zero())
    fail(Err::DecompositionInvalid, "decomposition must be proper");
  for (const auto& at : dec.left.atoms)
    if (topo_class(at.kind) != TopoClass::Compact)
      fail(Err::DecompositionInvalid, "kernel of the decomposition must be compact");
  for (const auto& at : dec.right.atoms)
    if (topo_class(at.kind) == TopoClass::Compact)
      fail(Err::DecompositionInvalid, "cokernel of the decomposition must be vector + discrete");
  Derivation dA = swap_vanish_auto(dec.left, signed_swap);
  Derivation dB = swap_vanish_auto(dec.right, signed_swap);
  return swap_split(dec, signed_swap, dA, dB);
}

Derivation replay(const ProofScript& script) {
  std::vector<Derivation> ders;
  ders.reserve(script.steps.size());
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const Step& st = script.steps[i];
    try {
      switch (st.kind) {
        case StepKind::ZeroRule:
          ders.push_back(check_zero_rule(st.des.value()));
          break;
        case StepKind::ThreeByThree:
          ders.push_back(check_33(st.diagram.value()));
          break;
        case StepKind::DoubleIso:
          ders.push_back(double_iso_rule(st.d1.value(), st.d2.value(), st.iso.value()));
          break;
        case StepKind::LeftRightSwap:
          ders.push_back(left_right_swap(st.X.value(), st.phi.value()));
          break;
        case StepKind::SwapVanish:
          ders.push_back(swap_vanish(st.X.value(), st.signed_swap, st.decomposition));
          break;
        case StepKind::LinearCombine: {
          if (st.refs.size() != st.coeffs.size())
            fail(Err::StepInvalid, "coefficient count does not match references");
          std::vector<std::pair<const Derivation*, Int>> terms;
          for (std::size_t k = 0; k < st.refs.size(); ++k) {
            if (st.refs[k] >= i)
              fail(Err::StepInvalid, "reference to a step that has not been validated yet");
            terms.push_back({&ders[st.refs[k]], st.coeffs[k]});
          }
          ders.push_back(derivation_combine(terms));
          break;
        }
      }
    } catch (const Error& e) {
      if (e.code() == Err::StepInvalid) throw;
      fail(Err::StepInvalid,
           "step " + std::to_string(i) + " (" + step_kind_name(st.kind) + "): " + e.what());
    }
  }
  if (ders.empty()) return Derivation{};
  Derivation out = ders.back();
  // Collect admitted-rule usage across the whole script, deduplicated.
  std::vector<std::string> adm;
  for (const auto& d : ders)
    for (const auto& a : d.admitted) adm.push_back(a);
  std::sort(adm.begin(), adm.end());
  adm.erase(std::unique(adm.begin(), adm.end()), adm.end());
  out.admitted = std::move(adm);
  return out;
}

// --- ScriptBuilder ----------------------------------------------------------

std::size_t ScriptBuilder::zero_rule(const DoubleExact& d) {
  Step st;
  st.kind = StepKind::ZeroRule;
  st.des = d;
  ders_.push_back(check_zero_rule(d));
  sc_.steps.push_back(std::move(st));
  return sc_.steps.size() - 1;
}

std::size_t ScriptBuilder::three(const Nen33& n) {
  Step st;
  st.kind = StepKind::ThreeByThree;
  st.diagram = n;
  ders_.push_back(check_33(n));
  sc_.steps.push_back(std::move(st));
  return sc_.steps.size() - 1;
}

std::size_t ScriptBuilder::double_iso(const DoubleExact& d1, const DoubleExact& d2,
                                      const IsoTriple& iso) {
  Step st;
  st.kind = StepKind::DoubleIso;
  st.d1 = d1;
  st.d2 = d2;
  st.iso = iso;
  ders_.push_back(double_iso_rule(d1, d2, iso));
  sc_.steps.push_back(std::move(st));
  return sc_.steps.size() - 1;
}

std::size_t ScriptBuilder::lr_swap(const Obj& X, const Mor& phi) {
  Step st;
  st.kind = StepKind::LeftRightSwap;
  st.X = X;
  st.phi = phi;
  ders_.push_back(left_right_swap(X, phi));
  sc_.steps.push_back(std::move(st));
  return sc_.steps.size() - 1;
}

std::size_t ScriptBuilder::swapv(const Obj& X, bool signed_swap,
                                 const std::optional<ShortExact>& dec) {
  Step st;
  st.kind = StepKind::SwapVanish;
  st.X = X;
  st.signed_swap = signed_swap;
  st.decomposition = dec;
  ders_.push_back(swap_vanish(X, signed_swap, dec));
  sc_.steps.push_back(std::move(st));
  return sc_.steps.size() - 1;
}

std::size_t ScriptBuilder::combine(const std::vector<std::pair<std::size_t, Int>>& terms) {
  Step st;
  st.kind = StepKind::LinearCombine;
  std::vector<std::pair<const Derivation*, Int>> ts;
  for (const auto& [ref, c] : terms) {
    st.refs.push_back(ref);
    st.coeffs.push_back(c);
    ts.push_back({&ders_.at(ref), c});
  }
  ders_.push_back(derivation_combine(ts));
  sc_.steps.push_back(std::move(st));
  return sc_.steps.size() - 1;
}

std::size_t ScriptBuilder::discharge_conj_column(const Obj& X, const Mor& sigma) {
  DoubleExact col = conj_col_des(X, sigma);
  auto cycles = perm_cycles(sigma);
  if (!cycles) fail(Err::NotIso, "column conjugation is not a signed involution");
  if (cycles->swaps.empty() && cycles->signed_swaps.empty()) return zero_rule(col);

  // Reorder X so the fixed part comes first and every two-cycle is adjacent.
  std::vector<std::size_t> order = cycles->fixed;
  struct PairInfo {
    std::size_t i, j;
    bool sgn;
  };
  std::vector<PairInfo> pairs;
  for (auto [i, j] : cycles->swaps) pairs.push_back({i, j, false});
  for (auto [i, j] : cycles->signed_swaps) pairs.push_back({i, j, true});
  std::sort(pairs.begin(), pairs.end(),
            [](const PairInfo& a, const PairInfo& b) { return a.i < b.i; });
  for (const auto& p : pairs) {
    order.push_back(p.i);
    order.push_back(p.j);
  }
  Obj Xs = obj_select(X, order);
  Mor rho(X, Xs);
  for (std::size_t n = 0; n < order.size(); ++n)
    rho.set_block(n, order[n], ex_id(X.atoms[order[n]]));

  std::vector<DoubleExact> parts;
  Obj F = obj_select(X, cycles->fixed);
  if (!F.is_zero()) parts.push_back(conj_col_des(F, mor_id(F)));
  for (const auto& p : pairs) parts.push_back(swap_des(Obj::single(X.atoms[p.i]), p.sgn));

  // col is isomorphic to the direct sum of the parts.
  DoubleExact target = parts[0];
  std::vector<DoubleExact> partials{target};
  for (std::size_t k = 1; k < parts.size(); ++k) {
    target = direct_sum_des(target, parts[k]);
    partials.push_back(target);
  }
  std::size_t iso_step = double_iso(col, target, IsoTriple{rho, rho, mor_id(Obj::zero())});

  std::vector<std::pair<std::size_t, Int>> terms{{iso_step, 1}};
  for (std::size_t k = 1; k < parts.size(); ++k) {
    Nen33 n;
    n.rows = {partials[k - 1], partials[k], parts[k]};
    n.cols = {plain_split_col(partials[k - 1].yin.left, parts[k].yin.left),
              plain_split_col(partials[k - 1].yin.mid, parts[k].yin.mid),
              plain_split_col(partials[k - 1].yin.right, parts[k].yin.right)};
    std::size_t f = three(n);
    std::size_t zl = zero_rule(n.cols[0]);
    std::size_t zm = zero_rule(n.cols[1]);
    std::size_t zr = zero_rule(n.cols[2]);
    // fold emits [T_{k-1}] - [T_k] + [p_k] - cols = 0; clean it locally.
    std::size_t clean = combine({{f, 1}, {zl, 1}, {zm, -1}, {zr, 1}});
    terms.push_back({clean, -1});
  }
  if (!F.is_zero()) terms.push_back({zero_rule(parts[0]), 1});
  for (const auto& p : pairs)
    terms.push_back({swapv(Obj::single(X.atoms[p.i]), p.sgn, std::nullopt), 1});
  return combine(terms);
}

std::size_t ScriptBuilder::conjugation_equality(const Schematic& s, const Mor& sl, const Mor& sm,
                                                const Mor& sr) {
  DoubleExact J = compile_schematic(s);
  DoubleExact J2 = compile_schematic(rewire_schematic(s, sl, sm, sr));
  Nen33 n;
  n.rows = {J, J2, zero_des()};
  n.cols = {conj_col_des(J.yin.left, sl), conj_col_des(J.yin.mid, sm),
            conj_col_des(J.yin.right, sr)};
  std::size_t i33 = three(n);
  std::size_t z0 = zero_rule(zero_des());
  std::size_t dl = discharge_conj_column(J.yin.left, sl);
  std::size_t dm = discharge_conj_column(J.yin.mid, sm);
  std::size_t dr = discharge_conj_column(J.yin.right, sr);
  return combine({{i33, 1}, {z0, -1}, {dl, 1}, {dm, -1}, {dr, 1}});
}

ScriptBuilder::ExcisionRefs ScriptBuilder::excision(const Schematic& s,
                                                    const std::vector<std::size_t>& above_rows,
                                                    const std::vector<std::size_t>& below_rows) {
  auto complement = [](std::size_t n, const std::vector<std::size_t>& sel) {
    std::vector<bool> in(n, false);
    for (auto i : sel) in[i] = true;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
      if (!in[i]) out.push_back(i);
    return out;
  };
  Schematic sub = sub_schematic(s, above_rows, below_rows);
  Schematic quot = sub_schematic(s, complement(s.above.size(), above_rows),
                                 complement(s.below.size(), below_rows));
  DoubleExact W = compile_schematic(sub);
  DoubleExact T = compile_schematic(s);
  DoubleExact Q = compile_schematic(quot);

  auto col_for = [&](int column) {
    const Obj& total = (column == 0) ? T.yin.left : (column == 1 ? T.yin.mid : T.yin.right);
    std::vector<std::size_t> sel_idx, comp_idx;
    auto offsets = [&](const std::vector<ShortExact>& rows) {
      std::vector<std::size_t> off(rows.size() + 1, 0);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const Obj& o = (column == 0) ? rows[i].left : (column == 1 ? rows[i].mid : rows[i].right);
        off[i + 1] = off[i] + o.size();
      }
      return off;
    };
    auto off = offsets(s.above);
    std::vector<bool> in(total.size(), false);
    for (auto r : above_rows)
      for (std::size_t k = off[r]; k < off[r + 1]; ++k) in[k] = true;
    for (std::size_t k = 0; k < total.size(); ++k) (in[k] ? sel_idx : comp_idx).push_back(k);
    return split_col_des(obj_select(total, sel_idx), total, obj_select(total, comp_idx), sel_idx,
                         comp_idx);
  };
  Nen33 n;
  n.rows = {W, T, Q};
  n.cols = {col_for(0), col_for(1), col_for(2)};
  std::size_t i33 = three(n);
  std::size_t zl = zero_rule(n.cols[0]);
  std::size_t zm = zero_rule(n.cols[1]);
  std::size_t zr = zero_rule(n.cols[2]);
  std::size_t step = combine({{i33, 1}, {zl, 1}, {zm, -1}, {zr, 1}});
  return ExcisionRefs{step, W, T, Q};
}

// --- builtin scripts ---------------------------------------------------------

namespace {

// Same permutation pattern as w, rebuilt with identity blocks on new objects.
Mor rebuild_perm(const Mor& w, const Obj& new_src, const Obj& new_dst) {
  Mor r(new_src, new_dst);
  auto vals = normal_values(w);
  for (std::size_t i = 0; i < w.dst().size(); ++i)
    for (std::size_t j = 0; j < w.src().size(); ++j)
      if (!vals[i * w.src().size() + j].is_zero()) {
        if (new_src.atoms.at(j) != new_dst.atoms.at(i))
          fail(Err::NotIso, "rebuilt wiring would connect distinct atoms");
        r.set_block(i, j, ex_id(new_src.atoms[j]));
      }
  return r;
}

// Swap atoms of paired rows in one column of a schematic's upper half.
Mor swap_rows_mor(const std::vector<ShortExact>& rows, int column,
                  const std::vector<std::pair<std::size_t, std::size_t>>& row_pairs) {
  Obj X;
  std::vector<std::size_t> off(rows.size() + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Obj& o = (column == 0) ? rows[i].left : (column == 1 ? rows[i].mid : rows[i].right);
    X = obj_concat(X, o);
    off[i + 1] = off[i] + o.size();
  }
  std::vector<std::pair<std::size_t, std::size_t>> atom_pairs;
  for (auto [a, b] : row_pairs) {
    std::size_t na = off[a + 1] - off[a], nb = off[b + 1] - off[b];
    if (na != nb) fail(Err::NotIso, "swapped rows carry different column sizes");
    for (std::size_t k = 0; k < na; ++k) atom_pairs.push_back({off[a] + k, off[b] + k});
  }
  return swap_pairs_mor(X, atom_pairs);
}

}  // namespace

ProofScript builtin_sv1_script(const FreeModule& P) {
  BassSwanTriple t = make_triple(P, RatMat::identity(static_cast<std::size_t>(P.dim())), P);
  Schematic sch = theta_schematic(t);
  Mor sl = swap_rows_mor(sch.above, 0, {{1, 3}, {2, 4}});
  Mor sm = swap_rows_mor(sch.above, 1, {{0, 3}, {2, 4}});
  Mor sr = swap_rows_mor(sch.above, 2, {{0, 3}, {1, 4}});

  ScriptBuilder b;
  std::size_t eq = b.conjugation_equality(sch, sl, sm, sr);
  DoubleExact S = compile_schematic(rewire_schematic(sch, sl, sm, sr));
  std::size_t zs = b.zero_rule(S);
  b.combine({{eq, 1}, {zs, 1}});
  return b.script();
}

ProofScript builtin_relation_a_script(const SwanMorphism& a, const SwanMorphism& b,
                                      const SplitModSeq& split_p, const SplitModSeq& split_q) {
  if (!check_swan_morphism(a).commutes)
    fail(Err::StepInvalid, "first triple morphism does not commute");
  if (!check_swan_morphism(b).commutes)
    fail(Err::StepInvalid, "second triple morphism does not commute");
  if (!(a.target.P == b.source.P) || !(a.target.Q == b.source.Q))
    fail(Err::StepInvalid, "morphisms are not composable");
  validate_split(split_p);
  validate_split(split_q);
  if (!(split_p.sub == a.source.P) || !(split_p.mid == a.target.P) ||
      !(split_p.quot == b.target.P) || split_p.inc != a.p || split_p.sur != b.p)
    fail(Err::StepInvalid, "P split data does not match the morphisms");
  if (!(split_q.sub == a.source.Q) || !(split_q.mid == a.target.Q) ||
      !(split_q.quot == b.target.Q) || split_q.inc != a.q || split_q.sur != b.q)
    fail(Err::StepInvalid, "Q split data does not match the morphisms");

  DoubleExact top = theta(a.source);
  DoubleExact midd = theta(a.target);
  DoubleExact bot = theta(b.target);

  using AK = AtomKind;
  auto col_des = [&](std::vector<std::pair<AK, const SplitModSeq*>> kinds) {
    std::vector<Cert> cs;
    for (auto [k, sp] : kinds) cs.push_back(Cert::induced_split(k, *sp));
    return des_doubled(canonical_of(Cert::direct_sum(std::move(cs))));
  };
  DoubleExact col_l = col_des({{AK::Disc, &split_p},
                               {AK::ProdTorus, &split_p},
                               {AK::Disc, &split_q},
                               {AK::ProdTorus, &split_q}});
  DoubleExact col_m = col_des({{AK::CoprodDisc, &split_p},
                               {AK::Vect, &split_p},
                               {AK::ProdTorus, &split_p},
                               {AK::CoprodDisc, &split_q},
                               {AK::ProdTorus, &split_q}});
  DoubleExact col_r = col_des({{AK::CoprodDisc, &split_p},
                               {AK::Torus, &split_p},
                               {AK::CoprodDisc, &split_q},
                               {AK::Torus, &split_q}});

  Nen33 n;
  n.rows = {top, midd, bot};
  n.cols = {col_l, col_m, col_r};

  ScriptBuilder sb;
  std::size_t i33 = sb.three(n);
  std::size_t zl = sb.zero_rule(col_l);
  std::size_t zm = sb.zero_rule(col_m);
  std::size_t zr = sb.zero_rule(col_r);
  sb.combine({{i33, 1}, {zl, 1}, {zm, -1}, {zr, 1}});
  return sb.script();
}

ProofScript builtin_relation_b_script(const BassSwanTriple& t1, const BassSwanTriple& t2) {
  BassSwanTriple t3 = relation_b_combine(t1, t2);
  Schematic s1 = theta_schematic(t1);
  Schematic s2 = theta_schematic(t2);
  Schematic s3 = theta_schematic(t3);
  Schematic J = stack_schematics(s1, s2);

  ScriptBuilder b;
  auto e1 = b.excision(J, {0, 1, 2, 3, 4}, {0, 1, 2, 3, 4});

  Mor sl = swap_rows_mor(J.above, 0, {{3, 6}, {4, 7}});
  Mor sm = swap_rows_mor(J.above, 1, {{3, 5}, {4, 7}});
  Mor sr = swap_rows_mor(J.above, 2, {{3, 5}, {4, 6}});
  std::size_t e2 = b.conjugation_equality(J, sl, sm, sr);
  Schematic Jp = rewire_schematic(J, sl, sm, sr);

  auto e3 = b.excision(Jp, {3, 4, 5, 7}, {2, 4, 5, 6});
  std::size_t zw = b.zero_rule(e3.sub);
  Schematic J2 = sub_schematic(Jp, {0, 1, 2, 6, 8, 9}, {0, 1, 3, 7, 8, 9});

  // Transport the second vector summand along phi^{-1}: the lattice row of Q
  // becomes the phi-twisted row, and the twisted row of (Q, psi, R) becomes
  // the twisted row of (P, psi.phi, R). Left and right columns are untouched;
  // the middle wiring keeps its permutation pattern on the new atoms.
  Schematic J3 = J2;
  J3.above[3] = canonical_of(Cert::phi_twisted(t1.P, t1.phi, t1.Q));
  J3.below[4] = canonical_of(Cert::phi_twisted(t3.P, t3.phi, t3.Q));
  J3.wm = rebuild_perm(J2.wm, col_mid(J3.above), col_mid(J3.below));

  DoubleExact J2d = compile_schematic(J2);
  DoubleExact J3d = compile_schematic(J3);
  IsoTriple transport{mor_id(J2d.yin.left), mor_id(J2d.yin.mid), mor_id(J2d.yin.right)};
  if (!J2.above[3].mid.is_zero()) {
    // The transported summand is the one contributed by the lattice row of Q,
    // found by position; module identities may collide.
    std::size_t pos = J2.above[0].mid.size() + J2.above[1].mid.size() + J2.above[2].mid.size();
    Mor v(J2d.yin.mid, J3d.yin.mid);
    auto inv = t1.phi.inverse();
    for (std::size_t i = 0; i < J2d.yin.mid.size(); ++i) {
      if (i == pos)
        v.set_block(i, i, ex_mat(J2d.yin.mid.atoms[i], J3d.yin.mid.atoms[i], *inv));
      else
        v.set_block(i, i, ex_id(J2d.yin.mid.atoms[i]));
    }
    transport.v = v;
  }
  std::size_t e4 = b.double_iso(J2d, J3d, transport);

  Mor s2m = swap_rows_mor(J3.above, 1, {{1, 3}});
  std::size_t e5 = b.conjugation_equality(J3, mor_id(J3d.yin.left), s2m, mor_id(J3d.yin.right));
  Schematic J4 = rewire_schematic(J3, mor_id(J3d.yin.left), s2m, mor_id(J3d.yin.right));

  auto e6 = b.excision(J4, {3}, {2});
  std::size_t zw2 = b.zero_rule(e6.sub);

  if (!des_equal(e6.quot, compile_schematic(s3)))
    fail(Err::StepInvalid, "final quotient is not the schematic of the composed triple");

  b.combine({{e1.step, 1},
             {e2, 1},
             {e3.step, -1},
             {zw, 1},
             {e4, 1},
             {e5, 1},
             {e6.step, -1},
             {zw2, 1}});
  return b.script();
}

}  // namespace relk
