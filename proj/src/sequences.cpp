#include "relk/sequences.hpp"

#include <numeric>
#include <sstream>

namespace relk {

const char* cert_tag_name(CertTag t) {
  switch (t) {
    case CertTag::LatticeInVector: return "lattice_in_vector";
    case CertTag::PhiTwisted: return "phi_twisted";
    case CertTag::CoprodShift: return "coprod_shift";
    case CertTag::ProdShift: return "prod_shift";
    case CertTag::IdentityLeft: return "identity_left";
    case CertTag::IdentityRight: return "identity_right";
    case CertTag::ZeroSeq: return "zero_seq";
    case CertTag::DirectSum: return "direct_sum";
    case CertTag::RewiredByIso: return "rewired_by_iso";
    case CertTag::InducedSplit: return "induced_split";
    case CertTag::QuotientCg: return "quotient_cg";
  }
  return "?";
}

Cert Cert::lattice(const FreeModule& P) {
  Cert c;
  c.tag = CertTag::LatticeInVector;
  c.P = P;
  return c;
}

Cert Cert::phi_twisted(const FreeModule& P, const RatMat& phi, const FreeModule& Q) {
  Cert c;
  c.tag = CertTag::PhiTwisted;
  c.P = P;
  c.phi = phi;
  c.Q = Q;
  return c;
}

Cert Cert::coprod_shift(const FreeModule& P) {
  Cert c;
  c.tag = CertTag::CoprodShift;
  c.P = P;
  return c;
}

Cert Cert::prod_shift(const FreeModule& P) {
  Cert c;
  c.tag = CertTag::ProdShift;
  c.P = P;
  return c;
}

Cert Cert::identity_left(const Obj& X) {
  Cert c;
  c.tag = CertTag::IdentityLeft;
  c.X = X;
  return c;
}

Cert Cert::identity_right(const Obj& X) {
  Cert c;
  c.tag = CertTag::IdentityRight;
  c.X = X;
  return c;
}

Cert Cert::zero_seq() { return Cert{}; }

Cert Cert::direct_sum(std::vector<Cert> cs) {
  Cert c;
  c.tag = CertTag::DirectSum;
  c.children = std::move(cs);
  return c;
}

Cert Cert::rewired(const Cert& inner, IsoTriple iso) {
  Cert c;
  c.tag = CertTag::RewiredByIso;
  c.inner = std::make_shared<Cert>(inner);
  c.iso = std::make_shared<IsoTriple>(std::move(iso));
  return c;
}

Cert Cert::induced_split(AtomKind kind, const SplitModSeq& s) {
  Cert c;
  c.tag = CertTag::InducedSplit;
  c.kind = kind;
  c.split = std::make_shared<SplitModSeq>(s);
  return c;
}

Cert Cert::quotient_cg_of(const Cert& inner) {
  Cert c;
  c.tag = CertTag::QuotientCg;
  c.inner = std::make_shared<Cert>(inner);
  return c;
}

void validate_split(const SplitModSeq& s) {
  if (s.sub.order != s.mid.order || s.mid.order != s.quot.order ||
      s.mid.order.kind != OrderKind::IntegerRing)
    fail(Err::DecompositionInvalid, "split data must live over the integer ring");
  if (s.sub.rank + s.quot.rank != s.mid.rank)
    fail(Err::DecompositionInvalid, "split ranks do not add up");
  auto dims_ok = [](const RatMat& m, int r, int c) {
    return m.rows() == static_cast<std::size_t>(r) && m.cols() == static_cast<std::size_t>(c);
  };
  if (!dims_ok(s.inc, s.mid.dim(), s.sub.dim()) || !dims_ok(s.sur, s.quot.dim(), s.mid.dim()) ||
      !dims_ok(s.section, s.mid.dim(), s.quot.dim()))
    fail(Err::DecompositionInvalid, "split matrix shapes are wrong");
  if (!s.inc.is_integer() || !s.sur.is_integer() || !s.section.is_integer())
    fail(Err::DecompositionInvalid, "split matrices must be integral");
  if (!(s.sur * s.inc).is_zero()) fail(Err::DecompositionInvalid, "sur . inc != 0");
  if (!(s.sur * s.section).is_identity())
    fail(Err::DecompositionInvalid, "section is not a section of sur");
  Rat d = s.inc.hcat(s.section).det();
  if (d != 1 && d != -1)
    fail(Err::DecompositionInvalid, "[inc | section] is not invertible over Z");
}

namespace {

Mor single_block_mor(const Obj& src, const Obj& dst, const ExprPtr& e) {
  Mor m(src, dst);
  if (!src.is_zero() && !dst.is_zero()) m.set_block(0, 0, e);
  return m;
}

Atom atom_of_kind(AtomKind k, const FreeModule& P) { return Atom{k, P}; }

}  // namespace

ShortExact canonical_of(const Cert& c) {
  switch (c.tag) {
    case CertTag::LatticeInVector: {
      Obj l = Obj::single(disc(c.P)), m = Obj::single(vect(c.P)), r = Obj::single(torus(c.P));
      return ShortExact{l, m, r, single_block_mor(l, m, l.is_zero() ? nullptr : ex_iota(c.P)),
                        single_block_mor(m, r, m.is_zero() ? nullptr : ex_quot(c.P)), c};
    }
    case CertTag::PhiTwisted: {
      Obj l = Obj::single(disc(c.Q)), m = Obj::single(vect(c.P)), r = Obj::single(torus(c.Q));
      if (l.is_zero())
        return ShortExact{l, m, r, mor_zero(l, m), mor_zero(m, r), c};
      if (c.phi.rows() != static_cast<std::size_t>(c.Q.dim()) ||
          c.phi.cols() != static_cast<std::size_t>(c.P.dim()) || c.phi.rows() != c.phi.cols())
        fail(Err::DimensionMismatch, "phi shape unusable for a twisted sequence");
      auto inv = c.phi.inverse();
      if (!inv) fail(Err::SingularMatrix, "phi is singular");
      ExprPtr inc_e = ex_comp(ex_mat(vect(c.Q), vect(c.P), *inv), ex_iota(c.Q));
      ExprPtr sur_e = ex_comp(ex_quot(c.Q), ex_mat(vect(c.P), vect(c.Q), c.phi));
      return ShortExact{l, m, r, single_block_mor(l, m, inc_e), single_block_mor(m, r, sur_e), c};
    }
    case CertTag::CoprodShift: {
      Obj l = Obj::single(disc(c.P)), m = Obj::single(coprod_disc(c.P));
      return ShortExact{l, m, m, single_block_mor(l, m, l.is_zero() ? nullptr : ex_incl0(c.P)),
                        single_block_mor(m, m, m.is_zero() ? nullptr : ex_shift_coprod(c.P)), c};
    }
    case CertTag::ProdShift: {
      Obj m = Obj::single(prod_torus(c.P)), r = Obj::single(torus(c.P));
      return ShortExact{m, m, r, single_block_mor(m, m, m.is_zero() ? nullptr : ex_shift_prod(c.P)),
                        single_block_mor(m, r, m.is_zero() ? nullptr : ex_proj0(c.P)), c};
    }
    case CertTag::IdentityLeft:
      return ShortExact{c.X, c.X, Obj::zero(), mor_id(c.X), mor_zero(c.X, Obj::zero()), c};
    case CertTag::IdentityRight:
      return ShortExact{Obj::zero(), c.X, c.X, mor_zero(Obj::zero(), c.X), mor_id(c.X), c};
    case CertTag::ZeroSeq:
      return ShortExact{Obj::zero(), Obj::zero(), Obj::zero(), Mor(Obj::zero(), Obj::zero()),
                        Mor(Obj::zero(), Obj::zero()), c};
    case CertTag::DirectSum: {
      ShortExact acc = canonical_of(Cert::zero_seq());
      for (const auto& ch : c.children) {
        ShortExact part = canonical_of(ch);
        acc = ShortExact{obj_concat(acc.left, part.left), obj_concat(acc.mid, part.mid),
                         obj_concat(acc.right, part.right), direct_sum(acc.inc, part.inc),
                         direct_sum(acc.sur, part.sur), c};
      }
      acc.cert = c;
      return acc;
    }
    case CertTag::RewiredByIso: {
      ShortExact base = canonical_of(*c.inner);
      const IsoTriple& t = *c.iso;
      if (t.u.src() != base.left || t.v.src() != base.mid || t.w.src() != base.right)
        fail(Err::TagMismatch, "rewiring isos do not start at the base sequence objects");
      if (!is_blockperm_iso(t.u, true) || !is_blockperm_iso(t.v, true) ||
          !is_blockperm_iso(t.w, true))
        fail(Err::NotIso, "rewiring components are not block-permutation isomorphisms");
      Mor inc = compose(compose(t.v, base.inc), blockperm_inverse(t.u));
      Mor sur = compose(compose(t.w, base.sur), blockperm_inverse(t.v));
      return ShortExact{t.u.dst(), t.v.dst(), t.w.dst(), inc, sur, c};
    }
    case CertTag::InducedSplit: {
      const SplitModSeq& s = *c.split;
      validate_split(s);
      Obj l = Obj::single(atom_of_kind(c.kind, s.sub));
      Obj m = Obj::single(atom_of_kind(c.kind, s.mid));
      Obj r = Obj::single(atom_of_kind(c.kind, s.quot));
      Mor inc(l, m), sur(m, r);
      if (!l.is_zero() && !m.is_zero())
        inc.set_block(0, 0, ex_mat(l.atoms[0], m.atoms[0], s.inc));
      if (!m.is_zero() && !r.is_zero())
        sur.set_block(0, 0, ex_mat(m.atoms[0], r.atoms[0], s.sur));
      return ShortExact{l, m, r, inc, sur, c};
    }
    case CertTag::QuotientCg: {
      ShortExact base = canonical_of(*c.inner);
      ShortExact q{quotient_cg(base.left), quotient_cg(base.mid), quotient_cg(base.right),
                   quotient_cg(base.inc), quotient_cg(base.sur), c};
      return q;
    }
  }
  fail(Err::TagMismatch, "unknown certificate tag");
}

ShortExact certify_exact(const Obj& left, const Obj& mid, const Obj& right, const Mor& inc,
                         const Mor& sur, const Cert& cert) {
  if (inc.src() != left || inc.dst() != mid || sur.src() != mid || sur.dst() != right)
    fail(Err::EndpointMismatch, "sequence maps do not match the stated objects");
  ShortExact canon = canonical_of(cert);
  if (canon.left != left || canon.mid != mid || canon.right != right)
    fail(Err::TagMismatch, std::string("certificate ") + cert_tag_name(cert.tag) +
                               " describes different objects: " + canon.left.str() + " -> " +
                               canon.mid.str() + " -> " + canon.right.str());
  if (!equal_morphisms(inc, canon.inc))
    fail(Err::TagMismatch,
         std::string("inclusion differs from the canonical map of ") + cert_tag_name(cert.tag));
  if (!equal_morphisms(sur, canon.sur))
    fail(Err::TagMismatch,
         std::string("surjection differs from the canonical map of ") + cert_tag_name(cert.tag));
  // A matching certificate forces the zero composite; re-check it anyway so a
  // broken certificate implementation cannot hand out an inexact sequence.
  if (!is_zero_morphism(compose(sur, inc)))
    fail(Err::CompositeNotZero, "sur . inc is not zero");
  return ShortExact{left, mid, right, inc, sur, cert};
}

void revalidate(const ShortExact& se) {
  certify_exact(se.left, se.mid, se.right, se.inc, se.sur, se.cert);
}

void revalidate(const DoubleExact& de) {
  revalidate(de.yin);
  revalidate(de.yang);
  if (de.yin.left != de.yang.left || de.yin.mid != de.yang.mid || de.yin.right != de.yang.right)
    fail(Err::EndpointMismatch, "yin and yang do not share their objects");
}

ShortExact se_direct_sum(const std::vector<ShortExact>& rows) {
  std::vector<Cert> certs;
  certs.reserve(rows.size());
  for (const auto& r : rows) certs.push_back(r.cert);
  Cert c = Cert::direct_sum(std::move(certs));
  ShortExact acc = canonical_of(Cert::zero_seq());
  for (const auto& row : rows)
    acc = ShortExact{obj_concat(acc.left, row.left), obj_concat(acc.mid, row.mid),
                     obj_concat(acc.right, row.right), direct_sum(acc.inc, row.inc),
                     direct_sum(acc.sur, row.sur), c};
  acc.cert = c;
  return acc;
}

DoubleExact des_of(const ShortExact& yin, const ShortExact& yang) {
  DoubleExact d{yin, yang};
  if (yin.left != yang.left || yin.mid != yang.mid || yin.right != yang.right)
    fail(Err::EndpointMismatch, "yin and yang objects differ");
  return d;
}

DoubleExact des_doubled(const ShortExact& se) { return DoubleExact{se, se}; }

DoubleExact zero_des() {
  ShortExact z = canonical_of(Cert::zero_seq());
  return DoubleExact{z, z};
}

DoubleExact direct_sum_des(const DoubleExact& d1, const DoubleExact& d2) {
  return DoubleExact{se_direct_sum({d1.yin, d2.yin}), se_direct_sum({d1.yang, d2.yang})};
}

namespace {

void append_mor_key(std::ostringstream& os, const Mor& m) {
  auto vals = normal_values(m);
  for (std::size_t i = 0; i < m.dst().size(); ++i)
    for (std::size_t j = 0; j < m.src().size(); ++j) {
      const HomVal& h = vals[i * m.src().size() + j];
      if (h.is_zero()) continue;
      os << "(" << i << "," << j << ")" << h.key(m.src().atoms[j], m.dst().atoms[i]) << ";";
    }
}

}  // namespace

std::string des_key(const DoubleExact& d) {
  std::ostringstream os;
  os << "L[" << d.yin.left.str() << "]M[" << d.yin.mid.str() << "]R[" << d.yin.right.str() << "]";
  os << "p{";
  append_mor_key(os, d.yin.inc);
  os << "}r{";
  append_mor_key(os, d.yin.sur);
  os << "}q{";
  append_mor_key(os, d.yang.inc);
  os << "}s{";
  append_mor_key(os, d.yang.sur);
  os << "}";
  return os.str();
}

bool des_equal(const DoubleExact& a, const DoubleExact& b) { return des_key(a) == des_key(b); }

ShortExact quotient_cg(const ShortExact& se) {
  return ShortExact{quotient_cg(se.left),     quotient_cg(se.mid), quotient_cg(se.right),
                    quotient_cg(se.inc),      quotient_cg(se.sur),
                    Cert::quotient_cg_of(se.cert)};
}

DoubleExact quotient_cg(const DoubleExact& d) {
  return DoubleExact{quotient_cg(d.yin), quotient_cg(d.yang)};
}

Obj col_left(const std::vector<ShortExact>& rows) {
  Obj o;
  for (const auto& r : rows) o = obj_concat(o, r.left);
  return o;
}

Obj col_mid(const std::vector<ShortExact>& rows) {
  Obj o;
  for (const auto& r : rows) o = obj_concat(o, r.mid);
  return o;
}

Obj col_right(const std::vector<ShortExact>& rows) {
  Obj o;
  for (const auto& r : rows) o = obj_concat(o, r.right);
  return o;
}

namespace {

const Obj& pick_col(const ShortExact& r, int column) {
  switch (column) {
    case 0: return r.left;
    case 1: return r.mid;
    default: return r.right;
  }
}

std::vector<std::size_t> col_offsets(const std::vector<ShortExact>& rows, int column) {
  std::vector<std::size_t> off(rows.size() + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    off[i + 1] = off[i] + pick_col(rows[i], column).size();
  return off;
}

}  // namespace

Mor wiring_from_row_pairs(const std::vector<ShortExact>& above,
                          const std::vector<ShortExact>& below,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                          int column) {
  Obj src, dst;
  for (const auto& r : above) src = obj_concat(src, pick_col(r, column));
  for (const auto& r : below) dst = obj_concat(dst, pick_col(r, column));
  auto aoff = col_offsets(above, column);
  auto boff = col_offsets(below, column);
  Mor w(src, dst);
  for (const auto& [ai, bi] : pairs) {
    const Obj& ao = pick_col(above.at(ai), column);
    const Obj& bo = pick_col(below.at(bi), column);
    if (ao != bo)
      fail(Err::ColumnMismatch, "paired rows carry different objects: " + ao.str() + " vs " +
                                    bo.str());
    for (std::size_t k = 0; k < ao.size(); ++k)
      w.set_block(boff[bi] + k, aoff[ai] + k, ex_id(ao.atoms[k]));
  }
  return w;
}

DoubleExact compile_schematic(const Schematic& s) {
  for (const auto& r : s.above) revalidate(r);
  for (const auto& r : s.below) revalidate(r);

  Obj la = col_left(s.above), ma = col_mid(s.above), ra = col_right(s.above);
  Obj lb = col_left(s.below), mb = col_mid(s.below), rb = col_right(s.below);
  if (s.wl.src() != la || s.wl.dst() != lb || s.wm.src() != ma || s.wm.dst() != mb ||
      s.wr.src() != ra || s.wr.dst() != rb)
    fail(Err::ColumnMismatch, "wiring endpoints do not match the column sums");
  if (!is_rewiring_iso(s.wl) || !is_rewiring_iso(s.wm) || !is_rewiring_iso(s.wr))
    fail(Err::WiringNotIso, "wiring is not a signed permutation of identical atoms");

  ShortExact accA = se_direct_sum(s.above);
  ShortExact accB = se_direct_sum(s.below);
  const Mor& p = accA.inc;
  const Mor& r = accA.sur;
  const Mor& bi = accB.inc;
  const Mor& bs = accB.sur;
  Mor q = compose(blockperm_inverse(s.wm), compose(bi, s.wl));
  Mor sq = compose(blockperm_inverse(s.wr), compose(bs, s.wm));

  Cert yin_cert = Cert::direct_sum([&] {
    std::vector<Cert> cs;
    for (const auto& row : s.above) cs.push_back(row.cert);
    return cs;
  }());
  Cert below_cert = Cert::direct_sum([&] {
    std::vector<Cert> cs;
    for (const auto& row : s.below) cs.push_back(row.cert);
    return cs;
  }());
  IsoTriple t{blockperm_inverse(s.wl), blockperm_inverse(s.wm), blockperm_inverse(s.wr)};
  Cert yang_cert = Cert::rewired(below_cert, t);

  ShortExact yin = certify_exact(la, ma, ra, p, r, yin_cert);
  ShortExact yang = certify_exact(la, ma, ra, q, sq, yang_cert);
  return DoubleExact{yin, yang};
}

Schematic stack_schematics(const Schematic& a, const Schematic& b) {
  Schematic s;
  s.above = a.above;
  s.above.insert(s.above.end(), b.above.begin(), b.above.end());
  s.below = a.below;
  s.below.insert(s.below.end(), b.below.begin(), b.below.end());
  s.wl = direct_sum(a.wl, b.wl);
  s.wm = direct_sum(a.wm, b.wm);
  s.wr = direct_sum(a.wr, b.wr);
  return s;
}

Schematic rewire_schematic(const Schematic& s, const Mor& sl, const Mor& sm, const Mor& sr) {
  Schematic out = s;
  out.wl = compose(s.wl, blockperm_inverse(sl));
  out.wm = compose(s.wm, blockperm_inverse(sm));
  out.wr = compose(s.wr, blockperm_inverse(sr));
  return out;
}

namespace {

Mor restrict_wiring(const Mor& w, const std::vector<ShortExact>& above,
                    const std::vector<ShortExact>& below,
                    const std::vector<std::size_t>& above_rows,
                    const std::vector<std::size_t>& below_rows, int column) {
  auto aoff = col_offsets(above, column);
  auto boff = col_offsets(below, column);
  std::vector<std::size_t> src_keep, dst_keep;
  for (auto ai : above_rows)
    for (std::size_t k = aoff[ai]; k < aoff[ai + 1]; ++k) src_keep.push_back(k);
  for (auto bi : below_rows)
    for (std::size_t k = boff[bi]; k < boff[bi + 1]; ++k) dst_keep.push_back(k);
  std::vector<long> dst_pos(w.dst().size(), -1);
  for (std::size_t n = 0; n < dst_keep.size(); ++n) dst_pos[dst_keep[n]] = static_cast<long>(n);

  Mor r(obj_select(w.src(), src_keep), obj_select(w.dst(), dst_keep));
  for (std::size_t n = 0; n < src_keep.size(); ++n) {
    std::size_t j = src_keep[n];
    for (std::size_t i = 0; i < w.dst().size(); ++i) {
      if (!w.block(i, j)) continue;
      if (dst_pos[i] < 0)
        fail(Err::ColumnMismatch, "sub-schematic wiring escapes the selected rows");
      r.set_block(static_cast<std::size_t>(dst_pos[i]), n, w.block(i, j));
    }
  }
  return r;
}

}  // namespace

Schematic sub_schematic(const Schematic& s, const std::vector<std::size_t>& above_rows,
                        const std::vector<std::size_t>& below_rows) {
  Schematic out;
  for (auto i : above_rows) out.above.push_back(s.above.at(i));
  for (auto i : below_rows) out.below.push_back(s.below.at(i));
  out.wl = restrict_wiring(s.wl, s.above, s.below, above_rows, below_rows, 0);
  out.wm = restrict_wiring(s.wm, s.above, s.below, above_rows, below_rows, 1);
  out.wr = restrict_wiring(s.wr, s.above, s.below, above_rows, below_rows, 2);
  return out;
}

Schematic quotient_cg(const Schematic& s) {
  Schematic out;
  for (const auto& row : s.above) {
    ShortExact q = quotient_cg(row);
    if (!(q.left.is_zero() && q.mid.is_zero() && q.right.is_zero())) out.above.push_back(q);
  }
  for (const auto& row : s.below) {
    ShortExact q = quotient_cg(row);
    if (!(q.left.is_zero() && q.mid.is_zero() && q.right.is_zero())) out.below.push_back(q);
  }
  // The wiring survives on the atoms that survive; quotient_cg on a
  // morphism is exactly that restriction.
  out.wl = quotient_cg(s.wl);
  out.wm = quotient_cg(s.wm);
  out.wr = quotient_cg(s.wr);
  return out;
}

}  // namespace relk
