#include "relk/lca.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace relk {

namespace {

std::atomic<long> g_disagreements{0};

bool killed_in_cg(AtomKind k) { return k != AtomKind::CoprodDisc; }

bool is_seq_kind(AtomKind k) {
  return k == AtomKind::CoprodDisc || k == AtomKind::ProdTorus;
}

enum class Slot { None, SingleInt, SingleRat, SingleMod1, Shifts };

// Which canonical payload a hom between these atom kinds carries.
Slot slot_of(AtomKind s, AtomKind d) {
  using K = AtomKind;
  if (s == K::Disc && d == K::Disc) return Slot::SingleInt;
  if (s == K::Disc && d == K::Vect) return Slot::SingleRat;
  if (s == K::Disc && d == K::Torus) return Slot::SingleMod1;
  if (s == K::Disc && d == K::CoprodDisc) return Slot::SingleInt;
  if (s == K::Vect && d == K::Vect) return Slot::SingleRat;
  if (s == K::Vect && d == K::Torus) return Slot::SingleRat;
  if (s == K::Torus && d == K::Torus) return Slot::SingleInt;
  if (s == K::CoprodDisc && d == K::CoprodDisc) return Slot::Shifts;
  if (s == K::ProdTorus && d == K::ProdTorus) return Slot::Shifts;
  if (s == K::ProdTorus && d == K::Torus) return Slot::SingleInt;
  return Slot::None;
}

HomVal hv_zero() { return HomVal{}; }

HomVal hv_canon(HomVal h, const Atom& src, const Atom& dst) {
  Slot sl = slot_of(src.kind, dst.kind);
  if (sl == Slot::None) return hv_zero();
  if (h.form == HomVal::Form::Single) {
    if (sl == Slot::SingleMod1) h.m = h.m.mod1();
    if (h.m.is_zero()) return hv_zero();
  } else if (h.form == HomVal::Form::Shifts) {
    for (auto it = h.sh.begin(); it != h.sh.end();)
      it = it->second.is_zero() ? h.sh.erase(it) : std::next(it);
    if (h.sh.empty()) return hv_zero();
  }
  return h;
}

HomVal hv_single(RatMat m, const Atom& src, const Atom& dst) {
  HomVal h;
  h.form = HomVal::Form::Single;
  h.m = std::move(m);
  return hv_canon(std::move(h), src, dst);
}

HomVal hv_shifts(std::map<int, RatMat> sh, const Atom& src, const Atom& dst) {
  HomVal h;
  h.form = HomVal::Form::Shifts;
  h.sh = std::move(sh);
  return hv_canon(std::move(h), src, dst);
}

HomVal hv_add(const HomVal& a, const HomVal& b, const Atom& src, const Atom& dst) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.form != b.form) fail(Err::ElementShapeMismatch, "adding incompatible hom forms");
  if (a.form == HomVal::Form::Single) return hv_single(a.m + b.m, src, dst);
  std::map<int, RatMat> sh = a.sh;
  for (const auto& [k, m] : b.sh) {
    auto it = sh.find(k);
    if (it == sh.end())
      sh.emplace(k, m);
    else
      it->second = it->second + m;
  }
  return hv_shifts(std::move(sh), src, dst);
}

HomVal hv_neg(const HomVal& a, const Atom& src, const Atom& dst) {
  if (a.is_zero()) return a;
  if (a.form == HomVal::Form::Single) return hv_single(-a.m, src, dst);
  std::map<int, RatMat> sh;
  for (const auto& [k, m] : a.sh) sh.emplace(k, -m);
  return hv_shifts(std::move(sh), src, dst);
}

// f after g, g: a -> b, f: b -> c.
HomVal hv_compose(const HomVal& f, const HomVal& g, const Atom& a, const Atom& b, const Atom& c) {
  if (f.is_zero() || g.is_zero()) return hv_zero();
  Slot sg = slot_of(a.kind, b.kind), sf = slot_of(b.kind, c.kind);
  bool g_single = sg != Slot::Shifts, f_single = sf != Slot::Shifts;
  if (g_single && f_single) return hv_single(f.m * g.m, a, c);
  if (g_single && !f_single) {
    // Disc -> CoprodDisc followed by a shift polynomial: only the k = 0
    // coefficient survives, shifting left kills index 0.
    auto it = f.sh.find(0);
    if (it == f.sh.end()) return hv_zero();
    return hv_single(it->second * g.m, a, c);
  }
  if (!g_single && f_single) {
    // ProdTorus shift polynomial followed by proj0: only k = 0 survives.
    auto it = g.sh.find(0);
    if (it == g.sh.end()) return hv_zero();
    return hv_single(f.m * it->second, a, c);
  }
  std::map<int, RatMat> sh;
  for (const auto& [k, B] : f.sh)
    for (const auto& [j, A] : g.sh) {
      RatMat prod = B * A;
      auto it = sh.find(k + j);
      if (it == sh.end())
        sh.emplace(k + j, std::move(prod));
      else
        it->second = it->second + prod;
    }
  return hv_shifts(std::move(sh), a, c);
}

HomVal hv_identity(const Atom& at) {
  std::size_t n = static_cast<std::size_t>(at.dim());
  if (is_seq_kind(at.kind)) return hv_shifts({{0, RatMat::identity(n)}}, at, at);
  return hv_single(RatMat::identity(n), at, at);
}

// --- expression construction -------------------------------------------

ExprPtr make_expr(ExTag tag, Atom src, Atom dst, RatMat mat, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->tag = tag;
  e->src = std::move(src);
  e->dst = std::move(dst);
  e->mat = std::move(mat);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

const char* tag_name(ExTag t) {
  switch (t) {
    case ExTag::Zero: return "zero";
    case ExTag::Id: return "id";
    case ExTag::Iota: return "iota";
    case ExTag::QuotT: return "quot";
    case ExTag::ShiftCoprod: return "shift_coprod";
    case ExTag::InclCoprod0: return "incl_coprod0";
    case ExTag::ShiftProd: return "shift_prod";
    case ExTag::ProjProd0: return "proj_prod0";
    case ExTag::MatMap: return "mat";
    case ExTag::Neg: return "neg";
    case ExTag::Comp: return "comp";
    case ExTag::Sum: return "sum";
  }
  return "?";
}

// --- normal forms with a global memo ------------------------------------

// Per-thread memo tables keep every operation lock-free; values are pure
// functions of the expression, so divergent caches cannot disagree.
std::unordered_map<std::string, HomVal>& nf_cache() {
  thread_local std::unordered_map<std::string, HomVal> c;
  return c;
}

std::unordered_set<std::string>& verified_cache() {
  thread_local std::unordered_set<std::string> c;
  return c;
}

HomVal nf_expr(const ExprPtr& e);

HomVal nf_expr_uncached(const Expr& e) {
  switch (e.tag) {
    case ExTag::Zero:
      return hv_zero();
    case ExTag::Id:
      return hv_identity(e.src);
    case ExTag::Iota:
    case ExTag::QuotT:
    case ExTag::InclCoprod0:
    case ExTag::ProjProd0:
      return hv_single(RatMat::identity(static_cast<std::size_t>(e.src.dim())), e.src, e.dst);
    case ExTag::ShiftCoprod:
    case ExTag::ShiftProd:
      return hv_shifts({{1, RatMat::identity(static_cast<std::size_t>(e.src.dim()))}}, e.src,
                       e.dst);
    case ExTag::MatMap:
      if (is_seq_kind(e.src.kind)) return hv_shifts({{0, e.mat}}, e.src, e.dst);
      return hv_single(e.mat, e.src, e.dst);
    case ExTag::Neg:
      return hv_neg(nf_expr(e.a), e.src, e.dst);
    case ExTag::Comp:
      return hv_compose(nf_expr(e.a), nf_expr(e.b), e.b->src, e.b->dst, e.a->dst);
    case ExTag::Sum:
      return hv_add(nf_expr(e.a), nf_expr(e.b), e.src, e.dst);
  }
  return hv_zero();
}

HomVal nf_expr(const ExprPtr& e) {
  if (!e) return hv_zero();
  auto& cache = nf_cache();
  auto it = cache.find(e->key());
  if (it != cache.end()) return it->second;
  HomVal h = nf_expr_uncached(*e);
  cache.emplace(e->key(), h);
  return h;
}

// --- rendering a normal value back into a canonical expression ----------

ExprPtr shift_pow(const Atom& at, int k) {
  ExprPtr s = (at.kind == AtomKind::CoprodDisc) ? ex_shift_coprod(at.mod) : ex_shift_prod(at.mod);
  ExprPtr r = s;
  for (int i = 1; i < k; ++i) r = ex_comp(s, r);
  return r;
}

ExprPtr render_hv(const HomVal& h, const Atom& src, const Atom& dst) {
  using K = AtomKind;
  if (h.is_zero()) return nullptr;
  if (h.form == HomVal::Form::Single) {
    const RatMat& m = h.m;
    bool ident = m.is_identity();
    if (src.kind == K::Disc && dst.kind == K::Disc)
      return ident ? ex_id(src) : ex_mat(src, dst, m);
    if (src.kind == K::Vect && dst.kind == K::Vect)
      return ident ? ex_id(src) : ex_mat(src, dst, m);
    if (src.kind == K::Torus && dst.kind == K::Torus)
      return ident ? ex_id(src) : ex_mat(src, dst, m);
    if (src.kind == K::Disc && dst.kind == K::Vect) {
      if (ident && src.mod == dst.mod) return ex_iota(src.mod);
      return ex_comp(ex_mat(vect(src.mod), dst, m), ex_iota(src.mod));
    }
    if (src.kind == K::Vect && dst.kind == K::Torus) {
      if (ident && src.mod == dst.mod) return ex_quot(dst.mod);
      return ex_comp(ex_quot(dst.mod), ex_mat(src, vect(dst.mod), m));
    }
    if (src.kind == K::Disc && dst.kind == K::Torus)
      return ex_comp(ex_quot(dst.mod),
                     ex_comp(ex_mat(vect(src.mod), vect(dst.mod), m), ex_iota(src.mod)));
    if (src.kind == K::Disc && dst.kind == K::CoprodDisc) {
      if (ident && src.mod == dst.mod) return ex_incl0(src.mod);
      return ex_comp(ex_incl0(dst.mod), ex_mat(src, disc(dst.mod), m));
    }
    if (src.kind == K::ProdTorus && dst.kind == K::Torus) {
      if (ident && src.mod == dst.mod) return ex_proj0(src.mod);
      return ex_comp(ex_mat(torus(src.mod), dst, m), ex_proj0(src.mod));
    }
    fail(Err::ElementShapeMismatch, "unrenderable hom slot");
  }
  // Shift polynomial, terms by ascending k.
  ExprPtr acc;
  for (const auto& [k, A] : h.sh) {
    ExprPtr term;
    if (k == 0)
      term = A.is_identity() ? ex_id(src) : ex_mat(src, dst, A);
    else {
      term = shift_pow(src, k);
      if (!A.is_identity()) term = ex_comp(ex_mat(src, dst, A), term);
    }
    acc = acc ? ex_sum(acc, term) : term;
  }
  return acc;
}

// --- elements -------------------------------------------------------------

std::vector<Rat> zero_vec(std::size_t n) { return std::vector<Rat>(n, Rat(0)); }

std::vector<Rat> vec_add(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  std::vector<Rat> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

std::vector<Rat> vec_neg(const std::vector<Rat>& a) {
  std::vector<Rat> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

std::vector<Rat> vec_mod1(const std::vector<Rat>& a) {
  std::vector<Rat> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = rat_mod1(a[i]);
  return r;
}

bool vec_is_zero(const std::vector<Rat>& a) {
  return std::all_of(a.begin(), a.end(), [](const Rat& x) { return x == 0; });
}

std::vector<Rat> matvec(const RatMat& m, const std::vector<Rat>& v) {
  if (m.cols() != v.size()) fail(Err::ElementShapeMismatch, "matrix/vector size mismatch");
  std::vector<Rat> r(m.rows(), Rat(0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.at(i, j) != 0 && v[j] != 0) r[i] += m.at(i, j) * v[j];
  return r;
}

ElemPart part_zero(const Atom& at) {
  ElemPart p;
  if (!is_seq_kind(at.kind)) p.v = zero_vec(static_cast<std::size_t>(at.dim()));
  return p;
}

ElemPart part_canon(const Atom& at, ElemPart p) {
  if (is_seq_kind(at.kind)) {
    for (auto it = p.seq.begin(); it != p.seq.end();) {
      if (at.kind == AtomKind::ProdTorus) it->second = vec_mod1(it->second);
      it = vec_is_zero(it->second) ? p.seq.erase(it) : std::next(it);
    }
  } else if (at.kind == AtomKind::Torus) {
    p.v = vec_mod1(p.v);
  }
  return p;
}

ElemPart part_add(const Atom& at, const ElemPart& a, const ElemPart& b) {
  ElemPart r;
  if (is_seq_kind(at.kind)) {
    r.seq = a.seq;
    for (const auto& [k, v] : b.seq) {
      auto it = r.seq.find(k);
      if (it == r.seq.end())
        r.seq.emplace(k, v);
      else
        it->second = vec_add(it->second, v);
    }
  } else {
    r.v = vec_add(a.v, b.v);
  }
  return part_canon(at, std::move(r));
}

bool part_eq(const Atom& at, const ElemPart& a, const ElemPart& b) {
  if (is_seq_kind(at.kind)) return a.seq == b.seq;
  return a.v == b.v;
}

ElemPart eval_expr(const ExprPtr& e, const ElemPart& x);

ElemPart eval_expr_raw(const Expr& e, const ElemPart& x) {
  switch (e.tag) {
    case ExTag::Zero:
      return part_zero(e.dst);
    case ExTag::Id:
      return x;
    case ExTag::Iota:
      return ElemPart{x.v, {}};
    case ExTag::QuotT: {
      ElemPart p;
      p.v = vec_mod1(x.v);
      return p;
    }
    case ExTag::ShiftCoprod: {
      ElemPart p;
      for (const auto& [k, v] : x.seq)
        if (k >= 1) p.seq.emplace(k - 1, v);
      return p;
    }
    case ExTag::InclCoprod0: {
      ElemPart p;
      p.seq.emplace(0, x.v);
      return p;
    }
    case ExTag::ShiftProd: {
      ElemPart p;
      for (const auto& [k, v] : x.seq) p.seq.emplace(k + 1, v);
      return p;
    }
    case ExTag::ProjProd0: {
      ElemPart p;
      auto it = x.seq.find(0);
      p.v = (it == x.seq.end()) ? zero_vec(static_cast<std::size_t>(e.dst.dim())) : it->second;
      return p;
    }
    case ExTag::MatMap: {
      ElemPart p;
      if (is_seq_kind(e.src.kind)) {
        for (const auto& [k, v] : x.seq) p.seq.emplace(k, matvec(e.mat, v));
      } else {
        p.v = matvec(e.mat, x.v);
      }
      return p;
    }
    case ExTag::Neg: {
      ElemPart inner = eval_expr(e.a, x);
      ElemPart p;
      if (is_seq_kind(e.dst.kind)) {
        for (const auto& [k, v] : inner.seq) p.seq.emplace(k, vec_neg(v));
      } else {
        p.v = vec_neg(inner.v);
      }
      return p;
    }
    case ExTag::Comp:
      return eval_expr(e.a, eval_expr(e.b, x));
    case ExTag::Sum:
      return part_add(e.dst, eval_expr(e.a, x), eval_expr(e.b, x));
  }
  return part_zero(e.dst);
}

ElemPart eval_expr(const ExprPtr& e, const ElemPart& x) {
  if (!e) fail(Err::ElementShapeMismatch, "evaluating null block");
  return part_canon(e->dst, eval_expr_raw(*e, x));
}

ElemPart eval_hv(const HomVal& h, const Atom& src, const Atom& dst, const ElemPart& x) {
  if (h.is_zero()) return part_zero(dst);
  ElemPart p;
  if (h.form == HomVal::Form::Single) {
    if (src.kind == AtomKind::Disc && dst.kind == AtomKind::CoprodDisc) {
      p.seq.emplace(0, matvec(h.m, x.v));
    } else if (src.kind == AtomKind::ProdTorus) {
      auto it = x.seq.find(0);
      std::vector<Rat> v0 =
          (it == x.seq.end()) ? zero_vec(h.m.cols()) : it->second;
      p.v = matvec(h.m, v0);
    } else {
      p.v = matvec(h.m, x.v);
    }
  } else {
    for (const auto& [k, A] : h.sh)
      for (const auto& [j, v] : x.seq) {
        int idx = (src.kind == AtomKind::CoprodDisc) ? j - k : j + k;
        if (idx < 0) continue;
        auto w = matvec(A, v);
        auto it = p.seq.find(idx);
        if (it == p.seq.end())
          p.seq.emplace(idx, std::move(w));
        else
          it->second = vec_add(it->second, w);
      }
  }
  return part_canon(dst, std::move(p));
}

int expr_shift_depth(const ExprPtr& e) {
  if (!e) return 0;
  switch (e->tag) {
    case ExTag::ShiftCoprod:
    case ExTag::ShiftProd:
      return 1;
    case ExTag::Neg:
      return expr_shift_depth(e->a);
    case ExTag::Comp:
      return expr_shift_depth(e->a) + expr_shift_depth(e->b);
    case ExTag::Sum:
      return std::max(expr_shift_depth(e->a), expr_shift_depth(e->b));
    default:
      return 0;
  }
}

std::vector<ElemPart> atom_samples(const Atom& at, int max_index) {
  std::vector<ElemPart> out;
  std::size_t n = static_cast<std::size_t>(at.dim());
  auto basis = [&](std::size_t c, const Rat& val) {
    auto v = zero_vec(n);
    v[c] = val;
    return v;
  };
  switch (at.kind) {
    case AtomKind::Disc:
    case AtomKind::Vect:
      for (std::size_t c = 0; c < n; ++c) out.push_back(ElemPart{basis(c, Rat(1)), {}});
      break;
    case AtomKind::Torus:
      for (std::size_t c = 0; c < n; ++c) {
        out.push_back(ElemPart{basis(c, Rat(1, 2)), {}});
        out.push_back(ElemPart{basis(c, Rat(1, 3)), {}});
      }
      break;
    case AtomKind::CoprodDisc:
      for (int i = 0; i <= max_index; ++i)
        for (std::size_t c = 0; c < n; ++c) {
          ElemPart p;
          p.seq.emplace(i, basis(c, Rat(1)));
          out.push_back(std::move(p));
        }
      break;
    case AtomKind::ProdTorus:
      for (int i = 0; i <= max_index; ++i)
        for (std::size_t c = 0; c < n; ++c) {
          ElemPart p;
          p.seq.emplace(i, basis(c, Rat(1, 2)));
          out.push_back(std::move(p));
        }
      break;
  }
  return out;
}

// Cross-check one block: structural evaluation vs the canonical value, on the
// generating family of the source atom. Memoized by expression key.
void selfcheck_block(const ExprPtr& e, const HomVal& h) {
  if (!e) return;
  auto& done = verified_cache();
  if (done.count(e->key())) return;
  int n = 1 + expr_shift_depth(e);
  for (const auto& x : atom_samples(e->src, n)) {
    ElemPart lhs = eval_expr(e, x);
    ElemPart rhs = eval_hv(h, e->src, e->dst, x);
    if (!part_eq(e->dst, lhs, rhs)) {
      ++g_disagreements;
      fail(Err::NormalFormVsEvalDisagreement,
           "block " + e->key() + " evaluates differently from its normal form");
    }
  }
  done.insert(e->key());
}

}  // namespace

// --- public types --------------------------------------------------------

const char* atom_kind_name(AtomKind k) {
  switch (k) {
    case AtomKind::Disc: return "disc";
    case AtomKind::Vect: return "vect";
    case AtomKind::Torus: return "torus";
    case AtomKind::CoprodDisc: return "coprod_disc";
    case AtomKind::ProdTorus: return "prod_torus";
  }
  return "?";
}

std::string Atom::str() const {
  std::ostringstream os;
  os << atom_kind_name(kind) << "(" << mod.label << ":" << mod.rank;
  if (mod.order.factors > 1) os << "x" << mod.order.factors;
  os << ")";
  return os.str();
}

Obj::Obj(std::vector<Atom> a) {
  for (auto& at : a)
    if (at.dim() > 0) atoms.push_back(std::move(at));
}

std::string Obj::str() const {
  if (atoms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) s += " + ";
    s += atoms[i].str();
  }
  return s;
}

Obj obj_concat(const Obj& a, const Obj& b) {
  Obj r = a;
  r.atoms.insert(r.atoms.end(), b.atoms.begin(), b.atoms.end());
  return r;
}

Obj obj_select(const Obj& a, const std::vector<std::size_t>& idx) {
  Obj r;
  for (auto i : idx) r.atoms.push_back(a.atoms.at(i));
  return r;
}

const std::string& Expr::key() const {
  if (key_.empty()) {
    std::ostringstream os;
    os << tag_name(tag) << "[" << src.str() << ">" << dst.str() << "]";
    if (tag == ExTag::MatMap) os << mat.str();
    if (a) os << "(" << a->key();
    if (b) os << "|" << b->key();
    if (a) os << ")";
    key_ = os.str();
  }
  return key_;
}

ExprPtr ex_zero(const Atom& src, const Atom& dst) {
  return make_expr(ExTag::Zero, src, dst, RatMat(), nullptr, nullptr);
}

ExprPtr ex_id(const Atom& at) { return make_expr(ExTag::Id, at, at, RatMat(), nullptr, nullptr); }

ExprPtr ex_iota(const FreeModule& P) {
  return make_expr(ExTag::Iota, disc(P), vect(P), RatMat(), nullptr, nullptr);
}

ExprPtr ex_quot(const FreeModule& P) {
  return make_expr(ExTag::QuotT, vect(P), torus(P), RatMat(), nullptr, nullptr);
}

ExprPtr ex_shift_coprod(const FreeModule& P) {
  return make_expr(ExTag::ShiftCoprod, coprod_disc(P), coprod_disc(P), RatMat(), nullptr, nullptr);
}

ExprPtr ex_incl0(const FreeModule& P) {
  return make_expr(ExTag::InclCoprod0, disc(P), coprod_disc(P), RatMat(), nullptr, nullptr);
}

ExprPtr ex_shift_prod(const FreeModule& P) {
  return make_expr(ExTag::ShiftProd, prod_torus(P), prod_torus(P), RatMat(), nullptr, nullptr);
}

ExprPtr ex_proj0(const FreeModule& P) {
  return make_expr(ExTag::ProjProd0, prod_torus(P), torus(P), RatMat(), nullptr, nullptr);
}

ExprPtr ex_mat(const Atom& src, const Atom& dst, const RatMat& m) {
  if (src.kind != dst.kind) fail(Err::EndpointMismatch, "mat block requires same atom kinds");
  if (m.rows() != static_cast<std::size_t>(dst.dim()) ||
      m.cols() != static_cast<std::size_t>(src.dim()))
    fail(Err::DimensionMismatch, "mat block shape mismatch");
  if (src.kind != AtomKind::Vect && !m.is_integer())
    fail(Err::DimensionMismatch, "mat block on " + std::string(atom_kind_name(src.kind)) +
                                     " atoms must have integer entries");
  return make_expr(ExTag::MatMap, src, dst, m, nullptr, nullptr);
}

ExprPtr ex_neg(const ExprPtr& e) {
  return make_expr(ExTag::Neg, e->src, e->dst, RatMat(), e, nullptr);
}

ExprPtr ex_comp(const ExprPtr& f, const ExprPtr& g) {
  if (g->dst != f->src)
    fail(Err::EndpointMismatch, "composition endpoints: " + g->dst.str() + " vs " + f->src.str());
  return make_expr(ExTag::Comp, g->src, f->dst, RatMat(), f, g);
}

ExprPtr ex_sum(const ExprPtr& e, const ExprPtr& f) {
  if (e->src != f->src || e->dst != f->dst)
    fail(Err::EndpointMismatch, "sum endpoints differ");
  return make_expr(ExTag::Sum, e->src, e->dst, RatMat(), e, f);
}

bool HomVal::operator==(const HomVal& o) const {
  if (form != o.form) return false;
  if (form == Form::Single) return m == o.m;
  if (form == Form::Shifts) return sh == o.sh;
  return true;
}

std::string HomVal::key(const Atom& src, const Atom& dst) const {
  std::ostringstream os;
  os << src.str() << ">" << dst.str() << ":";
  if (form == Form::Zero)
    os << "0";
  else if (form == Form::Single)
    os << "m" << m.str();
  else {
    os << "s{";
    for (const auto& [k, mm] : sh) os << k << ":" << mm.str() << ";";
    os << "}";
  }
  return os.str();
}

Elem elem_zero(const Obj& o) {
  Elem e;
  e.obj = o;
  for (const auto& at : o.atoms) e.parts.push_back(part_zero(at));
  return e;
}

Mor::Mor(Obj src, Obj dst) : src_(std::move(src)), dst_(std::move(dst)) {
  blk_.assign(src_.size() * dst_.size(), nullptr);
}

void Mor::set_block(std::size_t i, std::size_t j, ExprPtr e) {
  if (e) {
    if (e->src != src_.atoms.at(j) || e->dst != dst_.atoms.at(i))
      fail(Err::EndpointMismatch, "block (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") endpoints do not match the objects");
  }
  blk_[i * src_.size() + j] = std::move(e);
}

bool Mor::operator==(const Mor& o) const {
  if (src_ != o.src_ || dst_ != o.dst_) return false;
  for (std::size_t i = 0; i < blk_.size(); ++i) {
    const ExprPtr& a = blk_[i];
    const ExprPtr& b = o.blk_[i];
    if (!a && !b) continue;
    if (!a || !b) return false;
    if (a->key() != b->key()) return false;
  }
  return true;
}

std::string Mor::str() const {
  std::ostringstream os;
  os << src_.str() << " -> " << dst_.str();
  for (std::size_t i = 0; i < dst_.size(); ++i)
    for (std::size_t j = 0; j < src_.size(); ++j)
      if (block(i, j)) os << " [" << i << "," << j << "]=" << block(i, j)->key();
  return os.str();
}

Mor mor_zero(const Obj& src, const Obj& dst) { return Mor(src, dst); }

Mor mor_id(const Obj& o) {
  Mor m(o, o);
  for (std::size_t i = 0; i < o.size(); ++i) m.set_block(i, i, ex_id(o.atoms[i]));
  return m;
}

Mor compose(const Mor& f, const Mor& g) {
  if (g.dst() != f.src())
    fail(Err::EndpointMismatch,
         "compose: inner objects differ: " + g.dst().str() + " vs " + f.src().str());
  Mor r(g.src(), f.dst());
  for (std::size_t i = 0; i < f.dst().size(); ++i)
    for (std::size_t j = 0; j < g.src().size(); ++j) {
      ExprPtr acc;
      for (std::size_t k = 0; k < f.src().size(); ++k) {
        const ExprPtr& fb = f.block(i, k);
        const ExprPtr& gb = g.block(k, j);
        if (!fb || !gb) continue;
        ExprPtr term = ex_comp(fb, gb);
        acc = acc ? ex_sum(acc, term) : term;
      }
      r.set_block(i, j, acc);
    }
  return r;
}

Mor direct_sum(const Mor& f, const Mor& g) {
  Obj src = obj_concat(f.src(), g.src());
  Obj dst = obj_concat(f.dst(), g.dst());
  Mor r(src, dst);
  for (std::size_t i = 0; i < f.dst().size(); ++i)
    for (std::size_t j = 0; j < f.src().size(); ++j) r.set_block(i, j, f.block(i, j));
  for (std::size_t i = 0; i < g.dst().size(); ++i)
    for (std::size_t j = 0; j < g.src().size(); ++j)
      r.set_block(f.dst().size() + i, f.src().size() + j, g.block(i, j));
  return r;
}

Mor operator-(const Mor& f) {
  Mor r(f.src(), f.dst());
  for (std::size_t i = 0; i < f.dst().size(); ++i)
    for (std::size_t j = 0; j < f.src().size(); ++j)
      if (f.block(i, j)) r.set_block(i, j, ex_neg(f.block(i, j)));
  return r;
}

std::vector<HomVal> normal_values(const Mor& f) {
  std::vector<HomVal> vals(f.src().size() * f.dst().size());
  for (std::size_t i = 0; i < f.dst().size(); ++i)
    for (std::size_t j = 0; j < f.src().size(); ++j) {
      const ExprPtr& b = f.block(i, j);
      HomVal h = nf_expr(b);
      if (b) selfcheck_block(b, h);
      vals[i * f.src().size() + j] = std::move(h);
    }
  return vals;
}

Mor normalize(const Mor& f) {
  auto vals = normal_values(f);
  Mor r(f.src(), f.dst());
  for (std::size_t i = 0; i < f.dst().size(); ++i)
    for (std::size_t j = 0; j < f.src().size(); ++j)
      r.set_block(i, j,
                  render_hv(vals[i * f.src().size() + j], f.src().atoms[j], f.dst().atoms[i]));
  return r;
}

Elem eval(const Mor& f, const Elem& x) {
  if (x.obj != f.src()) fail(Err::ElementShapeMismatch, "element not in the source object");
  if (x.parts.size() != f.src().size())
    fail(Err::ElementShapeMismatch, "element part count mismatch");
  Elem out = elem_zero(f.dst());
  for (std::size_t i = 0; i < f.dst().size(); ++i) {
    ElemPart acc = part_zero(f.dst().atoms[i]);
    for (std::size_t j = 0; j < f.src().size(); ++j) {
      if (!f.block(i, j)) continue;
      acc = part_add(f.dst().atoms[i], acc, eval_expr(f.block(i, j), x.parts[j]));
    }
    out.parts[i] = std::move(acc);
  }
  return out;
}

bool equal_morphisms(const Mor& f, const Mor& g) {
  if (f.src() != g.src() || f.dst() != g.dst())
    fail(Err::EndpointMismatch, "equal_morphisms: endpoints differ");
  auto a = normal_values(f);
  auto b = normal_values(g);
  return a == b;
}

EqualityReport equal_morphisms_report(const Mor& f, const Mor& g) {
  EqualityReport rep;
  rep.equal = equal_morphisms(f, g);
  std::ostringstream nf;
  auto vals = normal_values(f);
  for (std::size_t i = 0; i < f.dst().size(); ++i)
    for (std::size_t j = 0; j < f.src().size(); ++j) {
      const HomVal& h = vals[i * f.src().size() + j];
      if (!h.is_zero())
        nf << "(" << i << "," << j << ")" << h.key(f.src().atoms[j], f.dst().atoms[i]) << ";";
    }
  rep.normal_form = nf.str();
  if (!rep.equal) {
    int n = 1 + std::max(max_shift_depth(f), max_shift_depth(g));
    for (const auto& x : generating_family(f.src(), n)) {
      Elem a = eval(f, x), b = eval(g, x);
      bool same = true;
      for (std::size_t i = 0; i < a.parts.size() && same; ++i)
        same = part_eq(f.dst().atoms[i], a.parts[i], b.parts[i]);
      if (!same) {
        rep.witness = x;
        break;
      }
    }
  }
  return rep;
}

bool is_zero_morphism(const Mor& f) {
  for (const auto& h : normal_values(f))
    if (!h.is_zero()) return false;
  return true;
}

long eval_disagreement_count() { return g_disagreements.load(); }

namespace {

// Classify a normalized block as 0 / +1 / -1 of the identity, or a general
// invertible matrix (sign = 2), or unusable (nullopt).
std::optional<int> block_perm_class(const HomVal& h, const Atom& src, const Atom& dst,
                                    bool allow_mat) {
  if (h.is_zero()) return 0;
  RatMat m;
  if (h.form == HomVal::Form::Single) {
    m = h.m;
  } else {
    if (h.sh.size() != 1 || h.sh.begin()->first != 0) return std::nullopt;
    m = h.sh.begin()->second;
  }
  if (src == dst && m.is_identity()) return 1;
  if (src == dst && (-m).is_identity()) return -1;
  if (allow_mat && src.kind == AtomKind::Vect && dst.kind == AtomKind::Vect && m.is_square() &&
      m.det() != 0)
    return 2;
  return std::nullopt;
}

}  // namespace

bool is_blockperm_iso(const Mor& f, bool allow_mat) {
  if (f.src().size() != f.dst().size()) return false;
  auto vals = normal_values(f);
  std::size_t n = f.src().size();
  std::vector<int> row_used(n, 0), col_used(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto c = block_perm_class(vals[i * n + j], f.src().atoms[j], f.dst().atoms[i], allow_mat);
      if (!c) return false;
      if (*c != 0) {
        ++row_used[i];
        ++col_used[j];
      }
    }
  for (std::size_t i = 0; i < n; ++i)
    if (row_used[i] != 1 || col_used[i] != 1) return false;
  return true;
}

bool is_rewiring_iso(const Mor& f) { return is_blockperm_iso(f, false); }

Mor blockperm_inverse(const Mor& f) {
  if (!is_blockperm_iso(f, true)) fail(Err::NotIso, "not a block permutation isomorphism");
  auto vals = normal_values(f);
  std::size_t n = f.src().size();
  Mor r(f.dst(), f.src());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const HomVal& h = vals[i * n + j];
      if (h.is_zero()) continue;
      RatMat m = (h.form == HomVal::Form::Single) ? h.m : h.sh.begin()->second;
      const Atom& src_at = f.src().atoms[j];
      const Atom& dst_at = f.dst().atoms[i];
      if (m.is_identity())
        r.set_block(j, i, ex_id(dst_at));
      else if ((-m).is_identity())
        r.set_block(j, i, ex_neg(ex_id(dst_at)));
      else {
        auto inv = m.inverse();
        if (!inv) fail(Err::NotIso, "singular mat block");
        r.set_block(j, i, ex_mat(dst_at, src_at, *inv));
      }
    }
  return r;
}

std::optional<PermCycles> perm_cycles(const Mor& f) {
  if (f.src() != f.dst()) return std::nullopt;
  if (!is_blockperm_iso(f, false)) return std::nullopt;
  auto vals = normal_values(f);
  std::size_t n = f.src().size();
  // j -> (image row, sign)
  std::vector<std::pair<std::size_t, int>> to(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const HomVal& h = vals[i * n + j];
      if (h.is_zero()) continue;
      RatMat m = (h.form == HomVal::Form::Single) ? h.m : h.sh.begin()->second;
      to[j] = {i, m.is_identity() ? 1 : -1};
    }
  PermCycles out;
  std::vector<bool> seen(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    if (seen[j]) continue;
    auto [i, s] = to[j];
    if (i == j) {
      if (s != 1) return std::nullopt;  // -1 on the diagonal is not dischargeable here
      out.fixed.push_back(j);
      seen[j] = true;
      continue;
    }
    auto [j2, s2] = to[i];
    if (j2 != j) return std::nullopt;  // cycle longer than 2
    seen[j] = seen[i] = true;
    std::size_t a = std::min(i, j), b = std::max(i, j);
    if (s == 1 && s2 == 1)
      out.swaps.push_back({a, b});
    else if (s * s2 == -1)
      out.signed_swaps.push_back({a, b});
    else
      return std::nullopt;  // both blocks negative
  }
  return out;
}

Obj quotient_cg(const Obj& o) {
  Obj r;
  for (const auto& at : o.atoms)
    if (!killed_in_cg(at.kind)) r.atoms.push_back(at);
  return r;
}

namespace {

ExprPtr quotient_expr(const ExprPtr& e) {
  if (!e) return nullptr;
  if (killed_in_cg(e->src.kind) || killed_in_cg(e->dst.kind)) return nullptr;
  switch (e->tag) {
    case ExTag::Neg: {
      ExprPtr a = quotient_expr(e->a);
      return a ? ex_neg(a) : nullptr;
    }
    case ExTag::Comp: {
      // A path through a killed intermediate object dies.
      if (killed_in_cg(e->b->dst.kind)) return nullptr;
      ExprPtr a = quotient_expr(e->a);
      ExprPtr b = quotient_expr(e->b);
      return (a && b) ? ex_comp(a, b) : nullptr;
    }
    case ExTag::Sum: {
      ExprPtr a = quotient_expr(e->a);
      ExprPtr b = quotient_expr(e->b);
      if (a && b) return ex_sum(a, b);
      return a ? a : b;
    }
    default:
      return e;
  }
}

}  // namespace

Mor quotient_cg(const Mor& f) {
  std::vector<std::size_t> si, di;
  for (std::size_t j = 0; j < f.src().size(); ++j)
    if (!killed_in_cg(f.src().atoms[j].kind)) si.push_back(j);
  for (std::size_t i = 0; i < f.dst().size(); ++i)
    if (!killed_in_cg(f.dst().atoms[i].kind)) di.push_back(i);
  Mor r(obj_select(f.src(), si), obj_select(f.dst(), di));
  for (std::size_t i = 0; i < di.size(); ++i)
    for (std::size_t j = 0; j < si.size(); ++j)
      r.set_block(i, j, quotient_expr(f.block(di[i], si[j])));
  return r;
}

std::vector<Elem> generating_family(const Obj& o, int max_shift) {
  std::vector<Elem> out;
  for (std::size_t j = 0; j < o.size(); ++j)
    for (auto& p : atom_samples(o.atoms[j], max_shift)) {
      Elem e = elem_zero(o);
      e.parts[j] = std::move(p);
      out.push_back(std::move(e));
    }
  return out;
}

int max_shift_depth(const Mor& f) {
  int n = 0;
  for (std::size_t i = 0; i < f.dst().size(); ++i)
    for (std::size_t j = 0; j < f.src().size(); ++j)
      n = std::max(n, expr_shift_depth(f.block(i, j)));
  return n;
}

}  // namespace relk
