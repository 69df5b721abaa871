#pragma once

#include "relk/core.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace relk {

// ---------------------------------------------------------------------------
// Objects: formal finite direct sums of five atom kinds over free modules.
//
//   Disc(P)        P with the discrete topology
//   Vect(P)        P_R, a real vector module
//   Torus(P)       T_P = P_R / P
//   CoprodDisc(P)  countable coproduct of copies of P (discrete)
//   ProdTorus(P)   countable product of copies of T_P (compact)
//
// Atoms over rank-0 modules are the zero object and are never stored; the
// empty summand list is the zero object. Summand order is significant:
// wirings permute positions explicitly.
// ---------------------------------------------------------------------------

enum class AtomKind { Disc, Vect, Torus, CoprodDisc, ProdTorus };

const char* atom_kind_name(AtomKind k);

struct Atom {
  AtomKind kind;
  FreeModule mod;

  int dim() const { return mod.dim(); }
  bool operator==(const Atom& o) const { return kind == o.kind && mod == o.mod; }
  bool operator!=(const Atom& o) const { return !(*this == o); }
  std::string str() const;
};

inline Atom disc(const FreeModule& P) { return Atom{AtomKind::Disc, P}; }
inline Atom vect(const FreeModule& P) { return Atom{AtomKind::Vect, P}; }
inline Atom torus(const FreeModule& P) { return Atom{AtomKind::Torus, P}; }
inline Atom coprod_disc(const FreeModule& P) { return Atom{AtomKind::CoprodDisc, P}; }
inline Atom prod_torus(const FreeModule& P) { return Atom{AtomKind::ProdTorus, P}; }

struct Obj {
  std::vector<Atom> atoms;

  Obj() = default;
  explicit Obj(std::vector<Atom> a);
  static Obj zero() { return Obj(); }
  static Obj single(const Atom& a) { return Obj({a}); }

  std::size_t size() const { return atoms.size(); }
  bool is_zero() const { return atoms.empty(); }
  bool operator==(const Obj& o) const { return atoms == o.atoms; }
  bool operator!=(const Obj& o) const { return !(*this == o); }
  std::string str() const;
};

Obj obj_concat(const Obj& a, const Obj& b);
Obj obj_select(const Obj& a, const std::vector<std::size_t>& idx);

// ---------------------------------------------------------------------------
// Morphism expressions. A block between two atoms is a formal expression over
// the generator vocabulary; every expression normalizes to a canonical form
// (see HomVal) and can independently be evaluated on elements.
// ---------------------------------------------------------------------------

enum class ExTag {
  Zero,
  Id,
  Iota,         // Disc(P) -> Vect(P), lattice inclusion
  QuotT,        // Vect(P) -> Torus(P), quotient mod the lattice
  ShiftCoprod,  // CoprodDisc -> CoprodDisc, (p0,p1,...) |-> (p1,p2,...)
  InclCoprod0,  // Disc -> CoprodDisc, include at index 0
  ShiftProd,    // ProdTorus -> ProdTorus, (t0,t1,...) |-> (0,t0,t1,...)
  ProjProd0,    // ProdTorus -> Torus, project index 0 (cokernel of the shift)
  MatMap,       // same-kind atoms; rational on Vect, integer elsewhere
  Neg,
  Comp,  // f after g
  Sum,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExTag tag;
  Atom src, dst;
  RatMat mat;     // MatMap payload
  ExprPtr a, b;   // Comp: a = f, b = g (f after g); Sum: a + b; Neg: a

  const std::string& key() const;  // canonical serialization, for caches and hashing

 private:
  mutable std::string key_;
};

ExprPtr ex_zero(const Atom& src, const Atom& dst);
ExprPtr ex_id(const Atom& at);
ExprPtr ex_iota(const FreeModule& P);
ExprPtr ex_quot(const FreeModule& P);
ExprPtr ex_shift_coprod(const FreeModule& P);
ExprPtr ex_incl0(const FreeModule& P);
ExprPtr ex_shift_prod(const FreeModule& P);
ExprPtr ex_proj0(const FreeModule& P);
ExprPtr ex_mat(const Atom& src, const Atom& dst, const RatMat& m);
ExprPtr ex_neg(const ExprPtr& e);
ExprPtr ex_comp(const ExprPtr& f, const ExprPtr& g);  // f after g
ExprPtr ex_sum(const ExprPtr& e, const ExprPtr& f);

// Canonical value of a generated hom between two atoms. The interpretation of
// the payload depends on the endpoint kinds:
//   Disc->Disc, Disc->CoprodDisc, Torus->Torus:       integer matrix
//   Disc->Vect, Vect->Vect, Vect->Torus:              rational matrix
//   Disc->Torus:                                      rational matrix mod 1
//   ProdTorus->Torus:                                 integer matrix after proj0
//   CoprodDisc->CoprodDisc, ProdTorus->ProdTorus:     finite sum of shift^k
//                                                     with an integer matrix
//                                                     coefficient per k
// All other endpoint pairs carry only the zero morphism.
struct HomVal {
  enum class Form { Zero, Single, Shifts };
  Form form = Form::Zero;
  RatMat m;
  std::map<int, RatMat> sh;

  bool is_zero() const { return form == Form::Zero; }
  bool operator==(const HomVal& o) const;
  std::string key(const Atom& src, const Atom& dst) const;
};

// ---------------------------------------------------------------------------
// Elements. Sequence atoms use finitely supported families; every generator
// is a bounded shift or a coordinate map, so finitely supported elements
// separate the normal forms appearing here. Torus coordinates are kept as
// canonical representatives in [0,1).
// ---------------------------------------------------------------------------

struct ElemPart {
  std::vector<Rat> v;                     // Disc / Vect / Torus
  std::map<int, std::vector<Rat>> seq;    // CoprodDisc / ProdTorus
};

struct Elem {
  Obj obj;
  std::vector<ElemPart> parts;
};

Elem elem_zero(const Obj& o);

// ---------------------------------------------------------------------------
// Block-matrix morphisms.
// ---------------------------------------------------------------------------

class Mor {
 public:
  Mor() = default;
  Mor(Obj src, Obj dst);

  const Obj& src() const { return src_; }
  const Obj& dst() const { return dst_; }

  const ExprPtr& block(std::size_t i, std::size_t j) const { return blk_[i * src_.size() + j]; }
  void set_block(std::size_t i, std::size_t j, ExprPtr e);

  bool operator==(const Mor& o) const;

  std::string str() const;

 private:
  Obj src_, dst_;
  std::vector<ExprPtr> blk_;  // dst.size() x src.size(), row-major; null = zero

  friend struct MorOps;
};

Mor mor_zero(const Obj& src, const Obj& dst);
Mor mor_id(const Obj& o);

// Block composition f after g; endpoints must match.
Mor compose(const Mor& f, const Mor& g);

// Block-diagonal sum on concatenated summand lists.
Mor direct_sum(const Mor& f, const Mor& g);

Mor operator-(const Mor& f);

// Canonical form: every block replaced by the rendering of its normal value;
// idempotent by construction.
Mor normalize(const Mor& f);

// Normal values of all blocks (the decision data behind normalize).
std::vector<HomVal> normal_values(const Mor& f);

// Structural recursion on the expression trees; the independent oracle
// backing equality. Throws ElementShapeMismatch on malformed input.
Elem eval(const Mor& f, const Elem& x);

// True iff normal forms coincide. Cross-checked against the evaluation
// oracle on a generating family of elements; a disagreement signals a broken
// rewrite rule and aborts via NormalFormVsEvalDisagreement.
bool equal_morphisms(const Mor& f, const Mor& g);

// Equality with its evidence: the shared canonical form when equal, or a
// generating element on which the two sides evaluate differently.
struct EqualityReport {
  bool equal = false;
  std::string normal_form;            // canonical form of f (= of g when equal)
  std::optional<Elem> witness;        // separates f from g when one exists
};
EqualityReport equal_morphisms_report(const Mor& f, const Mor& g);

bool is_zero_morphism(const Mor& f);

// Count of normal-form-vs-evaluation disagreements observed so far. The
// acceptance suite requires this stays zero.
long eval_disagreement_count();

// Signed permutation of identical atoms: every block Zero, Id or -Id, exactly
// one nonzero block per row and per column, matching atoms.
bool is_rewiring_iso(const Mor& f);

// As above but Vect->Vect blocks may be any invertible matrix.
bool is_blockperm_iso(const Mor& f, bool allow_mat);

// Inverse of a block-permutation iso (with optional Mat blocks).
Mor blockperm_inverse(const Mor& f);

// Cycle structure of a signed block-permutation endomorphism.
struct PermCycles {
  std::vector<std::size_t> fixed;                       // Id blocks on the diagonal
  std::vector<std::pair<std::size_t, std::size_t>> swaps;        // unsigned 2-cycles
  std::vector<std::pair<std::size_t, std::size_t>> signed_swaps; // (i,j): j->i is Id, i->j is -Id
};
std::optional<PermCycles> perm_cycles(const Mor& f);

// The compactly generated quotient: Disc, Vect, Torus and ProdTorus atoms die
// (finitely generated discrete, vector and compact objects all are compactly
// generated); CoprodDisc survives. Blocks touching killed atoms are dropped.
Obj quotient_cg(const Obj& o);
Mor quotient_cg(const Mor& f);

// Generating family used by the evaluation cross-check: basis vectors and
// singly supported sequences at indices 0..N, N = 1 + max shift depth.
std::vector<Elem> generating_family(const Obj& o, int max_shift);
int max_shift_depth(const Mor& f);

}  // namespace relk
