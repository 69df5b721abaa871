#pragma once

#include "relk/lca.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace relk {

// ---------------------------------------------------------------------------
// Exactness is certificate based. The engine recognises a closed vocabulary
// of exact sequences; a validator recomputes the canonical maps of each tag
// and requires them to agree with the supplied ones. Unknown sequences are
// rejected rather than guessed.
// ---------------------------------------------------------------------------

enum class CertTag {
  LatticeInVector,  // P -> P_R -> T_P
  PhiTwisted,       // Q -> P_R -> T_Q through an iso phi: P_R -> Q_R
  CoprodShift,      // P -> coprod P -> coprod P (include at 0 / shift)
  ProdShift,        // prod T -> prod T -> T (shift / proj 0)
  IdentityLeft,     // X = X -> 0
  IdentityRight,    // 0 -> X = X
  ZeroSeq,          // 0 -> 0 -> 0
  DirectSum,        // summandwise
  RewiredByIso,     // transport along a triple of isos
  InducedSplit,     // functorial image of a split sequence of free modules
  QuotientCg,       // image under the compactly generated quotient
};

const char* cert_tag_name(CertTag t);

// Split short exact sequence of free Z-modules, with an explicit integer
// section. Splitness is what makes every derived atom sequence exact.
struct SplitModSeq {
  FreeModule sub, mid, quot;
  RatMat inc, sur, section;
};

struct IsoTriple {
  Mor u, v, w;  // on the left / middle / right objects
};

struct Cert {
  CertTag tag = CertTag::ZeroSeq;

  FreeModule P, Q;                           // module parameters
  RatMat phi;                                // PhiTwisted
  Obj X;                                     // IdentityLeft / IdentityRight
  std::vector<Cert> children;                // DirectSum
  std::shared_ptr<const Cert> inner;         // RewiredByIso / QuotientCg
  std::shared_ptr<const IsoTriple> iso;      // RewiredByIso
  AtomKind kind = AtomKind::Disc;            // InducedSplit
  std::shared_ptr<const SplitModSeq> split;  // InducedSplit

  static Cert lattice(const FreeModule& P);
  static Cert phi_twisted(const FreeModule& P, const RatMat& phi, const FreeModule& Q);
  static Cert coprod_shift(const FreeModule& P);
  static Cert prod_shift(const FreeModule& P);
  static Cert identity_left(const Obj& X);
  static Cert identity_right(const Obj& X);
  static Cert zero_seq();
  static Cert direct_sum(std::vector<Cert> cs);
  static Cert rewired(const Cert& inner, IsoTriple iso);
  static Cert induced_split(AtomKind kind, const SplitModSeq& s);
  static Cert quotient_cg_of(const Cert& inner);
};

struct ShortExact {
  Obj left, mid, right;
  Mor inc, sur;
  Cert cert;
};

// A pair of short exact sequences on the same three objects.
struct DoubleExact {
  ShortExact yin, yang;
};

// Validates split data: integer entries, sur.inc = 0, sur.section = id and
// [inc | section] invertible over Z.
void validate_split(const SplitModSeq& s);

// The canonical short exact sequence described by a certificate.
ShortExact canonical_of(const Cert& c);

// Validator: recomputes the canonical maps for the tag and requires
// equality with the supplied ones.
ShortExact certify_exact(const Obj& left, const Obj& mid, const Obj& right, const Mor& inc,
                         const Mor& sur, const Cert& cert);

// Re-runs the validator on stored data.
void revalidate(const ShortExact& se);
void revalidate(const DoubleExact& de);

ShortExact se_direct_sum(const std::vector<ShortExact>& rows);

DoubleExact des_of(const ShortExact& yin, const ShortExact& yang);
DoubleExact des_doubled(const ShortExact& se);  // yin = yang
DoubleExact zero_des();
DoubleExact direct_sum_des(const DoubleExact& d1, const DoubleExact& d2);

// Structural identity of generators: objects plus the normal forms of the
// four maps. Certificates are validation witnesses, not part of identity.
std::string des_key(const DoubleExact& d);
bool des_equal(const DoubleExact& a, const DoubleExact& b);

DoubleExact quotient_cg(const DoubleExact& d);
ShortExact quotient_cg(const ShortExact& se);

// ---------------------------------------------------------------------------
// Schematics: rows above and below a delimiter, plus a wiring identifying the
// three column sums. Row order is significant and preserved.
// ---------------------------------------------------------------------------

struct Schematic {
  std::vector<ShortExact> above, below;
  Mor wl, wm, wr;  // wiring: above column sums -> below column sums
};

Obj col_left(const std::vector<ShortExact>& rows);
Obj col_mid(const std::vector<ShortExact>& rows);
Obj col_right(const std::vector<ShortExact>& rows);

// Builds a wiring morphism from row pairs (above row index -> below row
// index). Paired rows must have identical column objects; unmatched atoms are
// not allowed.
Mor wiring_from_row_pairs(const std::vector<ShortExact>& above,
                          const std::vector<ShortExact>& below,
                          const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                          int column /* 0 = left, 1 = mid, 2 = right */);

// Yin is the direct sum of the rows above, Yang the wiring conjugate of the
// rows below, both on the above column objects.
DoubleExact compile_schematic(const Schematic& s);

// Stack two schematics (rows appended, wiring block diagonal).
Schematic stack_schematics(const Schematic& a, const Schematic& b);

// Same rows, wiring precomposed with the inverses of the given column
// automorphisms of the above column sums. Compiling the result conjugates
// the Yang maps by (sl, sm, sr).
Schematic rewire_schematic(const Schematic& s, const Mor& sl, const Mor& sm, const Mor& sr);

// Restriction to chosen rows; the wiring must map the selected above atoms
// exactly onto the selected below atoms.
Schematic sub_schematic(const Schematic& s, const std::vector<std::size_t>& above_rows,
                        const std::vector<std::size_t>& below_rows);

Schematic quotient_cg(const Schematic& s);

}  // namespace relk
