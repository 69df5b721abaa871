#pragma once

#include "relk/sequences.hpp"

#include <array>
#include <map>
#include <optional>

namespace relk {

// ---------------------------------------------------------------------------
// The K1 relation calculus. Classes are never decided equal or unequal; the
// engine only produces replayable derivations: formal integer combinations of
// double exact sequence generators that the rules force to vanish.
// ---------------------------------------------------------------------------

// A nine-object bi-exact diagram: three row and three column double exact
// sequences over shared corners, commuting separately on the Yin and on the
// Yang parts.
struct Nen33 {
  std::array<DoubleExact, 3> rows;
  std::array<DoubleExact, 3> cols;
};

// An identity sum_g coeff[g] * [g] = 0 in the free abelian group on
// generators, keyed by the structural identity of the normalized data.
struct Derivation {
  std::map<std::string, Int> identity;
  std::map<std::string, DoubleExact> gens;   // representative for every key seen
  std::vector<std::string> admitted;         // admitted primitive rule instances
};

Derivation derivation_combine(const std::vector<std::pair<const Derivation*, Int>>& terms);

enum class StepKind { ZeroRule, ThreeByThree, DoubleIso, LeftRightSwap, SwapVanish, LinearCombine };

const char* step_kind_name(StepKind k);

struct Step {
  StepKind kind = StepKind::ZeroRule;
  std::optional<DoubleExact> des;             // ZeroRule
  std::optional<Nen33> diagram;               // ThreeByThree
  std::optional<DoubleExact> d1, d2;          // DoubleIso
  std::optional<IsoTriple> iso;               // DoubleIso
  std::optional<Obj> X;                       // LeftRightSwap / SwapVanish
  std::optional<Mor> phi;                     // LeftRightSwap
  bool signed_swap = false;                   // SwapVanish
  std::optional<ShortExact> decomposition;    // SwapVanish, composite case
  std::vector<std::size_t> refs;              // LinearCombine
  std::vector<Int> coeffs;                    // LinearCombine
};

struct ProofScript {
  std::vector<Step> steps;
};

// --- the rules -------------------------------------------------------------

// [d] = 0 whenever Yin and Yang agree (inclusions and surjections both).
Derivation check_zero_rule(const DoubleExact& d);

// Validates every invariant of the diagram (six sequences, eight squares)
// and emits Row1 - Row2 + Row3 - Col1 + Col2 - Col3 = 0.
Derivation check_33(const Nen33& n);

// [d1] = [d2] along component isomorphisms commuting for Yin and Yang alike.
Derivation double_iso_rule(const DoubleExact& d1, const DoubleExact& d2, const IsoTriple& iso);

// [X =(1,phi)=> X -> 0] = [0 -> X =(phi,1)=> X]; admitted primitive.
Derivation left_right_swap(const Obj& X, const Mor& phi);

// The class of the summand swap on X + X vanishes. Single atoms (and objects
// of one topological class) are admitted primitives; mixed objects replay the
// compact / vector / discrete splitting.
Derivation swap_vanish(const Obj& X, bool signed_swap,
                       const std::optional<ShortExact>& decomposition);

// Re-validates every step and returns the final identity.
Derivation replay(const ProofScript& script);

// --- builders for rule ingredients -----------------------------------------

// The half swap on X + X: (x, y) |-> (y, x), or (x, y) |-> (y, -x) signed.
Mor half_swap(const Obj& X, bool signed_swap);

// Involution swapping the listed atom position pairs of X.
Mor swap_pairs_mor(const Obj& X, const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

// [X + X =(1, half swap)=> X + X -> 0]
DoubleExact swap_des(const Obj& X, bool signed_swap);

// [X =(1, sigma)=> X -> 0] for an automorphism sigma.
DoubleExact conj_col_des(const Obj& X, const Mor& sigma);

// [X =(1,phi)=> X -> 0] and [0 -> X =(phi,1)=> X].
DoubleExact aut_left_des(const Obj& X, const Mor& phi);
DoubleExact aut_right_des(const Obj& X, const Mor& phi);

// --- script assembly --------------------------------------------------------
//
// Builders run each rule as they emit it, so invalid constructions surface
// immediately; replay re-validates everything from the stored payloads.

class ScriptBuilder {
 public:
  std::size_t zero_rule(const DoubleExact& d);
  std::size_t three(const Nen33& n);
  std::size_t double_iso(const DoubleExact& d1, const DoubleExact& d2, const IsoTriple& iso);
  std::size_t lr_swap(const Obj& X, const Mor& phi);
  std::size_t swapv(const Obj& X, bool signed_swap, const std::optional<ShortExact>& dec);
  std::size_t combine(const std::vector<std::pair<std::size_t, Int>>& terms);

  // [col] = 0 for col = [X =(1,sigma)=> X -> 0], sigma a signed involution:
  // reorder, split off the fixed part, vanish each two-cycle.
  std::size_t discharge_conj_column(const Obj& X, const Mor& sigma);

  // {J: +1, J': -1} where J = compile(s) and J' = compile(s rewired along
  // (sl, sm, sr)); the three conjugation columns are discharged.
  std::size_t conjugation_equality(const Schematic& s, const Mor& sl, const Mor& sm,
                                   const Mor& sr);

  // {sub: +1, total: -1, quot: +1} for a clean row partition of s.
  struct ExcisionRefs {
    std::size_t step;
    DoubleExact sub, total, quot;
  };
  ExcisionRefs excision(const Schematic& s, const std::vector<std::size_t>& above_rows,
                        const std::vector<std::size_t>& below_rows);

  const Derivation& derivation_of(std::size_t step) const { return ders_.at(step); }
  const ProofScript& script() const { return sc_; }

 private:
  ProofScript sc_;
  std::vector<Derivation> ders_;
};

// --- builtin proof scripts ---------------------------------------------------

// Derivation that the class of [P, id, P] vanishes: conjugate the Yang side
// by the mirror swap and observe Yin and Yang then agree.
ProofScript builtin_sv1_script(const FreeModule& P);

// Derivation of the first triple relation for a composable pair of triple
// morphisms with split module data.
ProofScript builtin_relation_a_script(const SwanMorphism& a, const SwanMorphism& b,
                                      const SplitModSeq& split_p, const SplitModSeq& split_q);

// Derivation of [P,phi,Q] + [Q,psi,R] - [P,psi.phi,R] = 0 by stacking the two
// schematics and walking the chain of wiring changes.
ProofScript builtin_relation_b_script(const BassSwanTriple& t1, const BassSwanTriple& t2);

}  // namespace relk
