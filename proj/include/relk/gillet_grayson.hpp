#pragma once

#include "relk/nenashev.hpp"
#include "relk/theta.hpp"

namespace relk {

// ---------------------------------------------------------------------------
// Low-dimensional Gillet-Grayson calculus: vertices are ordered pairs of
// objects, edges are pairs of exact sequences with the same cokernel, and a
// double exact sequence spans a three-edge closed loop. The boundary value of
// a triple is read off the endpoint of the lifted, no longer closed, path.
// ---------------------------------------------------------------------------

enum class Ambient { LCA, Mod, LCA_mod_cg, Mod_mod_fg };

const char* ambient_name(Ambient a);

struct GGVertex {
  Ambient amb = Ambient::LCA;
  Obj first, second;

  bool operator==(const GGVertex& o) const {
    return amb == o.amb && first == o.first && second == o.second;
  }
  std::string str() const;
};

// Edge from (dotted.left, solid.left) to (dotted.mid, solid.mid); the two
// sequences must share their third object.
struct GGEdge {
  Ambient amb = Ambient::LCA;
  ShortExact dotted, solid;

  GGVertex source() const { return GGVertex{amb, dotted.left, solid.left}; }
  GGVertex target() const { return GGVertex{amb, dotted.mid, solid.mid}; }
};

GGEdge make_edge(Ambient amb, const ShortExact& dotted, const ShortExact& solid);

struct GGPath {
  std::vector<std::pair<GGEdge, bool>> edges;  // flag: traverse reversed

  GGVertex start() const;
  GGVertex end() const;
  bool closed() const;
};

// The edge (0,0) -> (A,A) with both sequences 0 -> A = A.
GGEdge e_of_object(const Obj& A, Ambient amb);

// The closed loop of a double exact sequence: e(A), then the edge carrying
// (Yang, Yin) as (dotted, solid), then e(B) reversed.
GGPath loop_e(const DoubleExact& d, Ambient amb = Ambient::LCA);

// Lift data for the reduced middle edge: the module-category edge whose two
// sequences have kernels Q and P and visibly equal cokernels.
struct LiftedEdge {
  GGEdge edge;                  // ambient Mod
  bool projection_swapped;      // projection matches the loop edge with the
                                // dotted / solid roles interchanged
};

// Builds the lift and verifies the cokernels agree and that the compactly
// generated quotient of the edge projects back onto the middle edge of
// loop_e(reduced).
LiftedEdge lift_edge(const DoubleExact& reduced, const BassSwanTriple& t);

struct BoundaryResult {
  std::vector<int> k0;       // class in K0 of the base order
  GGVertex endpoint;         // literally (Q, P)
  GGPath path;               // the non-closed lifted path
  DoubleExact reduced;       // the compactly generated quotient class
  Schematic reduced_schematic;
};

// Quotient the schematic of the triple, lift the loop and read off the
// endpoint component: (Q, P) |-> [P] - [Q].
BoundaryResult boundary(const BassSwanTriple& t);

// Derivation reducing the image of an invertible matrix under delta and the
// comparison map to a one-sided automorphism representative, ending in a
// left-right swap step.
ProofScript builtin_sw1_script(const RatMat& phi, int n);

}  // namespace relk
