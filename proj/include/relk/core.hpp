#pragma once

#include "relk/matrix.hpp"

#include <string>
#include <vector>

namespace relk {

// The base order. Only Z and finite products Z x ... x Z are instantiated;
// every construction downstream is uniform in the order, and these two
// already exercise all code paths with exact arithmetic and forced expected
// values (trivial class group).
enum class OrderKind { IntegerRing, ProductOfIntegerRings };

struct Order {
  OrderKind kind = OrderKind::IntegerRing;
  int factors = 1;  // >= 1; IntegerRing always has factors == 1

  static Order Z() { return Order{OrderKind::IntegerRing, 1}; }
  static Order Zk(int k);
  bool operator==(const Order& o) const { return kind == o.kind && factors == o.factors; }
  bool operator!=(const Order& o) const { return !(*this == o); }
};

// A finitely generated free right module over the order. Identity is nominal:
// label + rank + order. Two modules with equal data are the same module; no
// isomorphism search is ever performed.
struct FreeModule {
  Order order;
  int rank = 0;
  std::string label;

  // Q-dimension of the real base change, i.e. the matrix size a morphism on
  // this module acts on. For Z^k the matrices are block diagonal with k
  // blocks of size rank (factor blocks are laid out contiguously).
  int dim() const { return rank * order.factors; }

  bool operator==(const FreeModule& o) const {
    return order == o.order && rank == o.rank && label == o.label;
  }
  bool operator!=(const FreeModule& o) const { return !(*this == o); }
  bool operator<(const FreeModule& o) const;
};

inline FreeModule zmod(int rank, const std::string& label) {
  return FreeModule{Order::Z(), rank, label};
}

// Generator [P, phi, Q] of the relative K0: two free modules plus an
// invertible matrix P_R -> Q_R. phi entries are exact rationals; Q-points
// are dense in the real matrices and identity checking stays algebraic.
struct BassSwanTriple {
  FreeModule P;
  RatMat phi;
  FreeModule Q;
};

// A morphism of triples: integer matrices p: P1 -> P2, q: Q1 -> Q2 with
// alpha2 . p = q . alpha1 over the reals.
struct SwanMorphism {
  BassSwanTriple source;
  BassSwanTriple target;
  RatMat p;
  RatMat q;
};

struct CommutesReport {
  bool commutes = false;
  std::string detail;  // first failing entry when not commuting
};

BassSwanTriple make_triple(const FreeModule& P, const RatMat& phi, const FreeModule& Q);

// [P,a,Q] + [Q,b,S] = [P, b.a, S]; middle modules must be identical.
BassSwanTriple relation_b_combine(const BassSwanTriple& t1, const BassSwanTriple& t2);

CommutesReport check_swan_morphism(const SwanMorphism& m);

// Covolume invariant |det phi| as an exact positive rational; for product
// orders the product over the factor blocks.
Rat det_invariant(const BassSwanTriple& t);

// [A^n, phi, A^n] for an invertible n x n matrix over the order's real
// algebra. Both sides carry the same module identity.
BassSwanTriple delta(const RatMat& phi, int n, const Order& order = Order::Z(),
                     const std::string& label = "A^n");

// Rank tuple, one entry per product factor.
std::vector<int> k0_class(const FreeModule& P);

}  // namespace relk
