#include "relk/core.hpp"

#include <tuple>

namespace relk {

Order Order::Zk(int k) {
  if (k < 1) fail(Err::UnsupportedOrder, "product order needs k >= 1");
  if (k == 1) return Z();
  return Order{OrderKind::ProductOfIntegerRings, k};
}

bool FreeModule::operator<(const FreeModule& o) const {
  return std::tie(label, rank, order.factors) < std::tie(o.label, o.rank, o.order.factors);
}

BassSwanTriple make_triple(const FreeModule& P, const RatMat& phi, const FreeModule& Q) {
  if (P.order != Q.order) fail(Err::DimensionMismatch, "P and Q over different orders");
  if (phi.rows() != static_cast<std::size_t>(Q.dim()) ||
      phi.cols() != static_cast<std::size_t>(P.dim()))
    fail(Err::DimensionMismatch,
         "phi is " + std::to_string(phi.rows()) + "x" + std::to_string(phi.cols()) +
             ", expected " + std::to_string(Q.dim()) + "x" + std::to_string(P.dim()));
  if (P.rank != Q.rank)
    fail(Err::DimensionMismatch, "rank(P) != rank(Q), phi cannot be invertible");
  if (P.order.factors > 1 &&
      !phi.is_block_diagonal(static_cast<std::size_t>(P.rank),
                             static_cast<std::size_t>(P.order.factors)))
    fail(Err::DimensionMismatch, "phi must be block diagonal per product factor");
  if (phi.det() == 0) fail(Err::SingularMatrix, "det(phi) = 0");
  return BassSwanTriple{P, phi, Q};
}

BassSwanTriple relation_b_combine(const BassSwanTriple& t1, const BassSwanTriple& t2) {
  if (t1.Q != t2.P)
    fail(Err::MiddleMismatch, "middle modules differ: '" + t1.Q.label + "' (rank " +
                                  std::to_string(t1.Q.rank) + ") vs '" + t2.P.label +
                                  "' (rank " + std::to_string(t2.P.rank) + ")");
  return make_triple(t1.P, t2.phi * t1.phi, t2.Q);
}

CommutesReport check_swan_morphism(const SwanMorphism& m) {
  const auto& s = m.source;
  const auto& t = m.target;
  if (m.p.rows() != static_cast<std::size_t>(t.P.dim()) ||
      m.p.cols() != static_cast<std::size_t>(s.P.dim()) ||
      m.q.rows() != static_cast<std::size_t>(t.Q.dim()) ||
      m.q.cols() != static_cast<std::size_t>(s.Q.dim()))
    fail(Err::DimensionMismatch, "p or q shape does not match module ranks");
  if (!m.p.is_integer() || !m.q.is_integer())
    fail(Err::DimensionMismatch, "p and q must have integer entries");
  RatMat diff = t.phi * m.p - m.q * s.phi;
  CommutesReport rep;
  rep.commutes = diff.is_zero();
  if (!rep.commutes) {
    for (std::size_t i = 0; i < diff.rows() && rep.detail.empty(); ++i)
      for (std::size_t j = 0; j < diff.cols(); ++j)
        if (diff.at(i, j) != 0) {
          rep.detail = "alpha2.p - q.alpha1 nonzero at (" + std::to_string(i) + "," +
                       std::to_string(j) + ") = " + rat_str(diff.at(i, j));
          break;
        }
  }
  return rep;
}

Rat det_invariant(const BassSwanTriple& t) {
  switch (t.P.order.kind) {
    case OrderKind::IntegerRing: {
      Rat d = t.phi.det();
      return d < 0 ? -d : d;
    }
    case OrderKind::ProductOfIntegerRings: {
      std::size_t r = static_cast<std::size_t>(t.P.rank);
      Rat prod = 1;
      for (int f = 0; f < t.P.order.factors; ++f) {
        RatMat blk(r, r);
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t j = 0; j < r; ++j)
            blk.at(i, j) = t.phi.at(f * r + i, f * r + j);
        Rat d = blk.det();
        prod *= (d < 0 ? -d : d);
      }
      return prod;
    }
  }
  fail(Err::UnsupportedOrder, "unknown order kind");
}

BassSwanTriple delta(const RatMat& phi, int n, const Order& order, const std::string& label) {
  FreeModule A{order, n, label};
  return make_triple(A, phi, A);
}

std::vector<int> k0_class(const FreeModule& P) {
  return std::vector<int>(static_cast<std::size_t>(P.order.factors), P.rank);
}

}  // namespace relk
