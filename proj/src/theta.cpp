#include "relk/theta.hpp"

namespace relk {

Schematic theta_schematic(const BassSwanTriple& t) {
  // Re-run triple validation so a hand-built triple cannot slip through.
  make_triple(t.P, t.phi, t.Q);

  Schematic s;
  s.above = {
      canonical_of(Cert::identity_right(Obj::single(coprod_disc(t.P)))),
      canonical_of(Cert::lattice(t.P)),
      canonical_of(Cert::identity_left(Obj::single(prod_torus(t.P)))),
      canonical_of(Cert::coprod_shift(t.Q)),
      canonical_of(Cert::prod_shift(t.Q)),
  };
  s.below = {
      canonical_of(Cert::coprod_shift(t.P)),
      canonical_of(Cert::prod_shift(t.P)),
      canonical_of(Cert::identity_right(Obj::single(coprod_disc(t.Q)))),
      canonical_of(Cert::phi_twisted(t.P, t.phi, t.Q)),
      canonical_of(Cert::identity_left(Obj::single(prod_torus(t.Q)))),
  };
  s.wl = wiring_from_row_pairs(s.above, s.below, {{0, 2}, {1, 0}, {2, 1}, {3, 3}, {4, 4}}, 0);
  s.wm = wiring_from_row_pairs(s.above, s.below, {{0, 0}, {1, 3}, {2, 1}, {3, 2}, {4, 4}}, 1);
  s.wr = wiring_from_row_pairs(s.above, s.below, {{0, 0}, {1, 1}, {2, 4}, {3, 2}, {4, 3}}, 2);
  return s;
}

DoubleExact theta(const BassSwanTriple& t) { return compile_schematic(theta_schematic(t)); }

}  // namespace relk
