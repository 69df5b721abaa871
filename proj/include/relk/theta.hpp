#pragma once

#include "relk/sequences.hpp"

namespace relk {

// The closed-form schematic attached to a triple [P, phi, Q]: five rows above
// the line built from P and Q alone, five rows below containing the single
// phi-twisted sequence, and the positional wiring identifying the column
// sums. Row order and summand positions are frozen; any other convention
// changes the class only through a double isomorphism.
Schematic theta_schematic(const BassSwanTriple& t);

// The compiled double exact sequence. Its Yin half never depends on phi.
DoubleExact theta(const BassSwanTriple& t);

}  // namespace relk
