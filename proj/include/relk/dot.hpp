#pragma once

#include "relk/gillet_grayson.hpp"

#include <string>

namespace relk {

// Three-column figure of a double exact sequence: one node per summand,
// solid edges for the Yin maps, dashed edges for the Yang maps.
std::string dot_of_des(const DoubleExact& d, const std::string& title = "");

// Compiles the schematic and renders the figure.
std::string dot_of_schematic(const Schematic& s, const std::string& title = "");

// Vertices and labelled edges of a path in the simplicial model.
std::string dot_of_path(const GGPath& p, const std::string& title = "");

}  // namespace relk
