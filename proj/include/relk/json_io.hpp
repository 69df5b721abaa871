#pragma once

#include "relk/gillet_grayson.hpp"

#include <json.hpp>

#include <string>

namespace relk {

using Json = nlohmann::json;

// All emitted documents carry "schema_version": 1, sorted keys and canonical
// rationals, so identical inputs produce byte-identical outputs.

Json to_json(const Rat& r);
Rat rat_from_json(const Json& j);

Json to_json(const RatMat& m);  // {"rows", "cols", "entries"}
RatMat mat_from_json(const Json& j);
RatMat mat_from_entries(const Json& entries, std::size_t rows, std::size_t cols);

Json to_json(const Order& o);
Order order_from_json(const Json& j);

Json to_json(const FreeModule& m);
FreeModule module_from_json(const Json& j);

Json to_json(const BassSwanTriple& t);  // phi as a flat entry list, size dim^2
BassSwanTriple triple_from_json(const Json& j);

Json to_json(const SwanMorphism& m);
SwanMorphism swan_from_json(const Json& j);

Json to_json(const Atom& a);
Atom atom_from_json(const Json& j);

Json to_json(const Obj& o);
Obj obj_from_json(const Json& j);

Json to_json(const ExprPtr& e);
ExprPtr expr_from_json(const Json& j);

Json to_json(const Mor& m);
Mor mor_from_json(const Json& j);

Json to_json(const Cert& c);
Cert cert_from_json(const Json& j);

Json to_json(const SplitModSeq& s);
SplitModSeq split_from_json(const Json& j);

Json to_json(const ShortExact& se);
ShortExact se_from_json(const Json& j);

Json to_json(const DoubleExact& d);
DoubleExact des_from_json(const Json& j);

Json to_json(const Schematic& s);
Schematic schematic_from_json(const Json& j);

Json to_json(const Nen33& n);
Nen33 nen33_from_json(const Json& j);

Json to_json(const ProofScript& s);
ProofScript script_from_json(const Json& j);

Json derivation_to_json(const Derivation& d);

Json boundary_to_json(const BoundaryResult& r);

// Canonical dump used by every writer: two-space indent, trailing newline.
std::string dump_json(const Json& j);

}  // namespace relk
