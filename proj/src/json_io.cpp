#include "relk/json_io.hpp"

#include <limits>

namespace relk {

namespace {

Json int_to_json(const Int& v) {
  static const Int lo = std::numeric_limits<std::int64_t>::min();
  static const Int hi = std::numeric_limits<std::int64_t>::max();
  if (v >= lo && v <= hi) return Json(static_cast<std::int64_t>(v));
  return Json(v.str());
}

Int int_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<std::int64_t>());
  if (j.is_string()) return Int(j.get<std::string>());
  fail(Err::ParseError, "expected an integer or integer string");
}

[[noreturn]] void bad(const std::string& what) { fail(Err::ParseError, what); }

const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

}  // namespace

Json to_json(const Rat& r) { return Json::array({int_to_json(rat_num(r)), int_to_json(rat_den(r))}); }

Rat rat_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) bad("rational must be a [numerator, denominator] pair");
  Int n = int_from_json(j[0]), d = int_from_json(j[1]);
  if (d == 0) bad("zero denominator");
  return Rat(n) / Rat(d);
}

Json to_json(const RatMat& m) {
  Json entries = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) entries.push_back(to_json(m.at(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

RatMat mat_from_entries(const Json& entries, std::size_t rows, std::size_t cols) {
  if (!entries.is_array() || entries.size() != rows * cols)
    bad("matrix entry list has the wrong length");
  std::vector<Rat> e;
  e.reserve(rows * cols);
  for (const auto& x : entries) e.push_back(rat_from_json(x));
  return RatMat(rows, cols, std::move(e));
}

RatMat mat_from_json(const Json& j) {
  return mat_from_entries(field(j, "entries"), field(j, "rows").get<std::size_t>(),
                          field(j, "cols").get<std::size_t>());
}

Json to_json(const Order& o) {
  if (o.kind == OrderKind::IntegerRing) return Json{{"kind", "Z"}};
  return Json{{"kind", "Z^k"}, {"k", o.factors}};
}

Order order_from_json(const Json& j) {
  std::string k = field(j, "kind").get<std::string>();
  if (k == "Z") return Order::Z();
  if (k == "Z^k") return Order::Zk(field(j, "k").get<int>());
  bad("unknown order kind '" + k + "'");
}

Json to_json(const FreeModule& m) {
  Json j{{"rank", m.rank}, {"label", m.label}};
  if (!(m.order == Order::Z())) j["order"] = to_json(m.order);
  return j;
}

FreeModule module_from_json(const Json& j) {
  FreeModule m;
  m.rank = field(j, "rank").get<int>();
  if (m.rank < 0) bad("negative rank");
  m.label = field(j, "label").get<std::string>();
  m.order = j.contains("order") ? order_from_json(j["order"]) : Order::Z();
  return m;
}

Json to_json(const BassSwanTriple& t) {
  Json phi = Json::array();
  for (std::size_t i = 0; i < t.phi.rows(); ++i)
    for (std::size_t j = 0; j < t.phi.cols(); ++j) phi.push_back(to_json(t.phi.at(i, j)));
  return Json{{"schema_version", 1}, {"P", to_json(t.P)}, {"phi", phi}, {"Q", to_json(t.Q)}};
}

BassSwanTriple triple_from_json(const Json& j) {
  FreeModule P = module_from_json(field(j, "P"));
  FreeModule Q = module_from_json(field(j, "Q"));
  std::size_t n = static_cast<std::size_t>(P.dim());
  RatMat phi = mat_from_entries(field(j, "phi"), static_cast<std::size_t>(Q.dim()), n);
  return make_triple(P, phi, Q);
}

Json to_json(const SwanMorphism& m) {
  return Json{{"schema_version", 1},
              {"source", to_json(m.source)},
              {"target", to_json(m.target)},
              {"p", to_json(m.p)},
              {"q", to_json(m.q)}};
}

SwanMorphism swan_from_json(const Json& j) {
  return SwanMorphism{triple_from_json(field(j, "source")), triple_from_json(field(j, "target")),
                      mat_from_json(field(j, "p")), mat_from_json(field(j, "q"))};
}

Json to_json(const Atom& a) {
  return Json{{"kind", atom_kind_name(a.kind)}, {"module", to_json(a.mod)}};
}

Atom atom_from_json(const Json& j) {
  std::string k = field(j, "kind").get<std::string>();
  FreeModule m = module_from_json(field(j, "module"));
  for (AtomKind kind : {AtomKind::Disc, AtomKind::Vect, AtomKind::Torus, AtomKind::CoprodDisc,
                        AtomKind::ProdTorus})
    if (k == atom_kind_name(kind)) return Atom{kind, m};
  bad("unknown atom kind '" + k + "'");
}

Json to_json(const Obj& o) {
  Json atoms = Json::array();
  for (const auto& a : o.atoms) atoms.push_back(to_json(a));
  return Json{{"atoms", atoms}};
}

Obj obj_from_json(const Json& j) {
  std::vector<Atom> atoms;
  for (const auto& a : field(j, "atoms")) atoms.push_back(atom_from_json(a));
  return Obj(std::move(atoms));
}

Json to_json(const ExprPtr& e) {
  if (!e) bad("cannot serialize a null expression");
  Json j;
  switch (e->tag) {
    case ExTag::Zero:
      return Json{{"op", "zero"}, {"src", to_json(e->src)}, {"dst", to_json(e->dst)}};
    case ExTag::Id:
      return Json{{"op", "id"}, {"at", to_json(e->src)}};
    case ExTag::Iota:
      return Json{{"op", "iota"}, {"module", to_json(e->src.mod)}};
    case ExTag::QuotT:
      return Json{{"op", "quot"}, {"module", to_json(e->src.mod)}};
    case ExTag::ShiftCoprod:
      return Json{{"op", "shift_coprod"}, {"module", to_json(e->src.mod)}};
    case ExTag::InclCoprod0:
      return Json{{"op", "incl_coprod0"}, {"module", to_json(e->src.mod)}};
    case ExTag::ShiftProd:
      return Json{{"op", "shift_prod"}, {"module", to_json(e->src.mod)}};
    case ExTag::ProjProd0:
      return Json{{"op", "proj_prod0"}, {"module", to_json(e->src.mod)}};
    case ExTag::MatMap: {
      Json entries = Json::array();
      for (std::size_t i = 0; i < e->mat.rows(); ++i)
        for (std::size_t k = 0; k < e->mat.cols(); ++k) entries.push_back(to_json(e->mat.at(i, k)));
      return Json{{"op", "mat"}, {"src", to_json(e->src)}, {"dst", to_json(e->dst)},
                  {"entries", entries}};
    }
    case ExTag::Neg:
      return Json{{"op", "neg"}, {"arg", to_json(e->a)}};
    case ExTag::Comp:
      return Json{{"op", "comp"}, {"after", to_json(e->a)}, {"first", to_json(e->b)}};
    case ExTag::Sum:
      return Json{{"op", "sum"}, {"a", to_json(e->a)}, {"b", to_json(e->b)}};
  }
  bad("unknown expression tag");
}

ExprPtr expr_from_json(const Json& j) {
  std::string op = field(j, "op").get<std::string>();
  if (op == "zero") return ex_zero(atom_from_json(field(j, "src")), atom_from_json(field(j, "dst")));
  if (op == "id") return ex_id(atom_from_json(field(j, "at")));
  if (op == "iota") return ex_iota(module_from_json(field(j, "module")));
  if (op == "quot") return ex_quot(module_from_json(field(j, "module")));
  if (op == "shift_coprod") return ex_shift_coprod(module_from_json(field(j, "module")));
  if (op == "incl_coprod0") return ex_incl0(module_from_json(field(j, "module")));
  if (op == "shift_prod") return ex_shift_prod(module_from_json(field(j, "module")));
  if (op == "proj_prod0") return ex_proj0(module_from_json(field(j, "module")));
  if (op == "mat") {
    Atom s = atom_from_json(field(j, "src")), d = atom_from_json(field(j, "dst"));
    return ex_mat(s, d,
                  mat_from_entries(field(j, "entries"), static_cast<std::size_t>(d.dim()),
                                   static_cast<std::size_t>(s.dim())));
  }
  if (op == "neg") return ex_neg(expr_from_json(field(j, "arg")));
  if (op == "comp") return ex_comp(expr_from_json(field(j, "after")), expr_from_json(field(j, "first")));
  if (op == "sum") return ex_sum(expr_from_json(field(j, "a")), expr_from_json(field(j, "b")));
  bad("unknown expression op '" + op + "'");
}

Json to_json(const Mor& m) {
  Json blocks = Json::array();
  for (std::size_t i = 0; i < m.dst().size(); ++i)
    for (std::size_t j = 0; j < m.src().size(); ++j)
      if (m.block(i, j))
        blocks.push_back(Json{{"i", i}, {"j", j}, {"expr", to_json(m.block(i, j))}});
  return Json{{"src", to_json(m.src())}, {"dst", to_json(m.dst())}, {"blocks", blocks}};
}

Mor mor_from_json(const Json& j) {
  Mor m(obj_from_json(field(j, "src")), obj_from_json(field(j, "dst")));
  for (const auto& b : field(j, "blocks"))
    m.set_block(field(b, "i").get<std::size_t>(), field(b, "j").get<std::size_t>(),
                expr_from_json(field(b, "expr")));
  return m;
}

Json to_json(const SplitModSeq& s) {
  return Json{{"sub", to_json(s.sub)},       {"mid", to_json(s.mid)},
              {"quot", to_json(s.quot)},     {"inc", to_json(s.inc)},
              {"sur", to_json(s.sur)},       {"section", to_json(s.section)}};
}

SplitModSeq split_from_json(const Json& j) {
  SplitModSeq s{module_from_json(field(j, "sub")), module_from_json(field(j, "mid")),
                module_from_json(field(j, "quot")), mat_from_json(field(j, "inc")),
                mat_from_json(field(j, "sur")), mat_from_json(field(j, "section"))};
  validate_split(s);
  return s;
}

Json to_json(const Cert& c) {
  Json j{{"tag", cert_tag_name(c.tag)}};
  switch (c.tag) {
    case CertTag::LatticeInVector:
    case CertTag::CoprodShift:
    case CertTag::ProdShift:
      j["module"] = to_json(c.P);
      break;
    case CertTag::PhiTwisted:
      j["P"] = to_json(c.P);
      j["phi"] = to_json(c.phi);
      j["Q"] = to_json(c.Q);
      break;
    case CertTag::IdentityLeft:
    case CertTag::IdentityRight:
      j["object"] = to_json(c.X);
      break;
    case CertTag::ZeroSeq:
      break;
    case CertTag::DirectSum: {
      Json ch = Json::array();
      for (const auto& x : c.children) ch.push_back(to_json(x));
      j["children"] = ch;
      break;
    }
    case CertTag::RewiredByIso:
      j["inner"] = to_json(*c.inner);
      j["u"] = to_json(c.iso->u);
      j["v"] = to_json(c.iso->v);
      j["w"] = to_json(c.iso->w);
      break;
    case CertTag::InducedSplit:
      j["kind"] = atom_kind_name(c.kind);
      j["split"] = to_json(*c.split);
      break;
    case CertTag::QuotientCg:
      j["inner"] = to_json(*c.inner);
      break;
  }
  return j;
}

Cert cert_from_json(const Json& j) {
  std::string tag = field(j, "tag").get<std::string>();
  if (tag == "lattice_in_vector") return Cert::lattice(module_from_json(field(j, "module")));
  if (tag == "coprod_shift") return Cert::coprod_shift(module_from_json(field(j, "module")));
  if (tag == "prod_shift") return Cert::prod_shift(module_from_json(field(j, "module")));
  if (tag == "phi_twisted")
    return Cert::phi_twisted(module_from_json(field(j, "P")), mat_from_json(field(j, "phi")),
                             module_from_json(field(j, "Q")));
  if (tag == "identity_left") return Cert::identity_left(obj_from_json(field(j, "object")));
  if (tag == "identity_right") return Cert::identity_right(obj_from_json(field(j, "object")));
  if (tag == "zero_seq") return Cert::zero_seq();
  if (tag == "direct_sum") {
    std::vector<Cert> ch;
    for (const auto& x : field(j, "children")) ch.push_back(cert_from_json(x));
    return Cert::direct_sum(std::move(ch));
  }
  if (tag == "rewired_by_iso")
    return Cert::rewired(cert_from_json(field(j, "inner")),
                         IsoTriple{mor_from_json(field(j, "u")), mor_from_json(field(j, "v")),
                                   mor_from_json(field(j, "w"))});
  if (tag == "induced_split") {
    Json k = field(j, "kind");
    Atom probe = atom_from_json(Json{{"kind", k}, {"module", Json{{"rank", 1}, {"label", "_"}}}});
    return Cert::induced_split(probe.kind, split_from_json(field(j, "split")));
  }
  if (tag == "quotient_cg") return Cert::quotient_cg_of(cert_from_json(field(j, "inner")));
  bad("unknown certificate tag '" + tag + "'");
}

Json to_json(const ShortExact& se) {
  return Json{{"left", to_json(se.left)}, {"mid", to_json(se.mid)},
              {"right", to_json(se.right)}, {"inc", to_json(se.inc)},
              {"sur", to_json(se.sur)},     {"cert", to_json(se.cert)}};
}

ShortExact se_from_json(const Json& j) {
  return certify_exact(obj_from_json(field(j, "left")), obj_from_json(field(j, "mid")),
                       obj_from_json(field(j, "right")), mor_from_json(field(j, "inc")),
                       mor_from_json(field(j, "sur")), cert_from_json(field(j, "cert")));
}

Json to_json(const DoubleExact& d) {
  return Json{{"yin", to_json(d.yin)}, {"yang", to_json(d.yang)}};
}

DoubleExact des_from_json(const Json& j) {
  return des_of(se_from_json(field(j, "yin")), se_from_json(field(j, "yang")));
}

namespace {

Json wiring_to_json(const Mor& w) {
  Json out = Json::array();
  auto vals = normal_values(w);
  for (std::size_t i = 0; i < w.dst().size(); ++i)
    for (std::size_t j = 0; j < w.src().size(); ++j) {
      const HomVal& h = vals[i * w.src().size() + j];
      if (h.is_zero()) continue;
      RatMat m = (h.form == HomVal::Form::Single) ? h.m : h.sh.begin()->second;
      out.push_back(Json::array({j, i, m.is_identity() ? 1 : -1}));
    }
  return out;
}

Mor wiring_from_json(const Json& j, const Obj& src, const Obj& dst) {
  Mor w(src, dst);
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 3) bad("wiring entries are [from, to, sign] triples");
    std::size_t from = t[0].get<std::size_t>(), to = t[1].get<std::size_t>();
    int sign = t[2].get<int>();
    ExprPtr e = ex_id(src.atoms.at(from));
    w.set_block(to, from, sign >= 0 ? e : ex_neg(e));
  }
  return w;
}

}  // namespace

Json to_json(const Schematic& s) {
  Json above = Json::array(), below = Json::array();
  for (const auto& r : s.above) above.push_back(to_json(r));
  for (const auto& r : s.below) below.push_back(to_json(r));
  return Json{{"schema_version", 1},
              {"above", above},
              {"below", below},
              {"wiring", Json{{"I'", wiring_to_json(s.wl)},
                              {"I", wiring_to_json(s.wm)},
                              {"I''", wiring_to_json(s.wr)}}}};
}

Schematic schematic_from_json(const Json& j) {
  Schematic s;
  for (const auto& r : field(j, "above")) s.above.push_back(se_from_json(r));
  for (const auto& r : field(j, "below")) s.below.push_back(se_from_json(r));
  const Json& w = field(j, "wiring");
  s.wl = wiring_from_json(field(w, "I'"), col_left(s.above), col_left(s.below));
  s.wm = wiring_from_json(field(w, "I"), col_mid(s.above), col_mid(s.below));
  s.wr = wiring_from_json(field(w, "I''"), col_right(s.above), col_right(s.below));
  return s;
}

Json to_json(const Nen33& n) {
  return Json{{"schema_version", 1},
              {"rows", Json::array({to_json(n.rows[0]), to_json(n.rows[1]), to_json(n.rows[2])})},
              {"cols", Json::array({to_json(n.cols[0]), to_json(n.cols[1]), to_json(n.cols[2])})}};
}

Nen33 nen33_from_json(const Json& j) {
  Nen33 n;
  const Json& rows = field(j, "rows");
  const Json& cols = field(j, "cols");
  if (rows.size() != 3 || cols.size() != 3) bad("need exactly three rows and three columns");
  for (int i = 0; i < 3; ++i) {
    n.rows[i] = des_from_json(rows[i]);
    n.cols[i] = des_from_json(cols[i]);
  }
  return n;
}

Json to_json(const ProofScript& s) {
  Json steps = Json::array();
  for (const auto& st : s.steps) {
    Json j{{"rule", step_kind_name(st.kind)}};
    switch (st.kind) {
      case StepKind::ZeroRule:
        j["des"] = to_json(*st.des);
        break;
      case StepKind::ThreeByThree:
        j["diagram"] = to_json(*st.diagram);
        break;
      case StepKind::DoubleIso:
        j["d1"] = to_json(*st.d1);
        j["d2"] = to_json(*st.d2);
        j["u"] = to_json(st.iso->u);
        j["v"] = to_json(st.iso->v);
        j["w"] = to_json(st.iso->w);
        break;
      case StepKind::LeftRightSwap:
        j["object"] = to_json(*st.X);
        j["phi"] = to_json(*st.phi);
        break;
      case StepKind::SwapVanish:
        j["object"] = to_json(*st.X);
        j["signed"] = st.signed_swap;
        if (st.decomposition) j["decomposition"] = to_json(*st.decomposition);
        break;
      case StepKind::LinearCombine: {
        Json refs = Json::array(), coeffs = Json::array();
        for (auto r : st.refs) refs.push_back(r);
        for (const auto& c : st.coeffs) coeffs.push_back(int_to_json(c));
        j["refs"] = refs;
        j["coeffs"] = coeffs;
        break;
      }
    }
    steps.push_back(std::move(j));
  }
  return Json{{"schema_version", 1}, {"steps", steps}};
}

ProofScript script_from_json(const Json& j) {
  ProofScript s;
  for (const auto& stj : field(j, "steps")) {
    Step st;
    std::string rule = field(stj, "rule").get<std::string>();
    if (rule == "zero_rule") {
      st.kind = StepKind::ZeroRule;
      st.des = des_from_json(field(stj, "des"));
    } else if (rule == "three_by_three") {
      st.kind = StepKind::ThreeByThree;
      st.diagram = nen33_from_json(field(stj, "diagram"));
    } else if (rule == "double_iso") {
      st.kind = StepKind::DoubleIso;
      st.d1 = des_from_json(field(stj, "d1"));
      st.d2 = des_from_json(field(stj, "d2"));
      st.iso = IsoTriple{mor_from_json(field(stj, "u")), mor_from_json(field(stj, "v")),
                         mor_from_json(field(stj, "w"))};
    } else if (rule == "left_right_swap") {
      st.kind = StepKind::LeftRightSwap;
      st.X = obj_from_json(field(stj, "object"));
      st.phi = mor_from_json(field(stj, "phi"));
    } else if (rule == "swap_vanish") {
      st.kind = StepKind::SwapVanish;
      st.X = obj_from_json(field(stj, "object"));
      st.signed_swap = field(stj, "signed").get<bool>();
      if (stj.contains("decomposition")) st.decomposition = se_from_json(stj["decomposition"]);
    } else if (rule == "linear_combine") {
      st.kind = StepKind::LinearCombine;
      for (const auto& r : field(stj, "refs")) st.refs.push_back(r.get<std::size_t>());
      for (const auto& c : field(stj, "coeffs")) st.coeffs.push_back(int_from_json(c));
    } else {
      bad("unknown rule '" + rule + "'");
    }
    s.steps.push_back(std::move(st));
  }
  return s;
}

Json derivation_to_json(const Derivation& d) {
  Json gens = Json::array();
  Json identity = Json::object();
  std::size_t id = 0;
  for (const auto& [key, des] : d.gens) {
    if (!d.identity.count(key)) continue;
    gens.push_back(Json{{"id", id}, {"des", to_json(des)}});
    identity[std::to_string(id)] = int_to_json(d.identity.at(key));
    ++id;
  }
  Json admitted = Json::array();
  for (const auto& a : d.admitted) admitted.push_back(a);
  return Json{{"schema_version", 1},
              {"generators", gens},
              {"identity", identity},
              {"admitted_rules", admitted}};
}

Json boundary_to_json(const BoundaryResult& r) {
  Json cls = Json::array();
  for (int v : r.k0) cls.push_back(v);
  auto vertex_json = [](const GGVertex& v) {
    return Json{{"first", to_json(v.first)}, {"second", to_json(v.second)},
                {"ambient", ambient_name(v.amb)}};
  };
  Json path = Json::array();
  for (const auto& [e, rev] : r.path.edges) {
    path.push_back(Json{{"from", vertex_json(e.source())},
                        {"to", vertex_json(e.target())},
                        {"reversed", rev},
                        {"dotted", to_json(e.dotted)},
                        {"solid", to_json(e.solid)}});
  }
  std::string qlabel = r.endpoint.first.is_zero() ? "0" : r.endpoint.first.atoms[0].mod.label;
  std::string plabel = r.endpoint.second.is_zero() ? "0" : r.endpoint.second.atoms[0].mod.label;
  return Json{{"schema_version", 1},
              {"class", cls},
              {"endpoint", Json::array({qlabel, plabel})},
              {"path", path},
              {"reduced", to_json(r.reduced)}};
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace relk
