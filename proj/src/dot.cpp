#include "relk/dot.hpp"

#include <sstream>

namespace relk {

namespace {

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string hv_label(const HomVal& h, const Atom& src, const Atom& dst) {
  if (h.is_zero()) return "0";
  if (h.form == HomVal::Form::Single) {
    bool ident = h.m.is_identity();
    if (src.kind == AtomKind::Disc && dst.kind == AtomKind::Vect && ident) return "iota";
    if (src.kind == AtomKind::Vect && dst.kind == AtomKind::Torus && ident) return "q";
    if (src.kind == AtomKind::Disc && dst.kind == AtomKind::CoprodDisc && ident) return "incl0";
    if (src.kind == AtomKind::ProdTorus && dst.kind == AtomKind::Torus && ident) return "proj0";
    if (ident) return "1";
    if ((-h.m).is_identity()) return "-1";
    return h.m.str();
  }
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, m] : h.sh) {
    if (!first) os << " + ";
    first = false;
    if (k == 0)
      os << (m.is_identity() ? "1" : m.str());
    else {
      if (!m.is_identity()) os << m.str() << ".";
      os << "s";
      if (k > 1) os << "^" << k;
    }
  }
  return os.str();
}

void emit_edges(std::ostringstream& os, const Mor& m, const std::string& from_prefix,
                const std::string& to_prefix, const char* style) {
  auto vals = normal_values(m);
  for (std::size_t i = 0; i < m.dst().size(); ++i)
    for (std::size_t j = 0; j < m.src().size(); ++j) {
      const HomVal& h = vals[i * m.src().size() + j];
      if (h.is_zero()) continue;
      os << "  " << from_prefix << j << " -> " << to_prefix << i << " [style=" << style
         << ", label=\"" << esc(hv_label(h, m.src().atoms[j], m.dst().atoms[i])) << "\"];\n";
    }
}

void emit_column(std::ostringstream& os, const Obj& o, const std::string& prefix, int rank_col) {
  os << "  { rank=same; ";
  if (o.is_zero()) {
    os << prefix << "z [label=\"0\", shape=plaintext]; ";
  } else {
    for (std::size_t i = 0; i < o.size(); ++i)
      os << prefix << i << " [label=\"" << esc(o.atoms[i].str()) << "\", shape=plaintext]; ";
  }
  os << "} // column " << rank_col << "\n";
}

}  // namespace

std::string dot_of_des(const DoubleExact& d, const std::string& title) {
  std::ostringstream os;
  os << "digraph des {\n  rankdir=LR;\n";
  if (!title.empty()) os << "  label=\"" << esc(title) << "\";\n";
  emit_column(os, d.yin.left, "L", 0);
  emit_column(os, d.yin.mid, "M", 1);
  emit_column(os, d.yin.right, "R", 2);
  emit_edges(os, d.yin.inc, "L", "M", "solid");
  emit_edges(os, d.yin.sur, "M", "R", "solid");
  emit_edges(os, d.yang.inc, "L", "M", "dashed");
  emit_edges(os, d.yang.sur, "M", "R", "dashed");
  os << "}\n";
  return os.str();
}

std::string dot_of_schematic(const Schematic& s, const std::string& title) {
  return dot_of_des(compile_schematic(s), title);
}

std::string dot_of_path(const GGPath& p, const std::string& title) {
  std::ostringstream os;
  os << "digraph path {\n  rankdir=LR;\n";
  if (!title.empty()) os << "  label=\"" << esc(title) << "\";\n";
  std::vector<GGVertex> verts;
  auto vid = [&](const GGVertex& v) {
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (verts[i] == v) return i;
    verts.push_back(v);
    return verts.size() - 1;
  };
  std::ostringstream edges;
  for (const auto& [e, rev] : p.edges) {
    std::size_t a = vid(e.source()), b = vid(e.target());
    std::string label = "ker(dotted)=" + e.dotted.left.str() + ", ker(solid)=" + e.solid.left.str();
    if (rev)
      edges << "  v" << b << " -> v" << a << " [label=\"" << esc(label) << " (reversed)\"];\n";
    else
      edges << "  v" << a << " -> v" << b << " [label=\"" << esc(label) << "\"];\n";
  }
  for (std::size_t i = 0; i < verts.size(); ++i)
    os << "  v" << i << " [label=\"(" << esc(verts[i].first.str()) << ", "
       << esc(verts[i].second.str()) << ")\", shape=box];\n";
  os << edges.str() << "}\n";
  return os.str();
}

}  // namespace relk
