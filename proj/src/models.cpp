#include "forge/models.hpp"

#include <map>
#include <optional>
#include <stdexcept>

namespace forge {

const RawModule* ModelBundle::find_module(const std::string& n) const {
  for (const auto& m : modules)
    if (m.name == n) return &m;
  return nullptr;
}

bool BundleCheck::ok() const {
  for (auto& [name, v] : items) {
    if (name == "smoothing-contract" || name == "adjoint-contract") continue;
    if (!v) return false;
  }
  return true;
}

std::string BundleCheck::first_fail() const {
  for (auto& [name, v] : items)
    if (!v) return name;
  return "";
}

DGLA bundle_dgla(const ModelBundle& b) {
  if (!b.has_dgla) throw std::invalid_argument("bundle_dgla: bundle has no algebra section");
  return make_dgla(b.dgla.g, b.dgla.bracket, b.dgla.delta);
}

GModule bundle_module(const ModelBundle& b, const DGLA& g, const std::string& name) {
  const RawModule* rm = b.find_module(name);
  if (!rm) throw std::invalid_argument("bundle_module: no module named " + name);
  return make_gmodule(g, rm->E, rm->dE, rm->act);
}

BundleCheck bundle_check(const ModelBundle& b) {
  BundleCheck out;
  auto add = [&](const std::string& name, bool v) { out.items.emplace_back(name, v); };

  // cross references and table shapes
  bool structure = true;
  const int gd = b.has_dgla ? b.dgla.g.dim() : 0;
  if (b.has_dgla) {
    structure = structure && (int)b.dgla.bracket.size() == gd;
    for (auto& row : b.dgla.bracket) structure = structure && (int)row.size() == gd;
    structure = structure && b.dgla.delta.rows == gd && b.dgla.delta.cols == gd;
  }
  if (!b.has_dgla && (!b.modules.empty() || !b.contractions.empty() || b.has_pair))
    structure = false;
  for (auto& mod : b.modules) {
    structure = structure && (int)mod.act.size() == gd && mod.dE.rows == mod.E.dim() &&
                mod.dE.cols == mod.E.dim();
    for (auto& a : mod.act)
      structure = structure && a.rows == mod.E.dim() && a.cols == mod.E.dim();
  }
  for (auto& c : b.contractions) {
    const RawModule* from = b.find_module(c.from);
    const RawModule* to = b.find_module(c.to);
    structure = structure && from && to && (int)c.table.size() == gd;
    if (from && to)
      for (auto& t : c.table)
        structure = structure && t.rows == to->E.dim() && t.cols == from->E.dim();
  }
  if (b.has_pair) {
    const RawModule* h = b.find_module(b.pair.module);
    structure = structure && h && b.pair.d.cols == gd && (!h || b.pair.d.rows == h->E.dim());
  }
  add("bundle-structure", structure);
  if (!structure) {
    out.sharp_ok = false;
    return out;
  }

  std::optional<DGLA> g;
  if (b.has_dgla) {
    try {
      g = make_dgla(b.dgla.g, b.dgla.bracket, b.dgla.delta);
    } catch (...) {
    }
    add("algebra-axioms", g.has_value());
  }

  std::map<std::string, GModule> mods;
  if (g) {
    for (auto& rm : b.modules) {
      bool okm = false;
      try {
        mods.emplace(rm.name, make_gmodule(*g, rm.E, rm.dE, rm.act));
        okm = true;
      } catch (...) {
      }
      add("module-" + rm.name, okm);
    }

    for (auto& c : b.contractions) {
      if (!mods.count(c.from) || !mods.count(c.to)) continue;
      const GModule& F = mods.at(c.from);
      const GModule& T = mods.at(c.to);
      const std::string base = "contraction-" + c.from + "-" + c.to;

      bool degree_ok = true;
      for (int v = 0; v < gd; ++v) {
        int dv = g->g.degree(v);
        const Matrix& t = c.table[v];
        for (int r = 0; r < t.rows; ++r)
          for (int cc = 0; cc < t.cols; ++cc)
            if (!t.at(r, cc).is_zero() && T.E.degree(r) != F.E.degree(cc) + dv)
              degree_ok = false;
      }
      add(base + "-degree", degree_ok);

      // d_to i(v) = i(delta v) + (-1)^{|v|} i(v) d_from
      bool diff_ok = true;
      for (int v = 0; v < gd; ++v) {
        Matrix lhs = T.dE * c.table[v];
        Matrix rhs = c.table[v] * F.dE;
        if (g->g.degree(v) % 2 != 0) rhs = rhs.scaled(Scalar(-1));
        for (int k = 0; k < gd; ++k) {
          Scalar ckv = g->delta.at(k, v);
          if (!ckv.is_zero()) rhs = rhs + c.table[k].scaled(ckv);
        }
        if (!(lhs == rhs)) diff_ok = false;
      }
      add(base + "-differential", diff_ok);

      // i([x,y]) = L_x i(y) - (-1)^{|x||y|} L_y i(x) on the target module
      bool br_ok = true;
      for (int x = 0; x < gd; ++x)
        for (int y = 0; y < gd; ++y) {
          Matrix lhs(T.E.dim(), F.E.dim());
          for (auto& [k, ck] : g->bracket[x][y]) lhs = lhs + c.table[k].scaled(ck);
          Matrix rhs = T.act[x] * c.table[y];
          Matrix second = T.act[y] * c.table[x];
          rhs = (g->g.degree(x) * g->g.degree(y)) % 2 == 0 ? rhs - second : rhs + second;
          if (!(lhs == rhs)) br_ok = false;
        }
      add(base + "-bracket", br_ok);
    }

    if (b.has_pair && mods.count(b.pair.module)) {
      // d[x,y] = x.d(y) - (-1)^{|x||y|} y.d(x)
      const GModule& H = mods.at(b.pair.module);
      bool pair_ok = true;
      for (int x = 0; x < gd; ++x)
        for (int y = 0; y < gd; ++y) {
          SparseVec acc;
          for (auto& [k, ck] : g->bracket[x][y]) sv_axpy(acc, ck, col_to_sv(b.pair.d, k));
          Matrix lhs = sv_to_col(acc, H.E.dim());
          Matrix rhs = H.act[x] * b.pair.d.col(y);
          Matrix second = H.act[y] * b.pair.d.col(x);
          rhs = (g->g.degree(x) * g->g.degree(y)) % 2 == 0 ? rhs - second : rhs + second;
          if (!(lhs == rhs)) pair_ok = false;
        }
      add("pair-derivation", pair_ok);
    }
  }

  if (b.has_cy) {
    CYCheck cc = cy_validate(b.cy);
    for (auto& it : cc.items) out.items.push_back(it);
    out.sharp_ok = cc.sharp_ok;
  }
  return out;
}

// ---------------------------------------------------------------------------
// corpus

namespace {

RawDGLA obstructed_algebra() {
  RawDGLA d;
  d.g = GradedSpace::make({{1, "e1"}, {1, "e2"}, {2, "f"}});
  int n = d.g.dim();
  d.bracket.assign(n, std::vector<SparseVec>(n));
  int e1 = d.g.find("e1"), e2 = d.g.find("e2"), f = d.g.find("f");
  d.bracket[e1][e2] = {{f, Scalar(1)}};
  d.bracket[e2][e1] = {{f, Scalar(1)}};  // odd-odd: [x,y] = [y,x]
  d.delta = Matrix(n, n);
  return d;
}

}  // namespace

ModelBundle model_abelian3() {
  ModelBundle b;
  b.name = "abelian3";
  b.has_dgla = true;
  b.dgla.g = GradedSpace::make({{1, "e1"}, {1, "e2"}, {1, "e3"}});
  b.dgla.bracket.assign(3, std::vector<SparseVec>(3));
  b.dgla.delta = Matrix(3, 3);
  return b;
}

ModelBundle model_obstructed2() {
  ModelBundle b;
  b.name = "obstructed2";
  b.has_dgla = true;
  b.dgla = obstructed_algebra();
  return b;
}

ModelBundle model_torus3() {
  ModelBundle b;
  b.name = "torus3";
  b.has_cy = true;
  b.cy = cy_torus(3);
  return b;
}

ModelBundle model_k3() {
  ModelBundle b;
  b.name = "k3-model";
  b.has_cy = true;
  b.cy = cy_torus(2);
  return b;
}

ModelBundle model_blockcy(int which) {
  ModelBundle b;
  b.name = "blockcy" + std::to_string(which);
  b.has_cy = true;
  b.cy = cy_torus(3);
  if (which == 1) {
    cy_attach_block(b.cy, 1, 1);
  } else if (which == 2) {
    cy_attach_block(b.cy, 2, 2);
  } else if (which == 3) {
    cy_attach_block(b.cy, 2, 1);
    cy_attach_block(b.cy, 1, 2);
  } else {
    throw std::invalid_argument("model_blockcy: which must be 1, 2 or 3");
  }
  return b;
}

ModelBundle model_modecy() {
  ModelBundle b;
  b.name = "modecy";
  b.has_cy = true;
  b.cy = cy_mode_model(3, 2);
  return b;
}

ModelBundle model_clemens() {
  // The obstructed algebra acting on two graded modules A ("upper") and B
  // ("lower") with a contraction pairing i: A -> B.  Only e1 acts (by an odd
  // square-zero operator) and only e2 contracts; the induced i(f) = L_e1 i(e2)
  // is a nonzero matrix whose action on cohomology classes is exactly zero:
  // the degree-zero class a0p maps to the exact element b2q = d(b1q).
  ModelBundle b;
  b.name = "clemens";
  b.has_dgla = true;
  b.dgla = obstructed_algebra();
  int e1 = b.dgla.g.find("e1"), e2 = b.dgla.g.find("e2"), f = b.dgla.g.find("f");

  RawModule A;
  A.name = "upper";
  A.E = GradedSpace::make({{0, "a0"}, {0, "a0p"}, {1, "a1"}, {1, "a1p"}, {2, "a2"}});
  int a0 = A.E.find("a0"), a0p = A.E.find("a0p"), a1 = A.E.find("a1");
  int a1p = A.E.find("a1p"), a2 = A.E.find("a2");
  A.dE = Matrix(5, 5);
  A.dE.at(a2, a1p) = Scalar(1);
  A.act.assign(3, Matrix(5, 5));
  A.act[e1].at(a1, a0) = Scalar(1);

  RawModule B;
  B.name = "lower";
  B.E = GradedSpace::make({{0, "b0"},
                           {1, "b1"},
                           {1, "b1p"},
                           {1, "b1q"},
                           {2, "b2"},
                           {2, "b2p"},
                           {2, "b2q"},
                           {3, "b3"}});
  int b0 = B.E.find("b0"), b1 = B.E.find("b1"), b1p = B.E.find("b1p");
  int b1q = B.E.find("b1q"), b2 = B.E.find("b2"), b2p = B.E.find("b2p");
  int b2q = B.E.find("b2q"), b3 = B.E.find("b3");
  B.dE = Matrix(8, 8);
  B.dE.at(b2q, b1q) = Scalar(1);
  B.dE.at(b3, b2p) = Scalar(1);
  B.act.assign(3, Matrix(8, 8));
  B.act[e1].at(b1, b0) = Scalar(1);
  B.act[e1].at(b2q, b1p) = Scalar(1);
  B.act[e1].at(b3, b2) = Scalar(1);

  b.modules = {A, B};

  RawContraction c;
  c.from = "upper";
  c.to = "lower";
  c.table.assign(3, Matrix(8, 5));
  c.table[e2].at(b1, a0) = Scalar(1);
  c.table[e2].at(b1p, a0p) = Scalar(1);
  c.table[e2].at(b2, a1) = Scalar(1);
  c.table[e2].at(b2p, a1p) = Scalar(1);
  c.table[e2].at(b3, a2) = Scalar(-1);
  // i(f) = L_e1 i(e2) + L_e2 i(e1) = B.act[e1] * table[e2]
  c.table[f] = B.act[e1] * c.table[e2];
  b.contractions = {c};
  return b;
}

ModelBundle model_pairdemo() {
  // Abelian two-generator algebra in degree zero, a three-dimensional module
  // whose extra generator maps onto the image of the derivation, and the
  // derivation x -> h1, y -> h2.
  ModelBundle b;
  b.name = "pairdemo";
  b.has_dgla = true;
  b.dgla.g = GradedSpace::make({{0, "x"}, {0, "y"}});
  b.dgla.bracket.assign(2, std::vector<SparseVec>(2));
  b.dgla.delta = Matrix(2, 2);
  int x = b.dgla.g.find("x"), y = b.dgla.g.find("y");

  RawModule H;
  H.name = "h";
  H.E = GradedSpace::make({{0, "h1"}, {0, "h2"}, {0, "h3"}});
  int h1 = H.E.find("h1"), h2 = H.E.find("h2"), h3 = H.E.find("h3");
  H.dE = Matrix(3, 3);
  H.act.assign(2, Matrix(3, 3));
  H.act[x].at(h1, h3) = Scalar(1);
  H.act[y].at(h2, h3) = Scalar(1);
  b.modules = {H};

  b.has_pair = true;
  b.pair.module = "h";
  b.pair.d = Matrix(3, 2);
  b.pair.d.at(h1, x) = Scalar(1);
  b.pair.d.at(h2, y) = Scalar(1);
  return b;
}

ModelBundle model_broken() {
  ModelBundle b;
  b.name = "broken";
  b.has_cy = true;
  b.cy = cy_torus(2);
  // flip one wedge product: t1 ^ b1 loses its sign on one side only
  int t1 = 1 << 2, b1 = 1;  // flat indices (s<<n)|t for n = 2
  for (auto& [k, c] : b.cy.wedge[t1][b1]) c = -c;
  return b;
}

std::vector<ModelBundle> model_corpus() {
  std::vector<ModelBundle> all;
  all.push_back(model_abelian3());
  all.push_back(model_obstructed2());
  all.push_back(model_torus3());
  all.push_back(model_k3());
  all.push_back(model_blockcy(1));
  all.push_back(model_blockcy(2));
  all.push_back(model_blockcy(3));
  all.push_back(model_modecy());
  all.push_back(model_clemens());
  all.push_back(model_pairdemo());
  return all;
}

}  // namespace forge
