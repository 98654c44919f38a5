#include "forge/io.hpp"

#include "json.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace forge {

using json = nlohmann::ordered_json;

std::string fnv1a64_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k) {
    out[k] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

// ---------------------------------------------------------------------------
// emission

namespace {

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("model file: " + what);
}

json scalar_out(const Scalar& s) { return json::array({rational_str(s.re), rational_str(s.im)}); }

json sv_out(const SparseVec& v) {
  json a = json::array();
  for (auto& [k, c] : v) a.push_back(json::array({k, scalar_out(c)}));
  return a;
}

json cols_out(const std::vector<SparseVec>& cols) {
  json a = json::array();
  for (int j = 0; j < (int)cols.size(); ++j)
    if (!cols[j].empty()) a.push_back(json::array({j, sv_out(cols[j])}));
  return a;
}

json matrix_out(const Matrix& m) {
  json entries = json::array();
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c)
      if (!m.at(r, c).is_zero()) entries.push_back(json::array({r, c, scalar_out(m.at(r, c))}));
  json o;
  o["rows"] = m.rows;
  o["cols"] = m.cols;
  o["entries"] = entries;
  return o;
}

json basis_out(const GradedSpace& g) {
  json a = json::array();
  for (int k = 0; k < g.dim(); ++k) a.push_back(json::array({g.names[k], g.degrees[k]}));
  return a;
}

// ---------------------------------------------------------------------------
// parsing

Scalar scalar_in(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string())
    bad("scalar must be a two-element array of rational strings");
  auto re = parse_rational(j[0].get<std::string>());
  auto im = parse_rational(j[1].get<std::string>());
  if (!re || !im) bad("unparsable rational in scalar");
  return Scalar(*re, *im);
}

SparseVec sv_in(const json& j, int dim) {
  if (!j.is_array()) bad("sparse vector must be an array");
  SparseVec v;
  int prev = -1;
  for (auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer())
      bad("sparse vector entry must be [index, scalar]");
    int k = e[0].get<int>();
    if (k < 0 || k >= dim) bad("sparse vector index out of range");
    if (k <= prev) bad("sparse vector indices must be strictly ascending");
    prev = k;
    Scalar c = scalar_in(e[1]);
    if (!c.is_zero()) v[k] = c;
  }
  return v;
}

std::vector<SparseVec> cols_in(const json& j, int ncols, int dim) {
  if (!j.is_array()) bad("operator must be an array of columns");
  std::vector<SparseVec> cols(ncols);
  int prev = -1;
  for (auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer())
      bad("operator entry must be [column, sparse vector]");
    int c = e[0].get<int>();
    if (c < 0 || c >= ncols) bad("operator column out of range");
    if (c <= prev) bad("operator columns must be strictly ascending");
    prev = c;
    cols[c] = sv_in(e[1], dim);
  }
  return cols;
}

Matrix matrix_in(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
    bad("matrix must be an object with rows, cols, entries");
  int rows = j["rows"].get<int>(), cols = j["cols"].get<int>();
  if (rows < 0 || cols < 0) bad("negative matrix dimensions");
  Matrix m(rows, cols);
  for (auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 3) bad("matrix entry must be [row, col, scalar]");
    int r = e[0].get<int>(), c = e[1].get<int>();
    if (r < 0 || r >= rows || c < 0 || c >= cols) bad("matrix entry out of range");
    m.at(r, c) = scalar_in(e[2]);
  }
  return m;
}

GradedSpace basis_in(const json& j) {
  if (!j.is_array() || j.empty()) bad("basis must be a nonempty array");
  std::vector<std::pair<int, std::string>> flat;
  for (auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_number_integer())
      bad("basis entry must be [name, degree]");
    flat.emplace_back(e[1].get<int>(), e[0].get<std::string>());
  }
  GradedSpace g = GradedSpace::make(flat);
  for (int k = 0; k < g.dim(); ++k)
    if (g.names[k] != flat[k].second || g.degrees[k] != flat[k].first)
      bad("basis not in canonical (degree, name) order");
  return g;
}

json cy_out(const CYModel& m) {
  if (m.kind != CYKind::table)
    throw std::invalid_argument(
        "bundle_to_json: procedural polynomial models are not serializable");
  json o;
  o["n"] = m.n;
  json basis = json::array();
  for (int k = 0; k < m.dim(); ++k) basis.push_back(json::array({m.names[k], m.p[k], m.q[k]}));
  o["basis"] = basis;
  o["unit"] = m.unit;
  json wedge = json::array();
  for (int a = 0; a < m.dim(); ++a)
    for (int b = 0; b < m.dim(); ++b)
      if (!m.wedge[a][b].empty()) wedge.push_back(json::array({a, b, sv_out(m.wedge[a][b])}));
  o["wedge"] = wedge;
  o["dpar"] = cols_out(m.dpar);
  o["dbar"] = cols_out(m.dbar);
  o["lam"] = cols_out(m.lam);
  o["green"] = cols_out(m.green);
  if (m.has_dbar_adj) o["dbar_adj"] = cols_out(m.dbar_adj);
  o["phi"] = sv_out(m.phi);
  json frame = json::array();
  for (auto& f : m.frame) frame.push_back(cols_out(f));
  o["frame"] = frame;
  json tang = json::array();
  for (auto& t : m.tangent) {
    json cc = json::array();
    for (auto& c : t.coeff) cc.push_back(sv_out(c));
    tang.push_back(json::array({t.name, t.q, cc}));
  }
  o["tangent"] = tang;
  json harm = json::array();
  for (auto& h : m.harmonic) harm.push_back(sv_out(h));
  o["harmonic"] = harm;
  o["trace"] = sv_out(m.trace);
  return o;
}

CYModel cy_in(const json& j) {
  CYModel m;
  m.kind = CYKind::table;
  if (!j.contains("n") || !j["n"].is_number_integer()) bad("cy section needs integer n");
  m.n = j["n"].get<int>();
  if (m.n < 1 || m.n > 12) bad("cy dimension n out of range");
  if (!j.contains("basis") || !j["basis"].is_array() || j["basis"].empty())
    bad("cy section needs a basis");
  for (auto& e : j["basis"]) {
    if (!e.is_array() || e.size() != 3 || !e[0].is_string()) bad("cy basis entry must be [name, p, q]");
    m.names.push_back(e[0].get<std::string>());
    m.p.push_back(e[1].get<int>());
    m.q.push_back(e[2].get<int>());
  }
  const int d = m.dim();
  for (int k = 0; k < d; ++k)
    if (m.p[k] < 0 || m.p[k] > m.n || m.q[k] < 0 || m.q[k] > m.n) bad("cy bidegree out of range");
  if (!j.contains("unit")) bad("cy section needs a unit index");
  m.unit = j["unit"].get<int>();
  if (m.unit < 0 || m.unit >= d) bad("cy unit index out of range");
  m.wedge.assign(d, std::vector<SparseVec>(d));
  if (!j.contains("wedge") || !j["wedge"].is_array()) bad("cy section needs a wedge table");
  int pa = -1, pb = -1;
  for (auto& e : j["wedge"]) {
    if (!e.is_array() || e.size() != 3) bad("wedge entry must be [a, b, product]");
    int a = e[0].get<int>(), bb = e[1].get<int>();
    if (a < 0 || a >= d || bb < 0 || bb >= d) bad("wedge index out of range");
    if (a < pa || (a == pa && bb <= pb)) bad("wedge entries must be in ascending (a, b) order");
    pa = a;
    pb = bb;
    m.wedge[a][bb] = sv_in(e[2], d);
  }
  auto get_cols = [&](const char* key, bool required) -> OpCols {
    if (!j.contains(key)) {
      if (required) bad(std::string("cy section needs ") + key);
      return OpCols(d);
    }
    return cols_in(j[key], d, d);
  };
  m.dpar = get_cols("dpar", true);
  m.dbar = get_cols("dbar", true);
  m.lam = get_cols("lam", true);
  m.green = get_cols("green", true);
  if (j.contains("dbar_adj")) {
    m.has_dbar_adj = true;
    m.dbar_adj = cols_in(j["dbar_adj"], d, d);
  }
  if (!j.contains("phi")) bad("cy section needs a volume element");
  m.phi = sv_in(j["phi"], d);
  if (!j.contains("frame") || !j["frame"].is_array() || (int)j["frame"].size() != m.n)
    bad("cy section needs n frame operators");
  for (auto& f : j["frame"]) m.frame.push_back(cols_in(f, d, d));
  if (j.contains("tangent")) {
    for (auto& e : j["tangent"]) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[2].is_array() ||
          (int)e[2].size() != m.n)
        bad("tangent entry must be [name, q, n coefficient vectors]");
      CYTangent t;
      t.name = e[0].get<std::string>();
      t.q = e[1].get<int>();
      for (auto& c : e[2]) t.coeff.push_back(sv_in(c, d));
      m.tangent.push_back(t);
    }
  }
  if (j.contains("harmonic"))
    for (auto& h : j["harmonic"]) m.harmonic.push_back(sv_in(h, d));
  if (!j.contains("trace")) bad("cy section needs a trace covector");
  m.trace = sv_in(j["trace"], d);
  return m;
}

}  // namespace

std::string bundle_to_json(const ModelBundle& b) {
  json o;
  o["format"] = "forge-model/1";
  o["field"] = "gaussian_rational";
  o["name"] = b.name;
  if (b.has_dgla) {
    json g;
    g["basis"] = basis_out(b.dgla.g);
    json br = json::array();
    for (int a = 0; a < b.dgla.g.dim(); ++a)
      for (int c = 0; c < b.dgla.g.dim(); ++c)
        if (!b.dgla.bracket[a][c].empty())
          br.push_back(json::array({a, c, sv_out(b.dgla.bracket[a][c])}));
    g["bracket"] = br;
    g["delta"] = matrix_out(b.dgla.delta);
    o["dgla"] = g;
  }
  if (!b.modules.empty()) {
    json ms = json::array();
    for (auto& rm : b.modules) {
      json mo;
      mo["name"] = rm.name;
      mo["basis"] = basis_out(rm.E);
      mo["d"] = matrix_out(rm.dE);
      json act = json::array();
      for (int v = 0; v < (int)rm.act.size(); ++v)
        if (!rm.act[v].is_zero()) act.push_back(json::array({v, matrix_out(rm.act[v])}));
      mo["action"] = act;
      ms.push_back(mo);
    }
    o["modules"] = ms;
  }
  if (!b.contractions.empty()) {
    json cs = json::array();
    for (auto& c : b.contractions) {
      json co;
      co["from"] = c.from;
      co["to"] = c.to;
      json tbl = json::array();
      for (int v = 0; v < (int)c.table.size(); ++v)
        if (!c.table[v].is_zero()) tbl.push_back(json::array({v, matrix_out(c.table[v])}));
      co["table"] = tbl;
      cs.push_back(co);
    }
    o["contractions"] = cs;
  }
  if (b.has_pair) {
    json p;
    p["module"] = b.pair.module;
    p["d"] = matrix_out(b.pair.d);
    o["pair"] = p;
  }
  if (b.has_cy) o["cy"] = cy_out(b.cy);
  return o.dump(1) + "\n";
}

namespace {

ModelBundle bundle_from_json_inner(const json& o) {
  if (!o.is_object()) bad("top level must be an object");
  if (!o.contains("format") || o["format"] != "forge-model/1") bad("unknown format version");
  if (!o.contains("field") || o["field"] != "gaussian_rational") bad("unknown scalar field");
  ModelBundle b;
  if (!o.contains("name") || !o["name"].is_string()) bad("missing model name");
  b.name = o["name"].get<std::string>();

  int gd = 0;
  if (o.contains("dgla")) {
    const json& g = o["dgla"];
    b.has_dgla = true;
    if (!g.contains("basis")) bad("dgla section needs a basis");
    b.dgla.g = basis_in(g["basis"]);
    gd = b.dgla.g.dim();
    b.dgla.bracket.assign(gd, std::vector<SparseVec>(gd));
    if (g.contains("bracket")) {
      for (auto& e : g["bracket"]) {
        if (!e.is_array() || e.size() != 3) bad("bracket entry must be [a, b, value]");
        int a = e[0].get<int>(), c = e[1].get<int>();
        if (a < 0 || a >= gd || c < 0 || c >= gd) bad("bracket index out of range");
        b.dgla.bracket[a][c] = sv_in(e[2], gd);
      }
    }
    b.dgla.delta = g.contains("delta") ? matrix_in(g["delta"]) : Matrix(gd, gd);
    if (b.dgla.delta.rows != gd || b.dgla.delta.cols != gd) bad("delta has wrong shape");
  }
  if (o.contains("modules")) {
    if (!b.has_dgla) bad("modules require a dgla section");
    for (auto& mo : o["modules"]) {
      RawModule rm;
      if (!mo.contains("name") || !mo["name"].is_string()) bad("module needs a name");
      rm.name = mo["name"].get<std::string>();
      if (b.find_module(rm.name)) bad("duplicate module name " + rm.name);
      if (!mo.contains("basis")) bad("module needs a basis");
      rm.E = basis_in(mo["basis"]);
      rm.dE = mo.contains("d") ? matrix_in(mo["d"]) : Matrix(rm.E.dim(), rm.E.dim());
      if (rm.dE.rows != rm.E.dim() || rm.dE.cols != rm.E.dim()) bad("module d has wrong shape");
      rm.act.assign(gd, Matrix(rm.E.dim(), rm.E.dim()));
      if (mo.contains("action")) {
        for (auto& e : mo["action"]) {
          if (!e.is_array() || e.size() != 2) bad("action entry must be [flat, matrix]");
          int v = e[0].get<int>();
          if (v < 0 || v >= gd) bad("action index out of range");
          Matrix a = matrix_in(e[1]);
          if (a.rows != rm.E.dim() || a.cols != rm.E.dim()) bad("action matrix has wrong shape");
          rm.act[v] = a;
        }
      }
      b.modules.push_back(std::move(rm));
    }
  }
  if (o.contains("contractions")) {
    for (auto& co : o["contractions"]) {
      RawContraction c;
      if (!co.contains("from") || !co.contains("to")) bad("contraction needs from and to");
      c.from = co["from"].get<std::string>();
      c.to = co["to"].get<std::string>();
      const RawModule* from = b.find_module(c.from);
      const RawModule* to = b.find_module(c.to);
      if (!from || !to) bad("contraction references unknown module");
      c.table.assign(gd, Matrix(to->E.dim(), from->E.dim()));
      if (co.contains("table")) {
        for (auto& e : co["table"]) {
          if (!e.is_array() || e.size() != 2) bad("contraction entry must be [flat, matrix]");
          int v = e[0].get<int>();
          if (v < 0 || v >= gd) bad("contraction index out of range");
          Matrix t = matrix_in(e[1]);
          if (t.rows != to->E.dim() || t.cols != from->E.dim())
            bad("contraction matrix has wrong shape");
          c.table[v] = t;
        }
      }
      b.contractions.push_back(std::move(c));
    }
  }
  if (o.contains("pair")) {
    b.has_pair = true;
    const json& p = o["pair"];
    if (!p.contains("module") || !p["module"].is_string()) bad("pair needs a module name");
    b.pair.module = p["module"].get<std::string>();
    const RawModule* h = b.find_module(b.pair.module);
    if (!h) bad("pair references unknown module");
    if (!p.contains("d")) bad("pair needs a derivation matrix");
    b.pair.d = matrix_in(p["d"]);
    if (b.pair.d.rows != h->E.dim() || b.pair.d.cols != gd) bad("pair derivation has wrong shape");
  }
  if (o.contains("cy")) {
    b.has_cy = true;
    b.cy = cy_in(o["cy"]);
  }
  if (!b.has_dgla && !b.has_cy) bad("bundle has neither a dgla nor a cy section");
  return b;
}

}  // namespace

ModelBundle bundle_from_json(const std::string& text) {
  json o;
  try {
    o = json::parse(text);
  } catch (const std::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  try {
    return bundle_from_json_inner(o);
  } catch (const json::exception& e) {
    bad(std::string("malformed table: ") + e.what());
  }
}

void save_bundle(const ModelBundle& b, const std::string& path) {
  write_file(path, bundle_to_json(b));
}

ModelBundle load_bundle(const std::string& path) { return bundle_from_json(read_file(path)); }

}  // namespace forge
