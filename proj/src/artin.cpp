#include "forge/artin.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace forge {

SparseVec ArtinAlgebra::mul(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [i, ci] : x)
    for (const auto& [j, cj] : y) sv_axpy(out, ci * cj, table[i][j]);
  return out;
}

Matrix ArtinAlgebra::mult_by(int i) const {
  Matrix m(dim(), dim());
  for (int j = 0; j < dim(); ++j)
    for (const auto& [k, c] : table[i][j]) m.at(k, j) = c;
  return m;
}

ArtinAlgebra make_artin(std::vector<std::string> names, std::vector<std::vector<SparseVec>> table,
                        int check_assoc_limit) {
  ArtinAlgebra R;
  R.names = std::move(names);
  R.table = std::move(table);
  int n = R.dim();
  if (n == 0) throw std::invalid_argument("artin: empty basis");
  if (static_cast<int>(R.table.size()) != n) throw std::invalid_argument("artin: table shape");
  for (auto& row : R.table)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("artin: table shape");
  // unit
  for (int j = 0; j < n; ++j) {
    SparseVec ej{{j, Scalar(1)}};
    if (R.table[0][j] != ej || R.table[j][0] != ej)
      throw std::invalid_argument("artin: basis 0 is not a unit");
  }
  // commutativity
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (R.table[i][j] != R.table[j][i]) throw std::invalid_argument("artin: not commutative");
  // associativity (exhaustive up to the limit, sampled beyond it)
  auto check_triple = [&](int i, int j, int k) {
    SparseVec ij = R.table[i][j];
    SparseVec left;
    for (const auto& [t, c] : ij) sv_axpy(left, c, R.table[t][k]);
    SparseVec jk = R.table[j][k];
    SparseVec right;
    for (const auto& [t, c] : jk) sv_axpy(right, c, R.table[i][t]);
    if (left != right) throw std::invalid_argument("artin: not associative");
  };
  if (n <= check_assoc_limit) {
    for (int i = 1; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (int k = j; k < n; ++k) check_triple(i, j, k);
  } else {
    // deterministic sample: stride through the triple space
    long long total = static_cast<long long>(n) * n * n;
    long long step = total / 20000 + 1;
    for (long long t = 0; t < total; t += step)
      check_triple(static_cast<int>(t % n), static_cast<int>((t / n) % n),
                   static_cast<int>(t / n / n));
  }
  // maximal ideal powers and nilpotency
  Matrix mbasis(n, n - 1);
  for (int j = 1; j < n; ++j) mbasis.at(j, j - 1) = Scalar(1);
  Subspace mk = make_subspace(n, mbasis);  // m^1
  R.ideal_pow.push_back(full_subspace(n));
  R.ideal_pow.push_back(mk);
  int guard = 0;
  while (mk.dim() > 0) {
    if (++guard > n + 1) throw std::invalid_argument("artin: maximal ideal is not nilpotent");
    // m^{k+1} = span of basis_i * x over i >= 1, x in basis of m^k
    std::vector<SparseVec> prods;
    for (int i = 1; i < n; ++i)
      for (int c = 0; c < mk.dim(); ++c) {
        SparseVec x = col_to_sv(mk.basis, c);
        SparseVec p;
        for (const auto& [t, ct] : x) sv_axpy(p, ct, R.table[i][t]);
        if (!p.empty()) prods.push_back(std::move(p));
      }
    mk = make_subspace(n, cols_from_sv(prods, n));
    R.ideal_pow.push_back(mk);
  }
  R.exponent = static_cast<int>(R.ideal_pow.size()) - 2;
  return R;
}

ArtinAlgebra artin_base_field() { return make_artin({"1"}, {{{{0, Scalar(1)}}}}); }

ArtinAlgebra artin_power_series(int vars, int order) {
  // basis: monomials of total degree <= order in `vars` variables, ordered by
  // (degree, lexicographic exponent vector); index 0 is the unit
  std::vector<std::vector<int>> expos;
  std::vector<int> cur(vars, 0);
  auto total = [&](const std::vector<int>& e) {
    int s = 0;
    for (int x : e) s += x;
    return s;
  };
  // enumerate all exponent vectors with total <= order, by total then lex
  std::vector<std::vector<int>> all;
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == vars) {
      all.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[pos] = e;
      rec(pos + 1, left - e);
      cur[pos] = 0;
    }
  };
  rec(0, order);
  std::sort(all.begin(), all.end(), [&](const auto& a, const auto& b) {
    int ta = total(a), tb = total(b);
    if (ta != tb) return ta < tb;
    return a < b;
  });
  std::map<std::vector<int>, int> idx;
  std::vector<std::string> names;
  for (std::size_t k = 0; k < all.size(); ++k) {
    idx[all[k]] = static_cast<int>(k);
    std::string nm;
    if (total(all[k]) == 0) nm = "1";
    for (int v = 0; v < vars; ++v)
      for (int rep = 0; rep < all[k][v]; ++rep) nm += "t" + std::to_string(v + 1);
    names.push_back(nm.empty() ? "1" : nm);
  }
  int n = static_cast<int>(all.size());
  std::vector<std::vector<SparseVec>> table(n, std::vector<SparseVec>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<int> s(vars);
      int t = 0;
      for (int v = 0; v < vars; ++v) {
        s[v] = all[i][v] + all[j][v];
        t += s[v];
      }
      if (t <= order) table[i][j][idx[s]] = Scalar(1);
    }
  return make_artin(std::move(names), std::move(table));
}

void validate_os(const OSStructure& os) {
  if (os.n < 0) throw std::invalid_argument("os: negative exponent");
  if (static_cast<int>(os.V.size()) != os.n + 1) throw std::invalid_argument("os: filtration size");
  if (os.V[0].dim() != 0) throw std::invalid_argument("os: V[0] must vanish");
  if (os.n >= 1 && os.V[os.n].dim() != os.vdim) throw std::invalid_argument("os: V[n] must fill");
  for (int i = 0; i + 1 <= os.n; ++i)
    if (!subspace_leq(os.V[i], os.V[i + 1])) throw std::invalid_argument("os: filtration not nested");
  if (os.comult.rows != os.vdim * os.vdim || os.comult.cols != os.vdim)
    throw std::invalid_argument("os: comult shape");
  // cocommutativity
  for (int c = 0; c < os.vdim; ++c)
    for (int a = 0; a < os.vdim; ++a)
      for (int b = 0; b < os.vdim; ++b)
        if (os.comult.at(a * os.vdim + b, c) != os.comult.at(b * os.vdim + a, c))
          throw std::invalid_argument("os: comult not cocommutative");
  // coassociativity: (comult ⊗ id) ∘ comult = (id ⊗ comult) ∘ comult
  for (int c = 0; c < os.vdim; ++c)
    for (int a = 0; a < os.vdim; ++a)
      for (int b = 0; b < os.vdim; ++b)
        for (int e = 0; e < os.vdim; ++e) {
          Scalar left(0), right(0);
          for (int t = 0; t < os.vdim; ++t) {
            left += os.comult.at(t * os.vdim + e, c) * os.comult.at(a * os.vdim + b, t);
            right += os.comult.at(a * os.vdim + t, c) * os.comult.at(b * os.vdim + e, t);
          }
          if (left != right) throw std::invalid_argument("os: comult not coassociative");
        }
  // symbol condition: comult(V[i]) inside V[i-1] ⊗ V[i-1]
  for (int i = 1; i <= os.n; ++i) {
    const Subspace& small = os.V[i - 1];
    // build V[i-1] ⊗ V[i-1] as a subspace of the tensor square
    Matrix tens(os.vdim * os.vdim, small.dim() * small.dim());
    for (int p = 0; p < small.dim(); ++p)
      for (int q = 0; q < small.dim(); ++q)
        for (int a = 0; a < os.vdim; ++a)
          for (int b = 0; b < os.vdim; ++b) {
            Scalar v = small.basis.at(a, p) * small.basis.at(b, q);
            if (!v.is_zero()) tens.at(a * os.vdim + b, p * small.dim() + q) = v;
          }
    Subspace ts = make_subspace(os.vdim * os.vdim, tens);
    Matrix img = os.comult * os.V[i].basis;
    if (!contains(ts, img)) throw std::invalid_argument("os: symbol escapes the filtration");
  }
}

OSStructure dual_os(const ArtinAlgebra& R) {
  OSStructure os;
  os.n = R.exponent;
  os.vdim = R.dim() - 1;
  // coordinates: dual basis of the maximal-ideal basis (indices 1..dim-1)
  os.comult = Matrix(os.vdim * os.vdim, os.vdim);
  for (int c = 0; c < os.vdim; ++c)
    for (int a = 0; a < os.vdim; ++a)
      for (int b = 0; b < os.vdim; ++b) {
        auto it = R.table[a + 1][b + 1].find(c + 1);
        if (it != R.table[a + 1][b + 1].end()) os.comult.at(a * os.vdim + b, c) = it->second;
      }
  // V[i] = annihilator of m^{i+1}: z with <z, x> = 0 for x in m^{i+1}
  os.V.resize(os.n + 1);
  for (int i = 0; i <= os.n; ++i) {
    int k = i + 1;
    const Subspace& mk =
        (k < static_cast<int>(R.ideal_pow.size())) ? R.ideal_pow[k] : R.ideal_pow.back();
    // pairing matrix: rows = basis of m^k restricted to ideal coordinates
    Matrix P(mk.dim(), os.vdim);
    for (int r = 0; r < mk.dim(); ++r)
      for (int c = 0; c < os.vdim; ++c) P.at(r, c) = mk.basis.at(c + 1, r);
    os.V[i] = make_subspace(os.vdim, kernel_basis(P));
  }
  validate_os(os);
  return os;
}

ArtinAlgebra dual_artin(const OSStructure& os, const std::vector<std::string>& names,
                        int check_assoc_limit) {
  int n = os.vdim + 1;
  std::vector<std::string> nm;
  nm.push_back("1");
  for (int k = 0; k < os.vdim; ++k)
    nm.push_back(static_cast<int>(names.size()) == os.vdim ? names[k]
                                                           : "t" + std::to_string(k + 1));
  std::vector<std::vector<SparseVec>> table(n, std::vector<SparseVec>(n));
  for (int j = 0; j < n; ++j) {
    table[0][j] = {{j, Scalar(1)}};
    table[j][0] = {{j, Scalar(1)}};
  }
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b) {
      SparseVec prod;
      for (int c = 0; c < os.vdim; ++c) {
        const Scalar& v = os.comult.at((a - 1) * os.vdim + (b - 1), c);
        if (!v.is_zero()) prod[c + 1] = v;
      }
      table[a][b] = std::move(prod);
    }
  return make_artin(std::move(nm), std::move(table), check_assoc_limit);
}

std::pair<ArtinAlgebra, Matrix> quotient_algebra(const ArtinAlgebra& A, const Subspace& ideal) {
  int n = A.dim();
  if (ideal.ambient != n) throw std::invalid_argument("quotient_algebra: ambient mismatch");
  for (int c = 0; c < ideal.dim(); ++c)
    if (!ideal.basis.at(0, c).is_zero())
      throw std::invalid_argument("quotient_algebra: ideal meets the unit coordinate");
  // closure under multiplication by every basis element
  for (int i = 1; i < n; ++i) {
    Matrix prods = A.mult_by(i) * ideal.basis;
    if (!contains(ideal, prods))
      throw std::invalid_argument("quotient_algebra: subspace is not an ideal");
  }
  QuotientSplit q = quotient_split(n, ideal);
  int qn = static_cast<int>(q.complement_rows.size());
  std::vector<std::string> names;
  names.reserve(qn);
  for (int r : q.complement_rows) names.push_back(A.names[r]);
  std::vector<std::vector<SparseVec>> table(qn, std::vector<SparseVec>(qn));
  for (int i = 0; i < qn; ++i)
    for (int j = 0; j < qn; ++j) {
      SparseVec prod = A.table[q.complement_rows[i]][q.complement_rows[j]];
      Matrix pv = q.projection * sv_to_col(prod, n);
      table[i][j] = col_to_sv(pv, 0);
    }
  return {make_artin(std::move(names), std::move(table)), q.projection};
}

RModule make_rmodule(const ArtinAlgebra& R, std::vector<Matrix> act) {
  RModule M;
  M.R = &R;
  M.act = std::move(act);
  if (static_cast<int>(M.act.size()) != R.dim()) throw std::invalid_argument("rmodule: table size");
  M.dim = M.act.empty() ? 0 : M.act[0].rows;
  for (const auto& m : M.act)
    if (m.rows != M.dim || m.cols != M.dim) throw std::invalid_argument("rmodule: shape");
  if (!(M.act[0] == Matrix::identity(M.dim))) throw std::invalid_argument("rmodule: unit must act as identity");
  for (int i = 0; i < R.dim(); ++i)
    for (int j = 0; j < R.dim(); ++j) {
      Matrix lhs = M.act[i] * M.act[j];
      Matrix rhs(M.dim, M.dim);
      for (const auto& [k, c] : R.table[i][j]) rhs = rhs + M.act[k].scaled(c);
      if (!(lhs == rhs)) throw std::invalid_argument("rmodule: action not associative");
    }
  return M;
}

RModule free_rmodule(const ArtinAlgebra& R, int rank) {
  int d = R.dim() * rank;
  std::vector<Matrix> act;
  for (int i = 0; i < R.dim(); ++i) {
    Matrix big(d, d);
    Matrix mi = R.mult_by(i);
    for (int blk = 0; blk < rank; ++blk)
      for (int r = 0; r < R.dim(); ++r)
        for (int c = 0; c < R.dim(); ++c)
          big.at(blk * R.dim() + r, blk * R.dim() + c) = mi.at(r, c);
    act.push_back(std::move(big));
  }
  return make_rmodule(R, std::move(act));
}

bool is_free_rmodule(const RModule& M, int rk) {
  const ArtinAlgebra& R = *M.R;
  if (M.dim != rk * R.dim()) return false;
  // m*M
  std::vector<SparseVec> gens;
  for (int i = 1; i < R.dim(); ++i)
    for (int c = 0; c < M.dim; ++c) {
      SparseVec v = col_to_sv(M.act[i], c);
      if (!v.empty()) gens.push_back(std::move(v));
    }
  Subspace mM = make_subspace(M.dim, cols_from_sv(gens, M.dim));
  QuotientSplit q = quotient_split(M.dim, mM);
  if (static_cast<int>(q.complement_rows.size()) != rk) return false;
  // map R^rk -> M: (x_1..x_rank) -> sum act(x_k) g_k with g_k the lifts
  Matrix big(M.dim, rk * R.dim());
  for (int k = 0; k < rk; ++k) {
    Matrix gk(M.dim, 1);
    gk.at(q.complement_rows[k], 0) = Scalar(1);
    for (int i = 0; i < R.dim(); ++i) {
      Matrix img = M.act[i] * gk;
      for (int r = 0; r < M.dim; ++r) big.at(r, k * R.dim() + i) = img.at(r, 0);
    }
  }
  return big.rows == big.cols && forge::rank(big) == big.rows;
}

bool is_rmodule_map(const RModule& A, const RModule& B, const Matrix& f) {
  if (A.R != B.R || f.rows != B.dim || f.cols != A.dim) return false;
  for (int i = 0; i < A.R->dim(); ++i)
    if (!(f * A.act[i] == B.act[i] * f)) return false;
  return true;
}

}  // namespace forge
