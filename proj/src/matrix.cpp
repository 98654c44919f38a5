#include "forge/matrix.hpp"

#include <stdexcept>

namespace forge {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int k = 0; k < n; ++k) m.at(k, k) = Scalar(1);
  return m;
}

bool Matrix::is_zero() const {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) t.at(c, r) = at(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols != o.rows) throw std::invalid_argument("Matrix multiply: shape mismatch");
  Matrix p(rows, o.cols);
  for (int r = 0; r < rows; ++r)
    for (int k = 0; k < cols; ++k) {
      const Scalar& x = at(r, k);
      if (x.is_zero()) continue;
      for (int c = 0; c < o.cols; ++c) {
        const Scalar& y = o.at(k, c);
        if (!y.is_zero()) p.at(r, c) += x * y;
      }
    }
  return p;
}

Matrix Matrix::operator+(const Matrix& o) const {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("Matrix add: shape mismatch");
  Matrix s = *this;
  for (std::size_t k = 0; k < a.size(); ++k) s.a[k] += o.a[k];
  return s;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("Matrix sub: shape mismatch");
  Matrix s = *this;
  for (std::size_t k = 0; k < a.size(); ++k) s.a[k] -= o.a[k];
  return s;
}

Matrix Matrix::scaled(const Scalar& c) const {
  Matrix s = *this;
  for (auto& x : s.a) x *= c;
  return s;
}

Matrix Matrix::hcat(const Matrix& o) const {
  if (rows != o.rows) throw std::invalid_argument("hcat: row mismatch");
  Matrix m(rows, cols + o.cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m.at(r, c) = at(r, c);
    for (int c = 0; c < o.cols; ++c) m.at(r, cols + c) = o.at(r, c);
  }
  return m;
}

Matrix Matrix::vcat(const Matrix& o) const {
  if (cols != o.cols) throw std::invalid_argument("vcat: col mismatch");
  Matrix m(rows + o.rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(r, c) = at(r, c);
  for (int r = 0; r < o.rows; ++r)
    for (int c = 0; c < cols; ++c) m.at(rows + r, c) = o.at(r, c);
  return m;
}

Matrix Matrix::col(int c) const {
  Matrix m(rows, 1);
  for (int r = 0; r < rows; ++r) m.at(r, 0) = at(r, c);
  return m;
}

Matrix Matrix::take_cols(const std::vector<int>& idx) const {
  Matrix m(rows, static_cast<int>(idx.size()));
  for (int r = 0; r < rows; ++r)
    for (std::size_t k = 0; k < idx.size(); ++k) m.at(r, static_cast<int>(k)) = at(r, idx[k]);
  return m;
}

Matrix Matrix::take_rows(const std::vector<int>& idx) const {
  Matrix m(static_cast<int>(idx.size()), cols);
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (int c = 0; c < cols; ++c) m.at(static_cast<int>(k), c) = at(idx[k], c);
  return m;
}

void sv_axpy(SparseVec& dst, const Scalar& c, const SparseVec& src) {
  if (c.is_zero()) return;
  for (const auto& [k, v] : src) {
    Scalar& slot = dst[k];
    slot += c * v;
    if (slot.is_zero()) dst.erase(k);
  }
}

void sv_add(SparseVec& dst, int index, const Scalar& c) {
  if (c.is_zero()) return;
  Scalar& slot = dst[index];
  slot += c;
  if (slot.is_zero()) dst.erase(index);
}

Matrix sv_to_col(const SparseVec& v, int dim) {
  Matrix m(dim, 1);
  for (const auto& [k, x] : v) m.at(k, 0) = x;
  return m;
}

SparseVec col_to_sv(const Matrix& m, int c) {
  SparseVec v;
  for (int r = 0; r < m.rows; ++r)
    if (!m.at(r, c).is_zero()) v[r] = m.at(r, c);
  return v;
}

Matrix cols_from_sv(const std::vector<SparseVec>& vs, int dim) {
  Matrix m(dim, static_cast<int>(vs.size()));
  for (std::size_t c = 0; c < vs.size(); ++c)
    for (const auto& [r, x] : vs[c]) m.at(r, static_cast<int>(c)) = x;
  return m;
}

SparseVec sv_scaled(const SparseVec& v, const Scalar& c) {
  SparseVec out;
  if (c.is_zero()) return out;
  for (const auto& [k, x] : v) out[k] = c * x;
  return out;
}

Echelon rref(const Matrix& m) {
  Echelon e;
  e.R = m;
  Matrix& R = e.R;
  int lead = 0;
  for (int c = 0; c < R.cols && lead < R.rows; ++c) {
    int prow = -1;
    for (int r = lead; r < R.rows; ++r)
      if (!R.at(r, c).is_zero()) {
        prow = r;
        break;
      }
    if (prow < 0) continue;
    if (prow != lead)
      for (int k = c; k < R.cols; ++k) std::swap(R.at(prow, k), R.at(lead, k));
    Scalar inv = R.at(lead, c).inv();
    for (int k = c; k < R.cols; ++k)
      if (!R.at(lead, k).is_zero()) R.at(lead, k) *= inv;
    for (int r = 0; r < R.rows; ++r) {
      if (r == lead) continue;
      Scalar f = R.at(r, c);
      if (f.is_zero()) continue;
      for (int k = c; k < R.cols; ++k) {
        const Scalar& x = R.at(lead, k);
        if (!x.is_zero()) R.at(r, k) -= f * x;
      }
    }
    e.pivots.push_back(c);
    ++lead;
  }
  return e;
}

int rank(const Matrix& m) { return static_cast<int>(rref(m).pivots.size()); }

Matrix kernel_basis(const Matrix& m) {
  Echelon e = rref(m);
  std::vector<int> free_cols;
  {
    std::size_t p = 0;
    for (int c = 0; c < m.cols; ++c) {
      if (p < e.pivots.size() && e.pivots[p] == c)
        ++p;
      else
        free_cols.push_back(c);
    }
  }
  Matrix K(m.cols, static_cast<int>(free_cols.size()));
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    int f = free_cols[j];
    K.at(f, static_cast<int>(j)) = Scalar(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
      K.at(e.pivots[r], static_cast<int>(j)) = -e.R.at(static_cast<int>(r), f);
  }
  return K;
}

Matrix image_basis(const Matrix& m) {
  Echelon e = rref(m.transpose());
  std::vector<int> nz;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) nz.push_back(static_cast<int>(r));
  return e.R.take_rows(nz).transpose();
}

std::optional<Matrix> solve(const Matrix& m, const Matrix& b) {
  if (m.rows != b.rows) throw std::invalid_argument("solve: shape mismatch");
  Echelon e = rref(m.hcat(b));
  // Any pivot in the augmented block means some column is inconsistent.
  for (int p : e.pivots)
    if (p >= m.cols) return std::nullopt;
  Matrix x(m.cols, b.cols);
  for (std::size_t r = 0; r < e.pivots.size(); ++r)
    for (int c = 0; c < b.cols; ++c) x.at(e.pivots[r], c) = e.R.at(static_cast<int>(r), m.cols + c);
  return x;
}

Matrix inverse(const Matrix& m) {
  if (m.rows != m.cols) throw std::domain_error("inverse: not square");
  Echelon e = rref(m.hcat(Matrix::identity(m.rows)));
  if (static_cast<int>(e.pivots.size()) != m.rows || (m.rows > 0 && e.pivots.back() >= m.cols))
    throw std::domain_error("inverse: singular");
  std::vector<int> right;
  for (int c = 0; c < m.cols; ++c) right.push_back(m.cols + c);
  return e.R.take_cols(right);
}

Subspace make_subspace(int ambient, const Matrix& spanning_cols) {
  if (spanning_cols.cols > 0 && spanning_cols.rows != ambient)
    throw std::invalid_argument("make_subspace: ambient mismatch");
  Subspace s;
  s.ambient = ambient;
  Echelon e = rref(spanning_cols.transpose());
  std::vector<int> nz;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) nz.push_back(static_cast<int>(r));
  s.basis = e.R.take_rows(nz).transpose();
  if (s.basis.rows == 0) s.basis = Matrix(ambient, 0);
  s.pivots = e.pivots;
  return s;
}

Subspace zero_subspace(int ambient) { return make_subspace(ambient, Matrix(ambient, 0)); }

Subspace full_subspace(int ambient) { return make_subspace(ambient, Matrix::identity(ambient)); }

Subspace sum(const Subspace& u, const Subspace& w) {
  if (u.ambient != w.ambient) throw std::invalid_argument("sum: ambient mismatch");
  return make_subspace(u.ambient, u.basis.hcat(w.basis));
}

Subspace intersect(const Subspace& u, const Subspace& w) {
  if (u.ambient != w.ambient) throw std::invalid_argument("intersect: ambient mismatch");
  if (u.dim() == 0 || w.dim() == 0) return zero_subspace(u.ambient);
  // Solutions of u*x = w*y give intersection vectors u*x.
  Matrix K = kernel_basis(u.basis.hcat(w.basis.scaled(Scalar(-1))));
  std::vector<int> top;
  for (int r = 0; r < u.dim(); ++r) top.push_back(r);
  return make_subspace(u.ambient, u.basis * K.take_rows(top));
}

bool contains(const Subspace& u, const Matrix& vecs) {
  if (vecs.cols == 0) return true;
  if (vecs.rows != u.ambient) throw std::invalid_argument("contains: ambient mismatch");
  return solve(u.basis, vecs).has_value();
}

bool subspace_leq(const Subspace& u, const Subspace& w) { return contains(w, u.basis); }

bool subspace_eq(const Subspace& u, const Subspace& w) {
  return u.ambient == w.ambient && u.basis == w.basis;
}

std::optional<Matrix> coords_in(const Subspace& u, const Matrix& vecs) {
  return solve(u.basis, vecs);
}

QuotientSplit quotient_split(int ambient, const Subspace& sub) {
  if (sub.ambient != ambient) throw std::invalid_argument("quotient_split: ambient mismatch");
  QuotientSplit q;
  q.sub = sub;
  std::size_t p = 0;
  for (int r = 0; r < ambient; ++r) {
    if (p < sub.pivots.size() && sub.pivots[p] == r)
      ++p;
    else
      q.complement_rows.push_back(r);
  }
  int qd = static_cast<int>(q.complement_rows.size());
  q.inclusion = Matrix(ambient, qd);
  for (int j = 0; j < qd; ++j) q.inclusion.at(q.complement_rows[j], j) = Scalar(1);
  if (ambient == 0) {
    q.projection = Matrix(0, 0);
    return q;
  }
  Matrix A = sub.basis.hcat(q.inclusion);
  Matrix Ainv = inverse(A);
  std::vector<int> bottom;
  for (int r = sub.dim(); r < ambient; ++r) bottom.push_back(r);
  q.projection = Ainv.take_rows(bottom);
  return q;
}

Subspace complement_in(const Subspace& big, const Subspace& sub) {
  if (!subspace_leq(sub, big)) throw std::invalid_argument("complement_in: not a subspace");
  auto coords = coords_in(big, sub.basis);
  Subspace inner = make_subspace(big.dim(), *coords);
  QuotientSplit q = quotient_split(big.dim(), inner);
  return make_subspace(big.ambient, big.basis * q.inclusion);
}

namespace {

// dst += c * src for sorted sparse rows
SRow row_axpy(const SRow& dst, const Scalar& c, const SRow& src) {
  SRow out;
  out.reserve(dst.size() + src.size());
  std::size_t i = 0, j = 0;
  while (i < dst.size() || j < src.size()) {
    if (j == src.size() || (i < dst.size() && dst[i].first < src[j].first)) {
      out.push_back(dst[i++]);
    } else if (i == dst.size() || src[j].first < dst[i].first) {
      Scalar v = c * src[j].second;
      if (!v.is_zero()) out.push_back({src[j].first, std::move(v)});
      ++j;
    } else {
      Scalar v = dst[i].second + c * src[j].second;
      if (!v.is_zero()) out.push_back({dst[i].first, std::move(v)});
      ++i;
      ++j;
    }
  }
  return out;
}

Scalar row_entry(const SRow& r, int col) {
  auto it = std::lower_bound(r.begin(), r.end(), col,
                             [](const std::pair<int, Scalar>& p, int c) { return p.first < c; });
  if (it != r.end() && it->first == col) return it->second;
  return Scalar(0);
}

}  // namespace

SparseEchelon sparse_rref(std::vector<SRow> rows, int ncols) {
  // forward elimination with leading-column buckets
  std::vector<std::vector<int>> bucket(ncols);
  for (std::size_t r = 0; r < rows.size(); ++r)
    if (!rows[r].empty()) bucket[rows[r][0].first].push_back(static_cast<int>(r));
  SparseEchelon out;
  for (int c = 0; c < ncols; ++c) {
    // pick the first still-valid row leading at c
    int prow = -1;
    for (int cand : bucket[c]) {
      if (!rows[cand].empty() && rows[cand][0].first == c) {
        prow = cand;
        break;
      }
    }
    if (prow < 0) continue;
    // normalize
    Scalar inv = rows[prow][0].second.inv();
    if (!inv.is_one())
      for (auto& [col, v] : rows[prow]) v *= inv;
    // eliminate from the other rows leading at c
    for (int cand : bucket[c]) {
      if (cand == prow || rows[cand].empty() || rows[cand][0].first != c) continue;
      Scalar f = -rows[cand][0].second;
      rows[cand] = row_axpy(rows[cand], f, rows[prow]);
      if (!rows[cand].empty()) bucket[rows[cand][0].first].push_back(cand);
    }
    out.rows.push_back(std::move(rows[prow]));
    rows[prow].clear();
    out.pivots.push_back(c);
  }
  // backward pass: full reduction above each pivot
  for (int k = static_cast<int>(out.pivots.size()) - 1; k >= 0; --k) {
    int pc = out.pivots[k];
    for (int r = 0; r < k; ++r) {
      Scalar f = row_entry(out.rows[r], pc);
      if (f.is_zero()) continue;
      out.rows[r] = row_axpy(out.rows[r], -f, out.rows[k]);
    }
  }
  return out;
}

Matrix sparse_kernel_basis(const std::vector<SparseVec>& cols, int nrows) {
  int ncols = static_cast<int>(cols.size());
  // transpose columns into sparse rows
  std::vector<SRow> rows(nrows);
  for (int c = 0; c < ncols; ++c)
    for (const auto& [r, v] : cols[c]) rows[r].push_back({c, v});
  SparseEchelon e = sparse_rref(std::move(rows), ncols);
  std::vector<int> free_cols;
  {
    std::size_t p = 0;
    for (int c = 0; c < ncols; ++c) {
      if (p < e.pivots.size() && e.pivots[p] == c)
        ++p;
      else
        free_cols.push_back(c);
    }
  }
  Matrix K(ncols, static_cast<int>(free_cols.size()));
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    int f = free_cols[j];
    K.at(f, static_cast<int>(j)) = Scalar(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      Scalar v = row_entry(e.rows[r], f);
      if (!v.is_zero()) K.at(e.pivots[r], static_cast<int>(j)) = -v;
    }
  }
  return K;
}

int sparse_rank(const std::vector<SparseVec>& cols, int nrows) {
  std::vector<SRow> rows(nrows);
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto& [r, v] : cols[c]) rows[r].push_back({static_cast<int>(c), v});
  return static_cast<int>(sparse_rref(std::move(rows), static_cast<int>(cols.size())).pivots.size());
}

}  // namespace forge
