#pragma once

// Dense exact matrices over Q(i) with fully canonical echelon-based operations.
// Every routine here is deterministic: the same input bytes give the same
// output bytes, with no pivoting heuristics beyond "first nonzero".

#include "forge/scalar.hpp"

#include <map>
#include <optional>
#include <vector>

namespace forge {

struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<Scalar> a;  // row-major

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}

  static Matrix identity(int n);

  Scalar& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  const Scalar& at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }

  bool is_zero() const;
  Matrix transpose() const;
  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix scaled(const Scalar& c) const;
  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }

  Matrix hcat(const Matrix& o) const;  // [this | o]
  Matrix vcat(const Matrix& o) const;  // [this ; o]
  Matrix col(int c) const;
  Matrix take_cols(const std::vector<int>& idx) const;
  Matrix take_rows(const std::vector<int>& idx) const;
};

// Sparse column vector used when assembling big structured matrices.
using SparseVec = std::map<int, Scalar>;

void sv_axpy(SparseVec& dst, const Scalar& c, const SparseVec& src);
void sv_add(SparseVec& dst, int index, const Scalar& c);
Matrix sv_to_col(const SparseVec& v, int dim);
SparseVec col_to_sv(const Matrix& m, int c);
Matrix cols_from_sv(const std::vector<SparseVec>& vs, int dim);
SparseVec sv_scaled(const SparseVec& v, const Scalar& c);

struct Echelon {
  Matrix R;                 // reduced row echelon form
  std::vector<int> pivots;  // pivot column of each nonzero row, strictly increasing
};

Echelon rref(const Matrix& m);
int rank(const Matrix& m);

// Canonical kernel basis, one column per free coordinate of rref(m), ordered by
// ascending free coordinate; the free coordinate carries entry 1.
Matrix kernel_basis(const Matrix& m);

// Canonical column-space basis: transpose of the nonzero rows of rref(m^T).
Matrix image_basis(const Matrix& m);

// Particular solution of m*x = b (columns of b solved independently, free
// coordinates set to zero); nullopt if any column is inconsistent.
std::optional<Matrix> solve(const Matrix& m, const Matrix& b);

// Inverse of a square invertible matrix; throws std::domain_error otherwise.
Matrix inverse(const Matrix& m);

// A subspace of Q(i)^ambient, stored as the canonical reduced column echelon
// basis (computed via rref of the transpose), pivot rows strictly increasing.
struct Subspace {
  int ambient = 0;
  Matrix basis;             // ambient x dim, canonical
  std::vector<int> pivots;  // leading row of each basis column

  int dim() const { return basis.cols; }
};

Subspace make_subspace(int ambient, const Matrix& spanning_cols);
Subspace zero_subspace(int ambient);
Subspace full_subspace(int ambient);
Subspace sum(const Subspace& u, const Subspace& w);
Subspace intersect(const Subspace& u, const Subspace& w);
bool contains(const Subspace& u, const Matrix& vecs);
bool subspace_leq(const Subspace& u, const Subspace& w);
bool subspace_eq(const Subspace& u, const Subspace& w);

// Express the columns of vecs in the subspace basis; nullopt if not contained.
std::optional<Matrix> coords_in(const Subspace& u, const Matrix& vecs);

// Canonical complement and projection for ambient/sub: the complement is
// spanned by the standard basis vectors at non-pivot rows of sub, and
// projection is the corresponding block of [sub_basis | complement]^{-1}, so
// projection∘inclusion = id and projection∘sub = 0.
struct QuotientSplit {
  Subspace sub;
  std::vector<int> complement_rows;  // ambient indices of complement coordinates
  Matrix inclusion;                  // ambient x q
  Matrix projection;                 // q x ambient
};

QuotientSplit quotient_split(int ambient, const Subspace& sub);

// Canonical complement of a subspace inside a larger subspace of the ambient
// space (sub must be contained in big): complement columns are big-basis
// combinations, chosen canonically via the quotient construction inside big's
// coordinates.
Subspace complement_in(const Subspace& big, const Subspace& sub);

// ---- sparse elimination ----
// The reduced row echelon form is unique, so the sparse routines agree
// bit-for-bit with the dense ones; they only change the cost profile.

using SRow = std::vector<std::pair<int, Scalar>>;  // sorted by column

struct SparseEchelon {
  std::vector<SRow> rows;   // fully reduced, ordered by pivot column
  std::vector<int> pivots;  // strictly increasing
};

SparseEchelon sparse_rref(std::vector<SRow> rows, int ncols);

// Canonical kernel basis of the matrix whose COLUMNS are `cols` (each a sparse
// vector of length nrows); identical to kernel_basis of the dense matrix.
Matrix sparse_kernel_basis(const std::vector<SparseVec>& cols, int nrows);

// Rank of the same matrix.
int sparse_rank(const std::vector<SparseVec>& cols, int nrows);

}  // namespace forge
