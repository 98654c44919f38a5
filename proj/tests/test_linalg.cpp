#include "doctest.h"
#include "forge/matrix.hpp"
#include "forge/testrng.hpp"

using namespace forge;

namespace {

Matrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r ? static_cast<int>(rows.begin()->size()) : 0;
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (const auto& x : row) m.at(i, j++) = x;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("scalar field arithmetic is exact") {
  Scalar a(Rational(2, 3), Rational(-1, 5));
  Scalar b(Rational(-7, 4), Rational(1, 2));
  CHECK((a * b) / b == a);
  CHECK((a + b) - b == a);
  CHECK(a * a.inv() == Scalar(1));
  CHECK(Scalar::i() * Scalar::i() == Scalar(-1));
  CHECK(Scalar(Rational(1, 2), Rational(1, 3)).str() == "1/2+1/3*i");
  CHECK(Scalar(Rational(0), Rational(-1)).str() == "-i");
  CHECK(parse_rational("-14/21").value() == Rational(-2, 3));
  CHECK(!parse_rational("1/0").has_value());
  CHECK(!parse_rational("2.5").has_value());
}

TEST_CASE("rref canonical form and rank") {
  Matrix m = from_rows({{Scalar(1), Scalar(2), Scalar(3)},
                        {Scalar(2), Scalar(4), Scalar(6)},
                        {Scalar(1), Scalar(0), Scalar(1)}});
  Echelon e = rref(m);
  CHECK(e.pivots == std::vector<int>{0, 1});
  CHECK(rank(m) == 2);
  // rref is idempotent.
  CHECK(rref(e.R).R == e.R);
}

TEST_CASE("kernel of [[1, i]] is spanned by (-i, 1)") {
  Matrix m(1, 2);
  m.at(0, 0) = Scalar(1);
  m.at(0, 1) = Scalar::i();
  Matrix K = kernel_basis(m);
  REQUIRE(K.cols == 1);
  CHECK(K.at(0, 0) == -Scalar::i());
  CHECK(K.at(1, 0) == Scalar(1));
  CHECK((m * K).is_zero());
}

TEST_CASE("rank-nullity and solve on random matrices") {
  TestRng rng(12345);
  for (int trial = 0; trial < 25; ++trial) {
    int r = 1 + static_cast<int>(rng.next_index(5));
    int c = 1 + static_cast<int>(rng.next_index(5));
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) m.at(i, j) = rng.small_scalar();
    Matrix K = kernel_basis(m);
    CHECK(rank(m) + K.cols == c);
    CHECK((m * K).is_zero());
    // m * x is always solvable and the particular solution solves it.
    Matrix x(c, 1);
    for (int j = 0; j < c; ++j) x.at(j, 0) = rng.small_scalar();
    Matrix b = m * x;
    auto sol = solve(m, b);
    REQUIRE(sol.has_value());
    CHECK(m * *sol == b);
    // image basis spans the same column space.
    Matrix img = image_basis(m);
    CHECK(img.cols == rank(m));
    CHECK(solve(img, m).has_value());
    CHECK(solve(m, img).has_value());
  }
}

TEST_CASE("inverse") {
  TestRng rng(999);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng.next_index(4));
    Matrix m(n, n);
    do {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = rng.small_scalar();
    } while (rank(m) < n);
    CHECK(m * inverse(m) == Matrix::identity(n));
  }
}

TEST_CASE("subspace lattice operations") {
  TestRng rng(777);
  for (int trial = 0; trial < 15; ++trial) {
    int n = 2 + static_cast<int>(rng.next_index(4));
    Matrix A(n, 1 + static_cast<int>(rng.next_index(3)));
    Matrix B(n, 1 + static_cast<int>(rng.next_index(3)));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < A.cols; ++j) A.at(i, j) = rng.small_scalar();
      for (int j = 0; j < B.cols; ++j) B.at(i, j) = rng.small_scalar();
    }
    Subspace u = make_subspace(n, A);
    Subspace w = make_subspace(n, B);
    Subspace s = sum(u, w);
    Subspace x = intersect(u, w);
    // modular dimension identity
    CHECK(s.dim() + x.dim() == u.dim() + w.dim());
    CHECK(subspace_leq(x, u));
    CHECK(subspace_leq(x, w));
    CHECK(subspace_leq(u, s));
    // canonical: recomputing from a shuffled spanning set gives identical bytes
    Matrix A2 = A.hcat(A.col(0));
    CHECK(subspace_eq(make_subspace(n, A2), u));
  }
}

TEST_CASE("quotient split: projection kills sub, complement maps isomorphically") {
  Matrix v(3, 1);
  v.at(0, 0) = Scalar(1);
  v.at(1, 0) = Scalar(1);
  Subspace sub = make_subspace(3, v);
  QuotientSplit q = quotient_split(3, sub);
  REQUIRE(q.complement_rows == std::vector<int>{1, 2});
  CHECK((q.projection * sub.basis).is_zero());
  CHECK(q.projection * q.inclusion == Matrix::identity(2));
  TestRng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng.next_index(5));
    Matrix A(n, 1 + static_cast<int>(rng.next_index(n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < A.cols; ++j) A.at(i, j) = rng.small_scalar();
    Subspace s = make_subspace(n, A);
    QuotientSplit qq = quotient_split(n, s);
    CHECK((qq.projection * s.basis).is_zero());
    CHECK(qq.projection * qq.inclusion == Matrix::identity(n - s.dim()));
  }
}

TEST_CASE("sparse elimination agrees bit-for-bit with dense") {
  TestRng rng(60601);
  for (int trial = 0; trial < 30; ++trial) {
    int r = 1 + static_cast<int>(rng.next_index(7));
    int c = 1 + static_cast<int>(rng.next_index(7));
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j)
        if (rng.next_index(3) != 0) m.at(i, j) = rng.small_scalar();
    std::vector<SparseVec> cols;
    for (int j = 0; j < c; ++j) cols.push_back(col_to_sv(m, j));
    CHECK(sparse_kernel_basis(cols, r) == kernel_basis(m));
    CHECK(sparse_rank(cols, r) == rank(m));
    // reduced rows match the dense rref
    Echelon de = rref(m);
    SparseEchelon se = [&] {
      std::vector<SRow> rows(r);
      for (int j = 0; j < c; ++j)
        for (const auto& [i, v] : cols[j]) rows[i].push_back({j, v});
      return sparse_rref(std::move(rows), c);
    }();
    REQUIRE(se.pivots == de.pivots);
    for (std::size_t k = 0; k < se.pivots.size(); ++k)
      for (int j = 0; j < c; ++j) {
        Scalar want = de.R.at(static_cast<int>(k), j);
        Scalar got(0);
        for (const auto& [col, v] : se.rows[k])
          if (col == j) got = v;
        CHECK(got == want);
      }
  }
}

TEST_CASE("complement inside a bigger subspace") {
  TestRng rng(4242);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 3 + static_cast<int>(rng.next_index(3));
    Matrix A(n, 3);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < 3; ++j) A.at(i, j) = rng.small_scalar();
    Subspace big = make_subspace(n, A);
    Subspace sub = make_subspace(n, A.col(0));
    Subspace c = complement_in(big, sub);
    CHECK(subspace_leq(c, big));
    CHECK(intersect(c, sub).dim() == 0);
    CHECK(subspace_eq(sum(c, sub), big));
  }
}
