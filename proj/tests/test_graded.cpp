#include "doctest.h"
#include "forge/graded.hpp"
#include "forge/testrng.hpp"

using namespace forge;

namespace {

GradedSpace space_of(std::vector<std::pair<int, std::string>> b) { return GradedSpace::make(b); }

GradedSpace random_space(TestRng& rng, int max_dim, int min_deg, int max_deg) {
  int n = 1 + static_cast<int>(rng.next_index(max_dim));
  std::vector<std::pair<int, std::string>> b;
  for (int k = 0; k < n; ++k) {
    int d = min_deg + static_cast<int>(rng.next_index(max_deg - min_deg + 1));
    b.push_back({d, "g" + std::to_string(k)});
  }
  return GradedSpace::make(b);
}

}  // namespace

TEST_CASE("flat order is (degree, name) and duplicate names are rejected") {
  GradedSpace V = space_of({{2, "b"}, {1, "z"}, {1, "a"}, {2, "c"}});
  CHECK(V.names == std::vector<std::string>{"a", "z", "b", "c"});
  CHECK(V.degrees == std::vector<int>{1, 1, 2, 2});
  CHECK_THROWS(space_of({{1, "x"}, {2, "x"}}));
}

TEST_CASE("permutation signs: frozen convention cases") {
  // identity permutation
  CHECK(koszul_sign({0, 1}, {1, 1}) == Scalar(1));
  // swap of two degree-1 factors under the exterior convention: odd factors
  // commute, (-1)*(-1)^(1*1) = +1
  CHECK(koszul_sign({1, 0}, {1, 1}) == Scalar(1));
  // swap of a degree-0 and a degree-1 factor, exterior convention: -1
  CHECK(koszul_sign({1, 0}, {0, 1}) == Scalar(-1));
  // symmetric convention: two odd factors anticommute
  CHECK(power_sign(PowerKind::symmetric, {1, 0}, {1, 1}) == Scalar(-1));
  // symmetric convention: even factors commute
  CHECK(power_sign(PowerKind::symmetric, {1, 0}, {0, 2}) == Scalar(1));
}

TEST_CASE("power dimensions: frozen counting cases") {
  GradedSpace even3 = space_of({{0, "x"}, {0, "y"}, {0, "z"}});
  GradedSpace odd2 = space_of({{1, "u"}, {1, "v"}});
  GradedSpace even2 = space_of({{0, "x"}, {0, "y"}});

  CHECK(power_space(even3, PowerKind::exterior, 0).dim() == 1);
  CHECK(power_space(even3, PowerKind::exterior, 2).dim() == 3);
  CHECK(power_space(odd2, PowerKind::exterior, 2).dim() == 3);  // odd factors symmetrize
  CHECK(power_space(even2, PowerKind::symmetric, 1).dim() == 2);
  CHECK(power_space(even2, PowerKind::symmetric, 2).dim() == 3);
  CHECK(power_space(odd2, PowerKind::symmetric, 2).dim() == 1);  // odd factors antisymmetrize
}

TEST_CASE("power dimensions match the generating-function count") {
  TestRng rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    GradedSpace V = random_space(rng, 5, 0, 3);
    for (int arity = 0; arity <= 3; ++arity)
      for (PowerKind kind : {PowerKind::exterior, PowerKind::symmetric})
        CHECK(power_space(V, kind, arity).dim() == power_dim_formula(V, kind, arity));
  }
}

TEST_CASE("windowed enumeration agrees with filtering the full enumeration") {
  TestRng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    GradedSpace V = random_space(rng, 5, 0, 3);
    PowerSpace full = power_space(V, PowerKind::exterior, 3);
    PowerSpace win = power_space_window(V, PowerKind::exterior, 3, 2, 4);
    std::vector<std::vector<int>> expect;
    for (int m = 0; m < full.dim(); ++m)
      if (full.mono_degree[m] >= 2 && full.mono_degree[m] <= 4) expect.push_back(full.monos[m]);
    CHECK(win.monos == expect);
  }
}

TEST_CASE("canonicalize: repetition rules and sign coherence") {
  GradedSpace V = space_of({{0, "e"}, {1, "o"}, {2, "t"}});
  int e = V.find("e"), o = V.find("o"), t = V.find("t");
  // even repeats vanish in exterior powers, odd repeats in symmetric powers
  CHECK(canonicalize(V, PowerKind::exterior, {e, e}).coeff.is_zero());
  CHECK(canonicalize(V, PowerKind::exterior, {t, t}).coeff.is_zero());
  CHECK(!canonicalize(V, PowerKind::exterior, {o, o}).coeff.is_zero());
  CHECK(canonicalize(V, PowerKind::symmetric, {o, o}).coeff.is_zero());
  CHECK(!canonicalize(V, PowerKind::symmetric, {e, e}).coeff.is_zero());
  // swapping e (deg 0) with o (deg 1): exterior sign -1, symmetric sign +1
  CHECK(canonicalize(V, PowerKind::exterior, {o, e}).coeff == Scalar(-1));
  CHECK(canonicalize(V, PowerKind::symmetric, {o, e}).coeff == Scalar(1));

  // associativity of signed normalization on random triples
  TestRng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    GradedSpace W = random_space(rng, 6, 0, 3);
    std::vector<int> w1{static_cast<int>(rng.next_index(W.dim()))};
    std::vector<int> w2{static_cast<int>(rng.next_index(W.dim()))};
    std::vector<int> w3{static_cast<int>(rng.next_index(W.dim()))};
    for (PowerKind kind : {PowerKind::exterior, PowerKind::symmetric}) {
      // ((w1 w2) w3) vs (w1 (w2 w3)): canonicalize pairwise first, then append
      Word left = canonicalize(W, kind, {w1[0], w2[0]});
      Word right = canonicalize(W, kind, {w2[0], w3[0]});
      Word lw = left.coeff.is_zero()
                    ? Word{Scalar(0), {}}
                    : canonicalize(W, kind, {left.idx[0], left.idx[1], w3[0]}, left.coeff);
      Word rw = right.coeff.is_zero()
                    ? Word{Scalar(0), {}}
                    : canonicalize(W, kind, {w1[0], right.idx[0], right.idx[1]}, right.coeff);
      if (lw.coeff.is_zero() || rw.coeff.is_zero()) {
        // one associate vanished: the other must vanish too, or normalize to
        // zero because of a repeated factor elsewhere
        Word direct = canonicalize(W, kind, {w1[0], w2[0], w3[0]});
        CHECK(lw.coeff == direct.coeff);
        CHECK(rw.coeff == direct.coeff);
      } else {
        CHECK(lw.coeff == rw.coeff);
        CHECK(lw.idx == rw.idx);
      }
    }
  }
}

TEST_CASE("derivation extension: frozen small cases") {
  // scalar c acting on a one-dimensional even space, symmetric cube: acts by 3c
  GradedSpace V = space_of({{0, "x"}});
  Matrix f(1, 1);
  f.at(0, 0) = Scalar(Rational(5, 7));
  GradedMap fm = make_graded_map(V, V, 0, f);
  PowerSpace cube = power_space(V, PowerKind::symmetric, 3);
  REQUIRE(cube.dim() == 1);
  Matrix ext = derivation_extension(fm, cube, cube);
  CHECK(ext.at(0, 0) == Scalar(Rational(15, 7)));

  // identity extends to arity * id; zero extends to zero
  GradedSpace W = space_of({{1, "a"}, {1, "b"}, {2, "c"}});
  PowerSpace p2 = power_space(W, PowerKind::exterior, 2);
  GradedMap idm = make_graded_map(W, W, 0, Matrix::identity(3));
  CHECK(derivation_extension(idm, p2, p2) == Matrix::identity(p2.dim()).scaled(Scalar(2)));
  GradedMap zm = zero_graded_map(W, W, 1);
  CHECK(derivation_extension(zm, p2, p2).is_zero());
}

TEST_CASE("derivation extension of a square-zero odd map is square-zero") {
  // d(a) = c with |d| = 1: a,b odd (deg 1), c even (deg 2)
  GradedSpace V = space_of({{1, "a"}, {1, "b"}, {2, "c"}});
  int a = V.find("a"), c = V.find("c");
  Matrix d(3, 3);
  d.at(c, a) = Scalar(1);
  GradedMap dm = make_graded_map(V, V, 1, d);
  for (PowerKind kind : {PowerKind::exterior, PowerKind::symmetric}) {
    for (int arity = 2; arity <= 3; ++arity) {
      PowerSpace p = power_space(V, kind, arity);
      Matrix ext = derivation_extension(dm, p, p);
      CHECK((ext * ext).is_zero());
    }
  }
}

TEST_CASE("derivation extension respects graded commutators") {
  // [ext f, ext g] = ext [f, g] with graded commutators, random degree-0/1 maps
  TestRng rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    GradedSpace V = random_space(rng, 4, 1, 3);
    int n = V.dim();
    auto rand_map = [&](int deg) {
      Matrix m(n, n);
      for (int r = 0; r < n; ++r)
        for (int col = 0; col < n; ++col)
          if (V.degree(r) == V.degree(col) + deg) m.at(r, col) = rng.small_scalar();
      return make_graded_map(V, V, deg, m);
    };
    int df = static_cast<int>(rng.next_index(2));
    int dg = static_cast<int>(rng.next_index(2));
    GradedMap f = rand_map(df), g = rand_map(dg);
    Matrix fg = f.mat * g.mat;
    Matrix gf = g.mat * f.mat;
    Matrix comm = (df * dg) % 2 == 0 ? fg - gf : fg + gf;
    GradedMap cm = make_graded_map(V, V, df + dg, comm);
    for (PowerKind kind : {PowerKind::exterior, PowerKind::symmetric}) {
      PowerSpace p = power_space(V, kind, 2);
      if (p.dim() == 0) continue;
      Matrix ef = derivation_extension(f, p, p);
      Matrix eg = derivation_extension(g, p, p);
      Matrix lhs = (df * dg) % 2 == 0 ? ef * eg - eg * ef : ef * eg + eg * ef;
      CHECK(lhs == derivation_extension(cm, p, p));
    }
  }
}

TEST_CASE("multiplication and unshuffle are mutually consistent") {
  TestRng rng(31337);
  for (int trial = 0; trial < 10; ++trial) {
    GradedSpace V = random_space(rng, 4, 1, 2);
    for (PowerKind kind : {PowerKind::exterior, PowerKind::symmetric}) {
      PowerSpace p1 = power_space(V, kind, 1);
      PowerSpace p2 = power_space(V, kind, 2);
      PowerSpace p3 = power_space(V, kind, 3);
      if (p3.dim() == 0) continue;
      // coassociativity of the position-subset splitting:
      // (split 1,1 o first leg of split 1,2) == (split of 2,1 then split the 2)
      auto s12 = unshuffle(p3, p1, p2);
      auto s21 = unshuffle(p3, p2, p1);
      auto s11_of_p2 = unshuffle(p2, p1, p1);
      for (int m = 0; m < p3.dim(); ++m) {
        // both iterated splittings land in p1 x p1 x p1; compare coefficients
        std::map<std::tuple<int, int, int>, Scalar> left, right;
        for (auto& [i1, i2, c] : s12[m])
          for (auto& [j1, j2, c2] : s11_of_p2[i2]) left[{i1, j1, j2}] += c * c2;
        for (auto& [i1, i2, c] : s21[m])
          for (auto& [j1, j2, c2] : s11_of_p2[i1]) right[{j1, j2, i2}] += c * c2;
        for (auto& [key, val] : left) CHECK(val == right[key]);
        for (auto& [key, val] : right) CHECK(val == left[key]);
      }
      // multiply then split detects the product monomial with the right sign:
      // <unshuffle(a*b), dual_a ⊗ dual_b> accumulates to the sign structure of
      // the product; verified via a round trip on single monomials
      for (int ia = 0; ia < p1.dim(); ++ia)
        for (int ib = 0; ib < p2.dim(); ++ib) {
          SparseVec a{{ia, Scalar(1)}}, b{{ib, Scalar(1)}};
          SparseVec prod = power_multiply(p1, a, p2, b, p3);
          if (prod.empty()) continue;
          REQUIRE(prod.size() == 1);
          auto [mi, coeff] = *prod.begin();
          // the (ia, ib) entry of the splitting of mi must be coeff * k where
          // k counts the equal splittings (multiplicity), k >= 1
          Scalar found(0);
          for (auto& [i1, i2, c] : s12[mi])
            if (i1 == ia && i2 == ib) found = c;
          CHECK(!found.is_zero());
          Scalar ratio = found / coeff;
          CHECK(ratio.is_real());
          CHECK(ratio.re > 0);
        }
    }
  }
}
