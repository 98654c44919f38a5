#include "forge/io.hpp"
#include "forge/jacobi.hpp"
#include "forge/models.hpp"

#include "doctest.h"

using namespace forge;

TEST_CASE("models: every corpus bundle validates") {
  for (const ModelBundle& b : model_corpus()) {
    CAPTURE(b.name);
    BundleCheck c = bundle_check(b);
    for (auto& [name, v] : c.items) {
      CAPTURE(name);
      CHECK(v);
    }
    CHECK(c.ok());
    CHECK(c.sharp_ok);
    CHECK(c.first_fail() == "");
  }
}

TEST_CASE("models: corpus names are unique and stable") {
  std::vector<std::string> expect = {"abelian3", "obstructed2", "torus3",  "k3-model", "blockcy1",
                                     "blockcy2", "blockcy3",    "modecy",  "clemens",  "pairdemo"};
  std::vector<ModelBundle> all = model_corpus();
  REQUIRE(all.size() == expect.size());
  for (size_t k = 0; k < all.size(); ++k) CHECK(all[k].name == expect[k]);
}

TEST_CASE("models: broken fixture fails with a named item") {
  ModelBundle b = model_broken();
  BundleCheck c = bundle_check(b);
  CHECK(!c.ok());
  CHECK(c.first_fail() == "wedge-commutative");
}

TEST_CASE("models: clemens contraction data is nontrivial") {
  ModelBundle b = model_clemens();
  int f = b.dgla.g.find("f");
  REQUIRE(f >= 0);
  // the degree-two contraction is a nonzero matrix...
  CHECK(!b.contractions[0].table[f].is_zero());
  // ...whose value on the second degree-zero generator of the upper module is
  // exactly the differential of a lower-module generator (an exact element)
  const RawModule* A = b.find_module("upper");
  const RawModule* B = b.find_module("lower");
  REQUIRE(A != nullptr);
  REQUIRE(B != nullptr);
  int a0p = A->E.find("a0p"), b1q = B->E.find("b1q");
  Matrix image = b.contractions[0].table[f].col(a0p);
  Matrix exact = B->dE.col(b1q);
  CHECK(image == exact);
  CHECK(!image.is_zero());
}

TEST_CASE("models: pair bundle feeds the two-term cone") {
  ModelBundle b = model_pairdemo();
  DGLA g = bundle_dgla(b);
  GModule h = bundle_module(b, g, "h");
  DGLA cone = pair_cone(g, h, b.pair.d);
  // the derivation is injective, so the cone has no degree-zero cohomology
  // and a one-dimensional degree-one part
  CHECK(dgla_h_dim(cone, 0) == 0);
  CHECK(dgla_h_dim(cone, 1) == 1);
}

TEST_CASE("io: round trip is the identity on every corpus bundle") {
  std::vector<ModelBundle> all = model_corpus();
  all.push_back(model_broken());
  for (const ModelBundle& b : all) {
    CAPTURE(b.name);
    std::string text = bundle_to_json(b);
    ModelBundle back = bundle_from_json(text);
    std::string text2 = bundle_to_json(back);
    CHECK(text == text2);  // byte-identical re-serialization
    CHECK(back.name == b.name);
    CHECK(back.has_dgla == b.has_dgla);
    CHECK(back.has_cy == b.has_cy);
    CHECK(back.has_pair == b.has_pair);
    if (b.has_dgla) {
      CHECK(back.dgla.g == b.dgla.g);
      CHECK(back.dgla.bracket == b.dgla.bracket);
      CHECK(back.dgla.delta == b.dgla.delta);
    }
    REQUIRE(back.modules.size() == b.modules.size());
    for (size_t k = 0; k < b.modules.size(); ++k) {
      CHECK(back.modules[k].name == b.modules[k].name);
      CHECK(back.modules[k].E == b.modules[k].E);
      CHECK(back.modules[k].dE == b.modules[k].dE);
      CHECK(back.modules[k].act == b.modules[k].act);
    }
    REQUIRE(back.contractions.size() == b.contractions.size());
    for (size_t k = 0; k < b.contractions.size(); ++k) {
      CHECK(back.contractions[k].from == b.contractions[k].from);
      CHECK(back.contractions[k].to == b.contractions[k].to);
      CHECK(back.contractions[k].table == b.contractions[k].table);
    }
    if (b.has_pair) {
      CHECK(back.pair.module == b.pair.module);
      CHECK(back.pair.d == b.pair.d);
    }
    if (b.has_cy) {
      CHECK(back.cy.n == b.cy.n);
      CHECK(back.cy.names == b.cy.names);
      CHECK(back.cy.p == b.cy.p);
      CHECK(back.cy.q == b.cy.q);
      CHECK(back.cy.unit == b.cy.unit);
      CHECK(back.cy.wedge == b.cy.wedge);
      CHECK(back.cy.dpar == b.cy.dpar);
      CHECK(back.cy.dbar == b.cy.dbar);
      CHECK(back.cy.lam == b.cy.lam);
      CHECK(back.cy.green == b.cy.green);
      CHECK(back.cy.has_dbar_adj == b.cy.has_dbar_adj);
      CHECK(back.cy.dbar_adj == b.cy.dbar_adj);
      CHECK(back.cy.phi == b.cy.phi);
      CHECK(back.cy.frame == b.cy.frame);
      REQUIRE(back.cy.tangent.size() == b.cy.tangent.size());
      for (size_t k = 0; k < b.cy.tangent.size(); ++k) {
        CHECK(back.cy.tangent[k].name == b.cy.tangent[k].name);
        CHECK(back.cy.tangent[k].q == b.cy.tangent[k].q);
        CHECK(back.cy.tangent[k].coeff == b.cy.tangent[k].coeff);
      }
      CHECK(back.cy.harmonic == b.cy.harmonic);
      CHECK(back.cy.trace == b.cy.trace);
    }
  }
}

TEST_CASE("io: digest is stable and input-sensitive") {
  // frozen reference: FNV-1a of the empty string and of "a"
  CHECK(fnv1a64_hex("") == "cbf29ce484222325");
  CHECK(fnv1a64_hex("a") == "af63dc4c8601ec8c");
  std::string t1 = bundle_to_json(model_torus3());
  std::string t2 = bundle_to_json(model_torus3());
  CHECK(fnv1a64_hex(t1) == fnv1a64_hex(t2));
  CHECK(fnv1a64_hex(t1) != fnv1a64_hex(bundle_to_json(model_k3())));
}

TEST_CASE("io: malformed files are rejected with a model-file message") {
  auto rejects = [](const std::string& text) {
    CHECK_THROWS_WITH_AS(bundle_from_json(text), doctest::Contains("model file:"),
                         std::runtime_error);
  };
  rejects("not json at all");
  rejects("[]");
  rejects("{\"format\":\"forge-model/0\"}");
  rejects("{\"format\":\"forge-model/1\",\"field\":\"real\"}");
  rejects(
      "{\"format\":\"forge-model/1\",\"field\":\"gaussian_rational\",\"name\":\"x\"}");
  // out-of-range bracket index
  rejects(
      "{\"format\":\"forge-model/1\",\"field\":\"gaussian_rational\",\"name\":\"x\","
      "\"dgla\":{\"basis\":[[\"e\",1]],\"bracket\":[[0,5,[[0,[\"1\",\"0\"]]]]]}}");
  // basis out of canonical order
  rejects(
      "{\"format\":\"forge-model/1\",\"field\":\"gaussian_rational\",\"name\":\"x\","
      "\"dgla\":{\"basis\":[[\"e\",2],[\"f\",1]]}}");
  // unparsable rational
  rejects(
      "{\"format\":\"forge-model/1\",\"field\":\"gaussian_rational\",\"name\":\"x\","
      "\"dgla\":{\"basis\":[[\"e\",1]],\"delta\":{\"rows\":1,\"cols\":1,"
      "\"entries\":[[0,0,[\"one\",\"0\"]]]}}}");
}

TEST_CASE("io: polynomial models refuse to serialize") {
  ModelBundle b;
  b.name = "poly";
  b.has_cy = true;
  b.cy = cy_poly_torus(2, 4);
  CHECK_THROWS_AS(bundle_to_json(b), std::invalid_argument);
}
