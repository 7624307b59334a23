#include <random>

#include "doctest.h"
#include "gen.hpp"
#include "selfsim/complexes.hpp"

using namespace selfsim;

namespace {

FinCategory idem_monoid() {
  FinCategory c("idem");
  c.add_object("x");
  c.add_morphism("s", "x", "x");
  c.set_compose("s", "s", "s");
  c.seal();
  return c;
}

TableModule two_elem_module(const FinCategory& idem) {
  TableModule m("two", idem);
  m.add_element("m0", "x", "x");
  m.add_element("m1", "x", "x");
  m.set_lact("m0", "s", "m0");
  m.set_lact("m1", "s", "m0");
  m.set_ract("s", "m0", "m0");
  m.set_ract("s", "m1", "m1");
  m.seal();
  return m;
}

}  // namespace

TEST_CASE("depth-0 complexes are the base objects") {
  std::mt19937 rng(8001);
  FinCategory c = testgen::random_preorder_cat(rng, 5);
  IdentityModule m(c);
  auto cs = enumerate_complexes(m, 0);
  CHECK(cs.size() == static_cast<size_t>(c.n_objects()));
  for (const auto& cx : cs) CHECK(cx.depth() == 0);
}

TEST_CASE("empty module has only depth-0 complexes") {
  FinCategory idem = idem_monoid();
  TableModule empty("empty", idem);
  empty.seal();
  CHECK(enumerate_complexes(empty, 0).size() == 1);
  CHECK(enumerate_complexes(empty, 1).empty());
  CHECK(enumerate_complexes(empty, 3).empty());
}

TEST_CASE("complex counts and closure under module data") {
  FinCategory idem = idem_monoid();
  TableModule m = two_elem_module(idem);
  // One object, |M(x,x)| = 2: 2^n complexes at depth n.
  CHECK(enumerate_complexes(m, 1).size() == 2);
  CHECK(enumerate_complexes(m, 3).size() == 8);
  // Every element appears as the m_1 of some depth-1 complex.
  auto cs = enumerate_complexes(m, 1);
  std::set<long long> seen;
  for (const auto& c : cs) seen.insert(c.elems[0].code);
  CHECK(seen.size() == 2);
  // Deterministic lex order.
  auto again = enumerate_complexes(m, 3);
  CHECK(again == enumerate_complexes(m, 3));

  for (const auto& c : cs) {
    std::string why;
    CHECK(check_complex(m, c, &why));
  }
}

TEST_CASE("complex_to_string renders the chain") {
  FinCategory idem = idem_monoid();
  TableModule m = two_elem_module(idem);
  TruncatedComplex c(0);
  c.push(m.elem_ref("m0"));
  c.push(m.elem_ref("m1"));
  CHECK(complex_to_string(m, c) == "x -[m1]-> x -[m0]-> x");
}

TEST_CASE("morphism enumeration, identity and composition") {
  FinCategory idem = idem_monoid();
  TableModule m = two_elem_module(idem);
  auto cs = enumerate_complexes(m, 2);
  for (const auto& c : cs) {
    auto hs = enumerate_morphisms(m, c, c);
    bool has_id = false;
    for (const auto& h : hs) {
      std::string why;
      CHECK(check_squares(m, h, &why));
      if (h.comps == identity_morphism(idem, c).comps) has_id = true;
    }
    CHECK(has_id);
  }
  // Morphism enumeration agrees with brute-force square checking.
  for (const auto& s : cs)
    for (const auto& d : cs) {
      auto fast = enumerate_morphisms(m, s, d);
      int brute = 0;
      // 3 components, each in {id, s}.
      for (int bits = 0; bits < 8; ++bits) {
        ComplexMorphism h{s, d, {}};
        for (int i = 0; i < 3; ++i)
          h.comps.push_back(bits >> i & 1 ? idem.mor_ref("s") : idem.identity(0));
        if (check_squares(m, h)) ++brute;
      }
      CHECK(static_cast<int>(fast.size()) == brute);
    }
}

TEST_CASE("incompatible heads give no morphisms") {
  FinCategory disc("disc");
  disc.add_object("a");
  disc.add_object("b");
  disc.seal();
  TableModule m("m", disc);
  m.add_element("ma", "a", "a");
  m.add_element("mb", "b", "b");
  m.seal();
  TruncatedComplex ca(0), cb(1);
  ca.push(m.elem_ref("ma"));
  cb.push(m.elem_ref("mb"));
  CHECK(enumerate_morphisms(m, ca, cb).empty());
}

TEST_CASE("truncation") {
  FinCategory idem = idem_monoid();
  TableModule m = two_elem_module(idem);
  TruncatedComplex c(0);
  c.push(m.elem_ref("m0"));
  c.push(m.elem_ref("m1"));
  c.push(m.elem_ref("m0"));
  CHECK(truncate(c, 3) == c);
  CHECK(truncate(c, 0) == TruncatedComplex(0));
  CHECK(truncate(c, 2).elems.size() == 2);
  CHECK(truncate(truncate(c, 2), 1) == truncate(c, 1));
  CHECK_THROWS_AS(truncate(c, 4), depth_exceeded);
}

TEST_CASE("lazy complexes are truncation-coherent") {
  FinCategory idem = idem_monoid();
  TableModule m = two_elem_module(idem);
  // Alternate m0, m1 forever.
  LazyComplex lc(0, [&](const TruncatedComplex& c) {
    return m.elem_ref(c.depth() % 2 == 0 ? "m0" : "m1");
  });
  TruncatedComplex d3 = lc.at(3);
  CHECK(d3.depth() == 3);
  CHECK(lc.at(2) == truncate(lc.at(3), 2));
  CHECK(lc.at(1) == truncate(lc.at(2), 1));
  CHECK(m.elem_name(d3.elems[1]) == "m1");

  LazyComplex eager(truncate(d3, 2));
  CHECK(eager.at(2) == truncate(d3, 2));
  CHECK_THROWS_AS(eager.at(3), depth_exceeded);
}

TEST_CASE("resolution unfolds a coalgebra") {
  FinCategory idem = idem_monoid();
  IdentityModule idm(idem);
  FinSetFunctor x = representable(idem, 0);
  Coalgebra e;
  e.name = "unfold";
  e.module = &idm;
  e.carrier = &x;
  ElemRef id_elem{0, 0, idem.identity(0).code};
  ElemRef s_elem{0, 0, idem.mor_ref("s").code};
  // e(id) = (s, s), e(s) = (id, s): starting at id the chain is s, id, id, ...
  e.structure = {{{s_elem, {0, 1}}, {id_elem, {0, 1}}}};
  REQUIRE(e.validate().empty());

  Resolution r(e, 0, 0);
  TruncatedComplex c = r.complex().at(3);
  CHECK(idm.elem_name(c.elems[0]) == "s");
  CHECK(idm.elem_name(c.elems[1]) == "id:x");
  CHECK(idm.elem_name(c.elems[2]) == "id:x");
  auto tr = r.trace(3);
  REQUIRE(tr.size() == 4);
  CHECK(tr[0] == std::pair{0, 0});
  CHECK(tr[1] == std::pair{0, 1});
  CHECK(tr[2] == std::pair{0, 1});

  // Traces satisfy e(x_i) = class of (m_{i+1}, x_{i+1}).
  ApplyResult mx = apply_module(idm, x);
  for (int i = 0; i < 3; ++i) {
    auto [ai, xi] = tr[i];
    const auto& [sm, sx] = e.structure[ai][xi];
    CHECK(mx.cls(ai, c.elems[i], tr[i + 1].first, tr[i + 1].second) ==
          mx.cls(ai, sm, sx.first, sx.second));
  }

  // truncation coherence of the resolution complex
  CHECK(r.complex().at(1) == truncate(r.complex().at(3), 1));
}

TEST_CASE("materialized complex category is a valid category") {
  FinCategory idem = idem_monoid();
  TableModule m = two_elem_module(idem);
  FinCategory c1 = materialize_complex_category(m, 1);
  CHECK(c1.n_objects() == 2);
  CHECK(c1.validate().empty());
  FinCategory c2 = materialize_complex_category(m, 2);
  CHECK(c2.n_objects() == 4);
  CHECK(c2.validate().empty());
}

TEST_CASE("enumeration budget is honored") {
  FinCategory idem = idem_monoid();
  TableModule m = two_elem_module(idem);
  EnumBudget tiny;
  tiny.max_items = 5;
  CHECK_THROWS_AS(enumerate_complexes(m, 4, -1, &tiny), bound_exceeded);
}
