#include "doctest.h"

#include "selfsim/fincat.hpp"
#include "selfsim/lin.hpp"
#include "selfsim/module.hpp"

#include <algorithm>
#include <random>

using namespace selfsim;

namespace {

std::mt19937 rng(20260826);

int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

MorRef rand_mor(const LinOpCat& c, int a, int b) {
  auto h = c.hom(a, b);
  REQUIRE(!h.empty());
  return h[pick(static_cast<int>(h.size()))];
}

ElemRef rand_elem(const LinModule& m, int a, int b) {
  auto e = m.elems(a, b);
  REQUIRE(!e.empty());
  return e[pick(static_cast<int>(e.size()))];
}

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Strictly increasing = injective monotone = order embedding.
bool strictly_increasing(const std::vector<int>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] >= v[i]) return false;
  return true;
}

}  // namespace

TEST_CASE("linear orders: laws, hom counts, constructive cofiltering") {
  LinOpCat c(4);
  auto objs = c.objects();
  CHECK(objs == std::vector<int>({1, 2, 3, 4}));

  // Monotone maps b -> a are multisets of size b from a values.
  for (int a : objs)
    for (int b : objs)
      CHECK(static_cast<long long>(c.hom(a, b).size()) == binom(a + b - 1, b));

  for (int trial = 0; trial < 200; ++trial) {
    int a = objs[pick(4)], b = objs[pick(4)], d = objs[pick(4)], e = objs[pick(4)];
    MorRef f = rand_mor(c, a, b), g = rand_mor(c, b, d), h = rand_mor(c, d, e);
    CHECK(c.compose(c.identity(b), f) == f);
    CHECK(c.compose(f, c.identity(a)) == f);
    CHECK(c.compose(h, c.compose(g, f)) == c.compose(c.compose(h, g), f));
  }

  auto cof = is_cofiltered(c);
  INFO(cof.failure);
  CHECK(cof.ok);

  // The constructive span and fork agree with their contracts.
  for (int trial = 0; trial < 200; ++trial) {
    int a = objs[pick(4)], a2 = objs[pick(4)], b = objs[pick(4)];
    auto sp = c.span(a, a2);
    REQUIRE(sp.has_value());
    CHECK(sp->left.dst == a);
    CHECK(sp->right.dst == a2);
    CHECK(sp->left.src == sp->right.src);

    MorRef u = rand_mor(c, a, b), v = rand_mor(c, a, b);
    auto f = c.fork(u, v);
    REQUIRE(f.has_value());
    CHECK(c.compose(u, *f) == c.compose(v, *f));
  }
}

TEST_CASE("ordinal-product module: tables and action laws") {
  LinOpCat c(4);
  for (LinFunctor sel : {LinFunctor::kStarOmega, LinFunctor::kStarOmegaThenOne}) {
    LinModule m(c, sel, 3);
    int extra = sel == LinFunctor::kStarOmegaThenOne ? 1 : 0;
    for (int a : c.objects()) {
      CHECK(m.phi_size(a) == 3 * a + extra);
      for (int b : c.objects())
        CHECK(static_cast<long long>(m.elems(a, b).size()) ==
              binom(m.phi_size(a) + b - 1, b));
    }

    for (int trial = 0; trial < 200; ++trial) {
      auto objs = c.objects();
      int a = objs[pick(4)], a2 = objs[pick(4)], a3 = objs[pick(4)];
      int b = objs[pick(4)], b2 = objs[pick(4)], b3 = objs[pick(4)];
      ElemRef e = rand_elem(m, a, b);
      MorRef f = rand_mor(c, a2, a), f2 = rand_mor(c, a3, a2);
      MorRef g = rand_mor(c, b, b2), g2 = rand_mor(c, b2, b3);
      CHECK(m.lact(e, c.identity(a)) == e);
      CHECK(m.ract(c.identity(b), e) == e);
      CHECK(m.lact(m.lact(e, f), f2) == m.lact(e, c.compose(f, f2)));
      CHECK(m.ract(g2, m.ract(g, e)) == m.ract(c.compose(g2, g), e));
      CHECK(m.ract(g, m.lact(e, f)) == m.lact(m.ract(g, e), f));
    }
  }
}

TEST_CASE("ordinal-product module: flat witnesses at every object") {
  LinOpCat c(4);
  for (LinFunctor sel : {LinFunctor::kStarOmega, LinFunctor::kStarOmegaThenOne}) {
    LinModule m(c, sel, 2);
    EnumBudget budget;
    for (int a : c.objects()) {
      auto r = flat_check(m, a, &budget);
      INFO(r.witness);
      CHECK(r.ok);
    }

    for (int trial = 0; trial < 300; ++trial) {
      auto objs = c.objects();
      int a = objs[pick(4)], b1 = objs[pick(4)], b2 = objs[pick(4)];
      ElemRef m1 = rand_elem(m, a, b1), m2 = rand_elem(m, a, b2);
      auto sp = m.flat_span(m1, m2);
      REQUIRE(sp.has_value());
      CHECK(m.ract(sp->f1, sp->apex) == m1);
      CHECK(m.ract(sp->f2, sp->apex) == m2);

      // A commuting parallel pair out of b1: precompose m1 with two maps.
      MorRef u = rand_mor(c, b1, b2), v = rand_mor(c, b1, b2);
      if (m.ract(u, m1) != m.ract(v, m1)) continue;
      auto fk = m.flat_fork(u, v, m1);
      REQUIRE(fk.has_value());
      CHECK(m.ract(fk->f, fk->apex) == m1);
      CHECK(c.compose(u, fk->f) == c.compose(v, fk->f));
    }
  }
}

TEST_CASE("extremal monos: composition, functor preservation, diagonalization") {
  LinOpCat c(4);
  // Composites of embeddings are embeddings.
  for (int trial = 0; trial < 300; ++trial) {
    auto objs = c.objects();
    int a = objs[pick(4)], b = objs[pick(4)], d = objs[pick(4)];
    MorRef f = rand_mor(c, b, a), g = rand_mor(c, d, b);
    if (!lin_extremal_mono(f) || !lin_extremal_mono(g)) continue;
    CHECK(lin_extremal_mono(c.compose(f, g)));
  }

  // Both functors send embeddings to embeddings (sizes <= 3, heights <= 3).
  for (LinFunctor sel : {LinFunctor::kStarOmega, LinFunctor::kStarOmegaThenOne})
    for (int height = 1; height <= 3; ++height) {
      LinModule m(c, sel, height);
      for (int a = 1; a <= 3; ++a)
        for (int b = a; b <= 3; ++b)
          for (const auto& fhat : LinOpCat::monotone_maps(a, b)) {
            if (!strictly_increasing(fhat)) continue;
            CHECK(strictly_increasing(m.phi_map(fhat, a, b)));
          }
    }

  // Unique diagonal through (jointly epi, embedding) squares: seed the
  // square from a known diagonal and recover exactly it.
  LinFactorizationOracle oracle;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<int> family{1 + pick(2), 1 + pick(2)};
    auto cocones = oracle.jointly_epi(family);
    REQUIRE(!cocones.empty());
    EpiCocone e = cocones[pick(static_cast<int>(cocones.size()))];
    int x = e.vertex, asz = 1 + pick(3), bsz = asz + pick(2);
    auto embeddings = LinOpCat::monotone_maps(asz, bsz);
    std::erase_if(embeddings, [](const std::vector<int>& j) {
      return !strictly_increasing(j);
    });
    auto j = embeddings[pick(static_cast<int>(embeddings.size()))];
    auto m0s = LinOpCat::monotone_maps(x, asz);
    auto m0 = m0s[pick(static_cast<int>(m0s.size()))];

    // f_d = m0 . e_d and g = j . m0 in the underlying orientation.
    std::vector<std::vector<int>> fd;
    for (const MorRef& leg : e.legs) {
      std::vector<int> lf = LinOpCat::fn(leg), out(lf.size());
      for (size_t i = 0; i < lf.size(); ++i) out[i] = m0[lf[i]];
      fd.push_back(out);
    }
    std::vector<int> g(x);
    for (int i = 0; i < x; ++i) g[i] = j[m0[i]];

    int found = 0;
    for (const auto& diag : LinOpCat::monotone_maps(x, asz)) {
      bool ok = true;
      for (size_t d = 0; d < e.legs.size() && ok; ++d) {
        std::vector<int> lf = LinOpCat::fn(e.legs[d]);
        for (size_t i = 0; i < lf.size() && ok; ++i) ok = diag[lf[i]] == fd[d][i];
      }
      for (int i = 0; i < x && ok; ++i) ok = j[diag[i]] == g[i];
      if (ok) {
        ++found;
        CHECK(diag == m0);
      }
    }
    CHECK(found == 1);
  }
}

TEST_CASE("jointly epi cocones are exactly the covering families") {
  LinFactorizationOracle oracle;
  for (std::vector<int> family : {std::vector<int>{2, 2}, {1, 3}, {2}}) {
    auto listed = oracle.jointly_epi(family);
    CHECK(!listed.empty());
    int total = 0;
    for (int s : family) total += s;
    for (int v = 1; v <= total; ++v) {
      // Every cocone over the ordinal v, covering or not.
      std::vector<std::vector<std::vector<int>>> cand;
      for (int s : family) cand.push_back(LinOpCat::monotone_maps(s, v));
      std::vector<size_t> idx(family.size(), 0);
      for (bool more = true; more;) {
        std::vector<MorRef> legs;
        std::vector<bool> hit(v, false);
        for (size_t k = 0; k < family.size(); ++k) {
          legs.push_back(LinOpCat::mor(v, family[k], cand[k][idx[k]]));
          for (int p : cand[k][idx[k]]) hit[p] = true;
        }
        bool covering = std::find(hit.begin(), hit.end(), false) == hit.end();

        // Definition: no distinct parallel pair agrees on every leg.
        // Targets up to v+1 points suffice to separate monotone maps.
        bool epi = true;
        for (int t = 1; t <= v + 1 && epi; ++t) {
          auto maps = LinOpCat::monotone_maps(v, t);
          for (size_t i = 0; i < maps.size() && epi; ++i)
            for (size_t l = i + 1; l < maps.size() && epi; ++l) {
              bool agree = true;
              for (size_t k = 0; k < family.size() && agree; ++k)
                for (int p : cand[k][idx[k]])
                  if (maps[i][p] != maps[l][p]) {
                    agree = false;
                    break;
                  }
              if (agree) epi = false;
            }
        }
        CHECK(epi == covering);
        bool in_list = false;
        for (const auto& co : listed)
          in_list = in_list || (co.vertex == v && co.legs == legs);
        CHECK(in_list == covering);

        size_t k = 0;
        while (k < idx.size() && ++idx[k] == cand[k].size()) idx[k++] = 0;
        more = k < idx.size();
      }
    }
  }
}

TEST_CASE("image factorization of cocones") {
  LinOpCat c(4);
  // Identity cocone: nothing to cut away.
  auto id4 = c.identity(4);
  auto f0 = lin_factorize(4, {id4, id4});
  CHECK(f0.epi.vertex == 4);
  CHECK(f0.mono == id4);
  CHECK(f0.epi.legs == std::vector<MorRef>({id4, id4}));

  // Overlapping images: the union with the induced order.
  MorRef l1 = LinOpCat::mor(4, 2, {0, 2}), l2 = LinOpCat::mor(4, 2, {2, 3});
  auto f1 = lin_factorize(4, {l1, l2});
  CHECK(f1.epi.vertex == 3);
  CHECK(LinOpCat::fn(f1.mono) == std::vector<int>({0, 2, 3}));

  for (int trial = 0; trial < 300; ++trial) {
    auto objs = c.objects();
    int x = objs[pick(4)];
    std::vector<MorRef> legs;
    for (int k = 0, nk = 1 + pick(3); k < nk; ++k)
      legs.push_back(rand_mor(c, x, objs[pick(4)]));
    auto fac = lin_factorize(x, legs);
    CHECK(lin_extremal_mono(fac.mono));
    for (size_t k = 0; k < legs.size(); ++k) {
      // Epi legs cover the intermediate vertex by construction.
      CHECK(c.compose(fac.epi.legs[k], fac.mono) == legs[k]);
    }
    std::vector<bool> hit(fac.epi.vertex, false);
    for (const MorRef& leg : fac.epi.legs)
      for (int p : LinOpCat::fn(leg)) hit[p] = true;
    CHECK(std::find(hit.begin(), hit.end(), false) == hit.end());
  }
}

TEST_CASE("factorization final subset in the cone preorder") {
  LinOpCat c(3);
  LinModule m(c, LinFunctor::kStarOmega, 2);
  LinFactorizationOracle oracle;
  EnumBudget budget;

  // A pair of depth-1 complexes.
  TruncatedComplex c1(2);
  c1.push(m.elem(1, 2, {0, 1}));
  TruncatedComplex c2(1);
  c2.push(m.elem(2, 1, {2}));
  Diagram d = pair_diagram(LazyComplex(c1), LazyComplex(c2));

  auto fin = factorization_final_subset(m, d, 1, oracle, &budget);
  CHECK(!fin.empty());
  for (const auto& cone : fin) CHECK(check_cone(m, d, cone, 1));

  // Every cone over pr_1 factors through some member.
  auto p = build_cone_preorder(m, d, 1, nullptr, &budget);
  CHECK(!p.cones.empty());
  for (const auto& cone : p.cones) {
    bool factors = false;
    for (const auto& top : fin)
      if (cone_le(m, d, cone, top, &budget)) {
        factors = true;
        break;
      }
    CHECK(factors);
  }
}
