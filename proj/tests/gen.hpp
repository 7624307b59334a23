// Seeded random instance generators shared by the property tests.
#pragma once

#include <random>
#include <vector>

#include "selfsim/fincat.hpp"
#include "selfsim/module.hpp"

namespace selfsim::testgen {

// A random preorder presented as a category: at most one morphism between
// any two objects, so composition is forced and associativity automatic.
inline FinCategory random_preorder_cat(std::mt19937& rng, int max_objs) {
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_objs));
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) le[i][i] = true;
  // Random edges i -> j for i < j, then transitive closure; using only
  // upward edges keeps the relation antisymmetric (a poset).
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) le[i][j] = rng() % 3 == 0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;

  FinCategory c("rand");
  auto oname = [](int i) { return "o" + std::to_string(i); };
  auto mname = [&](int i, int j) { return "f:" + oname(i) + ":" + oname(j); };
  for (int i = 0; i < n; ++i) c.add_object(oname(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (le[i][j] && i != j) c.add_morphism(mname(i, j), oname(i), oname(j));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (le[i][j] && le[j][k] && i != j && j != k && i != k)
          c.set_compose(mname(j, k), mname(i, j), mname(i, k));
  c.seal();
  return c;
}

// A random monotone endomap of a preorder category: objects are sent into
// a random maximal chain by a nondecreasing function of topological rank.
inline std::vector<int> random_monotone_endo(std::mt19937& rng, const FinCategory& c) {
  int n = c.n_objects();
  auto leq = [&](int i, int j) { return !c.hom(i, j).empty(); };
  // Topological ranks (preorders from random_preorder_cat are posets).
  std::vector<int> rank(n, 0);
  for (int pass = 0; pass < n; ++pass)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (leq(i, j) && i != j && rank[j] < rank[i] + 1) rank[j] = rank[i] + 1;
  // Random maximal chain from a random start.
  std::vector<int> chain{static_cast<int>(rng() % static_cast<unsigned>(n))};
  for (;;) {
    std::vector<int> above;
    for (int j = 0; j < n; ++j)
      if (j != chain.back() && leq(chain.back(), j)) above.push_back(j);
    if (above.empty()) break;
    chain.push_back(above[rng() % above.size()]);
  }
  int maxrank = 0;
  for (int r : rank) maxrank = std::max(maxrank, r);
  // Nondecreasing rank -> chain index.
  std::vector<int> pick(maxrank + 1);
  int idx = 0;
  for (int r = 0; r <= maxrank; ++r) {
    idx += static_cast<int>(rng() % 2);
    idx = std::min(idx, static_cast<int>(chain.size()) - 1);
    pick[r] = idx;
  }
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = chain[pick[rank[i]]];
  return v;
}

// M(a,b) = hom(v(a), b) with actions by composition; flat at every object
// (the identity on v(a) is always a cone vertex). `v` is a monotone endo
// object map of a preorder category (morphism action is forced).
class ReindexedHomModule : public Mod {
 public:
  ReindexedHomModule(const FinCategory& base, std::vector<int> v)
      : base_(&base), v_(std::move(v)) {}

  std::string name() const override { return "hom(v-,-)"; }
  const Cat& src() const override { return *base_; }
  const Cat& dst() const override { return *base_; }
  std::vector<ElemRef> elems(int a, int b) const override {
    std::vector<ElemRef> out;
    for (const MorRef& f : base_->hom(v_[a], b)) out.push_back({a, b, f.code});
    return out;
  }
  ElemRef lact(const ElemRef& m, const MorRef& f) const override {
    // f : a' -> a; in a preorder, v(f) is the unique v(a') -> v(a).
    MorRef vf = base_->hom(v_[f.src], v_[f.dst]).at(0);
    MorRef comp = base_->compose(as_mor(m), vf);
    return {f.src, m.dst, comp.code};
  }
  ElemRef ract(const MorRef& g, const ElemRef& m) const override {
    MorRef comp = base_->compose(g, as_mor(m));
    return {m.src, g.dst, comp.code};
  }
  std::string elem_name(const ElemRef& m) const override {
    return base_->mor_name(as_mor(m)) + "@" + base_->obj_name(m.src);
  }

 private:
  MorRef as_mor(const ElemRef& m) const { return {v_[m.src], m.dst, m.code}; }
  const FinCategory* base_;
  std::vector<int> v_;
};

}  // namespace selfsim::testgen
