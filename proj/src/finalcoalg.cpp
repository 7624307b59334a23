#include "selfsim/finalcoalg.hpp"

#include <algorithm>
#include <numeric>

namespace selfsim {

namespace {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

TruncatedComplex tail_of(const TruncatedComplex& c) {
  TruncatedComplex t(c.objs[1]);
  for (size_t i = 1; i < c.elems.size(); ++i) t.push(c.elems[i]);
  return t;
}

}  // namespace

bool ColimitApprox::has_anchor(int b) const { return table_.count(b) != 0; }

const ColimitApprox::Anchor& ColimitApprox::anchor(int b) const {
  auto it = table_.find(b);
  if (it == table_.end())
    throw std::out_of_range("object " + m_->src().obj_name(b) + " is not an anchor");
  return it->second;
}

int ColimitApprox::n_classes(int b) const {
  return static_cast<int>(anchor(b).reps.size());
}

const AnchoredPair& ColimitApprox::rep(int b, int k) const { return anchor(b).reps.at(k); }

const std::vector<AnchoredPair>& ColimitApprox::pairs(int b) const {
  return anchor(b).pairs;
}

int ColimitApprox::class_of(int b, const AnchoredPair& p) const {
  const Anchor& an = anchor(b);
  if (canonical_) {
    auto it = an.by_key.find(m_->class_key(p.c, p.g));
    if (it == an.by_key.end())
      throw std::out_of_range("pair has no class at anchor " + m_->src().obj_name(b));
    return it->second;
  }
  auto it = std::lower_bound(an.pairs.begin(), an.pairs.end(), p);
  if (it == an.pairs.end() || *it != p)
    throw std::out_of_range("pair was not enumerated at anchor " + m_->src().obj_name(b));
  return an.cls[it - an.pairs.begin()];
}

int ColimitApprox::act(const MorRef& h, int b, int k) const {
  if (h.src != b) throw std::invalid_argument("action morphism must start at the anchor");
  const AnchoredPair& r = rep(b, k);
  return class_of(h.dst, {r.c, m_->src().compose(h, r.g)});
}

std::string ColimitApprox::class_dump(int b, int k) const {
  const AnchoredPair& r = rep(b, k);
  return "class " + std::to_string(k) + " @ " + m_->src().obj_name(b) +
         " : rep = " + complex_to_string(*m_, r.c) +
         " ; head-map = " + m_->src().mor_name(r.g);
}

ColimitApprox build_approx(const Mod& m, int n, std::vector<int> anchors,
                           EnumBudget* budget) {
  ColimitApprox out;
  out.m_ = &m;
  out.n_ = n;
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  out.anchors_ = anchors;
  out.canonical_ = m.has_canonical_classes();

  if (out.canonical_) {
    for (int b : anchors) {
      ColimitApprox::Anchor an;
      for (const auto& [c, g] : m.class_reps(n, b)) {
        an.by_key.emplace(m.class_key(c, g), static_cast<int>(an.reps.size()));
        an.reps.push_back({c, g});
      }
      out.table_.emplace(b, std::move(an));
    }
    return out;
  }

  const Cat& base = m.src();
  std::vector<TruncatedComplex> cs = enumerate_complexes(m, n, -1, budget);
  // Zig-zag edges only need endpoints and the head component of each
  // morphism: f : C' -> C relates (C, g) to (C', g . f_0).
  struct Edge {
    int src, dst;  // indices into cs
    MorRef f0;
  };
  std::vector<Edge> edges;
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = 0; j < cs.size(); ++j) {
      std::set<MorRef> heads;
      for (const ComplexMorphism& f : enumerate_morphisms(m, cs[i], cs[j], budget))
        heads.insert(f.comps[0]);
      for (const MorRef& f0 : heads)
        edges.push_back({static_cast<int>(i), static_cast<int>(j), f0});
    }

  for (int b : anchors) {
    ColimitApprox::Anchor an;
    std::map<std::pair<int, MorRef>, int> index;  // (complex, g) -> pair slot
    for (size_t i = 0; i < cs.size(); ++i)
      for (const MorRef& g : base.hom(cs[i].head(), b)) {
        index[{static_cast<int>(i), g}] = static_cast<int>(an.pairs.size());
        an.pairs.push_back({cs[i], g});
      }
    // Keep pairs sorted so class_of can binary-search.
    std::vector<int> order(an.pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return an.pairs[x] < an.pairs[y]; });
    std::vector<AnchoredPair> sorted;
    std::vector<int> slot(an.pairs.size());
    for (size_t k = 0; k < order.size(); ++k) {
      sorted.push_back(an.pairs[order[k]]);
      slot[order[k]] = static_cast<int>(k);
    }
    an.pairs = std::move(sorted);
    for (auto& [key, v] : index) v = slot[v];

    Dsu dsu(static_cast<int>(an.pairs.size()));
    for (const Edge& e : edges)
      for (const MorRef& g : base.hom(cs[e.dst].head(), b))
        dsu.unite(index.at({e.dst, g}), index.at({e.src, base.compose(g, e.f0)}));

    // Lex-least member of each class is its representative; classes are
    // ordered by representative.
    std::map<int, int> root_to_min;
    for (int p = 0; p < static_cast<int>(an.pairs.size()); ++p) {
      int r = dsu.find(p);
      auto it = root_to_min.find(r);
      if (it == root_to_min.end() || p < it->second) root_to_min[r] = p;
    }
    std::vector<int> mins;
    for (auto& [r, p] : root_to_min) mins.push_back(p);
    std::sort(mins.begin(), mins.end());
    std::map<int, int> root_to_class;
    for (size_t k = 0; k < mins.size(); ++k) {
      root_to_class[dsu.find(mins[k])] = static_cast<int>(k);
      an.reps.push_back(an.pairs[mins[k]]);
    }
    an.cls.resize(an.pairs.size());
    for (int p = 0; p < static_cast<int>(an.pairs.size()); ++p)
      an.cls[p] = root_to_class.at(dsu.find(p));
    out.table_.emplace(b, std::move(an));
  }
  return out;
}

std::vector<int> refinement_map(const ColimitApprox& hi, const ColimitApprox& lo, int b) {
  if (hi.level() != lo.level() + 1)
    throw std::invalid_argument("refinement needs consecutive levels");
  std::vector<int> out;
  for (int k = 0; k < hi.n_classes(b); ++k) {
    const AnchoredPair& r = hi.rep(b, k);
    out.push_back(lo.class_of(b, {truncate(r.c, lo.level()), r.g}));
  }
  return out;
}

FinSetFunctor approx_functor(const ColimitApprox& i) {
  const auto* base = dynamic_cast<const FinCategory*>(&i.mod().src());
  if (!base) throw std::invalid_argument("materializing I_n needs an explicit base");
  FinSetFunctor fun;
  fun.fname = "I" + std::to_string(i.level());
  fun.base = base;
  for (int a = 0; a < base->n_objects(); ++a) {
    if (!i.has_anchor(a))
      throw std::invalid_argument("anchors must cover every object to materialize I_n");
    std::vector<std::string> names;
    for (int k = 0; k < i.n_classes(a); ++k) names.push_back("x" + std::to_string(k));
    fun.value.push_back(std::move(names));
  }
  for (int f = 0; f < base->n_morphisms(); ++f) {
    MorRef h = base->mor_ref(base->morphism(f).id);
    std::vector<int> act;
    for (int k = 0; k < i.n_classes(h.src); ++k) act.push_back(i.act(h, h.src, k));
    fun.action.push_back(std::move(act));
  }
  return fun;
}

StructureMap structure_map(const Mod& m, const ColimitApprox& hi, const ColimitApprox& lo) {
  if (hi.level() != lo.level() + 1)
    throw std::invalid_argument("structure map needs consecutive levels");
  StructureMap out{apply_module(m, approx_functor(lo)), {}};
  for (int b : hi.anchors()) {
    std::vector<int> img;
    for (int k = 0; k < hi.n_classes(b); ++k) {
      const AnchoredPair& r = hi.rep(b, k);
      ElemRef m1 = r.c.elems[0];
      int a1 = r.c.objs[1];
      TruncatedComplex tail = tail_of(r.c);
      int x1 = lo.class_of(a1, {tail, m.src().identity(a1)});
      img.push_back(out.tensor.cls(b, m.ract(r.g, m1), a1, x1));
    }
    out.image.emplace(b, std::move(img));
  }
  return out;
}

SolveReport solve(const Coalgebra& e, int n, EnumBudget* budget) {
  const Mod& m = *e.module;
  const FinCategory& base = *e.carrier->base;
  std::vector<int> all;
  for (int a = 0; a < base.n_objects(); ++a) all.push_back(a);

  SolveReport out;
  out.level = n;
  out.approx = build_approx(m, n, all, budget);
  ColimitApprox lo;
  std::optional<StructureMap> sm;
  if (n >= 1) {
    lo = build_approx(m, n - 1, all, budget);
    sm = structure_map(m, out.approx, lo);
  }

  for (int a = 0; a < base.n_objects(); ++a)
    for (int x = 0; x < static_cast<int>(e.carrier->value[a].size()); ++x) {
      Resolution r(e, a, x);
      int k = out.approx.class_of(a, {r.complex().at(n), base.identity(a)});
      out.cls[{a, x}] = k;
      if (n < 1) continue;
      // Solution square: iota_n(sol_n(x)) against the tensor image of
      // the stored e(x) = (m_1, (a_1, x_1)) under sol_{n-1}.
      auto [m1, tx] = e.structure[a][x];
      auto [a1, x1] = tx;
      Resolution r1(e, a1, x1);
      int k1 = lo.class_of(a1, {r1.complex().at(n - 1), base.identity(a1)});
      int lhs = sm->image.at(a)[k];
      int rhs = sm->tensor.cls(a, m1, a1, k1);
      if (lhs != rhs) {
        out.ok = false;
        out.failures.push_back("solution square fails at (" + base.obj_name(a) + ", " +
                               e.carrier->value[a][x] + ")");
      }
    }
  return out;
}

RefinementReport refinement_chain(const Mod& m, std::vector<int> anchors, int levels_up_to,
                                  EnumBudget* budget) {
  RefinementReport out;
  for (int n = 0; n <= levels_up_to; ++n)
    out.levels.push_back(build_approx(m, n, anchors, budget));
  for (int n = 0; n < levels_up_to; ++n) {
    std::map<int, std::vector<int>> maps;
    for (int b : out.levels[n].anchors())
      maps.emplace(b, refinement_map(out.levels[n + 1], out.levels[n], b));
    out.maps.push_back(std::move(maps));
  }
  for (int b : out.levels[0].anchors()) {
    std::vector<int> counts;
    for (const ColimitApprox& i : out.levels) counts.push_back(i.n_classes(b));
    out.counts.emplace(b, std::move(counts));
  }

  out.stabilized = levels_up_to >= 1;
  for (auto& [b, counts] : out.counts) {
    if (counts.size() < 2 || counts[counts.size() - 1] != counts[counts.size() - 2]) {
      out.stabilized = false;
      break;
    }
    // Equal counts: bijectivity of the last refinement reduces to
    // injectivity.
    const std::vector<int>& last = out.maps.back().at(b);
    std::set<int> seen(last.begin(), last.end());
    if (static_cast<int>(seen.size()) != counts.back()) {
      out.stabilized = false;
      break;
    }
  }

  out.detail = "levels 0.." + std::to_string(levels_up_to) + "; ";
  for (auto& [b, counts] : out.counts) {
    out.detail += m.src().obj_name(b) + ": ";
    for (size_t n = 0; n < counts.size(); ++n)
      out.detail += (n ? " " : "") + std::to_string(counts[n]);
    out.detail += "; ";
  }
  out.detail += out.stabilized ? "stabilized over the last two levels"
                               : "not stabilized over the last two levels";
  return out;
}

}  // namespace selfsim
