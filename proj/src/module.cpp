#include "selfsim/module.hpp"

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
  void unite(int x, int y) { parent[find(x)] = find(y); }
};

}  // namespace

void TableModule::add_element(const std::string& id, const std::string& a,
                              const std::string& b) {
  if (sealed_) throw std::logic_error("module already sealed");
  if (elem_index_.count(id)) throw std::invalid_argument("redeclared element " + id);
  int ai = base_->object_index(a);
  int bi = base_->object_index(b);
  if (ai < 0) throw std::invalid_argument("unknown object " + a);
  if (bi < 0) throw std::invalid_argument("unknown object " + b);
  elem_index_[id] = static_cast<int>(elems_.size());
  elems_.push_back({id, ai, bi});
}

void TableModule::set_lact(const std::string& m, const std::string& f,
                           const std::string& m2) {
  if (sealed_) throw std::logic_error("module already sealed");
  pending_lact_.push_back({m, f, m2});
}

void TableModule::set_ract(const std::string& g, const std::string& m,
                           const std::string& m2) {
  if (sealed_) throw std::logic_error("module already sealed");
  pending_ract_.push_back({m, g, m2});
}

void TableModule::seal() {
  if (sealed_) return;
  std::sort(elems_.begin(), elems_.end(),
            [](const ElemData& a, const ElemData& b) { return a.id < b.id; });
  elem_index_.clear();
  for (size_t i = 0; i < elems_.size(); ++i) elem_index_[elems_[i].id] = static_cast<int>(i);
  auto elem = [&](const std::string& id) {
    auto it = elem_index_.find(id);
    if (it == elem_index_.end()) throw std::invalid_argument("unknown element " + id);
    return it->second;
  };
  auto mor = [&](const std::string& id) {
    int m = base_->morphism_index(id);
    if (m < 0) throw std::invalid_argument("unknown morphism " + id);
    return static_cast<long long>(m);
  };
  for (const auto& p : pending_lact_) lact_[{elem(p.m), mor(p.f)}] = elem(p.m2);
  for (const auto& p : pending_ract_) ract_[{mor(p.f), elem(p.m)}] = elem(p.m2);
  pending_lact_.clear();
  pending_ract_.clear();
  // Identity actions default to the unit law but never override an
  // explicitly declared (possibly faulty) entry; validate() checks them.
  for (int e = 0; e < n_elements(); ++e) {
    lact_.insert({{e, base_->identity(elems_[e].src).code}, e});
    ract_.insert({{base_->identity(elems_[e].dst).code, e}, e});
  }
  sealed_ = true;
}

int TableModule::element_index(const std::string& id) const {
  auto it = elem_index_.find(id);
  return it == elem_index_.end() ? -1 : it->second;
}

ElemRef TableModule::elem_ref(const std::string& id) const {
  int e = element_index(id);
  if (e < 0) throw std::invalid_argument("unknown element " + id);
  return elem_ref(e);
}

std::vector<ElemRef> TableModule::elems(int a, int b) const {
  std::vector<ElemRef> out;
  for (int e = 0; e < n_elements(); ++e)
    if (elems_[e].src == a && elems_[e].dst == b) out.push_back(elem_ref(e));
  return out;
}

ElemRef TableModule::lact(const ElemRef& m, const MorRef& f) const {
  auto it = lact_.find({static_cast<int>(m.code), f.code});
  if (it == lact_.end()) throw std::logic_error("left action missing; module not validated");
  return elem_ref(it->second);
}

ElemRef TableModule::ract(const MorRef& g, const ElemRef& m) const {
  auto it = ract_.find({g.code, static_cast<int>(m.code)});
  if (it == ract_.end()) throw std::logic_error("right action missing; module not validated");
  return elem_ref(it->second);
}

ValidationReport TableModule::validate() const {
  ValidationReport report;
  const FinCategory& c = *base_;
  auto en = [&](int e) { return elems_[e].id; };
  auto mn = [&](int f) { return c.morphism(f).id; };
  // Totality and typing of both action tables.
  for (int e = 0; e < n_elements(); ++e) {
    for (int f = 0; f < c.n_morphisms(); ++f) {
      if (c.morphism(f).dst == elems_[e].src) {
        auto it = lact_.find({e, f});
        if (it == lact_.end())
          report.push_back({"left action not total", "(" + en(e) + ", " + mn(f) + ")"});
        else if (elems_[it->second].src != c.morphism(f).src ||
                 elems_[it->second].dst != elems_[e].dst)
          report.push_back({"left action lands outside M(a',b)",
                            en(e) + " @ " + mn(f) + " = " + en(it->second)});
      }
      if (c.morphism(f).src == elems_[e].dst) {
        auto it = ract_.find({f, e});
        if (it == ract_.end())
          report.push_back({"right action not total", "(" + mn(f) + ", " + en(e) + ")"});
        else if (elems_[it->second].src != elems_[e].src ||
                 elems_[it->second].dst != c.morphism(f).dst)
          report.push_back({"right action lands outside M(a,b')",
                            mn(f) + " @ " + en(e) + " = " + en(it->second)});
      }
    }
  }
  for (const auto& [key, e2] : lact_) {
    auto [e, f] = key;
    if (c.morphism(static_cast<int>(f)).dst != elems_[e].src)
      report.push_back({"left action declared for non-acting morphism",
                        en(e) + " @ " + mn(static_cast<int>(f))});
    (void)e2;
  }
  for (const auto& [key, e2] : ract_) {
    auto [f, e] = key;
    if (c.morphism(static_cast<int>(f)).src != elems_[e].dst)
      report.push_back({"right action declared for non-acting morphism",
                        mn(static_cast<int>(f)) + " @ " + en(e)});
    (void)e2;
  }
  if (!report.empty()) return report;
  // Unit laws.
  for (int e = 0; e < n_elements(); ++e) {
    ElemRef m = elem_ref(e);
    if (lact(m, c.identity(elems_[e].src)) != m)
      report.push_back({"unit law m @ id = m fails", en(e)});
    if (ract(c.identity(elems_[e].dst), m) != m)
      report.push_back({"unit law id @ m = m fails", en(e)});
  }
  // Composition laws and interchange.
  for (int e = 0; e < n_elements(); ++e) {
    ElemRef m = elem_ref(e);
    for (int f = 0; f < c.n_morphisms(); ++f) {
      if (c.morphism(f).dst != elems_[e].src) continue;
      MorRef fr = c.mor_ref(f);
      for (int f2 = 0; f2 < c.n_morphisms(); ++f2) {
        if (c.morphism(f2).dst != c.morphism(f).src) continue;
        MorRef f2r = c.mor_ref(f2);
        if (lact(m, c.compose(fr, f2r)) != lact(lact(m, fr), f2r))
          report.push_back({"left action law m@(f.f') = (m@f)@f' fails",
                            "(" + en(e) + ", " + mn(f) + ", " + mn(f2) + ")"});
      }
    }
    for (int g = 0; g < c.n_morphisms(); ++g) {
      if (c.morphism(g).src != elems_[e].dst) continue;
      MorRef gr = c.mor_ref(g);
      for (int g2 = 0; g2 < c.n_morphisms(); ++g2) {
        if (c.morphism(g2).src != c.morphism(g).dst) continue;
        MorRef g2r = c.mor_ref(g2);
        if (ract(c.compose(g2r, gr), m) != ract(g2r, ract(gr, m)))
          report.push_back({"right action law (g'.g)@m = g'@(g@m) fails",
                            "(" + mn(g2) + ", " + mn(g) + ", " + en(e) + ")"});
      }
      for (int f = 0; f < c.n_morphisms(); ++f) {
        if (c.morphism(f).dst != elems_[e].src) continue;
        MorRef fr = c.mor_ref(f);
        if (lact(ract(gr, m), fr) != ract(gr, lact(m, fr)))
          report.push_back({"interchange (g@m)@f = g@(m@f) fails",
                            "(" + mn(g) + ", " + en(e) + ", " + mn(f) + ")"});
      }
    }
  }
  return report;
}

std::vector<ElemRef> IdentityModule::elems(int a, int b) const {
  std::vector<ElemRef> out;
  for (const MorRef& f : base_->hom(a, b)) out.push_back(as_elem(f));
  return out;
}

ElemRef IdentityModule::lact(const ElemRef& m, const MorRef& f) const {
  return as_elem(base_->compose(as_mor(m), f));
}

ElemRef IdentityModule::ract(const MorRef& g, const ElemRef& m) const {
  return as_elem(base_->compose(g, as_mor(m)));
}

std::string IdentityModule::elem_name(const ElemRef& m) const {
  return base_->mor_name(as_mor(m));
}

ValidationReport validate_module(const TableModule& m) { return m.validate(); }

std::optional<FlatSpan> find_flat_span(const Mod& m, const ElemRef& m1, const ElemRef& m2,
                                       EnumBudget* budget) {
  if (auto w = m.flat_span(m1, m2)) return w;
  EnumBudget local = default_budget();
  EnumBudget& bud = budget ? *budget : local;
  const Cat& c = m.dst();
  for (int b : c.objects())
    for (const ElemRef& m0 : m.elems(m1.src, b))
      for (const MorRef& f1 : c.hom(b, m1.dst)) {
        bud.charge();
        if (m.ract(f1, m0) != m1) continue;
        for (const MorRef& f2 : c.hom(b, m2.dst)) {
          bud.charge();
          if (m.ract(f2, m0) == m2) return FlatSpan{m0, f1, f2};
        }
      }
  return std::nullopt;
}

std::optional<FlatFork> find_flat_fork(const Mod& m, const MorRef& u, const MorRef& v,
                                       const ElemRef& m1, EnumBudget* budget) {
  if (auto w = m.flat_fork(u, v, m1)) return w;
  EnumBudget local = default_budget();
  EnumBudget& bud = budget ? *budget : local;
  const Cat& c = m.dst();
  for (int b : c.objects())
    for (const ElemRef& m0 : m.elems(m1.src, b))
      for (const MorRef& f : c.hom(b, m1.dst)) {
        bud.charge();
        if (m.ract(f, m0) == m1 && c.compose(u, f) == c.compose(v, f))
          return FlatFork{m0, f};
      }
  return std::nullopt;
}

FlatResult flat_check(const Mod& m, int a, EnumBudget* budget) {
  EnumBudget local = default_budget();
  EnumBudget& bud = budget ? *budget : local;
  const Cat& c = m.dst();
  auto objs = c.objects();

  std::vector<std::vector<ElemRef>> out(objs.size());
  bool any = false;
  for (size_t i = 0; i < objs.size(); ++i) {
    out[i] = m.elems(a, objs[i]);
    bud.charge(static_cast<long long>(out[i].size()));
    any = any || !out[i].empty();
  }
  if (!any)
    return {false, 1, "no element out of " + m.src().obj_name(a) + " within bound"};

  for (size_t i = 0; i < objs.size(); ++i)
    for (const ElemRef& m1 : out[i])
      for (size_t j = i; j < objs.size(); ++j)
        for (const ElemRef& m2 : out[j]) {
          if (j == i && m2 < m1) continue;
          if (!find_flat_span(m, m1, m2, &bud))
            return {false, 2,
                    "no span over (" + m.elem_name(m1) + ", " + m.elem_name(m2) + ")"};
        }

  for (size_t i = 0; i < objs.size(); ++i)
    for (const ElemRef& m1 : out[i])
      for (int b2 : objs) {
        auto par = c.hom(objs[i], b2);
        for (size_t p = 0; p < par.size(); ++p)
          for (size_t q = p + 1; q < par.size(); ++q) {
            bud.charge();
            if (m.ract(par[p], m1) != m.ract(par[q], m1)) continue;
            if (!find_flat_fork(m, par[p], par[q], m1, &bud))
              return {false, 3,
                      "no fork for (" + c.mor_name(par[p]) + ", " + c.mor_name(par[q]) +
                          ") at " + m.elem_name(m1)};
          }
      }
  return {true, 0, ""};
}

namespace {

// Pairs and generated edges of the coend at (a, c), shared by union-find
// and the naive-closure oracle.
struct CoendData {
  std::vector<CoendPair> pairs;
  std::map<CoendPair, int> index;
  std::vector<std::pair<int, int>> edges;
};

CoendData coend_data(const Mod& outer, const Mod& inner, int a, int c) {
  const Cat& mid = inner.dst();
  CoendData d;
  for (int b : mid.objects())
    for (const ElemRef& n : outer.elems(b, c))
      for (const ElemRef& m : inner.elems(a, b)) d.pairs.push_back({n, m});
  std::sort(d.pairs.begin(), d.pairs.end());
  for (size_t i = 0; i < d.pairs.size(); ++i) d.index[d.pairs[i]] = static_cast<int>(i);
  for (int b : mid.objects())
    for (int b2 : mid.objects())
      for (const MorRef& f : mid.hom(b, b2))
        for (const ElemRef& n : outer.elems(b2, c))
          for (const ElemRef& m : inner.elems(a, b)) {
            CoendPair lhs{outer.lact(n, f), m};       // at index b
            CoendPair rhs{n, inner.ract(f, m)};       // at index b2
            d.edges.push_back({d.index.at(lhs), d.index.at(rhs)});
          }
  return d;
}

}  // namespace

CoendPartition::CoendPartition(const Mod& outer, const Mod& inner, int a, int c) {
  CoendData d = coend_data(outer, inner, a, c);
  Dsu dsu(static_cast<int>(d.pairs.size()));
  for (auto [x, y] : d.edges) dsu.unite(x, y);
  // Lex-least pair per DSU root, then classes ordered by representative.
  std::map<int, int> least;
  for (int i = 0; i < static_cast<int>(d.pairs.size()); ++i) {
    int r = dsu.find(i);
    if (!least.count(r)) least[r] = i;  // pairs are sorted, first hit is least
  }
  std::vector<int> rep_idx;
  for (auto& [r, i] : least) rep_idx.push_back(i);
  std::sort(rep_idx.begin(), rep_idx.end());
  std::map<int, int> cls_of_root;
  for (size_t k = 0; k < rep_idx.size(); ++k) {
    reps_.push_back(d.pairs[rep_idx[k]]);
    cls_of_root[dsu.find(rep_idx[k])] = static_cast<int>(k);
  }
  for (int i = 0; i < static_cast<int>(d.pairs.size()); ++i)
    cls_[d.pairs[i]] = cls_of_root[dsu.find(i)];
}

int CoendPartition::class_index(const CoendPair& p) const {
  auto it = cls_.find(p);
  return it == cls_.end() ? -1 : it->second;
}

CoendPair CoendPartition::canon(const CoendPair& p) const {
  int k = class_index(p);
  if (k < 0) throw std::invalid_argument("pair is not in the coend index");
  return reps_[k];
}

std::map<CoendPair, CoendPair> coend_closure_oracle(const Mod& outer, const Mod& inner,
                                                    int a, int c) {
  CoendData d = coend_data(outer, inner, a, c);
  // Iterate symmetric one-step closure to a fixed point: repeatedly lower
  // each pair's representative along any edge.
  std::vector<int> rep(d.pairs.size());
  std::iota(rep.begin(), rep.end(), 0);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [x, y] : d.edges) {
      if (rep[x] < rep[y]) {
        rep[y] = rep[x];
        changed = true;
      } else if (rep[y] < rep[x]) {
        rep[x] = rep[y];
        changed = true;
      }
    }
  }
  // Resolve chains rep[i] -> rep[rep[i]] -> ... down to fixed points.
  for (size_t i = 0; i < rep.size(); ++i) {
    int r = static_cast<int>(i);
    while (rep[r] != r) r = rep[r];
    rep[i] = r;
  }
  std::map<CoendPair, CoendPair> out;
  for (size_t i = 0; i < d.pairs.size(); ++i) out[d.pairs[i]] = d.pairs[rep[i]];
  return out;
}

TensorModule::TensorModule(const Mod& outer, const Mod& inner)
    : outer_(&outer), inner_(&inner) {
  if (&outer.src() != &inner.dst())
    throw std::invalid_argument("tensor factors must share the middle category");
}

const CoendPartition& TensorModule::partition(int a, int c) const {
  auto it = parts_.find({a, c});
  if (it == parts_.end())
    it = parts_.emplace(std::pair{a, c}, CoendPartition(*outer_, *inner_, a, c)).first;
  return it->second;
}

ElemRef TensorModule::class_ref(int a, int c, const CoendPair& p) const {
  int k = partition(a, c).class_index(p);
  if (k < 0) throw std::invalid_argument("pair is not in the coend index");
  return {a, c, k};
}

std::vector<ElemRef> TensorModule::elems(int a, int c) const {
  std::vector<ElemRef> out;
  for (int k = 0; k < partition(a, c).n_classes(); ++k) out.push_back({a, c, k});
  return out;
}

ElemRef TensorModule::lact(const ElemRef& m, const MorRef& f) const {
  const CoendPair& rep = partition(m.src, m.dst).reps()[m.code];
  CoendPair moved{rep.first, inner_->lact(rep.second, f)};
  return class_ref(f.src, m.dst, moved);
}

ElemRef TensorModule::ract(const MorRef& g, const ElemRef& m) const {
  const CoendPair& rep = partition(m.src, m.dst).reps()[m.code];
  CoendPair moved{outer_->ract(g, rep.first), rep.second};
  return class_ref(m.src, g.dst, moved);
}

std::string TensorModule::elem_name(const ElemRef& m) const {
  const CoendPair& rep = partition(m.src, m.dst).reps()[m.code];
  return "[" + outer_->elem_name(rep.first) + "(*)" + inner_->elem_name(rep.second) + "]";
}

ValidationReport FinSetFunctor::validate() const {
  ValidationReport report;
  const FinCategory& c = *base;
  for (int f = 0; f < c.n_morphisms(); ++f) {
    const auto& md = c.morphism(f);
    if (action[f].size() != value[md.src].size()) {
      report.push_back({"action table has wrong domain size", md.id});
      continue;
    }
    for (int x : action[f])
      if (x < 0 || x >= static_cast<int>(value[md.dst].size()))
        report.push_back({"action lands outside the target value set", md.id});
  }
  if (!report.empty()) return report;
  for (int a : c.objects()) {
    const auto& idm = action[c.identity(a).code];
    for (size_t x = 0; x < idm.size(); ++x)
      if (idm[x] != static_cast<int>(x)) {
        report.push_back({"identity acts non-trivially", c.obj_name(a)});
        break;
      }
  }
  for (int f = 0; f < c.n_morphisms(); ++f)
    for (int g = 0; g < c.n_morphisms(); ++g) {
      if (c.morphism(f).dst != c.morphism(g).src) continue;
      long long gf = c.compose(c.mor_ref(g), c.mor_ref(f)).code;
      for (size_t x = 0; x < action[f].size(); ++x)
        if (action[gf][x] != action[g][action[f][x]]) {
          report.push_back({"functoriality X(g.f) = Xg . Xf fails",
                            "(" + c.morphism(g).id + ", " + c.morphism(f).id + ")"});
          break;
        }
    }
  return report;
}

int FinSetFunctor::elem_index(int a, const std::string& id) const {
  for (size_t i = 0; i < value[a].size(); ++i)
    if (value[a][i] == id) return static_cast<int>(i);
  return -1;
}

FinSetFunctor representable(const FinCategory& c, int a) {
  FinSetFunctor x;
  x.fname = "hom(" + c.obj_name(a) + ",-)";
  x.base = &c;
  x.value.resize(c.n_objects());
  std::vector<std::vector<int>> codes(c.n_objects());
  for (int b : c.objects())
    for (const MorRef& f : c.hom(a, b)) {
      x.value[b].push_back(c.mor_name(f));
      codes[b].push_back(static_cast<int>(f.code));
    }
  x.action.resize(c.n_morphisms());
  for (int g = 0; g < c.n_morphisms(); ++g) {
    const auto& gd = c.morphism(g);
    for (int code : codes[gd.src]) {
      MorRef gf = c.compose(c.mor_ref(g), c.mor_ref(code));
      int pos = -1;
      for (size_t i = 0; i < codes[gd.dst].size(); ++i)
        if (codes[gd.dst][i] == static_cast<int>(gf.code)) pos = static_cast<int>(i);
      x.action[g].push_back(pos);
    }
  }
  return x;
}

FinCategory elements_category(const FinSetFunctor& x) {
  const FinCategory& c = *x.base;
  auto obj = [&](int a, int xi) { return c.obj_name(a) + "/" + x.value[a][xi]; };
  auto mor = [&](int f, int xi) { return c.morphism(f).id + "/" + x.value[c.morphism(f).src][xi]; };
  // Identities of the base induce the auto-generated identities of elts;
  // only non-identity morphisms and pairs are declared.
  FinCategory e2("elts(" + x.fname + ")");
  for (int a : c.objects())
    for (const auto& v : x.value[a]) e2.add_object(c.obj_name(a) + "/" + v);
  for (int f = 0; f < c.n_morphisms(); ++f) {
    const auto& fd = c.morphism(f);
    if (c.is_identity(c.mor_ref(f))) continue;
    for (size_t xi = 0; xi < x.value[fd.src].size(); ++xi)
      e2.add_morphism(mor(f, static_cast<int>(xi)), obj(fd.src, static_cast<int>(xi)),
                      obj(fd.dst, x.action[f][xi]));
  }
  for (int f = 0; f < c.n_morphisms(); ++f) {
    if (c.is_identity(c.mor_ref(f))) continue;
    const auto& fd = c.morphism(f);
    for (int g = 0; g < c.n_morphisms(); ++g) {
      if (c.is_identity(c.mor_ref(g))) continue;
      const auto& gd = c.morphism(g);
      if (fd.dst != gd.src) continue;
      MorRef gf = c.compose(c.mor_ref(g), c.mor_ref(f));
      for (size_t xi = 0; xi < x.value[fd.src].size(); ++xi) {
        std::string comp =
            c.is_identity(gf)
                ? "id:" + obj(fd.src, static_cast<int>(xi))
                : c.mor_name(gf) + "/" + x.value[fd.src][xi];
        e2.set_compose(mor(g, x.action[f][xi]), mor(f, static_cast<int>(xi)), comp);
      }
    }
  }
  e2.seal();
  return e2;
}

CofilteredResult functor_flat_check(const FinSetFunctor& x) {
  return is_cofiltered(elements_category(x));
}

int ApplyResult::cls(int a, const ElemRef& m1, int a1, int x1) const {
  auto it = class_of[a].find({m1, {a1, x1}});
  if (it == class_of[a].end())
    throw std::invalid_argument("pair is not in the coend index of (M (.) X)");
  return it->second;
}

ApplyResult apply_module(const Mod& m, const FinSetFunctor& x) {
  const FinCategory& c = *x.base;
  ApplyResult out;
  out.fun.fname = m.name() + "(.)" + x.fname;
  out.fun.base = &c;
  out.fun.value.resize(c.n_objects());
  out.fun.action.resize(c.n_morphisms());
  out.class_of.resize(c.n_objects());

  // Per object a: pairs (m1 in M(a1,a), (a1,x1)), edges (m@f, x) ~ (m, Xf x).
  std::vector<std::vector<std::pair<ElemRef, std::pair<int, int>>>> pairs(c.n_objects());
  for (int a : c.objects()) {
    for (int a1 : c.objects())
      for (const ElemRef& m1 : m.elems(a1, a))
        for (size_t x1 = 0; x1 < x.value[a1].size(); ++x1)
          pairs[a].push_back({m1, {a1, static_cast<int>(x1)}});
    std::sort(pairs[a].begin(), pairs[a].end());
    std::map<std::pair<ElemRef, std::pair<int, int>>, int> index;
    for (size_t i = 0; i < pairs[a].size(); ++i) index[pairs[a][i]] = static_cast<int>(i);
    Dsu dsu(static_cast<int>(pairs[a].size()));
    for (int f = 0; f < c.n_morphisms(); ++f) {
      const auto& fd = c.morphism(f);
      for (const ElemRef& m1 : m.elems(fd.dst, a))
        for (size_t x1 = 0; x1 < x.value[fd.src].size(); ++x1) {
          // f : fd.src -> fd.dst; identify (m1@f, x1) with (m1, Xf(x1)).
          std::pair<ElemRef, std::pair<int, int>> lhs{
              m.lact(m1, c.mor_ref(f)), {fd.src, static_cast<int>(x1)}};
          std::pair<ElemRef, std::pair<int, int>> rhs{m1, {fd.dst, x.action[f][x1]}};
          dsu.unite(index.at(lhs), index.at(rhs));
        }
    }
    std::map<int, int> least;
    for (int i = 0; i < static_cast<int>(pairs[a].size()); ++i) {
      int r = dsu.find(i);
      if (!least.count(r)) least[r] = i;
    }
    std::vector<int> rep_idx;
    for (auto& [r, i] : least) rep_idx.push_back(i);
    std::sort(rep_idx.begin(), rep_idx.end());
    std::map<int, int> cls_of_root;
    for (size_t k = 0; k < rep_idx.size(); ++k) {
      const auto& rep = pairs[a][rep_idx[k]];
      out.fun.value[a].push_back(m.elem_name(rep.first) + "(*)" +
                                 x.value[rep.second.first][rep.second.second]);
      cls_of_root[dsu.find(rep_idx[k])] = static_cast<int>(k);
    }
    for (int i = 0; i < static_cast<int>(pairs[a].size()); ++i)
      out.class_of[a][pairs[a][i]] = cls_of_root[dsu.find(i)];
  }
  // Morphism action by right action on the module coordinate of a class
  // representative (well-definedness is property-tested).
  for (int h = 0; h < c.n_morphisms(); ++h) {
    const auto& hd = c.morphism(h);
    // Representatives at hd.src, in class order.
    std::vector<std::pair<ElemRef, std::pair<int, int>>> reps(out.fun.value[hd.src].size());
    {
      std::vector<bool> seen(reps.size(), false);
      for (const auto& [p, k] : out.class_of[hd.src])
        if (!seen[k]) {
          reps[k] = p;
          seen[k] = true;
        }
      // class_of iterates pairs in sorted order, so the first pair seen
      // for each class is its lex-least representative.
    }
    for (const auto& rep : reps) {
      ElemRef moved = m.ract(c.mor_ref(h), rep.first);
      out.fun.action[h].push_back(out.class_of[hd.dst].at({moved, rep.second}));
    }
  }
  return out;
}

ValidationReport Coalgebra::validate() const {
  ValidationReport report;
  const FinCategory& c = *carrier->base;
  ApplyResult mx = apply_module(*module, *carrier);
  // Typing of the stored representatives.
  for (int a : c.objects())
    for (size_t xi = 0; xi < carrier->value[a].size(); ++xi) {
      const auto& [m1, x1] = structure[a][xi];
      if (m1.dst != a || m1.src != x1.first ||
          x1.second >= static_cast<int>(carrier->value[x1.first].size())) {
        report.push_back({"structure representative badly typed",
                          c.obj_name(a) + " " + carrier->value[a][xi]});
      }
    }
  if (!report.empty()) return report;
  // Naturality: (M(.)X)f . e_a = e_a' . Xf for every f : a -> a'.
  for (int f = 0; f < c.n_morphisms(); ++f) {
    const auto& fd = c.morphism(f);
    for (size_t xi = 0; xi < carrier->value[fd.src].size(); ++xi) {
      const auto& [m1, x1] = structure[fd.src][xi];
      int lhs = mx.cls(fd.dst, module->ract(c.mor_ref(f), m1), x1.first, x1.second);
      int x2 = carrier->action[f][xi];
      const auto& [m2, z2] = structure[fd.dst][x2];
      int rhs = mx.cls(fd.dst, m2, z2.first, z2.second);
      if (lhs != rhs)
        report.push_back({"naturality of e fails",
                          "(" + c.morphism(f).id + ", " + carrier->value[fd.src][xi] + ")"});
    }
  }
  return report;
}

ValidationReport validate_pointing(const Mod& m, const Pointing& c) {
  ValidationReport report;
  const Cat& base = m.src();
  auto objs = base.objects();
  auto lookup = [&](const MorRef& f) -> const ElemRef* {
    auto it = c.point.find(f);
    return it == c.point.end() ? nullptr : &it->second;
  };
  for (int a : objs)
    for (int b : objs)
      for (const MorRef& f : base.hom(a, b)) {
        const ElemRef* cf = lookup(f);
        if (!cf) {
          report.push_back({"pointing not total", base.mor_name(f)});
          continue;
        }
        if (cf->src != a || cf->dst != b)
          report.push_back({"pointing badly typed", base.mor_name(f)});
      }
  if (!report.empty()) return report;
  for (int a : objs)
    for (int b : objs)
      for (const MorRef& f : base.hom(a, b)) {
        const ElemRef& cf = *lookup(f);
        for (int b2 : objs)
          for (const MorRef& g : base.hom(b, b2))
            if (*lookup(base.compose(g, f)) != m.ract(g, cf))
              report.push_back({"naturality c(g.f) = g @ c(f) fails",
                                "(" + base.mor_name(g) + ", " + base.mor_name(f) + ")"});
        for (int a0 : objs)
          for (const MorRef& h : base.hom(a0, a))
            if (*lookup(base.compose(f, h)) != m.lact(cf, h))
              report.push_back({"naturality c(f.h) = c(f) @ h fails",
                                "(" + base.mor_name(f) + ", " + base.mor_name(h) + ")"});
      }
  return report;
}

}  // namespace selfsim
