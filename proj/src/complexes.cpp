#include "selfsim/complexes.hpp"

#include <algorithm>

namespace selfsim {

void TruncatedComplex::push(const ElemRef& m) {
  if (m.dst != objs.back())
    throw std::invalid_argument("element does not extend the complex");
  objs.push_back(m.src);
  elems.push_back(m);
}

bool check_complex(const Mod& m, const TruncatedComplex& c, std::string* why) {
  (void)m;
  if (c.objs.size() != c.elems.size() + 1) {
    if (why) *why = "object/element count mismatch";
    return false;
  }
  for (size_t i = 0; i < c.elems.size(); ++i)
    if (c.elems[i].src != c.objs[i + 1] || c.elems[i].dst != c.objs[i]) {
      if (why) *why = "element " + std::to_string(i + 1) + " badly typed";
      return false;
    }
  return true;
}

std::string complex_to_string(const Mod& m, const TruncatedComplex& c) {
  const Cat& a = m.src();
  std::string out;
  for (int i = c.depth(); i >= 1; --i)
    out += a.obj_name(c.objs[i]) + " -[" + m.elem_name(c.elems[i - 1]) + "]-> ";
  out += a.obj_name(c.objs[0]);
  return out;
}

bool check_squares(const Mod& m, const ComplexMorphism& h, std::string* why) {
  if (h.src.depth() != h.dst.depth() ||
      h.comps.size() != static_cast<size_t>(h.src.depth()) + 1) {
    if (why) *why = "depth mismatch";
    return false;
  }
  for (int i = 0; i <= h.src.depth(); ++i)
    if (h.comps[i].src != h.src.objs[i] || h.comps[i].dst != h.dst.objs[i]) {
      if (why) *why = "component " + std::to_string(i) + " badly typed";
      return false;
    }
  for (int i = 1; i <= h.src.depth(); ++i)
    if (m.lact(h.dst.elems[i - 1], h.comps[i]) != m.ract(h.comps[i - 1], h.src.elems[i - 1])) {
      if (why) *why = "square " + std::to_string(i) + " does not commute";
      return false;
    }
  return true;
}

ComplexMorphism identity_morphism(const Cat& base, const TruncatedComplex& c) {
  ComplexMorphism h{c, c, {}};
  for (int a : c.objs) h.comps.push_back(base.identity(a));
  return h;
}

ComplexMorphism compose_morphisms(const Cat& base, const ComplexMorphism& g,
                                  const ComplexMorphism& f) {
  if (f.dst != g.src) throw std::invalid_argument("complex morphisms not composable");
  ComplexMorphism h{f.src, g.dst, {}};
  for (size_t i = 0; i < f.comps.size(); ++i)
    h.comps.push_back(base.compose(g.comps[i], f.comps[i]));
  return h;
}

void for_each_complex(const Mod& m, int n, int head,
                      const std::function<bool(const TruncatedComplex&)>& fn,
                      EnumBudget* budget) {
  EnumBudget local = default_budget();
  EnumBudget& bud = budget ? *budget : local;
  const Cat& a = m.src();
  auto objs = a.objects();

  bool stop = false;
  std::function<void(TruncatedComplex&)> rec = [&](TruncatedComplex& c) {
    if (stop) return;
    if (c.depth() == n) {
      bud.charge();
      if (!fn(c)) stop = true;
      return;
    }
    for (int next : objs) {
      for (const ElemRef& e : m.elems(next, c.deepest())) {
        bud.charge();
        c.push(e);
        rec(c);
        c.objs.pop_back();
        c.elems.pop_back();
        if (stop) return;
      }
    }
  };
  for (int h : objs) {
    if (head >= 0 && h != head) continue;
    TruncatedComplex c(h);
    rec(c);
    if (stop) return;
  }
}

std::vector<TruncatedComplex> enumerate_complexes(const Mod& m, int n, int head,
                                                  EnumBudget* budget) {
  std::vector<TruncatedComplex> out;
  for_each_complex(
      m, n, head,
      [&](const TruncatedComplex& c) {
        out.push_back(c);
        return true;
      },
      budget);
  return out;
}

void for_each_morphism(const Mod& m, const TruncatedComplex& src,
                       const TruncatedComplex& dst,
                       const std::function<bool(const ComplexMorphism&)>& fn,
                       EnumBudget* budget) {
  if (src.depth() != dst.depth())
    throw std::invalid_argument("complex morphisms need equal depths");
  EnumBudget local = default_budget();
  EnumBudget& bud = budget ? *budget : local;
  const Cat& a = m.src();

  bool stop = false;
  std::vector<MorRef> comps;
  std::function<void(int)> rec = [&](int i) {
    if (stop) return;
    if (i > src.depth()) {
      ComplexMorphism h{src, dst, comps};
      if (!fn(h)) stop = true;
      return;
    }
    for (const MorRef& f : a.hom(src.objs[i], dst.objs[i])) {
      bud.charge();
      if (i >= 1 &&
          m.lact(dst.elems[i - 1], f) != m.ract(comps[i - 1], src.elems[i - 1]))
        continue;
      comps.push_back(f);
      rec(i + 1);
      comps.pop_back();
      if (stop) return;
    }
  };
  rec(0);
}

std::vector<ComplexMorphism> enumerate_morphisms(const Mod& m, const TruncatedComplex& src,
                                                 const TruncatedComplex& dst,
                                                 EnumBudget* budget) {
  std::vector<ComplexMorphism> out;
  for_each_morphism(
      m, src, dst,
      [&](const ComplexMorphism& h) {
        out.push_back(h);
        return true;
      },
      budget);
  return out;
}

TruncatedComplex truncate(const TruncatedComplex& c, int k) {
  if (k > c.depth())
    throw depth_exceeded("truncate to " + std::to_string(k) + " of depth " +
                         std::to_string(c.depth()));
  TruncatedComplex out;
  out.objs.assign(c.objs.begin(), c.objs.begin() + k + 1);
  out.elems.assign(c.elems.begin(), c.elems.begin() + k);
  return out;
}

ComplexMorphism truncate(const ComplexMorphism& h, int k) {
  ComplexMorphism out{truncate(h.src, k), truncate(h.dst, k), {}};
  out.comps.assign(h.comps.begin(), h.comps.begin() + k + 1);
  return out;
}

LazyComplex::LazyComplex(int head, Extender ext)
    : s_(std::make_shared<State>(State{TruncatedComplex(head), std::move(ext)})) {}

LazyComplex::LazyComplex(TruncatedComplex eager)
    : s_(std::make_shared<State>(State{std::move(eager), nullptr})) {}

const TruncatedComplex& LazyComplex::at(int depth) const {
  while (s_->built.depth() < depth) {
    if (!s_->ext)
      throw depth_exceeded("eager complex has depth " +
                           std::to_string(s_->built.depth()));
    s_->built.push(s_->ext(s_->built));
  }
  // Hand out an immutable memoized prefix: `built` itself may grow later.
  auto it = s_->prefixes.find(depth);
  if (it == s_->prefixes.end())
    it = s_->prefixes.emplace(depth, truncate(s_->built, depth)).first;
  return it->second;
}

Resolution::Resolution(const Coalgebra& e, int a, int x, Chooser chooser)
    : trace_(std::make_shared<std::vector<std::pair<int, int>>>()) {
  trace_->push_back({a, x});
  auto trace = trace_;
  const Coalgebra* coalg = &e;
  Chooser pick = chooser ? std::move(chooser)
                         : [coalg](int ai, int xi) { return coalg->structure[ai][xi]; };
  complex_ = std::make_shared<LazyComplex>(a, [trace, pick](const TruncatedComplex& c) {
    auto [ai, xi] = trace->at(c.depth());
    auto [m1, x1] = pick(ai, xi);
    if (static_cast<int>(trace->size()) == c.depth() + 1) trace->push_back(x1);
    return m1;
  });
}

std::vector<std::pair<int, int>> Resolution::trace(int depth) const {
  complex_->at(depth);
  return {trace_->begin(), trace_->begin() + depth + 1};
}

FinCategory materialize_complex_category(const Mod& m, int n, EnumBudget* budget) {
  auto cs = enumerate_complexes(m, n, -1, budget);
  FinCategory cat("Complex_" + std::to_string(n) + "(" + m.name() + ")");
  auto oname = [&](const TruncatedComplex& c) { return complex_to_string(m, c); };
  for (const auto& c : cs) cat.add_object(oname(c));
  const Cat& base = m.src();
  auto mname = [&](const ComplexMorphism& h) {
    std::string out = oname(h.src) + " => " + oname(h.dst) + " via";
    for (const MorRef& f : h.comps) out += " " + base.mor_name(f);
    return out;
  };
  std::vector<ComplexMorphism> all;
  for (const auto& s : cs)
    for (const auto& d : cs)
      for (const auto& h : enumerate_morphisms(m, s, d, budget)) all.push_back(h);
  for (const auto& h : all) {
    bool ident = h.src == h.dst;
    for (const MorRef& f : h.comps) ident = ident && base.is_identity(f);
    if (!ident) cat.add_morphism(mname(h), oname(h.src), oname(h.dst));
  }
  auto name_or_id = [&](const ComplexMorphism& h) {
    bool ident = h.src == h.dst;
    for (const MorRef& f : h.comps) ident = ident && base.is_identity(f);
    return ident ? "id:" + oname(h.src) : mname(h);
  };
  for (const auto& f : all)
    for (const auto& g : all) {
      if (f.dst != g.src) continue;
      if (name_or_id(f).rfind("id:", 0) == 0 || name_or_id(g).rfind("id:", 0) == 0)
        continue;  // unit entries are filled in by seal()
      cat.set_compose(name_or_id(g), name_or_id(f), name_or_id(compose_morphisms(base, g, f)));
    }
  cat.seal();
  return cat;
}

}  // namespace selfsim
