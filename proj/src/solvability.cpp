#include "selfsim/solvability.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace selfsim {

ComplexMorphism Diagram::edge_at(const Mod& m, int e, int level) const {
  const DiagramEdge& ed = edges[e];
  ComplexMorphism h{nodes[ed.src].at(level), nodes[ed.dst].at(level), {}};
  for (int i = 0; i <= level; ++i) h.comps.push_back(ed.comp(i));
  std::string why;
  if (!check_squares(m, h, &why))
    throw std::invalid_argument("diagram edge " + std::to_string(e) + " at level " +
                                std::to_string(level) + ": " + why);
  return h;
}

Diagram pair_diagram(LazyComplex a, LazyComplex b) {
  Diagram d;
  d.nodes.push_back(std::move(a));
  d.nodes.push_back(std::move(b));
  return d;
}

bool check_cone(const Mod& m, const Diagram& d, const Cone& c, int level, std::string* why) {
  if (c.legs.size() != d.nodes.size()) {
    if (why) *why = "leg count mismatch";
    return false;
  }
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    if (c.legs[i].src != c.vertex || c.legs[i].dst != d.nodes[i].at(level)) {
      if (why) *why = "leg " + std::to_string(i) + " has wrong endpoints";
      return false;
    }
    std::string sub;
    if (!check_squares(m, c.legs[i], &sub)) {
      if (why) *why = "leg " + std::to_string(i) + ": " + sub;
      return false;
    }
  }
  const Cat& base = m.src();
  for (size_t e = 0; e < d.edges.size(); ++e) {
    ComplexMorphism ed = d.edge_at(m, static_cast<int>(e), level);
    ComplexMorphism via = compose_morphisms(base, ed, c.legs[d.edges[e].src]);
    if (via.comps != c.legs[d.edges[e].dst].comps) {
      if (why) *why = "edge " + std::to_string(e) + " does not commute";
      return false;
    }
  }
  return true;
}

std::optional<SpanWitness> build_span(const Mod& m, const TruncatedComplex& c1,
                                      const TruncatedComplex& c2, int* stage,
                                      EnumBudget* budget) {
  if (c1.depth() != c2.depth())
    throw std::invalid_argument("span construction needs equal depths");
  int n = c1.depth();
  const Cat& base = m.src();
  auto sp = base.span(c1.objs[n], c2.objs[n]);
  if (!sp) {
    if (stage) *stage = n;
    return std::nullopt;
  }
  MorRef f = sp->left, f2 = sp->right;
  std::vector<int> objs_rev{f.src};           // b_n .. b_0
  std::vector<ElemRef> elems_rev;             // u_n .. u_1
  std::vector<MorRef> left_rev{f}, right_rev{f2};
  for (int i = n; i >= 1; --i) {
    ElemRef m1 = m.lact(c1.elems[i - 1], f);
    ElemRef m2 = m.lact(c2.elems[i - 1], f2);
    auto w = find_flat_span(m, m1, m2, budget);
    if (!w) {
      if (stage) *stage = i - 1;
      return std::nullopt;
    }
    elems_rev.push_back(w->apex);
    f = w->f1;
    f2 = w->f2;
    objs_rev.push_back(w->apex.dst);
    left_rev.push_back(f);
    right_rev.push_back(f2);
  }
  SpanWitness out;
  out.vertex.objs.assign(objs_rev.rbegin(), objs_rev.rend());
  out.vertex.elems.assign(elems_rev.rbegin(), elems_rev.rend());
  out.left = {out.vertex, c1, {left_rev.rbegin(), left_rev.rend()}};
  out.right = {out.vertex, c2, {right_rev.rbegin(), right_rev.rend()}};
  return out;
}

std::optional<ForkWitness> build_fork(const Mod& m, const ComplexMorphism& u,
                                      const ComplexMorphism& v, int* stage,
                                      EnumBudget* budget) {
  if (u.src != v.src || u.dst != v.dst)
    throw std::invalid_argument("fork construction needs a parallel pair");
  const TruncatedComplex& c = u.src;
  int n = c.depth();
  const Cat& base = m.src();
  auto f0 = base.fork(u.comps[n], v.comps[n]);
  if (!f0) {
    if (stage) *stage = n;
    return std::nullopt;
  }
  MorRef f = *f0;
  std::vector<int> objs_rev{f.src};
  std::vector<ElemRef> elems_rev;
  std::vector<MorRef> comps_rev{f};
  for (int i = n; i >= 1; --i) {
    ElemRef m1 = m.lact(c.elems[i - 1], f);
    auto w = find_flat_fork(m, u.comps[i - 1], v.comps[i - 1], m1, budget);
    if (!w) {
      if (stage) *stage = i - 1;
      return std::nullopt;
    }
    elems_rev.push_back(w->apex);
    f = w->f;
    objs_rev.push_back(w->apex.dst);
    comps_rev.push_back(f);
  }
  ForkWitness out;
  out.vertex.objs.assign(objs_rev.rbegin(), objs_rev.rend());
  out.vertex.elems.assign(elems_rev.rbegin(), elems_rev.rend());
  out.arrow = {out.vertex, c, {comps_rev.rbegin(), comps_rev.rend()}};
  return out;
}

std::optional<SpanWitness> search_span(const Mod& m, const TruncatedComplex& c1,
                                       const TruncatedComplex& c2, EnumBudget* budget) {
  std::optional<SpanWitness> out;
  for_each_complex(
      m, c1.depth(), -1,
      [&](const TruncatedComplex& vx) {
        std::optional<ComplexMorphism> l;
        for_each_morphism(
            m, vx, c1,
            [&](const ComplexMorphism& h) {
              l = h;
              return false;
            },
            budget);
        if (!l) return true;
        std::optional<ComplexMorphism> r;
        for_each_morphism(
            m, vx, c2,
            [&](const ComplexMorphism& h) {
              r = h;
              return false;
            },
            budget);
        if (!r) return true;
        out = SpanWitness{vx, *l, *r};
        return false;
      },
      budget);
  return out;
}

std::optional<ForkWitness> search_fork(const Mod& m, const ComplexMorphism& u,
                                       const ComplexMorphism& v, EnumBudget* budget) {
  const Cat& base = m.src();
  std::optional<ForkWitness> out;
  for_each_complex(
      m, u.src.depth(), -1,
      [&](const TruncatedComplex& vx) {
        for_each_morphism(
            m, vx, u.src,
            [&](const ComplexMorphism& h) {
              if (compose_morphisms(base, u, h).comps == compose_morphisms(base, v, h).comps) {
                out = ForkWitness{vx, h};
                return false;
              }
              return true;
            },
            budget);
        return !out;
      },
      budget);
  return out;
}

namespace {

std::vector<TruncatedComplex> lex_first_complexes(const Mod& m, int n, int sample,
                                                  EnumBudget* budget) {
  std::vector<TruncatedComplex> out;
  for_each_complex(
      m, n, -1,
      [&](const TruncatedComplex& c) {
        out.push_back(c);
        return sample <= 0 || static_cast<int>(out.size()) < sample;
      },
      budget);
  return out;
}

// First few morphisms per ordered pair, for hunting parallel pairs.
std::vector<ComplexMorphism> first_morphisms(const Mod& m, const TruncatedComplex& s,
                                             const TruncatedComplex& d, int cap,
                                             EnumBudget* budget) {
  std::vector<ComplexMorphism> out;
  for_each_morphism(
      m, s, d,
      [&](const ComplexMorphism& h) {
        out.push_back(h);
        return cap <= 0 || static_cast<int>(out.size()) < cap;
      },
      budget);
  return out;
}

// Depth-n enumeration sees parallel pairs that no deeper stage produces:
// their deepest components carry an equalization obstruction that any
// one-level extension would have to push one level down, until it becomes
// outright inconsistent. Such pairs are artifacts of the truncation, not
// counterexamples to solvability, and are recognized by the failure of a
// few levels of extension. `levels` bounds the search depth.
struct ExtMemo {
  std::map<std::tuple<int, int, MorRef, MorRef, int>, bool> verdicts;
  std::map<std::pair<MorRef, ElemRef>, ElemRef> lact;
  std::map<std::pair<MorRef, ElemRef>, ElemRef> ract;
  std::map<std::pair<int, int>, std::vector<ElemRef>> elems;
  std::map<std::pair<int, int>, std::vector<MorRef>> hom;
};

const std::vector<ElemRef>& ext_elems(const Mod& m, ExtMemo& c, int a, int b) {
  auto [it, fresh] = c.elems.try_emplace({a, b});
  if (fresh) it->second = m.elems(a, b);
  return it->second;
}

const std::vector<MorRef>& ext_hom(const Mod& m, ExtMemo& c, int a, int b) {
  auto [it, fresh] = c.hom.try_emplace({a, b});
  if (fresh) it->second = m.src().hom(a, b);
  return it->second;
}

ElemRef ext_lact(const Mod& m, ExtMemo& c, const ElemRef& e, const MorRef& f) {
  auto [it, fresh] = c.lact.try_emplace({f, e});
  if (fresh) it->second = m.lact(e, f);
  return it->second;
}

ElemRef ext_ract(const Mod& m, ExtMemo& c, const MorRef& g, const ElemRef& e) {
  auto [it, fresh] = c.ract.try_emplace({g, e});
  if (fresh) it->second = m.ract(g, e);
  return it->second;
}

bool pair_extends(const Mod& m, int S, int D, MorRef u, MorRef v, int levels,
                  ExtMemo& c, EnumBudget* budget) {
  if (levels <= 0) return true;
  auto key = std::make_tuple(S, D, u, v, levels);
  auto it = c.verdicts.find(key);
  if (it != c.verdicts.end()) return it->second;
  c.verdicts.emplace(key, false);
  const Cat& base = m.src();
  bool out = false;
  for (int S2 : base.objects()) {
    std::map<ElemRef, std::vector<ElemRef>> inv_u;  // ract(u, n') -> n'
    std::map<ElemRef, ElemRef> rv;                  // n' -> ract(v, n')
    for (const ElemRef& np : ext_elems(m, c, S2, S)) {
      inv_u[ext_ract(m, c, u, np)].push_back(np);
      rv.emplace(np, ext_ract(m, c, v, np));
    }
    if (inv_u.empty()) continue;
    if (!out)
      for (int D2 : base.objects()) {
        const auto& homs = ext_hom(m, c, S2, D2);
        const auto& deeper = ext_elems(m, c, D2, D);
        for (const MorRef& u2 : homs) {
          for (const MorRef& v2 : homs) {
            if (budget) budget->charge();
            for (const ElemRef& mp : deeper) {
              auto cand = inv_u.find(ext_lact(m, c, mp, u2));
              if (cand == inv_u.end()) continue;
              ElemRef lv = ext_lact(m, c, mp, v2);
              bool step = false;
              for (const ElemRef& np : cand->second)
                if (rv.at(np) == lv) {
                  step = true;
                  break;
                }
              if (!step) continue;
              if (pair_extends(m, S2, D2, u2, v2, levels - 1, c, budget)) out = true;
              break;  // further witnesses reach the same successor state
            }
            if (out) break;
          }
          if (out) break;
        }
        if (out) break;
      }
    if (out) break;
  }
  c.verdicts[key] = out;
  return out;
}

constexpr int kExtensionProbe = 4;

std::string sweep_note(int n, size_t found, int sample) {
  std::string note = "depth " + std::to_string(n) + "; " + std::to_string(found) +
                     " complexes swept";
  if (sample > 0) note += " (lex-first sample cap " + std::to_string(sample) + ")";
  return note;
}

}  // namespace

Verdict check_weak(const Mod& m, int n, int sample, EnumBudget* budget) {
  const Cat& base = m.src();
  auto cs = lex_first_complexes(m, n, sample, budget);
  if (cs.empty())
    return {false, "depth " + std::to_string(n), "no depth-" + std::to_string(n) + " complex"};
  int cap = sample > 0 ? 6 : 0;
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = i; j < cs.size(); ++j) {
      if (!base.span(cs[i].objs[n], cs[j].objs[n]))
        return {false, sweep_note(n, cs.size(), sample),
                "no base span over deepest objects (" + base.obj_name(cs[i].objs[n]) +
                    ", " + base.obj_name(cs[j].objs[n]) + ")"};
    }
  long long parallel = 0, artifacts = 0;
  ExtMemo memo;
  for (const auto& s : cs)
    for (const auto& d : cs) {
      auto hs = first_morphisms(m, s, d, cap, budget);
      for (size_t p = 0; p < hs.size(); ++p)
        for (size_t q = p + 1; q < hs.size(); ++q) {
          ++parallel;
          if (base.fork(hs[p].comps[n], hs[q].comps[n])) continue;
          if (!pair_extends(m, s.objs[n], d.objs[n], hs[p].comps[n], hs[q].comps[n],
                            kExtensionProbe, memo, budget)) {
            ++artifacts;
            continue;
          }
          return {false, sweep_note(n, cs.size(), sample),
                  "no base fork for the deepest components of a parallel pair " +
                      complex_to_string(m, s) + " => " + complex_to_string(m, d)};
        }
    }
  std::string note = sweep_note(n, cs.size(), sample) + "; " + std::to_string(parallel) +
                     " parallel pairs checked";
  if (artifacts)
    note += "; " + std::to_string(artifacts) +
            " unforkable pairs discarded as truncation artifacts (no depth-" +
            std::to_string(kExtensionProbe) + " extension)";
  return {true, note, ""};
}

namespace {

Verdict strong_like(const Mod& m, int n, int sample, int max_parallel, EnumBudget* budget,
                    bool allow_fallback) {
  auto cs = lex_first_complexes(m, n, sample, budget);
  if (cs.empty())
    return {false, "depth " + std::to_string(n), "no depth-" + std::to_string(n) + " complex"};
  const Cat& base = m.src();
  for (size_t i = 0; i < cs.size(); ++i)
    for (size_t j = i; j < cs.size(); ++j) {
      int stage = -1;
      auto w = build_span(m, cs[i], cs[j], &stage, budget);
      if (!w && allow_fallback) w = search_span(m, cs[i], cs[j], budget);
      if (!w) {
        if (!allow_fallback && stage < n && base.span(cs[i].objs[n], cs[j].objs[n]))
          throw flatness_failure("flat span missing during descent at stage " +
                                 std::to_string(stage) + " for pair (" +
                                 complex_to_string(m, cs[i]) + ", " +
                                 complex_to_string(m, cs[j]) + ")");
        return {false, sweep_note(n, cs.size(), sample),
                "no span over (" + complex_to_string(m, cs[i]) + ", " +
                    complex_to_string(m, cs[j]) + ")"};
      }
      std::string why;
      if (!check_squares(m, w->left, &why) || !check_squares(m, w->right, &why))
        throw std::logic_error("constructed span fails square checks: " + why);
    }
  long long parallel = 0, artifacts = 0;
  ExtMemo memo;
  for (const auto& s : cs)
    for (const auto& d : cs) {
      auto hs = first_morphisms(m, s, d, max_parallel, budget);
      for (size_t p = 0; p < hs.size(); ++p)
        for (size_t q = p + 1; q < hs.size(); ++q) {
          ++parallel;
          int stage = -1;
          auto w = build_fork(m, hs[p], hs[q], &stage, budget);
          // When the deepest components have no base fork, no fork of the
          // pair exists at all, so searching is futile.
          if (!w && allow_fallback && stage != n)
            w = search_fork(m, hs[p], hs[q], budget);
          if (!w && stage == n &&
              !pair_extends(m, s.objs[n], d.objs[n], hs[p].comps[n], hs[q].comps[n],
                            kExtensionProbe, memo, budget)) {
            ++artifacts;
            continue;
          }
          if (!w) {
            if (!allow_fallback && stage < n &&
                base.fork(hs[p].comps[n], hs[q].comps[n]))
              throw flatness_failure("flat fork missing during descent at stage " +
                                     std::to_string(stage) + " under " +
                                     complex_to_string(m, s));
            return {false, sweep_note(n, cs.size(), sample),
                    "no fork for a parallel pair " + complex_to_string(m, s) + " => " +
                        complex_to_string(m, d)};
          }
          std::string why;
          if (!check_squares(m, w->arrow, &why))
            throw std::logic_error("constructed fork fails square checks: " + why);
          if (compose_morphisms(base, hs[p], w->arrow).comps !=
              compose_morphisms(base, hs[q], w->arrow).comps)
            throw std::logic_error("constructed fork does not equalize");
        }
    }
  std::string note = sweep_note(n, cs.size(), sample) + "; " + std::to_string(parallel) +
                     " parallel pairs checked";
  if (artifacts)
    note += "; " + std::to_string(artifacts) +
            " unforkable pairs discarded as truncation artifacts (no depth-" +
            std::to_string(kExtensionProbe) + " extension)";
  return {true, note, ""};
}

}  // namespace

Verdict check_strong(const Mod& m, int n, int sample, int max_parallel, EnumBudget* budget) {
  return strong_like(m, n, sample, max_parallel, budget, true);
}

Verdict propagate_weak(const Mod& m, int n, int sample, EnumBudget* budget) {
  return strong_like(m, n, sample, 6, budget, false);
}

bool cone_le(const Mod& m, const Diagram& d, const Cone& c, const Cone& c2,
             EnumBudget* budget) {
  const Cat& base = m.src();
  bool found = false;
  for_each_morphism(
      m, c.vertex, c2.vertex,
      [&](const ComplexMorphism& h) {
        for (size_t k = 0; k < d.nodes.size(); ++k)
          if (compose_morphisms(base, c2.legs[k], h).comps != c.legs[k].comps) return true;
        found = true;
        return false;
      },
      budget);
  return found;
}

ConePreorder build_cone_preorder(const Mod& m, const Diagram& d, int n,
                                 const std::vector<TruncatedComplex>* vertex_pool,
                                 EnumBudget* budget) {
  std::vector<TruncatedComplex> pool;
  if (vertex_pool)
    pool = *vertex_pool;
  else
    pool = enumerate_complexes(m, n, -1, budget);

  ConePreorder p;
  for (const auto& vx : pool) {
    // All leg tuples, node by node, filtered by edge commutation.
    std::vector<std::vector<ComplexMorphism>> cand;
    bool dead = false;
    for (const auto& node : d.nodes) {
      cand.push_back(enumerate_morphisms(m, vx, node.at(n), budget));
      if (cand.back().empty()) {
        dead = true;
        break;
      }
    }
    if (dead) continue;
    std::vector<size_t> pick(d.nodes.size(), 0);
    for (;;) {
      Cone c{vx, {}};
      for (size_t k = 0; k < pick.size(); ++k) c.legs.push_back(cand[k][pick[k]]);
      if (check_cone(m, d, c, n)) p.cones.push_back(c);
      size_t k = 0;
      while (k < pick.size() && ++pick[k] == cand[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
  }
  int np = static_cast<int>(p.cones.size());
  std::vector<std::string> names;
  for (int i = 0; i < np; ++i) names.push_back("c" + std::to_string(i));
  std::vector<std::vector<bool>> le(np, std::vector<bool>(np, false));
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j)
      le[i][j] = i == j || cone_le(m, d, p.cones[i], p.cones[j], budget);
  p.order = FinPreorder(std::move(names), std::move(le));
  return p;
}

ValidationReport PreorderChain::validate() const {
  ValidationReport report;
  if (maps.size() + 1 != levels.size()) {
    report.push_back({"chain shape mismatch", ""});
    return report;
  }
  for (size_t n = 0; n < maps.size(); ++n) {
    const FinPreorder& hi = levels[n + 1];
    const FinPreorder& lo = levels[n];
    if (static_cast<int>(maps[n].size()) != hi.size()) {
      report.push_back({"map size mismatch", "level " + std::to_string(n)});
      continue;
    }
    for (int x = 0; x < hi.size(); ++x) {
      if (maps[n][x] < 0 || maps[n][x] >= lo.size()) {
        report.push_back({"map lands outside the target level",
                          "level " + std::to_string(n) + " point " + hi.point_name(x)});
        continue;
      }
      for (int y = 0; y < hi.size(); ++y)
        if (hi.le(x, y) && !lo.le(maps[n][x], maps[n][y]))
          report.push_back({"restriction map not monotone",
                            "level " + std::to_string(n + 1) + ": " + hi.point_name(x) +
                                " <= " + hi.point_name(y)});
    }
  }
  return report;
}

KoenigReport check_koenig_conditions(const PreorderChain& ch) {
  for (size_t n = 0; n < ch.levels.size(); ++n)
    if (ch.levels[n].size() == 0)
      return {false, "level " + std::to_string(n) + " is empty"};
  for (size_t n = 0; n < ch.maps.size(); ++n) {
    const FinPreorder& hi = ch.levels[n + 1];
    const FinPreorder& lo = ch.levels[n];
    for (int x = 0; x < hi.size(); ++x) {
      std::set<int> image;
      for (int y : upset_closure(hi, {x})) image.insert(ch.maps[n][y]);
      std::set<int> closed = upset_closure(lo, image);
      for (int z : closed)
        if (!image.count(z))
          return {false, "image of the principal upset of " + hi.point_name(x) +
                             " at level " + std::to_string(n + 1) +
                             " is not upward-closed: missing " + lo.point_name(z)};
    }
  }
  return {true, ""};
}

std::vector<int> thread(const PreorderChain& ch) {
  for (size_t n = 0; n < ch.levels.size(); ++n)
    if (ch.levels[n].size() == 0)
      throw empty_level("level " + std::to_string(n) + " is empty");
  int top = static_cast<int>(ch.levels.size()) - 1;
  // Lexicographically least point name of the top level.
  int x = 0;
  for (int y = 1; y < ch.levels[top].size(); ++y)
    if (ch.levels[top].point_name(y) < ch.levels[top].point_name(x)) x = y;
  std::vector<int> out(ch.levels.size());
  out[top] = x;
  for (int n = top - 1; n >= 0; --n) out[n] = ch.maps[n][out[n + 1]];
  return out;
}

ConeChain build_cone_chain(const Mod& m, const Diagram& d, int up_to, EnumBudget* budget) {
  ConeChain out;
  for (int n = 0; n <= up_to; ++n)
    out.levels.push_back(build_cone_preorder(m, d, n, nullptr, budget));
  for (int n = 0; n <= up_to; ++n) out.chain.levels.push_back(out.levels[n].order);
  for (int n = 0; n < up_to; ++n) {
    const auto& hi = out.levels[n + 1];
    const auto& lo = out.levels[n];
    std::vector<int> map;
    for (const Cone& c : hi.cones) {
      Cone t{truncate(c.vertex, n), {}};
      for (const auto& leg : c.legs) t.legs.push_back(truncate(leg, n));
      int idx = -1;
      for (size_t k = 0; k < lo.cones.size(); ++k)
        if (lo.cones[k].vertex == t.vertex && [&] {
              for (size_t l = 0; l < t.legs.size(); ++l)
                if (lo.cones[k].legs[l].comps != t.legs[l].comps) return false;
              return true;
            }())
          idx = static_cast<int>(k);
      if (idx < 0)
        throw std::logic_error("restriction of a cone is missing at level " +
                               std::to_string(n));
      map.push_back(idx);
    }
    out.chain.maps.push_back(std::move(map));
  }
  return out;
}

CompactReport check_compact(const Mod& m, const Diagram& d, int up_to, EnumBudget* budget) {
  CompactReport out;
  for (int n = 0; n <= up_to; ++n) {
    ConePreorder p = build_cone_preorder(m, d, n, nullptr, budget);
    if (p.cones.empty()) {
      out.ok = false;
      out.detail = "no cones at level " + std::to_string(n);
      return out;
    }
    out.final_sizes.push_back(static_cast<int>(final_subset(p.order).size()));
  }
  out.detail =
      "levels 0.." + std::to_string(up_to) +
      " nonempty; materialized preorders are finite, so final subsets are finite";
  return out;
}

Cone weak_to_strong(const Mod& m, const Diagram& d, int up_to, EnumBudget* budget) {
  ConeChain ch = build_cone_chain(m, d, up_to, budget);
  std::vector<int> thr = thread(ch.chain);
  // Diagonal assembly: layer i comes from the thread's level-i cone.
  Cone out;
  out.vertex = TruncatedComplex(ch.levels[0].cones[thr[0]].vertex.head());
  for (size_t k = 0; k < d.nodes.size(); ++k)
    out.legs.push_back(
        ComplexMorphism{out.vertex, d.nodes[k].at(0),
                        {ch.levels[0].cones[thr[0]].legs[k].comps[0]}});
  for (int i = 1; i <= up_to; ++i) {
    const Cone& ci = ch.levels[i].cones[thr[i]];
    out.vertex.push(ci.vertex.elems[i - 1]);
    for (size_t k = 0; k < d.nodes.size(); ++k) {
      out.legs[k].src = out.vertex;
      out.legs[k].dst = d.nodes[k].at(i);
      out.legs[k].comps.push_back(ci.legs[k].comps[i]);
    }
  }
  std::string why;
  if (!check_cone(m, d, out, up_to, &why))
    throw std::logic_error("diagonal cone fails verification: " + why);
  return out;
}

std::vector<Cone> factorization_final_subset(const Mod& m, const Diagram& d, int n,
                                             const FactorizationOracle& fact,
                                             EnumBudget* budget) {
  if (d.nodes.empty()) throw std::invalid_argument("factorization over an empty diagram");
  const Cat& base = m.src();
  size_t nd = d.nodes.size();
  std::vector<TruncatedComplex> nodes;
  for (const auto& nod : d.nodes) nodes.push_back(nod.at(n));
  std::vector<ComplexMorphism> edges;
  for (size_t e = 0; e < d.edges.size(); ++e)
    edges.push_back(d.edge_at(m, static_cast<int>(e), n));

  // Jointly epi cocones under the level-i objects, filtered by edge
  // commutation at that level.
  auto level_cocones = [&](int i) {
    std::vector<int> objs;
    for (const auto& c : nodes) objs.push_back(c.objs[i]);
    std::vector<EpiCocone> out;
    for (const auto& co : fact.jointly_epi(objs, budget)) {
      bool ok = true;
      for (size_t e = 0; e < edges.size() && ok; ++e)
        ok = base.compose(edges[e].comps[i], co.legs[d.edges[e].src]) ==
             co.legs[d.edges[e].dst];
      if (ok) out.push_back(co);
    }
    return out;
  };

  // Build vertex complexes z_n .. z_0 from the deepest level down. A
  // jointly epi choice at level i survives when a connecting element
  // c_{i+1} : z_{i+1} -/-> z_i closes every node's square; joint epiness
  // makes that element unique, so the state space stays finite.
  struct Partial {
    std::vector<int> zs;                    // z_i .. z_n
    std::vector<ElemRef> cs;                // c_{i+1} .. c_n
    std::vector<std::vector<MorRef>> legs;  // per level i .. n, per node
  };
  std::vector<Partial> states;
  for (const auto& co : level_cocones(n)) states.push_back({{co.vertex}, {}, {co.legs}});
  for (int i = n - 1; i >= 0; --i) {
    auto cocones = level_cocones(i);
    std::vector<Partial> next;
    for (const auto& st : states) {
      for (const auto& co : cocones) {
        std::optional<ElemRef> conn;
        for (const ElemRef& cand : m.elems(st.zs.front(), co.vertex)) {
          if (budget) budget->charge();
          bool ok = true;
          for (size_t k = 0; k < nd && ok; ++k)
            ok = m.lact(nodes[k].elems[i], st.legs.front()[k]) ==
                 m.ract(co.legs[k], cand);
          if (ok) {
            conn = cand;
            break;
          }
        }
        if (!conn) continue;
        Partial ext = st;
        ext.zs.insert(ext.zs.begin(), co.vertex);
        ext.cs.insert(ext.cs.begin(), *conn);
        ext.legs.insert(ext.legs.begin(), co.legs);
        next.push_back(std::move(ext));
      }
    }
    states = std::move(next);
  }

  std::vector<Cone> out;
  for (const auto& st : states) {
    Cone c;
    c.vertex.objs = st.zs;
    c.vertex.elems = st.cs;
    for (size_t k = 0; k < nd; ++k) {
      ComplexMorphism leg{c.vertex, nodes[k], {}};
      for (int i = 0; i <= n; ++i) leg.comps.push_back(st.legs[i][k]);
      c.legs.push_back(std::move(leg));
    }
    std::string why;
    if (!check_cone(m, d, c, n, &why))
      throw std::logic_error("factorization produced a non-cone: " + why);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace selfsim
