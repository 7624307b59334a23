#include "selfsim/fincat.hpp"

#include <algorithm>
#include <numeric>

namespace selfsim {

void FinCategory::add_object(const std::string& id) {
  if (sealed_) throw std::logic_error("category already sealed");
  if (obj_index_.count(id)) throw std::invalid_argument("redeclared object " + id);
  obj_index_[id] = static_cast<int>(objs_.size());
  objs_.push_back(id);
}

void FinCategory::add_morphism(const std::string& id, const std::string& src,
                               const std::string& dst) {
  if (sealed_) throw std::logic_error("category already sealed");
  if (mor_index_.count(id)) throw std::invalid_argument("redeclared morphism " + id);
  auto s = obj_index_.find(src);
  auto d = obj_index_.find(dst);
  if (s == obj_index_.end()) throw std::invalid_argument("unknown object " + src);
  if (d == obj_index_.end()) throw std::invalid_argument("unknown object " + dst);
  mor_index_[id] = static_cast<int>(mors_.size());
  mors_.push_back({id, s->second, d->second});
}

void FinCategory::set_compose(const std::string& g, const std::string& f,
                              const std::string& h) {
  if (sealed_) throw std::logic_error("category already sealed");
  pending_.push_back({g, f, h});
}

void FinCategory::seal() {
  if (sealed_) return;
  // Auto-generated identities.
  for (const auto& o : objs_) {
    std::string id = "id:" + o;
    if (mor_index_.count(id)) throw std::invalid_argument("reserved morphism id " + id);
    mor_index_[id] = static_cast<int>(mors_.size());
    mors_.push_back({id, obj_index_[o], obj_index_[o]});
  }
  // Sort objects and morphisms by id for deterministic handles.
  {
    std::vector<int> operm(objs_.size());
    std::iota(operm.begin(), operm.end(), 0);
    std::sort(operm.begin(), operm.end(),
              [&](int a, int b) { return objs_[a] < objs_[b]; });
    std::vector<int> oinv(objs_.size());
    std::vector<std::string> objs2;
    for (size_t i = 0; i < operm.size(); ++i) {
      oinv[operm[i]] = static_cast<int>(i);
      objs2.push_back(objs_[operm[i]]);
    }
    objs_ = std::move(objs2);
    obj_index_.clear();
    for (size_t i = 0; i < objs_.size(); ++i) obj_index_[objs_[i]] = static_cast<int>(i);
    for (auto& m : mors_) {
      m.src = oinv[m.src];
      m.dst = oinv[m.dst];
    }
  }
  std::sort(mors_.begin(), mors_.end(),
            [](const MorData& a, const MorData& b) { return a.id < b.id; });
  mor_index_.clear();
  for (size_t i = 0; i < mors_.size(); ++i) mor_index_[mors_[i].id] = static_cast<int>(i);

  identity_.assign(objs_.size(), -1);
  for (size_t i = 0; i < objs_.size(); ++i) identity_[i] = mor_index_["id:" + objs_[i]];

  // Composition: declared entries plus identity laws.
  for (const auto& p : pending_) {
    auto gi = mor_index_.find(p.g);
    auto fi = mor_index_.find(p.f);
    auto hi = mor_index_.find(p.h);
    if (gi == mor_index_.end()) throw std::invalid_argument("unknown morphism " + p.g);
    if (fi == mor_index_.end()) throw std::invalid_argument("unknown morphism " + p.f);
    if (hi == mor_index_.end()) throw std::invalid_argument("unknown morphism " + p.h);
    comp_[{gi->second, fi->second}] = hi->second;
  }
  pending_.clear();
  for (int m = 0; m < n_morphisms(); ++m) {
    comp_[{m, identity_[mors_[m].src]}] = m;
    comp_[{identity_[mors_[m].dst], m}] = m;
  }
  sealed_ = true;
}

int FinCategory::object_index(const std::string& id) const {
  auto it = obj_index_.find(id);
  return it == obj_index_.end() ? -1 : it->second;
}

int FinCategory::morphism_index(const std::string& id) const {
  auto it = mor_index_.find(id);
  return it == mor_index_.end() ? -1 : it->second;
}

MorRef FinCategory::mor_ref(const std::string& id) const {
  int m = morphism_index(id);
  if (m < 0) throw std::invalid_argument("unknown morphism " + id);
  return mor_ref(m);
}

std::optional<int> FinCategory::compose_raw(int g, int f) const {
  auto it = comp_.find({g, f});
  return it == comp_.end() ? std::nullopt : std::optional<int>(it->second);
}

ValidationReport FinCategory::validate() const {
  ValidationReport report;
  auto nm = [&](int m) { return mors_[m].id; };
  // Typing and totality of the composition table.
  for (const auto& [key, h] : comp_) {
    auto [g, f] = key;
    if (mors_[f].dst != mors_[g].src) {
      report.push_back({"composition declared for non-composable pair",
                        "(" + nm(g) + ", " + nm(f) + ")"});
      continue;
    }
    if (mors_[h].src != mors_[f].src || mors_[h].dst != mors_[g].dst)
      report.push_back({"composite has wrong source/target",
                        nm(g) + " . " + nm(f) + " = " + nm(h)});
  }
  for (int f = 0; f < n_morphisms(); ++f)
    for (int g = 0; g < n_morphisms(); ++g) {
      if (mors_[f].dst != mors_[g].src) continue;
      if (!comp_.count({g, f}))
        report.push_back({"composition not total at (g,f)",
                          "(" + nm(g) + ", " + nm(f) + ")"});
    }
  if (!report.empty()) return report;
  // Identity laws.
  for (int f = 0; f < n_morphisms(); ++f) {
    int l = *compose_raw(identity_[mors_[f].dst], f);
    int r = *compose_raw(f, identity_[mors_[f].src]);
    if (l != f) report.push_back({"identity law id.f = f fails", nm(f)});
    if (r != f) report.push_back({"identity law f.id = f fails", nm(f)});
  }
  // Associativity over all composable triples.
  for (int f = 0; f < n_morphisms(); ++f)
    for (int g = 0; g < n_morphisms(); ++g) {
      if (mors_[f].dst != mors_[g].src) continue;
      int gf = *compose_raw(g, f);
      for (int h = 0; h < n_morphisms(); ++h) {
        if (mors_[g].dst != mors_[h].src) continue;
        int hg = *compose_raw(h, g);
        if (*compose_raw(h, gf) != *compose_raw(hg, f))
          report.push_back({"associativity fails",
                            "(" + nm(h) + ", " + nm(g) + ", " + nm(f) + ")"});
      }
    }
  return report;
}

FinCategory FinCategory::opposite() const {
  FinCategory op(name_ + "^op");
  op.objs_ = objs_;
  op.obj_index_ = obj_index_;
  op.mors_ = mors_;
  for (auto& m : op.mors_) std::swap(m.src, m.dst);
  op.mor_index_ = mor_index_;
  op.identity_ = identity_;
  for (const auto& [key, h] : comp_) op.comp_[{key.second, key.first}] = h;
  op.sealed_ = true;
  return op;
}

std::vector<int> FinCategory::objects() const {
  std::vector<int> out(objs_.size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

std::vector<MorRef> FinCategory::hom(int a, int b) const {
  std::vector<MorRef> out;
  for (int m = 0; m < n_morphisms(); ++m)
    if (mors_[m].src == a && mors_[m].dst == b) out.push_back(mor_ref(m));
  return out;
}

MorRef FinCategory::identity(int a) const { return mor_ref(identity_[a]); }

MorRef FinCategory::compose(MorRef g, MorRef f) const {
  auto h = compose_raw(static_cast<int>(g.code), static_cast<int>(f.code));
  if (!h) throw std::logic_error("composition missing; category not validated");
  return mor_ref(*h);
}

ValidationReport FinFunctor::validate() const {
  ValidationReport report;
  const FinCategory& s = *source;
  const FinCategory& t = *target;
  for (int m = 0; m < s.n_morphisms(); ++m) {
    const auto& md = s.morphism(m);
    const auto& td = t.morphism(mor_map[m]);
    if (td.src != obj_map[md.src] || td.dst != obj_map[md.dst])
      report.push_back({"functor breaks sources/targets", md.id});
  }
  for (int a : s.objects())
    if (mor_map[s.identity(a).code] != t.identity(obj_map[a]).code)
      report.push_back({"functor breaks identities", s.obj_name(a)});
  for (int f = 0; f < s.n_morphisms(); ++f)
    for (int g = 0; g < s.n_morphisms(); ++g) {
      if (s.morphism(f).dst != s.morphism(g).src) continue;
      MorRef gf = s.compose(s.mor_ref(g), s.mor_ref(f));
      MorRef lhs = t.mor_ref(mor_map[gf.code]);
      MorRef rhs = t.compose(t.mor_ref(mor_map[g]), t.mor_ref(mor_map[f]));
      if (lhs != rhs)
        report.push_back({"functor breaks composition",
                          "(" + s.morphism(g).id + ", " + s.morphism(f).id + ")"});
    }
  return report;
}

ValidationReport validate_category(const FinCategory& c) { return c.validate(); }

CofilteredResult is_cofiltered(const Cat& c) {
  auto objs = c.objects();
  if (objs.empty()) return {false, "category is empty"};
  for (int a : objs)
    for (int a2 : objs) {
      if (a2 < a) continue;
      if (!c.span(a, a2))
        return {false, "no span over pair (" + c.obj_name(a) + ", " + c.obj_name(a2) + ")"};
    }
  for (int a : objs)
    for (int b : objs)
      for (const MorRef& u : c.hom(a, b))
        for (const MorRef& v : c.hom(a, b)) {
          if (v < u || u == v) continue;
          if (!c.fork(u, v))
            return {false, "no fork for parallel pair (" + c.mor_name(u) + ", " +
                               c.mor_name(v) + ") : " + c.obj_name(a) + " -> " +
                               c.obj_name(b)};
        }
  return {true, ""};
}

namespace {

// All cones over d with the given vertex, in lex order of leg choices.
void enumerate_cones(const FinCategory& c, const FinFunctor& d, int vertex,
                     const std::function<void(const std::vector<MorRef>&)>& fn) {
  const FinCategory& shape = *d.source;
  int n = shape.n_objects();
  std::vector<std::vector<MorRef>> cands(n);
  for (int j = 0; j < n; ++j) {
    cands[j] = c.hom(vertex, d.obj_map[j]);
    if (cands[j].empty()) return;
  }
  std::vector<MorRef> legs(n);
  std::function<void(int)> rec = [&](int j) {
    if (j == n) {
      for (int m = 0; m < shape.n_morphisms(); ++m) {
        const auto& md = shape.morphism(m);
        if (c.compose(c.mor_ref(d.mor_map[m]), legs[md.src]) != legs[md.dst]) return;
      }
      fn(legs);
      return;
    }
    for (const MorRef& leg : cands[j]) {
      legs[j] = leg;
      rec(j + 1);
    }
  };
  rec(0);
}

}  // namespace

std::optional<LimitCone> limit_of_finite_diagram(const FinCategory& c, const FinFunctor& d) {
  if (d.source->n_objects() == 0)
    throw std::invalid_argument("diagram shape must be nonempty");
  std::vector<LimitCone> cones;
  for (int v : c.objects())
    enumerate_cones(c, d, v, [&](const std::vector<MorRef>& legs) {
      cones.push_back({v, legs});
    });
  for (const LimitCone& cand : cones) {
    bool universal = true;
    for (const LimitCone& other : cones) {
      int factorizations = 0;
      for (const MorRef& h : c.hom(other.vertex, cand.vertex)) {
        bool ok = true;
        for (size_t j = 0; j < cand.legs.size(); ++j)
          if (c.compose(cand.legs[j], h) != other.legs[j]) {
            ok = false;
            break;
          }
        if (ok) ++factorizations;
      }
      if (factorizations != 1) {
        universal = false;
        break;
      }
    }
    if (universal) return cand;
  }
  return std::nullopt;
}

FinPreorder FinPreorder::chain(int n) {
  std::vector<std::string> pts;
  for (int i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) le[i][j] = true;
  return FinPreorder(std::move(pts), std::move(le));
}

FinPreorder FinPreorder::antichain(int n) {
  std::vector<std::string> pts;
  for (int i = 0; i < n; ++i) pts.push_back("p" + std::to_string(i));
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) le[i][i] = true;
  return FinPreorder(std::move(pts), std::move(le));
}

int FinPreorder::point_index(const std::string& id) const {
  for (int i = 0; i < size(); ++i)
    if (points_[i] == id) return i;
  return -1;
}

ValidationReport FinPreorder::validate() const {
  ValidationReport report;
  int n = size();
  for (int i = 0; i < n; ++i)
    if (!le_[i][i]) report.push_back({"reflexivity fails", points_[i]});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (le_[i][j] && le_[j][k] && !le_[i][k])
          report.push_back({"transitivity fails",
                            points_[i] + " <= " + points_[j] + " <= " + points_[k]});
  return report;
}

ValidationReport MonotoneMap::validate() const {
  ValidationReport report;
  for (int x = 0; x < source->size(); ++x)
    for (int y = 0; y < source->size(); ++y)
      if (source->le(x, y) && !target->le(point_map[x], point_map[y]))
        report.push_back({"monotonicity fails",
                          source->point_name(x) + " <= " + source->point_name(y)});
  return report;
}

std::set<int> upset_closure(const FinPreorder& p, const std::set<int>& s) {
  std::set<int> out;
  for (int x : s)
    for (int y = 0; y < p.size(); ++y)
      if (p.le(x, y)) out.insert(y);
  return out;
}

std::vector<int> final_subset(const FinPreorder& p) {
  if (p.size() == 0) throw empty_preorder("final_subset of empty preorder");
  int n = p.size();
  // Strongly-connected le-classes; class handle = least member.
  std::vector<int> cls(n, -1);
  for (int i = 0; i < n; ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = i;
    for (int j = i + 1; j < n; ++j)
      if (p.le(i, j) && p.le(j, i)) cls[j] = i;
  }
  // A class is maximal if nothing strictly above it exists.
  std::vector<int> result;
  for (int i = 0; i < n; ++i) {
    if (cls[i] != i) continue;
    bool maximal = true;
    for (int j = 0; j < n && maximal; ++j)
      if (cls[j] != cls[i] && p.le(i, j)) maximal = false;
    if (!maximal) continue;
    int rep = i;
    for (int j = i; j < n; ++j)
      if (cls[j] == i && p.point_name(j) < p.point_name(rep)) rep = j;
    result.push_back(rep);
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace selfsim
