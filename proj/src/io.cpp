#include "selfsim/io.hpp"

#include <fstream>
#include <sstream>

namespace selfsim {

namespace {

std::vector<std::string> tokens_of(const std::string& line) {
  std::string clean = line.substr(0, line.find('#'));
  std::istringstream in(clean);
  std::vector<std::string> out;
  std::string t;
  while (in >> t) out.push_back(t);
  return out;
}

void expect(bool cond, int line, const std::string& what) {
  if (!cond) throw parse_error(line, what);
}

}  // namespace

const Cat& SystemFile::base() const {
  if (builtin) return *builtin->cat;
  expect(category != nullptr, 0, "system has no category");
  return *category;
}

const Mod& SystemFile::active_module() const {
  if (builtin) return *builtin->mod;
  if (!modules.empty()) return *modules.front();
  expect(category != nullptr, 0, "system has no module");
  if (!idmod_) idmod_ = std::make_unique<IdentityModule>(*category);
  return *idmod_;
}

bool SystemFile::identity_active() const {
  return !builtin && modules.empty() && category != nullptr;
}

const Coalgebra* SystemFile::find_coalgebra(const std::string& name) const {
  for (const auto& e : coalgebras)
    if (e->name == name) return e.get();
  return nullptr;
}

SystemFile parse_system(std::istream& in, const std::string& source) {
  SystemFile sys;
  sys.source = source;

  // Section state; tables are sealed when the next section starts.
  TableModule* open_module = nullptr;
  FinSetFunctor* open_functor = nullptr;
  Coalgebra* open_coalgebra = nullptr;
  // Pending fmap lines of the open functor: (line, f, x, x2).
  std::vector<std::tuple<int, std::string, std::string, std::string>> fmaps;
  std::vector<std::pair<int, std::vector<std::string>>> points;  // pointing lines

  auto close_functor = [&] {
    if (!open_functor) return;
    FinSetFunctor& x = *open_functor;
    const FinCategory& c = *x.base;
    for (int f = 0; f < c.n_morphisms(); ++f) {
      const auto& md = c.morphism(f);
      if (md.id.rfind("id:", 0) == 0) {
        for (int i = 0; i < static_cast<int>(x.value[md.src].size()); ++i)
          x.action[f].push_back(i);
      } else {
        x.action[f].assign(x.value[md.src].size(), -1);
      }
    }
    for (const auto& [line, f, xe, x2] : fmaps) {
      int fi = c.morphism_index(f);
      expect(fi >= 0, line, "unknown morphism in fmap: " + f);
      const auto& md = c.morphism(fi);
      int xi = x.elem_index(md.src, xe);
      expect(xi >= 0, line, "unknown element in fmap: " + xe);
      int x2i = x.elem_index(md.dst, x2);
      expect(x2i >= 0, line, "unknown element in fmap: " + x2);
      x.action[fi][xi] = x2i;
    }
    for (int f = 0; f < c.n_morphisms(); ++f)
      for (int i = 0; i < static_cast<int>(x.action[f].size()); ++i)
        expect(x.action[f][i] >= 0, 0,
               "functor " + x.fname + " misses fmap " + c.morphism(f).id + " on " +
                   x.value[c.morphism(f).src][i]);
    fmaps.clear();
    open_functor = nullptr;
  };
  auto close_sections = [&] {
    if (open_module && !open_module->sealed()) open_module->seal();
    open_module = nullptr;
    close_functor();
    open_coalgebra = nullptr;
  };

  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    auto t = tokens_of(line);
    if (t.empty()) continue;
    const std::string& kw = t[0];
    try {
      if (kw == "category") {
        close_sections();
        expect(t.size() == 2, ln, "usage: category <name>");
        expect(!sys.category && !sys.builtin, ln, "second category section");
        sys.category = std::make_unique<FinCategory>(t[1]);
      } else if (kw == "object") {
        expect(sys.category && !sys.category->sealed(), ln, "object outside category section");
        expect(t.size() == 2, ln, "usage: object <id>");
        sys.category->add_object(t[1]);
      } else if (kw == "morphism") {
        expect(sys.category && !sys.category->sealed(), ln,
               "morphism outside category section");
        expect(t.size() == 6 && t[2] == ":" && t[4] == "->", ln,
               "usage: morphism <id> : <src> -> <dst>");
        sys.category->add_morphism(t[1], t[3], t[5]);
      } else if (kw == "compose") {
        expect(sys.category && !sys.category->sealed(), ln, "compose outside category section");
        expect(t.size() == 6 && t[2] == "." && t[4] == "=", ln,
               "usage: compose <g> . <f> = <h>");
        sys.category->set_compose(t[1], t[3], t[5]);
      } else if (kw == "module") {
        close_sections();
        if (t.size() == 2 && is_builtin_ref(t[1])) {
          expect(!sys.category && !sys.builtin, ln, "builtin module next to other sections");
          try {
            sys.builtin = make_builtin(t[1]);
          } catch (const parse_error& e) {
            throw parse_error(ln, e.what());
          }
          continue;
        }
        expect(t.size() == 4 && t[2] == "on", ln, "usage: module <name> on <category>");
        expect(sys.category != nullptr, ln, "module before its category");
        if (!sys.category->sealed()) sys.category->seal();
        expect(t[3] == sys.category->name(), ln, "unknown category: " + t[3]);
        sys.modules.push_back(std::make_unique<TableModule>(t[1], *sys.category));
        open_module = sys.modules.back().get();
      } else if (kw == "element") {
        expect(open_module != nullptr, ln, "element outside module section");
        expect(t.size() == 6 && t[2] == ":" && t[4] == "-/->", ln,
               "usage: element <id> : <a> -/-> <b>");
        open_module->add_element(t[1], t[3], t[5]);
      } else if (kw == "lact") {
        expect(open_module != nullptr, ln, "lact outside module section");
        expect(t.size() == 6 && t[2] == "@" && t[4] == "=", ln,
               "usage: lact <m> @ <f> = <m2>");
        open_module->set_lact(t[1], t[3], t[5]);
      } else if (kw == "ract") {
        expect(open_module != nullptr, ln, "ract outside module section");
        expect(t.size() == 6 && t[2] == "@" && t[4] == "=", ln,
               "usage: ract <g> @ <m> = <m2>");
        open_module->set_ract(t[1], t[3], t[5]);
      } else if (kw == "point") {
        expect(open_module != nullptr, ln, "point outside module section");
        expect(t.size() == 4 && t[2] == "=", ln, "usage: point <f> = <m>");
        points.push_back({ln, {t[1], t[3]}});
      } else if (kw == "functor") {
        close_sections();
        expect(t.size() == 4 && t[2] == "on", ln, "usage: functor <name> on <category>");
        expect(sys.category != nullptr, ln, "functor before its category");
        if (!sys.category->sealed()) sys.category->seal();
        expect(t[3] == sys.category->name(), ln, "unknown category: " + t[3]);
        auto x = std::make_unique<FinSetFunctor>();
        x->fname = t[1];
        x->base = sys.category.get();
        x->value.resize(sys.category->n_objects());
        x->action.resize(sys.category->n_morphisms());
        sys.functors.push_back(std::move(x));
        open_functor = sys.functors.back().get();
      } else if (kw == "value") {
        expect(open_functor != nullptr, ln, "value outside functor section");
        expect(t.size() >= 4 && t[2] == "=", ln, "usage: value <obj> = { <x>, ... }");
        int a = sys.category->object_index(t[1]);
        expect(a >= 0, ln, "unknown object: " + t[1]);
        std::string inner;
        for (size_t i = 3; i < t.size(); ++i) inner += t[i];
        expect(inner.size() >= 2 && inner.front() == '{' && inner.back() == '}', ln,
               "value set must be brace-delimited");
        inner = inner.substr(1, inner.size() - 2);
        std::istringstream items(inner);
        std::string item;
        while (std::getline(items, item, ','))
          if (!item.empty()) open_functor->value[a].push_back(item);
      } else if (kw == "fmap") {
        expect(open_functor != nullptr, ln, "fmap outside functor section");
        expect(t.size() == 5 && t[3] == "=", ln, "usage: fmap <f> <x> = <x2>");
        fmaps.push_back({ln, t[1], t[2], t[4]});
      } else if (kw == "coalgebra") {
        close_sections();
        expect(t.size() == 8 && t[2] == ":" && t[4] == "->" && t[6] == "(.)", ln,
               "usage: coalgebra <name> : <functor> -> <module> (.) <functor>");
        expect(t[3] == t[7], ln, "coalgebra carrier must appear on both sides");
        FinSetFunctor* carrier = nullptr;
        for (const auto& x : sys.functors)
          if (x->fname == t[3]) carrier = x.get();
        expect(carrier != nullptr, ln, "unknown functor: " + t[3]);
        TableModule* mod = nullptr;
        for (const auto& mm : sys.modules)
          if (mm->name() == t[5]) mod = mm.get();
        expect(mod != nullptr, ln, "unknown module: " + t[5]);
        auto e = std::make_unique<Coalgebra>();
        e->name = t[1];
        e->module = mod;
        e->carrier = carrier;
        e->structure.resize(sys.category->n_objects());
        for (int a = 0; a < sys.category->n_objects(); ++a)
          e->structure[a].resize(carrier->value[a].size(), {{-1, -1, -1}, {-1, -1}});
        sys.coalgebras.push_back(std::move(e));
        open_coalgebra = sys.coalgebras.back().get();
      } else if (kw == "e") {
        expect(open_coalgebra != nullptr, ln, "e outside coalgebra section");
        expect(t.size() == 7 && t[3] == "=" && t[5] == "(*)", ln,
               "usage: e <obj> <x> = <m> (*) <x2>");
        int a = sys.category->object_index(t[1]);
        expect(a >= 0, ln, "unknown object: " + t[1]);
        int xi = open_coalgebra->carrier->elem_index(a, t[2]);
        expect(xi >= 0, ln, "unknown element: " + t[2]);
        const TableModule* mod = static_cast<const TableModule*>(open_coalgebra->module);
        int mi = mod->element_index(t[4]);
        expect(mi >= 0, ln, "unknown module element: " + t[4]);
        ElemRef m1 = mod->elem_ref(mi);
        expect(m1.dst == a, ln, "module element does not target " + t[1]);
        int x2i = open_coalgebra->carrier->elem_index(m1.src, t[6]);
        expect(x2i >= 0, ln, "unknown element: " + t[6] + " at the source object");
        open_coalgebra->structure[a][xi] = {m1, {m1.src, x2i}};
      } else {
        throw parse_error(ln, "unknown directive: " + kw);
      }

    } catch (const std::invalid_argument& ex) {
      // Table builders report redeclared / unknown ids; pin the line.
      throw parse_error(ln, ex.what());
    }
  }
  try {
    close_sections();
    if (sys.category && !sys.category->sealed()) sys.category->seal();
  } catch (const std::invalid_argument& ex) {
    throw parse_error(ln, ex.what());
  }

  // Pointing lines resolve against the first module.
  if (!points.empty()) {
    expect(!sys.modules.empty(), points.front().first, "point without a module");
    Pointing c;
    for (const auto& [pl, pf] : points) {
      MorRef f = sys.category->mor_ref(pf[0]);
      int mi = sys.modules.front()->element_index(pf[1]);
      expect(mi >= 0, pl, "unknown module element: " + pf[1]);
      c.point[f] = sys.modules.front()->elem_ref(mi);
    }
    sys.pointing = std::move(c);
  }

  // Every coalgebra entry must be present.
  for (const auto& e : sys.coalgebras)
    for (int a = 0; a < static_cast<int>(e->structure.size()); ++a)
      for (size_t xi = 0; xi < e->structure[a].size(); ++xi)
        expect(e->structure[a][xi].first.code >= 0, 0,
               "coalgebra " + e->name + " misses e " + sys.category->obj_name(a) + " " +
                   e->carrier->value[a][xi]);
  return sys;
}

SystemFile load_system(const std::string& path_or_ref) {
  if (is_builtin_ref(path_or_ref)) {
    SystemFile sys;
    sys.source = path_or_ref;
    sys.builtin = make_builtin(path_or_ref);
    return sys;
  }
  std::ifstream in(path_or_ref);
  if (!in) throw parse_error(0, "cannot open " + path_or_ref);
  return parse_system(in, path_or_ref);
}

PreorderChain parse_preorder_chain(std::istream& in) {
  PreorderChain ch;
  std::vector<std::vector<std::string>> pts;
  std::vector<std::vector<std::pair<int, int>>> rel;
  std::vector<std::map<std::string, int>> index;
  std::vector<std::map<int, int>> sends;  // per map: upper point -> lower point
  int cur = -1;       // open preorder section
  int cur_map = -1;   // open map section

  auto point_of = [&](int level, const std::string& id, int ln) {
    auto it = index[level].find(id);
    expect(it != index[level].end(), ln, "unknown point: " + id);
    return it->second;
  };

  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    auto t = tokens_of(line);
    if (t.empty()) continue;
    const std::string& kw = t[0];
    if (kw == "preorder") {
      expect(t.size() == 2, ln, "usage: preorder <name>");
      pts.push_back({});
      rel.push_back({});
      index.push_back({});
      cur = static_cast<int>(pts.size()) - 1;
      cur_map = -1;
    } else if (kw == "point") {
      expect(cur >= 0 && cur_map < 0, ln, "point outside preorder section");
      for (size_t i = 1; i < t.size(); ++i) {
        expect(!index[cur].count(t[i]), ln, "redeclared point: " + t[i]);
        index[cur][t[i]] = static_cast<int>(pts[cur].size());
        pts[cur].push_back(t[i]);
      }
    } else if (kw == "le") {
      expect(cur >= 0 && cur_map < 0, ln, "le outside preorder section");
      expect(t.size() == 4 && t[2] == "<=", ln, "usage: le <p> <= <q>");
      rel[cur].push_back({point_of(cur, t[1], ln), point_of(cur, t[3], ln)});
    } else if (kw == "map") {
      expect(t.size() == 6 && t[2] == ":" && t[4] == "->", ln,
             "usage: map <name> : <upper> -> <lower>");
      cur_map = static_cast<int>(sends.size());
      expect(cur_map + 2 <= static_cast<int>(pts.size()), ln,
             "map before both of its preorders");
      sends.push_back({});
      cur = -1;
    } else if (kw == "send") {
      expect(cur_map >= 0, ln, "send outside map section");
      expect(t.size() == 4 && t[2] == "=", ln, "usage: send <upper> = <lower>");
      int up = cur_map + 1, lo = cur_map;
      sends[cur_map][point_of(up, t[1], ln)] = point_of(lo, t[3], ln);
    } else {
      throw parse_error(ln, "unknown directive: " + kw);
    }
  }

  for (size_t l = 0; l < pts.size(); ++l) {
    int n = static_cast<int>(pts[l].size());
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) le[i][i] = true;
    for (auto [p, q] : rel[l]) le[p][q] = true;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (le[i][k] && le[k][j]) le[i][j] = true;
    ch.levels.push_back(FinPreorder(pts[l], std::move(le)));
  }
  expect(sends.size() + 1 == pts.size() || (pts.empty() && sends.empty()), 0,
         "chain needs one map per consecutive pair of preorders");
  for (size_t mi = 0; mi < sends.size(); ++mi) {
    std::vector<int> mp;
    for (int p = 0; p < static_cast<int>(pts[mi + 1].size()); ++p) {
      auto it = sends[mi].find(p);
      expect(it != sends[mi].end(), 0,
             "map " + std::to_string(mi) + " misses point " + pts[mi + 1][p]);
      mp.push_back(it->second);
    }
    ch.maps.push_back(std::move(mp));
  }
  return ch;
}

PreorderChain load_preorder_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(0, "cannot open " + path);
  return parse_preorder_chain(in);
}

int resolve_object(const Cat& c, const std::string& name) {
  for (int a : c.objects())
    if (c.obj_name(a) == name) return a;
  throw parse_error(0, "unknown object: " + name);
}

}  // namespace selfsim
