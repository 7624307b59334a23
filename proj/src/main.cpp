#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "selfsim/finalcoalg.hpp"
#include "selfsim/io.hpp"

using namespace selfsim;

namespace {

// Structured report: every record line carries one of the stable
// prefixes; the exit code mirrors the worst verdict.
struct Report {
  int fails = 0;

  void run(const std::string& cmd) { std::cout << "RUN " << cmd << "\n"; }
  void param(const std::string& k, const std::string& v) {
    std::cout << "PARAM " << k << "=" << v << "\n";
  }
  void verdict(bool ok, const std::string& what) {
    std::cout << "VERDICT " << (ok ? "ok" : "fail") << " " << what << "\n";
    if (!ok) ++fails;
  }
  void witness(const std::string& w) { std::cout << "WITNESS " << w << "\n"; }
  void count(long long n, const std::string& what) {
    std::cout << "COUNT " << n << " " << what << "\n";
  }
  void warn(const std::string& w) { std::cout << "WARN " << w << "\n"; }
  void text(const std::string& t) { std::cout << t << "\n"; }

  int exit_code() const { return fails ? 1 : 0; }
};

EnumBudget make_budget() {
  EnumBudget b;
  if (const char* env = std::getenv("SELFSIM_MAX_ENUM")) b.max_items = std::atoll(env);
  return b;
}

std::vector<int> pick_anchors(const Cat& c, const std::string& anchor) {
  if (!anchor.empty()) return {resolve_object(c, anchor)};
  return c.objects();
}

int run_validate(Report& rep, const std::string& file) {
  SystemFile sys = load_system(file);
  if (sys.builtin) {
    rep.verdict(true, "builtin " + sys.builtin->key + " (validated by construction)");
    return rep.exit_code();
  }
  auto show = [&](const std::string& what, const ValidationReport& r) {
    rep.verdict(r.empty(), what);
    for (const auto& [name, why] : r) rep.witness(name + ": " + why);
  };
  show("category " + sys.category->name(), sys.category->validate());
  for (const auto& m : sys.modules) show("module " + m->name(), m->validate());
  for (const auto& x : sys.functors) show("functor " + x->fname, x->validate());
  for (const auto& e : sys.coalgebras) show("coalgebra " + e->name, e->validate());
  if (sys.pointing)
    show("pointing", validate_pointing(sys.active_module(), *sys.pointing));
  return rep.exit_code();
}

int run_flat(Report& rep, const std::string& file) {
  SystemFile sys = load_system(file);
  const Mod& m = sys.active_module();
  EnumBudget budget = make_budget();
  for (int a : m.src().objects()) {
    FlatResult r = flat_check(m, a, &budget);
    rep.verdict(r.ok, "flat at " + m.src().obj_name(a) +
                          (r.ok ? "" : " (condition " + std::to_string(r.condition) + ")"));
    if (!r.ok) rep.witness(r.witness);
  }
  return rep.exit_code();
}

int run_complexes(Report& rep, const std::string& file, int depth, const std::string& head) {
  SystemFile sys = load_system(file);
  const Mod& m = sys.active_module();
  int h = head.empty() ? -1 : resolve_object(m.src(), head);
  EnumBudget budget = make_budget();
  long long n = 0;
  for_each_complex(
      m, depth, h,
      [&](const TruncatedComplex& c) {
        ++n;
        rep.text(complex_to_string(m, c));
        return true;
      },
      &budget);
  rep.count(n, "complexes at depth " + std::to_string(depth));
  return rep.exit_code();
}

int run_solvable(Report& rep, const std::string& file, bool strong, int depth,
                 int from_level, int sample, int max_parallel) {
  SystemFile sys = load_system(file);
  const Mod& m = sys.active_module();
  EnumBudget budget = make_budget();
  if (from_level >= 0) {
    for (int lvl = from_level; lvl <= depth; ++lvl) {
      Verdict v = propagate_weak(m, lvl, sample, &budget);
      rep.verdict(v.ok, "propagated conditions at depth " + std::to_string(lvl) + "; " +
                            v.detail);
      if (!v.witness.empty()) rep.witness(v.witness);
    }
    return rep.exit_code();
  }
  Verdict v = strong ? check_strong(m, depth, sample, max_parallel, &budget)
                     : check_weak(m, depth, sample, &budget);
  rep.verdict(v.ok, std::string(strong ? "strong" : "weak") + " solvability; " + v.detail);
  if (!v.witness.empty()) rep.witness(v.witness);
  return rep.exit_code();
}

int run_compact(Report& rep, const std::string& file, const std::string& spec, int depth) {
  SystemFile sys = load_system(file);
  const Mod& m = sys.active_module();
  EnumBudget budget = make_budget();

  // Diagram spec `pair[:<head1>[,<head2>]]`: the lexicographically first
  // depth-n complex at each head (defaults to the first object).
  if (spec.rfind("pair", 0) != 0) throw parse_error(0, "unknown diagram spec: " + spec);
  std::vector<int> heads(2, m.src().objects().front());
  if (spec.size() > 4 && spec[4] == ':') {
    std::string rest = spec.substr(5);
    size_t comma = rest.find(',');
    heads[0] = resolve_object(m.src(), rest.substr(0, comma));
    if (comma != std::string::npos) heads[1] = resolve_object(m.src(), rest.substr(comma + 1));
  }
  std::vector<LazyComplex> nodes;
  for (int h : heads) {
    std::optional<TruncatedComplex> first;
    for_each_complex(
        m, depth, h,
        [&](const TruncatedComplex& c) {
          first = c;
          return false;
        },
        &budget);
    if (!first) throw empty_level("no depth-" + std::to_string(depth) + " complex at head " +
                                  m.src().obj_name(h));
    nodes.push_back(LazyComplex(*first));
  }
  Diagram d = pair_diagram(nodes[0], nodes[1]);
  CompactReport r = check_compact(m, d, depth, &budget);
  rep.verdict(r.ok, "compactness within bound; " + r.detail);
  for (size_t i = 0; i < r.final_sizes.size(); ++i)
    rep.count(r.final_sizes[i], "final cones at level " + std::to_string(i));
  return rep.exit_code();
}

int run_koenig(Report& rep, const std::string& file, int depth) {
  PreorderChain ch = load_preorder_chain(file);
  if (depth >= 0 && depth + 1 < static_cast<int>(ch.levels.size())) {
    ch.levels.resize(depth + 1);
    ch.maps.resize(depth);
  }
  auto vr = ch.validate();
  for (const auto& [what, why] : vr) rep.witness(what + ": " + why);
  if (!vr.empty()) {
    rep.verdict(false, "chain validation");
    return rep.exit_code();
  }
  KoenigReport kr = check_koenig_conditions(ch);
  rep.verdict(kr.ok, "chain conditions (nonempty levels, upward-closed upset images)");
  if (!kr.ok) rep.witness(kr.failure);
  try {
    std::vector<int> th = thread(ch);
    std::string s;
    for (size_t n = 0; n < th.size(); ++n)
      s += (n ? " <- " : "") + ch.levels[n].point_name(th[n]);
    rep.witness("thread " + s);
  } catch (const empty_preorder& e) {
    rep.verdict(false, "thread extraction");
    rep.witness(e.what());
  }
  return rep.exit_code();
}

int run_final(Report& rep, const std::string& file, int depth, const std::string& anchor,
              bool classes) {
  SystemFile sys = load_system(file);
  const Mod& m = sys.active_module();
  if (sys.identity_active()) {
    auto cof = is_cofiltered(m.src());
    if (!cof.ok) {
      rep.warn("identity-module final approximations exist only over a cofiltered base; "
               "the category " + m.src().name() + " must be cofiltered");
      rep.witness(cof.failure);
      rep.verdict(false, "cofiltered base precondition");
      return rep.exit_code();
    }
  }
  EnumBudget budget = make_budget();
  ColimitApprox approx = build_approx(m, depth, pick_anchors(m.src(), anchor), &budget);
  for (int b : approx.anchors()) {
    rep.count(approx.n_classes(b), "classes @ anchor " + m.src().obj_name(b) + " at depth " +
                                       std::to_string(depth));
    if (classes)
      for (int k = 0; k < approx.n_classes(b); ++k) rep.text(approx.class_dump(b, k));
  }
  rep.verdict(true, "approximation built at depth " + std::to_string(depth));
  return rep.exit_code();
}

int run_solve(Report& rep, const std::string& file, const std::string& coalg, int depth) {
  SystemFile sys = load_system(file);
  const Coalgebra* e = sys.find_coalgebra(coalg);
  if (!e) throw parse_error(0, "unknown coalgebra: " + coalg);
  EnumBudget budget = make_budget();
  SolveReport r = solve(*e, depth, &budget);
  for (const auto& [ax, k] : r.cls)
    rep.witness("sol " + sys.category->obj_name(ax.first) + "/" +
                e->carrier->value[ax.first][ax.second] + " = class " + std::to_string(k));
  for (const auto& f : r.failures) rep.witness(f);
  rep.verdict(r.ok, "solution square at depth " + std::to_string(depth));
  return rep.exit_code();
}

int run_example(Report& rep, const std::string& which, const std::string& demo, int depth,
                int prefix, int alphabet) {
  if (which == "streams" && demo == "zip") {
    ZipDemoReport r = zip_demo(alphabet, prefix);
    for (const auto& l : r.lines) rep.witness(l);
    rep.verdict(r.ok, "zip prefixes match direct interleaving; " + r.detail);
  } else if (which == "trees" && demo == "shapes") {
    auto shapes = TreeModule::shapes(depth, 1);
    for (const auto& s : shapes) rep.text(s);
    rep.count(static_cast<long long>(shapes.size()),
              "tree shapes at depth " + std::to_string(depth));
    rep.verdict(true, "shape enumeration");
  } else if (which == "freyd" && demo == "beh") {
    Pos01Cat c(4);
    FreydModule m(c);
    EnumBudget budget = make_budget();
    Verdict s = beh_surjective(m, depth);
    rep.verdict(s.ok, "behaviour digits onto all strings; " + s.detail);
    Verdict w = beh_well_defined(m, std::min(depth, 2), &budget);
    rep.verdict(w.ok, "behaviour well-defined; " + w.detail);
  } else if (which == "lin" && demo == "factorize") {
    LinOpCat c(3);
    LinModule m(c, LinFunctor::kStarOmega, 2);
    LinFactorizationOracle oracle;
    EnumBudget budget = make_budget();
    TruncatedComplex c1(2), c2(1);
    c1.push(m.elem(1, 2, {0, 1}));
    c2.push(m.elem(2, 1, {2}));
    Diagram d = pair_diagram(LazyComplex(c1), LazyComplex(c2));
    auto fin = factorization_final_subset(m, d, 1, oracle, &budget);
    rep.count(static_cast<long long>(fin.size()), "cones in the final family at level 1");
    rep.verdict(!fin.empty(), "factorization produced a nonempty final family");
  } else {
    throw parse_error(0, "unknown demo: " + which + " " + demo);
  }
  return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"self-similarity system analyzer"};
  app.require_subcommand(1);

  std::string file, head, anchor, diagram, coalg, which, demo;
  int depth = 2, from_level = -1, sample = 40, max_parallel = 6, prefix = 6, alphabet = 2;
  bool strong = false, weak = false, counts = false, classes = false;

  auto* c_validate = app.add_subcommand("validate", "check all declared tables");
  c_validate->add_option("file", file)->required();

  auto* c_flat = app.add_subcommand("flat", "flatness at every object within bound");
  c_flat->add_option("file", file)->required();

  auto* c_complexes = app.add_subcommand("complexes", "enumerate depth-n complexes");
  c_complexes->add_option("file", file)->required();
  c_complexes->add_option("--depth", depth);
  c_complexes->add_option("--head", head);

  auto* c_solvable = app.add_subcommand("solvable", "solvability conditions at depth n");
  c_solvable->add_option("file", file)->required();
  c_solvable->add_flag("--strong", strong);
  c_solvable->add_flag("--weak", weak);
  c_solvable->add_option("--depth", depth);
  c_solvable->add_option("--from-level", from_level);
  c_solvable->add_option("--sample", sample);
  c_solvable->add_option("--max-parallel", max_parallel);

  auto* c_compact = app.add_subcommand("compact", "compactness of a diagram's cone chain");
  c_compact->add_option("file", file)->required();
  c_compact->add_option("--diagram", diagram)->required();
  c_compact->add_option("--depth", depth);

  auto* c_koenig = app.add_subcommand("koenig", "chain conditions and thread extraction");
  c_koenig->add_option("file", file)->required();
  c_koenig->add_option("--depth", from_level);

  auto* c_final = app.add_subcommand("final", "depth-n behaviour approximation");
  c_final->add_option("file", file)->required();
  c_final->add_option("--depth", depth);
  c_final->add_option("--anchor", anchor);
  c_final->add_flag("--counts", counts);
  c_final->add_flag("--classes", classes);

  auto* c_solve = app.add_subcommand("solve", "classify coalgebra unfoldings");
  c_solve->add_option("file", file)->required();
  c_solve->add_option("--coalgebra", coalg)->required();
  c_solve->add_option("--depth", depth);

  auto* c_example = app.add_subcommand("example", "builtin demonstrations");
  c_example->add_option("which", which)->required();
  c_example->add_option("demo", demo)->required();
  c_example->add_option("--depth", depth);
  c_example->add_option("--prefix", prefix);
  c_example->add_option("--alphabet", alphabet);

  CLI11_PARSE(app, argc, argv);

  Report rep;
  std::string cmdline;
  for (int i = 1; i < argc; ++i) cmdline += std::string(i > 1 ? " " : "") + argv[i];
  rep.run(cmdline);

  try {
    if (c_validate->parsed()) return run_validate(rep, file);
    if (c_flat->parsed()) return run_flat(rep, file);
    if (c_complexes->parsed()) return run_complexes(rep, file, depth, head);
    if (c_solvable->parsed()) {
      if (strong == weak && from_level < 0)
        throw parse_error(0, "pick exactly one of --strong / --weak");
      return run_solvable(rep, file, strong, depth, from_level, sample, max_parallel);
    }
    if (c_compact->parsed()) return run_compact(rep, file, diagram, depth);
    if (c_koenig->parsed()) return run_koenig(rep, file, from_level);
    if (c_final->parsed()) return run_final(rep, file, depth, anchor, classes);
    if (c_solve->parsed()) return run_solve(rep, file, coalg, depth);
    if (c_example->parsed()) return run_example(rep, which, demo, depth, prefix, alphabet);
  } catch (const bound_exceeded& e) {
    rep.warn(e.what());
    return 3;
  } catch (const depth_exceeded& e) {
    rep.warn(e.what());
    return 3;
  } catch (const std::exception& e) {
    rep.warn(e.what());
    return 2;
  }
  return 2;
}
