#include <sstream>

#include "doctest.h"
#include "selfsim/io.hpp"

using namespace selfsim;

namespace {

SystemFile parse(const std::string& text) {
  std::istringstream in(text);
  return parse_system(in, "<test>");
}

int parse_fails_at(const std::string& text) {
  try {
    parse(text);
  } catch (const parse_error& e) {
    return e.line;
  }
  return -1;
}

}  // namespace

TEST_CASE("system files: category sections") {
  SystemFile sys = parse(
      "# comment\n"
      "category vee\n"
      "object a\n"
      "object b\n"
      "object bot\n"
      "morphism la : bot -> a\n"
      "morphism lb : bot -> b\n");
  REQUIRE(sys.category != nullptr);
  CHECK(sys.category->n_objects() == 3);
  CHECK(sys.category->validate().empty());
  CHECK(sys.category->hom(sys.category->object_index("bot"),
                          sys.category->object_index("a")).size() == 1);
  // No module section: the identity module is the active one.
  CHECK(sys.identity_active());
  CHECK(sys.active_module().name() == "id[vee]");
}

TEST_CASE("system files: modules, actions and pointing") {
  SystemFile sys = parse(
      "category one\n"
      "object 1\n"
      "module letters on one\n"
      "element l0 : 1 -/-> 1\n"
      "element l1 : 1 -/-> 1\n"
      "point id:1 = l0\n");
  REQUIRE(sys.modules.size() == 1);
  const TableModule& m = *sys.modules[0];
  CHECK(m.validate().empty());
  CHECK(m.elems(0, 0).size() == 2);
  REQUIRE(sys.pointing.has_value());
  CHECK(validate_pointing(m, *sys.pointing).empty());
  CHECK_FALSE(sys.identity_active());
}

TEST_CASE("system files: functors and coalgebras") {
  SystemFile sys = parse(
      "category one\n"
      "object 1\n"
      "module letters on one\n"
      "element l0 : 1 -/-> 1\n"
      "element l1 : 1 -/-> 1\n"
      "functor states on one\n"
      "value 1 = { p, q }\n"
      "coalgebra flip : states -> letters (.) states\n"
      "e 1 p = l0 (*) q\n"
      "e 1 q = l1 (*) p\n");
  REQUIRE(sys.coalgebras.size() == 1);
  const Coalgebra& e = *sys.coalgebras[0];
  CHECK(e.validate().empty());
  CHECK(sys.find_coalgebra("flip") == &e);
  CHECK(sys.find_coalgebra("nope") == nullptr);
  // p outputs l0 and moves to q.
  auto [m1, next] = e.structure[0][0];
  CHECK(sys.modules[0]->elem_name(m1) == "l0");
  CHECK(e.carrier->value[next.first][next.second] == "q");
}

TEST_CASE("system files: errors carry line numbers") {
  CHECK(parse_fails_at("object a\n") == 1);                      // before category
  CHECK(parse_fails_at("category c\nmorphism f : a -> b\n") == 2);
  CHECK(parse_fails_at("category c\nobject a\nelement x : a -/-> a\n") == 3);
  CHECK(parse_fails_at("category c\nobject a\n\nnonsense here\n") == 4);
  CHECK(parse_fails_at("category c\nobject a\nmodule m on other\n") == 3);
  // Incomplete coalgebra rows: q has no e-line.
  CHECK(parse_fails_at(
            "category one\nobject 1\n"
            "module l on one\nelement l0 : 1 -/-> 1\n"
            "functor s on one\nvalue 1 = { p, q }\n"
            "coalgebra e : s -> l (.) s\n"
            "e 1 p = l0 (*) q\n") >= 0);
}

TEST_CASE("builtin references") {
  CHECK(is_builtin_ref("builtin:streams(alphabet=2,bound=3)"));
  CHECK_FALSE(is_builtin_ref("streams.sys"));
  BuiltinSystem b = make_builtin("builtin:streams(alphabet=2,bound=3)");
  CHECK(b.cat->objects().size() == 3);
  CHECK(b.mod->elems(1, 1).size() == 2);
  CHECK_THROWS_AS(make_builtin("builtin:nosuch(bound=2)"), parse_error);
  CHECK_THROWS_AS(make_builtin("builtin:streams(wat=1)"), parse_error);
  CHECK_THROWS_AS(make_builtin("builtin:streams(bound=x)"), parse_error);
  // Defaults apply when parameters are omitted.
  BuiltinSystem d = make_builtin("builtin:lin()");
  CHECK(d.cat->objects().size() == 4);
  CHECK(d.oracle != nullptr);
}

TEST_CASE("preorder chain files") {
  std::istringstream in(
      "preorder P0\npoint x y\nle x <= y\n"
      "preorder P1\npoint u v\n"
      "map f : P1 -> P0\nsend u = x\nsend v = y\n");
  PreorderChain ch = parse_preorder_chain(in);
  REQUIRE(ch.levels.size() == 2);
  REQUIRE(ch.maps.size() == 1);
  CHECK(ch.validate().empty());
  CHECK(ch.levels[0].le(0, 1));
  CHECK(ch.maps[0][1] == 1);
  std::vector<int> th = thread(ch);
  REQUIRE(th.size() == 2);
  CHECK(ch.maps[0][th[1]] == th[0]);

  std::istringstream bad("preorder P0\npoint x\nle x <= z\n");
  CHECK_THROWS_AS(parse_preorder_chain(bad), parse_error);
}

TEST_CASE("zip demo output matches direct interleaving") {
  ZipDemoReport r = zip_demo(2, 6);
  CHECK(r.ok);
  CHECK(r.lines.size() >= 20);
  for (const auto& l : r.lines) CHECK(l.find("MISMATCH") == std::string::npos);
}
