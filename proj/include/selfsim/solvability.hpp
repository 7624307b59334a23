#pragma once

#include "selfsim/complexes.hpp"

namespace selfsim {

// A finite diagram of (lazy) complexes: nodes plus explicitly listed
// morphism templates. An edge supplies its i-th component on demand; the
// per-level morphism is assembled and square-checked when queried.
struct DiagramEdge {
  int src = -1;
  int dst = -1;
  std::function<MorRef(int i)> comp;
};

struct Diagram {
  std::vector<LazyComplex> nodes;
  std::vector<DiagramEdge> edges;

  ComplexMorphism edge_at(const Mod& m, int e, int level) const;
};

Diagram pair_diagram(LazyComplex a, LazyComplex b);

// A cone over pr_n of a diagram: vertex complex plus one leg per node,
// commuting with every listed edge.
struct Cone {
  TruncatedComplex vertex;
  std::vector<ComplexMorphism> legs;
};

bool check_cone(const Mod& m, const Diagram& d, const Cone& c, int level,
                std::string* why = nullptr);

// Span and fork witnesses in Complex_n(M).
struct SpanWitness {
  TruncatedComplex vertex;
  ComplexMorphism left, right;
};
struct ForkWitness {
  TruncatedComplex vertex;
  ComplexMorphism arrow;  // vertex -> src of the parallel pair
};

// Flatness-descent construction of a span/fork over two depth-n
// complexes: span (resp. fork) over the deepest objects, then one
// flat-span (resp. flat-fork) step per level down to the head. Returns
// nullopt when a base span/fork or a flatness witness is missing;
// `stage`, when given, receives the level where descent got stuck.
std::optional<SpanWitness> build_span(const Mod& m, const TruncatedComplex& c1,
                                      const TruncatedComplex& c2, int* stage = nullptr,
                                      EnumBudget* budget = nullptr);
std::optional<ForkWitness> build_fork(const Mod& m, const ComplexMorphism& u,
                                      const ComplexMorphism& v, int* stage = nullptr,
                                      EnumBudget* budget = nullptr);

// Exhaustive fall-backs searching enumerated depth-n complexes as vertices.
std::optional<SpanWitness> search_span(const Mod& m, const TruncatedComplex& c1,
                                       const TruncatedComplex& c2,
                                       EnumBudget* budget = nullptr);
std::optional<ForkWitness> search_fork(const Mod& m, const ComplexMorphism& u,
                                       const ComplexMorphism& v,
                                       EnumBudget* budget = nullptr);

// Verdicts are always depth- and bound-relative; `detail` records the
// depth and the sample sizes actually swept.
struct Verdict {
  bool ok = true;
  std::string detail;
  std::string witness;
};

// Head-level (weak) conditions at truncation level n: nonemptiness, a
// base span over the deepest objects of every pair, a base fork at the
// deepest level of every parallel pair. `sample` > 0 caps the complexes
// (lex-first) swept for the pair conditions; 0 means all of them.
Verdict check_weak(const Mod& m, int n, int sample = 0, EnumBudget* budget = nullptr);

// Full (strong) conditions at level n: spans and forks in Complex_n(M),
// found constructively with exhaustive fallback, verified by square
// checks. `max_parallel` caps the morphisms enumerated per ordered pair
// of complexes when hunting for parallel pairs.
Verdict check_strong(const Mod& m, int n, int sample = 0, int max_parallel = 6,
                     EnumBudget* budget = nullptr);

// Pure constructive propagation (no exhaustive fallback): every sampled
// pair/parallel pair must admit a descent-built cone, else the flatness
// failure is thrown.
Verdict propagate_weak(const Mod& m, int n, int sample = 0, EnumBudget* budget = nullptr);

// Cones over pr_n of a diagram, ordered by factorization. Vertices come
// from `vertex_pool` when given, otherwise from full enumeration at
// level n. Point k is named c<k>.
struct ConePreorder {
  std::vector<Cone> cones;
  FinPreorder order;
};
ConePreorder build_cone_preorder(const Mod& m, const Diagram& d, int n,
                                 const std::vector<TruncatedComplex>* vertex_pool = nullptr,
                                 EnumBudget* budget = nullptr);

// Does c factor through c2 (some vertex morphism making all legs commute)?
bool cone_le(const Mod& m, const Diagram& d, const Cone& c, const Cone& c2,
             EnumBudget* budget = nullptr);

// A finite chain P_0 <- P_1 <- ... <- P_N; maps[n] sends points of
// P_{n+1} to points of P_n.
struct PreorderChain {
  std::vector<FinPreorder> levels;
  std::vector<std::vector<int>> maps;

  ValidationReport validate() const;  // sizes and monotonicity
};

struct KoenigReport {
  bool ok = true;
  std::string failure;  // (n, point, violating point) on condition (2)
};
// Condition (1): every level nonempty. Condition (2): images of principal
// upsets are upward-closed (equivalent to the condition for all upsets,
// since images preserve unions of principal upsets).
KoenigReport check_koenig_conditions(const PreorderChain& ch);

// A compatible sequence x_0, ..., x_N with maps[n][x_{n+1}] = x_n, from
// the lexicographically least point of the top level.
std::vector<int> thread(const PreorderChain& ch);

// Cone preorders P^D_0 .. P^D_N with restriction maps.
struct ConeChain {
  std::vector<ConePreorder> levels;
  PreorderChain chain;
};
ConeChain build_cone_chain(const Mod& m, const Diagram& d, int up_to,
                           EnumBudget* budget = nullptr);

// Compactness within bound: every P^D_n up to the level is nonempty (its
// final subset is then automatically finite) — reports per-level final
// subset sizes.
struct CompactReport {
  bool ok = true;
  std::string detail;
  std::vector<int> final_sizes;  // per level
};
CompactReport check_compact(const Mod& m, const Diagram& d, int up_to,
                            EnumBudget* budget = nullptr);

// A cocone under a family of base objects, written in the enumeration
// orientation: legs[k] : vertex -> objs[k], jointly epi when nothing but
// the identity can be precomposed without changing some leg (for the
// builtin bases: when the leg images cover the vertex).
struct EpiCocone {
  int vertex = -1;
  std::vector<MorRef> legs;
};

// Base-category hook for the factorization construction: the finite, up
// to iso complete list of jointly epi cocones under a family of objects.
class FactorizationOracle {
 public:
  virtual ~FactorizationOracle() = default;
  virtual std::vector<EpiCocone> jointly_epi(const std::vector<int>& objs,
                                             EnumBudget* budget = nullptr) const = 0;
};

// The finite final family in the cone preorder over pr_n of a diagram,
// built level by level from the deepest one: pick a jointly epi cocone
// per level and keep the choices whose connecting element exists (it is
// then unique). Every cone over pr_n factors through a member. Requires
// the module's value functor to preserve extremal monos, which the
// builtin systems with oracles guarantee.
std::vector<Cone> factorization_final_subset(const Mod& m, const Diagram& d, int n,
                                             const FactorizationOracle& fact,
                                             EnumBudget* budget = nullptr);

// The thread-and-diagonal construction: builds the cone chain, extracts a
// thread, and assembles the level-N cone layer-by-layer from the thread
// members (layer i from thread element x_i); the result is verified as a
// pr_N cone before returning.
Cone weak_to_strong(const Mod& m, const Diagram& d, int up_to, EnumBudget* budget = nullptr);

}  // namespace selfsim
