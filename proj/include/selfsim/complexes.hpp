#pragma once

#include <functional>
#include <memory>

#include "selfsim/module.hpp"

namespace selfsim {

// A depth-n chain of broken arrows a_n -/-> ... -/-> a_0. `objs` runs from
// the head a_0 outward; `elems[i-1]` is m_i in M(a_i, a_{i-1}).
class TruncatedComplex {
 public:
  std::vector<int> objs;
  std::vector<ElemRef> elems;

  TruncatedComplex() = default;
  explicit TruncatedComplex(int head) : objs{head} {}

  int depth() const { return static_cast<int>(elems.size()); }
  int head() const { return objs.front(); }
  int deepest() const { return objs.back(); }
  void push(const ElemRef& m);  // extend by m in M(a_{n+1}, a_n)

  friend bool operator==(const TruncatedComplex&, const TruncatedComplex&) = default;
  friend auto operator<=>(const TruncatedComplex&, const TruncatedComplex&) = default;
};

// Typing check: each m_i runs a_i -/-> a_{i-1}.
bool check_complex(const Mod& m, const TruncatedComplex& c, std::string* why = nullptr);

// `a2 -[m2]-> a1 -[m1]-> a0`.
std::string complex_to_string(const Mod& m, const TruncatedComplex& c);

// A morphism of equal-depth complexes with components f_i : a_i -> a'_i.
struct ComplexMorphism {
  TruncatedComplex src;
  TruncatedComplex dst;
  std::vector<MorRef> comps;  // size depth+1
};

// Square conditions m'_i @ f_i = f_{i-1} @ m_i at every level.
bool check_squares(const Mod& m, const ComplexMorphism& h, std::string* why = nullptr);

ComplexMorphism identity_morphism(const Cat& base, const TruncatedComplex& c);
ComplexMorphism compose_morphisms(const Cat& base, const ComplexMorphism& g,
                                  const ComplexMorphism& f);

// Depth-first enumeration of depth-n complexes in lex order (objects by
// handle, elements by ElemRef order, depth-major). `head` < 0 ranges over
// all heads. The callback may return false to stop early.
void for_each_complex(const Mod& m, int n, int head,
                      const std::function<bool(const TruncatedComplex&)>& fn,
                      EnumBudget* budget = nullptr);
std::vector<TruncatedComplex> enumerate_complexes(const Mod& m, int n, int head = -1,
                                                  EnumBudget* budget = nullptr);

// All morphisms src -> dst, built level-by-level with square pruning.
void for_each_morphism(const Mod& m, const TruncatedComplex& src,
                       const TruncatedComplex& dst,
                       const std::function<bool(const ComplexMorphism&)>& fn,
                       EnumBudget* budget = nullptr);
std::vector<ComplexMorphism> enumerate_morphisms(const Mod& m, const TruncatedComplex& src,
                                                 const TruncatedComplex& dst,
                                                 EnumBudget* budget = nullptr);

// Head-side prefix of length k.
TruncatedComplex truncate(const TruncatedComplex& c, int k);
ComplexMorphism truncate(const ComplexMorphism& h, int k);

// A full complex revealed one level at a time: `ext` maps the current
// depth-n truncation to m_{n+1}. Answers are memoized, so truncation
// coherence holds by construction.
class LazyComplex {
 public:
  using Extender = std::function<ElemRef(const TruncatedComplex&)>;

  LazyComplex(int head, Extender ext);
  // Eager prefix; querying beyond its depth throws depth_exceeded.
  explicit LazyComplex(TruncatedComplex eager);

  const TruncatedComplex& at(int depth) const;  // depth-n truncation

 private:
  struct State {
    TruncatedComplex built;
    Extender ext;
    std::map<int, TruncatedComplex> prefixes;
  };
  std::shared_ptr<State> s_;
};

// The unfolding of a coalgebra from x in X(a): level i+1 reads the stored
// representative (m_{i+1}, x_{i+1}) of e(x_i). `trace(n)` forces depth n
// and returns (a_0,x_0) .. (a_n,x_n).
class Resolution {
 public:
  // `chooser`, when given, overrides the stored representative: it maps
  // (a_i, x_i) to any representative pair of the class e(x_i).
  using Chooser = std::function<std::pair<ElemRef, std::pair<int, int>>(int, int)>;
  Resolution(const Coalgebra& e, int a, int x, Chooser chooser = nullptr);

  const LazyComplex& complex() const { return *complex_; }
  std::vector<std::pair<int, int>> trace(int depth) const;

 private:
  std::shared_ptr<std::vector<std::pair<int, int>>> trace_;
  std::shared_ptr<LazyComplex> complex_;
};

// Complex_n(M) as explicit tables, for desk-size instances only: objects
// are the depth-n complexes, morphisms all component sequences.
FinCategory materialize_complex_category(const Mod& m, int n, EnumBudget* budget = nullptr);

}  // namespace selfsim
