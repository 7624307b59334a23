#pragma once

#include "selfsim/solvability.hpp"

namespace selfsim {

// An element of the depth-n behaviour approximation at anchor b: a
// depth-n complex together with a map from its head into the anchor.
// Identity-headed pairs are the canonical form; the extra g coordinate
// makes the functor action h . [(C, g)] = [(C, h.g)] total.
struct AnchoredPair {
  TruncatedComplex c;
  MorRef g;  // head(c) -> anchor

  friend bool operator==(const AnchoredPair&, const AnchoredPair&) = default;
  friend auto operator<=>(const AnchoredPair&, const AnchoredPair&) = default;
};

// Depth-n approximation I_n on a set of anchor objects. Two pairs share a
// class iff a zig-zag of depth-n complex morphisms connects them, where a
// morphism f : C' -> C relates (C, g) to (C', g . f_0). Classes are kept
// per anchor with the lexicographically least pair as representative.
class ColimitApprox {
 public:
  ColimitApprox() = default;

  const Mod& mod() const { return *m_; }
  int level() const { return n_; }
  const std::vector<int>& anchors() const { return anchors_; }
  bool has_anchor(int b) const;

  int n_classes(int b) const;
  const AnchoredPair& rep(int b, int k) const;
  const std::vector<AnchoredPair>& pairs(int b) const;  // empty when canonical
  // Class of a pair at anchor b (the pair need not be enumerated when the
  // module provides canonical keys). Throws on unknown pairs.
  int class_of(int b, const AnchoredPair& p) const;
  // Functor action: h : b -> b' sends a class at b to one at b'.
  int act(const MorRef& h, int b, int k) const;

  // `class <k> @ <anchor> : rep = <complex> ; head-map = <g>`.
  std::string class_dump(int b, int k) const;

 private:
  friend ColimitApprox build_approx(const Mod&, int, std::vector<int>, EnumBudget*);

  struct Anchor {
    std::vector<AnchoredPair> pairs;       // sorted; empty in canonical mode
    std::vector<int> cls;                  // pair index -> class
    std::vector<AnchoredPair> reps;        // class -> representative
    std::map<std::string, int> by_key;     // canonical mode: key -> class
  };
  const Anchor& anchor(int b) const;

  const Mod* m_ = nullptr;
  int n_ = 0;
  bool canonical_ = false;
  std::vector<int> anchors_;
  std::map<int, Anchor> table_;
};

ColimitApprox build_approx(const Mod& m, int n, std::vector<int> anchors,
                           EnumBudget* budget = nullptr);

// r_n : I_{n+1}(b) -> I_n(b), truncating representatives. Index k of the
// result is the lower class of upper class k.
std::vector<int> refinement_map(const ColimitApprox& hi, const ColimitApprox& lo, int b);

// I_n materialized as a finite Set-valued functor (value x<k> at each
// object); requires a FinCategory base and anchors covering every object.
FinSetFunctor approx_functor(const ColimitApprox& i);

// iota_n : I_n(b) -> (M (x) I_{n-1})(b), sending [(C, g)] to the coend
// class of (g @ m_1, [(tail C, id)]). `tensor` is apply_module over the
// materialized I_{n-1}; image[b][k] is the tensor class index.
struct StructureMap {
  ApplyResult tensor;
  std::map<int, std::vector<int>> image;
};
StructureMap structure_map(const Mod& m, const ColimitApprox& hi, const ColimitApprox& lo);

// Depth-n solutions: each carrier element x in X(a) is sent to the class
// of the depth-n truncation of its unfolding, anchored by id_a. The
// solution square compares iota_n(sol_n(x)) with the tensor class of
// (m_1, sol_{n-1}(x_1)) for the stored e(x) = (m_1, (a_1, x_1)).
struct SolveReport {
  int level = 0;
  bool ok = true;                          // all squares commute
  std::map<std::pair<int, int>, int> cls;  // (a, x) -> class in I_n(a)
  std::vector<std::string> failures;
  ColimitApprox approx;                    // I_n over all objects
};
SolveReport solve(const Coalgebra& e, int n, EnumBudget* budget = nullptr);

// I_N -> ... -> I_0 with per-anchor class counts and a stabilization
// verdict (counts equal and the last refinement map bijective).
struct RefinementReport {
  std::vector<ColimitApprox> levels;            // index = depth
  std::vector<std::map<int, std::vector<int>>> maps;  // maps[n][b]: I_{n+1} -> I_n
  std::map<int, std::vector<int>> counts;       // per anchor, per depth
  bool stabilized = false;
  std::string detail;
};
RefinementReport refinement_chain(const Mod& m, std::vector<int> anchors, int levels_up_to,
                                  EnumBudget* budget = nullptr);

}  // namespace selfsim
