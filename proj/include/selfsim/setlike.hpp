#pragma once

#include "selfsim/finalcoalg.hpp"

namespace selfsim {

// Finite ordinals 0..bound with the opposite orientation: a morphism
// a -> b is an underlying function b -> a, coded in mixed radix (digit i
// is the image of i, base = |a|).
class SetOpCat : public Cat {
 public:
  explicit SetOpCat(int bound) : bound_(bound) {}

  int bound() const { return bound_; }
  std::string name() const override { return "setop" + std::to_string(bound_); }
  std::vector<int> objects() const override;
  std::string obj_name(int a) const override { return std::to_string(a); }
  std::vector<MorRef> hom(int a, int b) const override;
  MorRef identity(int a) const override;
  MorRef compose(MorRef g, MorRef f) const override;
  std::string mor_name(const MorRef& f) const override;
  std::optional<Span> span(int a, int a2) const override;
  std::optional<MorRef> fork(const MorRef& u, const MorRef& v) const override;

  // The underlying function f.dst -> f.src of a morphism.
  static std::vector<int> fn(const MorRef& f);
  // Morphism src -> dst with the given underlying function dst -> src.
  static MorRef mor(int src, int dst, const std::vector<int>& fn);

 private:
  int bound_;
};

// Modules of the shape M(a,b) = functions b -> V(a), where V is a finite
// functorial value set. Elements are coded in mixed radix over |V(a)|;
// actions precompose (right) or push values forward (left). The flat
// witnesses are generic: copairing on the disjoint union for spans and
// the function-coequalizer quotient for forks.
class SetLikeModule : public Mod {
 public:
  explicit SetLikeModule(const SetOpCat& base) : base_(&base) {}

  const Cat& src() const override { return *base_; }
  const Cat& dst() const override { return *base_; }
  const SetOpCat& base() const { return *base_; }

  // |V(a)|, the transport V(f)(v) for an underlying function fhat
  // (mapping `from` to `to`), and a display name for v in V(a).
  virtual int value_size(int a) const = 0;
  virtual int value_map(const std::vector<int>& fhat, int from, int to, int v) const = 0;
  virtual std::string value_name(int a, int v) const = 0;

  std::vector<ElemRef> elems(int a, int b) const override;
  ElemRef lact(const ElemRef& m, const MorRef& f) const override;
  ElemRef ract(const MorRef& g, const ElemRef& m) const override;
  std::string elem_name(const ElemRef& m) const override;

  std::optional<FlatSpan> flat_span(const ElemRef& m1, const ElemRef& m2) const override;
  std::optional<FlatFork> flat_fork(const MorRef& u, const MorRef& v,
                                    const ElemRef& m1) const override;

  // The values of an element as a function m.dst -> V(m.src).
  std::vector<int> values(const ElemRef& m) const;
  ElemRef elem(int a, int b, const std::vector<int>& values) const;

 private:
  const SetOpCat* base_;
};

// M(a,b) = functions b -> A x a for an alphabet of k letters: value
// v = letter * a + state. Zig-zag classes are letter traces, so the
// canonical class machinery is available at every anchor.
class StreamModule : public SetLikeModule {
 public:
  StreamModule(const SetOpCat& base, int alphabet)
      : SetLikeModule(base), alphabet_(alphabet) {}

  int alphabet() const { return alphabet_; }
  std::string name() const override {
    return "streams" + std::to_string(alphabet_);
  }
  int value_size(int a) const override { return alphabet_ * a; }
  int value_map(const std::vector<int>& fhat, int from, int to, int v) const override;
  std::string value_name(int a, int v) const override;

  bool has_canonical_classes() const override { return true; }
  // One letter word per element of the anchor, ";"-separated.
  std::string class_key(const TruncatedComplex& c, const MorRef& head_map) const override;
  std::vector<std::pair<TruncatedComplex, MorRef>> class_reps(int depth,
                                                              int anchor) const override;

 private:
  int alphabet_;
};

// M(a,b) = functions b -> (a x a + A) for a label set of l labels: value
// v < a*a is the branching pair (v % a, v / a), larger values are leaf
// labels. Zig-zag classes are truncated binary tree shapes; canonical
// representatives merge equal subtrees level-wise and are available as
// long as the merged widths stay within the base bound.
class TreeModule : public SetLikeModule {
 public:
  TreeModule(const SetOpCat& base, int labels) : SetLikeModule(base), labels_(labels) {}

  int labels() const { return labels_; }
  std::string name() const override { return "trees" + std::to_string(labels_); }
  int value_size(int a) const override { return a * a + labels_; }
  int value_map(const std::vector<int>& fhat, int from, int to, int v) const override;
  std::string value_name(int a, int v) const override;

  bool has_canonical_classes() const override { return true; }
  // One truncated tree shape per element of the anchor: "*" for an open
  // position, "L<l>" for a leaf, "(s,t)" for a branching.
  std::string class_key(const TruncatedComplex& c, const MorRef& head_map) const override;
  std::vector<std::pair<TruncatedComplex, MorRef>> class_reps(int depth,
                                                              int anchor) const override;

  // All truncated shapes of the given depth.
  static std::vector<std::string> shapes(int depth, int labels);

 private:
  int labels_;
};

}  // namespace selfsim
