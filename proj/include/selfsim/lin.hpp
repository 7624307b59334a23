#pragma once

#include "selfsim/solvability.hpp"

namespace selfsim {

// Finite linear orders 1..bound with the opposite orientation: a morphism
// a -> b is an underlying monotone function b^ -> a^, coded in mixed radix
// (digit i is the image of i, base = |a|, digits nondecreasing).
class LinOpCat : public Cat {
 public:
  explicit LinOpCat(int bound) : bound_(bound) {}

  int bound() const { return bound_; }
  std::string name() const override { return "linop" + std::to_string(bound_); }
  std::vector<int> objects() const override;
  std::string obj_name(int a) const override { return std::to_string(a); }
  std::vector<MorRef> hom(int a, int b) const override;
  MorRef identity(int a) const override;
  MorRef compose(MorRef g, MorRef f) const override;
  std::string mor_name(const MorRef& f) const override;
  std::optional<Span> span(int a, int a2) const override;
  std::optional<MorRef> fork(const MorRef& u, const MorRef& v) const override;

  // The underlying monotone function f.dst -> f.src of a morphism.
  static std::vector<int> fn(const MorRef& f);
  // Morphism src -> dst with the given underlying function dst -> src.
  static MorRef mor(int src, int dst, const std::vector<int>& fn);

  // All nondecreasing sequences of the given length over 0..base-1.
  static std::vector<std::vector<int>> monotone_maps(int len, int base);

 private:
  int bound_;
};

// The two endofunctors on linear orders handled by the Lin system: the
// ordinal product with omega, optionally followed by a fresh top point.
enum class LinFunctor { kStarOmega, kStarOmegaThenOne };

// M(a,b) = monotone maps b^ -> Phi(a), where Phi(a) replaces every point
// of the omega chain 0..height-1 by a copy of a (the point (x,k) is coded
// k*|a|+x, so the product order is the integer order; merging points of a
// then stays monotone across the omega blocks, which makes Phi a functor)
// and kStarOmegaThenOne adds a top point coded a*height. Elements are coded in mixed radix over
// |Phi(a)|. Flat witnesses are constructive: order merges for spans and
// interval quotients for forks, so flatness holds at every object.
class LinModule : public Mod {
 public:
  LinModule(const LinOpCat& base, LinFunctor functor, int height)
      : base_(&base), functor_(functor), height_(height) {}

  const Cat& src() const override { return *base_; }
  const Cat& dst() const override { return *base_; }
  const LinOpCat& base() const { return *base_; }
  LinFunctor functor() const { return functor_; }
  int height() const { return height_; }

  std::string name() const override {
    return std::string(functor_ == LinFunctor::kStarOmega ? "lin-xw" : "lin-xw1") +
           "-h" + std::to_string(height_);
  }

  // |Phi(a)| and Phi applied to an underlying function from^ -> to^.
  int phi_size(int a) const;
  std::vector<int> phi_map(const std::vector<int>& fhat, int from, int to) const;

  std::vector<ElemRef> elems(int a, int b) const override;
  ElemRef lact(const ElemRef& m, const MorRef& f) const override;
  ElemRef ract(const MorRef& g, const ElemRef& m) const override;
  std::string elem_name(const ElemRef& m) const override;

  std::optional<FlatSpan> flat_span(const ElemRef& m1, const ElemRef& m2) const override;
  std::optional<FlatFork> flat_fork(const MorRef& u, const MorRef& v,
                                    const ElemRef& m1) const override;

  // The values of an element as a function m.dst -> Phi(m.src).
  std::vector<int> values(const ElemRef& m) const;
  ElemRef elem(int a, int b, const std::vector<int>& values) const;

 private:
  const LinOpCat* base_;
  LinFunctor functor_;
  int height_;
};

// Is f's underlying function injective? For linear orders an injective
// monotone map is automatically an order embedding, so this characterizes
// the extremal monos of the base.
bool lin_extremal_mono(const MorRef& f);

// (jointly epi, extremal mono) factorization of a cocone of underlying
// monotone maps into `vertex`: the epi part corestricts every leg to the
// union of the images with the induced order, the mono part is the
// inclusion. `legs[k]` is a base morphism vertex -> obj_k, and the
// factorization satisfies legs[k] == compose(epi.legs[k], mono).
struct LinFactorization {
  EpiCocone epi;
  MorRef mono;  // vertex -> epi.vertex
};
LinFactorization lin_factorize(int vertex, const std::vector<MorRef>& legs);

// Exhaustive jointly-epi enumeration for finite linear orders: a cocone
// is jointly epi iff the vertex is the union of the leg images, and
// linear orders are rigid, so listing every covering family over ordinal
// vertices is already an up-to-iso listing.
class LinFactorizationOracle : public FactorizationOracle {
 public:
  std::vector<EpiCocone> jointly_epi(const std::vector<int>& objs,
                                     EnumBudget* budget = nullptr) const override;
};

}  // namespace selfsim
