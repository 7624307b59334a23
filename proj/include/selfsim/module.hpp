#pragma once

#include <map>
#include <utility>

#include "selfsim/fincat.hpp"

namespace selfsim {

// An endo-module over a FinCategory given by explicit element and action
// tables. Element handles index `elems_` after seal (sorted by id) and
// double as ElemRef codes. Identity actions are auto-filled at seal.
class TableModule : public Mod {
 public:
  struct ElemData {
    std::string id;
    int src;  // a, for m : a -/-> b
    int dst;  // b
  };

  TableModule(std::string name, const FinCategory& base)
      : name_(std::move(name)), base_(&base) {}

  void add_element(const std::string& id, const std::string& a, const std::string& b);
  // m @ f = m2 with f : a' -> a; result lives in M(a', b).
  void set_lact(const std::string& m, const std::string& f, const std::string& m2);
  // g @ m = m2 with g : b -> b'; result lives in M(a, b').
  void set_ract(const std::string& g, const std::string& m, const std::string& m2);
  void seal();
  bool sealed() const { return sealed_; }

  const FinCategory& base() const { return *base_; }
  int n_elements() const { return static_cast<int>(elems_.size()); }
  int element_index(const std::string& id) const;  // -1 if absent
  const ElemData& element(int e) const { return elems_[e]; }
  ElemRef elem_ref(int e) const { return {elems_[e].src, elems_[e].dst, e}; }
  ElemRef elem_ref(const std::string& id) const;

  // Checks action totality/typing, the action laws, and interchange.
  ValidationReport validate() const;

  // Mod interface (valid modules only).
  std::string name() const override { return name_; }
  const Cat& src() const override { return *base_; }
  const Cat& dst() const override { return *base_; }
  std::vector<ElemRef> elems(int a, int b) const override;
  ElemRef lact(const ElemRef& m, const MorRef& f) const override;
  ElemRef ract(const MorRef& g, const ElemRef& m) const override;
  std::string elem_name(const ElemRef& m) const override { return elems_[m.code].id; }

 private:
  std::string name_;
  const FinCategory* base_;
  std::vector<ElemData> elems_;
  std::map<std::string, int> elem_index_;
  std::map<std::pair<int, long long>, int> lact_;  // (elem, morphism code) -> elem
  std::map<std::pair<long long, int>, int> ract_;  // (morphism code, elem) -> elem
  bool sealed_ = false;

  struct PendingAct {
    std::string m, f, m2;
  };
  std::vector<PendingAct> pending_lact_, pending_ract_;
};

// The hom module of a category: M(a,b) = hom(a,b), both actions given by
// composition. Element codes are the morphism codes.
class IdentityModule : public Mod {
 public:
  explicit IdentityModule(const Cat& base) : base_(&base) {}

  std::string name() const override { return "id[" + base_->name() + "]"; }
  const Cat& src() const override { return *base_; }
  const Cat& dst() const override { return *base_; }
  std::vector<ElemRef> elems(int a, int b) const override;
  ElemRef lact(const ElemRef& m, const MorRef& f) const override;
  ElemRef ract(const MorRef& g, const ElemRef& m) const override;
  std::string elem_name(const ElemRef& m) const override;

 private:
  static MorRef as_mor(const ElemRef& m) { return {m.src, m.dst, m.code}; }
  static ElemRef as_elem(const MorRef& f) { return {f.src, f.dst, f.code}; }
  const Cat* base_;
};

ValidationReport validate_module(const TableModule& m);

// Elementary flatness of M(a,-): (1) some element out of a exists;
// (2) every pair of elements out of a is covered by a span; (3) every
// commuting parallel pair is equalized under some element. Constructive
// witnesses from the module are tried before exhaustive search.
struct FlatResult {
  bool ok = true;
  int condition = 0;    // 1, 2 or 3 when failed
  std::string witness;  // offending configuration
};
FlatResult flat_check(const Mod& m, int a, EnumBudget* budget = nullptr);

// Cone over a pair of elements out of m1.src (constructive hook first,
// exhaustive search second): apex m with f1 @ m = m1, f2 @ m = m2.
std::optional<FlatSpan> find_flat_span(const Mod& m, const ElemRef& m1, const ElemRef& m2,
                                       EnumBudget* budget = nullptr);
// Equalizing element for a commutative parallel pair u,v on m1: apex m
// with f @ m = m1 and u.f = v.f.
std::optional<FlatFork> find_flat_fork(const Mod& m, const MorRef& u, const MorRef& v,
                                       const ElemRef& m1, EnumBudget* budget = nullptr);

// Partition of the pairs (n, m), n in N(b,c), m in M(a,b), under the
// relation generated by (n@f, m) ~ (n, f@m) for f : b -> b'. N is the
// outer (post-composed) module. Canonical representative = lex-least pair.
using CoendPair = std::pair<ElemRef, ElemRef>;  // (n, m)
class CoendPartition {
 public:
  CoendPartition(const Mod& outer, const Mod& inner, int a, int c);

  int n_classes() const { return static_cast<int>(reps_.size()); }
  const std::vector<CoendPair>& reps() const { return reps_; }
  int class_index(const CoendPair& p) const;  // -1 if p is not a listed pair
  CoendPair canon(const CoendPair& p) const;

 private:
  std::map<CoendPair, int> cls_;
  std::vector<CoendPair> reps_;
};

// Naive oracle: iterate the generating relation to a fixed point and map
// every pair to the least member of its closure class.
std::map<CoendPair, CoendPair> coend_closure_oracle(const Mod& outer, const Mod& inner,
                                                    int a, int c);

// N (.) M with coend classes as elements; element codes index the class
// list of the memoized per-(a,c) partition.
class TensorModule : public Mod {
 public:
  TensorModule(const Mod& outer, const Mod& inner);

  std::string name() const override { return outer_->name() + "(.)" + inner_->name(); }
  const Cat& src() const override { return inner_->src(); }
  const Cat& dst() const override { return outer_->dst(); }
  std::vector<ElemRef> elems(int a, int c) const override;
  ElemRef lact(const ElemRef& m, const MorRef& f) const override;
  ElemRef ract(const MorRef& g, const ElemRef& m) const override;
  std::string elem_name(const ElemRef& m) const override;

  const CoendPartition& partition(int a, int c) const;
  ElemRef class_ref(int a, int c, const CoendPair& p) const;

 private:
  const Mod* outer_;
  const Mod* inner_;
  mutable std::map<std::pair<int, int>, CoendPartition> parts_;
};

// A functor base -> Set by explicit tables. Values are named; `action[f]`
// is the function on value indices along morphism handle f.
struct FinSetFunctor {
  std::string fname;
  const FinCategory* base = nullptr;
  std::vector<std::vector<std::string>> value;  // per object handle
  std::vector<std::vector<int>> action;         // per morphism handle

  ValidationReport validate() const;
  int elem_index(int a, const std::string& id) const;  // -1 if absent
};

FinSetFunctor representable(const FinCategory& c, int a);

// The category of elements: objects (a, x in X(a)) named `<a>/<x>`,
// morphisms f with Xf(x) = x' named `<f>/<x>`.
FinCategory elements_category(const FinSetFunctor& x);

// Flatness of a Set-valued functor = cofilteredness of its category of
// elements.
CofilteredResult functor_flat_check(const FinSetFunctor& x);

// (M (.) X)(a) = classes of pairs (m1 in M(a1,a), x1 in X(a1)) under
// (m@f, x) ~ (m, Xf(x)); morphisms act on the module coordinate.
struct ApplyResult {
  FinSetFunctor fun;
  // Per object handle: pair -> value index of its class in `fun`.
  std::vector<std::map<std::pair<ElemRef, std::pair<int, int>>, int>> class_of;

  int cls(int a, const ElemRef& m1, int a1, int x1) const;
};
ApplyResult apply_module(const Mod& m, const FinSetFunctor& x);

// A coalgebra e : X -> M (.) X; the stored datum at (a, x) is one
// representative pair of the coend class.
struct Coalgebra {
  std::string name;
  const Mod* module = nullptr;
  const FinSetFunctor* carrier = nullptr;
  // structure[a][x] = (m1, (a1, x1)) with m1 : a1 -/-> a, x1 in X(a1).
  std::vector<std::vector<std::pair<ElemRef, std::pair<int, int>>>> structure;

  ValidationReport validate() const;  // naturality of e, enumerated
};

// A module morphism from the hom module: one element c(f) in M(a',a) per
// morphism f : a' -> a.
struct Pointing {
  std::map<MorRef, ElemRef> point;
};

// Naturality in both variables, via the equivalent one-sided equations
// c(g.f) = g @ c(f) and c(f.h) = c(f) @ h over all composable pairs.
ValidationReport validate_pointing(const Mod& m, const Pointing& c);

}  // namespace selfsim
