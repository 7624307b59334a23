#pragma once

#include <map>
#include <set>
#include <unordered_map>

#include "selfsim/core.hpp"

namespace selfsim {

struct Violation {
  std::string law;
  std::string witness;
};
using ValidationReport = std::vector<Violation>;

// A finite category given by explicit tables. Identities are auto-generated
// with reserved ids `id:<object>`; input never declares them. Morphism
// handles are indices into `mors_` and double as MorRef codes.
class FinCategory : public Cat {
 public:
  struct MorData {
    std::string id;
    int src;
    int dst;
  };

  explicit FinCategory(std::string name = "C") : name_(std::move(name)) {}

  // Construction. Objects and morphisms are kept in insertion order until
  // `seal()` sorts them by id; all handles below refer to the sealed order.
  void add_object(const std::string& id);
  void add_morphism(const std::string& id, const std::string& src, const std::string& dst);
  // Records g . f = h by morphism ids; unknown ids throw parse-level errors.
  void set_compose(const std::string& g, const std::string& f, const std::string& h);
  void seal();

  bool sealed() const { return sealed_; }
  int n_objects() const { return static_cast<int>(objs_.size()); }
  int n_morphisms() const { return static_cast<int>(mors_.size()); }
  int object_index(const std::string& id) const;       // -1 if absent
  int morphism_index(const std::string& id) const;     // -1 if absent
  const MorData& morphism(int m) const { return mors_[m]; }
  MorRef mor_ref(int m) const { return {mors_[m].src, mors_[m].dst, m}; }
  MorRef mor_ref(const std::string& id) const;
  // Raw composition table lookup; nullopt when the entry is missing.
  std::optional<int> compose_raw(int g, int f) const;

  // Checks all FinCategory invariants by full enumeration.
  ValidationReport validate() const;

  // Derived view with sources/targets swapped; morphism ids are shared.
  FinCategory opposite() const;

  // Cat interface (valid categories only).
  std::string name() const override { return name_; }
  std::vector<int> objects() const override;
  std::string obj_name(int a) const override { return objs_[a]; }
  std::vector<MorRef> hom(int a, int b) const override;
  MorRef identity(int a) const override;
  MorRef compose(MorRef g, MorRef f) const override;
  std::string mor_name(const MorRef& f) const override { return mors_[f.code].id; }

 private:
  std::string name_;
  std::vector<std::string> objs_;
  std::vector<MorData> mors_;
  std::vector<int> identity_;                    // object -> morphism handle
  std::map<std::pair<int, int>, int> comp_;      // (g,f) -> g.f
  std::map<std::string, int> obj_index_;
  std::map<std::string, int> mor_index_;
  bool sealed_ = false;

  struct PendingCompose {
    std::string g, f, h;
  };
  std::vector<PendingCompose> pending_;
};

// A functor between finite categories, given by object and morphism tables.
struct FinFunctor {
  const FinCategory* source = nullptr;
  const FinCategory* target = nullptr;
  std::vector<int> obj_map;  // source object handle -> target object handle
  std::vector<int> mor_map;  // source morphism handle -> target morphism handle

  ValidationReport validate() const;
};

ValidationReport validate_category(const FinCategory& c);

// Elementary cofilteredness: nonempty, spans for object pairs, equalizing
// forks for parallel pairs. Works on any enumerable Cat.
struct CofilteredResult {
  bool ok = false;
  std::string failure;  // empty on success
};
CofilteredResult is_cofiltered(const Cat& c);

struct LimitCone {
  int vertex = -1;
  std::vector<MorRef> legs;  // per shape object handle
};
// Exhaustive limit search for a finite diagram d : J -> c. Returns the
// first (lex) cone through which every cone factors uniquely.
std::optional<LimitCone> limit_of_finite_diagram(const FinCategory& c, const FinFunctor& d);

// A finite preorder as a boolean table. Point handles index `points`.
class FinPreorder {
 public:
  FinPreorder() = default;
  FinPreorder(std::vector<std::string> points, std::vector<std::vector<bool>> le)
      : points_(std::move(points)), le_(std::move(le)) {}

  static FinPreorder chain(int n);     // 0 < 1 < ... < n-1
  static FinPreorder antichain(int n);

  int size() const { return static_cast<int>(points_.size()); }
  const std::string& point_name(int p) const { return points_[p]; }
  int point_index(const std::string& id) const;
  bool le(int p, int q) const { return le_[p][q]; }
  void set_le(int p, int q) { le_[p][q] = true; }

  ValidationReport validate() const;

 private:
  std::vector<std::string> points_;
  std::vector<std::vector<bool>> le_;
};

struct MonotoneMap {
  const FinPreorder* source = nullptr;
  const FinPreorder* target = nullptr;
  std::vector<int> point_map;

  ValidationReport validate() const;
};

// Least upward-closed superset of s.
std::set<int> upset_closure(const FinPreorder& p, const std::set<int>& s);

// A subset-minimal final subset, from the maximal strongly-connected
// le-classes; ties broken lexicographically on point names.
std::vector<int> final_subset(const FinPreorder& p);

}  // namespace selfsim
