#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfsim {

// Errors with dedicated exit-code semantics in the CLI.
struct bound_exceeded : std::runtime_error {
  explicit bound_exceeded(const std::string& what) : std::runtime_error(what) {}
};
struct depth_exceeded : std::runtime_error {
  explicit depth_exceeded(const std::string& what) : std::runtime_error(what) {}
};
struct empty_preorder : std::runtime_error {
  explicit empty_preorder(const std::string& what) : std::runtime_error(what) {}
};
struct empty_level : std::runtime_error {
  explicit empty_level(const std::string& what) : std::runtime_error(what) {}
};
struct flatness_failure : std::runtime_error {
  explicit flatness_failure(const std::string& what) : std::runtime_error(what) {}
};
struct oracle_unavailable : std::runtime_error {
  explicit oracle_unavailable(const std::string& what) : std::runtime_error(what) {}
};
struct parse_error : std::runtime_error {
  parse_error(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

// A morphism f : src -> dst of a category. `code` is a category-specific
// encoding of the underlying data; equality of (src,dst,code) is equality
// of morphisms. Codes need not be dense, only stable and deterministic.
struct MorRef {
  int src = -1;
  int dst = -1;
  long long code = -1;
  friend bool operator==(const MorRef&, const MorRef&) = default;
  friend auto operator<=>(const MorRef&, const MorRef&) = default;
};

// A module element m : src -/-> dst (a "broken arrow").
struct ElemRef {
  int src = -1;
  int dst = -1;
  long long code = -1;
  friend bool operator==(const ElemRef&, const ElemRef&) = default;
  friend auto operator<=>(const ElemRef&, const ElemRef&) = default;
};

// Abstract finite-ish category. Objects are integer handles; `objects()`
// lists the enumeration universe (within the configured bound). Categories
// may have further objects reachable through constructive witnesses
// (spans, coequalizers) that never appear in exhaustive enumerations.
class Cat {
 public:
  virtual ~Cat() = default;

  virtual std::string name() const = 0;
  virtual std::vector<int> objects() const = 0;
  virtual std::string obj_name(int a) const = 0;
  virtual std::vector<MorRef> hom(int a, int b) const = 0;
  virtual MorRef identity(int a) const = 0;
  // g . f with f : a -> b, g : b -> c.
  virtual MorRef compose(MorRef g, MorRef f) const = 0;
  virtual std::string mor_name(const MorRef& f) const = 0;

  bool is_identity(const MorRef& f) const {
    return f.src == f.dst && f == identity(f.src);
  }

  // Constructive span over a pair of objects: b with f : b -> a, f' : b -> a'.
  struct Span {
    MorRef left;   // b -> a
    MorRef right;  // b -> a'
  };
  virtual std::optional<Span> span(int a, int a2) const;

  // Constructive fork for a parallel pair u,v : a -> a': f : b -> a with
  // u.f = v.f. Default searches the enumeration universe.
  virtual std::optional<MorRef> fork(const MorRef& u, const MorRef& v) const;
};

// Witness data for the elementary flatness conditions of a module column
// M(a,-): a cone over two broken arrows out of a, and an equalizing
// element for a commutative parallel pair.
struct FlatSpan {
  ElemRef apex;  // m : a -/-> b
  MorRef f1;     // b -> b1 with f1 @ m = m1
  MorRef f2;     // b -> b2 with f2 @ m = m2
};
struct FlatFork {
  ElemRef apex;  // m : a -/-> b
  MorRef f;      // b -> b1 with f @ m = m1 and u.f = v.f
};

class TruncatedComplex;  // complexes.hpp

// Abstract module M : A -/-> B, i.e. a functor A^op x B -> Set given by
// element tables and the two actions. Most modules are endo (same base on
// both sides); the two-sided form is used by the tensor machinery.
class Mod {
 public:
  virtual ~Mod() = default;

  virtual std::string name() const = 0;
  virtual const Cat& src() const = 0;
  virtual const Cat& dst() const = 0;
  bool endo() const { return &src() == &dst(); }

  virtual std::vector<ElemRef> elems(int a, int b) const = 0;
  // m @ f with f : a' -> a in src, m in M(a,b); result in M(a',b).
  virtual ElemRef lact(const ElemRef& m, const MorRef& f) const = 0;
  // g @ m with g : b -> b' in dst, m in M(a,b); result in M(a,b').
  virtual ElemRef ract(const MorRef& g, const ElemRef& m) const = 0;
  virtual std::string elem_name(const ElemRef& m) const = 0;

  // Constructive flatness witnesses; nullopt means "search exhaustively".
  virtual std::optional<FlatSpan> flat_span(const ElemRef& m1, const ElemRef& m2) const {
    (void)m1; (void)m2;
    return std::nullopt;
  }
  virtual std::optional<FlatFork> flat_fork(const MorRef& u, const MorRef& v,
                                            const ElemRef& m1) const {
    (void)u; (void)v; (void)m1;
    return std::nullopt;
  }

  // Zig-zag class canonicalization hook for scales where enumerating the
  // (complex, head map) pairs is out of the question. A key identifies the
  // class of (C, g : head(C) -> anchor); two pairs are zig-zag equivalent
  // iff their keys agree (an invariant the built-ins property-test).
  virtual bool has_canonical_classes() const { return false; }
  virtual std::string class_key(const TruncatedComplex& c, const MorRef& head_map) const;
  // Representatives realizing every class at the given depth and anchor.
  virtual std::vector<std::pair<TruncatedComplex, MorRef>> class_reps(int depth,
                                                                     int anchor) const;
};

// Enumeration budget shared by the exhaustive searches. `max_items` caps
// total enumerated items (SELFSIM_MAX_ENUM); `sample` caps the number of
// complexes drawn for pairwise universally-quantified checks.
struct EnumBudget {
  long long max_items = 10'000'000;
  int sample = 40;
  long long used = 0;

  void charge(long long n = 1) {
    used += n;
    if (used > max_items)
      throw bound_exceeded("enumeration budget exceeded (" + std::to_string(max_items) + ")");
  }
};

EnumBudget& default_budget();

}  // namespace selfsim

template <>
struct std::hash<selfsim::MorRef> {
  size_t operator()(const selfsim::MorRef& m) const {
    size_t h = std::hash<long long>()(m.code);
    h ^= std::hash<int>()(m.src) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= std::hash<int>()(m.dst) + 0x9e3779b9 + (h << 6) + (h >> 2);
    return h;
  }
};
template <>
struct std::hash<selfsim::ElemRef> {
  size_t operator()(const selfsim::ElemRef& m) const {
    size_t h = std::hash<long long>()(m.code);
    h ^= std::hash<int>()(m.src) + 0x517cc1b7 + (h << 6) + (h >> 2);
    h ^= std::hash<int>()(m.dst) + 0x517cc1b7 + (h << 6) + (h >> 2);
    return h;
  }
};
