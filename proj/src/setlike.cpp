#include "selfsim/setlike.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace selfsim {

namespace {

long long checked_pow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (base != 0 && r > (1LL << 58) / base)
      throw bound_exceeded("mixed-radix code does not fit in 60 bits");
    r *= base;
  }
  return r;
}

std::vector<int> decode(long long code, int base, int len) {
  std::vector<int> out(len);
  for (int i = 0; i < len; ++i) {
    out[i] = static_cast<int>(code % base);
    code /= base;
  }
  return out;
}

long long encode(const std::vector<int>& digits, int base) {
  long long code = 0;
  for (size_t i = digits.size(); i-- > 0;) {
    if (digits[i] < 0 || digits[i] >= base)
      throw std::invalid_argument("digit out of range for mixed-radix code");
    code = code * base + digits[i];
  }
  return code;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// SetOpCat

std::vector<int> SetOpCat::objects() const {
  std::vector<int> out(bound_);
  std::iota(out.begin(), out.end(), 1);
  return out;
}

std::vector<MorRef> SetOpCat::hom(int a, int b) const {
  if (a < 1 || b < 0) throw std::invalid_argument("bad object handle");
  long long n = checked_pow(a, b);
  std::vector<MorRef> out;
  out.reserve(static_cast<size_t>(n));
  for (long long code = 0; code < n; ++code) out.push_back({a, b, code});
  return out;
}

std::vector<int> SetOpCat::fn(const MorRef& f) {
  return decode(f.code, f.src, f.dst);
}

MorRef SetOpCat::mor(int src, int dst, const std::vector<int>& fn) {
  if (static_cast<int>(fn.size()) != dst)
    throw std::invalid_argument("underlying function has the wrong arity");
  return {src, dst, encode(fn, src)};
}

MorRef SetOpCat::identity(int a) const {
  std::vector<int> id(a);
  std::iota(id.begin(), id.end(), 0);
  return mor(a, a, id);
}

MorRef SetOpCat::compose(MorRef g, MorRef f) const {
  if (g.src != f.dst) throw std::invalid_argument("composition mismatch");
  std::vector<int> gf = fn(g), ff = fn(f), out(gf.size());
  for (size_t i = 0; i < gf.size(); ++i) out[i] = ff[gf[i]];
  return mor(f.src, g.dst, out);
}

// The singleton admits a constant function to every object, so spans
// always exist over the one-element set.
std::optional<Cat::Span> SetOpCat::span(int a, int a2) const {
  return Span{mor(1, a, std::vector<int>(a, 0)), mor(1, a2, std::vector<int>(a2, 0))};
}

// Forks are coequalizers of the underlying functions: quotient the
// codomain by u(y) ~ v(y) and number the classes by least member.
std::optional<MorRef> SetOpCat::fork(const MorRef& u, const MorRef& v) const {
  if (u.src != v.src || u.dst != v.dst)
    throw std::invalid_argument("fork of a non-parallel pair");
  int a = u.src;
  std::vector<int> parent(a);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> uf = fn(u), vf = fn(v);
  for (size_t y = 0; y < uf.size(); ++y) parent[root(uf[y])] = root(vf[y]);
  std::map<int, int> idx;
  for (int x = 0; x < a; ++x) {
    int r = root(x);
    if (!idx.count(r)) idx.emplace(r, static_cast<int>(idx.size()));
  }
  std::vector<int> q(a);
  for (int x = 0; x < a; ++x) q[x] = idx.at(root(x));
  return mor(static_cast<int>(idx.size()), a, q);
}

std::string SetOpCat::mor_name(const MorRef& f) const {
  std::vector<int> d = fn(f);
  std::string out = "[";
  for (size_t i = 0; i < d.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(d[i]);
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// SetLikeModule

std::vector<ElemRef> SetLikeModule::elems(int a, int b) const {
  long long n = checked_pow(value_size(a), b);
  std::vector<ElemRef> out;
  out.reserve(static_cast<size_t>(n));
  for (long long code = 0; code < n; ++code) out.push_back({a, b, code});
  return out;
}

std::vector<int> SetLikeModule::values(const ElemRef& m) const {
  return decode(m.code, value_size(m.src), m.dst);
}

ElemRef SetLikeModule::elem(int a, int b, const std::vector<int>& values) const {
  if (static_cast<int>(values.size()) != b)
    throw std::invalid_argument("value table has the wrong arity");
  return {a, b, encode(values, value_size(a))};
}

ElemRef SetLikeModule::lact(const ElemRef& m, const MorRef& f) const {
  if (f.dst != m.src) throw std::invalid_argument("left action mismatch");
  std::vector<int> fhat = SetOpCat::fn(f), vals = values(m);
  for (int& v : vals) v = value_map(fhat, m.src, f.src, v);
  return elem(f.src, m.dst, vals);
}

ElemRef SetLikeModule::ract(const MorRef& g, const ElemRef& m) const {
  if (g.src != m.dst) throw std::invalid_argument("right action mismatch");
  std::vector<int> ghat = SetOpCat::fn(g), vals = values(m), out(ghat.size());
  for (size_t j = 0; j < ghat.size(); ++j) out[j] = vals[ghat[j]];
  return elem(m.src, g.dst, out);
}

std::string SetLikeModule::elem_name(const ElemRef& m) const {
  std::vector<int> vals = values(m);
  std::string out = "{";
  for (size_t j = 0; j < vals.size(); ++j) {
    if (j) out += ",";
    out += value_name(m.src, vals[j]);
  }
  return out + "}";
}

// The cone over m1 : a -/-> b1, m2 : a -/-> b2 is their copairing on the
// disjoint union b1 + b2, with the two inclusions as legs. The apex may
// lie beyond the enumeration bound; it is still a legal object of the
// category of finite sets.
std::optional<FlatSpan> SetLikeModule::flat_span(const ElemRef& m1,
                                                 const ElemRef& m2) const {
  if (m1.src != m2.src) throw std::invalid_argument("span legs must share a source");
  int b1 = m1.dst, b2 = m2.dst, b = b1 + b2;
  std::vector<int> vals = values(m1), tail = values(m2);
  vals.insert(vals.end(), tail.begin(), tail.end());
  std::vector<int> in1(b1), in2(b2);
  std::iota(in1.begin(), in1.end(), 0);
  std::iota(in2.begin(), in2.end(), b1);
  return FlatSpan{elem(m1.src, b, vals), SetOpCat::mor(b, b1, in1),
                  SetOpCat::mor(b, b2, in2)};
}

// u @ m1 = v @ m1 forces m1 constant on the coequalizer classes of the
// underlying functions, so m1 descends to the quotient.
std::optional<FlatFork> SetLikeModule::flat_fork(const MorRef& u, const MorRef& v,
                                                 const ElemRef& m1) const {
  if (u.src != v.src || u.dst != v.dst || u.src != m1.dst)
    throw std::invalid_argument("fork data mismatch");
  if (ract(u, m1) != ract(v, m1)) return std::nullopt;
  int b1 = m1.dst;
  std::vector<int> parent(b1);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> uf = SetOpCat::fn(u), vf = SetOpCat::fn(v);
  for (size_t y = 0; y < uf.size(); ++y) parent[root(uf[y])] = root(vf[y]);
  // Scanning members in ascending order numbers classes by least member,
  // which keeps the witness deterministic.
  std::map<int, int> idx;  // class root -> class index
  for (int x = 0; x < b1; ++x) {
    int r = root(x);
    if (!idx.count(r)) idx.emplace(r, static_cast<int>(idx.size()));
  }
  int b = static_cast<int>(idx.size());
  std::vector<int> q(b1), m1v = values(m1), mv(b, -1);
  for (int x = 0; x < b1; ++x) q[x] = idx.at(root(x));
  for (int x = 0; x < b1; ++x) {
    if (mv[q[x]] >= 0 && mv[q[x]] != m1v[x]) return std::nullopt;
    mv[q[x]] = m1v[x];
  }
  return FlatFork{elem(m1.src, b, mv), SetOpCat::mor(b, b1, q)};
}

// ---------------------------------------------------------------------------
// StreamModule

int StreamModule::value_map(const std::vector<int>& fhat, int from, int to,
                            int v) const {
  return (v / from) * to + fhat[v % from];
}

std::string StreamModule::value_name(int a, int v) const {
  return std::to_string(v / a) + "@" + std::to_string(v % a);
}

std::string StreamModule::class_key(const TruncatedComplex& c,
                                    const MorRef& g) const {
  if (g.src != c.head()) throw std::invalid_argument("head map mismatch");
  std::vector<int> ghat = SetOpCat::fn(g);
  std::vector<std::string> words;
  for (int x : ghat) {
    std::vector<std::string> letters;
    for (int i = 1; i <= c.depth(); ++i) {
      int ai = c.objs[i];
      int v = values(c.elems[i - 1])[x];
      letters.push_back(std::to_string(v / ai));
      x = v % ai;
    }
    words.push_back(join(letters, ","));
  }
  return join(words, ";");
}

std::vector<std::pair<TruncatedComplex, MorRef>> StreamModule::class_reps(
    int depth, int anchor) const {
  long long per = checked_pow(alphabet_, depth);
  long long total = checked_pow(per, anchor);
  if (total > 200'000)
    throw bound_exceeded("too many stream classes at this depth and anchor");
  std::vector<std::pair<TruncatedComplex, MorRef>> out;
  for (long long combo = 0; combo < total; ++combo) {
    // Word for anchor element j = digits of the j-th coordinate.
    std::vector<std::vector<int>> words(anchor);
    long long rest = combo;
    for (int j = 0; j < anchor; ++j) {
      words[j] = decode(rest % per, alphabet_, depth);
      rest /= per;
    }
    TruncatedComplex c(anchor);
    for (int i = 0; i < depth; ++i) {
      std::vector<int> vals(anchor);
      for (int j = 0; j < anchor; ++j) vals[j] = words[j][i] * anchor + j;
      c.push(elem(anchor, anchor, vals));
    }
    out.push_back({c, base().identity(anchor)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// TreeModule

int TreeModule::value_map(const std::vector<int>& fhat, int from, int to,
                          int v) const {
  if (v >= from * from) return to * to + (v - from * from);
  return fhat[v % from] + to * fhat[v / from];
}

std::string TreeModule::value_name(int a, int v) const {
  if (v >= a * a) return "L" + std::to_string(v - a * a);
  return "(" + std::to_string(v % a) + "," + std::to_string(v / a) + ")";
}

namespace {

// Shapes are exact-depth strings: "*" at remaining depth 0, "L<l>" for a
// leaf, "(left,right)" with both children one level shallower.
std::pair<std::string, std::string> split_branch(const std::string& s) {
  int depth = 0;
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0)
      return {s.substr(1, i - 1), s.substr(i + 1, s.size() - i - 2)};
  }
  throw std::logic_error("malformed tree shape " + s);
}

std::string filler_shape(int depth, int labels) {
  if (depth == 0) return "*";
  if (labels > 0) return "L0";
  std::string child = filler_shape(depth - 1, labels);
  return "(" + child + "," + child + ")";
}

}  // namespace

std::vector<std::string> TreeModule::shapes(int depth, int labels) {
  if (depth == 0) return {"*"};
  std::vector<std::string> out;
  for (int l = 0; l < labels; ++l) out.push_back("L" + std::to_string(l));
  std::vector<std::string> sub = shapes(depth - 1, labels);
  for (const std::string& a : sub)
    for (const std::string& b : sub) out.push_back("(" + a + "," + b + ")");
  return out;
}

std::string TreeModule::class_key(const TruncatedComplex& c,
                                  const MorRef& g) const {
  if (g.src != c.head()) throw std::invalid_argument("head map mismatch");
  std::function<std::string(int, int)> unfold = [&](int x, int i) -> std::string {
    if (i == c.depth()) return "*";
    int an = c.objs[i + 1];
    int v = values(c.elems[i])[x];
    if (v >= an * an) return "L" + std::to_string(v - an * an);
    return "(" + unfold(v % an, i + 1) + "," + unfold(v / an, i + 1) + ")";
  };
  std::vector<std::string> parts;
  for (int x : SetOpCat::fn(g)) parts.push_back(unfold(x, 0));
  return join(parts, ";");
}

std::vector<std::pair<TruncatedComplex, MorRef>> TreeModule::class_reps(
    int depth, int anchor) const {
  std::vector<std::string> all = shapes(depth, labels_);
  long long total = checked_pow(static_cast<long long>(all.size()), anchor);
  if (total > 200'000)
    throw bound_exceeded("too many tree classes at this depth and anchor");

  std::vector<std::pair<TruncatedComplex, MorRef>> out;
  for (long long combo = 0; combo < total; ++combo) {
    std::vector<std::string> picked(anchor);
    long long rest = combo;
    for (int j = 0; j < anchor; ++j) {
      picked[j] = all[rest % all.size()];
      rest /= static_cast<long long>(all.size());
    }
    // Merge equal residual shapes level by level; a level with no real
    // residuals gets a filler object nothing maps onto.
    std::vector<std::vector<std::string>> level(depth + 1);
    {
      std::set<std::string> distinct(picked.begin(), picked.end());
      level[0].assign(distinct.begin(), distinct.end());
    }
    for (int i = 1; i <= depth; ++i) {
      std::set<std::string> next;
      for (const std::string& s : level[i - 1])
        if (s[0] == '(') {
          auto [l, r] = split_branch(s);
          next.insert(l);
          next.insert(r);
        }
      if (next.empty()) next.insert(filler_shape(depth - i, labels_));
      level[i].assign(next.begin(), next.end());
      if (static_cast<int>(level[i].size()) > base().bound())
        throw bound_exceeded("merged tree representative exceeds the base bound");
    }
    if (static_cast<int>(level[0].size()) > base().bound())
      throw bound_exceeded("merged tree representative exceeds the base bound");

    TruncatedComplex c(static_cast<int>(level[0].size()));
    for (int i = 1; i <= depth; ++i) {
      int ai = static_cast<int>(level[i].size());
      auto idx = [&](const std::string& s) {
        auto it = std::lower_bound(level[i].begin(), level[i].end(), s);
        return static_cast<int>(it - level[i].begin());
      };
      std::vector<int> vals;
      for (const std::string& s : level[i - 1]) {
        if (s[0] == 'L') {
          vals.push_back(ai * ai + std::stoi(s.substr(1)));
        } else {
          auto [l, r] = split_branch(s);
          vals.push_back(idx(l) + ai * idx(r));
        }
      }
      c.push(elem(ai, static_cast<int>(level[i - 1].size()), vals));
    }
    std::vector<int> ghat(anchor);
    for (int j = 0; j < anchor; ++j) {
      auto it = std::lower_bound(level[0].begin(), level[0].end(), picked[j]);
      ghat[j] = static_cast<int>(it - level[0].begin());
    }
    out.push_back({c, SetOpCat::mor(static_cast<int>(level[0].size()), anchor, ghat)});
  }
  return out;
}

}  // namespace selfsim
