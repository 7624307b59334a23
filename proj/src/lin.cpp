#include "selfsim/lin.hpp"

#include <algorithm>
#include <numeric>

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

bool nondecreasing(const std::vector<int>& v) {
  for (size_t i = 1; i < v.size(); ++i)
    if (v[i - 1] > v[i]) return false;
  return true;
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
// LinOpCat

std::vector<int> LinOpCat::objects() const {
  std::vector<int> out(bound_);
  std::iota(out.begin(), out.end(), 1);
  return out;
}

std::vector<std::vector<int>> LinOpCat::monotone_maps(int len, int base) {
  std::vector<std::vector<int>> out;
  if (len == 0) {
    out.push_back({});
    return out;
  }
  if (base == 0) return out;
  std::vector<int> cur(len);
  auto rec = [&](auto&& self, int pos, int lo) -> void {
    if (pos == len) {
      out.push_back(cur);
      return;
    }
    for (int v = lo; v < base; ++v) {
      cur[pos] = v;
      self(self, pos + 1, v);
    }
  };
  rec(rec, 0, 0);
  return out;
}

std::vector<MorRef> LinOpCat::hom(int a, int b) const {
  if (a < 1 || b < 0) throw std::invalid_argument("bad object handle");
  checked_pow(a, b);
  std::vector<MorRef> out;
  for (const auto& f : monotone_maps(b, a)) out.push_back(mor(a, b, f));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> LinOpCat::fn(const MorRef& f) {
  return decode(f.code, f.src, f.dst);
}

MorRef LinOpCat::mor(int src, int dst, const std::vector<int>& fn) {
  if (static_cast<int>(fn.size()) != dst)
    throw std::invalid_argument("underlying function has the wrong arity");
  if (!nondecreasing(fn)) throw std::invalid_argument("underlying function not monotone");
  return {src, dst, encode(fn, src)};
}

MorRef LinOpCat::identity(int a) const {
  std::vector<int> id(a);
  std::iota(id.begin(), id.end(), 0);
  return mor(a, a, id);
}

MorRef LinOpCat::compose(MorRef g, MorRef f) const {
  if (g.src != f.dst) throw std::invalid_argument("composition mismatch");
  std::vector<int> gf = fn(g), ff = fn(f), out(gf.size());
  for (size_t i = 0; i < gf.size(); ++i) out[i] = ff[gf[i]];
  return mor(f.src, g.dst, out);
}

std::string LinOpCat::mor_name(const MorRef& f) const {
  std::vector<std::string> parts;
  for (int x : fn(f)) parts.push_back(std::to_string(x));
  return "[" + join(parts, " ") + "]";
}

// The concatenation a ; a2 receives both orders by monotone injections,
// so it always provides a span (possibly beyond the enumeration bound).
std::optional<Cat::Span> LinOpCat::span(int a, int a2) const {
  std::vector<int> l(a), r(a2);
  std::iota(l.begin(), l.end(), 0);
  std::iota(r.begin(), r.end(), a);
  return Span{mor(a + a2, a, l), mor(a + a2, a2, r)};
}

// Forks are coequalizers of the underlying monotone functions: quotient
// the codomain by u(y) ~ v(y) and collapse each class to the interval it
// spans (monotone maps identifying the endpoints identify everything in
// between). The result is the interval count, which is never zero.
std::optional<MorRef> LinOpCat::fork(const MorRef& u, const MorRef& v) const {
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
  std::vector<int> reach(a);
  std::iota(reach.begin(), reach.end(), 0);
  for (int x = 0; x < a; ++x) reach[root(x)] = std::max(reach[root(x)], x);
  std::vector<int> q(a);
  int idx = 0, end = -1;
  for (int x = 0; x < a; ++x) {
    if (x > end) {
      if (end >= 0) ++idx;
      end = x;
    }
    end = std::max(end, reach[root(x)]);
    q[x] = idx;
  }
  return mor(idx + 1, a, q);
}

// ---------------------------------------------------------------------------
// LinModule

int LinModule::phi_size(int a) const {
  return a * height_ + (functor_ == LinFunctor::kStarOmegaThenOne ? 1 : 0);
}

std::vector<int> LinModule::phi_map(const std::vector<int>& fhat, int from, int to) const {
  std::vector<int> out(phi_size(from));
  for (int v = 0; v < from * height_; ++v)
    out[v] = (v / from) * to + fhat[v % from];
  if (functor_ == LinFunctor::kStarOmegaThenOne) out[from * height_] = to * height_;
  return out;
}

std::vector<int> LinModule::values(const ElemRef& m) const {
  return decode(m.code, phi_size(m.src), m.dst);
}

ElemRef LinModule::elem(int a, int b, const std::vector<int>& values) const {
  if (static_cast<int>(values.size()) != b)
    throw std::invalid_argument("element values have the wrong arity");
  if (!nondecreasing(values)) throw std::invalid_argument("element values not monotone");
  return {a, b, encode(values, phi_size(a))};
}

std::vector<ElemRef> LinModule::elems(int a, int b) const {
  checked_pow(phi_size(a), b);
  std::vector<ElemRef> out;
  for (const auto& v : LinOpCat::monotone_maps(b, phi_size(a)))
    out.push_back(elem(a, b, v));
  std::sort(out.begin(), out.end());
  return out;
}

ElemRef LinModule::lact(const ElemRef& m, const MorRef& f) const {
  if (f.dst != m.src) throw std::invalid_argument("left action mismatch");
  std::vector<int> pm = phi_map(LinOpCat::fn(f), f.dst, f.src);
  std::vector<int> vals = values(m), out(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) out[i] = pm[vals[i]];
  return elem(f.src, m.dst, out);
}

ElemRef LinModule::ract(const MorRef& g, const ElemRef& m) const {
  if (g.src != m.dst) throw std::invalid_argument("right action mismatch");
  std::vector<int> gf = LinOpCat::fn(g), vals = values(m), out(gf.size());
  for (size_t i = 0; i < gf.size(); ++i) out[i] = vals[gf[i]];
  return elem(m.src, g.dst, out);
}

std::string LinModule::elem_name(const ElemRef& m) const {
  std::vector<std::string> parts;
  for (int v : values(m)) {
    if (v == m.src * height_)
      parts.push_back("T");
    else
      parts.push_back(std::to_string(v % m.src) + "." + std::to_string(v / m.src));
  }
  return "[" + join(parts, " ") + "]";
}

// Merge the two value sequences into one monotone sequence; the merge
// positions give the two projections back.
std::optional<FlatSpan> LinModule::flat_span(const ElemRef& m1, const ElemRef& m2) const {
  if (m1.src != m2.src) throw std::invalid_argument("span of elements with distinct tails");
  std::vector<int> v1 = values(m1), v2 = values(m2);
  int b1 = m1.dst, b2 = m2.dst;
  std::vector<int> merged, p1(b1), p2(b2);
  size_t i = 0, j = 0;
  while (i < v1.size() || j < v2.size()) {
    bool left = j == v2.size() || (i < v1.size() && v1[i] <= v2[j]);
    if (left) {
      p1[i] = static_cast<int>(merged.size());
      merged.push_back(v1[i++]);
    } else {
      p2[j] = static_cast<int>(merged.size());
      merged.push_back(v2[j++]);
    }
  }
  return FlatSpan{elem(m1.src, b1 + b2, merged),
                  LinOpCat::mor(b1 + b2, b1, p1),
                  LinOpCat::mor(b1 + b2, b2, p2)};
}

// The base fork quotients b1 into intervals; when m1 equalizes u and v it
// is constant on every interval, so its values descend along the fork.
std::optional<FlatFork> LinModule::flat_fork(const MorRef& u, const MorRef& v,
                                             const ElemRef& m1) const {
  if (ract(u, m1) != ract(v, m1)) return std::nullopt;
  auto f = base_->fork(u, v);
  if (!f) return std::nullopt;
  std::vector<int> q = LinOpCat::fn(*f), vals = values(m1), w(f->src, -1);
  for (size_t x = 0; x < q.size(); ++x) {
    if (w[q[x]] >= 0 && w[q[x]] != vals[x]) return std::nullopt;
    w[q[x]] = vals[x];
  }
  return FlatFork{elem(m1.src, f->src, w), *f};
}

// ---------------------------------------------------------------------------
// Factorization

bool lin_extremal_mono(const MorRef& f) {
  std::vector<int> ff = LinOpCat::fn(f);
  for (size_t i = 1; i < ff.size(); ++i)
    if (ff[i - 1] >= ff[i]) return false;
  return true;
}

LinFactorization lin_factorize(int vertex, const std::vector<MorRef>& legs) {
  std::vector<int> image;
  for (const MorRef& leg : legs) {
    if (leg.src != vertex) throw std::invalid_argument("leg does not start at the vertex");
    for (int x : LinOpCat::fn(leg)) image.push_back(x);
  }
  std::sort(image.begin(), image.end());
  image.erase(std::unique(image.begin(), image.end()), image.end());
  int z = static_cast<int>(image.size());
  std::vector<int> pos(vertex, -1);
  for (int i = 0; i < z; ++i) pos[image[i]] = i;

  LinFactorization out;
  out.mono = LinOpCat::mor(vertex, z, image);
  out.epi.vertex = z;
  for (const MorRef& leg : legs) {
    std::vector<int> ff = LinOpCat::fn(leg), corestricted(ff.size());
    for (size_t i = 0; i < ff.size(); ++i) corestricted[i] = pos[ff[i]];
    out.epi.legs.push_back(LinOpCat::mor(z, leg.dst, corestricted));
  }
  return out;
}

std::vector<EpiCocone> LinFactorizationOracle::jointly_epi(const std::vector<int>& objs,
                                                           EnumBudget* budget) const {
  int total = 0;
  for (int s : objs) total += s;
  std::vector<EpiCocone> out;
  for (int v = 1; v <= total; ++v) {
    std::vector<std::vector<std::vector<int>>> cand;
    for (int s : objs) cand.push_back(LinOpCat::monotone_maps(s, v));
    std::vector<size_t> pick(objs.size(), 0);
    for (bool more = true; more;) {
      if (budget) budget->charge();
      std::vector<bool> hit(v, false);
      for (size_t k = 0; k < objs.size(); ++k)
        for (int x : cand[k][pick[k]]) hit[x] = true;
      if (std::find(hit.begin(), hit.end(), false) == hit.end()) {
        EpiCocone co{v, {}};
        for (size_t k = 0; k < objs.size(); ++k)
          co.legs.push_back(LinOpCat::mor(v, objs[k], cand[k][pick[k]]));
        out.push_back(std::move(co));
      }
      size_t k = 0;
      while (k < pick.size() && ++pick[k] == cand[k].size()) pick[k++] = 0;
      more = k < pick.size();
    }
  }
  return out;
}

}  // namespace selfsim
