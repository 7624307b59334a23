#include "selfsim/builtins.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "selfsim/finalcoalg.hpp"

namespace selfsim {

namespace {

// `builtin:<key>(<k>=<v>,...)` -> key and parameter map.
void parse_ref(const std::string& ref, std::string* key,
               std::map<std::string, std::string>* params) {
  std::string body = ref.substr(8);  // after "builtin:"
  size_t open = body.find('(');
  if (open == std::string::npos) {
    *key = body;
    return;
  }
  if (body.back() != ')') throw parse_error(0, "unbalanced builtin parameters: " + ref);
  *key = body.substr(0, open);
  std::string inner = body.substr(open + 1, body.size() - open - 2);
  size_t pos = 0;
  while (pos < inner.size()) {
    size_t comma = inner.find(',', pos);
    if (comma == std::string::npos) comma = inner.size();
    std::string item = inner.substr(pos, comma - pos);
    size_t eq = item.find('=');
    if (eq == std::string::npos) throw parse_error(0, "builtin parameter without '=': " + item);
    (*params)[item.substr(0, eq)] = item.substr(eq + 1);
    pos = comma + 1;
  }
}

int int_param(const std::map<std::string, std::string>& params, const std::string& name,
              int fallback) {
  auto it = params.find(name);
  if (it == params.end()) return fallback;
  try {
    return std::stoi(it->second);
  } catch (const std::exception&) {
    throw parse_error(0, "builtin parameter " + name + " is not a number: " + it->second);
  }
}

void reject_unknown(const std::map<std::string, std::string>& params,
                    const std::vector<std::string>& known) {
  for (const auto& [k, v] : params)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw parse_error(0, "unknown builtin parameter: " + k);
}

// An eventually constant stream: explicit prefix, then `constant`
// forever. Canonical form strips prefix letters equal to the constant
// from the right, so equal streams compare equal.
struct EvStream {
  std::vector<int> prefix;
  int constant = 0;

  void canonicalize() {
    while (!prefix.empty() && prefix.back() == constant) prefix.pop_back();
  }
  int head() const { return prefix.empty() ? constant : prefix.front(); }
  EvStream tail() const {
    EvStream t = *this;
    if (!t.prefix.empty()) t.prefix.erase(t.prefix.begin());
    return t;
  }
  std::string str() const {
    std::string out;
    for (int l : prefix) out += std::to_string(l);
    return out + "(" + std::to_string(constant) + ")*";
  }
  friend auto operator<=>(const EvStream&, const EvStream&) = default;
};

}  // namespace

bool is_builtin_ref(const std::string& s) { return s.rfind("builtin:", 0) == 0; }

BuiltinSystem make_builtin(const std::string& ref) {
  if (!is_builtin_ref(ref)) throw parse_error(0, "not a builtin reference: " + ref);
  std::string key;
  std::map<std::string, std::string> params;
  parse_ref(ref, &key, &params);

  BuiltinSystem out;
  out.key = ref;
  if (key == "streams") {
    reject_unknown(params, {"alphabet", "bound"});
    int alphabet = int_param(params, "alphabet", 2), bound = int_param(params, "bound", 4);
    if (alphabet < 1 || bound < 1) throw parse_error(0, "streams needs alphabet,bound >= 1");
    auto cat = std::make_unique<SetOpCat>(bound);
    out.mod = std::make_unique<StreamModule>(*cat, alphabet);
    out.cat = std::move(cat);
  } else if (key == "trees") {
    reject_unknown(params, {"labels", "bound"});
    int labels = int_param(params, "labels", 1), bound = int_param(params, "bound", 4);
    if (labels < 1 || bound < 1) throw parse_error(0, "trees needs labels,bound >= 1");
    auto cat = std::make_unique<SetOpCat>(bound);
    out.mod = std::make_unique<TreeModule>(*cat, labels);
    out.cat = std::move(cat);
  } else if (key == "freyd") {
    reject_unknown(params, {"bound"});
    int bound = int_param(params, "bound", 4);
    if (bound < 2) throw parse_error(0, "freyd needs bound >= 2");
    auto cat = std::make_unique<Pos01Cat>(bound);
    out.mod = std::make_unique<FreydModule>(*cat);
    out.cat = std::move(cat);
  } else if (key == "lin") {
    reject_unknown(params, {"functor", "bound", "height"});
    int bound = int_param(params, "bound", 4), height = int_param(params, "height", 3);
    if (bound < 1 || height < 1) throw parse_error(0, "lin needs bound,height >= 1");
    std::string fsel = params.count("functor") ? params.at("functor") : "x*w";
    LinFunctor functor;
    if (fsel == "x*w")
      functor = LinFunctor::kStarOmega;
    else if (fsel == "x*w;1")
      functor = LinFunctor::kStarOmegaThenOne;
    else
      throw parse_error(0, "unknown lin functor: " + fsel + " (use x*w or x*w;1)");
    auto cat = std::make_unique<LinOpCat>(bound);
    out.mod = std::make_unique<LinModule>(*cat, functor, height);
    out.cat = std::move(cat);
    out.oracle = std::make_unique<LinFactorizationOracle>();
  } else {
    throw parse_error(0, "unknown builtin system: " + key);
  }
  return out;
}

ZipDemoReport zip_demo(int alphabet, int prefix, int pairs, unsigned seed) {
  ZipDemoReport out;
  std::mt19937 rng(seed);
  auto rand_stream = [&] {
    EvStream s;
    int len = static_cast<int>(rng() % 4);
    for (int i = 0; i < len; ++i)
      s.prefix.push_back(static_cast<int>(rng() % static_cast<unsigned>(alphabet)));
    s.constant = static_cast<int>(rng() % static_cast<unsigned>(alphabet));
    s.canonicalize();
    return s;
  };

  // Seed pairs, closed under the zip transition (s,t) -> (t, tail s).
  using State = std::pair<EvStream, EvStream>;
  std::vector<State> seeds, states;
  for (int i = 0; i < pairs; ++i) seeds.push_back({rand_stream(), rand_stream()});
  states = seeds;
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  for (size_t i = 0; i < states.size(); ++i) {
    State next{states[i].second, states[i].first.tail()};
    if (std::find(states.begin(), states.end(), next) == states.end())
      states.push_back(next);
  }
  std::sort(states.begin(), states.end());
  auto state_index = [&](const State& s) {
    return static_cast<int>(std::lower_bound(states.begin(), states.end(), s) -
                            states.begin());
  };

  // One-object base; the module's elements are the alphabet letters, so a
  // depth-n complex is exactly an n-letter word.
  FinCategory one("zip-base");
  one.add_object("1");
  one.seal();
  TableModule m("zip-letters", one);
  for (int l = 0; l < alphabet; ++l)
    m.add_element("l" + std::to_string(l), "1", "1");
  m.seal();

  FinSetFunctor x;
  x.fname = "zip-states";
  x.base = &one;
  x.value.push_back({});
  for (const State& s : states) x.value[0].push_back(s.first.str() + "|" + s.second.str());
  x.action.push_back({});  // only the identity, filled below
  for (int i = 0; i < static_cast<int>(states.size()); ++i) x.action[0].push_back(i);

  Coalgebra e;
  e.name = "zip";
  e.module = &m;
  e.carrier = &x;
  e.structure.push_back({});
  for (const State& s : states) {
    ElemRef letter = m.elem_ref("l" + std::to_string(s.first.head()));
    e.structure[0].push_back({letter, {0, state_index({s.second, s.first.tail()})}});
  }
  auto vr = e.validate();
  for (const auto& [what, why] : vr) out.lines.push_back("invalid coalgebra: " + what);
  if (!vr.empty()) {
    out.ok = false;
    out.detail = "coalgebra validation failed";
    return out;
  }

  SolveReport solved = solve(e, prefix);
  if (!solved.ok) {
    out.ok = false;
    out.detail = "solution square failed";
    return out;
  }

  // Word of a class representative: the letters of its complex, head out.
  auto class_word = [&](int k) {
    std::string w;
    for (const ElemRef& el : solved.approx.rep(0, k).c.elems)
      w += m.elem_name(el).substr(1);
    return w;
  };
  int mismatches = 0;
  for (const State& s : seeds) {
    std::string direct;
    EvStream a = s.first, b = s.second;
    for (int i = 0; i < prefix; ++i) {
      direct += std::to_string(a.head());
      EvStream ta = a.tail();
      a = b;
      b = ta;
    }
    std::string via = class_word(solved.cls.at({0, state_index(s)}));
    if (via != direct) ++mismatches;
    out.lines.push_back("zip(" + s.first.str() + "," + s.second.str() + ") = " + direct +
                        (via == direct ? "" : " MISMATCH solve=" + via));
  }
  out.ok = mismatches == 0;
  out.detail = std::to_string(seeds.size()) + " pairs, prefix " + std::to_string(prefix) +
               ", " + std::to_string(states.size()) + " closed states, " +
               std::to_string(mismatches) + " mismatches";
  return out;
}

}  // namespace selfsim
