#pragma once

#include <memory>

#include "selfsim/freyd.hpp"
#include "selfsim/lin.hpp"
#include "selfsim/setlike.hpp"

namespace selfsim {

// A self-contained builtin system: owning base category and module, plus
// the factorization oracle for bases that support one.
struct BuiltinSystem {
  std::string key;  // normalized reference echoed in reports
  std::unique_ptr<Cat> cat;
  std::unique_ptr<Mod> mod;
  std::unique_ptr<FactorizationOracle> oracle;  // null when unsupported
};

// Does the string look like `builtin:<key>(...)`?
bool is_builtin_ref(const std::string& s);

// Parses `builtin:<key>(<k>=<v>,...)` and instantiates the system.
// Keys: streams(alphabet=2,bound=4), trees(labels=1,bound=4),
// freyd(bound=4), lin(functor=x*w,bound=4,height=3) with functor x*w or
// x*w;1. Unknown keys or parameters throw parse_error.
BuiltinSystem make_builtin(const std::string& ref);

// The zip demonstration: a one-object system whose module elements are
// the alphabet letters, a carrier of eventually-constant stream pairs
// closed under the zip transition (head of the first stream out, streams
// swapped, first tail kept), and a comparison of every solved class
// against the directly interleaved prefix.
struct ZipDemoReport {
  bool ok = true;
  std::string detail;
  std::vector<std::string> lines;  // one `zip(<s>,<t>) = <prefix>` per seed pair
};
ZipDemoReport zip_demo(int alphabet, int prefix, int pairs = 20, unsigned seed = 20260826);

}  // namespace selfsim
