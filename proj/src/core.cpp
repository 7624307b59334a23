#include "selfsim/core.hpp"

#include <cstdlib>

namespace selfsim {

std::optional<Cat::Span> Cat::span(int a, int a2) const {
  for (int b : objects()) {
    auto ls = hom(b, a);
    if (ls.empty()) continue;
    auto rs = hom(b, a2);
    if (rs.empty()) continue;
    return Span{ls.front(), rs.front()};
  }
  return std::nullopt;
}

std::optional<MorRef> Cat::fork(const MorRef& u, const MorRef& v) const {
  for (int b : objects()) {
    for (const MorRef& f : hom(b, u.src)) {
      if (compose(u, f) == compose(v, f)) return f;
    }
  }
  return std::nullopt;
}

std::string Mod::class_key(const TruncatedComplex&, const MorRef&) const {
  throw std::logic_error("module has no canonical class keys");
}

std::vector<std::pair<TruncatedComplex, MorRef>> Mod::class_reps(int, int) const {
  throw std::logic_error("module has no canonical class representatives");
}

EnumBudget& default_budget() {
  static EnumBudget budget = [] {
    EnumBudget b;
    if (const char* env = std::getenv("SELFSIM_MAX_ENUM")) {
      char* end = nullptr;
      long long v = std::strtoll(env, &end, 10);
      if (end && *end == '\0' && v > 0) b.max_items = v;
    }
    return b;
  }();
  return budget;
}

}  // namespace selfsim
