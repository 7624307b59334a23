#pragma once

#include <iosfwd>

#include "selfsim/builtins.hpp"
#include "selfsim/solvability.hpp"

namespace selfsim {

// A parsed system file: table-backed category and modules, optional
// functors/coalgebras/pointing, or a builtin reference instead. Raw
// pointers inside modules and coalgebras target the owned parts, so the
// struct is movable but members must not be reseated individually.
struct SystemFile {
  std::string source;
  std::unique_ptr<FinCategory> category;
  std::vector<std::unique_ptr<TableModule>> modules;
  std::vector<std::unique_ptr<FinSetFunctor>> functors;
  std::vector<std::unique_ptr<Coalgebra>> coalgebras;
  std::optional<Pointing> pointing;
  std::optional<BuiltinSystem> builtin;

  // The base category and the active module (the builtin's, else the
  // first declared, else the identity module of the category).
  const Cat& base() const;
  const Mod& active_module() const;
  bool identity_active() const;
  const Coalgebra* find_coalgebra(const std::string& name) const;

 private:
  mutable std::unique_ptr<IdentityModule> idmod_;
};

// Accepts a `builtin:...` reference or a file path.
SystemFile load_system(const std::string& path_or_ref);
SystemFile parse_system(std::istream& in, const std::string& source);

// Preorder chain files: `preorder` sections in level order (P_0 first),
// with `map` sections sending the points of each later level to the
// previous one. Relations are closed reflexively and transitively.
PreorderChain load_preorder_chain(const std::string& path);
PreorderChain parse_preorder_chain(std::istream& in);

// Resolves an object named on the command line: table categories match
// declared ids, bounded builtin bases match `obj_name` output.
int resolve_object(const Cat& c, const std::string& name);

}  // namespace selfsim
