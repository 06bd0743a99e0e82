#pragma once

// The .e2t text format. Line-oriented: statements end at a newline or `;`,
// `#` starts a comment, names match [A-Za-z_][A-Za-z0-9_]*.
//
//   category C { objects: a, b; f: a -> b; g . f = h }
//   presheaf X over C { a: x0, x1; b: y; act f: y -> x0 }
//   map m: X -> Y { a: x0 -> u, x1 -> u; b: y -> v }
//   groupoid G over C {
//     stage a { objects: x; s: x -> x; s . s = id_x }
//     stage b { objects: y }
//     act f: y -> x
//   }
//   gfunctor F: G -> H { a: x -> x', s -> t }
//   twocell al: F => F' { a: x -> s }
//   passembly A { x: S K; y: K }
//   assembly B { x: S K | K }
//   site W { generators: A, A2; term_size: 5 }
//   import "other.e2t"
//
// Bases may also be stock names (One, Two, ParallelPair, Square, Trunc3).
// Identities are id_<object>. Composites and actions on composite arrows may
// be omitted when the hom-set is a singleton or the arrow factors through
// given ones.

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "e2t/assemblies.hpp"
#include "e2t/groupoid.hpp"

namespace e2t::format {

struct SiteBlock {
  std::vector<std::string> generators;  // passembly block names
  HomBudget budget;
  std::size_t arrow_cap = kDefaultArrowCap;
  Site site;
};

using Value = std::variant<CategoryRef, Presheaf, NatTransf, GpdPresheaf, GpdFunctor, TwoCell, PartitionedAssembly,
                           Assembly, SiteBlock>;

std::string kind_name(const Value& v);

struct Block {
  std::string name;
  Value value;
  int line = 0;
};

struct Document {
  std::vector<std::string> imports;
  std::vector<Block> blocks;
  /// Blocks brought in by imports, in load order; visible to lookups only.
  std::vector<Block> imported;

  const Block* find(const std::string& name) const;
  template <class T>
  const T* get(const std::string& name) const {
    const Block* b = find(name);
    return b ? std::get_if<T>(&b->value) : nullptr;
  }
  /// Last own block holding a T.
  template <class T>
  const Block* last() const {
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
      if (std::holds_alternative<T>(it->value)) return &*it;
    return nullptr;
  }

  /// Appends a block, first adding (under fresh names) any base category,
  /// presheaf, groupoid or functor it refers to that is not yet present.
  /// Returns the block name used.
  std::string add(const std::string& name, const Value& v);
};

struct ParseOptions {
  std::size_t step_budget = pca::kDefaultStepBudget;
  /// Directory that `import` paths are relative to.
  std::filesystem::path base_dir = ".";
};

/// Throws SyntaxError and InvariantViolation.
Document parse(const std::string& text, const std::string& file = "<input>", const ParseOptions& opts = {});
/// Throws Error when the file cannot be read.
Document parse_file(const std::filesystem::path& path, ParseOptions opts = {});

/// Names that are not valid or not unique are replaced by canonical ones.
/// Throws Error when a block refers to something not declared before it.
std::string emit(const Document& doc);

/// Same block names, kinds and structure, in order.
bool same(const Document& a, const Document& b);

}  // namespace e2t::format
