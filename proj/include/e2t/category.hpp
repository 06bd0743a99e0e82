#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace e2t {

/// Finite category with an explicit composition table. Arrow indices
/// 0..num_objects()-1 are the identities, so arrow `x` is `id_x`.
class FinCategory {
 public:
  struct Arrow {
    std::string name;
    int dom = 0;
    int cod = 0;
  };

  class Builder {
   public:
    explicit Builder(std::string name = "C");
    int add_object(const std::string& name);
    /// Objects must all be added before the first arrow.
    int add_arrow(const std::string& name, int dom, int cod);
    /// Records `g . f = h`.
    void set_composite(int g, int f, int h);
    /// Fills every missing composite whose hom-set has exactly one arrow.
    void derive_thin();
    /// Validates totality, typing, unit and associativity laws.
    FinCategory build() const;
    int num_objects() const { return static_cast<int>(objects_.size()); }
    int num_arrows() const { return static_cast<int>(arrows_.size()); }
    const Arrow& arrow(int a) const { return arrows_.at(static_cast<std::size_t>(a)); }
    std::optional<int> object_index(const std::string& name) const;
    std::optional<int> arrow_index(const std::string& name) const;

   private:
    std::string name_;
    std::vector<std::string> objects_;
    std::vector<Arrow> arrows_;
    std::vector<std::tuple<int, int, int>> composites_;
  };

  const std::string& name() const { return d_->name; }
  int num_objects() const { return static_cast<int>(d_->objects.size()); }
  int num_arrows() const { return static_cast<int>(d_->arrows.size()); }
  const std::string& object_name(int x) const { return d_->objects.at(static_cast<std::size_t>(x)); }
  const Arrow& arrow(int a) const { return d_->arrows[static_cast<std::size_t>(a)]; }
  int dom(int a) const { return arrow(a).dom; }
  int cod(int a) const { return arrow(a).cod; }
  int identity(int x) const { return x; }
  bool is_identity(int a) const { return a < num_objects(); }
  /// g . f; requires cod f == dom g.
  int compose(int g, int f) const;
  /// Arrows x -> y in index order.
  std::span<const int> hom(int x, int y) const;
  /// Arrows with domain x, grouped by codomain.
  std::span<const int> out(int x) const { return d_->out[static_cast<std::size_t>(x)]; }
  std::optional<int> object_index(const std::string& name) const;
  std::optional<int> arrow_index(const std::string& name) const;
  /// At most one arrow between any two objects.
  bool is_preorder() const;

  friend bool operator==(const FinCategory& a, const FinCategory& b);

 private:
  struct Data {
    std::string name;
    std::vector<std::string> objects;
    std::vector<Arrow> arrows;
    std::vector<std::vector<int>> out;        // per object, sorted by (cod, index)
    std::vector<int> pos_in_out;              // per arrow, index in out(dom)
    std::vector<std::vector<int>> comp;       // comp[f][pos_in_out[g]] = g . f
    std::vector<std::vector<int>> hom_begin;  // hom_begin[x][y] offset into out[x]
  };
  explicit FinCategory(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

using CategoryRef = std::shared_ptr<const FinCategory>;

namespace stock {
/// One object, identity only.
CategoryRef one();
/// a -f-> b.
CategoryRef two();
/// f, g: a -> b.
CategoryRef parallel_pair();
/// Poset bot < x, y < top.
CategoryRef commutative_square();
/// One object with endomorphisms {1, t, t2}, t.t = t2, t2 absorbing.
CategoryRef trunc_monoid();
/// All stock bases in the order above.
std::vector<CategoryRef> all();
std::optional<CategoryRef> by_name(const std::string& name);
}  // namespace stock

}  // namespace e2t
