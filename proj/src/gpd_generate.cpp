#include <numeric>

#include "e2t/generate.hpp"
#include "gpd_internal.hpp"

namespace e2t::gen {

using detail::idx;
using detail::Key;

namespace {

StageFunctor identity_functor(const FinGroupoid& g) {
  StageFunctor f;
  f.obj.resize(idx(g.num_objects()));
  f.arr.resize(idx(g.num_arrows()));
  std::iota(f.obj.begin(), f.obj.end(), 0);
  std::iota(f.arr.begin(), f.arr.end(), 0);
  return f;
}

/// Apply `first`, then `second`.
StageFunctor then(const StageFunctor& first, const StageFunctor& second) {
  StageFunctor h;
  for (int y : first.obj) h.obj.push_back(second.obj[idx(y)]);
  for (int v : first.arr) h.arr.push_back(second.arr[idx(v)]);
  return h;
}

std::vector<int> generating_arrows(const FinCategory& c) {
  std::vector<char> composite(idx(c.num_arrows()), 0);
  for (int k = 0; k < c.num_arrows(); ++k)
    for (int g : c.out(c.cod(k)))
      if (!c.is_identity(k) && !c.is_identity(g)) composite[idx(c.compose(g, k))] = 1;
  std::vector<int> gens;
  for (int h = 0; h < c.num_arrows(); ++h)
    if (!c.is_identity(h) && !composite[idx(h)]) gens.push_back(h);
  return gens;
}

/// Fills composites from the generators and checks every composition law.
bool complete_restrictions(const FinCategory& c, std::vector<std::optional<StageFunctor>>& act) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int k = 0; k < c.num_arrows(); ++k)
      for (int g : c.out(c.cod(k))) {
        int h = c.compose(g, k);
        if (act[idx(g)] && act[idx(k)] && !act[idx(h)]) {
          act[idx(h)] = then(*act[idx(g)], *act[idx(k)]);
          changed = true;
        }
      }
  }
  for (int k = 0; k < c.num_arrows(); ++k) {
    if (!act[idx(k)]) return false;
    for (int g : c.out(c.cod(k)))
      if (!(*act[idx(c.compose(g, k))] == then(*act[idx(g)], *act[idx(k)]))) return false;
  }
  return true;
}

}  // namespace

FinGroupoid block_groupoid(const std::vector<Block>& blocks) {
  detail::StageAssembler s;
  std::vector<int> first;
  for (const auto& b : blocks) {
    first.push_back(s.num_objects());
    for (int i = 0; i < b.objects; ++i) {
      int x = s.num_objects();
      s.add_object({x}, "x" + std::to_string(x));
    }
  }
  std::vector<int> order_of(idx(s.num_objects()));
  for (std::size_t k = 0; k < blocks.size(); ++k)
    for (int i = 0; i < blocks[k].objects; ++i) order_of[idx(first[k] + i)] = blocks[k].order;
  for (int x = 0; x < s.num_objects(); ++x) s.add_arrow(x, x, {x, x, 0});
  int named = 0;
  for (std::size_t k = 0; k < blocks.size(); ++k)
    for (int i = first[k]; i < first[k] + blocks[k].objects; ++i)
      for (int j = first[k]; j < first[k] + blocks[k].objects; ++j)
        for (int h = 0; h < blocks[k].order; ++h)
          if (i != j || h != 0) s.add_arrow(i, j, {i, j, h}, "g" + std::to_string(named++));
  return s.build(
      [&](const Key& g, const Key& f) { return Key{f[0], g[1], (f[2] + g[2]) % order_of[idx(f[0])]}; },
      [&](const Key& f) { return Key{f[1], f[0], (order_of[idx(f[0])] - f[2]) % order_of[idx(f[0])]}; });
}

std::vector<std::vector<Block>> block_shapes(int max_objects, int max_order) {
  std::vector<Block> kinds;
  for (int n = 1; n <= max_objects; ++n)
    for (int o = 1; o <= max_order; ++o) kinds.push_back({n, o});
  std::vector<std::vector<Block>> out;
  std::vector<Block> cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t from, int left) {
    out.push_back(cur);
    for (std::size_t k = from; k < kinds.size(); ++k)
      if (kinds[k].objects <= left) {
        cur.push_back(kinds[k]);
        rec(k, left - kinds[k].objects);
        cur.pop_back();
      }
  };
  rec(0, max_objects);
  return out;
}

std::vector<Block> random_blocks(Rng& rng, GroupoidBounds bounds) {
  int left = rng.chance(1, 10) ? 0 : rng.between(1, bounds.max_objects);
  std::vector<Block> blocks;
  while (left > 0) {
    Block b;
    b.objects = rng.between(1, left);
    b.order = rng.below(100) < bounds.thin_percent ? 1 : rng.between(1, bounds.max_order);
    left -= b.objects;
    blocks.push_back(b);
  }
  return blocks;
}

GpdPresheaf single_stage(const FinGroupoid& g) {
  return GpdPresheaf::unchecked(stock::one(), {g}, {identity_functor(g)});
}

std::optional<GpdFunctor> random_functor(Rng& rng, const GpdPresheaf& a, const GpdPresheaf& b, SearchLimits limits) {
  FunctorSearchOptions o;
  o.reorder_obj = [&](int, int, std::vector<int>& v) { rng.shuffle(v); };
  o.reorder_arr = [&](int, int, std::vector<int>& v) { rng.shuffle(v); };
  o.limits = limits;
  std::optional<GpdFunctor> found;
  search_functors(a, b, o, [&](const GpdFunctor& f) {
    found = f;
    return false;
  });
  return found;
}

GpdPresheaf groupoid(Rng& rng, const CategoryRef& base, GroupoidBounds bounds) {
  const FinCategory& c = *base;
  const auto gens = generating_arrows(c);
  for (int attempt = 0; attempt < kRetryCap; ++attempt) {
    std::vector<FinGroupoid> stages;
    for (int p = 0; p < c.num_objects(); ++p) stages.push_back(block_groupoid(random_blocks(rng, bounds)));
    std::vector<std::optional<StageFunctor>> act(idx(c.num_arrows()));
    for (int p = 0; p < c.num_objects(); ++p) act[idx(p)] = identity_functor(stages[idx(p)]);
    bool ok = true;
    for (int h : gens) {
      auto f = random_functor(rng, single_stage(stages[idx(c.cod(h))]), single_stage(stages[idx(c.dom(h))]));
      if (!f) {
        ok = false;
        break;
      }
      act[idx(h)] = f->stage(0);
    }
    if (!ok || !complete_restrictions(c, act)) continue;
    std::vector<StageFunctor> acts;
    for (auto& a : act) acts.push_back(std::move(*a));
    return GpdPresheaf::unchecked(base, std::move(stages), std::move(acts));
  }
  throw GenerationExhausted(0, kRetryCap);
}

void for_each_groupoid_presheaf(const CategoryRef& base, int max_objects, int max_order,
                                const std::function<void(const GpdPresheaf&)>& visit) {
  const FinCategory& c = *base;
  std::vector<FinGroupoid> shapes;
  for (const auto& s : block_shapes(max_objects, max_order)) shapes.push_back(block_groupoid(s));
  if (c.num_objects() == 1 && c.num_arrows() == 1) {
    for (const auto& g : shapes) visit(single_stage(g));
    return;
  }
  if (c.num_objects() != 2 || c.num_arrows() != 3 || c.dom(2) != 0 || c.cod(2) != 1)
    throw PreconditionError("for_each_groupoid_presheaf: base must be One or Two");
  for (const auto& ga : shapes)
    for (const auto& gb : shapes) {
      FunctorSearchOptions o;
      o.limits.node_cap = ~0ULL;
      search_functors(single_stage(gb), single_stage(ga), o, [&](const GpdFunctor& f) {
        visit(GpdPresheaf::unchecked(base, {ga, gb}, {identity_functor(ga), identity_functor(gb), f.stage(0)}));
        return true;
      });
    }
}

}  // namespace e2t::gen
