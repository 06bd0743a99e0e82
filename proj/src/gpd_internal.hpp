#pragma once

#include <map>
#include <utility>
#include <vector>

#include "e2t/groupoid.hpp"

namespace e2t::detail {

inline std::size_t idx(int i) { return static_cast<std::size_t>(i); }

using Key = std::vector<int>;

/// Collects one stage groupoid whose objects and arrows are identified by
/// integer keys. Objects come first, then identities (in object order), then
/// the remaining arrows.
class StageAssembler {
 public:
  int add_object(Key key, std::string name = {}) {
    int x = static_cast<int>(obj_keys_.size());
    if (name.empty()) name = "o" + std::to_string(x);
    obj_index_.emplace(key, x);
    obj_keys_.push_back(std::move(key));
    obj_names_.push_back(std::move(name));
    return x;
  }
  /// Call add_arrow for the identities first, one per object in order.
  int add_arrow(int dom, int cod, Key key, std::string name = {}) {
    int a = static_cast<int>(arrows_.size());
    if (name.empty()) name = a < num_objects() ? "id_" + obj_names_[idx(a)] : "m" + std::to_string(a);
    arr_index_.emplace(key, a);
    arr_keys_.push_back(std::move(key));
    arrows_.push_back({std::move(name), dom, cod});
    return a;
  }
  int num_objects() const { return static_cast<int>(obj_keys_.size()); }
  int num_arrows() const { return static_cast<int>(arrows_.size()); }
  const Key& object_key(int x) const { return obj_keys_[idx(x)]; }
  const Key& arrow_key(int a) const { return arr_keys_[idx(a)]; }
  int find_object(const Key& k) const {
    auto it = obj_index_.find(k);
    return it == obj_index_.end() ? -1 : it->second;
  }
  int find_arrow(const Key& k) const {
    auto it = arr_index_.find(k);
    return it == arr_index_.end() ? -1 : it->second;
  }
  const FinGroupoid::Arrow& arrow(int a) const { return arrows_[idx(a)]; }

  template <class Compose, class Inverse>
  FinGroupoid build(Compose compose_key, Inverse inverse_key) const {
    std::vector<int> inv;
    for (const auto& k : arr_keys_) inv.push_back(find_arrow(inverse_key(k)));
    return FinGroupoid::make(
        obj_names_, arrows_, [&](int g, int f) { return find_arrow(compose_key(arr_keys_[idx(g)], arr_keys_[idx(f)])); },
        std::move(inv));
  }

 private:
  std::vector<Key> obj_keys_;
  std::vector<std::string> obj_names_;
  std::map<Key, int> obj_index_;
  std::vector<Key> arr_keys_;
  std::vector<FinGroupoid::Arrow> arrows_;
  std::map<Key, int> arr_index_;
};

/// Restriction functors from key maps: obj_act(h, key) and arr_act(h, key)
/// give the key of the restricted object or arrow.
template <class ObjAct, class ArrAct>
std::vector<StageFunctor> restrictions(const FinCategory& c, const std::vector<StageAssembler>& st, ObjAct obj_act,
                                       ArrAct arr_act) {
  std::vector<StageFunctor> act(idx(c.num_arrows()));
  for (int h = 0; h < c.num_arrows(); ++h) {
    const auto& from = st[idx(c.cod(h))];
    const auto& to = st[idx(c.dom(h))];
    auto& f = act[idx(h)];
    for (int x = 0; x < from.num_objects(); ++x) f.obj.push_back(to.find_object(obj_act(h, from.object_key(x))));
    for (int a = 0; a < from.num_arrows(); ++a) f.arr.push_back(to.find_arrow(arr_act(h, from.arrow_key(a))));
  }
  return act;
}

/// Per stage: (left, right) component pair -> index, for objects and arrows
/// of a strict pullback.
struct PairIndex {
  std::vector<std::map<std::pair<int, int>, int>> obj;
  std::vector<std::map<std::pair<int, int>, int>> arr;

  explicit PairIndex(const GpdPullback& pb) {
    const int n = pb.apex.cat().num_objects();
    obj.resize(idx(n));
    arr.resize(idx(n));
    for (int p = 0; p < n; ++p) {
      const auto& s = pb.apex.stage(p);
      for (int x = 0; x < s.num_objects(); ++x) obj[idx(p)][{pb.left.obj(p, x), pb.right.obj(p, x)}] = x;
      for (int a = 0; a < s.num_arrows(); ++a) arr[idx(p)][{pb.left.arr(p, a), pb.right.arr(p, a)}] = a;
    }
  }
  int object(int p, int a, int b) const {
    auto it = obj[idx(p)].find({a, b});
    return it == obj[idx(p)].end() ? -1 : it->second;
  }
  int arrow(int p, int u, int v) const {
    auto it = arr[idx(p)].find({u, v});
    return it == arr[idx(p)].end() ? -1 : it->second;
  }
};

}  // namespace e2t::detail
