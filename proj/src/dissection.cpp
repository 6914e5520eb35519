#include "cantor/dissection.hpp"

#include "cantor/errors.hpp"

#include <algorithm>
#include <string>
#include <utility>

namespace cantor {

std::string_view to_string(Backing b) {
  switch (b) {
    case Backing::explicit_tree: return "explicit-tree";
    case Backing::rule: return "rule";
    case Backing::ifs: return "ifs";
    case Backing::union_of_two: return "union";
    case Backing::sum: return "sum";
    case Backing::affine_image: return "affine-image";
  }
  return "unknown";
}

namespace {

template <Scalar T>
class RuleConstruction final : public Construction<T> {
 public:
  RuleConstruction(Interval<T> root, T left, T right)
      : root_(std::move(root)), left_(std::move(left)), right_(std::move(right)) {}

  Interval<T> root() const override { return root_; }

  ConstructionPtr<T> child(int j) const override {
    T d = root_.diameter();
    if (j == 0) return std::make_shared<RuleConstruction>(Interval<T>(root_.lo, root_.lo + left_ * d), left_, right_);
    return std::make_shared<RuleConstruction>(Interval<T>(root_.hi - right_ * d, root_.hi), left_, right_);
  }

  Backing backing() const override { return Backing::rule; }
  std::optional<std::vector<T>> ratio_set() const override { return std::vector<T>{left_, right_}; }
  std::optional<T> proven_ratio_bound() const override { return std::min(left_, right_); }

 private:
  Interval<T> root_;
  T left_;
  T right_;
};

template <Scalar T>
struct ExplicitData {
  std::vector<std::vector<Interval<T>>> levels;
};

template <Scalar T>
class ExplicitConstruction final : public Construction<T> {
 public:
  ExplicitConstruction(std::shared_ptr<const ExplicitData<T>> data, std::size_t level, std::size_t index)
      : data_(std::move(data)), level_(level), index_(index) {}

  Interval<T> root() const override { return data_->levels[level_][index_]; }

  ConstructionPtr<T> child(int j) const override {
    if (level_ + 1 >= data_->levels.size()) {
      throw DepthUnavailable("explicit tree has no level " + std::to_string(level_ + 1));
    }
    return std::make_shared<ExplicitConstruction>(data_, level_ + 1, 2 * index_ + static_cast<std::size_t>(j));
  }

  Backing backing() const override { return Backing::explicit_tree; }
  std::optional<std::size_t> remaining_depth() const override { return data_->levels.size() - 1 - level_; }

 private:
  std::shared_ptr<const ExplicitData<T>> data_;
  std::size_t level_;
  std::size_t index_;
};

template <Scalar T>
class AffineImageConstruction final : public Construction<T> {
 public:
  AffineImageConstruction(ConstructionPtr<T> inner, T scale, T shift)
      : inner_(std::move(inner)), scale_(std::move(scale)), shift_(std::move(shift)) {}

  Interval<T> root() const override { return inner_->root().affine_image(scale_, shift_); }

  ConstructionPtr<T> child(int j) const override {
    int k = scale_ < 0 ? 1 - j : j;
    return std::make_shared<AffineImageConstruction>(inner_->child(k), scale_, shift_);
  }

  Backing backing() const override { return Backing::affine_image; }

  std::optional<std::vector<T>> ratio_set() const override { return inner_->ratio_set(); }
  std::optional<T> proven_ratio_bound() const override { return inner_->proven_ratio_bound(); }
  std::optional<std::size_t> remaining_depth() const override { return inner_->remaining_depth(); }

 private:
  ConstructionPtr<T> inner_;
  T scale_;
  T shift_;
};

template <Scalar T>
void check_split(const Interval<T>& parent, const Interval<T>& left, const Interval<T>& right, const std::string& where) {
  bool ok = parent.lo == left.lo && left.lo < left.hi && left.hi < right.lo && right.lo < right.hi &&
            right.hi == parent.hi;
  if (!ok) throw InvariantViolation("nesting violated at word '" + where + "'");
}

}  // namespace

template <Scalar T>
ConstructionPtr<T> make_rule(Interval<T> root, T left, T right) {
  if (!(root.lo < root.hi)) throw InputError("rule construction needs a non-degenerate root interval");
  if (!(T(0) < left) || !(T(0) < right) || !(left + right < T(1))) {
    throw InputError("rule fractions must be positive with sum < 1");
  }
  return std::make_shared<RuleConstruction<T>>(std::move(root), std::move(left), std::move(right));
}

template <Scalar T>
ConstructionPtr<T> middle_third(T lo, T hi) {
  return make_rule(Interval<T>(std::move(lo), std::move(hi)), ratio<T>(1, 3), ratio<T>(1, 3));
}

template <Scalar T>
ConstructionPtr<T> make_explicit(std::vector<std::vector<Interval<T>>> levels, std::size_t depth_limit) {
  if (levels.empty()) throw InputError("explicit tree needs at least the root level");
  if (levels.size() - 1 > depth_limit) {
    throw InputError("explicit tree deeper than the limit of " + std::to_string(depth_limit) + " levels");
  }
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (levels[k].size() != (std::size_t{1} << k)) {
      throw InputError("explicit tree level " + std::to_string(k) + " must hold " +
                       std::to_string(std::size_t{1} << k) + " intervals");
    }
  }
  if (!(levels[0][0].lo < levels[0][0].hi)) throw InputError("explicit tree root is degenerate");
  for (std::size_t k = 0; k + 1 < levels.size(); ++k) {
    for (std::size_t i = 0; i < levels[k].size(); ++i) {
      try {
        check_split(levels[k][i], levels[k + 1][2 * i], levels[k + 1][2 * i + 1],
                    BinaryWord::from_index(i, k).to_string());
      } catch (const InvariantViolation& e) {
        throw InputError(e.what());
      }
    }
  }
  auto data = std::make_shared<ExplicitData<T>>();
  data->levels = std::move(levels);
  return std::make_shared<ExplicitConstruction<T>>(std::move(data), 0, 0);
}

template <Scalar T>
ConstructionPtr<T> materialize(const ConstructionPtr<T>& c, std::size_t depth) {
  std::vector<std::vector<Interval<T>>> levels;
  std::vector<ConstructionPtr<T>> nodes{c};
  for (std::size_t k = 0; k <= depth; ++k) {
    std::vector<Interval<T>> row;
    row.reserve(nodes.size());
    for (const auto& n : nodes) row.push_back(n->root());
    levels.push_back(std::move(row));
    if (k == depth) break;
    std::vector<ConstructionPtr<T>> next;
    next.reserve(2 * nodes.size());
    for (const auto& n : nodes) {
      next.push_back(n->child(0));
      next.push_back(n->child(1));
    }
    nodes = std::move(next);
  }
  return make_explicit(std::move(levels), std::max(depth, kExplicitDepthLimit));
}

template <Scalar T>
ConstructionPtr<T> affine_image(const ConstructionPtr<T>& c, const T& scale, const T& shift) {
  if (scale == 0) throw InputError("affine image with zero scale");
  return std::make_shared<AffineImageConstruction<T>>(c, scale, shift);
}

template <Scalar T>
ConstructionPtr<T> subtree(const ConstructionPtr<T>& c, const BinaryWord& w) {
  ConstructionPtr<T> node = c;
  for (std::size_t i = 0; i < w.size(); ++i) node = node->child(w[i]);
  return node;
}

template <Scalar T>
std::vector<ConstructionPtr<T>> level_nodes(const ConstructionPtr<T>& c, std::size_t n) {
  if (auto rem = c->remaining_depth(); rem && n > *rem) {
    throw DepthUnavailable("depth " + std::to_string(n) + " exceeds the " + std::to_string(*rem) +
                           " levels of this construction");
  }
  std::vector<ConstructionPtr<T>> nodes{c};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<ConstructionPtr<T>> next;
    next.reserve(2 * nodes.size());
    for (const auto& node : nodes) {
      next.push_back(node->child(0));
      next.push_back(node->child(1));
    }
    nodes = std::move(next);
  }
  return nodes;
}

template <Scalar T>
IntervalUnion<T> cover(const ConstructionPtr<T>& c, std::size_t n) {
  auto nodes = level_nodes(c, n);
  std::vector<Interval<T>> ivs;
  ivs.reserve(nodes.size());
  for (const auto& node : nodes) ivs.push_back(node->root());
  return IntervalUnion<T>::from_sorted(std::move(ivs));
}

template <Scalar T>
T dissection_ratio(const ConstructionPtr<T>& c, const BinaryWord& w) {
  if (w.empty()) throw UndefinedRatio("dissection ratio is undefined for the empty word");
  auto parent = subtree(c, w.parent());
  auto node = parent->child(w[w.size() - 1]);
  return node->root().diameter() / parent->root().diameter();
}

template <Scalar T>
OpenInterval<T> gap(const ConstructionPtr<T>& c, const BinaryWord& w) {
  auto node = subtree(c, w);
  return OpenInterval<T>{node->child(0)->root().hi, node->child(1)->root().lo};
}

template <Scalar T>
GapSummary<T> max_gap(const ConstructionPtr<T>& c, std::size_t depth) {
  if (depth == 0) throw InputError("max_gap needs depth >= 1");
  if (auto rem = c->remaining_depth(); rem && depth > *rem) depth = *rem;
  if (depth == 0) throw DepthUnavailable("construction has no gaps to enumerate");
  GapSummary<T> best{T(-1), BinaryWord{}, depth, false};
  std::vector<std::pair<ConstructionPtr<T>, BinaryWord>> nodes{{c, BinaryWord{}}};
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<std::pair<ConstructionPtr<T>, BinaryWord>> next;
    next.reserve(2 * nodes.size());
    for (auto& [node, word] : nodes) {
      auto left = node->child(0);
      auto right = node->child(1);
      T width = right->root().lo - left->root().hi;
      if (best.width < width) {
        best.width = width;
        best.word = word;
      }
      next.emplace_back(std::move(left), word.child(0));
      next.emplace_back(std::move(right), word.child(1));
    }
    nodes = std::move(next);
  }
  T widest_leaf(0);
  for (const auto& [node, word] : nodes) {
    T d = node->root().diameter();
    if (widest_leaf < d) widest_leaf = d;
  }
  best.exhaustive = widest_leaf <= best.width;
  return best;
}

template <Scalar T>
UlbdCertificate<T> ulbd_bound(const ConstructionPtr<T>& c, std::size_t depth) {
  if (depth == 0) throw InputError("ulbd_bound needs depth >= 1");
  if (auto rem = c->remaining_depth(); rem && depth > *rem) depth = *rem;
  if (depth == 0) throw DepthUnavailable("construction realizes no dissection");
  std::optional<T> bound;
  std::vector<ConstructionPtr<T>> nodes{c};
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<ConstructionPtr<T>> next;
    next.reserve(2 * nodes.size());
    for (const auto& node : nodes) {
      T d = node->root().diameter();
      for (int j = 0; j < 2; ++j) {
        auto ch = node->child(j);
        T r = ch->root().diameter() / d;
        if (!bound || r < *bound) bound = r;
        next.push_back(std::move(ch));
      }
    }
    nodes = std::move(next);
  }
  return UlbdCertificate<T>{*bound, depth, c->ratio_set().has_value()};
}

template <Scalar T>
std::optional<T> usable_ratio_bound(const ConstructionPtr<T>& c, std::size_t probe_depth, bool allow_sampled) {
  if (auto rs = c->ratio_set(); rs && !rs->empty()) return *std::min_element(rs->begin(), rs->end());
  if (auto pb = c->proven_ratio_bound()) return pb;
  // A finite tree is fully enumerable.
  if (auto rem = c->remaining_depth(); rem && *rem > 0) return ulbd_bound(c, *rem).bound;
  if (allow_sampled) return ulbd_bound(c, probe_depth).bound;
  return std::nullopt;
}

template <Scalar T>
void verify_construction(const ConstructionPtr<T>& c, std::size_t depth) {
  std::vector<std::pair<ConstructionPtr<T>, BinaryWord>> nodes{{c, BinaryWord{}}};
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<std::pair<ConstructionPtr<T>, BinaryWord>> next;
    for (auto& [node, word] : nodes) {
      auto left = node->child(0);
      auto right = node->child(1);
      Interval<T> p = node->root();
      check_split(p, left->root(), right->root(), word.to_string());
      T rsum = (left->root().diameter() + right->root().diameter()) / p.diameter();
      if (!(rsum < T(1))) throw InvariantViolation("ratio sum >= 1 at word '" + word.to_string() + "'");
      next.emplace_back(std::move(left), word.child(0));
      next.emplace_back(std::move(right), word.child(1));
    }
    nodes = std::move(next);
  }
}

#define CANTOR_INSTANTIATE_DISSECTION(T)                                                                  \
  template ConstructionPtr<T> make_rule<T>(Interval<T>, T, T);                                            \
  template ConstructionPtr<T> middle_third<T>(T, T);                                                      \
  template ConstructionPtr<T> make_explicit<T>(std::vector<std::vector<Interval<T>>>, std::size_t);      \
  template ConstructionPtr<T> materialize<T>(const ConstructionPtr<T>&, std::size_t);                    \
  template ConstructionPtr<T> affine_image<T>(const ConstructionPtr<T>&, const T&, const T&);            \
  template ConstructionPtr<T> subtree<T>(const ConstructionPtr<T>&, const BinaryWord&);                  \
  template std::vector<ConstructionPtr<T>> level_nodes<T>(const ConstructionPtr<T>&, std::size_t);       \
  template IntervalUnion<T> cover<T>(const ConstructionPtr<T>&, std::size_t);                            \
  template T dissection_ratio<T>(const ConstructionPtr<T>&, const BinaryWord&);                          \
  template OpenInterval<T> gap<T>(const ConstructionPtr<T>&, const BinaryWord&);                         \
  template GapSummary<T> max_gap<T>(const ConstructionPtr<T>&, std::size_t);                             \
  template UlbdCertificate<T> ulbd_bound<T>(const ConstructionPtr<T>&, std::size_t);                     \
  template std::optional<T> usable_ratio_bound<T>(const ConstructionPtr<T>&, std::size_t, bool);         \
  template void verify_construction<T>(const ConstructionPtr<T>&, std::size_t);

CANTOR_INSTANTIATE_DISSECTION(Rational)
CANTOR_INSTANTIATE_DISSECTION(double)

}  // namespace cantor
