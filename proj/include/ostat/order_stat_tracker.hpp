#ifndef OSTAT_ORDER_STAT_TRACKER_HPP
#define OSTAT_ORDER_STAT_TRACKER_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace ostat {

/// Growing multiset with select-by-rank.
///
/// A treap keyed on distinct values, each node carrying a multiplicity and
/// the total multiplicity of its subtree. insert() and select() run in
/// expected O(log d) for d distinct values. Nodes live in one contiguous
/// pool indexed by 32-bit handles. Tree shape depends only on the insertion
/// sequence (priorities come from a fixed-seed generator), so runs are
/// reproducible.
template <class T = double, class Compare = std::less<T>>
class BasicOrderStatTracker {
public:
    using value_type = T;
    using size_type = std::size_t;

    BasicOrderStatTracker() = default;
    explicit BasicOrderStatTracker(Compare cmp) : cmp_(std::move(cmp)) {}

    size_type size() const noexcept { return root_ == kNil ? 0 : nodes_[root_].total; }
    bool empty() const noexcept { return root_ == kNil; }
    size_type distinct() const noexcept { return nodes_.size(); }

    void reserve(size_type n) { nodes_.reserve(n); }

    void clear() noexcept {
        nodes_.clear();
        root_ = kNil;
        prio_state_ = kPrioSeed;
    }

    void insert(const T& x) {
        if constexpr (std::is_floating_point_v<T>) {
            if (std::isnan(x)) throw std::invalid_argument("OrderStatTracker::insert: NaN");
        }
        // Existing key: bump counts along the search path.
        for (Index t = root_; t != kNil;) {
            Node& nd = nodes_[t];
            if (cmp_(x, nd.key)) {
                t = nd.left;
            } else if (cmp_(nd.key, x)) {
                t = nd.right;
            } else {
                for (Index u = root_;; ) {
                    Node& v = nodes_[u];
                    ++v.total;
                    if (u == t) break;
                    u = cmp_(x, v.key) ? v.left : v.right;
                }
                ++nd.count;
                return;
            }
        }
        if (nodes_.size() >= kNil) throw std::length_error("OrderStatTracker: too many distinct values");
        const Index fresh = static_cast<Index>(nodes_.size());
        nodes_.push_back(Node{x, 1, 1, next_priority(), kNil, kNil});
        root_ = insert_node(root_, fresh);
    }

    /// k-th smallest value, 1-based, counting multiplicity.
    const T& select(size_type k) const {
        if (k < 1 || k > size()) {
            throw std::out_of_range("OrderStatTracker::select: rank " + std::to_string(k) + " outside [1, " +
                                    std::to_string(size()) + "]");
        }
        Index t = root_;
        for (;;) {
            const Node& nd = nodes_[t];
            const size_type left_total = nd.left == kNil ? 0 : nodes_[nd.left].total;
            if (k <= left_total) {
                t = nd.left;
            } else if (k <= left_total + nd.count) {
                return nd.key;
            } else {
                k -= left_total + nd.count;
                t = nd.right;
            }
        }
    }

    const T& min() const { return select(1); }
    const T& max() const { return select(size()); }

    /// Contents in ascending order with multiplicity.
    std::vector<T> sorted() const {
        std::vector<T> out;
        out.reserve(size());
        std::vector<Index> stack;
        Index t = root_;
        while (t != kNil || !stack.empty()) {
            while (t != kNil) {
                stack.push_back(t);
                t = nodes_[t].left;
            }
            t = stack.back();
            stack.pop_back();
            out.insert(out.end(), nodes_[t].count, nodes_[t].key);
            t = nodes_[t].right;
        }
        return out;
    }

private:
    using Index = std::uint32_t;
    static constexpr Index kNil = UINT32_MAX;
    static constexpr std::uint64_t kPrioSeed = 0x2545f4914f6cdd1dULL;

    struct Node {
        T key;
        size_type count;
        size_type total;
        std::uint32_t prio;
        Index left;
        Index right;
    };

    std::uint32_t next_priority() noexcept {
        // xorshift64*
        prio_state_ ^= prio_state_ >> 12;
        prio_state_ ^= prio_state_ << 25;
        prio_state_ ^= prio_state_ >> 27;
        return static_cast<std::uint32_t>((prio_state_ * 0x2545f4914f6cdd1dULL) >> 32);
    }

    size_type total_of(Index t) const noexcept { return t == kNil ? 0 : nodes_[t].total; }

    void pull(Index t) noexcept {
        Node& nd = nodes_[t];
        nd.total = nd.count + total_of(nd.left) + total_of(nd.right);
    }

    // Split t into keys < key and keys > key; key itself is absent.
    void split(Index t, const T& key, Index& lo, Index& hi) {
        if (t == kNil) {
            lo = hi = kNil;
            return;
        }
        if (cmp_(nodes_[t].key, key)) {
            split(nodes_[t].right, key, nodes_[t].right, hi);
            lo = t;
        } else {
            split(nodes_[t].left, key, lo, nodes_[t].left);
            hi = t;
        }
        pull(t);
    }

    Index insert_node(Index t, Index fresh) {
        if (t == kNil) return fresh;
        Node& nd = nodes_[t];
        if (nodes_[fresh].prio > nd.prio) {
            split(t, nodes_[fresh].key, nodes_[fresh].left, nodes_[fresh].right);
            pull(fresh);
            return fresh;
        }
        if (cmp_(nodes_[fresh].key, nd.key)) {
            const Index child = insert_node(nd.left, fresh);
            nodes_[t].left = child;
        } else {
            const Index child = insert_node(nd.right, fresh);
            nodes_[t].right = child;
        }
        ++nodes_[t].total;
        return t;
    }

    std::vector<Node> nodes_;
    Index root_ = kNil;
    std::uint64_t prio_state_ = kPrioSeed;
    [[no_unique_address]] Compare cmp_{};
};

using OrderStatTracker = BasicOrderStatTracker<double>;

}  // namespace ostat

#endif  // OSTAT_ORDER_STAT_TRACKER_HPP
