#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "exh/rational.hpp"

namespace exh {

/// Node of the full binary tree of finite 0/1 strings. `bits` packs the path
/// with the root edge in the most significant position, so the value of the
/// string read as a binary number is exactly `bits`.
struct TreeNode {
    std::uint32_t level = 0;  // |s|
    std::uint64_t bits = 0;   // value of the string, 0 for the root

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// Length-then-lexicographic enumeration of the tree: index 0 is the root,
/// indices [2^l - 1, 2^{l+1} - 1) are level l in increasing bit value.
inline std::uint64_t node_index(const TreeNode& s) {
    return ((std::uint64_t{1} << s.level) - 1) + s.bits;
}

inline TreeNode node_at(std::uint64_t index) {
    std::uint32_t level = static_cast<std::uint32_t>(std::bit_width(index + 1) - 1);
    return TreeNode{level, index - ((std::uint64_t{1} << level) - 1)};
}

inline bool node_less(const TreeNode& a, const TreeNode& b) {
    return a.level != b.level ? a.level < b.level : a.bits < b.bits;
}

/// s is an initial segment of t (not necessarily proper).
inline bool is_prefix(const TreeNode& s, const TreeNode& t) {
    if (s.level > t.level) return false;
    return (t.bits >> (t.level - s.level)) == s.bits;
}

inline TreeNode parent(const TreeNode& s) {
    if (s.level == 0) throw std::invalid_argument("parent: root has no parent");
    return TreeNode{s.level - 1, s.bits >> 1};
}

inline TreeNode child(const TreeNode& s, unsigned bit) {
    return TreeNode{s.level + 1, (s.bits << 1) | (bit & 1)};
}

inline TreeNode node_from_string(std::string_view s) {
    TreeNode t;
    for (char c : s) {
        if (c != '0' && c != '1') throw std::invalid_argument("tree node: bits must be 0/1");
        t = child(t, static_cast<unsigned>(c - '0'));
    }
    return t;
}

inline std::string node_to_string(const TreeNode& s) {
    std::string out;
    for (std::uint32_t i = 0; i < s.level; ++i)
        out.push_back(((s.bits >> (s.level - 1 - i)) & 1) ? '1' : '0');
    return out;
}

/// The antichain of the prefix-minimal elements of A: every s in A with no
/// proper initial segment in A. Realizes the antichain supremum of the
/// trace-null weight.
inline std::vector<TreeNode> minimal_antichain(const std::vector<TreeNode>& a) {
    // Membership by node index; a bitmap is used when indices are dense and
    // small, which covers the multi-million-node witness unions.
    std::uint64_t max_index = 0;
    for (const auto& s : a) max_index = std::max(max_index, node_index(s));

    std::vector<TreeNode> out;
    if (max_index < (std::uint64_t{1} << 27)) {
        std::vector<std::uint64_t> present((max_index >> 6) + 1, 0);
        for (const auto& s : a) {
            std::uint64_t i = node_index(s);
            present[i >> 6] |= std::uint64_t{1} << (i & 63);
        }
        for (const auto& s : a) {
            bool minimal = true;
            TreeNode p = s;
            while (p.level > 0) {
                p = parent(p);
                std::uint64_t i = node_index(p);
                if (present[i >> 6] & (std::uint64_t{1} << (i & 63))) {
                    minimal = false;
                    break;
                }
            }
            if (minimal) out.push_back(s);
        }
    } else {
        std::vector<std::uint64_t> idx;
        idx.reserve(a.size());
        for (const auto& s : a) idx.push_back(node_index(s));
        std::sort(idx.begin(), idx.end());
        auto contains = [&](const TreeNode& t) {
            return std::binary_search(idx.begin(), idx.end(), node_index(t));
        };
        for (const auto& s : a) {
            bool minimal = true;
            TreeNode p = s;
            while (p.level > 0) {
                p = parent(p);
                if (contains(p)) {
                    minimal = false;
                    break;
                }
            }
            if (minimal) out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(), node_less);
    return out;
}

/// Bitset over the 2^depth leaves of the tree, identifying a clopen subset of
/// the infinite branch space. The measure of the set is popcount / 2^depth.
class LeafMask {
public:
    static constexpr std::uint32_t kDepthCap = 26;  // 2^26 bits = 8 MiB

    LeafMask(std::uint32_t depth) : depth_(depth) {
        if (depth > kDepthCap) throw std::invalid_argument("LeafMask: depth exceeds cap");
        words_.assign(depth >= 6 ? (std::size_t{1} << (depth - 6)) : 1, 0);
    }

    std::uint32_t depth() const { return depth_; }

    /// Marks every leaf extending s, i.e. the cylinder [s] at this depth.
    void add_cylinder(const TreeNode& s) {
        if (s.level > depth_) throw std::invalid_argument("LeafMask: node deeper than mask");
        std::uint64_t lo = s.bits << (depth_ - s.level);
        std::uint64_t hi = (s.bits + 1) << (depth_ - s.level);
        set_range(lo, hi);
    }

    void set_range(std::uint64_t lo, std::uint64_t hi) {
        if (lo >= hi) return;
        std::uint64_t first_word = lo >> 6, last_word = (hi - 1) >> 6;
        std::uint64_t lo_mask = ~std::uint64_t{0} << (lo & 63);
        std::uint64_t hi_mask = ~std::uint64_t{0} >> (63 - ((hi - 1) & 63));
        if (first_word == last_word) {
            words_[first_word] |= lo_mask & hi_mask;
            return;
        }
        words_[first_word] |= lo_mask;
        for (std::uint64_t w = first_word + 1; w < last_word; ++w) words_[w] = ~std::uint64_t{0};
        words_[last_word] |= hi_mask;
    }

    LeafMask& operator|=(const LeafMask& o) {
        require_same_depth(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    LeafMask& operator&=(const LeafMask& o) {
        require_same_depth(o);
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    std::uint64_t popcount() const {
        std::uint64_t n = 0;
        for (auto w : words_) n += static_cast<std::uint64_t>(std::popcount(w));
        return n;
    }

    /// popcount / 2^depth, exact.
    Rational measure() const {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, depth_);
        return Rational(Rational::from_uint64(popcount()).numerator(), den);
    }

private:
    void require_same_depth(const LeafMask& o) const {
        if (depth_ != o.depth_) throw std::invalid_argument("LeafMask: depth mismatch");
    }

    std::uint32_t depth_;
    std::vector<std::uint64_t> words_;
};

/// Leaf mask of the union of cylinders of a finite node set. The depth must
/// dominate every level in the set.
inline LeafMask leaf_mask(const std::vector<TreeNode>& a, std::uint32_t depth) {
    LeafMask mask(depth);
    for (const auto& s : a) mask.add_cylinder(s);
    return mask;
}

} // namespace exh
