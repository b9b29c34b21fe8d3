#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "exh/errors.hpp"
#include "exh/tree.hpp"

namespace exh {

inline constexpr std::uint64_t kDefaultEnumBudget = std::uint64_t{1} << 22;

/// Interval partitions of (an end segment of) the naturals used by block
/// rules. Dyadic blocks cover [1, inf); the others cover all of omega.
enum class Partition {
    Dyadic,    // block n = [2^n, 2^{n+1})
    Triangle,  // block n = [n(n+1)/2, (n+1)(n+2)/2)
    Pow2,      // block 0 = [0,1), block n = [2^n - 1, 2^{n+1} - 1)
};

inline std::uint64_t partition_block_start(Partition p, std::uint64_t n) {
    switch (p) {
        case Partition::Dyadic: return std::uint64_t{1} << n;
        case Partition::Triangle: return n * (n + 1) / 2;
        case Partition::Pow2: return n == 0 ? 0 : (std::uint64_t{1} << n) - 1;
    }
    return 0;
}

inline std::uint64_t partition_block_end(Partition p, std::uint64_t n) {
    return partition_block_start(p, n + 1);
}

/// Block index of a point, if any (0 has no dyadic block).
inline std::optional<std::uint64_t> partition_block_of(Partition p, std::uint64_t x) {
    switch (p) {
        case Partition::Dyadic: {
            if (x == 0) return std::nullopt;
            std::uint64_t n = 63 - static_cast<std::uint64_t>(__builtin_clzll(x));
            return n;
        }
        case Partition::Triangle: {
            // Largest n with n(n+1)/2 <= x: float guess, then adjust.
            std::uint64_t n = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(x) + 1.0) - 1.0) / 2.0);
            while (partition_block_start(p, n + 1) <= x) ++n;
            while (n > 0 && partition_block_start(p, n) > x) --n;
            return n;
        }
        case Partition::Pow2: {
            std::uint64_t n = 0;
            while (partition_block_end(p, n) <= x) ++n;
            return n;
        }
    }
    return std::nullopt;
}

struct CountRule {
    enum class Kind { Full, Constant, Isqrt, Linear } kind = Kind::Full;
    std::uint64_t constant = 0;

    std::uint64_t count(std::uint64_t block, std::uint64_t block_size) const {
        switch (kind) {
            case Kind::Full: return block_size;
            case Kind::Constant: return std::min(constant, block_size);
            case Kind::Isqrt: {
                std::uint64_t r = 0;
                while ((r + 1) * (r + 1) <= block) ++r;
                return std::min(r, block_size);
            }
            case Kind::Linear: return std::min(block, block_size);
        }
        return 0;
    }
};

/// Rule-generated finite subsets of the binary tree, addressed by node index
/// under the length-lex enumeration.
struct TreeSetRule {
    enum class Kind {
        FullLevels,     // all nodes with level in [lo, hi]
        SubtreeLevels,  // nodes extending `prefix` with level in [lo, hi]
        WindowZero,     // {s in 2^{(n+1)m} : s restricted to [nm, nm+m) == 0}
        Spine,          // all-zero nodes with level in [lo, hi]
        ExplicitNodes,  // explicit node-index list
    } kind = Kind::FullLevels;
    std::uint32_t lo = 0, hi = 0;
    TreeNode prefix;
    std::uint32_t m = 1, n = 0;
    std::vector<std::uint64_t> nodes;  // sorted indices for ExplicitNodes
};

/// A finite or rule-generated subset of omega (or of the tree, via node
/// indices). The rule catalog is closed; enumeration below any horizon is
/// strictly increasing and membership is decidable.
class SetSpec {
public:
    struct Explicit {
        std::vector<std::uint64_t> elems;  // sorted, duplicate-free
    };
    struct Intervals {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks;  // disjoint [a,b), ascending
    };
    struct Arithmetic {
        std::uint64_t first = 0, step = 1;
    };
    struct Geometric {
        std::uint64_t base = 2;
        std::int64_t offset = 0;
        std::uint32_t first_exp = 0;
    };
    struct BlockSelect {
        Partition partition = Partition::Dyadic;
        CountRule count;
    };
    struct Tree {
        TreeSetRule rule;
    };

    struct Enumeration {
        std::vector<std::uint64_t> elems;
        bool complete = true;  // false when the step budget truncated the listing
    };

    static SetSpec explicit_set(std::vector<std::uint64_t> elems) {
        for (std::size_t i = 1; i < elems.size(); ++i)
            if (elems[i] <= elems[i - 1])
                throw std::invalid_argument("SetSpec: explicit list must be sorted and duplicate-free");
        return SetSpec(Explicit{std::move(elems)});
    }

    static SetSpec intervals(std::vector<std::pair<std::uint64_t, std::uint64_t>> blocks) {
        std::uint64_t prev_end = 0;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (blocks[i].first >= blocks[i].second)
                throw std::invalid_argument("SetSpec: empty interval");
            if (i > 0 && blocks[i].first < prev_end)
                throw std::invalid_argument("SetSpec: intervals must be disjoint and ascending");
            prev_end = blocks[i].second;
        }
        return SetSpec(Intervals{std::move(blocks)});
    }

    static SetSpec arithmetic(std::uint64_t first, std::uint64_t step) {
        if (step == 0) throw std::invalid_argument("SetSpec: arithmetic step must be positive");
        return SetSpec(Arithmetic{first, step});
    }

    static SetSpec geometric(std::uint64_t base, std::int64_t offset = 0, std::uint32_t first_exp = 0) {
        if (base < 2) throw std::invalid_argument("SetSpec: geometric base must be >= 2");
        if (offset < -1) throw std::invalid_argument("SetSpec: geometric offset must be >= -1");
        return SetSpec(Geometric{base, offset, first_exp});
    }

    static SetSpec block_select(Partition p, CountRule c) { return SetSpec(BlockSelect{p, c}); }

    static SetSpec tree(TreeSetRule rule) {
        if (rule.kind == TreeSetRule::Kind::ExplicitNodes)
            for (std::size_t i = 1; i < rule.nodes.size(); ++i)
                if (rule.nodes[i] <= rule.nodes[i - 1])
                    throw std::invalid_argument("SetSpec: node list must be sorted and duplicate-free");
        return SetSpec(Tree{std::move(rule)});
    }

    static SetSpec tree_nodes(const std::vector<TreeNode>& nodes) {
        std::vector<std::uint64_t> idx;
        idx.reserve(nodes.size());
        for (const auto& s : nodes) idx.push_back(node_index(s));
        std::sort(idx.begin(), idx.end());
        TreeSetRule r;
        r.kind = TreeSetRule::Kind::ExplicitNodes;
        r.nodes = std::move(idx);
        return tree(std::move(r));
    }

    static SetSpec empty() { return explicit_set({}); }

    bool is_finite() const {
        return std::holds_alternative<Explicit>(v_) || std::holds_alternative<Intervals>(v_) ||
               std::holds_alternative<Tree>(v_);
    }

    /// One past the largest element, for finite specs.
    std::uint64_t finite_bound() const {
        if (auto* e = std::get_if<Explicit>(&v_))
            return e->elems.empty() ? 0 : e->elems.back() + 1;
        if (auto* iv = std::get_if<Intervals>(&v_))
            return iv->blocks.empty() ? 0 : iv->blocks.back().second;
        if (auto* t = std::get_if<Tree>(&v_)) {
            const TreeSetRule& r = t->rule;
            switch (r.kind) {
                case TreeSetRule::Kind::FullLevels:
                case TreeSetRule::Kind::SubtreeLevels:
                case TreeSetRule::Kind::Spine:
                    return (std::uint64_t{1} << (r.hi + 1)) - 1;
                case TreeSetRule::Kind::WindowZero: {
                    std::uint32_t level = (r.n + 1) * r.m;
                    return (std::uint64_t{1} << (level + 1)) - 1;
                }
                case TreeSetRule::Kind::ExplicitNodes:
                    return r.nodes.empty() ? 0 : r.nodes.back() + 1;
            }
        }
        throw std::invalid_argument("SetSpec: not a finite rule");
    }

    Enumeration enumerate_below(std::uint64_t horizon, std::uint64_t budget = kDefaultEnumBudget) const;

    bool contains(std::uint64_t x) const;

    template <class T>
    const T* get_if() const {
        return std::get_if<T>(&v_);
    }

    std::string kind_name() const {
        if (std::holds_alternative<Explicit>(v_)) return "explicit";
        if (std::holds_alternative<Intervals>(v_)) return "intervals";
        if (std::holds_alternative<Arithmetic>(v_)) return "arithmetic";
        if (std::holds_alternative<Geometric>(v_)) return "geometric";
        if (std::holds_alternative<BlockSelect>(v_)) return "block-select";
        return "tree";
    }

private:
    using Variant = std::variant<Explicit, Intervals, Arithmetic, Geometric, BlockSelect, Tree>;
    explicit SetSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

namespace detail {

inline bool push_elem(std::vector<std::uint64_t>& out, std::uint64_t x, std::uint64_t budget) {
    if (out.size() >= budget) return false;
    out.push_back(x);
    return true;
}

} // namespace detail

inline SetSpec::Enumeration SetSpec::enumerate_below(std::uint64_t horizon, std::uint64_t budget) const {
    Enumeration en;
    auto& out = en.elems;

    if (auto* e = std::get_if<Explicit>(&v_)) {
        for (auto x : e->elems) {
            if (x >= horizon) break;
            if (!detail::push_elem(out, x, budget)) {
                en.complete = false;
                return en;
            }
        }
        return en;
    }
    if (auto* iv = std::get_if<Intervals>(&v_)) {
        for (const auto& [a, b] : iv->blocks) {
            for (std::uint64_t x = a; x < b && x < horizon; ++x)
                if (!detail::push_elem(out, x, budget)) {
                    en.complete = false;
                    return en;
                }
            if (a >= horizon) break;
        }
        return en;
    }
    if (auto* ar = std::get_if<Arithmetic>(&v_)) {
        for (std::uint64_t x = ar->first; x < horizon; x += ar->step)
            if (!detail::push_elem(out, x, budget)) {
                en.complete = false;
                return en;
            }
        return en;
    }
    if (auto* g = std::get_if<Geometric>(&v_)) {
        // offset + base^k, k >= first_exp; the power outruns any horizon fast.
        __int128 p = 1;
        for (std::uint32_t k = 0; k < g->first_exp; ++k) p *= g->base;
        while (true) {
            __int128 val = p + g->offset;
            if (val >= static_cast<__int128>(horizon)) break;
            if (val >= 0 && !detail::push_elem(out, static_cast<std::uint64_t>(val), budget)) {
                en.complete = false;
                return en;
            }
            p *= g->base;
        }
        return en;
    }
    if (auto* bs = std::get_if<BlockSelect>(&v_)) {
        for (std::uint64_t n = 0;; ++n) {
            std::uint64_t start = partition_block_start(bs->partition, n);
            if (start >= horizon) break;
            std::uint64_t end = partition_block_end(bs->partition, n);
            std::uint64_t take = bs->count.count(n, end - start);
            for (std::uint64_t x = start; x < start + take && x < horizon; ++x)
                if (!detail::push_elem(out, x, budget)) {
                    en.complete = false;
                    return en;
                }
        }
        return en;
    }

    const TreeSetRule& r = std::get<Tree>(v_).rule;
    switch (r.kind) {
        case TreeSetRule::Kind::FullLevels: {
            for (std::uint32_t l = r.lo; l <= r.hi; ++l) {
                std::uint64_t base = (std::uint64_t{1} << l) - 1;
                for (std::uint64_t b = 0; b < (std::uint64_t{1} << l); ++b) {
                    std::uint64_t idx = base + b;
                    if (idx >= horizon) return en;
                    if (!detail::push_elem(out, idx, budget)) {
                        en.complete = false;
                        return en;
                    }
                }
            }
            return en;
        }
        case TreeSetRule::Kind::SubtreeLevels: {
            std::uint32_t p = r.prefix.level;
            for (std::uint32_t l = std::max(r.lo, p); l <= r.hi; ++l) {
                std::uint64_t base = (std::uint64_t{1} << l) - 1;
                std::uint64_t lo_bits = r.prefix.bits << (l - p);
                std::uint64_t hi_bits = (r.prefix.bits + 1) << (l - p);
                for (std::uint64_t b = lo_bits; b < hi_bits; ++b) {
                    std::uint64_t idx = base + b;
                    if (idx >= horizon) return en;
                    if (!detail::push_elem(out, idx, budget)) {
                        en.complete = false;
                        return en;
                    }
                }
            }
            return en;
        }
        case TreeSetRule::Kind::WindowZero: {
            std::uint32_t level = (r.n + 1) * r.m;
            if (level >= 63) throw std::invalid_argument("SetSpec: window-zero level too deep");
            std::uint64_t base = (std::uint64_t{1} << level) - 1;
            std::uint64_t free = std::uint64_t{1} << (static_cast<std::uint64_t>(r.n) * r.m);
            for (std::uint64_t v = 0; v < free; ++v) {
                std::uint64_t idx = base + (v << r.m);
                if (idx >= horizon) return en;
                if (!detail::push_elem(out, idx, budget)) {
                    en.complete = false;
                    return en;
                }
            }
            return en;
        }
        case TreeSetRule::Kind::Spine: {
            for (std::uint32_t l = r.lo; l <= r.hi; ++l) {
                std::uint64_t idx = (std::uint64_t{1} << l) - 1;
                if (idx >= horizon) return en;
                if (!detail::push_elem(out, idx, budget)) {
                    en.complete = false;
                    return en;
                }
            }
            return en;
        }
        case TreeSetRule::Kind::ExplicitNodes: {
            for (auto idx : r.nodes) {
                if (idx >= horizon) break;
                if (!detail::push_elem(out, idx, budget)) {
                    en.complete = false;
                    return en;
                }
            }
            return en;
        }
    }
    return en;
}

inline bool SetSpec::contains(std::uint64_t x) const {
    if (auto* e = std::get_if<Explicit>(&v_))
        return std::binary_search(e->elems.begin(), e->elems.end(), x);
    if (auto* iv = std::get_if<Intervals>(&v_)) {
        for (const auto& [a, b] : iv->blocks)
            if (x >= a && x < b) return true;
        return false;
    }
    if (auto* ar = std::get_if<Arithmetic>(&v_))
        return x >= ar->first && (x - ar->first) % ar->step == 0;
    if (auto* g = std::get_if<Geometric>(&v_)) {
        __int128 rem = static_cast<__int128>(x) - g->offset;
        if (rem < 1) return false;
        unsigned __int128 p = 1;
        std::uint32_t k = 0;
        while (p < static_cast<unsigned __int128>(rem)) {
            p *= g->base;
            ++k;
        }
        return p == static_cast<unsigned __int128>(rem) && k >= g->first_exp;
    }
    if (auto* bs = std::get_if<BlockSelect>(&v_)) {
        auto n = partition_block_of(bs->partition, x);
        if (!n) return false;
        std::uint64_t start = partition_block_start(bs->partition, *n);
        std::uint64_t size = partition_block_end(bs->partition, *n) - start;
        return x - start < bs->count.count(*n, size);
    }
    const TreeSetRule& r = std::get<Tree>(v_).rule;
    TreeNode s = node_at(x);
    switch (r.kind) {
        case TreeSetRule::Kind::FullLevels:
            return s.level >= r.lo && s.level <= r.hi;
        case TreeSetRule::Kind::SubtreeLevels:
            return s.level >= r.lo && s.level <= r.hi && is_prefix(r.prefix, s);
        case TreeSetRule::Kind::WindowZero:
            return s.level == (r.n + 1) * r.m && (s.bits & ((std::uint64_t{1} << r.m) - 1)) == 0;
        case TreeSetRule::Kind::Spine:
            return s.bits == 0 && s.level >= r.lo && s.level <= r.hi;
        case TreeSetRule::Kind::ExplicitNodes:
            return std::binary_search(r.nodes.begin(), r.nodes.end(), x);
    }
    return false;
}

/// Elements of A in [lo, hi), fully enumerated or throwing on budget.
inline std::vector<std::uint64_t> slice(const SetSpec& a, std::uint64_t lo, std::uint64_t hi,
                                        std::uint64_t budget = kDefaultEnumBudget) {
    auto en = a.enumerate_below(hi, budget);
    if (!en.complete) throw BudgetExceeded("SetSpec: enumeration budget exceeded");
    auto it = std::lower_bound(en.elems.begin(), en.elems.end(), lo);
    return std::vector<std::uint64_t>(it, en.elems.end());
}

} // namespace exh
