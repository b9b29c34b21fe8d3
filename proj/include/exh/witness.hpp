#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "exh/errors.hpp"
#include "exh/mass.hpp"
#include "exh/rational.hpp"
#include "exh/setspec.hpp"
#include "exh/submeasure.hpp"
#include "exh/tails.hpp"
#include "exh/tree.hpp"
#include "exh/zoo.hpp"

namespace exh {

// ---------------------------------------------------------------------------
// Tree mass rules

/// Nonnegative mass on tree nodes, closed catalog (mirrors MassRule on omega).
class TreeMassRule {
public:
    enum class Kind {
        LevelPow2Inv,   // 2^{-|s|}
        LevelInvSquare, // |s|^{-2} for |s| >= 1, 0 at the root
        LevelConst,     // c everywhere
        SpineConst,     // c on all-zero nodes, 0 elsewhere
        Explicit,       // table by node index
        Zero,
    };

    TreeMassRule(Kind kind, Rational c = Rational(1)) : kind_(kind), c_(std::move(c)) {}

    static TreeMassRule explicit_table(std::map<std::uint64_t, Rational> table) {
        TreeMassRule r(Kind::Explicit);
        for (const auto& [idx, w] : table)
            if (w < Rational(0)) throw std::invalid_argument("TreeMassRule: negative mass");
        r.table_ = std::move(table);
        return r;
    }

    Kind kind() const { return kind_; }

    bool level_constant() const {
        return kind_ == Kind::LevelPow2Inv || kind_ == Kind::LevelInvSquare ||
               kind_ == Kind::LevelConst || kind_ == Kind::Zero;
    }

    Rational level_value(std::uint32_t level) const {
        switch (kind_) {
            case Kind::LevelPow2Inv: return pow2_inv(level);
            case Kind::LevelInvSquare:
                return level == 0 ? Rational(0)
                                  : Rational(1, static_cast<long>(level) * static_cast<long>(level));
            case Kind::LevelConst: return c_;
            case Kind::Zero: return Rational(0);
            default: throw std::invalid_argument("TreeMassRule: not level-constant");
        }
    }

    Rational at(const TreeNode& s) const {
        switch (kind_) {
            case Kind::LevelPow2Inv:
            case Kind::LevelInvSquare:
            case Kind::LevelConst:
            case Kind::Zero:
                return level_value(s.level);
            case Kind::SpineConst: return s.bits == 0 ? c_ : Rational(0);
            case Kind::Explicit: {
                auto it = table_.find(node_index(s));
                return it == table_.end() ? Rational(0) : it->second;
            }
        }
        return Rational(0);
    }

    std::string name() const {
        switch (kind_) {
            case Kind::LevelPow2Inv: return "level-pow2-inv";
            case Kind::LevelInvSquare: return "level-inv-square";
            case Kind::LevelConst: return "level-const";
            case Kind::SpineConst: return "spine-const";
            case Kind::Explicit: return "explicit";
            case Kind::Zero: return "zero";
        }
        return "zero";
    }

private:
    Kind kind_;
    Rational c_;
    std::map<std::uint64_t, Rational> table_;
};

// ---------------------------------------------------------------------------
// Witness families

/// Pairwise disjoint finite sets (A_n) with the parameters (epsilon, delta, k)
/// of the accumulation check. The window-zero family is kept as a rule: its
/// per-set value, pairwise independence, and union measures have closed forms,
/// so the check scales past what leaf masks can materialize.
class WitnessFamily {
public:
    struct ExplicitSets {
        std::vector<std::vector<std::uint64_t>> sets;  // each sorted
    };
    struct TraceFamily {
        std::uint32_t m = 1;
    };

    static WitnessFamily explicit_sets(std::vector<std::vector<std::uint64_t>> sets,
                                       Rational epsilon, Rational delta, std::uint64_t k) {
        // Disjointness is part of the construction contract.
        std::vector<std::uint64_t> all;
        for (const auto& s : sets) {
            for (std::size_t i = 1; i < s.size(); ++i)
                if (s[i] <= s[i - 1])
                    throw std::invalid_argument("WitnessFamily: sets must be sorted");
            all.insert(all.end(), s.begin(), s.end());
        }
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            throw std::invalid_argument("WitnessFamily: sets must be pairwise disjoint");
        WitnessFamily f;
        f.kind_ = ExplicitSets{std::move(sets)};
        f.epsilon_ = std::move(epsilon);
        f.delta_ = std::move(delta);
        f.k_ = k;
        return f;
    }

    static WitnessFamily trace_family(std::uint32_t m, std::uint64_t size, Rational epsilon,
                                      Rational delta, std::uint64_t k) {
        if (m == 0) throw std::invalid_argument("WitnessFamily: m must be positive");
        WitnessFamily f;
        f.kind_ = TraceFamily{m};
        f.size_ = size;
        f.epsilon_ = std::move(epsilon);
        f.delta_ = std::move(delta);
        f.k_ = k;
        return f;
    }

    std::uint64_t size() const {
        if (auto* e = std::get_if<ExplicitSets>(&kind_)) return e->sets.size();
        return size_;
    }

    const Rational& epsilon() const { return epsilon_; }
    const Rational& delta() const { return delta_; }
    std::uint64_t k() const { return k_; }

    bool is_trace_family() const { return std::holds_alternative<TraceFamily>(kind_); }
    std::uint32_t trace_m() const { return std::get<TraceFamily>(kind_).m; }

    const std::vector<std::vector<std::uint64_t>>& sets() const {
        return std::get<ExplicitSets>(kind_).sets;
    }

    /// The n-th set as a SetSpec (window-zero rule for the trace family).
    SetSpec set_spec(std::uint64_t n) const {
        if (auto* e = std::get_if<ExplicitSets>(&kind_))
            return SetSpec::explicit_set(e->sets.at(n));
        TreeSetRule r;
        r.kind = TreeSetRule::Kind::WindowZero;
        r.m = trace_m();
        r.n = static_cast<std::uint32_t>(n);
        return SetSpec::tree(r);
    }

    /// Exact union measure of any |Y| = j sets of the trace family:
    /// 1 - (1 - 2^-m)^j by independence of the cylinder sets.
    Rational trace_union_measure(std::uint64_t j) const {
        Rational q = Rational(1) - pow2_inv(trace_m());
        return Rational(1) - pow(q, static_cast<unsigned long>(j));
    }

private:
    std::variant<ExplicitSets, TraceFamily> kind_;
    std::uint64_t size_ = 0;
    Rational epsilon_{1, 2};
    Rational delta_{1, 2};
    std::uint64_t k_ = 1;
};

/// The window-zero witness family for the trace-null submeasure: per-set
/// value 2^-m (below delta by the choice m = ceil(log2(1/delta)) + 1 when
/// auto-derived), with k = 2^m and epsilon = 1/2.
inline WitnessFamily trace_null_witness_family(std::uint32_t m, std::uint64_t size = 0) {
    std::uint64_t k = std::uint64_t{1} << m;
    if (size == 0) size = k + 8;
    return WitnessFamily::trace_family(m, size, Rational(1, 2), pow2_inv(m) * Rational(2), k);
}

inline WitnessFamily trace_null_witness_family_for_delta(const Rational& delta,
                                                         std::uint64_t size = 0) {
    if (!(delta > Rational(0)))
        throw std::invalid_argument("witness family: delta must be positive");
    std::uint32_t m = 1;
    while (!(pow2_inv(m) < delta)) ++m;  // smallest m with 2^-m < delta, then one more
    ++m;
    std::uint64_t k = std::uint64_t{1} << m;
    if (size == 0) size = k + 8;
    return WitnessFamily::trace_family(m, size, Rational(1, 2), delta, k);
}

// ---------------------------------------------------------------------------
// summable-like / density-like checks

namespace detail {

inline std::optional<std::uint64_t> binomial_at_most(std::uint64_t n, std::uint64_t k,
                                                     std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > cap) return std::nullopt;
    }
    return static_cast<std::uint64_t>(c);
}

} // namespace detail

struct SummableLikeReport {
    bool pass = false;
    std::string route;             // "closed-form" or "enumeration"
    std::string failure;           // empty when passing
    std::vector<Rational> per_set_values;
    std::optional<std::uint64_t> violating_n;
    std::vector<std::uint64_t> violating_y;
    Rational min_union_value;
    std::vector<std::uint64_t> min_union_y;
    std::uint64_t combinations_checked = 0;
};

/// Verifies the accumulation property of a witness family against phi:
/// every phi(A_n) < delta, the sets are disjoint, and every union of k of
/// them has phi at least epsilon. The window-zero family against the
/// trace-null submeasure runs on the closed forms (the union value depends
/// only on |Y|); explicit families enumerate the k-subsets within budget.
inline SummableLikeReport summable_like_check(const Submeasure& phi, const WitnessFamily& family,
                                              std::uint64_t budget = 1000000) {
    SummableLikeReport rep;
    const std::uint64_t t = family.size();
    const std::uint64_t k = family.k();
    if (k == 0 || t < k) {
        rep.failure = "family smaller than k";
        return rep;
    }

    if (family.is_trace_family() && phi.provenance().detail == "trace-null") {
        rep.route = "closed-form";
        // Per-set value: each A_n is an antichain of 2^{nm} nodes of level
        // (n+1)m, so phi(A_n) = 2^{-m}; cross-checked on A_0 through the
        // evaluator.
        Rational per_set = pow2_inv(family.trace_m());
        if (phi.eval_set(family.set_spec(0)) != per_set) {
            rep.failure = "evaluator disagrees with the closed per-set value";
            return rep;
        }
        rep.per_set_values.assign(t, per_set);
        if (!(per_set < family.delta())) {
            rep.failure = "per-set value not below delta";
            rep.violating_n = 0;
            return rep;
        }
        rep.min_union_value = family.trace_union_measure(k);
        rep.combinations_checked = 1;  // the value depends on |Y| only
        if (rep.min_union_value < family.epsilon()) {
            rep.failure = "union of k sets below epsilon";
            return rep;
        }
        rep.pass = true;
        return rep;
    }

    rep.route = "enumeration";
    const auto& sets = family.sets();
    for (std::uint64_t n = 0; n < t; ++n) {
        rep.per_set_values.push_back(phi.eval_sorted(sets[n]));
        if (!(rep.per_set_values.back() < family.delta())) {
            rep.failure = "per-set value not below delta";
            rep.violating_n = n;
            return rep;
        }
    }

    auto combos = detail::binomial_at_most(t, k, budget);
    if (!combos)
        throw BudgetExceeded("summable_like_check: C(" + std::to_string(t) + "," +
                             std::to_string(k) + ") exceeds the budget of " +
                             std::to_string(budget));

    std::vector<std::uint64_t> y(k);
    for (std::uint64_t i = 0; i < k; ++i) y[i] = i;
    bool first = true;
    while (true) {
        std::vector<std::uint64_t> u;
        for (auto n : y) u.insert(u.end(), sets[n].begin(), sets[n].end());
        std::sort(u.begin(), u.end());
        Rational val = phi.eval_sorted(u);
        ++rep.combinations_checked;
        if (first || val < rep.min_union_value) {
            rep.min_union_value = val;
            rep.min_union_y = y;
            first = false;
        }
        if (val < family.epsilon()) {
            rep.failure = "union of k sets below epsilon";
            rep.violating_y = y;
            return rep;
        }
        // next combination
        std::uint64_t i = k;
        while (i > 0 && y[i - 1] == t - k + i - 1) --i;
        if (i == 0) break;
        ++y[i - 1];
        for (std::uint64_t j = i; j < k; ++j) y[j] = y[j - 1] + 1;
    }
    rep.pass = true;
    return rep;
}

struct DensityLikeReport {
    std::vector<std::uint64_t> best_x;  // indices into the family
    Rational best_value;                // phi of the union over best_x
    bool exhaustive = false;
    std::string note =
        "heuristic: finite search cannot certify the for-all-epsilon alternation";
};

/// Searches for a large index set X with phi(union over X) below epsilon.
/// Exhaustive when 2^T fits the budget, greedy otherwise; the result is
/// explicitly a best-found certificate, never a density-likeness claim.
inline DensityLikeReport density_like_search(const Submeasure& phi, const Rational& epsilon,
                                             const WitnessFamily& family,
                                             std::uint64_t budget = 1 << 20) {
    DensityLikeReport rep;
    rep.best_value = Rational(0);
    const std::uint64_t t = family.size();

    if (family.is_trace_family() && phi.provenance().detail == "trace-null") {
        // Union measure increases with |X|; take prefixes while below epsilon.
        std::uint64_t j = 0;
        while (j < t && family.trace_union_measure(j + 1) < epsilon) ++j;
        for (std::uint64_t i = 0; i < j; ++i) rep.best_x.push_back(i);
        rep.best_value = family.trace_union_measure(j);
        rep.exhaustive = true;  // by exchangeability of the family
        return rep;
    }

    const auto& sets = family.sets();
    if (t < 63 && (std::uint64_t{1} << t) <= budget) {
        rep.exhaustive = true;
        std::uint64_t best_mask = 0;
        std::size_t best_count = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
            std::size_t c = static_cast<std::size_t>(std::popcount(mask));
            if (c <= best_count && mask != 0) continue;
            std::vector<std::uint64_t> u;
            for (std::uint64_t n = 0; n < t; ++n)
                if (mask & (std::uint64_t{1} << n))
                    u.insert(u.end(), sets[n].begin(), sets[n].end());
            std::sort(u.begin(), u.end());
            Rational val = phi.eval_sorted(u);
            if (val < epsilon && (mask == 0 || c > best_count)) {
                best_mask = mask;
                best_count = c;
                rep.best_value = val;
            }
        }
        for (std::uint64_t n = 0; n < t; ++n)
            if (best_mask & (std::uint64_t{1} << n)) rep.best_x.push_back(n);
        return rep;
    }

    // Greedy: try indices in order, keep those that leave the union small.
    std::vector<std::uint64_t> u;
    for (std::uint64_t n = 0; n < t; ++n) {
        std::vector<std::uint64_t> candidate = u;
        candidate.insert(candidate.end(), sets[n].begin(), sets[n].end());
        std::sort(candidate.begin(), candidate.end());
        Rational val = phi.eval_sorted(candidate);
        if (val < epsilon) {
            u = std::move(candidate);
            rep.best_x.push_back(n);
            rep.best_value = val;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Covering checks

struct CoveringSample {
    TailMatrix phi_tails;
    TailMatrix mass_tails;
    MembershipVerdict phi_verdict;
    MembershipVerdict mass_verdict;
    bool refutation = false;  // phi tail below epsilon while the mass diverges
};

struct CoveringReport {
    std::vector<CoveringSample> samples;
    bool any_refutation = false;
};

/// For each sample A, pairs the tail profile of phi with the tail profile of
/// the summable ideal of h. A sample refutes the inclusion when the phi-tails
/// vanish while the h-sum carries a divergence witness.
inline CoveringReport covering_sample_check(const Submeasure& phi, const MassRule& h,
                                            const std::vector<SetSpec>& samples,
                                            const Rational& epsilon, std::uint64_t horizon,
                                            VerdictOptions opts = {}) {
    CoveringReport rep;
    Submeasure mass = summable_submeasure(h);
    for (const auto& a : samples) {
        CoveringSample s{
            tail_matrix(phi, a, opts.cutoffs.empty() ? default_cutoff_ladder(horizon) : opts.cutoffs,
                        horizon, opts.budget),
            tail_matrix(mass, a,
                        opts.cutoffs.empty() ? default_cutoff_ladder(horizon) : opts.cutoffs,
                        horizon, opts.budget),
            exh_verdict(phi, a, epsilon, horizon, opts),
            exh_verdict(mass, a, epsilon, horizon, opts),
        };
        s.refutation = s.phi_verdict.status == MembershipVerdict::Status::TailBelow &&
                       s.mass_verdict.status == MembershipVerdict::Status::LowerBoundWitness;
        rep.any_refutation = rep.any_refutation || s.refutation;
        rep.samples.push_back(std::move(s));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Heavy branch

struct HeavyBranchResult {
    std::vector<bool> branch;                       // the greedy branch, root-first
    struct Family {
        std::uint32_t n = 0;                        // F_n extends the branch prefix of length n
        std::vector<TreeNode> nodes;
        Rational sum;
    };
    std::vector<Family> families;
    bool exhausted = false;                         // stopped before even one family
    std::uint32_t achieved = 0;
    // Exact trace-null value of the union of the families from N on, with the
    // geometric bound sum_{n >= N} 2^-n it stays under.
    std::vector<std::pair<Rational, Rational>> tail_profile;
};

namespace detail {

inline Rational subtree_mass(const TreeMassRule& h, const TreeNode& t, std::uint32_t depth) {
    switch (h.kind()) {
        case TreeMassRule::Kind::Zero: return Rational(0);
        case TreeMassRule::Kind::SpineConst: {
            if (t.bits != 0) return Rational(0);
            // Spine nodes at levels |t|..depth.
            return h.at(TreeNode{0, 0}) * Rational(static_cast<long>(depth - t.level + 1));
        }
        case TreeMassRule::Kind::Explicit: {
            Rational s(0);
            // Table scan; explicit tables are small by construction.
            for (std::uint32_t l = t.level; l <= depth; ++l) {
                std::uint64_t lo = ((std::uint64_t{1} << l) - 1) + (t.bits << (l - t.level));
                std::uint64_t hi = lo + (std::uint64_t{1} << (l - t.level));
                for (std::uint64_t idx = lo; idx < hi; ++idx) {
                    TreeNode s2 = node_at(idx);
                    Rational w = h.at(s2);
                    if (!w.is_zero()) s += w;
                }
            }
            return s;
        }
        default: {
            // Level-constant rules: level l contributes 2^{l - |t|} f(l).
            Rational s(0);
            for (std::uint32_t l = t.level; l <= depth; ++l)
                s += pow2(l - t.level) * h.level_value(l);
            return s;
        }
    }
}

} // namespace detail

/// Greedy branch of larger remaining subtree mass; along it, pairwise
/// disjoint families F_n below successive branch prefixes, each collecting
/// unused nodes of largest mass until the target is passed.
inline HeavyBranchResult heavy_branch_search(const TreeMassRule& h, std::uint32_t depth,
                                             const Rational& target) {
    if (depth == 0 || depth > 18)
        throw std::invalid_argument("heavy_branch_search: depth must be in [1, 18]");

    HeavyBranchResult out;

    // Greedy branch.
    TreeNode t{};
    for (std::uint32_t l = 0; l < depth; ++l) {
        Rational left = detail::subtree_mass(h, child(t, 0), depth);
        Rational right = detail::subtree_mass(h, child(t, 1), depth);
        bool go_right = right > left;
        out.branch.push_back(go_right);
        t = child(t, go_right ? 1 : 0);
    }

    // Families below successive branch prefixes.
    std::vector<bool> used(std::uint64_t{1} << (depth + 1), false);
    for (std::uint32_t n = 0; n < depth; ++n) {
        TreeNode prefix{};
        for (std::uint32_t i = 0; i < n; ++i) prefix = child(prefix, out.branch[i] ? 1 : 0);

        std::vector<std::pair<Rational, std::uint64_t>> candidates;  // (mass, index)
        for (std::uint32_t l = n; l <= depth; ++l) {
            std::uint64_t lo = ((std::uint64_t{1} << l) - 1) + (prefix.bits << (l - n));
            std::uint64_t count = std::uint64_t{1} << (l - n);
            for (std::uint64_t idx = lo; idx < lo + count; ++idx) {
                if (used[idx]) continue;
                Rational w = h.at(node_at(idx));
                if (!w.is_zero()) candidates.emplace_back(std::move(w), idx);
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return b.first < a.first;
            return a.second < b.second;
        });

        Rational sum(0);
        std::vector<TreeNode> nodes;
        for (const auto& [w, idx] : candidates) {
            if (sum > target) break;
            sum += w;
            used[idx] = true;
            nodes.push_back(node_at(idx));
        }
        if (!(sum > target)) {
            // Mass below this prefix is spent; release nothing and stop.
            if (n == 0) out.exhausted = true;
            break;
        }
        std::sort(nodes.begin(), nodes.end(), node_less);
        out.families.push_back({n, std::move(nodes), std::move(sum)});
    }
    out.achieved = static_cast<std::uint32_t>(out.families.size());

    // Tail profile of the union under the trace-null weight.
    Submeasure tn = trace_null_submeasure();
    for (std::uint32_t start = 0; start < out.achieved; ++start) {
        std::vector<std::uint64_t> idx;
        for (std::uint32_t i = start; i < out.achieved; ++i)
            for (const auto& s : out.families[i].nodes) idx.push_back(node_index(s));
        std::sort(idx.begin(), idx.end());
        Rational exact = tn.eval_sorted(idx);
        Rational bound(0);
        for (std::uint32_t i = start; i < out.achieved; ++i)
            bound += pow2_inv(out.families[i].n);
        out.tail_profile.emplace_back(std::move(exact), std::move(bound));
    }
    return out;
}

// ---------------------------------------------------------------------------
// B_m comparison sets

struct BmResult {
    SetSpec bm;          // {n < horizon : b(n) >= 2^m a(n)}
    TailMatrix a_tails;  // summable(a) on B_m
    TailMatrix b_tails;  // summable(b) on B_m
};

/// Pointwise comparison set of two masses at scale 2^m, with the companion
/// tail diagnostics the covering argument consumes.
inline BmResult bm_sets(const MassRule& a, const MassRule& b, std::uint32_t m,
                        std::uint64_t horizon) {
    std::vector<std::uint64_t> elems;
    Rational scale = pow2(m);
    for (std::uint64_t n = 0; n < horizon; ++n)
        if (b.at(n) >= scale * a.at(n)) elems.push_back(n);
    SetSpec bm = SetSpec::explicit_set(std::move(elems));
    BmResult out{bm, tail_matrix(summable_submeasure(a), bm, {0}, horizon),
                 tail_matrix(summable_submeasure(b), bm, {0}, horizon)};
    return out;
}

// ---------------------------------------------------------------------------
// Families of finite sets: phi^f over a family

struct FamilySpec {
    enum class Kind {
        AllFinite,       // every finite set: the value is the whole mass of A
        OmegaBlocks,     // single blocks of an interval partition of omega
        TreeLevels,      // single tree levels
        Antichains,      // finite antichains in the tree
        CappedLevels,    // finite sets with at most floor(2^l / l) nodes per level
    } kind = Kind::AllFinite;
    Partition partition = Partition::Dyadic;  // OmegaBlocks
};

/// phi^f over a family of finite subsets of omega: the sup over family
/// members F of the f-mass of A within F.
inline Submeasure phi_family_omega(const MassRule& f, const FamilySpec& spec) {
    if (spec.kind == FamilySpec::Kind::AllFinite) {
        Provenance prov{Provenance::Kind::Preset, "phi-family(all-finite)", nullptr};
        auto eval = [f](std::span<const std::uint64_t> a) {
            Rational s(0);
            for (auto n : a) s += f.at(n);
            return s;
        };
        return Submeasure("phi-family(all-finite," + f.name() + ")", eval, prov);
    }
    if (spec.kind != FamilySpec::Kind::OmegaBlocks)
        throw std::invalid_argument("phi_family_omega: family kind needs the tree universe");
    Partition p = spec.partition;
    Provenance prov{Provenance::Kind::Preset, "phi-family(blocks)", nullptr};
    auto eval = [f, p](std::span<const std::uint64_t> a) {
        Rational best(0);
        std::size_t i = 0;
        while (i < a.size()) {
            auto blk = partition_block_of(p, a[i]);
            if (!blk) {
                ++i;
                continue;
            }
            std::uint64_t end = partition_block_end(p, *blk);
            Rational s(0);
            while (i < a.size() && a[i] < end) {
                s += f.at(a[i]);
                ++i;
            }
            best = max(best, s);
        }
        return best;
    };
    return Submeasure("phi-family(blocks," + f.name() + ")", eval, prov);
}

/// phi^f over families of finite subsets of the tree (node-index sets).
inline Submeasure phi_family_tree(const TreeMassRule& f, const FamilySpec& spec) {
    switch (spec.kind) {
        case FamilySpec::Kind::AllFinite: {
            Provenance prov{Provenance::Kind::Preset, "phi-family(all-finite)", nullptr};
            auto eval = [f](std::span<const std::uint64_t> a) {
                Rational s(0);
                for (auto idx : a) s += f.at(node_at(idx));
                return s;
            };
            return Submeasure("phi-family(all-finite," + f.name() + ")", eval, prov);
        }
        case FamilySpec::Kind::TreeLevels: {
            Provenance prov{Provenance::Kind::Preset, "phi-family(levels)", nullptr};
            auto eval = [f](std::span<const std::uint64_t> a) {
                Rational best(0), current(0);
                std::uint32_t level = 0;
                bool open = false;
                for (auto idx : a) {
                    TreeNode s = node_at(idx);
                    if (!open || s.level != level) {
                        if (open) best = max(best, current);
                        current = Rational(0);
                        level = s.level;
                        open = true;
                    }
                    current += f.at(s);
                }
                if (open) best = max(best, current);
                return best;
            };
            return Submeasure("phi-family(levels," + f.name() + ")", eval, prov);
        }
        case FamilySpec::Kind::Antichains: {
            Provenance prov{Provenance::Kind::Preset, "phi-family(antichains)", nullptr};
            auto eval = [f](std::span<const std::uint64_t> a) {
                // Max-weight antichain under the prefix order: fold best
                // values from the deepest closure nodes upward.
                if (a.empty()) return Rational(0);
                std::map<std::uint64_t, Rational> childsum;
                std::vector<std::uint64_t> closure(a.begin(), a.end());
                for (auto idx : a) {
                    TreeNode t = node_at(idx);
                    while (t.level > 0) {
                        t = parent(t);
                        closure.push_back(node_index(t));
                    }
                }
                std::sort(closure.begin(), closure.end());
                closure.erase(std::unique(closure.begin(), closure.end()), closure.end());
                Rational root_best(0);
                for (auto it = closure.rbegin(); it != closure.rend(); ++it) {
                    std::uint64_t idx = *it;
                    TreeNode t = node_at(idx);
                    Rational own = std::binary_search(a.begin(), a.end(), idx) ? f.at(t)
                                                                               : Rational(0);
                    Rational children(0);
                    auto cs = childsum.find(idx);
                    if (cs != childsum.end()) children = cs->second;
                    Rational best = max(own, children);
                    if (t.level == 0) {
                        root_best = best;
                    } else {
                        childsum[node_index(parent(t))] += best;
                    }
                }
                return root_best;
            };
            return Submeasure("phi-family(antichains," + f.name() + ")", eval, prov);
        }
        case FamilySpec::Kind::CappedLevels: {
            if (!f.level_constant())
                throw std::invalid_argument(
                    "phi_family_tree: capped-levels needs a per-level-constant mass");
            Provenance prov{Provenance::Kind::Preset, "phi-family(capped-levels)", nullptr};
            auto eval = [f](std::span<const std::uint64_t> a) {
                // Per level l >= 1 the cap floor(2^l / l) of the largest
                // f-values; constant per-level mass makes the greedy exact.
                Rational s(0);
                std::size_t i = 0;
                while (i < a.size()) {
                    TreeNode t = node_at(a[i]);
                    std::uint64_t level_end = (std::uint64_t{2} << t.level) - 1;
                    std::uint64_t count = 0;
                    while (i < a.size() && a[i] < level_end) {
                        ++count;
                        ++i;
                    }
                    if (t.level == 0) continue;
                    std::uint64_t cap = (std::uint64_t{1} << t.level) / t.level;
                    s += Rational(Rational::from_uint64(std::min(cap, count)).numerator()) *
                         f.level_value(t.level);
                }
                return s;
            };
            return Submeasure("phi-family(capped-levels," + f.name() + ")", eval, prov);
        }
        default:
            throw std::invalid_argument("phi_family_tree: family kind needs the omega universe");
    }
}

} // namespace exh
