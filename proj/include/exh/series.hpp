#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "exh/errors.hpp"
#include "exh/measure.hpp"
#include "exh/rational.hpp"
#include "exh/setspec.hpp"
#include "exh/submeasure.hpp"
#include "exh/vectors.hpp"
#include "exh/zoo.hpp"

namespace exh {

inline constexpr std::size_t kBruteSubsetCap = 22;  // about 4M subsets, exact arithmetic

/// A sequence of finitely supported vectors sharing a norm tag. Generators
/// are pure, so a sequence can be evaluated from any thread.
class VectorSequence {
public:
    using Generator = std::function<Vector(std::uint64_t)>;

    VectorSequence(NormTag tag, Generator gen, std::string name)
        : tag_(tag), gen_(std::move(gen)), name_(std::move(name)) {}

    NormTag tag() const { return tag_; }
    const std::string& name() const { return name_; }
    Vector at(std::uint64_t n) const { return gen_(n); }

private:
    NormTag tag_;
    Generator gen_;
    std::string name_;
};

inline VectorSequence explicit_sequence(NormTag tag, std::vector<Vector> terms,
                                        std::string name = "explicit") {
    auto shared = std::make_shared<const std::vector<Vector>>(std::move(terms));
    return VectorSequence(
        tag,
        [shared, tag](std::uint64_t n) {
            return n < shared->size() ? (*shared)[n] : Vector(tag);
        },
        std::move(name));
}

/// The density-zero representation sequence: h(0) = 0 and h(n) = 2^-k e_k on
/// the dyadic block [2^k, 2^{k+1}).
inline VectorSequence zinc0_sequence() {
    return VectorSequence(
        NormTag::Sup,
        [](std::uint64_t n) {
            if (n == 0) return Vector(NormTag::Sup);
            std::uint64_t k = static_cast<std::uint64_t>(std::bit_width(n) - 1);
            return Vector(NormTag::Sup, {{k, pow2_inv(k)}});
        },
        "zinc0");
}

/// Dense-tail example: h(n)_k = 2^{-n-k-2} for k below the width, every entry
/// strictly below the 2^-n normal-form threshold.
inline VectorSequence dense_tail_sequence(std::uint32_t width) {
    return VectorSequence(
        NormTag::Sup,
        [width](std::uint64_t n) {
            std::vector<std::pair<std::uint64_t, Rational>> es;
            for (std::uint32_t k = 0; k < width; ++k)
                es.emplace_back(k, pow2_inv(static_cast<unsigned long>(n + k + 2)));
            return Vector(NormTag::Sup, std::move(es));
        },
        "dense-tail");
}

/// s_h(F): the exact coordinatewise sum over a finite index set.
inline Vector partial_sum(const VectorSequence& h, std::span<const std::uint64_t> f) {
    Vector s(h.tag());
    for (auto n : f) s += h.at(n);
    return s;
}

inline Vector partial_sum(const VectorSequence& h, const SetSpec& f) {
    if (!f.is_finite()) throw std::invalid_argument("partial_sum: index set must be finite");
    auto en = f.enumerate_below(f.finite_bound());
    return partial_sum(h, std::span<const std::uint64_t>(en.elems));
}

/// Entrywise absolute values, norm tag preserved.
inline VectorSequence absolute_value_sequence(const VectorSequence& h) {
    auto inner = std::make_shared<const VectorSequence>(h);
    return VectorSequence(
        h.tag(), [inner](std::uint64_t n) { return inner->at(n).abs_entries(); },
        "abs(" + h.name() + ")");
}

enum class ModulusMode { Brute, ClosedForm };

namespace detail {

/// max over E subset of `idx` of the norm of s_h(E), by depth-first subset
/// enumeration with an incrementally maintained coordinate table. Optionally
/// reports one maximizing subset (the lexicographically least one).
class SubsetNormSweep {
public:
    SubsetNormSweep(const VectorSequence& h, std::span<const std::uint64_t> idx)
        : tag_(h.tag()) {
        if (idx.size() > kBruteSubsetCap)
            throw BudgetExceeded("subset sweep: window above the brute-force cap");
        terms_.reserve(idx.size());
        index_.assign(idx.begin(), idx.end());
        for (auto n : idx) {
            const Vector v = h.at(n);
            std::vector<std::pair<std::size_t, Rational>> packed;
            for (const auto& [k, val] : v.entries()) packed.emplace_back(dense(k), val);
            terms_.push_back(std::move(packed));
        }
        coords_.assign(universe_.size(), Rational(0));
    }

    /// Runs the sweep; `want_argmax` additionally tracks a maximizer.
    Rational run(bool want_argmax = false) {
        best_ = Rational(0);
        best_mask_ = 0;
        want_argmax_ = want_argmax;
        ell1_norm_ = Rational(0);
        recurse(0, 0);
        return best_;
    }

    /// Elements of the best subset found by the last run.
    std::vector<std::uint64_t> best_subset() const {
        std::vector<std::uint64_t> out;
        for (std::size_t i = 0; i < index_.size(); ++i)
            if (best_mask_ & (std::uint64_t{1} << i)) out.push_back(index_[i]);
        return out;
    }

private:
    std::size_t dense(std::uint64_t k) {
        for (std::size_t i = 0; i < universe_.size(); ++i)
            if (universe_[i] == k) return i;
        universe_.push_back(k);
        return universe_.size() - 1;
    }

    Rational current_norm() const {
        if (tag_ == NormTag::Ell1) return ell1_norm_;
        Rational m(0);
        for (const auto& c : coords_) m = max(m, c.abs());
        return m;
    }

    void consider(std::uint64_t mask) {
        Rational n = current_norm();
        if (n > best_) {
            best_ = n;
            best_mask_ = mask;
        } else if (want_argmax_ && n == best_ && lex_less(mask, best_mask_)) {
            best_mask_ = mask;
        }
    }

    /// Lexicographic order on subsets as sorted element lists; index_ is
    /// ascending, so bit positions compare like elements.
    bool lex_less(std::uint64_t a, std::uint64_t b) const {
        const std::size_t n = index_.size();
        std::size_t i = 0, j = 0;
        while (true) {
            while (i < n && !((a >> i) & 1)) ++i;
            while (j < n && !((b >> j) & 1)) ++j;
            if (i >= n && j >= n) return false;  // equal
            if (i >= n) return true;             // a is a proper prefix of b
            if (j >= n) return false;
            if (i != j) return i < j;            // smaller next element wins
            ++i;
            ++j;
        }
    }

    void toggle(std::size_t i, bool add) {
        for (const auto& [c, val] : terms_[i]) {
            if (tag_ == NormTag::Ell1) ell1_norm_ -= coords_[c].abs();
            if (add) coords_[c] += val;
            else coords_[c] -= val;
            if (tag_ == NormTag::Ell1) ell1_norm_ += coords_[c].abs();
        }
    }

    void recurse(std::size_t i, std::uint64_t mask) {
        if (i == terms_.size()) {
            consider(mask);
            return;
        }
        recurse(i + 1, mask);
        toggle(i, true);
        recurse(i + 1, mask | (std::uint64_t{1} << i));
        toggle(i, false);
    }

    NormTag tag_;
    std::vector<std::uint64_t> index_;
    std::vector<std::uint64_t> universe_;
    std::vector<std::vector<std::pair<std::size_t, Rational>>> terms_;
    std::vector<Rational> coords_;
    Rational best_{0};
    Rational ell1_norm_{0};
    std::uint64_t best_mask_ = 0;
    bool want_argmax_ = false;
};

} // namespace detail

/// sup of the norm of s_h(E) over E inside A's window [lo, hi). Closed form
/// requires entrywise-nonnegative terms on the window (the sup is then the
/// full window's norm); brute mode enumerates every subset.
inline Rational cauchy_modulus(const VectorSequence& h, const SetSpec& a, std::uint64_t lo,
                               std::uint64_t hi, ModulusMode mode,
                               std::uint64_t budget = kDefaultEnumBudget) {
    auto window = slice(a, lo, hi, budget);
    if (mode == ModulusMode::ClosedForm) {
        for (auto n : window)
            if (!h.at(n).entrywise_nonnegative())
                throw std::invalid_argument("cauchy_modulus: closed form needs nonnegative terms");
        return partial_sum(h, std::span<const std::uint64_t>(window)).norm();
    }
    detail::SubsetNormSweep sweep(h, window);
    return sweep.run();
}

/// The induced submeasure of a sequence: F maps to the sup over subsets E of
/// F of the norm of s_h(E). For nonnegative sequences the closed form applies.
inline Submeasure induced_submeasure(const VectorSequence& h, ModulusMode mode) {
    auto shared = std::make_shared<const VectorSequence>(h);
    Provenance prov{Provenance::Kind::Induced, "induced(" + h.name() + ")", nullptr};
    auto eval = [shared, mode](std::span<const std::uint64_t> f) {
        if (mode == ModulusMode::ClosedForm) {
            for (auto n : f)
                if (!shared->at(n).entrywise_nonnegative())
                    throw std::invalid_argument(
                        "induced_submeasure: closed form needs nonnegative terms");
            return partial_sum(*shared, f).norm();
        }
        detail::SubsetNormSweep sweep(*shared, f);
        return sweep.run();
    };
    return Submeasure("induced(" + h.name() + ")", eval, prov);
}

/// The basic sup-norm representation of a sup-of-measures submeasure:
/// h(n) = (mu_0({n}), mu_1({n}), ...). The norm of s_h(F) equals phi(F)
/// exactly for every finite F.
inline VectorSequence ellinf_representation(const Submeasure& phi) {
    auto access = phi.provenance().column_access;
    if (!access)
        throw std::invalid_argument(
            "ellinf_representation: submeasure does not expose a sup-of-measures column family");
    return VectorSequence(
        NormTag::Sup,
        [access](std::uint64_t n) {
            return Vector(NormTag::Sup, access->columns_at(n));
        },
        "ellinf-rep(" + phi.name() + ")");
}

/// Normal form for sup-norm sequences: per index n, coordinates with
/// magnitude below 2^-n are zeroed. Witnesses the column-finiteness property
/// of sequences living in the space of vanishing coordinates.
inline VectorSequence c0_normal_form(const VectorSequence& h) {
    if (h.tag() != NormTag::Sup)
        throw std::invalid_argument("c0_normal_form: needs a sup-norm sequence");
    auto inner = std::make_shared<const VectorSequence>(h);
    return VectorSequence(
        NormTag::Sup,
        [inner](std::uint64_t n) {
            Rational threshold = pow2_inv(static_cast<unsigned long>(n));
            const Vector term = inner->at(n);
            std::vector<std::pair<std::uint64_t, Rational>> kept;
            for (const auto& [k, v] : term.entries())
                if (!(v.abs() < threshold)) kept.emplace_back(k, v);
            return Vector(NormTag::Sup, std::move(kept));
        },
        "c0-normal(" + h.name() + ")");
}

struct ColumnFinitenessReport {
    // hits[m] = the column indices whose support contains m, for m < horizon.
    std::vector<std::vector<std::uint64_t>> hits;
    std::uint64_t max_multiplicity = 0;
};

/// Per-point multiplicity profile of a column family: which columns charge
/// each point below the horizon. Finite lists pass trivially; the profile is
/// what the bounded-columns pipeline consumes.
inline ColumnFinitenessReport column_finiteness_check(
    const std::vector<FiniteSupportMeasure>& measures, std::uint64_t horizon) {
    ColumnFinitenessReport rep;
    rep.hits.assign(horizon, {});
    for (std::uint64_t k = 0; k < measures.size(); ++k)
        for (const auto& [n, w] : measures[k].atoms())
            if (n < horizon) rep.hits[n].push_back(k);
    for (const auto& h : rep.hits)
        rep.max_multiplicity = std::max(rep.max_multiplicity, static_cast<std::uint64_t>(h.size()));
    return rep;
}

struct BoundedColumnsResult {
    std::vector<std::uint64_t> cuts;  // c_0 = 0 < c_1 < c_2 < ...
    std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals;
    Submeasure phi;
};

/// Interval partition placing every column support inside two consecutive
/// intervals, and the generalized density submeasure it induces:
/// phi_n(A) = sup_k nu_k(A within P_n). The cuts follow the greedy rule
/// c_{i+1} = max(c_i + 1, 1 + max{max supp(nu_k) : min supp(nu_k) < c_i}).
inline BoundedColumnsResult bounded_columns_to_gdensity(
    std::vector<FiniteSupportMeasure> measures) {
    if (measures.empty())
        throw std::invalid_argument("bounded_columns_to_gdensity: empty measure list");

    std::uint64_t global_max = 0;
    bool any = false;
    for (const auto& mu : measures)
        if (!mu.empty()) {
            global_max = std::max(global_max, mu.max_support());
            any = true;
        }

    std::vector<std::uint64_t> cuts{0};
    while (any && cuts.back() <= global_max) {
        std::uint64_t c = cuts.back();
        std::uint64_t next = c + 1;
        for (const auto& mu : measures)
            if (!mu.empty() && mu.min_support() < c) next = std::max(next, mu.max_support() + 1);
        cuts.push_back(next);
    }
    if (cuts.size() < 2) cuts.push_back(1);

    auto cols = std::make_shared<const std::vector<FiniteSupportMeasure>>(std::move(measures));
    std::vector<GDensityBlock> blocks;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> intervals;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        std::pair<std::uint64_t, std::uint64_t> iv{cuts[i], cuts[i + 1]};
        intervals.push_back(iv);
        blocks.push_back(GDensityBlock{iv, [cols](std::span<const std::uint64_t> f) {
                                           Rational best(0);
                                           for (const auto& mu : *cols) best = max(best, mu.value(f));
                                           return best;
                                       }});
    }
    BoundedColumnsResult out{std::move(cuts), std::move(intervals),
                             gdensity_from_blocks(std::move(blocks), "gdensity-from-columns")};
    return out;
}

/// The explicit envelope of an induced submeasure over a finite universe of
/// finite sets: per F, a maximizing subset F' is norm-witnessed by a concrete
/// functional, folded into the atomwise measure mu_F; the envelope is the sup
/// of these measures. The envelope dominates the induced submeasure and stays
/// within twice of it on the universe.
inline Submeasure nonpathological_envelope(const VectorSequence& h,
                                           const std::vector<std::vector<std::uint64_t>>& universe) {
    std::vector<FiniteSupportMeasure> mus;
    mus.reserve(universe.size());
    for (const auto& f : universe) {
        detail::SubsetNormSweep sweep(h, f);
        Rational best = sweep.run(/*want_argmax=*/true);
        if (best.is_zero()) {
            mus.emplace_back();
            continue;
        }
        auto fprime = sweep.best_subset();
        Vector v = partial_sum(h, std::span<const std::uint64_t>(fprime));
        NormingFunctional functional = dual_witness(v);
        std::vector<std::pair<std::uint64_t, Rational>> atoms;
        for (auto n : fprime) {
            Rational w = functional.apply(h.at(n)).abs();
            if (!w.is_zero()) atoms.emplace_back(n, w);
        }
        mus.emplace_back(std::move(atoms));
    }
    Submeasure psi = sup_of_measures(std::move(mus));
    return Submeasure("envelope(" + h.name() + ")",
                      [psi](std::span<const std::uint64_t> f) { return psi.eval_sorted(f); },
                      psi.provenance());
}

} // namespace exh
