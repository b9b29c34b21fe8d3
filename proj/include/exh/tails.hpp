#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exh/rational.hpp"
#include "exh/setspec.hpp"
#include "exh/submeasure.hpp"

namespace exh {

inline const Rational kDefaultDivergenceBar = Rational(1000000);

/// Truncated tail profile of phi on A: values[i] = phi(A intersected with
/// [cutoffs[i], horizon)). By lower semicontinuity each value is a certified
/// lower bound of phi(A minus cutoff); the matrix is non-increasing in the
/// cutoff and non-decreasing in the horizon.
struct TailMatrix {
    std::vector<std::uint64_t> cutoffs;
    std::uint64_t horizon = 0;
    std::vector<Rational> values;
    bool enumeration_complete = true;
};

inline TailMatrix tail_matrix(const Submeasure& phi, const SetSpec& a,
                              std::vector<std::uint64_t> cutoffs, std::uint64_t horizon,
                              std::uint64_t budget = kDefaultEnumBudget) {
    for (auto n : cutoffs)
        if (n > horizon) throw std::invalid_argument("tail_matrix: cutoff beyond horizon");
    std::sort(cutoffs.begin(), cutoffs.end());
    TailMatrix tm;
    tm.cutoffs = std::move(cutoffs);
    tm.horizon = horizon;
    auto en = a.enumerate_below(horizon, budget);
    tm.enumeration_complete = en.complete;
    tm.values.reserve(tm.cutoffs.size());
    for (auto n : tm.cutoffs) {
        auto it = std::lower_bound(en.elems.begin(), en.elems.end(), n);
        std::span<const std::uint64_t> tail(en.elems.data() + (it - en.elems.begin()),
                                            static_cast<std::size_t>(en.elems.end() - it));
        tm.values.push_back(phi.eval_sorted(tail));
    }
    return tm;
}

/// Three-valued finite-horizon verdict for membership of A in Exh(phi).
/// Finite evaluation only yields lower bounds, so "certified" is reserved for
/// the cases where the unenumerated remainder is covered: either A was
/// exhausted below the horizon, or a preset tail certificate bounds it.
struct MembershipVerdict {
    enum class Status { LowerBoundWitness, TailBelow, Inconclusive } status =
        Status::Inconclusive;
    Rational value;                          // witness bound, or the tail value found
    std::uint64_t from_cutoff = 0;           // TailBelow: the cutoff that worked
    bool certified = false;                  // TailBelow: remainder covered
    std::optional<Rational> remainder_bound; // bound used for certification
    TailMatrix evidence;

    std::string status_name() const {
        switch (status) {
            case Status::LowerBoundWitness: return "lower-bound-witness";
            case Status::TailBelow: return "tail-below";
            case Status::Inconclusive: return "inconclusive";
        }
        return "inconclusive";
    }
};

struct VerdictOptions {
    std::vector<std::uint64_t> cutoffs;  // default: 0 and powers of two below the horizon
    Rational divergence_bar = kDefaultDivergenceBar;
    std::uint64_t budget = kDefaultEnumBudget;
};

inline std::vector<std::uint64_t> default_cutoff_ladder(std::uint64_t horizon) {
    std::vector<std::uint64_t> cs{0};
    for (std::uint64_t c = 1; c < horizon; c *= 2) cs.push_back(c);
    return cs;
}

inline MembershipVerdict exh_verdict(const Submeasure& phi, const SetSpec& a,
                                     const Rational& epsilon, std::uint64_t horizon,
                                     VerdictOptions opts = {}) {
    if (!(epsilon > Rational(0))) throw std::invalid_argument("exh_verdict: epsilon must be positive");
    if (opts.cutoffs.empty()) opts.cutoffs = default_cutoff_ladder(horizon);

    MembershipVerdict v;
    v.evidence = tail_matrix(phi, a, opts.cutoffs, horizon, opts.budget);

    // Remainder of A beyond the horizon: empty when the rule was exhausted,
    // otherwise covered only by a preset certificate.
    std::optional<Rational> remainder;
    if (v.evidence.enumeration_complete) {
        if (a.is_finite() && a.finite_bound() <= horizon) {
            remainder = Rational(0);
        } else if (auto cert = phi.tail_bound(a, horizon)) {
            remainder = cert;
        }
    }

    for (std::size_t i = 0; i < v.evidence.cutoffs.size(); ++i) {
        if (v.evidence.values[i] < epsilon) {
            v.status = MembershipVerdict::Status::TailBelow;
            v.from_cutoff = v.evidence.cutoffs[i];
            v.value = v.evidence.values[i];
            v.remainder_bound = remainder;
            v.certified = remainder.has_value() && v.evidence.values[i] + *remainder < epsilon;
            return v;
        }
    }

    if (v.evidence.enumeration_complete && !v.evidence.values.empty()) {
        bool all_above = true;
        for (const auto& val : v.evidence.values)
            if (val < opts.divergence_bar) {
                all_above = false;
                break;
            }
        if (all_above) {
            v.status = MembershipVerdict::Status::LowerBoundWitness;
            // The deepest cutoff gives the strongest divergence evidence:
            // phi(A minus N) >= value for every N up to it.
            v.value = v.evidence.values.back();
            return v;
        }
    }

    v.status = MembershipVerdict::Status::Inconclusive;
    return v;
}

} // namespace exh
