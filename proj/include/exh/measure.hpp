#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "exh/rational.hpp"

namespace exh {

/// A measure on omega given by finitely many positive atom weights.
/// Additivity holds by construction: mu(A) is the sum of the atoms in A.
class FiniteSupportMeasure {
public:
    FiniteSupportMeasure() = default;

    explicit FiniteSupportMeasure(std::vector<std::pair<std::uint64_t, Rational>> atoms)
        : atoms_(std::move(atoms)) {
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (i > 0 && atoms_[i].first == atoms_[i - 1].first)
                throw std::invalid_argument("FiniteSupportMeasure: duplicate atom");
            if (!(atoms_[i].second > Rational(0)))
                throw std::invalid_argument("FiniteSupportMeasure: atom weights must be positive");
        }
    }

    static FiniteSupportMeasure from_map(const std::map<std::uint64_t, Rational>& m) {
        return FiniteSupportMeasure(std::vector<std::pair<std::uint64_t, Rational>>(m.begin(), m.end()));
    }

    const std::vector<std::pair<std::uint64_t, Rational>>& atoms() const { return atoms_; }

    bool empty() const { return atoms_.empty(); }
    std::uint64_t min_support() const { return atoms_.front().first; }
    std::uint64_t max_support() const { return atoms_.back().first; }

    Rational at(std::uint64_t n) const {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), n,
                                   [](const auto& a, std::uint64_t x) { return a.first < x; });
        if (it != atoms_.end() && it->first == n) return it->second;
        return Rational(0);
    }

    /// mu(F) for a sorted finite set F.
    Rational value(std::span<const std::uint64_t> f) const {
        Rational sum(0);
        auto it = atoms_.begin();
        for (auto x : f) {
            while (it != atoms_.end() && it->first < x) ++it;
            if (it == atoms_.end()) break;
            if (it->first == x) sum += it->second;
        }
        return sum;
    }

    Rational total() const {
        Rational sum(0);
        for (const auto& [n, w] : atoms_) sum += w;
        return sum;
    }

    /// mu restricted to [lo, hi), as a finite set sum.
    Rational value_on_interval(std::uint64_t lo, std::uint64_t hi) const {
        Rational sum(0);
        for (const auto& [n, w] : atoms_)
            if (n >= lo && n < hi) sum += w;
        return sum;
    }

    bool supports_overlap(const FiniteSupportMeasure& o) const {
        auto a = atoms_.begin();
        auto b = o.atoms_.begin();
        while (a != atoms_.end() && b != o.atoms_.end()) {
            if (a->first == b->first) return true;
            if (a->first < b->first) ++a;
            else ++b;
        }
        return false;
    }

private:
    std::vector<std::pair<std::uint64_t, Rational>> atoms_;
};

} // namespace exh
