#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "exh/rational.hpp"

namespace exh {

enum class NormTag { Ell1, Sup };

inline std::string norm_name(NormTag t) { return t == NormTag::Ell1 ? "ell1" : "sup"; }

/// Finitely supported rational vector with a norm tag. Entries are sparse,
/// sorted by coordinate, and never zero.
class Vector {
public:
    explicit Vector(NormTag tag) : tag_(tag) {}

    Vector(NormTag tag, std::vector<std::pair<std::uint64_t, Rational>> entries)
        : tag_(tag), entries_(std::move(entries)) {
        std::sort(entries_.begin(), entries_.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 1; i < entries_.size(); ++i)
            if (entries_[i].first == entries_[i - 1].first)
                throw std::invalid_argument("Vector: duplicate coordinate");
        std::erase_if(entries_, [](const auto& e) { return e.second.is_zero(); });
    }

    NormTag tag() const { return tag_; }
    const std::vector<std::pair<std::uint64_t, Rational>>& entries() const { return entries_; }
    bool is_zero() const { return entries_.empty(); }

    Rational coord(std::uint64_t k) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                                   [](const auto& a, std::uint64_t x) { return a.first < x; });
        if (it != entries_.end() && it->first == k) return it->second;
        return Rational(0);
    }

    Rational norm() const {
        Rational out(0);
        if (tag_ == NormTag::Ell1) {
            for (const auto& [k, v] : entries_) out += v.abs();
        } else {
            for (const auto& [k, v] : entries_) out = max(out, v.abs());
        }
        return out;
    }

    bool entrywise_nonnegative() const {
        for (const auto& [k, v] : entries_)
            if (v.sign() < 0) return false;
        return true;
    }

    Vector& operator+=(const Vector& o) {
        if (tag_ != o.tag_) throw std::invalid_argument("Vector: norm tag mismatch");
        std::vector<std::pair<std::uint64_t, Rational>> merged;
        merged.reserve(entries_.size() + o.entries_.size());
        auto a = entries_.begin();
        auto b = o.entries_.begin();
        while (a != entries_.end() || b != o.entries_.end()) {
            if (b == o.entries_.end() || (a != entries_.end() && a->first < b->first)) {
                merged.push_back(*a++);
            } else if (a == entries_.end() || b->first < a->first) {
                merged.push_back(*b++);
            } else {
                Rational s = a->second + b->second;
                if (!s.is_zero()) merged.emplace_back(a->first, s);
                ++a;
                ++b;
            }
        }
        entries_ = std::move(merged);
        return *this;
    }

    friend Vector operator+(Vector a, const Vector& b) {
        a += b;
        return a;
    }

    Vector abs_entries() const {
        Vector out(tag_);
        out.entries_.reserve(entries_.size());
        for (const auto& [k, v] : entries_) out.entries_.emplace_back(k, v.abs());
        return out;
    }

    friend bool operator==(const Vector& a, const Vector& b) {
        return a.tag_ == b.tag_ && a.entries_ == b.entries_;
    }

private:
    NormTag tag_;
    std::vector<std::pair<std::uint64_t, Rational>> entries_;
};

/// A norm-one functional that attains the norm of the vector it witnesses:
/// the sign vector for the l1 norm, a signed coordinate indicator at the
/// least maximizing index for the sup norm.
class NormingFunctional {
public:
    static NormingFunctional for_vector(const Vector& v) {
        if (v.is_zero())
            throw std::invalid_argument("dual_witness: zero vector has no norming functional");
        NormingFunctional f;
        f.tag_ = v.tag();
        if (v.tag() == NormTag::Ell1) {
            for (const auto& [k, val] : v.entries()) f.signs_.emplace_back(k, val.sign());
        } else {
            Rational best(-1);
            for (const auto& [k, val] : v.entries()) {
                Rational a = val.abs();
                if (a > best) {
                    best = a;
                    f.signs_.assign(1, {k, val.sign()});
                }
            }
        }
        return f;
    }

    NormTag tag() const { return tag_; }
    const std::vector<std::pair<std::uint64_t, int>>& weights() const { return signs_; }

    /// f(w): the signed sum of w's coordinates over the witness support.
    Rational apply(const Vector& w) const {
        Rational out(0);
        for (const auto& [k, s] : signs_) {
            Rational c = w.coord(k);
            out += s >= 0 ? c : -c;
        }
        return out;
    }

private:
    NormTag tag_ = NormTag::Sup;
    std::vector<std::pair<std::uint64_t, int>> signs_;
};

inline NormingFunctional dual_witness(const Vector& v) { return NormingFunctional::for_vector(v); }

} // namespace exh
