#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "exh/rational.hpp"
#include "exh/setspec.hpp"

namespace exh {

/// Nonnegative mass function on omega, from a closed catalog of rules. The
/// structure is kept so that convergent tails can be certified analytically.
class MassRule {
public:
    struct Harmonic {};                       // 1/(n+1)
    struct Geometric {                        // scale * ratio^n, ratio in (0,1)
        Rational scale{1};
        Rational ratio{1, 2};
    };
    struct BlockConstDyadic {                 // value(b) on dyadic block b = [2^b, 2^{b+1})
        enum class Value { Pow2Inv, InvLinear } value = Value::Pow2Inv;
    };
    struct BlockPrefixDyadic {                // value(b) on the first count(b) points of block b
        CountRule count;
        BlockConstDyadic::Value value = BlockConstDyadic::Value::InvLinear;
    };
    struct ExplicitPrefix {                   // listed values, zero beyond
        std::vector<Rational> values;
    };
    struct ResidueHarmonic {                  // 1/(n+1) on {n : n has exactly k trailing ones}
        std::uint32_t k = 0;
    };
    struct LevelWeight {};                    // 2^{-floor(log2(n+1))}

    MassRule(Harmonic r) : v_(r) {}           // NOLINT(google-explicit-constructor)
    MassRule(Geometric r) : v_(r) {           // NOLINT(google-explicit-constructor)
        if (!(r.ratio > Rational(0)) || !(r.ratio < Rational(1)) || !(r.scale > Rational(0)))
            throw std::invalid_argument("MassRule: geometric needs 0 < ratio < 1, scale > 0");
    }
    MassRule(BlockConstDyadic r) : v_(r) {}   // NOLINT(google-explicit-constructor)
    MassRule(BlockPrefixDyadic r) : v_(r) {}  // NOLINT(google-explicit-constructor)
    MassRule(ExplicitPrefix r) : v_(std::move(r)) {
        bool nonzero = false;
        for (const auto& x : std::get<ExplicitPrefix>(v_).values) {
            if (x < Rational(0)) throw std::invalid_argument("MassRule: values must be >= 0");
            if (!x.is_zero()) nonzero = true;
        }
        if (!nonzero) throw std::invalid_argument("MassRule: all-zero rule is not a proper ideal");
    }
    MassRule(ResidueHarmonic r) : v_(r) {}    // NOLINT(google-explicit-constructor)
    MassRule(LevelWeight r) : v_(r) {}        // NOLINT(google-explicit-constructor)

    static std::uint32_t dyadic_block(std::uint64_t n) {
        return static_cast<std::uint32_t>(std::bit_width(n) - 1);  // n >= 1
    }

    static Rational block_value(BlockConstDyadic::Value v, std::uint32_t b) {
        switch (v) {
            case BlockConstDyadic::Value::Pow2Inv: return pow2_inv(b);
            case BlockConstDyadic::Value::InvLinear: return b == 0 ? Rational(0) : Rational(1, static_cast<long>(b));
        }
        return Rational(0);
    }

    Rational at(std::uint64_t n) const {
        if (std::holds_alternative<Harmonic>(v_))
            return Rational(mpz_class(1), mpz_class(Rational::from_uint64(n).numerator() + 1));
        if (auto* g = std::get_if<Geometric>(&v_))
            return g->scale * pow(g->ratio, static_cast<unsigned long>(n));
        if (auto* bc = std::get_if<BlockConstDyadic>(&v_)) {
            if (n == 0) return Rational(0);
            return block_value(bc->value, dyadic_block(n));
        }
        if (auto* bp = std::get_if<BlockPrefixDyadic>(&v_)) {
            if (n == 0) return Rational(0);
            std::uint32_t b = dyadic_block(n);
            std::uint64_t start = std::uint64_t{1} << b;
            if (n - start < bp->count.count(b, start)) return block_value(bp->value, b);
            return Rational(0);
        }
        if (auto* e = std::get_if<ExplicitPrefix>(&v_))
            return n < e->values.size() ? e->values[n] : Rational(0);
        if (auto* r = std::get_if<ResidueHarmonic>(&v_)) {
            std::uint32_t ones = static_cast<std::uint32_t>(std::countr_one(n));
            if (ones != r->k) return Rational(0);
            return Rational(mpz_class(1), mpz_class(Rational::from_uint64(n).numerator() + 1));
        }
        // LevelWeight
        return pow2_inv(static_cast<unsigned long>(std::bit_width(n + 1) - 1));
    }

    /// h(n) <= C/(n+1) for all n, with the smallest catalog constant.
    std::optional<Rational> harmonic_domination() const {
        if (std::holds_alternative<Harmonic>(v_) || std::holds_alternative<ResidueHarmonic>(v_))
            return Rational(1);
        if (std::holds_alternative<LevelWeight>(v_)) return Rational(2);
        return std::nullopt;
    }

    /// Closed-form bound for the full series tail from `from`, when the
    /// series converges.
    std::optional<Rational> series_tail_bound(std::uint64_t from) const {
        if (auto* g = std::get_if<Geometric>(&v_)) {
            // sum_{n >= from} c r^n = c r^from / (1 - r)
            return g->scale * pow(g->ratio, static_cast<unsigned long>(from)) /
                   (Rational(1) - g->ratio);
        }
        if (auto* e = std::get_if<ExplicitPrefix>(&v_)) {
            Rational s(0);
            for (std::uint64_t n = from; n < e->values.size(); ++n) s += e->values[n];
            return s;
        }
        return std::nullopt;
    }

    /// Upper bound for sum_{n in A, n >= from} h(n), combining the mass rule
    /// with the structure of A. This is the certificate catalog behind
    /// "certified" verdicts: geometric series tails, harmonic mass along
    /// geometric sets, and thin dyadic block selections under 2^{-b} block
    /// mass. Returns nothing when no catalog entry applies.
    std::optional<Rational> tail_bound_on(const SetSpec& a, std::uint64_t from) const {
        if (auto s = series_tail_bound(from)) return s;

        if (auto* geo = a.get_if<SetSpec::Geometric>()) {
            if (auto c = harmonic_domination()) {
                // h(offset + b^k) <= C / (offset + b^k + 1) <= C b^{-k} for
                // offset >= -1; the K-tail sums to C b^{-K} b/(b-1).
                std::uint64_t b = geo->base;
                std::uint32_t k = geo->first_exp;
                __int128 p = 1;
                for (std::uint32_t i = 0; i < k; ++i) p *= b;
                while (p + geo->offset < static_cast<__int128>(from)) {
                    p *= b;
                    ++k;
                }
                Rational binv(1, static_cast<long>(b));
                return *c * pow(binv, k) * Rational(static_cast<long>(b), static_cast<long>(b - 1));
            }
        }

        if (auto* bs = a.get_if<SetSpec::BlockSelect>()) {
            auto* bc = std::get_if<BlockConstDyadic>(&v_);
            bool thin = bs->count.kind != CountRule::Kind::Full;
            if (bc && bc->value == BlockConstDyadic::Value::Pow2Inv &&
                bs->partition == Partition::Dyadic && thin) {
                // count(b) <= b + c0, so the tail from block B is at most
                // sum_{b >= B} (b + c0) 2^{-b} = (B + 1 + c0) 2^{1-B}.
                std::uint64_t c0 =
                    bs->count.kind == CountRule::Kind::Constant ? bs->count.constant : 0;
                std::uint64_t B = from <= 1 ? 0 : dyadic_block(from);
                return Rational(Rational::from_uint64(B + 1 + c0).numerator()) * pow2_inv(B) *
                       Rational(2);
            }
        }

        return std::nullopt;
    }

    /// Diagnostic partial sum of the mass itself below a horizon; summable
    /// presets report it as a properness check.
    Rational partial_sum(std::uint64_t horizon) const {
        Rational s(0);
        for (std::uint64_t n = 0; n < horizon; ++n) s += at(n);
        return s;
    }

    std::string name() const {
        if (std::holds_alternative<Harmonic>(v_)) return "harmonic";
        if (std::holds_alternative<Geometric>(v_)) return "geometric";
        if (std::holds_alternative<BlockConstDyadic>(v_)) return "dyadic-block-const";
        if (std::holds_alternative<BlockPrefixDyadic>(v_)) return "dyadic-block-prefix";
        if (std::holds_alternative<ExplicitPrefix>(v_)) return "explicit";
        if (std::holds_alternative<ResidueHarmonic>(v_)) return "residue-harmonic";
        return "level-weight";
    }

private:
    std::variant<Harmonic, Geometric, BlockConstDyadic, BlockPrefixDyadic, ExplicitPrefix,
                 ResidueHarmonic, LevelWeight>
        v_;
};

} // namespace exh
