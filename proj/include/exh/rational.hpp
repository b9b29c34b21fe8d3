#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace exh {

/// Exact rational number. Always kept reduced with a positive denominator;
/// every value-carrying path in the library goes through this type (there is
/// no floating-point fast path anywhere).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(long n) : v_(n) {}                // NOLINT(google-explicit-constructor)
    Rational(int n) : v_(n) {}                 // NOLINT(google-explicit-constructor)
    Rational(unsigned long n) : v_(mpz_class(n)) {}  // NOLINT(google-explicit-constructor)

    Rational(long num, long den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_.canonicalize();
    }

    explicit Rational(const mpz_class& n) : v_(n) {}

    Rational(const mpz_class& num, const mpz_class& den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        v_.canonicalize();
    }

    static Rational from_uint64(std::uint64_t n) {
        mpz_class z;
        mpz_import(z.get_mpz_t(), 1, 1, sizeof(n), 0, 0, &n);
        return Rational(z);
    }

    /// Parses "p/q" or "p" (optional sign, decimal digits). Rejects q = 0 and
    /// anything else (decimals in particular).
    static Rational parse(std::string_view text) {
        std::string s(text);
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) {
                return Rational(mpz_class(s));
            }
            mpz_class num(s.substr(0, slash));
            mpz_class den(s.substr(slash + 1));
            if (den <= 0) throw std::invalid_argument("Rational: denominator must be positive");
            return Rational(num, den);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("Rational: cannot parse \"" + s + "\"");
        }
    }

    /// Canonical string: "p/q" when the reduced denominator is not 1, "p"
    /// otherwise. Round-trips exactly through parse().
    std::string str() const { return v_.get_str(); }

    /// Decimal approximation, for human-readable tables only.
    double approx() const { return v_.get_d(); }

    const mpq_class& raw() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return v_ == 0; }
    int sign() const { return sgn(v_); }

    Rational abs() const {
        Rational r(*this);
        r.v_ = ::abs(r.v_);
        return r;
    }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::invalid_argument("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { a += b; return a; }
    friend Rational operator-(Rational a, const Rational& b) { a -= b; return a; }
    friend Rational operator*(Rational a, const Rational& b) { a *= b; return a; }
    friend Rational operator/(Rational a, const Rational& b) { a /= b; return a; }
    friend Rational operator-(const Rational& a) {
        Rational r;
        r.v_ = -a.v_;
        return r;
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

private:
    mpq_class v_;
};

/// r^e with a nonnegative integer exponent.
inline Rational pow(const Rational& r, unsigned long e) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), r.numerator().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), r.denominator().get_mpz_t(), e);
    return Rational(num, den);
}

/// 2^-k as an exact rational.
inline Rational pow2_inv(unsigned long k) {
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, k);
    return Rational(mpz_class(1), den);
}

/// 2^k as an exact rational.
inline Rational pow2(unsigned long k) {
    mpz_class num;
    mpz_ui_pow_ui(num.get_mpz_t(), 2, k);
    return Rational(num);
}

inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

} // namespace exh
