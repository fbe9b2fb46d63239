#pragma once

// Exact coefficients u + v sqrt(m) in Q or a real quadratic extension Q(sqrt m).

#include "hmf/arith.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace hmf {

class CoeffNumber {
public:
    CoeffNumber() : u_(0), v_(0), m_(1) {}
    CoeffNumber(long u) : u_(u), v_(0), m_(1) {}
    CoeffNumber(Rat u) : u_(std::move(u)), v_(0), m_(1) { u_.canonicalize(); }
    CoeffNumber(Rat u, Rat v, Int m) : u_(std::move(u)), v_(std::move(v)), m_(std::move(m))
    {
        u_.canonicalize();
        v_.canonicalize();
        if (m_ < 1)
            throw DomainError("coefficient field discriminant must be >= 1");
        if (m_ == 1) {
            u_ += v_;
            v_ = 0;
        }
    }

    const Rat& u() const { return u_; }
    const Rat& v() const { return v_; }
    const Int& m() const { return m_; }

    bool is_rational() const { return v_ == 0; }
    bool is_zero() const { return u_ == 0 && v_ == 0; }

    /// The rational value; throws if the sqrt(m) part is nonzero.
    const Rat& rational() const
    {
        if (!is_rational())
            throw DomainError("coefficient " + str() + " is not rational");
        return u_;
    }

    CoeffNumber conj() const { return {u_, -v_, m_}; }
    Rat norm_down() const { return u_ * u_ - m_ * v_ * v_; }

    /// Values under sqrt(m) -> +sqrt(m) and -sqrt(m).
    std::pair<double, double> embeddings() const
    {
        const double s = std::sqrt(m_.get_d());
        return {u_.get_d() + v_.get_d() * s, u_.get_d() - v_.get_d() * s};
    }

    std::string str() const
    {
        if (is_rational())
            return rat_to_string(u_);
        return rat_to_string(u_) + (v_ > 0 ? "+" : "-") + rat_to_string(abs(v_)) + "*sqrt(" + m_.get_str() + ")";
    }

    friend Int common_disc(const CoeffNumber& a, const CoeffNumber& b)
    {
        if (a.m_ == 1 || a.m_ == b.m_)
            return b.m_;
        if (b.m_ == 1)
            return a.m_;
        if (a.is_rational())
            return b.m_;
        if (b.is_rational())
            return a.m_;
        throw DomainError("mixing coefficients from Q(sqrt " + a.m_.get_str() + ") and Q(sqrt " + b.m_.get_str() +
                          ")");
    }

    friend CoeffNumber operator+(const CoeffNumber& a, const CoeffNumber& b)
    {
        return {a.u_ + b.u_, a.v_ + b.v_, common_disc(a, b)};
    }
    friend CoeffNumber operator-(const CoeffNumber& a, const CoeffNumber& b)
    {
        return {a.u_ - b.u_, a.v_ - b.v_, common_disc(a, b)};
    }
    friend CoeffNumber operator-(const CoeffNumber& a) { return {-a.u_, -a.v_, a.m_}; }
    friend CoeffNumber operator*(const CoeffNumber& a, const CoeffNumber& b)
    {
        if (a.is_rational() && b.is_rational())
            return {a.u_ * b.u_, Rat(0), common_disc(a, b)};
        Int m = common_disc(a, b);
        return {a.u_ * b.u_ + m * a.v_ * b.v_, a.u_ * b.v_ + a.v_ * b.u_, m};
    }
    friend CoeffNumber operator/(const CoeffNumber& a, const CoeffNumber& b)
    {
        if (b.is_zero())
            throw DomainError("division by zero coefficient");
        if (b.is_rational())
            return {a.u_ / b.u_, a.v_ / b.u_, a.m_};
        const Rat n = b.norm_down();
        CoeffNumber c = b.conj();
        return a * CoeffNumber(c.u_ / n, c.v_ / n, c.m_);
    }
    CoeffNumber& operator+=(const CoeffNumber& o) { return *this = *this + o; }
    CoeffNumber& operator-=(const CoeffNumber& o) { return *this = *this - o; }
    CoeffNumber& operator*=(const CoeffNumber& o) { return *this = *this * o; }

    friend bool operator==(const CoeffNumber& a, const CoeffNumber& b)
    {
        if (a.u_ != b.u_ || a.v_ != b.v_)
            return false;
        return a.v_ == 0 || a.m_ == b.m_;
    }

private:
    Rat u_;
    Rat v_;
    Int m_;
};

/// Inverse of CoeffNumber::str(): "p/q" or "p/q+r/s*sqrt(m)".
inline CoeffNumber parse_coeff(const std::string& text)
{
    const auto root = text.find("*sqrt(");
    if (root == std::string::npos)
        return CoeffNumber(parse_rat(text));
    if (text.back() != ')')
        throw DomainError("malformed coefficient " + text);
    const Int m(text.substr(root + 6, text.size() - root - 7));
    // the sign joining u and v is the last +/- before the sqrt part, not at position 0
    const auto sep = text.find_last_of("+-", root);
    if (sep == std::string::npos || sep == 0)
        throw DomainError("malformed coefficient " + text);
    const Rat u = parse_rat(text.substr(0, sep));
    Rat v = parse_rat(text.substr(sep + 1, root - sep - 1));
    if (text[sep] == '-')
        v = -v;
    return CoeffNumber(u, v, m);
}

} // namespace hmf
