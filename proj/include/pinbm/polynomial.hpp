#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "pinbm/multi_index.hpp"

namespace pinbm {

/// Sparse real polynomial in (t, xi_1..xi_n). Zero coefficients are never
/// stored; all term indices share the same dimension n.
class Polynomial {
public:
    explicit Polynomial(int dim) : dim_(dim) {
        if (dim < 1) throw std::invalid_argument("Polynomial: dimension must be >= 1");
    }

    static Polynomial constant(int dim, double c) {
        Polynomial p(dim);
        p.add_term(MultiIndex(0, std::vector<int>(dim, 0)), c);
        return p;
    }

    static Polynomial monomial(const MultiIndex& k, double c) {
        Polynomial p(k.dim());
        p.add_term(k, c);
        return p;
    }

    int dim() const { return dim_; }
    const std::map<MultiIndex, double>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    void add_term(const MultiIndex& k, double c) {
        if (k.dim() != dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
        if (c == 0.0) return;
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0.0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& other) {
        require_same_dim(other);
        for (const auto& [k, c] : other.terms_) add_term(k, c);
        return *this;
    }

    Polynomial& operator*=(double s) {
        if (s == 0.0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, c] : terms_) c *= s;
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_same_dim(b);
        Polynomial out(a.dim_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                MultiIndex k = ka;
                k.t_power += kb.t_power;
                for (int i = 0; i < a.dim_; ++i) k.space[i] += kb.space[i];
                out.add_term(k, ca * cb);
            }
        return out;
    }

    HalfInt min_degree() const {
        if (terms_.empty()) throw std::logic_error("Polynomial: min_degree of zero polynomial");
        HalfInt m = terms_.begin()->first.degree();
        for (const auto& [k, c] : terms_) m = std::min(m, k.degree());
        return m;
    }

    /// Terms of exact degree d.
    Polynomial homogeneous_component(HalfInt d) const {
        Polynomial out(dim_);
        for (const auto& [k, c] : terms_)
            if (k.degree() == d) out.add_term(k, c);
        return out;
    }

    double constant_coefficient() const {
        for (const auto& [k, c] : terms_)
            if (k.is_constant()) return c;
        return 0.0;
    }

private:
    void require_same_dim(const Polynomial& other) const {
        if (dim_ != other.dim_) throw std::invalid_argument("Polynomial: dimension mismatch");
    }

    int dim_;
    std::map<MultiIndex, double> terms_;
};

/// Projection Q onto the subalgebra of monomials with all-even space
/// exponents. Idempotent.
inline Polynomial project_even(const Polynomial& f) {
    Polynomial out(f.dim());
    for (const auto& [k, c] : f.terms())
        if (k.all_space_even()) out.add_term(k, c);
    return out;
}

/// Drops all terms of degree >= cutoff (the quotient by the ideal of high
/// degree). Every term of f must have degree >= 0.
inline Polynomial truncate_degree(const Polynomial& f, HalfInt cutoff = HalfInt::half(3)) {
    Polynomial out(f.dim());
    for (const auto& [k, c] : f.terms()) {
        if (k.degree().is_negative())
            throw std::domain_error("truncate_degree: term of negative degree");
        if (k.degree() < cutoff) out.add_term(k, c);
    }
    return out;
}

}  // namespace pinbm
