#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pinbm/fit.hpp"
#include "pinbm/rng.hpp"
#include "pinbm/wick.hpp"
#include "pinbm/wick_oracle.hpp"

using namespace pinbm;

namespace {

MultiIndex mi(int k0, std::vector<int> ks) { return MultiIndex(k0, std::move(ks)); }

/// All admissible multi-indices with dim n, d(k) <= dmax, |k0| <= dmax.
std::vector<MultiIndex> enumerate_indices(int n, int dmax) {
    std::vector<MultiIndex> out;
    std::vector<int> ks(n, 0);
    const int space_cap = 2 * dmax;
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n) {
            int sum = 0;
            for (int k : ks) sum += k;
            for (int k0 = -dmax; k0 <= dmax; ++k0) {
                const int twice_d = 2 * k0 + sum;
                if (twice_d >= 0 && twice_d <= 2 * dmax) out.emplace_back(k0, ks);
            }
            return;
        }
        for (int k = 0; k <= space_cap; ++k) {
            ks[pos] = k;
            self(self, pos + 1);
        }
    };
    rec(rec, 0);
    return out;
}

}  // namespace

TEST(Degree, Examples) {
    EXPECT_EQ(mi(1, {2, 0}).degree(), HalfInt::from_int(2));
    EXPECT_EQ(mi(0, {0, 0, 0}).degree(), HalfInt::from_int(0));
    EXPECT_EQ(mi(-1, {3, 1}).degree(), HalfInt::from_int(1));
    EXPECT_EQ(mi(0, {1}).degree(), HalfInt::half(1));
    EXPECT_TRUE(mi(-1, {1}).degree().is_negative());
}

TEST(Degree, InvalidSpaceExponent) {
    EXPECT_THROW(mi(0, {-1}), std::invalid_argument);
    EXPECT_THROW(mi(0, {}), std::invalid_argument);
}

TEST(GaussianMoment, Examples) {
    EXPECT_DOUBLE_EQ(gaussian_moment(mi(0, {2}), 0.01), 0.01);
    EXPECT_DOUBLE_EQ(gaussian_moment(mi(0, {1, 2}), 0.37), 0.0);
    EXPECT_NEAR(gaussian_moment(mi(0, {2, 4}), 0.1), 3.0 * 0.001, 1e-18);
}

TEST(GaussianMoment, RejectsNegativeDegree) {
    EXPECT_THROW(gaussian_moment(mi(-1, {1}), 0.1), std::domain_error);
    EXPECT_THROW(gaussian_moment(mi(-2, {2}), 0.1), std::domain_error);
}

TEST(GaussianMoment, RejectsHugeExponent) {
    EXPECT_THROW(gaussian_moment(mi(0, {34}), 0.1), std::domain_error);
    EXPECT_NO_THROW(gaussian_moment(mi(-8, {32}), 0.1));
}

TEST(GaussianMoment, ExactScalingLaw) {
    for (const auto& k : enumerate_indices(2, 3)) {
        if (!k.all_space_even()) continue;
        for (double t : {1e-3, 0.04, 0.7}) {
            const double lhs = gaussian_moment(k, t);
            const double rhs = std::pow(t, k.degree().value()) * gaussian_moment(k, 1.0);
            EXPECT_DOUBLE_EQ(lhs, rhs);
        }
    }
}

TEST(Oracle, MatchesWickFormulaExamples) {
    EXPECT_NEAR(gaussian_moment_oracle(mi(0, {2}), 0.01, 1.0), 0.01, 1e-10);
    EXPECT_NEAR(gaussian_moment_oracle(mi(0, {4, 2}), 0.05), 3.0 * std::pow(0.05, 3), 1e-10);
    EXPECT_NEAR(gaussian_moment_oracle(mi(1, {0}), 0.2), 0.2, 1e-12);
}

TEST(Oracle, RejectsBadInput) {
    EXPECT_THROW(gaussian_moment_oracle(mi(0, {2, 0, 0, 0, 2}), 0.1), std::domain_error);
    EXPECT_THROW(gaussian_moment_oracle(mi(-1, {1}), 0.1), std::domain_error);
    EXPECT_THROW(gaussian_moment_oracle(mi(0, {2}), 0.1, 0.5), std::invalid_argument);
}

// Acceptance-style sweep at unit-test size: n <= 3, d <= 3, three t values.
TEST(Oracle, AgreesWithExactMomentEverywhere) {
    for (int n = 1; n <= 3; ++n) {
        for (const auto& k : enumerate_indices(n, 3)) {
            for (double t : {1e-3, 1e-2, 1e-1}) {
                const double exact = gaussian_moment(k, t);
                const double approx = gaussian_moment_oracle(k, t);
                EXPECT_LE(std::abs(exact - approx), 1e-10 * std::max(1.0, std::abs(exact)))
                    << "n=" << n << " k0=" << k.t_power << " t=" << t;
            }
        }
    }
}

TEST(ProjectEven, Examples) {
    Polynomial f(1);
    f.add_term(mi(0, {1}), 1.0);
    f.add_term(mi(0, {2}), 2.0);
    Polynomial p = project_even(f);
    ASSERT_EQ(p.terms().size(), 1u);
    EXPECT_DOUBLE_EQ(p.terms().begin()->second, 2.0);

    Polynomial c = Polynomial::constant(2, 5.0);
    EXPECT_EQ(project_even(c).terms(), c.terms());

    Polynomial tx(1);
    tx.add_term(mi(1, {1}), 3.0);
    EXPECT_TRUE(project_even(tx).empty());
}

TEST(TruncateDegree, Examples) {
    Polynomial f = Polynomial::constant(1, 1.0);
    f.add_term(mi(0, {2}), 1.0);
    f.add_term(mi(0, {4}), 1.0);
    Polynomial tr = truncate_degree(f, HalfInt::half(3));
    EXPECT_EQ(tr.terms().size(), 2u);
    EXPECT_DOUBLE_EQ(gaussian_moment(tr, 1.0), 2.0);

    Polynomial g(1);
    g.add_term(mi(1, {2}), 1.0);  // degree 2
    EXPECT_TRUE(truncate_degree(g, HalfInt::half(3)).empty());

    Polynomial h(2);
    h.add_term(mi(0, {1, 1}), 1.0);  // degree 1, odd: kept here, killed by Q
    EXPECT_EQ(truncate_degree(h, HalfInt::half(3)).terms().size(), 1u);

    Polynomial bad(1);
    bad.add_term(mi(-1, {1}), 1.0);
    EXPECT_THROW(truncate_degree(bad, HalfInt::half(3)), std::domain_error);
}

TEST(Projections, Idempotent) {
    CounterRng rng = CounterRng::stream(7, 0);
    for (int trial = 0; trial < 50; ++trial) {
        Polynomial f(2);
        for (int i = 0; i < 6; ++i) {
            int k0 = static_cast<int>(rng.next_u64() % 3) - 1;
            std::vector<int> ks = {static_cast<int>(rng.next_u64() % 4),
                                   static_cast<int>(rng.next_u64() % 4)};
            if (2 * k0 + ks[0] + ks[1] < 0) k0 = 0;
            f.add_term(MultiIndex(k0, ks), rng.normal());
        }
        Polynomial p1 = project_even(f);
        EXPECT_EQ(project_even(p1).terms(), p1.terms());
        Polynomial t1 = truncate_degree(f, HalfInt::half(3));
        EXPECT_EQ(truncate_degree(t1, HalfInt::half(3)).terms(), t1.terms());
    }
}

TEST(RatioAsymptotics, Examples) {
    Polynomial f = Polynomial::constant(1, 2.0);
    f.add_term(mi(0, {2}), 1.0);
    Polynomial h = Polynomial::constant(1, 1.0);
    h.add_term(mi(0, {2}), 1.0);
    EXPECT_DOUBLE_EQ(ratio_asymptotics(f, h, 0.1), 0.1);

    Polynomial fc = Polynomial::constant(1, 7.0);
    EXPECT_DOUBLE_EQ(ratio_asymptotics(fc, h, 0.5), 0.0);

    // direct-quotient cross-check with the quadrature oracle
    Polynomial f2 = Polynomial::constant(2, 3.0);
    f2.add_term(mi(0, {2, 0}), 1.0);
    f2.add_term(mi(0, {0, 2}), 1.0);
    Polynomial h2 = Polynomial::constant(2, 1.0);
    const double t = 0.01;
    EXPECT_DOUBLE_EQ(ratio_asymptotics(f2, h2, t), 0.02);
    const double quotient = gaussian_moment_oracle(f2 * h2, t) / gaussian_moment_oracle(h2, t);
    EXPECT_NEAR(quotient - 3.0, 0.02, 1e-10);
}

TEST(RatioAsymptotics, StructuralValidation) {
    Polynomial h = Polynomial::constant(1, 1.0);
    Polynomial f_bad(1);
    f_bad.add_term(mi(0, {4}), 1.0);  // degree 2
    EXPECT_THROW(ratio_asymptotics(f_bad, h, 0.1), std::invalid_argument);

    Polynomial f_bad0(1);
    f_bad0.add_term(mi(-1, {2}), 1.0);  // degree 0 but not constant
    EXPECT_THROW(ratio_asymptotics(f_bad0, h, 0.1), std::invalid_argument);

    Polynomial f = Polynomial::constant(1, 1.0);
    Polynomial h_bad = Polynomial::constant(1, 2.0);
    EXPECT_THROW(ratio_asymptotics(f, h_bad, 0.1), std::invalid_argument);
    Polynomial h_bad2(1);
    h_bad2.add_term(mi(0, {2}), 1.0);  // missing unit
    EXPECT_THROW(ratio_asymptotics(f, h_bad2, 0.1), std::invalid_argument);
}

// G_t(f) - G_t(Q [f]) should vanish at order >= 3/2 in t for admissible f;
// with even monomials only, the leftover is O(t^2), so a fitted exponent of
// at least 1.4 is expected whenever the difference is measurable.
TEST(WickAlgebra, TruncationErrorOrder) {
    CounterRng rng = CounterRng::stream(11, 0);
    const std::vector<double> ts = {1e-4, 2.5e-4, 6e-4, 1.5e-3, 4e-3, 1e-2};
    int measurable = 0;
    for (int trial = 0; trial < 20; ++trial) {
        Polynomial f(2);
        for (int i = 0; i < 5; ++i) {
            int k0 = static_cast<int>(rng.next_u64() % 2);
            std::vector<int> ks = {static_cast<int>(rng.next_u64() % 5),
                                   static_cast<int>(rng.next_u64() % 5)};
            const int twice = 2 * k0 + ks[0] + ks[1];
            if (twice < 0 || twice > 4) continue;  // keep degree <= 2
            f.add_term(MultiIndex(k0, ks), rng.normal());
        }
        if (f.empty()) continue;
        const Polynomial reduced = project_even(truncate_degree(f, HalfInt::half(3)));
        std::vector<double> errs;
        for (double t : ts) errs.push_back(std::abs(gaussian_moment_oracle(f, t) - gaussian_moment(reduced, t)));
        double emax = 0.0;
        for (double e : errs) emax = std::max(emax, e);
        if (emax < 1e-13) continue;  // truncation removed nothing even
        auto fit = loglog_fit(std::vector<double>(ts), std::move(errs), false);
        EXPECT_GE(fit.slope, 1.4);
        ++measurable;
    }
    EXPECT_GE(measurable, 5);
}

TEST(DoubleFactorial, Values) {
    EXPECT_EQ(double_factorial(-1), 1u);
    EXPECT_EQ(double_factorial(0), 1u);
    EXPECT_EQ(double_factorial(1), 1u);
    EXPECT_EQ(double_factorial(3), 3u);
    EXPECT_EQ(double_factorial(5), 15u);
    EXPECT_EQ(double_factorial(7), 105u);
    EXPECT_THROW(double_factorial(33), std::domain_error);
}
