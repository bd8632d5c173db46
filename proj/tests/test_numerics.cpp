#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <symtrace/annihilators.hpp>
#include <symtrace/numerics.hpp>
#include <symtrace/transport.hpp>

#include "helpers.hpp"

using namespace symtrace;

namespace {

bool close_rel(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

std::vector<std::vector<Rational>> random_sigmas(std::uint64_t seed, int k, int count) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Rational>> out;
    for (int i = 0; i < count; ++i) out.push_back(th::random_point(rng, k, -3, 3));
    return out;
}

cplx root_sum(const AnalyticFn& fn, const ComplexVec& sigma) {
    cplx acc = 0;
    for (const auto& x : poly_roots(sigma)) acc += cplx(fn.f(lcplx(x)));
    return acc;
}

}  // namespace

TEST(Roots, SimpleQuadratic) {
    auto r = poly_roots({3.0, 2.0});
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    EXPECT_NEAR(std::abs(r[0] - 1.0), 0, 1e-12);
    EXPECT_NEAR(std::abs(r[1] - 2.0), 0, 1e-12);
}

TEST(Roots, AllZero) {
    for (int k = 1; k <= 4; ++k)
        for (const auto& x : poly_roots(ComplexVec(static_cast<std::size_t>(k), 0.0))) EXPECT_LT(std::abs(x), 1e-3);
}

TEST(Roots, DoubleRoot) {
    for (const auto& x : poly_roots({2.0, 1.0})) EXPECT_NEAR(std::abs(x - 1.0), 0, 1e-7);
}

TEST(Roots, RejectsBadInput) {
    EXPECT_THROW(poly_roots({}), std::invalid_argument);
    EXPECT_THROW(poly_roots({std::nan(""), 1.0}), std::invalid_argument);
    EXPECT_THROW(poly_roots({INFINITY}), std::invalid_argument);
}

TEST(Roots, ResidualAtRandomPoints) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 1; k <= 6; ++k)
        for (int t = 0; t < 10; ++t) {
            ComplexVec s;
            for (int h = 0; h < k; ++h) s.emplace_back(u(rng), u(rng));
            for (const auto& x : poly_roots(s))
                EXPECT_LE(std::abs(eval_char_poly(s, x).first), 1e-10 * std::pow(std::max(1.0, std::abs(x)), k));
        }
}

TEST(Contour, ExpAtOneTwo) {
    const auto r = trace_contour(AnalyticFn::exp(), {3.0, 2.0});
    EXPECT_NEAR(std::abs(r.value - (std::exp(1.0) + std::exp(2.0))), 0, 1e-9);
    EXPECT_LT(r.difference, 1e-9);
}

TEST(Contour, ConstantGivesK) {
    for (int k = 1; k <= 5; ++k) {
        ComplexVec s(static_cast<std::size_t>(k), 0.5);
        EXPECT_NEAR(std::abs(trace_contour(AnalyticFn::power(0), s).value - static_cast<double>(k)), 0, 1e-12);
    }
}

TEST(Contour, PowersMatchNewton) {
    const std::vector<Rational> sr{Rational(3), Rational(-1), Rational(1, 2)};
    const auto s = to_complex(to_doubles(sr));
    NewtonFamily fam(3);
    for (int m = 0; m <= 8; ++m) {
        const double expect = fam.newton(m).evaluate(sr).to_double();
        EXPECT_TRUE(close_rel(trace_contour(AnalyticFn::power(m), s).value, expect, 1e-9)) << "m=" << m;
    }
}

TEST(Contour, RejectsSmallRadius) {
    const ComplexVec s{3.0, 2.0};
    const double bound = 2 * root_radius(s);
    EXPECT_THROW(trace_contour(AnalyticFn::exp(), s, {bound, 256}), std::invalid_argument);
    EXPECT_THROW(trace_contour(AnalyticFn::exp(), s, {bound * 0.5, 256}), std::invalid_argument);
    EXPECT_THROW(trace_contour(AnalyticFn::exp(), s, {bound * 1.5, 100}), std::invalid_argument);
    EXPECT_THROW(dn_contour(1, s, {bound, 256}), std::invalid_argument);
}

TEST(Contour, ParseFunctionHandles) {
    EXPECT_EQ(AnalyticFn::parse("exp").name, "exp");
    EXPECT_EQ(AnalyticFn::parse("pow:3").name, "pow:3");
    EXPECT_THROW(AnalyticFn::parse("cosh"), std::invalid_argument);
    EXPECT_THROW(AnalyticFn::parse("pow:-1"), std::invalid_argument);
}

TEST(Contour, BothFormsAgree) {
    for (int k = 1; k <= 5; ++k)
        for (const auto& sr : random_sigmas(100 + k, k, 10)) {
            const auto s = to_complex(to_doubles(sr));
            for (const auto& fn : {AnalyticFn::exp(), AnalyticFn::sin(), AnalyticFn::power(5)}) {
                const auto r = trace_contour(fn, s);
                EXPECT_TRUE(close_rel(r.value, r.value_pp, 1e-9)) << fn.name << " k=" << k;
            }
        }
}

TEST(Contour, RootSumOracle) {
    for (int k = 1; k <= 4; ++k)
        for (const auto& sr : random_sigmas(200 + k, k, 10)) {
            const auto s = to_complex(to_doubles(sr));
            for (const auto& fn : {AnalyticFn::exp(), AnalyticFn::sin(), AnalyticFn::power(4), AnalyticFn::power(7)})
                EXPECT_TRUE(close_rel(trace_contour(fn, s).value, root_sum(fn, s), 1e-8)) << fn.name << " k=" << k;
        }
}

TEST(Contour, SymbolicBridge) {
    for (int k = 1; k <= 4; ++k) {
        NewtonFamily fam(k);
        for (const auto& sr : random_sigmas(300 + k, k, 20)) {
            const auto s = to_complex(to_doubles(sr));
            for (int m = 0; m <= 8; ++m) {
                const double n = fam.newton(m).evaluate(sr).to_double();
                const double dn = fam.derived(m).evaluate(sr).to_double();
                EXPECT_TRUE(close_rel(trace_contour(AnalyticFn::power(m), s).value, n, 1e-8)) << "N k=" << k << " m=" << m;
                EXPECT_TRUE(close_rel(dn_contour(m, s), dn, 1e-8)) << "DN k=" << k << " m=" << m;
            }
        }
    }
}

TEST(Contour, QuadratureConvergesGeometrically) {
    const ComplexVec s{1.5, -0.75, 0.25};
    const double R = 2.25 * root_radius(s);
    for (int m : {0, 2, 5, 8}) {
        const cplx exact = root_sum(AnalyticFn::power(m), s);
        double prev = -1;
        for (int n = 16; n <= 256; n *= 2) {
            const double err = std::abs(trace_contour(AnalyticFn::power(m), s, {R, n}).value_pp - exact);
            const double floor = 1e-12 * std::max(1.0, std::abs(exact));
            if (prev > floor) {
                EXPECT_LE(err, std::max(prev / 100, floor)) << "m=" << m << " n=" << n;
            }
            prev = err;
        }
    }
}

TEST(DerivedContour, Seeds) {
    for (int k = 2; k <= 4; ++k)
        for (const auto& sr : random_sigmas(400 + k, k, 5)) {
            const auto s = to_complex(to_doubles(sr));
            for (int m = -k + 1; m <= -1; ++m) EXPECT_LT(std::abs(dn_contour(m, s)), 1e-10);
            EXPECT_NEAR(std::abs(dn_contour(0, s) - 1.0), 0, 1e-12);
        }
    EXPECT_THROW(dn_contour(-2, {1.0, 1.0}), std::invalid_argument);
}

TEST(DerivedContour, KnownValue) { EXPECT_NEAR(std::abs(dn_contour(2, {3.0, 2.0}) - 7.0), 0, 1e-10); }

TEST(NablaP, MatchesRootDefinition) {
    std::mt19937_64 rng(7);
    for (int k = 2; k <= 4; ++k) {
        const Poly disc = discriminant(k);
        int done = 0;
        while (done < 20) {
            const auto sr = th::random_point(rng, k, -3, 3);
            if (std::abs(disc.evaluate(to_doubles(sr))) < 1e-3) continue;
            ++done;
            const auto s = to_complex(to_doubles(sr));
            for (int p = 0; p < k; ++p) {
                const auto num = nabla_p_on_sigmas(p, s);
                const WeylOp sym = nabla_p_as_partial(k, p);
                for (int h = 1; h <= k; ++h) {
                    const double expect = sym.apply(th::s(k, h)).evaluate(to_doubles(sr));
                    EXPECT_NEAR(std::abs(num[static_cast<std::size_t>(h - 1)] - expect), 0, 1e-8)
                        << "k=" << k << " p=" << p << " h=" << h;
                }
            }
        }
    }
}

TEST(FiniteDifference, T2KillsTraceExp) {
    const std::vector<double> s0{3, 2};
    const auto q = fd_quadrature(s0, 1e-2);
    const auto r = fd_annihilation_check(op_T(2, 2), trace_function(AnalyticFn::exp(), q), s0, 1e-2);
    EXPECT_TRUE(r.pass) << r.residual << " scale " << r.scale;
}

TEST(FiniteDifference, A131KillsTraceExp) {
    const std::vector<double> s0{1, -2, 0.5};
    const auto q = fd_quadrature(s0, 1e-2);
    const auto r = fd_annihilation_check(op_A(3, 1, 3, 1), trace_function(AnalyticFn::exp(), q), s0, 1e-2);
    EXPECT_TRUE(r.pass) << r.residual << " scale " << r.scale;
}

TEST(FiniteDifference, WholeSystemAtRandomPoints) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int k = 2; k <= 4; ++k) {
        const auto gens = GeneratorSet::system(k);
        for (int t = 0; t < 3; ++t) {
            std::vector<double> s0;
            for (int h = 0; h < k; ++h) s0.push_back(u(rng));
            const auto q = fd_quadrature(s0, 1e-2);
            const auto F = trace_function(AnalyticFn::exp(), q);
            for (const auto& g : gens.gens) {
                const auto r = fd_annihilation_check(g.op, F, s0, 1e-2);
                EXPECT_TRUE(r.pass) << g.id << " residual " << r.residual;
            }
        }
    }
}

TEST(FiniteDifference, ControlFails) {
    const std::vector<double> s0{3, 2};
    const auto q = fd_quadrature(s0, 1e-2);
    const auto r = fd_annihilation_check(th::d(2, 1), trace_function(AnalyticFn::exp(), q), s0, 1e-2);
    EXPECT_FALSE(r.pass);
    EXPECT_GT(r.residual, 1e3 * 1e-6 * r.scale);
}

TEST(FiniteDifference, Rejections) {
    const auto q = fd_quadrature({2, 1}, 1e-2);
    const auto F = trace_function(AnalyticFn::exp(), q);
    EXPECT_THROW(fd_annihilation_check(op_T(2, 2), F, {2, 1}, 1e-2), std::invalid_argument);  // double root
    EXPECT_THROW(fd_annihilation_check(op_T(2, 2), F, {3, 2}, -1), std::invalid_argument);
    EXPECT_THROW(fd_annihilation_check(op_T(2, 2) * th::d(2, 1), F, {3, 2}, 1e-2), std::invalid_argument);
    EXPECT_THROW(fd_annihilation_check(th::dx(2, 1), F, {3, 2}, 1e-2), std::invalid_argument);
}
