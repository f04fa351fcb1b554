#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "reinsnet/orders.hpp"
#include "reinsnet/scenarios.hpp"
#include "reinsnet/treaties.hpp"

using namespace reinsnet;

namespace {

std::vector<double> lognormal_sample(std::size_t m, std::uint64_t seed) {
    const auto s = sample_scenarios({marginal::LogNormal{1.0, 0.8}}, copula::Independent{}, m, seed);
    return {s.column(0).begin(), s.column(0).end()};
}

std::vector<double> integer_sample(std::mt19937_64& gen, std::size_t m) {
    std::uniform_int_distribution<int> d(0, 12);
    std::vector<double> s(m);
    for (auto& x : s) x = d(gen);
    return s;
}

}  // namespace

TEST(Layer, Evaluation) {
    const LayerTreaty full{0.0, unbounded};
    EXPECT_EQ(ceded(full, std::vector<double>{1, 5}), (std::vector<double>{1, 5}));
    EXPECT_EQ(retained(full, std::vector<double>{1, 5}), (std::vector<double>{0, 0}));
    const LayerTreaty l{2.0, 1.0};
    EXPECT_EQ(l(4.0), 1.0);
    EXPECT_EQ(4.0 - l(4.0), 3.0);
    EXPECT_EQ(ceded(CededLossFunction::zero(), std::vector<double>{3, 7}), (std::vector<double>{0, 0}));
    EXPECT_TRUE(LayerTreaty(2.0, unbounded).stop_loss());
    EXPECT_THROW(LayerTreaty(-1.0, 1.0), ValidationError);
}

TEST(CededLoss, Validation) {
    EXPECT_THROW(CededLossFunction({1.0}, {0.5}), ValidationError);
    EXPECT_THROW(CededLossFunction({0.0, 1.0}, {0.5, 1.5}), ValidationError);
    EXPECT_THROW(CededLossFunction({0.0, 1.0, 1.0}, {0.5, 0.5, 0.5}), ValidationError);
    EXPECT_THROW(CededLossFunction({0.0, 1.0}, {-0.1, 0.5}), ValidationError);
    const CededLossFunction f({0.0, 2.0, 5.0}, {0.0, 1.0, 0.5});
    EXPECT_EQ(f(1.0), 0.0);
    EXPECT_EQ(f(4.0), 2.0);
    EXPECT_EQ(f(7.0), 4.0);
}

TEST(CededLoss, FromLayerAgrees) {
    for (const LayerTreaty& l : {LayerTreaty{0.0, 3.0}, LayerTreaty{2.0, 1.0}, LayerTreaty{2.0, unbounded}, LayerTreaty{1.0, 0.0}}) {
        const auto f = CededLossFunction::from_layer(l);
        for (double x = 0.0; x < 10.0; x += 0.25) EXPECT_EQ(f(x), l(x)) << x;
    }
}

TEST(CededLoss, ApplyPlusRetainedIsIdentity) {
    std::mt19937_64 gen(1);
    const CounterRng rng(2);
    for (std::uint64_t t = 0; t < 200; ++t) {
        CellEngine e(rng, t, 0);
        const auto f = random_treaty(e, 12.0);
        const auto s = integer_sample(gen, 30);
        const auto c = ceded(f, s);
        const auto r = retained(f, s);
        for (std::size_t i = 0; i < s.size(); ++i) {
            EXPECT_GE(c[i], 0.0);
            EXPECT_GE(r[i], 0.0);
            // exact on integers when f is a layer; within ulps for general kinks
            EXPECT_NEAR(c[i] + r[i], s[i], 4 * std::numeric_limits<double>::epsilon() * s[i]);
        }
        const LayerTreaty l{1.0, 3.0};
        for (double x : s) EXPECT_EQ(l(x) + (x - l(x)), x);
    }
}

TEST(RandomTreaty, GeneratesAdmissibleFunctions) {
    const CounterRng rng(3);
    std::vector<double> pts;
    for (int i = 0; i <= 2000; ++i) pts.push_back(i * 0.01);
    bool saw_zero_slope = false, saw_full_slope = false, saw_kinks = false;
    for (std::uint64_t t = 0; t < 500; ++t) {
        CellEngine e(rng, t, 0);
        const auto f = random_treaty(e, 20.0);
        EXPECT_TRUE(admissible_on(f, pts));
        for (double s : f.slopes()) {
            saw_zero_slope |= s == 0.0;
            saw_full_slope |= s == 1.0;
        }
        saw_kinks |= f.knots().size() > 4;
        EXPECT_LE(f.knots().size(), 8u);
    }
    EXPECT_TRUE(saw_zero_slope && saw_full_slope && saw_kinks);
}

TEST(BuildH, Examples) {
    std::vector<double> s{1, 2, 3, 4, 5, 6, 7, 8, 10, 20};
    const SortedSample ss(s);
    ASSERT_EQ(ss.var(0.1), 10.0);
    EXPECT_EQ(build_h(CededLossFunction::identity(), ss, 0.1), (LayerTreaty{0.0, 10.0}));
    const auto h0 = build_h(CededLossFunction::zero(), ss, 0.1);
    EXPECT_EQ(h0, (LayerTreaty{10.0, 0.0}));
    for (double x : s) EXPECT_EQ(h0(x), 0.0);
    const auto half = build_h(CededLossFunction::proportional(0.5), ss, 0.1);
    EXPECT_EQ(half, (LayerTreaty{5.0, 5.0}));
    for (double x : s) EXPECT_LE(half(x), 0.5 * x);
}

TEST(BuildH, DominanceAndVarPreservation) {
    const CounterRng rng(4);
    const auto sample = lognormal_sample(2000, 5);
    const SortedSample ss(sample);
    for (std::uint64_t t = 0; t < 300; ++t) {
        CellEngine e(rng, t, 0);
        const auto f = random_treaty(e, ss.values().back());
        const double alpha = 0.01 + 0.3 * e.uniform();
        const auto h = build_h(f, ss, alpha);
        const double v = ss.var(alpha);
        EXPECT_EQ(h(v), f(v));
        // h(v) == f(v) is exact, so pointwise dominance is only up to rounding in f
        for (double x : sample) ASSERT_LE(h(x), f(x) + 4 * std::numeric_limits<double>::epsilon() * x) << "trial " << t << " x " << x;
        EXPECT_TRUE(admissible_on(h, sample));
        const double vr = value_at_risk(retained(f, sample), alpha);
        EXPECT_NEAR(value_at_risk(retained(h, sample), alpha), vr, 1e-12 * (1.0 + vr));
        EXPECT_TRUE(check_st_samples(ceded(h, sample), ceded(f, sample)).holds);
    }
}

TEST(BuildH, ExactOnDyadicInstances) {
    // integer losses, integer knots and slopes in {0, 1/4, ..., 1}: every operation is exact
    std::mt19937_64 gen(21);
    std::uniform_int_distribution<int> quarter(0, 4), knot(1, 11), count(0, 4);
    for (int t = 0; t < 300; ++t) {
        const auto sample = integer_sample(gen, 40);
        const SortedSample ss(sample);
        std::vector<double> knots{0.0};
        for (int c = count(gen); c > 0; --c) knots.push_back(knot(gen));
        std::sort(knots.begin(), knots.end());
        knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
        std::vector<double> slopes;
        for (std::size_t i = 0; i < knots.size(); ++i) slopes.push_back(quarter(gen) / 4.0);
        const CededLossFunction f(knots, slopes);
        const double alpha = (1 + t % 20) / 40.0;
        const auto h = build_h(f, ss, alpha);
        for (double x : sample) ASSERT_LE(h(x), f(x)) << t;
        EXPECT_EQ(value_at_risk(retained(h, sample), alpha), value_at_risk(retained(f, sample), alpha));
        EXPECT_TRUE(check_st_samples(ceded(h, sample), ceded(f, sample), 0.0).holds);
        const auto lh = DiscreteLaw<double>::empirical(ceded(h, sample));
        const auto lf = DiscreteLaw<double>::empirical(ceded(f, sample));
        EXPECT_TRUE(check_st(lh, lf, 1e-12).holds);
    }
}

TEST(BuildK, ReducesToHWhenBetaIsZero) {
    const CounterRng rng(6);
    const SortedSample ss(lognormal_sample(500, 7));
    for (std::uint64_t t = 0; t < 50; ++t) {
        CellEngine e(rng, t, 0);
        const auto f = random_treaty(e, ss.values().back());
        EXPECT_EQ(build_k(f, ss, {0.05, 0.0}), build_h(f, ss, 0.05));
    }
}

TEST(BuildK, FixedPointOnOwnOutput) {
    const SortedSample ss(lognormal_sample(1000, 8));
    const RiskMeasureSpec spec{0.02, 0.1};
    const CounterRng rng(9);
    for (std::uint64_t t = 0; t < 50; ++t) {
        CellEngine e(rng, t, 0);
        const auto k = build_k(random_treaty(e, ss.values().back()), ss, spec);
        const auto again = build_k(k, ss, spec);
        EXPECT_NEAR(again.deductible, k.deductible, 1e-12 * (1 + k.deductible));
        EXPECT_NEAR(again.bound, k.bound, 1e-9 * (1 + k.bound));
    }
}

TEST(BuildK, TwoPointSampleMatchesGridScan) {
    const SortedSample ss(std::vector<double>{2.0, 6.0});
    const RiskMeasureSpec spec{0.25, 0.5};
    for (const auto& f : {CededLossFunction::identity(), CededLossFunction({0.0, 3.0}, {1.0, 0.25}),
                          CededLossFunction({0.0, 1.0}, {0.0, 0.5})}) {
        const auto k = build_k_detailed(f, ss, spec);
        // scan M on a 1e-4 grid over the bisection bracket
        const double lo = f(ss.var(0.75)), hi = f(ss.var(0.25));
        double best_m = lo, best_err = std::numeric_limits<double>::infinity();
        for (double m = lo; m <= hi + 1e-12; m += 1e-4) {
            const LayerTreaty cand{k.layer.deductible, m};
            const double err = std::abs(SortedSample(ceded(cand, ss.values())).rvar(spec) - k.target);
            if (err < best_err - 1e-15) {
                best_err = err;
                best_m = m;
            }
        }
        EXPECT_NEAR(k.layer.bound, best_m, 1e-4);
        EXPECT_NEAR(k.achieved, k.target, 1e-9 * (1 + k.target));
    }
}

TEST(BuildK, PreservesRvarAndIsIcxDominated) {
    const CounterRng rng(10);
    const auto sample = lognormal_sample(3000, 11);
    const SortedSample ss(sample);
    for (std::uint64_t t = 0; t < 200; ++t) {
        CellEngine e(rng, t, 0);
        const auto f = random_treaty(e, ss.values().back());
        const RiskMeasureSpec spec{0.3 * e.uniform(), 0.01 + 0.5 * e.uniform()};
        const auto k = build_k_detailed(f, ss, spec);
        const auto cf = ceded(f, sample);
        const auto ck = ceded(k.layer, sample);
        const double rf = SortedSample(cf).rvar(spec);
        const double rk = SortedSample(ck).rvar(spec);
        EXPECT_LE(std::abs(rf - rk), 1e-9 * (1.0 + rf)) << "trial " << t;
        EXPECT_TRUE(admissible_on(k.layer, sample));
        // deductible formula
        const double vlow = ss.var(spec.alpha + spec.beta);
        EXPECT_DOUBLE_EQ(k.layer.deductible, std::max(0.0, vlow - f(vlow)));
        // k(X) <=_icx f(X) on the empirical law
        const auto icx = check_icx_samples(ck, cf, 1e-9 * (1.0 + mean(cf)));
        EXPECT_TRUE(icx.holds) << "trial " << t << " margin " << icx.margin;
        const auto cut = check_cut_criterion(DiscreteLaw<double>::empirical(ck), DiscreteLaw<double>::empirical(cf));
        if (cut.holds) {
            EXPECT_TRUE(icx.holds);
        }
    }
}

TEST(BuildK, IcxDominanceExactOnDiscreteLaws) {
    // integer samples; laws compared exactly through the orders module
    std::mt19937_64 gen(12);
    const CounterRng rng(13);
    for (std::uint64_t t = 0; t < 200; ++t) {
        const auto sample = integer_sample(gen, 24);
        const SortedSample ss(sample);
        if (ss.values().back() == 0.0) continue;
        CellEngine e(rng, t, 0);
        const auto f = random_treaty(e, ss.values().back());
        const RiskMeasureSpec spec{0.125, 0.25};
        const auto k = build_k(f, ss, spec);
        const auto lk = DiscreteLaw<double>::empirical(ceded(k, sample));
        const auto lf = DiscreteLaw<double>::empirical(ceded(f, sample));
        EXPECT_TRUE(check_icx(lk, lf, 1e-9).holds) << "trial " << t;
    }
}
