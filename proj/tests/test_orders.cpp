#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "reinsnet/orders.hpp"
#include "reinsnet/scenarios.hpp"

using namespace reinsnet;
using R = Rational;

namespace {

DiscreteLaw<R> point(long long v) { return DiscreteLaw<R>::from_pairs({{R(v), R(1)}}); }

DiscreteLaw<R> random_law(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> atom(0, 6), weight(1, 5), count(1, 4);
    std::vector<std::pair<R, R>> pairs;
    std::vector<int> w;
    const int k = count(gen);
    int total = 0;
    for (int i = 0; i < k; ++i) {
        w.push_back(weight(gen));
        total += w.back();
    }
    for (int i = 0; i < k; ++i) pairs.emplace_back(R(atom(gen)), R(w[i], total));
    return DiscreteLaw<R>::from_pairs(pairs);
}

DiscreteJointDistribution<R> random_joint(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> atom(0, 3), weight(1, 4), count(1, 6);
    std::map<std::vector<R>, int> cells;
    const int k = count(gen);
    for (int i = 0; i < k; ++i) cells[{R(atom(gen)), R(atom(gen))}] += weight(gen);
    int total = 0;
    for (const auto& [a, w] : cells) total += w;
    std::vector<std::vector<R>> atoms;
    std::vector<R> probs;
    for (const auto& [a, w] : cells) {
        atoms.push_back(a);
        probs.push_back(R(w, total));
    }
    return {atoms, probs};
}

DiscreteJointDistribution<R> product(const DiscreteLaw<R>& a, const DiscreteLaw<R>& b) {
    std::vector<std::vector<R>> atoms;
    std::vector<R> probs;
    for (std::size_t i = 0; i < a.atoms.size(); ++i)
        for (std::size_t j = 0; j < b.atoms.size(); ++j) {
            atoms.push_back({a.atoms[i], b.atoms[j]});
            probs.push_back(a.probs[i] * b.probs[j]);
        }
    return {atoms, probs};
}

DiscreteJointDistribution<R> comonotone_pair() {
    return {{{R(0), R(1)}, {R(1), R(3)}, {R(2), R(4)}, {R(5), R(9)}}, {R(1, 4), R(1, 8), R(3, 8), R(1, 4)}};
}

}  // namespace

TEST(StOrder, Examples) {
    EXPECT_TRUE(check_st(point(1), point(2)).holds);
    EXPECT_FALSE(check_st(point(2), point(1)).holds);
    std::mt19937_64 gen(1);
    for (int i = 0; i < 50; ++i) {
        const auto x = random_law(gen);
        const auto v = check_st(x, x);
        EXPECT_TRUE(v.holds);
        EXPECT_EQ(v.margin, 0.0);
    }
}

TEST(StOrder, ImpliesIcx) {
    std::mt19937_64 gen(2);
    int st_pairs = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto x = random_law(gen), y = random_law(gen);
        if (check_st(x, y).holds) {
            ++st_pairs;
            EXPECT_TRUE(check_icx(x, y).holds);
        }
    }
    EXPECT_GT(st_pairs, 100);
}

TEST(StOrder, WitnessOnViolation) {
    const auto v = check_st(point(2), point(1));
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.witness->threshold, 1.0);
    EXPECT_LT(v.margin, 0.0);
}

TEST(IcxOrder, ShiftAndMarginals) {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 100; ++i) {
        const auto x = random_law(gen);
        auto shifted = x;
        for (auto& a : shifted.atoms) a += R(1);
        EXPECT_TRUE(check_icx(x, shifted).holds);
        EXPECT_FALSE(check_icx(shifted, x).holds);
    }
}

TEST(IcxOrder, MatchesBruteForceStopLossScan) {
    // oracle: compare stop-loss transforms on a fine rational grid
    std::mt19937_64 gen(4);
    for (int i = 0; i < 300; ++i) {
        const auto x = random_law(gen), y = random_law(gen);
        bool oracle = true;
        for (int k = -4; k <= 28; ++k) oracle = oracle && !(y.stop_loss(R(k, 4)) < x.stop_loss(R(k, 4)));
        EXPECT_EQ(check_icx(x, y).holds, oracle);
    }
}

TEST(CutCriterion, PointMasses) {
    const auto v = check_cut_criterion(point(1), point(2));
    EXPECT_TRUE(v.holds);
    ASSERT_TRUE(v.crossing_point.has_value());
    // F_1 - F_2 is <= 0 below 1 and >= 0 from 1 on; any t0 <= 1 separates the CDFs
    EXPECT_EQ(*v.crossing_point, 1.0);
}

TEST(CutCriterion, DoubleCrossingIsRejected) {
    // X uniform on {1,3}; Y on {0,2,4} with weights 1/4,1/2,1/4: equal means, CDFs cross twice
    const auto x = DiscreteLaw<R>::from_pairs({{R(1), R(1, 2)}, {R(3), R(1, 2)}});
    const auto y = DiscreteLaw<R>::from_pairs({{R(0), R(1, 4)}, {R(2), R(1, 2)}, {R(4), R(1, 4)}});
    EXPECT_EQ(x.mean(), y.mean());
    EXPECT_FALSE(check_cut_criterion(x, y).holds);
    // the criterion is only sufficient
    EXPECT_TRUE(check_icx(x, y).holds);
}

TEST(CutCriterion, SufficientForIcx) {
    std::mt19937_64 gen(5);
    int cut_pairs = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto x = random_law(gen), y = random_law(gen);
        if (check_cut_criterion(x, y).holds) {
            ++cut_pairs;
            EXPECT_TRUE(check_icx(x, y).holds);
        }
    }
    EXPECT_GT(cut_pairs, 100);
}

TEST(Pod, Examples) {
    EXPECT_TRUE(check_pod(example_2_13().y).holds);
    const auto ind = check_pod(product(DiscreteLaw<R>::from_pairs({{R(0), R(1, 3)}, {R(2), R(2, 3)}}),
                                       DiscreteLaw<R>::from_pairs({{R(1), R(1, 2)}, {R(5), R(1, 2)}})));
    EXPECT_TRUE(ind.holds);
    EXPECT_EQ(ind.margin, 0.0);
    EXPECT_TRUE(check_pod(comonotone_pair()).holds);
    // counter-monotone pair violates it
    const DiscreteJointDistribution<R> anti{{{R(0), R(1)}, {R(1), R(0)}}, {R(1, 2), R(1, 2)}};
    const auto v = check_pod(anti);
    EXPECT_FALSE(v.holds);
    EXPECT_TRUE(v.witness.has_value());
}

TEST(Pod, FrechetUpperBoundOracle) {
    // for comonotone laws P(X<=x, Y<=y) = min(F(x), G(y)) >= F(x) G(y)
    const auto c = comonotone_pair();
    const auto f = c.marginal(0), g = c.marginal(1);
    for (const auto& a : f.atoms)
        for (const auto& b : g.atoms) {
            R joint(0);
            for (std::size_t i = 0; i < c.atoms.size(); ++i)
                if (!(a < c.atoms[i][0]) && !(b < c.atoms[i][1])) joint += c.probs[i];
            EXPECT_EQ(joint, std::min(f.cdf(a), g.cdf(b)));
        }
}

TEST(Pds, Examples) {
    const auto e = check_pds_bivariate(example_2_13().y);
    EXPECT_FALSE(e.holds);
    EXPECT_TRUE(check_pds_bivariate(product(DiscreteLaw<R>::from_pairs({{R(0), R(1, 3)}, {R(2), R(2, 3)}}),
                                            DiscreteLaw<R>::from_pairs({{R(1), R(1, 2)}, {R(5), R(1, 2)}})))
                    .holds);
    EXPECT_TRUE(check_pds_bivariate(comonotone_pair()).holds);
    const DiscreteJointDistribution<R> three{{{R(0), R(0), R(0)}}, {R(1)}};
    EXPECT_THROW(check_pds_bivariate(three), ValidationError);
}

TEST(Pds, ImpliesPod) {
    std::mt19937_64 gen(6);
    int pds_laws = 0;
    for (int i = 0; i < 3000; ++i) {
        const auto j = random_joint(gen);
        if (check_pds_bivariate(j).holds) {
            ++pds_laws;
            EXPECT_TRUE(check_pod(j).holds);
        }
    }
    EXPECT_GT(pds_laws, 100);
}

TEST(Pds, BruteForceConditionalScan) {
    // oracle: recompute conditional survival probabilities directly
    std::mt19937_64 gen(7);
    for (int i = 0; i < 500; ++i) {
        const auto j = random_joint(gen);
        bool oracle = true;
        for (std::size_t c = 0; c < 2; ++c) {
            const auto cond = j.marginal(c);
            for (const auto& u : cond.atoms)
                for (const auto& v : cond.atoms) {
                    if (!(u < v)) continue;
                    for (int t = 0; t <= 3; ++t) {
                        R su(0), sv(0), pu(0), pv(0);
                        for (std::size_t a = 0; a < j.atoms.size(); ++a) {
                            if (j.atoms[a][c] == u) {
                                pu += j.probs[a];
                                if (R(t) < j.atoms[a][1 - c]) su += j.probs[a];
                            }
                            if (j.atoms[a][c] == v) {
                                pv += j.probs[a];
                                if (R(t) < j.atoms[a][1 - c]) sv += j.probs[a];
                            }
                        }
                        oracle = oracle && !(sv / pv < su / pu);
                    }
                }
        }
        EXPECT_EQ(check_pds_bivariate(j).holds, oracle);
    }
}

TEST(PodNotPdsCounterexample, Verdicts) {
    const auto e = example_2_13();
    EXPECT_TRUE(e.pod.holds);
    EXPECT_FALSE(e.pds.holds);
    ASSERT_TRUE(e.pds.violation.has_value());
    const auto& w = *e.pds.violation;
    EXPECT_EQ(w.conditioning, 1u);
    EXPECT_EQ(w.lower_value, R(1));
    EXPECT_EQ(w.upper_value, R(3));
    EXPECT_EQ(w.threshold, R(0));
    EXPECT_EQ(w.prob_at_lower, R(1));
    EXPECT_EQ(w.prob_at_upper, R(0));
    EXPECT_EQ(e.pds.witness->description, "P(X1>0|X2=1) = 1 > 0 = P(X1>0|X2=3)");
    EXPECT_TRUE(e.icx_marginal_1.holds);
    EXPECT_TRUE(e.icx_marginal_2.holds);
    EXPECT_TRUE(e.cut_marginal_2.holds);
    EXPECT_TRUE(e.icx_sum_reversed.holds);
    EXPECT_TRUE(e.same_copula);
}

TEST(PodNotPdsCounterexample, SumsCoincideInLaw) {
    // Both sums have law {0:3, 1:1, 2:2, 3:2, 4:1, 5:3}/12, so the reversed
    // order holds with equality and the forward order holds as well.
    const auto e = example_2_13();
    EXPECT_TRUE(e.sums_equal_in_law);
    EXPECT_TRUE(e.icx_sum_forward.holds);
    const auto s = e.y.sum_law();
    const std::vector<R> expected{R(3, 12), R(1, 12), R(2, 12), R(2, 12), R(1, 12), R(3, 12)};
    EXPECT_EQ(s.probs, expected);
}

TEST(PodNotPdsCounterexample, ProbabilitiesAreTwelfths) {
    const auto e = example_2_13();
    for (const auto& p : e.y.probs) EXPECT_EQ((p * R(12)).denominator(), 1);
    for (const auto& p : e.x.probs) EXPECT_EQ((p * R(12)).denominator(), 1);
    EXPECT_EQ(e.x.marginal(1).atoms, (std::vector<R>{R(0), R(2), R(4)}));
}

TEST(SampleChecks, IdenticalMatrices) {
    const auto x = sample_scenarios({marginal::LogNormal{0, 1}, marginal::LogNormal{0, 1}}, copula::Independent{}, 2000, 1);
    const auto st = mc_check_sum_st(x, x);
    EXPECT_TRUE(st.holds);
    EXPECT_EQ(st.margin, 0.0);
    const auto icx = mc_check_sum_icx(x, x, 0.0);
    EXPECT_TRUE(icx.holds);
    EXPECT_EQ(icx.margin, 0.0);
}

TEST(SampleChecks, PathwiseShift) {
    const auto x = sample_scenarios({marginal::LogNormal{0, 1}, marginal::Pareto{3, 1}}, equicorrelated_gaussian(2, 0.5), 20000, 2);
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < 2; ++j) {
        cols.emplace_back(x.column(j).begin(), x.column(j).end());
        for (auto& v : cols.back()) v += 1.0;
    }
    const auto y = ScenarioMatrix::from_columns(cols);
    EXPECT_TRUE(mc_check_sum_st(x, y, 0.0).holds);
    EXPECT_TRUE(mc_check_sum_icx(x, y, 0.0).holds);
    EXPECT_FALSE(mc_check_sum_st(y, x, 0.0).holds);
}

TEST(SampleChecks, ShapeMismatch) {
    const auto a = ScenarioMatrix::from_columns({{1.0, 2.0}});
    const auto b = ScenarioMatrix::from_columns({{1.0, 2.0}, {1.0, 2.0}});
    EXPECT_THROW(mc_check_sum_st(a, b), ValidationError);
    EXPECT_THROW(mc_check_sum_icx(a, b, 0.0), ValidationError);
}

TEST(SampleChecks, IcxAgreesWithExactLaws) {
    std::mt19937_64 gen(8);
    std::uniform_int_distribution<int> d(0, 9);
    for (int i = 0; i < 300; ++i) {
        std::vector<double> x(8), y(8);
        for (auto& v : x) v = d(gen);
        for (auto& v : y) v = d(gen);
        EXPECT_EQ(check_icx_samples(x, y, 1e-12).holds,
                  check_icx(DiscreteLaw<double>::empirical(x), DiscreteLaw<double>::empirical(y), 1e-12).holds);
    }
}

TEST(SampleChecks, CounterexampleReplication) {
    // Replicating the counterexample laws into 12 equal-weight rows: the sums
    // agree in law, so the sample icx check holds in both directions.
    const auto e = example_2_13();
    const auto ys = e.y.to_scenarios(12);
    std::vector<std::vector<double>> cols{std::vector<double>(ys.column(0).begin(), ys.column(0).end()),
                                          std::vector<double>(ys.column(1).begin(), ys.column(1).end())};
    for (auto& v : cols[1]) v = to_double(example213_f(R(static_cast<long long>(v))));
    const auto xs = ScenarioMatrix::from_columns(cols);
    EXPECT_TRUE(mc_check_sum_icx(ys, xs, 0.0).holds);
    EXPECT_TRUE(mc_check_sum_icx(xs, ys, 0.0).holds);
}
