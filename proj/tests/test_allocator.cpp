#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "reinsnet/allocator.hpp"

using namespace reinsnet;

namespace {

ScenarioMatrix lognormals(std::size_t n, std::size_t m, std::uint64_t seed, CopulaSpec c = copula::Independent{}) {
    std::vector<Marginal> mg;
    for (std::size_t i = 0; i < n; ++i) mg.push_back(marginal::LogNormal{0.5 * static_cast<double>(i), 0.7});
    return sample_scenarios(mg, c, m, seed);
}

void expect_feasible(const NetworkEvaluator& ev, const AllocationSolution& s) {
    const auto& p = ev.problem();
    for (std::size_t i = 0; i < p.insurers(); ++i) {
        EXPECT_GE(s.deductibles[i], 0.0);
        EXPECT_LE(s.deductibles[i], ev.var_alpha_beta(i));
        if (p.specs[i].is_var()) {
            EXPECT_EQ(s.bounds[i], ev.var_alpha(i) - s.deductibles[i]);
        } else {
            EXPECT_GE(s.deductibles[i] + s.bounds[i], ev.var_alpha_beta(i));
            EXPECT_LE(s.bounds[i], ev.var_alpha(i));
            EXPECT_GE(s.bounds[i], 0.0);
        }
    }
}

void expect_monotone_trace(const AllocationSolution& s) {
    ASSERT_FALSE(s.trace.empty());
    for (std::size_t k = 1; k < s.trace.size(); ++k) EXPECT_LE(s.trace[k].objective, s.trace[k - 1].objective);
    EXPECT_DOUBLE_EQ(s.trace.back().objective, s.objective);
}

}  // namespace

TEST(Objective, NoCession) {
    const auto s = lognormals(3, 500, 1);
    const NetworkProblem p{s, {{0.05, 0.0}, {0.01, 0.1}, {0.0, 0.2}}, premium::Wang{DistortionFunction::sqrt(), 0.1}};
    std::vector<CededLossFunction> zero(3, CededLossFunction::zero());
    double expected = 0.0;
    for (std::size_t i = 0; i < 3; ++i) expected += range_value_at_risk(s.column(i), p.specs[i]);
    EXPECT_DOUBLE_EQ(objective(p, zero), expected);
}

TEST(Objective, FullCessionExpectedValue) {
    const auto s = lognormals(2, 400, 2);
    const NetworkProblem p{s, {{0.05, 0.0}, {0.1, 0.1}}, premium::ExpectedValue{0.3}};
    std::vector<CededLossFunction> full(2, CededLossFunction::identity());
    EXPECT_NEAR(objective(p, full), 1.3 * mean(s.row_sums()), 1e-12 * objective(p, full));
}

TEST(Objective, HandComputedSingleInsurer) {
    // scenarios {0, 2, 4, 10}, VaR_0.25, layer a=1 b=2, pi = 1.5 E:
    // retained {0,1,2,8} -> VaR 2; ceded {0,1,2,2} -> 1.5 * 1.25
    const auto s = ScenarioMatrix::from_columns({{0, 2, 4, 10}});
    const NetworkProblem p{s, {{0.25, 0.0}}, premium::ExpectedValue{0.5}};
    EXPECT_DOUBLE_EQ(objective(p, std::vector<LayerTreaty>{{1.0, 2.0}}), 2.0 + 1.875);
    const NetworkEvaluator ev(p);
    EXPECT_DOUBLE_EQ(ev.reduced_objective({1.0}, {2.0}), 1.0 + 1.875);
}

TEST(Objective, ReducedMatchesGeneralForm) {
    // for layers respecting the constraints both expressions coincide
    const auto s = lognormals(2, 800, 3);
    const NetworkProblem p{s, {{0.05, 0.0}, {0.02, 0.1}}, premium::Wang{DistortionFunction::sqrt(), 0.2}};
    const NetworkEvaluator ev(p);
    for (double t : {0.0, 0.3, 0.7, 1.0}) {
        const std::vector<double> a{t * ev.var_alpha(0), t * ev.var_alpha_beta(1)};
        const std::vector<double> b{ev.var_alpha(0) - a[0], ev.var_alpha(1) - a[1]};
        std::vector<LayerTreaty> layers{{a[0], b[0]}, {a[1], b[1]}};
        EXPECT_NEAR(ev.reduced_objective(a, b), ev.objective(layers), 1e-9 * ev.objective(layers));
    }
}

TEST(SolveVar, ZeroDeductiblesForTranslationInvariantPremium) {
    const auto s = lognormals(3, 3000, 4, equicorrelated_gaussian(3, 0.5));
    const NetworkProblem p{s, {{0.05, 0.0}, {0.1, 0.0}, {0.01, 0.0}}, premium::Wang{DistortionFunction::sqrt(), 0.0}};
    const NetworkEvaluator ev(p);
    const auto sol = solve_var_case(p);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(sol.deductibles[i], 0.0);
        EXPECT_EQ(sol.bounds[i], ev.var_alpha(i));
    }
    expect_feasible(ev, sol);
    expect_monotone_trace(sol);
}

TEST(SolveVar, ExpensiveReinsuranceGivesZeroWidthLayers) {
    const auto s = lognormals(2, 2000, 5);
    // (1 + theta) alpha > 1: every unit ceded costs more than it saves
    const NetworkProblem p{s, {{0.1, 0.0}, {0.2, 0.0}}, premium::ExpectedValue{10.0}};
    const NetworkEvaluator ev(p);
    const auto sol = solve_var_case(p);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(sol.deductibles[i], ev.var_alpha(i));
        EXPECT_EQ(sol.bounds[i], 0.0);
    }
}

TEST(SolveVar, ExpectedValueMatchesSeparableScan) {
    // Under expected value pricing the objective separates; each term
    // a + (1+theta) E[(min(X, v) - a)_+] is scanned over every order statistic.
    const auto s = lognormals(3, 1500, 6, copula::Clayton{1.0});
    for (double theta : {0.0, 0.2, 1.0, 4.0}) {
        const NetworkProblem p{s, {{0.05, 0.0}, {0.1, 0.0}, {0.3, 0.0}}, premium::ExpectedValue{theta}};
        const NetworkEvaluator ev(p);
        double oracle = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            const double v = ev.var_alpha(i);
            double best = std::numeric_limits<double>::infinity();
            std::vector<double> cands{0.0, v};
            for (double x : s.column(i))
                if (x <= v) cands.push_back(x);
            for (double a : cands) {
                double e = 0.0;
                for (double x : s.column(i)) e += std::max(std::min(x, v) - a, 0.0);
                best = std::min(best, a + (1.0 + theta) * e / static_cast<double>(s.rows()));
            }
            oracle += best;
        }
        const auto sol = solve_var_case(p);
        EXPECT_NEAR(sol.objective, oracle, 1e-9 * oracle) << theta;
        expect_feasible(ev, sol);
    }
}

TEST(SolveVar, SingleInsurerMatchesExhaustiveScan) {
    const auto s = lognormals(1, 400, 7);
    for (const PremiumPrinciple& pr : {PremiumPrinciple{premium::Wang{DistortionFunction::dual_power(1.5), 0.1}},
                                       PremiumPrinciple{premium::Wang{DistortionFunction::sqrt(), 0.4}},
                                       PremiumPrinciple{premium::Exponential{0.3}}}) {
        const NetworkProblem p{s, {{0.05, 0.0}}, pr};
        const NetworkEvaluator ev(p);
        const double v = ev.var_alpha(0);
        double oracle = std::numeric_limits<double>::infinity();
        std::vector<double> cands{0.0, v};
        for (double x : s.column(0))
            if (x <= v) cands.push_back(x);
        for (int k = 0; k <= 4000; ++k) cands.push_back(v * k / 4000.0);
        for (double a : cands) oracle = std::min(oracle, ev.reduced_objective({a}, {v - a}));
        const auto sol = solve_var_case(p);
        EXPECT_LE(sol.objective, oracle + 1e-9 * oracle) << describe(pr);
        EXPECT_NEAR(sol.objective, oracle, 1e-6 * oracle) << describe(pr);
    }
}

TEST(SolveVar, RejectsRvarSpecs) {
    const auto s = lognormals(2, 100, 8);
    const NetworkProblem p{s, {{0.05, 0.0}, {0.05, 0.1}}, premium::ExpectedValue{0.1}};
    EXPECT_THROW(solve_var_case(p), ValidationError);
}

TEST(SolveRvar, CoincidesWithVarCaseWhenBetaIsZero) {
    const auto s = lognormals(2, 1000, 9);
    const NetworkProblem p{s, {{0.05, 0.0}, {0.1, 0.0}}, premium::Wang{DistortionFunction::wang_transform(0.3), 0.05}};
    const auto a = solve_var_case(p);
    const auto b = solve_rvar_case(p);
    EXPECT_EQ(a.deductibles, b.deductibles);
    EXPECT_EQ(a.bounds, b.bounds);
    EXPECT_EQ(a.objective, b.objective);
}

TEST(SolveRvar, SingleExpectedShortfallInsurerMatchesGridScan) {
    const auto s = lognormals(1, 300, 10);
    for (double theta : {0.0, 0.3, 2.0}) {
        const NetworkProblem p{s, {{0.0, 0.2}}, premium::ExpectedValue{theta}};
        const NetworkEvaluator ev(p);
        const double va = ev.var_alpha(0), vab = ev.var_alpha_beta(0);
        double oracle = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j <= 200; ++j) {
                const double a = vab * i / 200.0, b = va * j / 200.0;
                if (a + b < vab) continue;
                oracle = std::min(oracle, ev.reduced_objective({a}, {b}));
            }
        const auto sol = solve_rvar_case(p);
        EXPECT_LE(sol.objective, oracle + 1e-9 * oracle) << theta;
        expect_feasible(ev, sol);
        expect_monotone_trace(sol);
    }
}

TEST(SolveRvar, LowerConstraintActivity) {
    // Boundary scan oracle: the best point with a + b = VaR_{alpha+beta}
    // against the best interior point.
    const auto s = lognormals(1, 400, 11);
    for (double theta : {0.0, 9.0}) {
        const NetworkProblem p{s, {{0.02, 0.1}}, premium::ExpectedValue{theta}};
        const NetworkEvaluator ev(p);
        const double va = ev.var_alpha(0), vab = ev.var_alpha_beta(0);
        double boundary = std::numeric_limits<double>::infinity(), interior = boundary;
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; j <= 200; ++j) {
                const double a = vab * i / 200.0, b = va * j / 200.0;
                if (a + b < vab) continue;
                const double val = ev.reduced_objective({a}, {b});
                if (a + b == vab) boundary = std::min(boundary, val);
            }
        for (double a : {0.0, 0.5 * vab, vab}) {
            boundary = std::min(boundary, ev.reduced_objective({a}, {vab - a}));
            for (int j = 1; j <= 200; ++j) {
                const double b = vab - a + (va - vab + a) * j / 200.0;
                if (b <= va) interior = std::min(interior, ev.reduced_objective({a}, {b}));
            }
        }
        const auto sol = solve_rvar_case(p);
        expect_feasible(ev, sol);
        const bool boundary_optimal = boundary <= interior;
        EXPECT_EQ(sol.lower_constraint_active[0], boundary_optimal) << "theta " << theta;
        if (theta > 1.0) EXPECT_TRUE(sol.lower_constraint_active[0]);
    }
}

TEST(SolveRvar, MixedSpecsFeasibleAndDeterministic) {
    const auto s = lognormals(3, 2000, 12, equicorrelated_gaussian(3, 0.3));
    const NetworkProblem p{s, {{0.05, 0.0}, {0.01, 0.1}, {0.0, 0.05}}, premium::Wang{DistortionFunction::sqrt(), 0.1}};
    const NetworkEvaluator ev(p);
    SolverOptions opt;
    opt.seed = 5;
    opt.random_starts = 2;
    const auto a = solve_rvar_case(p, opt);
    const auto b = solve_rvar_case(p, opt);
    expect_feasible(ev, a);
    expect_monotone_trace(a);
    EXPECT_EQ(a.deductibles, b.deductibles);
    EXPECT_EQ(a.bounds, b.bounds);
    EXPECT_EQ(a.objective, b.objective);
    // no worse than any start corner
    EXPECT_LE(a.objective, ev.objective(std::vector<CededLossFunction>(3, CededLossFunction::zero())));
}

TEST(Capital, Examples) {
    const auto s = lognormals(2, 600, 13);
    NetworkProblem p{s, {{0.05, 0.0}, {0.0, 0.1}}, premium::ExpectedValue{0.2}, {}, 0.0};
    std::vector<CededLossFunction> zero(2, CededLossFunction::zero());
    const auto c0 = capital_requirement(p, zero);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_DOUBLE_EQ(c0[i], range_value_at_risk(s.column(i), p.specs[i]));
    const std::vector<LayerTreaty> layers{{0.5, 2.0}, {1.0, unbounded}};
    const auto base = capital_requirement(p, layers);
    p.cost_of_capital = 0.5;
    const auto half = capital_requirement(p, layers);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_DOUBLE_EQ(half[i], 2.0 * base[i]);
    p.cost_of_capital = 1.0;
    EXPECT_THROW(capital_requirement(p, layers), ValidationError);
}

TEST(Capital, SumIsTransformOfObjective) {
    const auto s = lognormals(3, 800, 14);
    const NetworkProblem p{s, {{0.05, 0.0}, {0.02, 0.1}, {0.0, 0.1}}, premium::Wang{DistortionFunction::sqrt(), 0.3}, {0.5, 1.0, 1.5}, 0.06};
    const NetworkEvaluator ev(p);
    // menu of three treaty vectors; argmin of total capital equals argmin of the objective
    const std::vector<std::vector<LayerTreaty>> menu{
        {{0.0, 1.0}, {0.5, 2.0}, {1.0, 3.0}},
        {{0.2, unbounded}, {0.0, 5.0}, {0.0, 0.0}},
        {{1.0, 0.5}, {2.0, 1.0}, {0.1, 10.0}}};
    std::size_t best_cap = 0, best_obj = 0;
    double min_cap = 1e300, min_obj = 1e300;
    for (std::size_t k = 0; k < menu.size(); ++k) {
        const auto cap = ev.capital(menu[k]);
        const double total = cap[0] + cap[1] + cap[2];
        const double obj = ev.objective(menu[k]);
        EXPECT_NEAR(total, (obj - 3.0) / (1.0 - 0.06), 1e-9 * std::abs(total));
        if (total < min_cap) min_cap = total, best_cap = k;
        if (obj < min_obj) min_obj = obj, best_obj = k;
    }
    EXPECT_EQ(best_cap, best_obj);
}

TEST(Dominance, VarCaseHasNoViolations) {
    const auto s = lognormals(3, 10000, 15, equicorrelated_gaussian(3, 0.5));
    const NetworkProblem p{s, {{0.05, 0.0}, {0.1, 0.0}, {0.01, 0.0}}, premium::Wang{DistortionFunction::sqrt(), 0.1}};
    const auto rep = dominance_harness(p, 30, 1);
    EXPECT_EQ(rep.construction, "h");
    EXPECT_TRUE(rep.violations.empty());
    EXPECT_GE(rep.min_gap, -1e-9 * std::abs(rep.mean_gap) - 1e-9);
}

TEST(Dominance, RvarCaseHasNoViolations) {
    const CopulaSpec cop = copula::Clayton{1.5};
    const auto s = lognormals(3, 10000, 16, cop);
    const NetworkProblem p{s, {{0.02, 0.1}, {0.0, 0.05}, {0.05, 0.0}}, premium::Wang{DistortionFunction::sqrt(), 0.1}};
    const auto rep = dominance_harness(p, 30, 2, 1e-2, cop);
    EXPECT_EQ(rep.construction, "k");
    EXPECT_TRUE(rep.preconditions_met);
    EXPECT_TRUE(rep.violations.empty());
    EXPECT_LE(rep.max_rvar_mismatch, 1e-9);
}

TEST(Dominance, PreconditionNotes) {
    const auto s = lognormals(2, 200, 17);
    const NetworkProblem p{s, {{0.02, 0.1}, {0.0, 0.05}}, premium::Wang{DistortionFunction::power(2.0), 0.1}};
    const auto rep = dominance_harness(p, 2, 3, 1e-2, CopulaSpec{equicorrelated_gaussian(2, -0.3)});
    EXPECT_FALSE(rep.preconditions_met);
    EXPECT_EQ(rep.notes.size(), 2u);
}

TEST(Dominance, LayersOfTheHFormAreFixedPoints) {
    const auto s = lognormals(2, 1000, 18);
    const NetworkProblem p{s, {{0.05, 0.0}, {0.1, 0.0}}, premium::Wang{DistortionFunction::sqrt(), 0.1}};
    const NetworkEvaluator ev(p);
    std::vector<CededLossFunction> fs;
    std::vector<LayerTreaty> hs;
    for (std::size_t i = 0; i < 2; ++i) {
        const double v = ev.var_alpha(i);
        const LayerTreaty l{0.25 * v, 0.75 * v};
        fs.push_back(CededLossFunction::from_layer(l));
        hs.push_back(build_h(fs.back(), ev.sorted(i), p.specs[i].alpha));
        for (double x : s.column(i)) EXPECT_EQ(hs.back()(x), fs.back()(x));
    }
    EXPECT_EQ(ev.objective(fs), ev.objective(hs));
}
