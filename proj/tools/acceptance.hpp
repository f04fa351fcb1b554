#pragma once

// The eight acceptance criteria. Each returns a self-contained outcome; the
// CLI and tests/acceptance_test.cpp print one PASS/FAIL line per criterion.

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reinsnet/reinsnet.hpp"

namespace reinsnet::acceptance {

struct Outcome {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

inline std::string line(const Outcome& o) {
    char t[32];
    std::snprintf(t, sizeof t, "%.2f", o.seconds);
    return std::string(o.pass ? "PASS" : "FAIL") + " criterion " + std::to_string(o.id) + " (" + o.title + "): " + o.detail +
           " [" + t + " s]";
}

namespace detail {

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

// Collects failed checks; the criterion passes when none failed.
struct Checks {
    std::vector<std::string> failures;
    void expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    std::string summary(const std::string& ok_text) const {
        if (failures.empty()) return ok_text;
        std::string s;
        for (std::size_t i = 0; i < failures.size() && i < 4; ++i) s += (i ? "; " : "") + failures[i];
        if (failures.size() > 4) s += "; +" + std::to_string(failures.size() - 4) + " more";
        return s;
    }
};

inline Outcome finish(int id, std::string title, const Checks& c, const std::string& ok_text, const Stopwatch& w,
                      double limit_seconds = 0.0) {
    Outcome o{id, std::move(title), c.failures.empty(), c.summary(ok_text), w.seconds()};
    if (limit_seconds > 0.0 && o.seconds >= limit_seconds) {
        o.pass = false;
        o.detail += "; exceeded time limit of " + fmt(limit_seconds) + " s";
    }
    return o;
}

inline std::vector<Marginal> three_marginals() {
    return {marginal::LogNormal{0.0, 1.0}, marginal::Pareto{3.0, 1.0}, marginal::LogNormal{0.5, 0.6}};
}

}  // namespace detail

// 1. POD-but-not-PDS example in exact rational arithmetic.
inline Outcome criterion_1() {
    detail::Stopwatch w;
    detail::Checks c;
    const auto e = example_2_13();
    c.expect(e.pod.holds, "POD does not hold");
    c.expect(!e.pds.holds, "PDS unexpectedly holds");
    std::string witness = e.pds.witness ? e.pds.witness->description : std::string();
    for (std::size_t i = 0; i + 1 < witness.size(); ++i)
        if (witness[i] == 'X' && std::isdigit(static_cast<unsigned char>(witness[i + 1]))) witness[i] = 'Y';
    if (e.pds.violation) {
        const auto& v = *e.pds.violation;
        const bool expected_witness = v.conditioning == 1 && v.lower_value == Rational(1) && v.threshold == Rational(0) &&
                                      v.prob_at_lower == Rational(1) && v.prob_at_upper == Rational(0);
        c.expect(expected_witness, "witness is not P(Y1>0|Y2=1)=1 > 0: " + witness);
    } else {
        c.expect(false, "no PDS witness");
    }
    c.expect(e.icx_marginal_1.holds, "X1 <=icx Y1 fails");
    c.expect(e.icx_marginal_2.holds, "X2 <=icx Y2 fails");
    c.expect(e.icx_sum_reversed.holds, "Y1+Y2 <=icx X1+X2 fails");
    return detail::finish(1, "POD-not-PDS counterexample", c,
                          "POD holds; PDS fails with " + witness +
                              "; X1<=icx Y1, X2<=icx Y2, Y1+Y2<=icx X1+X2 (exact)",
                          w, 1.0);
}

// 2. and 3. Random treaties versus their layer improvements.
inline Outcome dominance_battery(int id, const std::vector<RiskMeasureSpec>& specs, const PremiumPrinciple& principle,
                                 const std::vector<CopulaSpec>& copulas, double limit_seconds) {
    detail::Stopwatch w;
    detail::Checks c;
    const auto marginals = detail::three_marginals();
    std::size_t violations = 0, trials = 0;
    double worst_gap = std::numeric_limits<double>::infinity(), mismatch = 0.0;
    for (std::size_t k = 0; k < copulas.size(); ++k) {
        const auto s = sample_scenarios(marginals, copulas[k], 100000, 2024 + k);
        const NetworkProblem p{s, specs, principle};
        const auto rep = dominance_harness(p, 100, 7000 + k, 1e-2, copulas[k]);
        trials += rep.trials;
        violations += rep.violations.size();
        worst_gap = std::min(worst_gap, rep.min_relative_gap);
        mismatch = std::max(mismatch, rep.max_rvar_mismatch);
        c.expect(rep.preconditions_met, describe(copulas[k]) + ": preconditions not met");
        c.expect(rep.violations.empty(), describe(copulas[k]) + ": " + std::to_string(rep.violations.size()) + " violations");
    }
    const bool rvar = !std::all_of(specs.begin(), specs.end(), [](const RiskMeasureSpec& s) { return s.is_var(); });
    if (rvar) c.expect(mismatch <= 1e-9, "RVaR(f) vs RVaR(k) mismatch " + detail::fmt(mismatch));
    std::string ok = std::to_string(trials) + " trials over " + std::to_string(copulas.size()) + " copulas, " +
                     std::to_string(violations) + " violations, min relative gain " + detail::fmt(worst_gap);
    if (rvar) ok += ", max RVaR mismatch " + detail::fmt(mismatch);
    return detail::finish(id, rvar ? "dominance by k" : "dominance by h", c, ok, w, limit_seconds);
}

inline Outcome criterion_2() {
    return dominance_battery(2, {{0.01, 0.0}, {0.05, 0.0}, {0.1, 0.0}}, premium::Wang{DistortionFunction::sqrt(), 0.2},
                             {copula::Independent{}, copula::Comonotone{}, equicorrelated_gaussian(3, 0.5)}, 60.0);
}

inline Outcome criterion_3() {
    return dominance_battery(3, {{0.01, 0.05}, {0.02, 0.1}, {0.05, 0.0}}, premium::Wang{DistortionFunction::dual_power(2.0), 0.1},
                             {copula::Independent{}, copula::Comonotone{}, equicorrelated_gaussian(3, 0.5)}, 0.0);
}

// 4. Layer optimum against brute force over piecewise-linear treaties with
// knots at the atoms and slopes in {0, 1/4, 1/2, 3/4, 1}.
struct ExactInstance {
    std::string name;
    DiscreteJointDistribution<double> law;
    long long denominator;
    std::vector<RiskMeasureSpec> specs;
    PremiumPrinciple principle;
};

inline std::vector<ExactInstance> exact_instances() {
    auto independent = [](const std::vector<double>& x1, const std::vector<double>& p1, const std::vector<double>& x2,
                          const std::vector<double>& p2) {
        std::vector<std::vector<double>> atoms;
        std::vector<double> probs;
        for (std::size_t i = 0; i < x1.size(); ++i)
            for (std::size_t j = 0; j < x2.size(); ++j) {
                atoms.push_back({x1[i], x2[j]});
                probs.push_back(p1[i] * p2[j]);
            }
        return DiscreteJointDistribution<double>(atoms, probs);
    };
    std::vector<ExactInstance> out;
    out.push_back({"independent VaR, Wang sqrt",
                   independent({0, 1, 2, 4, 7}, {0.3, 0.2, 0.2, 0.2, 0.1}, {0, 2, 3, 5}, {0.4, 0.3, 0.2, 0.1}), 100,
                   {{0.1, 0.0}, {0.2, 0.0}}, premium::Wang{DistortionFunction::sqrt(), 0.1}});
    out.push_back({"comonotone RVaR, expected value",
                   DiscreteJointDistribution<double>({{0, 0}, {1, 2}, {3, 3}, {5, 6}, {8, 9}}, {0.4, 0.2, 0.2, 0.1, 0.1}), 10,
                   {{0.1, 0.2}, {0.0, 0.3}}, premium::ExpectedValue{0.25}});
    out.push_back({"countermonotone VaR, Wang dual power",
                   DiscreteJointDistribution<double>({{0, 6}, {2, 3}, {4, 1}, {6, 0}}, {0.25, 0.25, 0.25, 0.25}), 4,
                   {{0.25, 0.0}, {0.25, 0.0}}, premium::Wang{DistortionFunction::dual_power(2.0), 0.3}});
    out.push_back({"independent mixed RVaR/VaR, Wang power",
                   independent({0, 2, 5}, {0.5, 0.3, 0.2}, {0, 1, 4, 6}, {0.4, 0.3, 0.2, 0.1}), 100,
                   {{0.05, 0.25}, {0.1, 0.0}}, premium::Wang{DistortionFunction::power(0.7), 0.15}});
    out.push_back({"comonotone RVaR, Wang sqrt",
                   DiscreteJointDistribution<double>({{0, 0}, {1, 1}, {3, 2}, {4, 6}, {9, 7}}, {0.35, 0.25, 0.2, 0.15, 0.05}), 20,
                   {{0.05, 0.3}, {0.0, 0.2}}, premium::Wang{DistortionFunction::sqrt(), 0.2}});
    return out;
}

struct BruteForceResult {
    double minimum = std::numeric_limits<double>::infinity();
    std::size_t family_size = 0;
};

/// Exhaustive minimum of the network objective over treaty pairs whose knots
/// sit at the positive atoms of each marginal.
inline BruteForceResult brute_force_minimum(const NetworkProblem& p) {
    require(p.insurers() == 2, "brute force: two insurers only");
    const NetworkEvaluator ev(p);
    const std::size_t m = p.scenarios.rows();
    struct Member {
        std::vector<double> ceded;
        double retained = 0.0;
    };
    std::vector<std::vector<Member>> family(2);
    const double levels[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t i = 0; i < 2; ++i) {
        std::vector<double> atoms(ev.sorted(i).values().begin(), ev.sorted(i).values().end());
        atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
        std::vector<double> knots{0.0};
        for (double a : atoms)
            if (a > 0.0) knots.push_back(a);
        knots.pop_back();  // the slope after the largest atom never matters
        const std::size_t k = knots.size();
        std::size_t count = 1;
        for (std::size_t s = 0; s < k; ++s) count *= 5;
        for (std::size_t code = 0; code < count; ++code) {
            std::vector<double> slopes(k);
            std::size_t r = code;
            for (auto& s : slopes) {
                s = levels[r % 5];
                r /= 5;
            }
            const CededLossFunction f(knots, slopes);
            family[i].push_back({ceded(f, p.scenarios.column(i)), ev.retained_rvar(i, f)});
        }
    }
    BruteForceResult out;
    out.family_size = family[0].size() * family[1].size();
    std::vector<double> total(m);
    for (const auto& f1 : family[0])
        for (const auto& f2 : family[1]) {
            for (std::size_t r = 0; r < m; ++r) total[r] = f1.ceded[r] + f2.ceded[r];
            out.minimum = std::min(out.minimum, f1.retained + f2.retained + ev.pricer().price(total));
        }
    return out;
}

inline Outcome criterion_4() {
    detail::Stopwatch w;
    detail::Checks c;
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t pairs = 0;
    const auto instances = exact_instances();
    for (const auto& inst : instances) {
        const NetworkProblem p{inst.law.to_scenarios(inst.denominator), inst.specs, inst.principle};
        SolverOptions opt;
        opt.random_starts = 3;
        const auto sol = solve_rvar_case(p, opt);
        const auto brute = brute_force_minimum(p);
        pairs += brute.family_size;
        const double excess = sol.objective - brute.minimum;
        worst = std::max(worst, excess);
        c.expect(excess <= 1e-9, inst.name + ": layer optimum " + detail::fmt(sol.objective) + " exceeds brute minimum " +
                                     detail::fmt(brute.minimum));
    }
    return detail::finish(4, "reduction optimality", c,
                          std::to_string(instances.size()) + " exact instances, " + std::to_string(pairs) +
                              " brute-force treaty pairs, max(layer optimum - brute minimum) = " + detail::fmt(worst),
                          w, 120.0);
}

// 5. Translation-invariant Wang premium with VaR insurers: zero deductibles.
inline Outcome criterion_5() {
    detail::Stopwatch w;
    detail::Checks c;
    const std::vector<std::pair<DistortionFunction, CopulaSpec>> cases{
        {DistortionFunction::sqrt(), copula::Independent{}},
        {DistortionFunction::wang_transform(0.5), equicorrelated_gaussian(3, 0.5)},
        {DistortionFunction::dual_power(3.0), copula::Clayton{2.0}},
    };
    double max_a = 0.0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto s = sample_scenarios(detail::three_marginals(), cases[k].second, 10000, 500 + k);
        const NetworkProblem p{s, {{0.01, 0.0}, {0.05, 0.0}, {0.1, 0.0}}, premium::Wang{cases[k].first, 0.0}};
        const auto sol = solve_var_case(p);
        const NetworkEvaluator ev(p);
        for (std::size_t i = 0; i < 3; ++i) {
            max_a = std::max(max_a, sol.deductibles[i]);
            c.expect(sol.deductibles[i] == 0.0, cases[k].first.name() + ": a_" + std::to_string(i + 1) + " = " +
                                                    detail::fmt(sol.deductibles[i]));
            const double v = ev.var_alpha(i);
            const LayerTreaty t = sol.treaties()[i];
            bool equal = true;
            for (double x : s.column(i)) equal = equal && t(x) == std::min(x, v);
            c.expect(equal, cases[k].first.name() + ": treaty " + std::to_string(i + 1) + " differs from min{x, VaR}");
        }
    }
    return detail::finish(5, "zero deductible", c,
                          std::to_string(cases.size()) + " instances, max |a_i| = " + detail::fmt(max_a) +
                              ", treaties equal min{x, VaR_alpha_i(X_i)} on every scenario",
                          w);
}

// 6. Separable premiums.
inline Outcome criterion_6() {
    detail::Stopwatch w;
    detail::Checks c;
    std::string ok;
    struct Case {
        std::string name;
        PremiumPrinciple principle;
        std::function<CopulaSpec(std::size_t)> copula;  // by dimension
        std::size_t m;
    };
    const std::vector<Case> cases{
        {"ev", premium::ExpectedValue{0.3}, [](std::size_t n) -> CopulaSpec { return equicorrelated_gaussian(n, 0.5); }, 100000},
        {"wang comonotone", premium::Wang{DistortionFunction::sqrt(), 0.2}, [](std::size_t) -> CopulaSpec { return copula::Comonotone{}; },
         100000},
        {"exp independent", premium::Exponential{0.5}, [](std::size_t) -> CopulaSpec { return copula::Independent{}; }, 1000000},
    };
    const std::vector<Marginal> marginals{marginal::LogNormal{0.0, 0.5}, marginal::LogNormal{0.3, 0.4},
                                          marginal::Uniform{0.0, 3.0}};
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& cs = cases[k];
        const auto s = sample_scenarios(marginals, cs.copula(3), cs.m, 60 + k);
        std::vector<CededLossFunction> fs;
        for (std::size_t j = 0; j < 3; ++j) {
            const SortedSample col(s.column(j));
            const double lo = col.var(0.5), hi = col.var(0.01);
            fs.push_back(CededLossFunction({0.0, lo, 0.5 * (lo + hi), hi}, {0.1, 0.6, 1.0, 0.0}));
        }
        const auto sep = separability_check(cs.principle, s, fs);
        c.expect(sep.holds, cs.name + ": additivity gap " + detail::fmt(sep.relative_difference) + " > " + detail::fmt(sep.tolerance));

        // optimum comparison on a smaller sample of the first two risks
        const auto small = sample_scenarios({marginals[0], marginals[1]}, cs.copula(2), 10000, 80 + k);
        const NetworkProblem p{small, {{0.05, 0.0}, {0.1, 0.0}}, cs.principle};
        const auto opt = compare_with_individual_optima(p);
        c.expect(opt.relative_difference <= 1e-2,
                 cs.name + ": network optimum differs from the sum of single optima by " + detail::fmt(opt.relative_difference));
        ok += (k ? "; " : "") + cs.name + " additivity gap " + detail::fmt(sep.relative_difference) + ", optimum gap " +
              detail::fmt(opt.relative_difference);
    }
    return detail::finish(6, "separability", c, ok, w);
}

// 7. Bernoulli mixture thresholds.
inline DistortionFunction random_concave_distortion(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    switch (gen() % 4) {
        case 0: return DistortionFunction::power(0.05 + 0.95 * u(gen));
        case 1: return DistortionFunction::dual_power(1.0 + 5.0 * u(gen));
        case 2: return DistortionFunction::wang_transform(2.0 * u(gen));
        default: return DistortionFunction::identity();
    }
}

inline Outcome criterion_7() {
    detail::Stopwatch w;
    detail::Checks c;
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_sum = 0.0, worst_identity = 0.0;
    std::size_t violations = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        BernoulliMixtureModel m;
        m.n = 1 + gen() % 40;
        const std::size_t k = 1 + gen() % 5;
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            m.z_support.push_back(0.001 + 0.998 * u(gen));
            m.z_probs.push_back(0.05 + u(gen));
            total += m.z_probs.back();
        }
        for (auto& p : m.z_probs) p /= total;
        double acc = 0.0;
        for (double p : m.z_probs) acc += p;
        if (std::abs(acc - 1.0) > 1e-12) m.z_probs.back() += 1.0 - acc;

        double psum = 0.0;
        for (std::size_t j = 0; j <= m.n; ++j) psum += pnk(m, j);
        worst_sum = std::max(worst_sum, std::abs(psum - 1.0));
        const auto g = random_concave_distortion(gen);
        const auto d = ceding_analysis(m, g, 0.5 * u(gen));
        worst_identity = std::max(worst_identity, std::abs(d.mean_identity_residual));
        if (d.social_threshold > d.individual_threshold * (1.0 + 1e-12)) ++violations;
    }
    c.expect(worst_sum <= 1e-12, "sum of p_{n,k} off by " + detail::fmt(worst_sum));
    c.expect(worst_identity <= 1e-12, "(1/n)E[N] - E[Z] residual " + detail::fmt(worst_identity));
    c.expect(violations == 0, std::to_string(violations) + " social > individual threshold violations");

    // n = 2, Z in {0.1, 0.9} equally likely, g = sqrt, theta halfway between the two break-even loadings
    const BernoulliMixtureModel model{2, {0.1, 0.9}, {0.5, 0.5}};
    const auto g = DistortionFunction::sqrt();
    const auto base = ceding_analysis(model, g, 0.0);
    const double theta = 0.5 * (1.0 / base.social_threshold + 1.0 / base.individual_threshold) - 1.0;
    const auto d = ceding_analysis(model, g, theta);
    c.expect(d.social == CedeVerdict::cede, "derived instance: social verdict is " + to_string(d.social));
    c.expect(d.individual == CedeVerdict::retain, "derived instance: individual verdict is " + to_string(d.individual));

    // exact enumeration: 2^n outcomes with probabilities in hundredths
    const auto law = bernoulli_mixture_law(model);
    const double alpha = 0.25;  // below E[Z] so VaR_alpha(X_i) = 1
    const NetworkProblem network{law.to_scenarios(100), {{alpha, 0.0}, {alpha, 0.0}}, premium::Wang{g, theta}};
    const auto joint = solve_var_case(network);
    const bool network_cedes = joint.deductibles == std::vector<double>{0.0, 0.0} && joint.bounds == std::vector<double>{1.0, 1.0};
    c.expect(network_cedes, "network optimizer does not cede everything");
    const NetworkProblem single{network.scenarios.select({0}), {{alpha, 0.0}}, premium::Wang{g, theta}};
    const auto alone = solve_var_case(single);
    const bool single_retains = alone.deductibles == std::vector<double>{1.0} && alone.bounds == std::vector<double>{0.0};
    c.expect(single_retains, "single-insurer optimizer does not retain");

    return detail::finish(7, "bernoulli mixture", c,
                          "1000 cases: max |sum p_nk - 1| = " + detail::fmt(worst_sum) + ", max identity residual " +
                              detail::fmt(worst_identity) + ", 0 violations; derived instance theta = " + detail::fmt(theta) +
                              " (social " + detail::fmt(d.social_threshold) + " -> cede, individual " +
                              detail::fmt(d.individual_threshold) + " -> retain), optimizer concurs",
                          w);
}

// 8. Risk measure identities.
inline Outcome criterion_8() {
    detail::Stopwatch w;
    detail::Checks c;
    std::mt19937_64 gen(88);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t var_bad = 0, es_exact_bad = 0, es_close_bad = 0, affine_bad = 0, mono_bad = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        // real-valued sample
        const std::size_t m = 1 + gen() % 300;
        std::vector<double> x(m);
        for (auto& v : x) v = std::exp(2.0 * u(gen)) * u(gen) * 100.0;
        const SortedSample s(x);
        const double a = u(gen);
        const double b = std::max(1e-6, u(gen));
        if (s.rvar({a, 0.0}) != s.var(a)) ++var_bad;
        const double es = s.es(b);
        if (std::abs(s.rvar({0.0, b}) - es) > 1e-12 * (1.0 + std::abs(es))) ++es_close_bad;

        // integer sample of power-of-two size with m * beta a power of two: both ES routes are exact
        const std::size_t md = std::size_t{1} << (gen() % 11);
        std::vector<double> xd(md);
        for (auto& v : xd) v = static_cast<double>(gen() % 2001);
        const SortedSample sd(xd);
        std::size_t top = 1;
        while (2 * top <= md && gen() % 2) top *= 2;
        const double bd = static_cast<double>(top) / static_cast<double>(md);
        if (sd.rvar({0.0, bd}) != sd.es(bd)) ++es_exact_bad;

        // affine increasing map
        const double scale = 0.1 + 10.0 * u(gen), shift = 100.0 * u(gen);
        std::vector<double> y(m);
        for (std::size_t i = 0; i < m; ++i) y[i] = scale * x[i] + shift;
        const SortedSample sy(y);
        if (sy.var(a) != scale * s.var(a) + shift) ++affine_bad;

        // monotone in alpha on a 100-point grid
        for (int k = 1; k < 100; ++k)
            if (s.var(k / 99.0) > s.var((k - 1) / 99.0)) ++mono_bad;
    }
    c.expect(var_bad == 0, std::to_string(var_bad) + " samples with RVaR_{a,0} != VaR_a");
    c.expect(es_exact_bad == 0, std::to_string(es_exact_bad) + " dyadic samples with RVaR_{0,b} != ES_b");
    c.expect(es_close_bad == 0, std::to_string(es_close_bad) + " real samples with |RVaR_{0,b} - ES_b| > 1e-12 relative");
    c.expect(affine_bad == 0, std::to_string(affine_bad) + " affine equivariance failures");
    c.expect(mono_bad == 0, std::to_string(mono_bad) + " monotonicity failures");
    return detail::finish(8, "measure identities", c,
                          "1000 samples: RVaR_{a,0} = VaR_a bitwise; RVaR_{0,b} = ES_b bitwise on dyadic samples and within "
                          "1e-12 on real ones; affine equivariance and monotonicity exact",
                          w);
}

inline std::vector<std::function<Outcome()>> criteria() {
    return {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8};
}

/// Runs every criterion, reporting each outcome as soon as it is known.
inline std::vector<Outcome> run_all(const std::function<void(const Outcome&)>& on_done = {}) {
    std::vector<Outcome> out;
    for (const auto& run : criteria()) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {static_cast<int>(out.size()) + 1, "error", false, std::string("threw: ") + e.what(), 0.0};
        }
        if (on_done) on_done(o);
        out.push_back(std::move(o));
    }
    return out;
}

}  // namespace reinsnet::acceptance
