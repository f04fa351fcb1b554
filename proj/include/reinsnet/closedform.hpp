#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "reinsnet/allocator.hpp"
#include "reinsnet/error.hpp"
#include "reinsnet/measures.hpp"
#include "reinsnet/scenarios.hpp"

namespace reinsnet {

// ---------------------------------------------------------------------------
// Bernoulli mixture: social vs individual ceding
// ---------------------------------------------------------------------------

inline double binomial_coefficient(std::size_t n, std::size_t k) {
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

/// P(N = k) for N = X_1 + ... + X_n: C(n,k) sum_z z^k (1-z)^(n-k) P(Z = z).
inline double pnk(const BernoulliMixtureModel& model, std::size_t k) {
    model.validate();
    if (k > model.n) throw ValidationError("pnk: k = " + std::to_string(k) + " outside [0, " + std::to_string(model.n) + "]");
    double s = 0.0;
    for (std::size_t i = 0; i < model.z_support.size(); ++i) {
        const double z = model.z_support[i];
        s += std::pow(z, static_cast<double>(k)) * std::pow(1.0 - z, static_cast<double>(model.n - k)) * model.z_probs[i];
    }
    return binomial_coefficient(model.n, k) * s;
}

enum class CedeVerdict { cede, retain, indifferent };

inline std::string to_string(CedeVerdict v) {
    switch (v) {
        case CedeVerdict::cede: return "cede";
        case CedeVerdict::retain: return "retain";
        default: return "indifferent";
    }
}

inline CedeVerdict verdict_for(double threshold) {
    if (threshold < 1.0) return CedeVerdict::cede;
    if (threshold > 1.0) return CedeVerdict::retain;
    return CedeVerdict::indifferent;
}

struct CedeDecision {
    double social_threshold = 0.0;      // (1+theta) (1/n) sum_k g(P(N >= k))
    double individual_threshold = 0.0;  // (1+theta) g(E[Z])
    CedeVerdict social = CedeVerdict::indifferent;
    CedeVerdict individual = CedeVerdict::indifferent;
    double expected_z = 0.0;
    double mean_identity_residual = 0.0;  // (1/n) sum_k P(N >= k) - E[Z]
};

/// Full cession is socially optimal iff social_threshold < 1 and individually
/// optimal iff individual_threshold < 1. Requires a concave distortion.
inline CedeDecision ceding_analysis(const BernoulliMixtureModel& model, const DistortionFunction& g, double theta) {
    model.validate();
    require(g.concave(), "ceding analysis: distortion " + g.name() + " must be concave");
    require(theta >= 0.0, "ceding analysis: theta must be >= 0");
    const std::size_t n = model.n;
    std::vector<double> p(n + 1);
    for (std::size_t k = 0; k <= n; ++k) p[k] = pnk(model, k);
    double social = 0.0;
    double tail_sum = 0.0;
    double tail = 0.0;
    for (std::size_t k = n; k >= 1; --k) {
        tail += p[k];  // P(N >= k)
        social += g(tail);
        tail_sum += tail;
    }
    CedeDecision d;
    d.expected_z = model.mean_z();
    d.social_threshold = (1.0 + theta) * social / static_cast<double>(n);
    d.individual_threshold = (1.0 + theta) * g(d.expected_z);
    d.social = verdict_for(d.social_threshold);
    d.individual = verdict_for(d.individual_threshold);
    d.mean_identity_residual = tail_sum / static_cast<double>(n) - d.expected_z;
    return d;
}

/// |pi(sum min{(X_i - a)_+, 1 - a}) - (1 - a) pi(sum X_i)| on {0,1}-valued
/// columns; zero for positively homogeneous principles.
inline double binary_factorization_gap(const PremiumPrinciple& principle, const ScenarioMatrix& binary, double a) {
    require(a >= 0.0 && a <= 1.0, "binary factorization: a must lie in [0,1]");
    const Pricer pricer(principle, binary.rows());
    std::vector<double> layered(binary.rows(), 0.0);
    const LayerTreaty layer{a, 1.0 - a};
    for (std::size_t j = 0; j < binary.cols(); ++j) {
        const auto c = binary.column(j);
        for (std::size_t r = 0; r < binary.rows(); ++r) {
            require(c[r] == 0.0 || c[r] == 1.0, "binary factorization: columns must be {0,1}-valued");
            layered[r] += layer(c[r]);
        }
    }
    return std::abs(pricer.price(layered) - (1.0 - a) * pricer.price(binary.row_sums()));
}

// ---------------------------------------------------------------------------
// Separability
// ---------------------------------------------------------------------------

struct SeparabilityReport {
    double combined = 0.0;        // pi(sum f_i(X_i))
    double sum_of_parts = 0.0;    // sum pi(f_i(X_i))
    double relative_difference = 0.0;
    double tolerance = 0.0;
    bool holds = false;
};

/// Default additivity tolerance per principle: floating-point level for the
/// expected value, 1e-9 for Wang on comonotone columns, 1e-2 (Monte Carlo)
/// for the exponential principle on independent columns.
inline double default_separability_tolerance(const PremiumPrinciple& p) {
    if (std::holds_alternative<premium::ExpectedValue>(p)) return 1e-12;
    if (std::holds_alternative<premium::Wang>(p)) return 1e-9;
    return 1e-2;
}

template <CededLoss F>
SeparabilityReport separability_check(const PremiumPrinciple& principle, const ScenarioMatrix& scenarios,
                                      const std::vector<F>& treaties, std::optional<double> tolerance = std::nullopt) {
    require(treaties.size() == scenarios.cols(), "separability: need one treaty per column");
    const Pricer pricer(principle, scenarios.rows());
    std::vector<double> total(scenarios.rows(), 0.0);
    SeparabilityReport r;
    for (std::size_t j = 0; j < treaties.size(); ++j) {
        auto part = ceded(treaties[j], scenarios.column(j));
        for (std::size_t i = 0; i < part.size(); ++i) total[i] += part[i];
        r.sum_of_parts += pricer.price(std::move(part));
    }
    r.combined = pricer.price(std::move(total));
    r.relative_difference = std::abs(r.combined - r.sum_of_parts) / std::max(std::abs(r.combined), 1e-300);
    r.tolerance = tolerance.value_or(default_separability_tolerance(principle));
    r.holds = r.relative_difference <= r.tolerance;
    return r;
}

struct SeparableOptimumReport {
    double network_objective = 0.0;
    double sum_of_individual_objectives = 0.0;
    double relative_difference = 0.0;
    AllocationSolution network;
    std::vector<AllocationSolution> individual;
};

/// Solves the n-insurer problem and each single-insurer problem on its own
/// column; for a separable premium the optima coincide.
inline SeparableOptimumReport compare_with_individual_optima(const NetworkProblem& problem, const SolverOptions& options = {}) {
    problem.validate();
    SeparableOptimumReport r;
    r.network = solve_rvar_case(problem, options);
    r.network_objective = r.network.objective;
    for (std::size_t i = 0; i < problem.insurers(); ++i) {
        NetworkProblem single{problem.scenarios.select({i}), {problem.specs[i]}, problem.principle, {}, problem.cost_of_capital};
        if (!problem.premium_incomes.empty()) single.premium_incomes = {problem.premium_incomes[i]};
        r.individual.push_back(solve_rvar_case(single, options));
        r.sum_of_individual_objectives += r.individual.back().objective;
    }
    r.relative_difference = std::abs(r.network_objective - r.sum_of_individual_objectives) /
                            std::max(std::abs(r.network_objective), 1e-300);
    return r;
}

// ---------------------------------------------------------------------------
// Symmetric reduction
// ---------------------------------------------------------------------------

/// Restriction of an exchangeable problem to identical treaties f_1 = ... = f_n:
/// one shared deductible (and one shared bound for RVaR insurers).
class SymmetricProblem {
public:
    SymmetricProblem(NetworkProblem problem, bool exchangeable) : evaluator_(problem) {
        require(exchangeable, "symmetric reduction: scenario columns must be declared exchangeable");
        const auto& specs = evaluator_.problem().specs;
        for (const auto& s : specs)
            require(s == specs.front(), "symmetric reduction: all insurers must use the same risk measure");
        const auto& pr = evaluator_.problem().principle;
        require(std::holds_alternative<premium::ExpectedValue>(pr) || std::holds_alternative<premium::Wang>(pr),
                "symmetric reduction: premium principle must be expected value or Wang");
    }

    std::size_t dimension() const { return evaluator_.problem().specs.front().is_var() ? 1 : 2; }
    const NetworkEvaluator& evaluator() const noexcept { return evaluator_; }

    AllocationSolution solve(const SolverOptions& options = {}) const {
        const auto& ev = evaluator_;
        const auto& p = ev.problem();
        const std::size_t n = p.insurers();
        const bool var_case = p.specs.front().is_var();
        double a_max = ev.var_alpha_beta(0), b_max = ev.var_alpha(0), b_floor = ev.var_alpha_beta(0);
        std::vector<double> pooled;
        for (std::size_t i = 0; i < n; ++i) {
            a_max = std::min(a_max, ev.var_alpha_beta(i));
            b_max = std::min(b_max, ev.var_alpha(i));
            b_floor = std::max(b_floor, ev.var_alpha_beta(i));
            const auto v = ev.sorted(i).values();
            pooled.insert(pooled.end(), v.begin(), v.end());
        }
        auto to_ab = [&, n, var_case](const std::vector<double>& x) {
            std::vector<double> a(n, x[0]), b(n);
            for (std::size_t i = 0; i < n; ++i) b[i] = var_case ? ev.var_alpha(i) - x[0] : x[1];
            return std::pair{a, b};
        };
        SearchSpace space;
        space.dim = dimension();
        space.project = [=](std::vector<double>& x) {
            x[0] = std::clamp(x[0], 0.0, a_max);
            if (!var_case) x[1] = std::clamp(x[1], std::max(0.0, b_floor - x[0]), std::max(b_max, b_floor - x[0]));
        };
        const auto a_grid = axis_grid(pooled, 0.0, a_max, options.grid_points);
        space.candidates = [=](const std::vector<double>& x, std::size_t c) {
            if (c == 0) return a_grid;
            std::vector<double> shifted;
            for (double v : pooled) shifted.push_back(v - x[0]);
            return axis_grid(std::move(shifted), std::max(0.0, b_floor - x[0]), std::max(b_max, b_floor - x[0]), options.grid_points);
        };
        space.starts = var_case ? std::vector<std::vector<double>>{{0.0}, {a_max}, {0.5 * a_max}}
                                : std::vector<std::vector<double>>{{0.0, b_max}, {a_max, 0.0}, {0.5 * a_max, 0.5 * b_max}};
        if (var_case) space.static_grid = {a_grid};
        auto result = minimize(
            space, [&](const std::vector<double>& x) {
                const auto [a, b] = to_ab(x);
                return ev.reduced_objective(a, b);
            },
            options);
        const auto [a, b] = to_ab(result.x);
        AllocationSolution sol;
        sol.deductibles = a;
        sol.bounds = b;
        sol.objective = result.value;
        sol.trace = std::move(result.trace);
        sol.evaluations = result.evaluations;
        sol.per_insurer_capital = ev.capital(sol.treaties());
        for (std::size_t i = 0; i < n; ++i)
            sol.lower_constraint_active.push_back(!var_case && a[i] + b[i] <= ev.var_alpha_beta(i) * (1.0 + 1e-12));
        return sol;
    }

private:
    NetworkEvaluator evaluator_;
};

inline SymmetricProblem symmetric_reduction(const NetworkProblem& problem, bool exchangeable) {
    return SymmetricProblem(problem, exchangeable);
}

}  // namespace reinsnet
