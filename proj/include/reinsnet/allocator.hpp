#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reinsnet/error.hpp"
#include "reinsnet/measures.hpp"
#include "reinsnet/scenarios.hpp"
#include "reinsnet/search.hpp"
#include "reinsnet/treaties.hpp"

namespace reinsnet {

/// n insurers with RVaR capital measures sharing one scenario matrix, and a
/// reinsurer pricing the aggregate ceded loss.
struct NetworkProblem {
    ScenarioMatrix scenarios;
    std::vector<RiskMeasureSpec> specs;
    PremiumPrinciple principle;
    std::vector<double> premium_incomes;  // pi_i(X_i); empty means all zero
    double cost_of_capital = 0.06;

    void validate() const {
        require(specs.size() == scenarios.cols(), "network problem: " + std::to_string(specs.size()) + " risk measure specs for " +
                                                      std::to_string(scenarios.cols()) + " scenario columns");
        for (const auto& s : specs) s.validate();
        reinsnet::validate(principle);
        require(premium_incomes.empty() || premium_incomes.size() == specs.size(),
                "network problem: premium incomes must be empty or one per insurer");
        require(cost_of_capital >= 0.0 && cost_of_capital < 1.0, "network problem: cost of capital rate must lie in [0,1)");
    }

    std::size_t insurers() const noexcept { return specs.size(); }
    bool all_var() const {
        return std::all_of(specs.begin(), specs.end(), [](const RiskMeasureSpec& s) { return s.is_var(); });
    }
};

struct AllocationSolution {
    std::vector<double> deductibles;
    std::vector<double> bounds;
    double objective = 0.0;
    std::vector<double> per_insurer_capital;
    std::vector<bool> lower_constraint_active;  // a_i + b_i == VaR_{alpha_i+beta_i}(X_i) for RVaR insurers
    std::vector<TraceEntry> trace;
    std::size_t evaluations = 0;

    std::vector<LayerTreaty> treaties() const {
        std::vector<LayerTreaty> out;
        for (std::size_t i = 0; i < deductibles.size(); ++i) out.emplace_back(deductibles[i], bounds[i]);
        return out;
    }
};

/// Per-problem precomputation: sorted columns, RVaR weights, the VaR levels
/// that bound the finite-dimensional search and a premium pricer.
class NetworkEvaluator {
public:
    explicit NetworkEvaluator(const NetworkProblem& problem)
        : problem_(problem), pricer_(problem.principle, problem.scenarios.rows()) {
        problem_.validate();
        const std::size_t n = problem.insurers();
        for (std::size_t i = 0; i < n; ++i) {
            sorted_.emplace_back(problem.scenarios.column(i));
            weights_.emplace_back(problem.scenarios.rows(), problem.specs[i]);
            var_alpha_.push_back(sorted_.back().var(problem.specs[i].alpha));
            var_alpha_beta_.push_back(sorted_.back().var(std::min(1.0, problem.specs[i].alpha + problem.specs[i].beta)));
        }
    }

    const NetworkProblem& problem() const noexcept { return problem_; }
    const SortedSample& sorted(std::size_t i) const { return sorted_[i]; }
    double var_alpha(std::size_t i) const { return var_alpha_[i]; }
    double var_alpha_beta(std::size_t i) const { return var_alpha_beta_[i]; }
    const Pricer& pricer() const noexcept { return pricer_; }

    /// RVaR of the retained loss x - f(x), evaluated as sum_k w_k R_f(x_(k)).
    template <CededLoss F>
    double retained_rvar(std::size_t i, const F& f) const {
        return weights_[i].apply(sorted_[i].values(), [&](double x) { return x - f(x); });
    }

    template <CededLoss F>
    std::vector<double> ceded_sum(const std::vector<F>& treaties) const {
        const auto& s = problem_.scenarios;
        std::vector<double> total(s.rows(), 0.0);
        for (std::size_t i = 0; i < treaties.size(); ++i) {
            const auto col = s.column(i);
            for (std::size_t r = 0; r < s.rows(); ++r) total[r] += treaties[i](col[r]);
        }
        return total;
    }

    /// sum_i RVaR_i(R_{f_i}(X_i)) + pi(sum_i f_i(X_i))
    template <CededLoss F>
    double objective(const std::vector<F>& treaties) const {
        require(treaties.size() == problem_.insurers(), "objective: need one treaty per insurer");
        double total = 0.0;
        for (std::size_t i = 0; i < treaties.size(); ++i) total += retained_rvar(i, treaties[i]);
        return total + pricer_.price(ceded_sum(treaties));
    }

    /// The reduced objective written directly in (a, b):
    /// sum a_i + sum_{beta_i > 0} RVaR((X_i - a_i - b_i)_+) + pi(sum min{(X_i - a_i)_+, b_i}).
    double reduced_objective(const std::vector<double>& a, const std::vector<double>& b) const {
        double total = 0.0;
        std::vector<LayerTreaty> layers;
        for (std::size_t i = 0; i < a.size(); ++i) {
            total += a[i];
            if (!problem_.specs[i].is_var()) {
                const double c = a[i] + b[i];
                total += weights_[i].apply(sorted_[i].values(), [c](double x) { return std::max(x - c, 0.0); });
            }
            layers.emplace_back(a[i], b[i]);
        }
        return total + pricer_.price(ceded_sum(layers));
    }

    /// Per-insurer capital requirement
    /// (RVaR_i(R_{f_i}) - pi_i + psi(f_i(X_i), sum_j f_j(X_j))) / (1 - r_CoC).
    template <CededLoss F>
    std::vector<double> capital(const std::vector<F>& treaties) const {
        const auto& s = problem_.scenarios;
        const double scale = 1.0 / (1.0 - problem_.cost_of_capital);
        const auto total = ceded_sum(treaties);
        const double total_mean = mean(total);
        const double total_premium = pricer_.price(total);
        std::vector<double> out;
        for (std::size_t i = 0; i < treaties.size(); ++i) {
            const auto part = ceded(treaties[i], s.column(i));
            const double mw = mean(part);
            double psi = 0.0;
            if (total_mean != 0.0) psi = mw * total_premium / total_mean;
            const double income = problem_.premium_incomes.empty() ? 0.0 : problem_.premium_incomes[i];
            out.push_back((retained_rvar(i, treaties[i]) - income + psi) * scale);
        }
        return out;
    }

private:
    NetworkProblem problem_;
    Pricer pricer_;
    std::vector<SortedSample> sorted_;
    std::vector<RvarWeights> weights_;
    std::vector<double> var_alpha_;
    std::vector<double> var_alpha_beta_;
};

template <CededLoss F>
double objective(const NetworkProblem& problem, const std::vector<F>& treaties) {
    return NetworkEvaluator(problem).objective(treaties);
}

template <CededLoss F>
std::vector<double> capital_requirement(const NetworkProblem& problem, const std::vector<F>& treaties) {
    return NetworkEvaluator(problem).capital(treaties);
}

namespace detail {

// Coordinates: a_0..a_{n-1}, then b_i for every insurer with beta_i > 0.
struct LayerCoordinates {
    std::vector<std::size_t> free_b;  // insurer index of each b coordinate

    LayerCoordinates(const NetworkProblem& p) {
        for (std::size_t i = 0; i < p.insurers(); ++i)
            if (!p.specs[i].is_var()) free_b.push_back(i);
    }
};

inline AllocationSolution solve_layers(const NetworkEvaluator& ev, const SolverOptions& options) {
    const auto& p = ev.problem();
    const std::size_t n = p.insurers();
    const LayerCoordinates coords(p);
    const std::size_t dim = n + coords.free_b.size();

    std::vector<std::size_t> b_slot(n, dim);
    for (std::size_t k = 0; k < coords.free_b.size(); ++k) b_slot[coords.free_b[k]] = n + k;

    auto to_ab = [&ev, &p, n, b_slot](const std::vector<double>& x) {
        std::vector<double> a(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n)), b(n);
        for (std::size_t i = 0; i < n; ++i)
            b[i] = p.specs[i].is_var() ? ev.var_alpha(i) - a[i] : x[b_slot[i]];
        return std::pair{a, b};
    };

    SearchSpace space;
    space.dim = dim;
    space.project = [&ev, n, b_slot, &p](std::vector<double>& x) {
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::clamp(x[i], 0.0, ev.var_alpha_beta(i));
            if (!p.specs[i].is_var()) {
                double& b = x[b_slot[i]];
                b = std::clamp(b, std::max(0.0, ev.var_alpha_beta(i) - x[i]), ev.var_alpha(i));
            }
        }
    };
    std::vector<std::vector<double>> a_grid(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = ev.sorted(i).values();
        a_grid[i] = axis_grid({v.begin(), v.end()}, 0.0, ev.var_alpha_beta(i), options.grid_points);
    }
    space.candidates = [&ev, n, a_grid, coords, grid_points = options.grid_points](const std::vector<double>& x, std::size_t c) {
        if (c < n) return a_grid[c];
        const std::size_t i = coords.free_b[c - n];
        const double a = x[i];
        const auto v = ev.sorted(i).values();
        std::vector<double> shifted;
        shifted.reserve(v.size());
        for (double xv : v) shifted.push_back(xv - a);
        return axis_grid(std::move(shifted), std::max(0.0, ev.var_alpha_beta(i) - a), ev.var_alpha(i), grid_points);
    };

    // Starts: lower corner (full cession up to VaR_alpha), upper corner, centre, random grid points.
    std::vector<double> lower(dim), upper(dim), centre(dim);
    for (std::size_t i = 0; i < n; ++i) {
        lower[i] = 0.0;
        upper[i] = ev.var_alpha_beta(i);
        centre[i] = 0.5 * ev.var_alpha_beta(i);
        if (b_slot[i] < dim) {
            lower[b_slot[i]] = ev.var_alpha(i);
            upper[b_slot[i]] = 0.0;
            centre[b_slot[i]] = 0.5 * ev.var_alpha(i);
        }
    }
    space.starts = {lower, upper, centre};
    const CounterRng rng(options.seed);
    for (std::size_t s = 0; s < options.random_starts; ++s) {
        std::vector<double> x(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            const auto cands = space.candidates(x, c);
            x[c] = cands[static_cast<std::size_t>(rng.bits(1000 + s, c) % cands.size())];
        }
        space.starts.push_back(std::move(x));
    }
    if (coords.free_b.empty()) space.static_grid = a_grid;

    auto result = minimize(
        space, [&](const std::vector<double>& x) {
            const auto [a, b] = to_ab(x);
            return ev.reduced_objective(a, b);
        },
        options);

    auto [a, b] = to_ab(result.x);
    AllocationSolution sol;
    sol.deductibles = a;
    sol.bounds = b;
    sol.objective = result.value;
    sol.trace = std::move(result.trace);
    sol.evaluations = result.evaluations;
    const auto layers = sol.treaties();
    sol.per_insurer_capital = ev.capital(layers);
    for (std::size_t i = 0; i < n; ++i)
        sol.lower_constraint_active.push_back(!p.specs[i].is_var() && a[i] + b[i] <= ev.var_alpha_beta(i) * (1.0 + 1e-12));
    return sol;
}

}  // namespace detail

/// Optimal layers when every insurer uses VaR: minimise
/// sum a_i + pi(sum min{(X_i - a_i)_+, VaR_i - a_i}) over 0 <= a_i <= VaR_i.
inline AllocationSolution solve_var_case(const NetworkProblem& problem, const SolverOptions& options = {}) {
    problem.validate();
    if (!problem.all_var())
        throw ValidationError("solve_var_case: some insurer has beta > 0; use solve_rvar_case");
    return detail::solve_layers(NetworkEvaluator(problem), options);
}

/// Optimal layers for general RVaR insurers over
/// a_i in [0, VaR_{alpha+beta}], b_i in [0, VaR_alpha], a_i + b_i >= VaR_{alpha+beta}
/// (beta_i > 0) and b_i = VaR_alpha - a_i (beta_i = 0).
inline AllocationSolution solve_rvar_case(const NetworkProblem& problem, const SolverOptions& options = {}) {
    problem.validate();
    return detail::solve_layers(NetworkEvaluator(problem), options);
}

// ---------------------------------------------------------------------------
// Dominance harness
// ---------------------------------------------------------------------------

struct DominanceViolation {
    std::size_t trial = 0;
    double objective_f = 0.0;
    double objective_layer = 0.0;
};

struct DominanceReport {
    std::string construction;  // "h" (all VaR) or "k"
    std::size_t trials = 0;
    double tolerance = 0.0;
    double min_gap = 0.0;      // min over trials of objective(f) - objective(layers)
    double mean_gap = 0.0;
    double min_relative_gap = 0.0;
    double max_rvar_mismatch = 0.0;  // max |RVaR(f(X)) - RVaR(k(X))| / (1 + RVaR(f(X)))
    bool preconditions_met = true;
    std::vector<std::string> notes;
    std::vector<DominanceViolation> violations;
};

/// Draws random admissible treaties, replaces each by its layer improvement
/// (h for VaR insurers, k otherwise) and compares both objectives on the same
/// scenarios. Violations are reported, not thrown.
inline DominanceReport dominance_harness(const NetworkProblem& problem, std::size_t trials, std::uint64_t seed,
                                         double tolerance = 1e-2, std::optional<CopulaSpec> copula = std::nullopt) {
    const NetworkEvaluator ev(problem);
    const std::size_t n = problem.insurers();
    DominanceReport rep;
    rep.construction = problem.all_var() ? "h" : "k";
    rep.trials = trials;
    rep.tolerance = tolerance;
    if (rep.construction == "k") {
        if (!is_icx_consistent(problem.principle)) {
            rep.preconditions_met = false;
            rep.notes.push_back("premium principle is not known to be consistent with the increasing convex order");
        }
        if (!copula) {
            rep.preconditions_met = false;
            rep.notes.push_back("copula of the scenarios is unknown; PDS dependence cannot be confirmed");
        } else if (!is_pds_family(*copula)) {
            rep.preconditions_met = false;
            rep.notes.push_back("copula family is not a documented PDS family");
        }
    }
    const CounterRng rng(seed);
    double gap_sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        std::vector<CededLossFunction> fs;
        std::vector<LayerTreaty> layers;
        for (std::size_t i = 0; i < n; ++i) {
            CellEngine engine(rng, t, i);
            const double top = ev.sorted(i).values().back();
            fs.push_back(random_treaty(engine, top > 0.0 ? top : 1.0));
            if (problem.specs[i].is_var()) {
                layers.push_back(build_h(fs.back(), ev.sorted(i), problem.specs[i].alpha));
            } else {
                const auto k = build_k_detailed(fs.back(), ev.sorted(i), problem.specs[i]);
                rep.max_rvar_mismatch = std::max(rep.max_rvar_mismatch, std::abs(k.achieved - k.target) / (1.0 + std::abs(k.target)));
                layers.push_back(k.layer);
            }
        }
        const double of = ev.objective(fs);
        const double ol = ev.objective(layers);
        const double gap = of - ol;
        const double rel = gap / std::max(1e-300, std::abs(of));
        if (t == 0 || gap < rep.min_gap) rep.min_gap = gap;
        if (t == 0 || rel < rep.min_relative_gap) rep.min_relative_gap = rel;
        gap_sum += gap;
        if (ol - of > tolerance * std::abs(of)) rep.violations.push_back({t, of, ol});
    }
    rep.mean_gap = trials ? gap_sum / static_cast<double>(trials) : 0.0;
    return rep;
}

}  // namespace reinsnet
