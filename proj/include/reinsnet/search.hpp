#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "reinsnet/parallel.hpp"
#include "reinsnet/rng.hpp"

namespace reinsnet {

struct SolverOptions {
    std::size_t grid_points = 101;      // candidates per axis
    std::size_t random_starts = 1;      // in addition to the lower corner, upper corner and centre
    std::size_t max_sweeps = 50;
    int golden_iterations = 100;
    bool pair_polish = true;            // moves along e_p +/- e_q after coordinate descent stalls
    std::size_t exhaustive_limit = 20000;  // full grid enumeration when the grid product is this small
    std::uint64_t seed = 0;
};

struct TraceEntry {
    std::size_t start = 0;
    std::string phase;      // "start", "grid", "golden", "pair", "exhaustive"
    double objective = 0.0; // best objective found so far (non-increasing)
};

/// Box-like search space handed to the minimiser. Coordinates are searched
/// one at a time over sorted candidate lists; project() restores feasibility
/// after every move.
struct SearchSpace {
    std::size_t dim = 0;
    std::function<std::vector<double>(const std::vector<double>& x, std::size_t coord)> candidates;
    std::function<void(std::vector<double>& x)> project;
    std::vector<std::vector<double>> starts;
    // Full grid used for exhaustive enumeration; empty disables it.
    std::vector<std::vector<double>> static_grid;
};

struct SearchResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::vector<TraceEntry> trace;
    std::size_t evaluations = 0;
};

namespace detail {

inline double tie_tolerance(double v) { return 1e-12 * (1.0 + std::abs(v)); }

inline bool lexicographically_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

class Minimizer {
public:
    using Objective = std::function<double(const std::vector<double>&)>;

    Minimizer(const SearchSpace& space, Objective f, const SolverOptions& opt) : space_(space), f_(std::move(f)), opt_(opt) {}

    SearchResult run() {
        std::vector<std::vector<double>> starts = space_.starts;
        if (!space_.static_grid.empty()) {
            double product = 1.0;
            for (const auto& g : space_.static_grid) product *= static_cast<double>(g.size());
            if (product <= static_cast<double>(opt_.exhaustive_limit)) starts.push_back(exhaustive());
        }
        for (std::size_t s = 0; s < starts.size(); ++s) {
            start_ = s;
            descend(starts[s]);
        }
        result_.evaluations = evaluations_;
        return result_;
    }

private:
    double eval(const std::vector<double>& x) {
        ++evaluations_;
        return f_(x);
    }

    std::vector<double> eval_many(const std::vector<std::vector<double>>& xs) {
        std::vector<double> out(xs.size());
        parallel_for(xs.size(), [&](std::size_t i) { out[i] = f_(xs[i]); }, 1);
        evaluations_ += xs.size();
        return out;
    }

    void offer(const std::vector<double>& x, double v, const std::string& phase) {
        const double tol = tie_tolerance(result_.value);
        const bool better = v < result_.value - tol;
        const bool tie_smaller = std::abs(v - result_.value) <= tol && lexicographically_less(x, result_.x);
        if (result_.x.empty() || better || tie_smaller) {
            result_.x = x;
            result_.value = std::min(v, result_.value);
        }
        result_.trace.push_back({start_, phase, result_.value});
    }

    std::vector<double> exhaustive() {
        const auto& grid = space_.static_grid;
        std::vector<std::size_t> pos(grid.size(), 0);
        std::vector<std::vector<double>> points;
        while (true) {
            std::vector<double> x(grid.size());
            for (std::size_t j = 0; j < grid.size(); ++j) x[j] = grid[j][pos[j]];
            space_.project(x);
            points.push_back(std::move(x));
            std::size_t j = 0;
            while (j < grid.size() && ++pos[j] == grid[j].size()) pos[j++] = 0;
            if (j == grid.size()) break;
        }
        const auto values = eval_many(points);
        std::size_t best = 0;
        for (std::size_t i = 1; i < points.size(); ++i) {
            const double tol = tie_tolerance(values[best]);
            if (values[i] < values[best] - tol ||
                (std::abs(values[i] - values[best]) <= tol && lexicographically_less(points[i], points[best])))
                best = i;
        }
        return points[best];
    }

    // Moves coordinate c over its candidate list. Returns true on a move.
    bool grid_step(std::vector<double>& x, double& fx, std::size_t c) {
        const auto cands = space_.candidates(x, c);
        if (cands.empty()) return false;
        std::vector<std::vector<double>> points;
        points.reserve(cands.size());
        for (double v : cands) {
            auto y = x;
            y[c] = v;
            space_.project(y);
            points.push_back(std::move(y));
        }
        const auto values = eval_many(points);
        const double lowest = *std::min_element(values.begin(), values.end());
        std::size_t pick = 0;
        while (values[pick] > lowest + tie_tolerance(lowest)) ++pick;  // smallest candidate within tie tolerance
        const double tol = tie_tolerance(fx);
        const bool improves = values[pick] < fx - tol;
        const bool tie_smaller = values[pick] <= fx + tol && lexicographically_less(points[pick], x);
        if (improves || tie_smaller) {
            x = points[pick];
            fx = std::min(values[pick], fx);
            offer(x, values[pick], "grid");
            return true;
        }
        return false;
    }

    // Golden-section search on coordinate c within the bracket of neighbouring candidates.
    bool golden_step(std::vector<double>& x, double& fx, std::size_t c) {
        const auto cands = space_.candidates(x, c);
        if (cands.size() < 2) return false;
        const auto it = std::lower_bound(cands.begin(), cands.end(), x[c]);
        const std::size_t k = static_cast<std::size_t>(it - cands.begin());
        double lo = cands[k == 0 ? 0 : k - 1];
        double hi = cands[std::min(k + 1, cands.size() - 1)];
        if (!(hi > lo)) return false;
        auto at = [&](double v) {
            auto y = x;
            y[c] = v;
            space_.project(y);
            return std::pair{y, eval(y)};
        };
        constexpr double phi = 0.6180339887498949;
        double p = hi - phi * (hi - lo), q = lo + phi * (hi - lo);
        auto fp = at(p).second, fq = at(q).second;
        for (int i = 0; i < opt_.golden_iterations && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++i) {
            if (fp <= fq) {
                hi = q;
                q = p;
                fq = fp;
                p = hi - phi * (hi - lo);
                fp = at(p).second;
            } else {
                lo = p;
                p = q;
                fp = fq;
                q = lo + phi * (hi - lo);
                fq = at(q).second;
            }
        }
        auto [y, fy] = at(fp <= fq ? p : q);
        if (fy < fx - tie_tolerance(fx)) {
            x = std::move(y);
            fx = fy;
            offer(x, fx, "golden");
            return true;
        }
        return false;
    }

    bool pair_step(std::vector<double>& x, double& fx) {
        bool moved = false;
        for (std::size_t p = 0; p < space_.dim; ++p) {
            for (std::size_t q = p + 1; q < space_.dim; ++q) {
                for (double sign : {1.0, -1.0}) {
                    const auto cp = space_.candidates(x, p);
                    const double span = cp.size() >= 2 ? cp.back() - cp.front() : 0.0;
                    double step = span / static_cast<double>(opt_.grid_points);
                    for (int halvings = 0; halvings < 40 && step > 1e-10 * span; ++halvings, step *= 0.5) {
                        for (double dir : {1.0, -1.0}) {
                            while (true) {
                                auto y = x;
                                y[p] += dir * step;
                                y[q] += dir * sign * step;
                                space_.project(y);
                                if (y == x) break;
                                const double fy = eval(y);
                                if (fy < fx - tie_tolerance(fx)) {
                                    x = std::move(y);
                                    fx = fy;
                                    offer(x, fx, "pair");
                                    moved = true;
                                } else {
                                    break;
                                }
                            }
                        }
                    }
                }
            }
        }
        return moved;
    }

    void descend(std::vector<double> x) {
        space_.project(x);
        double fx = eval(x);
        offer(x, fx, "start");
        for (std::size_t round = 0; round < opt_.max_sweeps; ++round) {
            const double f_round = fx;
            bool moved = false;
            for (std::size_t sweep = 0; sweep < opt_.max_sweeps; ++sweep) {
                bool any = false;
                for (std::size_t c = 0; c < space_.dim; ++c) any = grid_step(x, fx, c) || any;
                moved = moved || any;
                if (!any) break;
            }
            bool refined = false;
            for (std::size_t c = 0; c < space_.dim; ++c) refined = golden_step(x, fx, c) || refined;
            if (opt_.pair_polish && space_.dim >= 2) refined = pair_step(x, fx) || refined;
            if (!refined) break;
            // Rounds gaining less than 1e-10 relative only chase rounding-level slopes.
            if (f_round - fx <= 1e-10 * (1.0 + std::abs(f_round))) break;
        }
    }

    const SearchSpace& space_;
    Objective f_;
    SolverOptions opt_;
    SearchResult result_;
    std::size_t start_ = 0;
    std::size_t evaluations_ = 0;
};

}  // namespace detail

/// Derivative-free minimisation: multi-start coordinate descent over
/// per-axis candidate grids, golden-section refinement between neighbouring
/// candidates and optional pairwise pattern moves. Among objective values
/// within 1e-12 relative, the lexicographically smallest point wins.
inline SearchResult minimize(const SearchSpace& space, std::function<double(const std::vector<double>&)> f,
                             const SolverOptions& options) {
    return detail::Minimizer(space, std::move(f), options).run();
}

/// Thins a sorted list of distinct values to at most `count` entries, keeping
/// both endpoints; pads sparse lists with an even grid over [lo, hi].
inline std::vector<double> axis_grid(std::vector<double> values, double lo, double hi, std::size_t count) {
    values.push_back(lo);
    values.push_back(hi);
    std::sort(values.begin(), values.end());
    values.erase(std::remove_if(values.begin(), values.end(), [&](double v) { return v < lo || v > hi; }), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (count < 2) count = 2;
    if (values.size() > count) {
        std::vector<double> thin;
        thin.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            thin.push_back(values[i * (values.size() - 1) / (count - 1)]);
        thin.erase(std::unique(thin.begin(), thin.end()), thin.end());
        return thin;
    }
    if (values.size() < count && hi > lo) {
        for (std::size_t i = 0; i < count; ++i)
            values.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
        values.push_back(hi);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        values.erase(std::remove_if(values.begin(), values.end(), [&](double v) { return v < lo || v > hi; }), values.end());
    }
    return values;
}

}  // namespace reinsnet
