#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "reinsnet/error.hpp"
#include "reinsnet/measures.hpp"
#include "reinsnet/rng.hpp"

namespace reinsnet {

inline constexpr double unbounded = std::numeric_limits<double>::infinity();

/// Anything usable as a ceded loss function x -> f(x).
template <typename F>
concept CededLoss = requires(const F& f, double x) {
    { f(x) } -> std::convertible_to<double>;
};

/// Layer treaty f(x) = min{(x - a)_+, b}; b = +inf is the stop-loss case.
struct LayerTreaty {
    double deductible = 0.0;
    double bound = unbounded;

    LayerTreaty() = default;
    LayerTreaty(double a, double b) : deductible(a), bound(b) {
        require(std::isfinite(a) && a >= 0.0, "layer treaty: deductible must be finite and >= 0");
        require(b >= 0.0 && !std::isnan(b), "layer treaty: bound must be >= 0 (or +inf)");
    }

    double operator()(double x) const noexcept { return std::min(std::max(x - deductible, 0.0), bound); }

    bool stop_loss() const noexcept { return std::isinf(bound); }

    friend bool operator==(const LayerTreaty&, const LayerTreaty&) = default;
};

/// Piecewise-linear member of the admissible class: f(0) = 0, slopes in
/// [0, 1], so that f and x - f(x) are both increasing and f is 1-Lipschitz.
class CededLossFunction {
public:
    CededLossFunction() : knots_{0.0}, slopes_{0.0}, values_{0.0} {}

    CededLossFunction(std::vector<double> knots, std::vector<double> slopes)
        : knots_(std::move(knots)), slopes_(std::move(slopes)) {
        require(!knots_.empty() && knots_.size() == slopes_.size(),
                "ceded loss function: need one slope per knot (the last slope extends to infinity)");
        require(knots_.front() == 0.0, "ceded loss function: first knot must be 0");
        for (std::size_t i = 1; i < knots_.size(); ++i)
            require(knots_[i] > knots_[i - 1] && std::isfinite(knots_[i]), "ceded loss function: knots must be strictly increasing and finite");
        for (double s : slopes_)
            require(s >= 0.0 && s <= 1.0, "ceded loss function: slopes must lie in [0,1] (f and x - f(x) increasing)");
        values_.resize(knots_.size());
        values_[0] = 0.0;
        for (std::size_t i = 1; i < knots_.size(); ++i)
            values_[i] = values_[i - 1] + slopes_[i - 1] * (knots_[i] - knots_[i - 1]);
    }

    static CededLossFunction zero() { return {}; }
    static CededLossFunction identity() { return {{0.0}, {1.0}}; }
    static CededLossFunction proportional(double share) { return {{0.0}, {share}}; }

    static CededLossFunction from_layer(const LayerTreaty& layer) {
        if (layer.bound == 0.0) return zero();
        std::vector<double> knots{0.0};
        std::vector<double> slopes;
        if (layer.deductible > 0.0) {
            slopes.push_back(0.0);
            knots.push_back(layer.deductible);
        }
        slopes.push_back(1.0);
        if (!layer.stop_loss()) {
            knots.push_back(layer.deductible + layer.bound);
            slopes.push_back(0.0);
        }
        return {std::move(knots), std::move(slopes)};
    }

    double operator()(double x) const noexcept {
        if (x <= 0.0) return 0.0;
        const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
        // Clamp guards 0 <= f(x) <= x against rounding in the accumulated values.
        return std::clamp(values_[i] + slopes_[i] * (x - knots_[i]), 0.0, x);
    }

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& slopes() const noexcept { return slopes_; }

private:
    std::vector<double> knots_;
    std::vector<double> slopes_;
    std::vector<double> values_;
};

template <CededLoss F>
std::vector<double> ceded(const F& f, std::span<const double> sample) {
    std::vector<double> out(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) out[i] = f(sample[i]);
    return out;
}

template <CededLoss F>
std::vector<double> retained(const F& f, std::span<const double> sample) {
    std::vector<double> out(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) out[i] = sample[i] - f(sample[i]);
    return out;
}

/// Checks membership of an arbitrary callable on a set of points:
/// 0 <= f(x) <= x, f increasing, x - f(x) increasing.
template <CededLoss F>
bool admissible_on(const F& f, std::vector<double> points, double tol = 1e-12) {
    std::sort(points.begin(), points.end());
    double prev_x = 0.0;
    double prev_f = f(0.0);
    if (std::abs(prev_f) > tol) return false;
    for (double x : points) {
        const double fx = f(x);
        if (fx < -tol || fx > x + tol) return false;
        if (fx < prev_f - tol) return false;
        if ((x - fx) < (prev_x - prev_f) - tol) return false;
        prev_x = x;
        prev_f = fx;
    }
    return true;
}

/// Layer that agrees with f at VaR_alpha(X) and lies below f everywhere:
/// deductible VaR - f(VaR), bound f(VaR).
template <CededLoss F>
LayerTreaty build_h(const F& f, const SortedSample& sample, double alpha) {
    const double v = sample.var(alpha);
    const double fv = f(v);
    double a = std::max(0.0, v - fv);
    // Nudge the deductible down by ulps until h(v) == f(v) holds in floating point.
    while (a > 0.0 && v - a < fv) a = std::nextafter(a, 0.0);
    return {a, fv};
}

struct KConstruction {
    LayerTreaty layer;
    double target = 0.0;    // RVaR(f(X))
    double achieved = 0.0;  // RVaR(k(X))
    int iterations = 0;
};

/// Layer with deductible VaR_{a+b}(X) - f(VaR_{a+b}(X)) whose bound M is
/// chosen by bisection so that RVaR(k(X)) = RVaR(f(X)). For beta = 0 this is
/// build_h.
template <CededLoss F>
KConstruction build_k_detailed(const F& f, const SortedSample& sample, const RiskMeasureSpec& spec) {
    spec.validate();
    if (spec.is_var()) {
        const LayerTreaty h = build_h(f, sample, spec.alpha);
        const double fv = f(sample.var(spec.alpha));
        return {h, fv, h(sample.var(spec.alpha)), 0};
    }
    const auto values = sample.values();
    const RvarWeights weights(values.size(), spec);
    const double v_low = sample.var(spec.alpha + spec.beta);
    const double v_high = sample.var(spec.alpha);
    const double deductible = std::max(0.0, v_low - f(v_low));
    const double target = weights.apply(values, f);
    const auto rvar_of = [&](double bound) {
        const LayerTreaty k{deductible, bound};
        return weights.apply(values, k);
    };
    const double tol = 1e-9 * (1.0 + std::abs(target));

    double lo = f(v_low);
    double hi = f(v_high);
    const double g_lo = rvar_of(lo);
    const double g_hi = rvar_of(hi);
    if (g_lo > target + tol || g_hi < target - tol) {
        throw std::logic_error("build_k: bisection bracket violated (RVaR(k) at endpoints " + format_shortest(g_lo) + ", " +
                               format_shortest(g_hi) + " vs target " + format_shortest(target) + ")");
    }
    int it = 0;
    if (std::abs(g_lo - target) <= tol) {
        hi = lo;
    } else {
        for (; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            if (rvar_of(mid) < target) lo = mid;
            else hi = mid;
        }
    }
    const double achieved = rvar_of(hi);
    if (std::abs(achieved - target) > tol)
        throw std::logic_error("build_k: bisection did not reach tolerance (|diff| = " + format_shortest(std::abs(achieved - target)) + ")");
    return {LayerTreaty{deductible, hi}, target, achieved, it};
}

template <CededLoss F>
LayerTreaty build_k(const F& f, const SortedSample& sample, const RiskMeasureSpec& spec) {
    return build_k_detailed(f, sample, spec).layer;
}

/// Random member of the admissible class for test harnesses: 1..8 segments,
/// interior knots from sorted uniforms on (0, max_x), slopes uniform on [0,1]
/// with atoms at 0 and 1 (probability 1/8 each).
inline CededLossFunction random_treaty(CellEngine& engine, double max_x) {
    require(max_x > 0.0 && std::isfinite(max_x), "random_treaty: max_x must be positive");
    const auto segments = 1 + static_cast<std::size_t>(engine() % 8);
    std::vector<double> knots;
    for (std::size_t i = 1; i < segments; ++i) knots.push_back(engine.uniform() * max_x);
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    knots.insert(knots.begin(), 0.0);
    std::vector<double> slopes(knots.size());
    for (auto& s : slopes) {
        const double u = engine.uniform();
        s = u < 0.125 ? 0.0 : (u > 0.875 ? 1.0 : engine.uniform());
    }
    return {std::move(knots), std::move(slopes)};
}

}  // namespace reinsnet
