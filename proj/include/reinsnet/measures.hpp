#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "reinsnet/error.hpp"
#include "reinsnet/scenarios.hpp"

namespace reinsnet {

// ---------------------------------------------------------------------------
// Risk measures
// ---------------------------------------------------------------------------

/// Range-Value-at-Risk levels. beta = 0 gives VaR_alpha, alpha = 0 gives ES_beta.
struct RiskMeasureSpec {
    double alpha = 0.0;
    double beta = 0.0;

    void validate() const {
        require(alpha >= 0.0, "risk measure: alpha must be >= 0");
        require(beta >= 0.0, "risk measure: beta must be >= 0");
        require(alpha + beta <= 1.0 + 1e-12, "risk measure: constraint alpha + beta <= 1 violated (alpha=" +
                                                 format_shortest(alpha) + ", beta=" + format_shortest(beta) + ")");
        require(alpha + beta > 0.0, "risk measure: constraint alpha + beta > 0 violated");
    }

    bool is_var() const noexcept { return beta == 0.0; }

    friend bool operator==(const RiskMeasureSpec&, const RiskMeasureSpec&) = default;
};

namespace detail {

// ceil(p * m) with products within 1e-9 of an integer snapped to it, so that
// levels such as 0.9 with m = 10 address the 9th order statistic.
inline std::size_t ceil_index(double p, std::size_t m) {
    const double t = p * static_cast<double>(m);
    const double r = std::round(t);
    const double k = std::abs(t - r) <= 1e-9 ? r : std::ceil(t);
    return static_cast<std::size_t>(std::max(0.0, k));
}

inline double snapped_fraction(double p, std::size_t m) {
    const double t = p * static_cast<double>(m);
    const double r = std::round(t);
    return std::abs(t - r) <= 1e-9 ? r : t;
}

}  // namespace detail

/// Quadrature weights of the empirical RVaR: RVaR(X) = sum_k w_k x_(k) over
/// the sorted sample. Shared by every caller that evaluates RVaR of an
/// increasing transform t(X) as sum_k w_k t(x_(k)).
struct RvarWeights {
    std::vector<std::size_t> index;  // 0-based order-statistic positions, ascending
    std::vector<double> weight;

    RvarWeights(std::size_t m, const RiskMeasureSpec& spec) {
        spec.validate();
        require(m >= 1, "risk measure: empty sample");
        if (spec.beta == 0.0) {
            const std::size_t k = std::clamp<std::size_t>(detail::ceil_index(1.0 - spec.alpha, m), 1, m);
            index.push_back(k - 1);
            weight.push_back(1.0);
            return;
        }
        // u = 1 - s ranges over [1 - alpha - beta, 1 - alpha]; x_(k) covers ((k-1)/m, k/m].
        const double lo = std::max(0.0, detail::snapped_fraction(1.0 - spec.alpha - spec.beta, m));
        const double hi = std::min(static_cast<double>(m), detail::snapped_fraction(1.0 - spec.alpha, m));
        const double scale = static_cast<double>(m) * spec.beta;
        const auto first = static_cast<std::size_t>(std::floor(lo));
        const auto last = std::min<std::size_t>(m, static_cast<std::size_t>(std::ceil(hi)));
        for (std::size_t k = first + 1; k <= last; ++k) {
            const double overlap = std::min(hi, static_cast<double>(k)) - std::max(lo, static_cast<double>(k - 1));
            if (overlap > 0.0) {
                index.push_back(k - 1);
                weight.push_back(overlap / scale);
            }
        }
    }

    double apply(std::span<const double> sorted) const {
        double s = 0.0;
        for (std::size_t i = 0; i < index.size(); ++i) s += weight[i] * sorted[index[i]];
        return s;
    }

    template <typename F>
    double apply(std::span<const double> sorted, F&& t) const {
        double s = 0.0;
        for (std::size_t i = 0; i < index.size(); ++i) s += weight[i] * t(sorted[index[i]]);
        return s;
    }
};

/// Generalised inverse F^{-1}(p) of the empirical law: x_(ceil(p m)), with
/// p = 0 mapped to the sample minimum.
inline double quantile(std::span<const double> sorted, double p) {
    require(!sorted.empty(), "quantile: empty sample");
    require(p >= 0.0 && p <= 1.0, "quantile: level must lie in [0,1]");
    require(std::is_sorted(sorted.begin(), sorted.end()), "quantile: sample must be sorted ascending");
    const std::size_t k = std::clamp<std::size_t>(detail::ceil_index(p, sorted.size()), 1, sorted.size());
    return sorted[k - 1];
}

/// A sample held in ascending order; the common input of all law-invariant
/// functionals below.
class SortedSample {
public:
    explicit SortedSample(std::span<const double> sample) : values_(sample.begin(), sample.end()) {
        require(!values_.empty(), "empty sample");
        std::sort(values_.begin(), values_.end());
    }
    explicit SortedSample(std::vector<double>&& sample) : values_(std::move(sample)) {
        require(!values_.empty(), "empty sample");
        std::sort(values_.begin(), values_.end());
    }

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

    double quantile(double p) const { return reinsnet::quantile(values_, p); }
    double var(double alpha) const {
        require(alpha >= 0.0 && alpha <= 1.0, "VaR: alpha must lie in [0,1]");
        return quantile(1.0 - alpha);
    }
    double rvar(const RiskMeasureSpec& spec) const { return RvarWeights(values_.size(), spec).apply(values_); }
    double es(double beta) const {
        require(beta > 0.0 && beta <= 1.0, "ES: beta must lie in (0,1]");
        // tail average: the top floor(t) values in full plus a fraction of the next one
        const std::size_t m = values_.size();
        const double t = detail::snapped_fraction(beta, m);
        const auto whole = static_cast<std::size_t>(std::floor(t));
        double s = 0.0;
        for (std::size_t i = 0; i < whole; ++i) s += values_[m - 1 - i];
        const double frac = t - static_cast<double>(whole);
        if (frac > 0.0) s += frac * values_[m - 1 - whole];
        return s / t;
    }

private:
    std::vector<double> values_;
};

inline double value_at_risk(std::span<const double> sample, double alpha) { return SortedSample(sample).var(alpha); }
inline double range_value_at_risk(std::span<const double> sample, const RiskMeasureSpec& spec) {
    return SortedSample(sample).rvar(spec);
}
inline double expected_shortfall(std::span<const double> sample, double beta) { return SortedSample(sample).es(beta); }

// ---------------------------------------------------------------------------
// Distortions
// ---------------------------------------------------------------------------

/// Increasing g: [0,1] -> [0,1] with g(0) = 0 and g(1) = 1. A declared
/// concavity is spot-checked on a 1e-3 grid at construction.
class DistortionFunction {
public:
    DistortionFunction(std::string name, std::function<double(double)> g, bool concave)
        : name_(std::move(name)), g_(std::move(g)), concave_(concave) {
        validate();
    }

    double operator()(double u) const { return g_(u); }
    const std::string& name() const noexcept { return name_; }
    bool concave() const noexcept { return concave_; }

    static DistortionFunction identity() {
        return {"id", [](double u) { return u; }, true};
    }
    static DistortionFunction power(double r) {
        require(r > 0.0, "power distortion: exponent must be > 0");
        return {r == 0.5 ? std::string("sqrt") : "pow=" + format_shortest(r), [r](double u) { return std::pow(u, r); },
                r <= 1.0};
    }
    static DistortionFunction sqrt() { return power(0.5); }
    static DistortionFunction dual_power(double r) {
        require(r > 0.0, "dual power distortion: exponent must be > 0");
        return {"dual=" + format_shortest(r), [r](double u) { return 1.0 - std::pow(1.0 - u, r); }, r >= 1.0};
    }
    /// Wang transform Phi(Phi^{-1}(u) + lambda).
    static DistortionFunction wang_transform(double lambda) {
        return {"wangt=" + format_shortest(lambda),
                [lambda](double u) {
                    if (u <= 0.0) return 0.0;
                    if (u >= 1.0) return 1.0;
                    return normal_cdf(normal_quantile(u) + lambda);
                },
                lambda >= 0.0};
    }

private:
    void validate() const {
        constexpr int steps = 1000;
        require(std::abs(g_(0.0)) <= 1e-12, "distortion " + name_ + ": g(0) must be 0");
        require(std::abs(g_(1.0) - 1.0) <= 1e-12, "distortion " + name_ + ": g(1) must be 1");
        double prev = g_(0.0);
        for (int i = 1; i <= steps; ++i) {
            const double cur = g_(static_cast<double>(i) / steps);
            require(cur >= prev - 1e-12, "distortion " + name_ + ": not increasing near u=" + format_shortest(i / double(steps)));
            prev = cur;
        }
        if (concave_) {
            for (int i = 1; i < steps; ++i) {
                const double u = static_cast<double>(i) / steps;
                const double mid = g_(u);
                const double chord = 0.5 * (g_(u - 1.0 / steps) + g_(u + 1.0 / steps));
                require(mid >= chord - 1e-12, "distortion " + name_ + ": declared concave but midpoint check fails near u=" +
                                                  format_shortest(u));
            }
        }
    }

    std::string name_;
    std::function<double(double)> g_;
    bool concave_;
};

// ---------------------------------------------------------------------------
// Premium principles
// ---------------------------------------------------------------------------

namespace premium {
struct ExpectedValue { double theta = 0.0; };
struct Wang { DistortionFunction distortion = DistortionFunction::identity(); double theta = 0.0; };
struct Exponential { double gamma = 1.0; };
}  // namespace premium

using PremiumPrinciple = std::variant<premium::ExpectedValue, premium::Wang, premium::Exponential>;

inline void validate(const PremiumPrinciple& p) {
    std::visit(
        [](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, premium::Exponential>) {
                require(v.gamma > 0.0 && std::isfinite(v.gamma), "exponential premium: gamma must be > 0");
            } else {
                require(v.theta >= 0.0 && std::isfinite(v.theta), "premium: theta must be >= 0");
            }
        },
        p);
}

inline std::string describe(const PremiumPrinciple& p) {
    return std::visit(
        [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, premium::ExpectedValue>) return "ev:" + format_shortest(v.theta);
            else if constexpr (std::is_same_v<V, premium::Wang>) return "wang:" + v.distortion.name() + ":" + format_shortest(v.theta);
            else return "exp:" + format_shortest(v.gamma);
        },
        p);
}

/// Monotone and translation invariant (hence 1-Lipschitz in sup norm).
inline bool is_translation_invariant(const PremiumPrinciple& p) {
    if (const auto* w = std::get_if<premium::Wang>(&p)) return w->theta == 0.0;
    if (const auto* e = std::get_if<premium::ExpectedValue>(&p)) return e->theta == 0.0;
    return true;
}

/// Consistent with the increasing convex order: expected value, exponential
/// and Wang with a concave distortion.
inline bool is_icx_consistent(const PremiumPrinciple& p) {
    if (const auto* w = std::get_if<premium::Wang>(&p)) return w->distortion.concave();
    return true;
}

inline double mean(std::span<const double> sample) {
    require(!sample.empty(), "mean: empty sample");
    double s = 0.0;
    for (double x : sample) s += x;
    return s / static_cast<double>(sample.size());
}

/// Evaluates one premium principle on samples of a fixed length m. The Wang
/// distortion is tabulated once at the m survival levels; price() is const
/// and safe to call concurrently.
class Pricer {
public:
    Pricer(PremiumPrinciple principle, std::size_t m) : principle_(std::move(principle)), m_(m) {
        validate(principle_);
        require(m_ >= 1, "premium: empty sample");
        if (const auto* w = std::get_if<premium::Wang>(&principle_)) {
            // g((m - j) / m) for j = 0..m-1
            g_table_.resize(m_);
            for (std::size_t j = 0; j < m_; ++j)
                g_table_[j] = w->distortion(static_cast<double>(m_ - j) / static_cast<double>(m_));
        }
    }

    const PremiumPrinciple& principle() const noexcept { return principle_; }
    std::size_t size() const noexcept { return m_; }

    /// Consumes the sample (it may be reordered).
    double price(std::vector<double> sample) const {
        require(sample.size() == m_, "premium: sample length does not match pricer");
        return std::visit(
            [&](const auto& p) -> double {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, premium::ExpectedValue>) {
                    return (1.0 + p.theta) * mean(sample);
                } else if constexpr (std::is_same_v<P, premium::Wang>) {
                    std::sort(sample.begin(), sample.end());
                    return (1.0 + p.theta) * sorted_choquet(sample);
                } else {
                    const double top = *std::max_element(sample.begin(), sample.end());
                    double s = 0.0;
                    for (double x : sample) s += std::exp(p.gamma * (x - top));
                    return std::log(s / static_cast<double>(m_)) / p.gamma + top;
                }
            },
            principle_);
    }

    double price(std::span<const double> sample) const { return price(std::vector<double>(sample.begin(), sample.end())); }

    /// Wang premium of an already sorted sample.
    double price_sorted(std::span<const double> sorted) const {
        const auto* w = std::get_if<premium::Wang>(&principle_);
        if (w == nullptr) return price(sorted);
        require(sorted.size() == m_, "premium: sample length does not match pricer");
        return (1.0 + w->theta) * sorted_choquet(sorted);
    }

private:
    // sum_j g(S) * (x_(j+1) - x_(j)) with x_(0) = 0: exact integral of g(S_X) over the step survival function.
    double sorted_choquet(std::span<const double> sorted) const {
        double s = 0.0;
        double prev = 0.0;
        for (std::size_t j = 0; j < m_; ++j) {
            s += g_table_[j] * (sorted[j] - prev);
            prev = sorted[j];
        }
        return s;
    }

    PremiumPrinciple principle_;
    std::size_t m_;
    std::vector<double> g_table_;
};

inline double premium_of(const PremiumPrinciple& principle, std::span<const double> sample) {
    return Pricer(principle, sample.size()).price(sample);
}

/// gamma * max(sample) beyond 700 would overflow exp() without the max shift.
inline bool exponential_saturates(const PremiumPrinciple& principle, std::span<const double> sample) {
    const auto* e = std::get_if<premium::Exponential>(&principle);
    if (e == nullptr || sample.empty()) return false;
    return e->gamma * *std::max_element(sample.begin(), sample.end()) > 700.0;
}

/// Default allocation rule psi(W, Y) = E[W] * pi(Y) / E[Y], with 0/0 = 0.
/// W must be one summand of Y on the same scenarios.
inline double premium_allocation(const PremiumPrinciple& principle, std::span<const double> ceded_i,
                                 std::span<const double> total_ceded) {
    require(ceded_i.size() == total_ceded.size(), "premium allocation: samples must share scenarios");
    const double mw = mean(ceded_i);
    const double my = mean(total_ceded);
    if (my == 0.0) {
        require(mw == 0.0, "premium allocation: E[W] > 0 with E[Y] = 0 contradicts 0 <= W <= Y");
        return 0.0;
    }
    return mw * premium_of(principle, total_ceded) / my;
}

}  // namespace reinsnet
