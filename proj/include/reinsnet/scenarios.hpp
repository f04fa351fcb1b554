#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/rational.hpp>

#include "reinsnet/error.hpp"
#include "reinsnet/parallel.hpp"
#include "reinsnet/rng.hpp"

namespace reinsnet {

using Rational = boost::rational<long long>;

template <typename T>
double to_double(const T& v) {
    if constexpr (std::is_same_v<T, Rational>) {
        return boost::rational_cast<double>(v);
    } else {
        return static_cast<double>(v);
    }
}

// ---------------------------------------------------------------------------
// ScenarioMatrix
// ---------------------------------------------------------------------------

/// m joint draws of the n-dimensional loss vector, stored column-major so
/// that each risk's sample is a contiguous span.
class ScenarioMatrix {
public:
    ScenarioMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major,
                   std::uint64_t seed = 0)
        : rows_(rows), cols_(cols), data_(std::move(column_major)), seed_(seed) {
        require(rows_ >= 1, "scenario matrix: no rows");
        require(cols_ >= 1, "scenario matrix: no columns");
        require(data_.size() == rows_ * cols_, "scenario matrix: data size does not match shape");
        for (std::size_t j = 0; j < cols_; ++j) {
            for (std::size_t i = 0; i < rows_; ++i) {
                const double v = data_[j * rows_ + i];
                if (!std::isfinite(v) || v < 0.0) {
                    throw ValidationError("scenario matrix: entry at row " + std::to_string(i + 1) +
                                          ", column x" + std::to_string(j + 1) +
                                          " must be finite and non-negative");
                }
            }
        }
    }

    static ScenarioMatrix from_columns(const std::vector<std::vector<double>>& columns,
                                       std::uint64_t seed = 0) {
        require(!columns.empty(), "scenario matrix: no columns");
        const std::size_t m = columns.front().size();
        std::vector<double> data;
        data.reserve(m * columns.size());
        for (const auto& c : columns) {
            require(c.size() == m, "scenario matrix: columns differ in length");
            data.insert(data.end(), c.begin(), c.end());
        }
        return ScenarioMatrix(m, columns.size(), std::move(data), seed);
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::uint64_t seed() const noexcept { return seed_; }

    double at(std::size_t row, std::size_t col) const { return data_[col * rows_ + row]; }

    std::span<const double> column(std::size_t j) const {
        return {data_.data() + j * rows_, rows_};
    }

    std::vector<double> row_sums() const {
        std::vector<double> s(rows_, 0.0);
        for (std::size_t j = 0; j < cols_; ++j) {
            const auto c = column(j);
            for (std::size_t i = 0; i < rows_; ++i) s[i] += c[i];
        }
        return s;
    }

    /// Matrix restricted to the listed columns (seed retained).
    ScenarioMatrix select(const std::vector<std::size_t>& cols) const {
        std::vector<std::vector<double>> out;
        for (auto j : cols) {
            require(j < cols_, "scenario matrix: column index out of range");
            auto c = column(j);
            out.emplace_back(c.begin(), c.end());
        }
        return from_columns(out, seed_);
    }

    friend bool operator==(const ScenarioMatrix& a, const ScenarioMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
    std::uint64_t seed_;
};

// ---------------------------------------------------------------------------
// Marginals
// ---------------------------------------------------------------------------

namespace marginal {
struct PointMass { double value; };
struct Bernoulli { double p; };
struct Uniform { double lo; double hi; };
struct LogNormal { double mu; double sigma; };
struct Pareto { double shape; double scale; };  // F(x) = 1 - (scale/x)^shape, x >= scale
struct Empirical { std::vector<double> values; };
}  // namespace marginal

using Marginal = std::variant<marginal::PointMass, marginal::Bernoulli, marginal::Uniform,
                              marginal::LogNormal, marginal::Pareto, marginal::Empirical>;

inline double normal_quantile(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline void validate(const Marginal& m) {
    std::visit(
        [](const auto& d) {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, marginal::PointMass>) {
                require(std::isfinite(d.value) && d.value >= 0.0, "point mass must be a non-negative finite value");
            } else if constexpr (std::is_same_v<D, marginal::Bernoulli>) {
                require(d.p >= 0.0 && d.p <= 1.0, "bernoulli probability must lie in [0,1]");
            } else if constexpr (std::is_same_v<D, marginal::Uniform>) {
                require(d.lo >= 0.0 && d.hi >= d.lo && std::isfinite(d.hi), "uniform needs 0 <= lo <= hi < inf");
            } else if constexpr (std::is_same_v<D, marginal::LogNormal>) {
                require(std::isfinite(d.mu) && d.sigma > 0.0, "lognormal needs sigma > 0");
            } else if constexpr (std::is_same_v<D, marginal::Pareto>) {
                require(d.shape > 0.0 && d.scale > 0.0, "pareto needs shape > 0 and scale > 0");
            } else {
                require(!d.values.empty(), "empirical table is empty");
                for (double v : d.values) require(std::isfinite(v) && v >= 0.0, "empirical table entries must be non-negative");
            }
        },
        m);
}

/// Left-continuous inverse distribution function F^{-1}(u) for u in (0,1).
inline double inverse_cdf(const Marginal& m, double u) {
    return std::visit(
        [u](const auto& d) -> double {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, marginal::PointMass>) {
                return d.value;
            } else if constexpr (std::is_same_v<D, marginal::Bernoulli>) {
                return u <= 1.0 - d.p ? 0.0 : 1.0;
            } else if constexpr (std::is_same_v<D, marginal::Uniform>) {
                return d.lo + (d.hi - d.lo) * u;
            } else if constexpr (std::is_same_v<D, marginal::LogNormal>) {
                return std::exp(d.mu + d.sigma * normal_quantile(u));
            } else if constexpr (std::is_same_v<D, marginal::Pareto>) {
                return d.scale * std::pow(1.0 - u, -1.0 / d.shape);
            } else {
                std::vector<double> v = d.values;
                std::sort(v.begin(), v.end());
                const auto k = static_cast<std::size_t>(std::ceil(u * static_cast<double>(v.size())));
                return v[std::clamp<std::size_t>(k, 1, v.size()) - 1];
            }
        },
        m);
}

// ---------------------------------------------------------------------------
// Copulas
// ---------------------------------------------------------------------------

namespace copula {
struct Independent {};
struct Comonotone {};
struct Gaussian { std::vector<std::vector<double>> correlation; };
struct Clayton { double theta; };
}  // namespace copula

using CopulaSpec = std::variant<copula::Independent, copula::Comonotone, copula::Gaussian, copula::Clayton>;

inline copula::Gaussian equicorrelated_gaussian(std::size_t n, double rho) {
    std::vector<std::vector<double>> c(n, std::vector<double>(n, rho));
    for (std::size_t i = 0; i < n; ++i) c[i][i] = 1.0;
    return {std::move(c)};
}

/// Lower Cholesky factor of a correlation matrix. Positive semi-definite
/// matrices are accepted (zero pivots allowed); anything else is rejected.
inline std::vector<std::vector<double>> cholesky_correlation(const std::vector<std::vector<double>>& c) {
    const std::size_t n = c.size();
    for (std::size_t i = 0; i < n; ++i) {
        require(c[i].size() == n, "gaussian copula: correlation matrix is not square");
        require(std::abs(c[i][i] - 1.0) <= 1e-12, "gaussian copula: correlation matrix needs unit diagonal");
        for (std::size_t j = 0; j < n; ++j) {
            require(std::abs(c[i][j] - c[j][i]) <= 1e-12, "gaussian copula: correlation matrix is not symmetric");
            require(c[i][j] >= -1.0 && c[i][j] <= 1.0, "gaussian copula: correlation outside [-1,1]");
        }
    }
    constexpr double eps = 1e-12;
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        double d = c[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
        if (d < -eps) throw ValidationError("gaussian copula: correlation matrix is not positive semi-definite (pivot " +
                                            std::to_string(j + 1) + ")");
        const double pivot = d > eps ? std::sqrt(d) : 0.0;
        l[j][j] = pivot;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = c[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (pivot == 0.0) {
                if (std::abs(s) > 1e-9)
                    throw ValidationError("gaussian copula: correlation matrix is not positive semi-definite (pivot " +
                                          std::to_string(j + 1) + ")");
                l[i][j] = 0.0;
            } else {
                l[i][j] = s / pivot;
            }
        }
    }
    return l;
}

inline void validate(const CopulaSpec& spec, std::size_t dim) {
    if (const auto* g = std::get_if<copula::Gaussian>(&spec)) {
        require(g->correlation.size() == dim, "copula dimension " + std::to_string(g->correlation.size()) +
                                                  " does not match " + std::to_string(dim) + " marginals");
        (void)cholesky_correlation(g->correlation);
    } else if (const auto* c = std::get_if<copula::Clayton>(&spec)) {
        require(std::isfinite(c->theta) && c->theta >= 0.0, "clayton copula parameter must be >= 0");
    }
}

/// Copula families known to be conditionally increasing, hence PDS: independence,
/// comonotonicity, Gaussian with non-negative correlations and Clayton.
inline bool is_pds_family(const CopulaSpec& spec) {
    if (const auto* g = std::get_if<copula::Gaussian>(&spec)) {
        for (const auto& row : g->correlation)
            for (double v : row)
                if (v < 0.0) return false;
    }
    return true;
}

inline std::string describe(const CopulaSpec& spec) {
    return std::visit(
        [](const auto& c) -> std::string {
            using C = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<C, copula::Independent>) return "independent";
            else if constexpr (std::is_same_v<C, copula::Comonotone>) return "comonotone";
            else if constexpr (std::is_same_v<C, copula::Gaussian>) return "gaussian";
            else return "clayton";
        },
        spec);
}

namespace detail {
// Stream 0 is reserved for row-level shared randomness; column j uses j + 1.
constexpr std::uint64_t shared_stream = 0;
constexpr std::uint64_t column_stream(std::size_t j) { return static_cast<std::uint64_t>(j) + 1; }
}  // namespace detail

/// Draws m rows: uniform copula draws pushed through each marginal's inverse
/// distribution function. Deterministic in (inputs, seed), independent of the
/// number of worker threads.
inline ScenarioMatrix sample_scenarios(const std::vector<Marginal>& marginals, const CopulaSpec& spec,
                                       std::size_t m, std::uint64_t seed) {
    require(m >= 1, "sample_scenarios: m must be >= 1");
    require(!marginals.empty(), "sample_scenarios: need at least one marginal");
    const std::size_t n = marginals.size();
    for (const auto& mg : marginals) validate(mg);
    validate(spec, n);

    std::vector<std::vector<double>> chol;
    if (const auto* g = std::get_if<copula::Gaussian>(&spec)) chol = cholesky_correlation(g->correlation);

    // Sorted empirical tables once, so inverse_cdf need not re-sort per draw.
    std::vector<Marginal> prepared = marginals;
    for (auto& mg : prepared)
        if (auto* e = std::get_if<marginal::Empirical>(&mg)) std::sort(e->values.begin(), e->values.end());

    const CounterRng rng(seed);
    std::vector<double> data(m * n);
    parallel_for(
        m,
        [&](std::size_t r) {
            std::vector<double> u(n);
            std::visit(
                [&](const auto& c) {
                    using C = std::decay_t<decltype(c)>;
                    if constexpr (std::is_same_v<C, copula::Independent>) {
                        for (std::size_t j = 0; j < n; ++j) u[j] = rng.uniform(detail::column_stream(j), r);
                    } else if constexpr (std::is_same_v<C, copula::Comonotone>) {
                        const double shared = rng.uniform(detail::shared_stream, r);
                        std::fill(u.begin(), u.end(), shared);
                    } else if constexpr (std::is_same_v<C, copula::Gaussian>) {
                        std::vector<double> z(n);
                        for (std::size_t j = 0; j < n; ++j) z[j] = normal_quantile(rng.uniform(detail::column_stream(j), r));
                        for (std::size_t j = 0; j < n; ++j) {
                            double y = 0.0;
                            for (std::size_t k = 0; k <= j; ++k) y += chol[j][k] * z[k];
                            u[j] = std::clamp(normal_cdf(y), 0x1.0p-53, 1.0 - 0x1.0p-53);
                        }
                    } else {
                        if (c.theta == 0.0) {
                            for (std::size_t j = 0; j < n; ++j) u[j] = rng.uniform(detail::column_stream(j), r);
                        } else {
                            // Marshall-Olkin: frailty V ~ Gamma(1/theta), U_j = (1 + E_j / V)^(-1/theta).
                            CellEngine engine(rng, detail::shared_stream, r);
                            std::gamma_distribution<double> frailty(1.0 / c.theta, 1.0);
                            const double v = frailty(engine);
                            for (std::size_t j = 0; j < n; ++j) {
                                const double e = -std::log(rng.uniform(detail::column_stream(j), r));
                                u[j] = std::clamp(std::pow(1.0 + e / v, -1.0 / c.theta), 0x1.0p-53, 1.0 - 0x1.0p-53);
                            }
                        }
                    }
                },
                spec);
            for (std::size_t j = 0; j < n; ++j) data[j * m + r] = inverse_cdf(prepared[j], u[j]);
        },
        256);
    return ScenarioMatrix(m, n, std::move(data), seed);
}

// ---------------------------------------------------------------------------
// Bernoulli mixture
// ---------------------------------------------------------------------------

/// Binary risks, conditionally i.i.d. Bernoulli(Z) given a common factor Z
/// with finite support in (0,1).
struct BernoulliMixtureModel {
    std::size_t n = 1;
    std::vector<double> z_support;
    std::vector<double> z_probs;

    void validate() const {
        require(n >= 1, "bernoulli mixture: n must be >= 1");
        require(!z_support.empty() && z_support.size() == z_probs.size(),
                "bernoulli mixture: support and probabilities must be non-empty and of equal length");
        double total = 0.0;
        for (std::size_t i = 0; i < z_support.size(); ++i) {
            require(z_support[i] > 0.0 && z_support[i] < 1.0, "bernoulli mixture: support values must lie strictly in (0,1)");
            require(z_probs[i] > 0.0, "bernoulli mixture: probabilities must be positive");
            total += z_probs[i];
        }
        require(std::abs(total - 1.0) <= 1e-12, "bernoulli mixture: probabilities must sum to 1");
    }

    double mean_z() const {
        double s = 0.0;
        for (std::size_t i = 0; i < z_support.size(); ++i) s += z_support[i] * z_probs[i];
        return s;
    }
};

/// Per row: Z from the shared stream, then n conditionally independent
/// Bernoulli(Z) draws from the column streams.
inline ScenarioMatrix sample_bernoulli_mixture(const BernoulliMixtureModel& model, std::size_t m, std::uint64_t seed) {
    model.validate();
    require(m >= 1, "sample_bernoulli_mixture: m must be >= 1");
    const CounterRng rng(seed);
    const std::size_t n = model.n;
    std::vector<double> data(m * n);
    parallel_for(
        m,
        [&](std::size_t r) {
            const double u = rng.uniform(detail::shared_stream, r);
            double cum = 0.0;
            double z = model.z_support.back();
            for (std::size_t k = 0; k < model.z_support.size(); ++k) {
                cum += model.z_probs[k];
                if (u <= cum) {
                    z = model.z_support[k];
                    break;
                }
            }
            for (std::size_t j = 0; j < n; ++j) data[j * m + r] = rng.uniform(detail::column_stream(j), r) < z ? 1.0 : 0.0;
        },
        256);
    return ScenarioMatrix(m, n, std::move(data), seed);
}

// ---------------------------------------------------------------------------
// Exact discrete laws
// ---------------------------------------------------------------------------

/// One-dimensional finite law; atoms strictly increasing, probabilities > 0.
template <typename T>
struct DiscreteLaw {
    std::vector<T> atoms;
    std::vector<T> probs;

    /// Builds a law from (value, probability) pairs, merging equal values and
    /// dropping zero-probability entries.
    static DiscreteLaw from_pairs(const std::vector<std::pair<T, T>>& pairs) {
        std::map<T, T> merged;
        for (const auto& [v, p] : pairs) {
            require(!(p < T(0)), "discrete law: negative probability");
            if (p == T(0)) continue;
            merged[v] += p;
        }
        DiscreteLaw law;
        for (const auto& [v, p] : merged) {
            law.atoms.push_back(v);
            law.probs.push_back(p);
        }
        return law;
    }

    /// Empirical law of a sample (equal weights 1/m).
    static DiscreteLaw empirical(std::span<const double> sample)
        requires std::is_same_v<T, double>
    {
        require(!sample.empty(), "discrete law: empty sample");
        std::vector<std::pair<T, T>> pairs;
        pairs.reserve(sample.size());
        const double w = 1.0 / static_cast<double>(sample.size());
        for (double x : sample) pairs.emplace_back(x, w);
        return from_pairs(pairs);
    }

    T mean() const {
        T s(0);
        for (std::size_t i = 0; i < atoms.size(); ++i) s += atoms[i] * probs[i];
        return s;
    }

    /// P(X <= t)
    T cdf(const T& t) const {
        T s(0);
        for (std::size_t i = 0; i < atoms.size() && !(t < atoms[i]); ++i) s += probs[i];
        return s;
    }

    /// E[(X - t)_+]
    T stop_loss(const T& t) const {
        T s(0);
        for (std::size_t i = 0; i < atoms.size(); ++i)
            if (t < atoms[i]) s += (atoms[i] - t) * probs[i];
        return s;
    }
};

template <typename T>
bool probability_sums_to_one(const std::vector<T>& probs) {
    T total(0);
    for (const auto& p : probs) total += p;
    if constexpr (std::is_same_v<T, Rational>) {
        return total == T(1);
    } else {
        return std::abs(to_double(total) - 1.0) <= 1e-12;
    }
}

/// Finite-support joint law of an n-vector.
template <typename T>
struct DiscreteJointDistribution {
    std::vector<std::vector<T>> atoms;
    std::vector<T> probs;

    DiscreteJointDistribution() = default;
    DiscreteJointDistribution(std::vector<std::vector<T>> a, std::vector<T> p)
        : atoms(std::move(a)), probs(std::move(p)) {
        validate();
    }

    std::size_t dimension() const { return atoms.empty() ? 0 : atoms.front().size(); }

    void validate() const {
        require(!atoms.empty() && atoms.size() == probs.size(), "joint law: atoms and probabilities must be non-empty and of equal length");
        const std::size_t n = atoms.front().size();
        require(n >= 1, "joint law: atoms must have dimension >= 1");
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            require(atoms[i].size() == n, "joint law: atom " + std::to_string(i) + " has wrong dimension");
            require(T(0) < probs[i], "joint law: probability of atom " + std::to_string(i) + " must be positive");
            for (const auto& v : atoms[i]) require(!(v < T(0)), "joint law: atoms must be non-negative");
        }
        auto sorted = atoms;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "joint law: atoms must be pairwise distinct");
        require(probability_sums_to_one(probs), "joint law: probabilities must sum to 1");
    }

    DiscreteLaw<T> marginal(std::size_t j) const {
        std::vector<std::pair<T, T>> pairs;
        for (std::size_t i = 0; i < atoms.size(); ++i) pairs.emplace_back(atoms[i][j], probs[i]);
        return DiscreteLaw<T>::from_pairs(pairs);
    }

    DiscreteLaw<T> sum_law() const {
        std::vector<std::pair<T, T>> pairs;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            T s(0);
            for (const auto& v : atoms[i]) s += v;
            pairs.emplace_back(s, probs[i]);
        }
        return DiscreteLaw<T>::from_pairs(pairs);
    }

    /// Law of (t_1(X_1), ..., t_n(X_n)); atoms that collide are merged.
    template <typename F>
    DiscreteJointDistribution transform(std::size_t j, F&& t) const {
        std::map<std::vector<T>, T> merged;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            auto a = atoms[i];
            a[j] = t(a[j]);
            merged[a] += probs[i];
        }
        std::vector<std::vector<T>> a;
        std::vector<T> p;
        for (const auto& [k, v] : merged) {
            a.push_back(k);
            p.push_back(v);
        }
        return DiscreteJointDistribution(std::move(a), std::move(p));
    }

    /// Equal-weight scenario matrix representing this law exactly: atom i is
    /// repeated probs[i] * denominator times. Fails if some count is not an
    /// integer.
    ScenarioMatrix to_scenarios(long long denominator) const {
        require(denominator >= 1, "joint law: denominator must be >= 1");
        const std::size_t n = dimension();
        std::vector<std::vector<double>> cols(n);
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            const double exact = to_double(probs[i]) * static_cast<double>(denominator);
            const double count = std::round(exact);
            require(std::abs(exact - count) <= 1e-9,
                    "joint law: probability of atom " + std::to_string(i) + " is not a multiple of 1/" + std::to_string(denominator));
            for (long long c = 0; c < static_cast<long long>(count); ++c)
                for (std::size_t j = 0; j < n; ++j) cols[j].push_back(to_double(atoms[i][j]));
        }
        return ScenarioMatrix::from_columns(cols);
    }
};

/// Exact joint law of a Bernoulli mixture: all 2^n outcomes mixed over Z.
inline DiscreteJointDistribution<double> bernoulli_mixture_law(const BernoulliMixtureModel& model) {
    model.validate();
    require(model.n <= 20, "bernoulli mixture: exact enumeration limited to n <= 20");
    const std::size_t n = model.n;
    std::vector<std::vector<double>> atoms;
    std::vector<double> probs;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<double> a(n);
        int ones = 0;
        for (std::size_t j = 0; j < n; ++j) {
            a[j] = (mask >> j) & 1U ? 1.0 : 0.0;
            ones += static_cast<int>(a[j]);
        }
        double p = 0.0;
        for (std::size_t k = 0; k < model.z_support.size(); ++k) {
            const double z = model.z_support[k];
            p += model.z_probs[k] * std::pow(z, ones) * std::pow(1.0 - z, static_cast<int>(n) - ones);
        }
        atoms.push_back(std::move(a));
        probs.push_back(p);
    }
    // Renormalise away floating drift so the exact-sum invariant holds.
    const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
    for (auto& p : probs) p /= total;
    DiscreteJointDistribution<double> law;
    law.atoms = std::move(atoms);
    law.probs = std::move(probs);
    return law;
}

// ---------------------------------------------------------------------------
// Rank matrices
// ---------------------------------------------------------------------------

/// Per column, the 1-based rank of each entry (ties share the smallest rank).
inline std::vector<std::vector<std::size_t>> rank_matrix(const ScenarioMatrix& s) {
    std::vector<std::vector<std::size_t>> ranks(s.cols(), std::vector<std::size_t>(s.rows()));
    std::vector<std::size_t> idx(s.rows());
    for (std::size_t j = 0; j < s.cols(); ++j) {
        const auto c = s.column(j);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return c[a] < c[b]; });
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const bool tie = k > 0 && c[idx[k]] == c[idx[k - 1]];
            ranks[j][idx[k]] = tie ? ranks[j][idx[k - 1]] : k + 1;
        }
    }
    return ranks;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string format_shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Header `x1,...,xn`, one scenario per line, shortest round-trip decimals.
inline void save_scenarios(const ScenarioMatrix& s, const std::string& path) {
    std::ofstream out(path);
    require(static_cast<bool>(out), "cannot open " + path + " for writing");
    for (std::size_t j = 0; j < s.cols(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
    out << '\n';
    for (std::size_t i = 0; i < s.rows(); ++i) {
        for (std::size_t j = 0; j < s.cols(); ++j) out << (j ? "," : "") << format_shortest(s.at(i, j));
        out << '\n';
    }
    require(static_cast<bool>(out), "write to " + path + " failed");
}

inline ScenarioMatrix parse_scenarios(std::istream& in, const std::string& source = "input") {
    std::string line;
    std::size_t line_no = 0;
    std::size_t n = 0;
    std::vector<std::vector<double>> cols;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        if (!header_seen) {
            header_seen = true;
            n = fields.size();
            for (std::size_t j = 0; j < n; ++j)
                require(fields[j] == "x" + std::to_string(j + 1),
                        source + ": header must be x1,...,xn (column " + std::to_string(j + 1) + " is '" + fields[j] + "')");
            cols.assign(n, {});
            continue;
        }
        const std::size_t row = cols.front().size() + 1;
        require(fields.size() == n, source + ": ragged row " + std::to_string(row) + " (line " + std::to_string(line_no) +
                                        ") has " + std::to_string(fields.size()) + " fields, expected " + std::to_string(n));
        for (std::size_t j = 0; j < n; ++j) {
            double v = 0.0;
            const auto& text = fields[j];
            const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            require(res.ec == std::errc() && res.ptr == text.data() + text.size(),
                    source + ": cell (row " + std::to_string(row) + ", x" + std::to_string(j + 1) + ") is not a number: '" + text + "'");
            require(std::isfinite(v) && v >= 0.0,
                    source + ": cell (row " + std::to_string(row) + ", x" + std::to_string(j + 1) + ") = " + text +
                        " must be finite and non-negative");
            cols[j].push_back(v);
        }
    }
    require(header_seen && !cols.empty() && !cols.front().empty(), source + ": no rows");
    return ScenarioMatrix::from_columns(cols);
}

inline ScenarioMatrix load_scenarios(const std::string& path) {
    std::ifstream in(path);
    require(static_cast<bool>(in), "cannot open " + path);
    return parse_scenarios(in, path);
}

}  // namespace reinsnet
