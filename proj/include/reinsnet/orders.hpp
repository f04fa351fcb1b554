#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reinsnet/error.hpp"
#include "reinsnet/scenarios.hpp"

namespace reinsnet {

struct Witness {
    double threshold = 0.0;
    std::string description;
};

/// Outcome of an order or dependence check. margin is the worst slack of the
/// defining inequality (negative when violated).
struct OrderVerdict {
    bool holds = true;
    std::optional<Witness> witness;
    double margin = 0.0;
    std::optional<double> crossing_point;  // cut criterion only
};

namespace detail {

template <typename T>
std::vector<T> merged_support(const DiscreteLaw<T>& x, const DiscreteLaw<T>& y) {
    std::vector<T> s = x.atoms;
    s.insert(s.end(), y.atoms.begin(), y.atoms.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

template <typename T>
void record(OrderVerdict& v, bool& first, const T& slack, const T& tol, double at, const std::string& what) {
    const double d = to_double(slack);
    if (first || d < v.margin) v.margin = d;
    first = false;
    if (slack < T(0) - tol) {
        if (v.holds) v.witness = Witness{at, what};  // first violation
        v.holds = false;
    }
}

inline double dkw_tolerance(std::size_t m) {
    const double mm = static_cast<double>(std::max<std::size_t>(m, 2));
    return 3.0 * std::sqrt(std::log(mm) / mm);
}

}  // namespace detail

/// X <=_st Y: S_X(t) <= S_Y(t) at every atom of either law (survival
/// functions are constant between atoms, so this is exhaustive).
template <typename T>
OrderVerdict check_st(const DiscreteLaw<T>& x, const DiscreteLaw<T>& y, const T& tol = T(0)) {
    OrderVerdict v;
    bool first = true;
    for (const auto& t : detail::merged_support(x, y)) {
        const T sx = T(1) - x.cdf(t);
        const T sy = T(1) - y.cdf(t);
        detail::record(v, first, sy - sx, tol, to_double(t),
                       "S_X(t) = " + format_shortest(to_double(sx)) + " > S_Y(t) = " + format_shortest(to_double(sy)));
    }
    return v;
}

/// X <=_icx Y: E[(X-t)_+] <= E[(Y-t)_+] at t = 0 and every atom. Both
/// transforms are piecewise linear with knots at atoms, so this is exhaustive
/// for non-negative finite laws.
template <typename T>
OrderVerdict check_icx(const DiscreteLaw<T>& x, const DiscreteLaw<T>& y, const T& tol = T(0)) {
    OrderVerdict v;
    bool first = true;
    auto points = detail::merged_support(x, y);
    points.insert(points.begin(), std::min(T(0), points.front()));
    for (const auto& t : points) {
        const T px = x.stop_loss(t);
        const T py = y.stop_loss(t);
        detail::record(v, first, py - px, tol, to_double(t),
                       "E[(X-t)+] = " + format_shortest(to_double(px)) + " > E[(Y-t)+] = " + format_shortest(to_double(py)));
    }
    return v;
}

/// Sufficient condition for X <=_icx Y: F_X - F_Y changes sign at most once,
/// from <= 0 to >= 0, and E[X] <= E[Y]. On success crossing_point holds the
/// smallest valid t0 among the atoms.
template <typename T>
OrderVerdict check_cut_criterion(const DiscreteLaw<T>& x, const DiscreteLaw<T>& y) {
    OrderVerdict v;
    const T mx = x.mean();
    const T my = y.mean();
    v.margin = to_double(my - mx);
    const auto points = detail::merged_support(x, y);
    std::optional<std::size_t> first_positive;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const T d = x.cdf(points[i]) - y.cdf(points[i]);
        if (T(0) < d && !first_positive) first_positive = i;
        if (d < T(0) && first_positive) {
            v.holds = false;
            v.witness = Witness{to_double(points[i]), "F_X - F_Y crosses back below zero after t0 = " +
                                                          format_shortest(to_double(points[*first_positive]))};
            return v;
        }
    }
    if (my < mx) {
        v.holds = false;
        v.witness = Witness{0.0, "E[X] = " + format_shortest(to_double(mx)) + " > E[Y] = " + format_shortest(to_double(my))};
        return v;
    }
    v.crossing_point = to_double(first_positive ? points[*first_positive] : points.back());
    return v;
}

/// Positive orthant dependence: both orthant inequalities at every point of
/// the product grid of marginal supports.
template <typename T>
OrderVerdict check_pod(const DiscreteJointDistribution<T>& joint) {
    joint.validate();
    const std::size_t n = joint.dimension();
    std::vector<DiscreteLaw<T>> margins;
    for (std::size_t j = 0; j < n; ++j) margins.push_back(joint.marginal(j));

    OrderVerdict v;
    bool first = true;
    std::vector<std::size_t> pos(n, 0);
    while (true) {
        std::vector<T> point(n);
        T lower_product(1), upper_product(1);
        for (std::size_t j = 0; j < n; ++j) {
            point[j] = margins[j].atoms[pos[j]];
            const T f = margins[j].cdf(point[j]);
            lower_product *= f;
            upper_product *= T(1) - f;
        }
        T lower(0), upper(0);
        for (std::size_t i = 0; i < joint.atoms.size(); ++i) {
            bool all_le = true, all_gt = true;
            for (std::size_t j = 0; j < n; ++j) {
                if (point[j] < joint.atoms[i][j]) all_le = false;
                else all_gt = false;
            }
            if (all_le) lower += joint.probs[i];
            if (all_gt) upper += joint.probs[i];
        }
        std::string where = "(";
        for (std::size_t j = 0; j < n; ++j) where += (j ? "," : "") + format_shortest(to_double(point[j]));
        where += ")";
        detail::record(v, first, lower - lower_product, T(0), to_double(point[0]), "P(X <= x) below product at x = " + where);
        detail::record(v, first, upper - upper_product, T(0), to_double(point[0]), "P(X > x) below product at x = " + where);

        std::size_t j = 0;
        while (j < n && ++pos[j] == margins[j].atoms.size()) pos[j++] = 0;
        if (j == n) break;
    }
    return v;
}

template <typename T>
struct PdsViolation {
    std::size_t conditioning = 0;  // 0-based coordinate conditioned on
    T lower_value{};               // u < v with P(other > t | X_c = u) > P(other > t | X_c = v)
    T upper_value{};
    T threshold{};
    T prob_at_lower{};
    T prob_at_upper{};
};

template <typename T>
struct PdsVerdict : OrderVerdict {
    std::optional<PdsViolation<T>> violation;  // the worst one
};

/// Bivariate PDS: for each coordinate, the conditional law of the other one
/// is st-increasing in the conditioning value.
template <typename T>
PdsVerdict<T> check_pds_bivariate(const DiscreteJointDistribution<T>& joint) {
    joint.validate();
    if (joint.dimension() != 2)
        throw ValidationError("PDS check supports dimension 2 only (got " + std::to_string(joint.dimension()) + ")");
    PdsVerdict<T> v;
    bool first = true;
    T worst(0);
    for (std::size_t c = 0; c < 2; ++c) {
        const std::size_t o = 1 - c;
        const auto cond = joint.marginal(c);
        const auto other = joint.marginal(o);
        // conditional survival P(X_o > t | X_c = cond.atoms[a]) for every t in other's support
        std::vector<std::vector<T>> surv(cond.atoms.size(), std::vector<T>(other.atoms.size(), T(0)));
        for (std::size_t i = 0; i < joint.atoms.size(); ++i) {
            const auto a = static_cast<std::size_t>(std::lower_bound(cond.atoms.begin(), cond.atoms.end(), joint.atoms[i][c]) - cond.atoms.begin());
            for (std::size_t t = 0; t < other.atoms.size(); ++t)
                if (other.atoms[t] < joint.atoms[i][o]) surv[a][t] += joint.probs[i];
        }
        for (std::size_t a = 0; a < cond.atoms.size(); ++a)
            for (auto& s : surv[a]) s /= cond.probs[a];

        for (std::size_t a = 0; a < cond.atoms.size(); ++a) {
            for (std::size_t b = a + 1; b < cond.atoms.size(); ++b) {
                for (std::size_t t = 0; t < other.atoms.size(); ++t) {
                    const T slack = surv[b][t] - surv[a][t];
                    const double d = to_double(slack);
                    if (first || d < v.margin) v.margin = d;
                    first = false;
                    if (slack < T(0) && (!v.violation || slack < worst)) {
                        worst = slack;
                        v.holds = false;
                        v.violation = PdsViolation<T>{c, cond.atoms[a], cond.atoms[b], other.atoms[t], surv[a][t], surv[b][t]};
                        const std::string oc = "X" + std::to_string(o + 1);
                        const std::string cc = "X" + std::to_string(c + 1);
                        const std::string th = format_shortest(to_double(other.atoms[t]));
                        v.witness = Witness{to_double(other.atoms[t]),
                                            "P(" + oc + ">" + th + "|" + cc + "=" + format_shortest(to_double(cond.atoms[a])) +
                                                ") = " + format_shortest(to_double(surv[a][t])) + " > " +
                                                format_shortest(to_double(surv[b][t])) + " = P(" + oc + ">" + th + "|" + cc +
                                                "=" + format_shortest(to_double(cond.atoms[b])) + ")"};
                    }
                }
            }
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// Sample-based checks
// ---------------------------------------------------------------------------

/// ECDF comparison on the merged sample grid; default tolerance
/// 3 sqrt(log m / m) (a DKW-style heuristic).
inline OrderVerdict check_st_samples(std::span<const double> x, std::span<const double> y,
                                     std::optional<double> tol = std::nullopt) {
    require(!x.empty() && !y.empty(), "st check: empty sample");
    const double t = tol.value_or(detail::dkw_tolerance(std::min(x.size(), y.size())));
    std::vector<double> sx(x.begin(), x.end()), sy(y.begin(), y.end());
    std::sort(sx.begin(), sx.end());
    std::sort(sy.begin(), sy.end());
    std::vector<double> grid = sx;
    grid.insert(grid.end(), sy.begin(), sy.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    OrderVerdict v;
    bool first = true;
    const double mx = static_cast<double>(sx.size()), my = static_cast<double>(sy.size());
    for (double g : grid) {
        const double fx = static_cast<double>(std::upper_bound(sx.begin(), sx.end(), g) - sx.begin()) / mx;
        const double fy = static_cast<double>(std::upper_bound(sy.begin(), sy.end(), g) - sy.begin()) / my;
        detail::record(v, first, fx - fy, t, g, "empirical S_X(t) exceeds S_Y(t) by more than tolerance");
    }
    return v;
}

/// Empirical stop-loss transforms compared at every merged sample point (and
/// t = 0), via suffix sums.
inline OrderVerdict check_icx_samples(std::span<const double> x, std::span<const double> y, double tol) {
    require(!x.empty() && !y.empty(), "icx check: empty sample");
    auto prepare = [](std::span<const double> s) {
        std::vector<double> v(s.begin(), s.end());
        std::sort(v.begin(), v.end());
        std::vector<double> suffix(v.size() + 1, 0.0);
        for (std::size_t i = v.size(); i-- > 0;) suffix[i] = suffix[i + 1] + v[i];
        return std::pair{v, suffix};
    };
    const auto [sx, px] = prepare(x);
    const auto [sy, py] = prepare(y);
    auto stop_loss = [](const std::vector<double>& s, const std::vector<double>& suffix, double t) {
        const auto k = static_cast<std::size_t>(std::upper_bound(s.begin(), s.end(), t) - s.begin());
        return (suffix[k] - t * static_cast<double>(s.size() - k)) / static_cast<double>(s.size());
    };
    std::vector<double> grid = sx;
    grid.insert(grid.end(), sy.begin(), sy.end());
    grid.push_back(0.0);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    OrderVerdict v;
    bool first = true;
    for (double g : grid) {
        const double a = stop_loss(sx, px, g);
        const double b = stop_loss(sy, py, g);
        detail::record(v, first, b - a, tol, g, "empirical E[(X-t)+] exceeds E[(Y-t)+] by more than tolerance");
    }
    return v;
}

namespace detail {
inline void require_same_shape(const ScenarioMatrix& x, const ScenarioMatrix& y) {
    require(x.rows() == y.rows() && x.cols() == y.cols(), "sum-order check: scenario matrices differ in shape (" +
                                                              std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " vs " +
                                                              std::to_string(y.rows()) + "x" + std::to_string(y.cols()) + ")");
}
}  // namespace detail

/// Empirical check of sum_i X_i <=_st sum_i Y_i for matrices sharing a copula.
inline OrderVerdict mc_check_sum_st(const ScenarioMatrix& x, const ScenarioMatrix& y, std::optional<double> tol = std::nullopt) {
    detail::require_same_shape(x, y);
    return check_st_samples(x.row_sums(), y.row_sums(), tol);
}

/// Empirical check of sum_i X_i <=_icx sum_i Y_i for matrices sharing a PDS copula.
inline OrderVerdict mc_check_sum_icx(const ScenarioMatrix& x, const ScenarioMatrix& y, double tol) {
    detail::require_same_shape(x, y);
    return check_icx_samples(x.row_sums(), y.row_sums(), tol);
}

/// Coordinatewise weak concordance of paired atom lists: y_a[j] < y_b[j]
/// implies x_a[j] <= x_b[j], and ties stay ties. Holds iff x arises from y by
/// increasing coordinate maps, i.e. x carries y's copula.
template <typename T>
bool weakly_concordant(const std::vector<std::vector<T>>& y, const std::vector<std::vector<T>>& x) {
    require(y.size() == x.size(), "concordance: atom lists differ in length");
    for (std::size_t a = 0; a < y.size(); ++a)
        for (std::size_t b = 0; b < y.size(); ++b)
            for (std::size_t j = 0; j < y[a].size(); ++j) {
                if (y[a][j] < y[b][j] && x[b][j] < x[a][j]) return false;
                if (y[a][j] == y[b][j] && !(x[a][j] == x[b][j])) return false;
            }
    return true;
}

// ---------------------------------------------------------------------------
// The POD-but-not-PDS counterexample
// ---------------------------------------------------------------------------

struct Example213 {
    DiscreteJointDistribution<Rational> y;
    DiscreteJointDistribution<Rational> x;  // (Y1, f(Y2)), f(0)=0, f(1)=f(3)=2, f(4)=4
    OrderVerdict pod;
    PdsVerdict<Rational> pds;
    OrderVerdict icx_marginal_1;   // X1 <=_icx Y1
    OrderVerdict icx_marginal_2;   // X2 <=_icx Y2
    OrderVerdict cut_marginal_2;   // cut criterion for X2 vs Y2
    OrderVerdict icx_sum_reversed; // Y1 + Y2 <=_icx X1 + X2
    OrderVerdict icx_sum_forward;  // X1 + X2 <=_icx Y1 + Y2
    bool sums_equal_in_law = false;
    bool same_copula = false;      // weak concordance of (Y, X) atoms
};

inline Rational example213_f(const Rational& v) {
    if (v == Rational(0)) return Rational(0);
    if (v == Rational(1) || v == Rational(3)) return Rational(2);
    if (v == Rational(4)) return Rational(4);
    throw ValidationError("counterexample map defined on {0,1,3,4} only");
}

inline Example213 example_2_13() {
    using R = Rational;
    // Zero-probability cells (0,1) and (1,3) are omitted.
    const std::vector<std::vector<R>> y_atoms{{R(0), R(0)}, {R(0), R(3)}, {R(0), R(4)},
                                              {R(1), R(0)}, {R(1), R(1)}, {R(1), R(4)}};
    const std::vector<R> probs{R(3, 12), R(2, 12), R(1, 12), R(1, 12), R(2, 12), R(3, 12)};
    Example213 e;
    e.y = DiscreteJointDistribution<R>(y_atoms, probs);
    e.x = e.y.transform(1, example213_f);

    std::vector<std::vector<R>> x_paired = y_atoms;
    for (auto& a : x_paired) a[1] = example213_f(a[1]);
    e.same_copula = weakly_concordant(y_atoms, x_paired);

    e.pod = check_pod(e.y);
    e.pds = check_pds_bivariate(e.y);
    e.icx_marginal_1 = check_icx(e.x.marginal(0), e.y.marginal(0));
    e.icx_marginal_2 = check_icx(e.x.marginal(1), e.y.marginal(1));
    e.cut_marginal_2 = check_cut_criterion(e.x.marginal(1), e.y.marginal(1));
    e.icx_sum_reversed = check_icx(e.y.sum_law(), e.x.sum_law());
    e.icx_sum_forward = check_icx(e.x.sum_law(), e.y.sum_law());
    const auto sy = e.y.sum_law();
    const auto sx = e.x.sum_law();
    e.sums_equal_in_law = sy.atoms == sx.atoms && sy.probs == sx.probs;
    return e;
}

}  // namespace reinsnet
