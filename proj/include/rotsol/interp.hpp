#pragma once

// One-dimensional cubic interpolation on strictly increasing abscissae.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "rotsol/errors.hpp"

namespace rotsol {

namespace detail {

inline void require_increasing(std::span<const double> x, const char* who)
{
    if (x.size() < 3)
        throw InputError(std::string(who) + " needs at least 3 nodes");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw InputError(std::string(who) + " abscissae must be strictly increasing");
}

/// Index k with x[k] <= t < x[k+1], clamped to the valid segment range.
inline std::size_t segment_of(std::span<const double> x, double t)
{
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t k = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
    return std::min(k, x.size() - 2);
}

} // namespace detail

/// Natural cubic spline; provides value, first and second derivative.
class CubicSpline
{
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x))
        , y_(std::move(y))
    {
        detail::require_increasing(x_, "CubicSpline");
        if (y_.size() != x_.size())
            throw InputError("CubicSpline: x and y differ in length");
        const std::size_t n = x_.size();
        m_.assign(n, 0.0);
        // Tridiagonal solve for second derivatives, m_0 = m_{n-1} = 0.
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            const double a = h0, b = 2 * (h0 + h1), cc = h1;
            const double rhs = 6 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
            const double denom = b - a * c[i - 1];
            c[i] = cc / denom;
            d[i] = (rhs - a * d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1)
                break;
        }
    }

    double front() const { return x_.front(); }
    double back() const { return x_.back(); }

    double operator()(double t) const { return eval(t, 0); }
    double prime(double t) const { return eval(t, 1); }
    double double_prime(double t) const { return eval(t, 2); }

private:
    double eval(double t, int order) const
    {
        const std::size_t k = detail::segment_of(x_, t);
        const double h = x_[k + 1] - x_[k];
        const double A = (x_[k + 1] - t) / h, B = (t - x_[k]) / h;
        const double m0 = m_[k], m1 = m_[k + 1];
        switch (order) {
        case 0:
            return A * y_[k] + B * y_[k + 1]
                   + ((A * A * A - A) * m0 + (B * B * B - B) * m1) * h * h / 6;
        case 1:
            return (y_[k + 1] - y_[k]) / h - (3 * A * A - 1) * h * m0 / 6
                   + (3 * B * B - 1) * h * m1 / 6;
        default:
            return A * m0 + B * m1;
        }
    }

    std::vector<double> x_, y_, m_;
};

/**
 * Piecewise cubic Hermite interpolant. Node slopes come from the three-point
 * parabola through each node and its neighbours (second-order accurate on
 * non-uniform grids). With `monotone` set, slopes are limited Fritsch-Carlson
 * style so the interpolant never overshoots the data.
 */
class HermiteInterpolant
{
public:
    HermiteInterpolant(std::vector<double> x, std::vector<double> y, bool monotone = false)
        : x_(std::move(x))
        , y_(std::move(y))
    {
        detail::require_increasing(x_, "HermiteInterpolant");
        if (y_.size() != x_.size())
            throw InputError("HermiteInterpolant: x and y differ in length");
        const std::size_t n = x_.size();
        d_.resize(n);
        auto slope = [&](std::size_t i) { return (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]); };
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
            d_[i] = (h1 * slope(i - 1) + h0 * slope(i)) / (h0 + h1);
        }
        {
            const double h0 = x_[1] - x_[0], h1 = x_[2] - x_[1];
            d_[0] = ((2 * h0 + h1) * slope(0) - h0 * slope(1)) / (h0 + h1);
            const std::size_t m = n - 1;
            const double g0 = x_[m] - x_[m - 1], g1 = x_[m - 1] - x_[m - 2];
            d_[m] = ((2 * g0 + g1) * slope(m - 1) - g0 * slope(m - 2)) / (g0 + g1);
        }
        if (monotone) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double s = slope(i);
                if (s == 0.0) {
                    d_[i] = d_[i + 1] = 0.0;
                    continue;
                }
                if (d_[i] * s < 0)
                    d_[i] = 0;
                if (d_[i + 1] * s < 0)
                    d_[i + 1] = 0;
                const double a = d_[i] / s, b = d_[i + 1] / s;
                const double r2 = a * a + b * b;
                if (r2 > 9.0) {
                    const double tau = 3.0 / std::sqrt(r2);
                    d_[i] = tau * a * s;
                    d_[i + 1] = tau * b * s;
                }
            }
        }
    }

    HermiteInterpolant(std::vector<double> x, std::vector<double> y, std::vector<double> dydx)
        : x_(std::move(x))
        , y_(std::move(y))
        , d_(std::move(dydx))
    {
        detail::require_increasing(x_, "HermiteInterpolant");
        if (y_.size() != x_.size() || d_.size() != x_.size())
            throw InputError("HermiteInterpolant: array lengths differ");
    }

    double operator()(double t) const
    {
        const std::size_t k = detail::segment_of(x_, t);
        const double h = x_[k + 1] - x_[k];
        const double w = (t - x_[k]) / h;
        const double w2 = w * w, w3 = w2 * w;
        return (2 * w3 - 3 * w2 + 1) * y_[k] + (w3 - 2 * w2 + w) * h * d_[k]
               + (-2 * w3 + 3 * w2) * y_[k + 1] + (w3 - w2) * h * d_[k + 1];
    }

    double prime(double t) const
    {
        const std::size_t k = detail::segment_of(x_, t);
        const double h = x_[k + 1] - x_[k];
        const double w = (t - x_[k]) / h;
        const double w2 = w * w;
        return ((6 * w2 - 6 * w) * y_[k] + (-6 * w2 + 6 * w) * y_[k + 1]) / h
               + (3 * w2 - 4 * w + 1) * d_[k] + (3 * w2 - 2 * w) * d_[k + 1];
    }

private:
    std::vector<double> x_, y_, d_;
};

} // namespace rotsol
