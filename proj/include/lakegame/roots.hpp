#pragma once

// Scalar root finding by uniform grid scan plus bisection.

#include <cmath>
#include <cstddef>
#include <vector>

namespace lakegame::roots {

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

/// Bisects a sign-changing bracket until its width is below tol.
/// Returns the midpoint of the final bracket (or an exact zero if hit).
template <class F>
double bisect(F&& f, Bracket b, double tol, std::size_t max_iter = 200) {
    if (b.f_lo == 0.0) return b.lo;
    if (b.f_hi == 0.0) return b.hi;
    const bool lo_negative = b.f_lo < 0.0;
    for (std::size_t i = 0; i < max_iter && (b.hi - b.lo) > tol; ++i) {
        const double mid = 0.5 * (b.lo + b.hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == lo_negative) {
            b.lo = mid;
            b.f_lo = fm;
        } else {
            b.hi = mid;
            b.f_hi = fm;
        }
    }
    // secant inside the final bracket; the midpoint alone leaves up to tol/2
    // of noise, which the value function amplifies near the tangent circle
    const double df = b.f_hi - b.f_lo;
    if (std::isfinite(df) && df != 0.0) {
        const double x = b.lo - b.f_lo * (b.hi - b.lo) / df;
        if (x >= b.lo && x <= b.hi) return x;
    }
    return 0.5 * (b.lo + b.hi);
}

/// Evaluates f on n uniformly spaced points over [lo, hi] (endpoints
/// included) and returns every adjacent pair with a sign change or an exact
/// zero, in increasing order. Non-finite samples break brackets.
/// With first_only set the scan stops at the first bracket.
template <class F>
std::vector<Bracket> scan(F&& f, double lo, double hi, std::size_t n, bool first_only = false) {
    std::vector<Bracket> out;
    if (n < 2 || !(hi > lo)) {
        if (hi == lo) {
            const double v = f(lo);
            if (v == 0.0) out.push_back({lo, lo, v, v});
        }
        return out;
    }
    const double step = (hi - lo) / static_cast<double>(n - 1);
    double x_prev = lo;
    double f_prev = f(lo);
    for (std::size_t i = 1; i < n; ++i) {
        const double x = (i + 1 == n) ? hi : lo + step * static_cast<double>(i);
        const double fx = f(x);
        if (std::isfinite(f_prev) && std::isfinite(fx)) {
            const bool change = (f_prev < 0.0 && fx > 0.0) || (f_prev > 0.0 && fx < 0.0);
            if (f_prev == 0.0) {
                out.push_back({x_prev, x_prev, f_prev, f_prev});
            } else if (change || (fx == 0.0 && i + 1 == n)) {
                out.push_back({x_prev, x, f_prev, fx});
            }
            if (first_only && !out.empty()) return out;
        }
        x_prev = x;
        f_prev = fx;
    }
    return out;
}

/// Grid scan followed by bisection of every bracket. Roots ascend.
template <class F>
std::vector<double> find_all(F&& f, double lo, double hi, std::size_t n, double tol,
                             bool first_only = false) {
    std::vector<double> out;
    for (const auto& b : scan(f, lo, hi, n, first_only)) {
        out.push_back(bisect(f, b, tol));
    }
    return out;
}

}  // namespace lakegame::roots
