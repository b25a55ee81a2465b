#pragma once

// Radial quadrature for integrals over R^N of sampled radial functions:
//
//   int_{R^N} F = |S^{N-1}| int_0^inf F(r) r^{N-1} dr.
//
// The sampled part lives on a mesh uniform in t = ln r and is integrated
// with composite Simpson in t (the measure becomes F e^{Nt} dt).  Beyond
// the mesh the integrand is extended by a fitted power law, optionally
// with an affine-in-ln(r) factor, and the tail integral is closed form.

#include <cmath>
#include <functional>
#include <span>
#include <sstream>
#include <vector>

#include "lem/errors.hpp"
#include "lem/exponents.hpp"

namespace lem {

// F(r) ~ amplitude * r^{-exponent} * (log_c0 + log_c1 * ln r + corr1 / r)
// for r >= mesh end
struct tail_law {
    double amplitude = 0.0;
    double exponent = 0.0;
    double log_c0 = 1.0;
    double log_c1 = 0.0;
    double corr1 = 0.0;           // first-order correction of the product law
    double rel_uncertainty = 0.0; // relative rms of the fit behind the law
};

struct quad_result {
    double value = 0.0;
    double error = 0.0; // absolute estimate: Richardson + propagated tail uncertainty
};

// int_R^inf r^{N-1-m} dr = R^{N-m}/(m-N)          (m > N)
// int_R^inf r^{N-1-m} ln r dr = R^{N-m} ln R/(m-N) + R^{N-m}/(m-N)^2
inline double tail_integral(const tail_law& law, double R, int N) {
    const double k = law.exponent - double(N);
    if (!(k > 0.0)) {
        std::ostringstream os;
        os << "tail exponent " << law.exponent << " <= N=" << N << ": radial integral diverges";
        throw divergent_error(os.str());
    }
    const double Rk = std::pow(R, -k);
    const double base = Rk / k;
    const double logpart = Rk * std::log(R) / k + Rk / (k * k);
    const double corrpart = Rk / (R * (k + 1.0)); // int_R r^{N-2-m} dr
    return law.amplitude * (law.log_c0 * base + law.log_c1 * logpart + law.corr1 * corrpart);
}

namespace detail {

// composite Simpson on uniformly spaced samples; trailing 3/8 rule when the
// interval count is odd
inline double simpson_uniform(std::span<const double> g, double h) {
    const std::size_t n = g.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (g[0] + g[1]);
    std::size_t m = n;
    double extra = 0.0;
    if ((n - 1) % 2 != 0) {
        if (n >= 4) {
            extra = 3.0 * h / 8.0 * (g[n - 4] + 3.0 * g[n - 3] + 3.0 * g[n - 2] + g[n - 1]);
            m = n - 3;
        } else {
            return 0.5 * h * (g[0] + 2.0 * g[1] + g[2]); // trapezoid fallback
        }
    }
    double s = g[0] + g[m - 1];
    for (std::size_t i = 1; i + 1 < m; i += 2) s += 4.0 * g[i];
    for (std::size_t i = 2; i + 1 < m; i += 2) s += 2.0 * g[i];
    return h / 3.0 * s + extra;
}

} // namespace detail

// t: mesh in ln r (uniform spacing), f: samples of F(r) on that mesh.
// Integrates |S^{N-1}| [ stub + int_mesh F r^{N-1} dr + tail ] where the
// left stub uses F ~ F(r0) on (0, r0).
inline quad_result radial_integral(std::span<const double> t, std::span<const double> f, int N,
                                   const tail_law& law) {
    if (t.size() != f.size() || t.size() < 8)
        throw error("radial_integral: mesh and samples must agree and have >= 8 nodes", 4);
    const double h = t[1] - t[0];
    const std::size_t n = t.size();

    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = f[i] * std::exp(double(N) * t[i]);

    const double body = detail::simpson_uniform(g, h);

    // every-other-node Simpson for a Richardson-style error estimate
    std::vector<double> g2;
    g2.reserve(n / 2 + 1);
    for (std::size_t i = 0; i < n; i += 2) g2.push_back(g[i]);
    const double body_coarse = detail::simpson_uniform(g2, 2.0 * h);

    const double r0 = std::exp(t.front());
    const double rend = std::exp(t.back());
    const double stub = f.front() * std::pow(r0, N) / double(N);

    // anchor the law's amplitude on the last mesh samples so the tail is
    // continuous with the data; the fitted amplitude only sets the shape
    tail_law anchored = law;
    if (law.amplitude != 0.0) {
        double acc = 0.0;
        int cnt = 0;
        for (std::size_t i = n - 5; i < n; ++i) {
            const double ri = std::exp(t[i]);
            const double shape = std::pow(ri, -law.exponent) *
                                 (law.log_c0 + law.log_c1 * t[i] + law.corr1 / ri);
            if (shape != 0.0) {
                acc += f[i] / shape;
                ++cnt;
            }
        }
        if (cnt > 0) anchored.amplitude = acc / cnt;
    }
    const double tail = tail_integral(anchored, rend, N);

    quad_result out;
    const double area = sphere_area(N);
    out.value = area * (stub + body + tail);
    out.error = area * (std::abs(body - body_coarse) / 15.0 + std::abs(tail) * law.rel_uncertainty +
                        std::abs(stub));
    return out;
}

// Adaptive Simpson for smooth scalar integrands (used by oracles and the
// radial Green solve).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 40) {
    struct rec {
        static double go(const std::function<double(double)>& f, double a, double b, double fa,
                         double fm, double fb, double whole, double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth <= 0) return left + right;
            if (std::abs(left + right - whole) <= 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return go(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
                   go(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec::go(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

} // namespace lem
