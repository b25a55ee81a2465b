#pragma once

// Ground state of the limit system
//
//     -Delta U = V^p,   -Delta V = U^q   in R^N,   U(0) = 1,
//
// computed by radial shooting on beta = V(0).  The radial system is
// integrated in t = ln r with state (u, u_t, v, v_t), u_t = r U'(r):
//
//     u_tt = -(N-2) u_t - e^{2t} |v|^{p-1} v,
//     v_tt = -(N-2) v_t - e^{2t} |u|^{q-1} u,
//
// using odd-power extensions so off-target shots stay well defined.  For
// beta below the ground-state value V crosses zero first, above it U does;
// bisection pinches the separatrix.  Trajectory classification integrates
// far beyond the stored mesh (r_classify >> r_max) so the bisection can be
// driven close to the representable limit; the tail of a separatrix shot
// is contaminated by ~|beta - beta*| r^{N-2}, which is why the integration
// runs in long double and the fit window stays well inside the mesh.
//
// Kernel samples Psi0 = r U' + N U/(q+1), Phi0 = r V' + N V/(p+1) span the
// dilation direction of the linearized system; the translation directions
// are (U', V').

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "lem/errors.hpp"
#include "lem/exponents.hpp"
#include "lem/quadrature.hpp"

namespace lem {

struct shoot_options {
    double r0 = 1e-8;         // inner start radius (Taylor expansion below)
    double r_max = 2e3;       // stored mesh extends to this radius
    double r_classify = 1e6;  // shots are classified up to this radius
    double beta_lo = 1e-2;    // initial bisection bracket
    double beta_hi = 1e2;
    double bisect_rtol = 1e-17; // relative bracket width at termination
    double ode_rtol = 1e-15;    // integrator tolerances (long double internally)
    double ode_atol = 1e-22;
    double rtol = 1e-12;        // contract tolerance for stored-mesh residuals
    double mesh_h = 0.0;        // spacing in ln r; 0 = choose from decay rates
    double fit_lo = 0.0;        // tail fit window; 0 = defaults from r_max
    double fit_hi = 0.0;
};

struct tail_constants {
    double a_Np = 0.0;
    double b_Np = 0.0;
    double slope_u = 0.0; // fitted, diagnostic; should be near -gamma_u
    double slope_v = 0.0;
    double fit_lo = 0.0, fit_hi = 0.0;
    double rms_residual = 0.0; // max of the two component fit rms
    double rms_u = 0.0, rms_v = 0.0;
    // correction coefficients of ln F = ln A + slope ln r + sum c_k r^{-e_k}
    std::vector<double> u_corr_exps, u_corr_coefs;
    std::vector<double> v_corr_exps, v_corr_coefs;

    double eval_u(double r) const {
        double s = 0.0;
        for (std::size_t k = 0; k < u_corr_exps.size(); ++k)
            s += u_corr_coefs[k] * std::pow(r, -u_corr_exps[k]);
        return a_Np * std::pow(r, slope_u) * std::exp(s);
    }
    double eval_v(double r) const {
        double s = 0.0;
        for (std::size_t k = 0; k < v_corr_exps.size(); ++k)
            s += v_corr_coefs[k] * std::pow(r, -v_corr_exps[k]);
        return b_Np * std::pow(r, slope_v) * std::exp(s);
    }
};

struct profile_diagnostics {
    double consistency_u = 0.0; // |d/dt U - u_t| vs FD, normalized
    double consistency_v = 0.0;
    double ode_residual_u = 0.0; // second-order residual via FD of u_t
    double ode_residual_v = 0.0;
    double bisect_width = 0.0;   // final relative bracket width
    int bisect_steps = 0;
};

struct bubble_profile {
    critical_exponents exps;
    double beta = 0.0; // V(0)
    double U0 = 1.0;
    std::vector<double> t;    // ln r, uniform
    std::vector<double> r;
    std::vector<double> U, V;   // samples
    std::vector<double> dU, dV; // U'(r), V'(r)
    std::vector<double> Psi0, Phi0;
    shoot_options opts;
    tail_constants tails;
    profile_diagnostics diag;

    std::size_t size() const { return r.size(); }
};

enum class shot_class { v_crossed_first, u_crossed_first, no_crossing };

namespace detail {

using shoot_state = std::array<long double, 4>;

struct radial_system {
    long double N, p, q;
    void operator()(const shoot_state& y, shoot_state& dydt, long double t) const {
        const long double r2 = std::exp(2.0l * t);
        const long double fv = std::copysign(std::pow(std::abs(y[2]), p), y[2]);
        const long double gu = std::copysign(std::pow(std::abs(y[0]), q), y[0]);
        dydt[0] = y[1];
        dydt[1] = -(N - 2.0l) * y[1] - r2 * fv;
        dydt[2] = y[3];
        dydt[3] = -(N - 2.0l) * y[3] - r2 * gu;
    }
};

inline shoot_state taylor_start(const critical_exponents& e, long double beta, long double r0) {
    // U ~ 1 - beta^p r^2/(2N), V ~ beta - r^2/(2N); state carries r U', r V'
    const long double N = e.dim;
    const long double bp = std::pow(beta, (long double)e.p);
    const long double r02 = r0 * r0;
    return {1.0l - bp * r02 / (2.0l * N), -bp * r02 / N, beta - r02 / (2.0l * N), -r02 / N};
}

template <class Stepper, class Sys>
inline shot_class walk_classify(Stepper& st, const Sys& sys, long double t_end) {
    while (st.current_time() < t_end) {
        const auto interval = st.do_step(sys);
        const auto& y = st.current_state();
        if (std::abs(y[0]) > 1e30l || std::abs(y[2]) > 1e30l)
            throw unresolved_error("shot blew up without a sign change");
        if (y[0] <= 0.0l || y[2] <= 0.0l) {
            // locate which component crossed first inside the step
            const int K = 256;
            shoot_state yy;
            for (int k = 1; k <= K; ++k) {
                const long double tq =
                    interval.first + (interval.second - interval.first) * k / K;
                st.calc_state(tq, yy);
                if (yy[0] <= 0.0l && yy[2] <= 0.0l)
                    return yy[0] < yy[2] ? shot_class::u_crossed_first
                                         : shot_class::v_crossed_first;
                if (yy[0] <= 0.0l) return shot_class::u_crossed_first;
                if (yy[2] <= 0.0l) return shot_class::v_crossed_first;
            }
            return y[0] <= 0.0l ? shot_class::u_crossed_first : shot_class::v_crossed_first;
        }
    }
    return shot_class::no_crossing;
}

inline auto make_stepper(double atol, double rtol) {
    namespace ode = boost::numeric::odeint;
    return ode::make_dense_output((long double)atol, (long double)rtol,
                                  ode::runge_kutta_dopri5<shoot_state, long double>());
}

// 8th-order centered first-derivative weights, offsets -4..4, divided by h
inline double fd8(std::span<const double> f, std::size_t i, double h) {
    static const double w[9] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0.0,
                                4.0 / 5,   -1.0 / 5,   4.0 / 105, -1.0 / 280};
    double s = 0.0;
    for (int k = -4; k <= 4; ++k) s += w[k + 4] * f[i + k];
    return s / h;
}

// least squares for ln F = c0 + slope * ln r + sum_k c_k r^{-e_k}, solved by
// scaled normal equations in long double
struct power_fit {
    double amplitude = 0.0, slope = 0.0, rms = 0.0;
    std::vector<double> corr_exps, corr_coefs;
};

inline power_fit fit_power_law(std::span<const double> r, std::span<const double> F,
                               std::vector<double> corr_exps) {
    const std::size_t n = r.size();
    corr_exps.erase(std::remove_if(corr_exps.begin(), corr_exps.end(),
                                   [](double e) { return e < 0.05; }),
                    corr_exps.end());
    std::sort(corr_exps.begin(), corr_exps.end());
    corr_exps.erase(std::unique(corr_exps.begin(), corr_exps.end(),
                                [](double a, double b) { return std::abs(a - b) < 0.05; }),
                    corr_exps.end());
    const std::size_t m = 2 + corr_exps.size();

    std::vector<long double> A(n * m), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        A[i * m + 0] = 1.0l;
        A[i * m + 1] = std::log((long double)r[i]);
        for (std::size_t k = 0; k < corr_exps.size(); ++k)
            A[i * m + 2 + k] = std::pow((long double)r[i], (long double)-corr_exps[k]);
        y[i] = std::log(std::abs((long double)F[i]));
    }
    // column scaling
    std::vector<long double> cs(m, 0.0l);
    for (std::size_t j = 0; j < m; ++j) {
        long double s = 0.0l;
        for (std::size_t i = 0; i < n; ++i) s += A[i * m + j] * A[i * m + j];
        cs[j] = std::sqrt(s / n);
        for (std::size_t i = 0; i < n; ++i) A[i * m + j] /= cs[j];
    }
    std::vector<long double> G(m * m, 0.0l), rhs(m, 0.0l);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < m; ++a) {
            rhs[a] += A[i * m + a] * y[i];
            for (std::size_t b = 0; b < m; ++b) G[a * m + b] += A[i * m + a] * A[i * m + b];
        }
    }
    // Gaussian elimination with partial pivoting
    std::vector<std::size_t> piv(m);
    for (std::size_t k = 0; k < m; ++k) piv[k] = k;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t imax = k;
        for (std::size_t i = k + 1; i < m; ++i)
            if (std::abs(G[i * m + k]) > std::abs(G[imax * m + k])) imax = i;
        if (imax != k) {
            for (std::size_t j = 0; j < m; ++j) std::swap(G[k * m + j], G[imax * m + j]);
            std::swap(rhs[k], rhs[imax]);
        }
        for (std::size_t i = k + 1; i < m; ++i) {
            const long double f = G[i * m + k] / G[k * m + k];
            for (std::size_t j = k; j < m; ++j) G[i * m + j] -= f * G[k * m + j];
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<long double> c(m);
    for (std::size_t k = m; k-- > 0;) {
        long double s = rhs[k];
        for (std::size_t j = k + 1; j < m; ++j) s -= G[k * m + j] * c[j];
        c[k] = s / G[k * m + k];
    }
    for (std::size_t j = 0; j < m; ++j) c[j] /= cs[j];

    power_fit out;
    out.amplitude = std::exp((double)c[0]);
    out.slope = (double)c[1];
    out.corr_exps = corr_exps;
    out.corr_coefs.resize(corr_exps.size());
    for (std::size_t k = 0; k < corr_exps.size(); ++k) out.corr_coefs[k] = (double)c[2 + k];
    long double ss = 0.0l;
    for (std::size_t i = 0; i < n; ++i) {
        long double pred = c[0] + c[1] * std::log((long double)r[i]);
        for (std::size_t k = 0; k < corr_exps.size(); ++k)
            pred += c[2 + k] * std::pow((long double)r[i], (long double)-corr_exps[k]);
        const long double d = pred - y[i];
        ss += d * d;
    }
    out.rms = (double)std::sqrt(ss / n);
    return out;
}

} // namespace detail

inline shot_class classify_shot(const critical_exponents& e, double beta,
                                const shoot_options& o = {}) {
    detail::radial_system sys{(long double)e.dim, (long double)e.p, (long double)e.q};
    auto st = detail::make_stepper(o.ode_atol, o.ode_rtol);
    const long double t0 = std::log((long double)o.r0);
    st.initialize(detail::taylor_start(e, beta, (long double)o.r0), t0, 1e-4l);
    return detail::walk_classify(st, sys, std::log((long double)o.r_classify));
}

// Fit both tail laws over [fit_lo, fit_hi] on the stored mesh.
inline tail_constants tail_constants_fit(const bubble_profile& prof, double fit_lo, double fit_hi);

inline bubble_profile shoot_ground_state(const critical_exponents& e,
                                         const shoot_options& o = {}) {
    detail::radial_system sys{(long double)e.dim, (long double)e.p, (long double)e.q};

    long double lo = o.beta_lo, hi = o.beta_hi;
    const shot_class clo = classify_shot(e, (double)lo, o);
    const shot_class chi = classify_shot(e, (double)hi, o);
    if (clo != shot_class::v_crossed_first || chi != shot_class::u_crossed_first) {
        std::ostringstream os;
        os << "bracket [" << (double)lo << ", " << (double)hi
           << "] does not separate the failure modes (lo: "
           << (clo == shot_class::v_crossed_first  ? "V first"
               : clo == shot_class::u_crossed_first ? "U first"
                                                    : "none")
           << ", hi: "
           << (chi == shot_class::v_crossed_first  ? "V first"
               : chi == shot_class::u_crossed_first ? "U first"
                                                    : "none")
           << ")";
        throw no_bracket_error(os.str());
    }

    long double beta = 0.0l;
    int steps = 0;
    bool hit_plateau = false;
    for (; steps < 300; ++steps) {
        const long double mid = (hi / lo > 16.0l) ? std::sqrt(lo * hi) : 0.5l * (lo + hi);
        const shot_class c = classify_shot(e, (double)mid, o);
        if (c == shot_class::no_crossing) {
            beta = mid;
            hit_plateau = true;
            break;
        }
        (c == shot_class::v_crossed_first ? lo : hi) = mid;
        if ((hi - lo) < (long double)o.bisect_rtol * mid) {
            beta = 0.5l * (lo + hi);
            break;
        }
    }
    if (beta == 0.0l)
        throw unresolved_error("bisection exhausted its iteration budget");

    // fill the output mesh
    bubble_profile prof;
    prof.exps = e;
    prof.opts = o;
    prof.beta = (double)beta;
    prof.diag.bisect_steps = steps;
    prof.diag.bisect_width = (double)((hi - lo) / beta);

    const double t0 = std::log(o.r0), T = std::log(o.r_max);
    double h = o.mesh_h;
    if (h <= 0.0) {
        // pick h so that 8th-order FD residual checks resolve the steepest rate
        const double kap = std::max({e.gamma_v, e.q * e.gamma_u - 2.0, 2.0});
        h = std::min(0.008, 0.0707 / std::pow(kap, 1.125));
    }
    const std::size_t n = (std::size_t)std::ceil((T - t0) / h) + 1;
    const double hh = (T - t0) / double(n - 1);

    prof.t.resize(n);
    prof.r.resize(n);
    prof.U.resize(n);
    prof.V.resize(n);
    prof.dU.resize(n);
    prof.dV.resize(n);
    prof.Psi0.resize(n);
    prof.Phi0.resize(n);

    // the fill run never crosses zero, so the absolute tolerance can sit far
    // below the smallest tail values without collapsing the step size; this
    // keeps the relative accuracy of the tiny near-origin derivatives
    auto st = detail::make_stepper(std::min(o.ode_atol, 1e-30), o.ode_rtol);
    st.initialize(detail::taylor_start(e, beta, (long double)o.r0), (long double)t0, 1e-4l);
    const double cu = double(e.dim) / (e.q + 1.0);
    const double cv = double(e.dim) / (e.p + 1.0);

    std::size_t k = 0;
    auto emit = [&](long double tq, const detail::shoot_state& y) {
        prof.t[k] = (double)tq;
        prof.r[k] = std::exp((double)tq);
        prof.U[k] = (double)y[0];
        prof.V[k] = (double)y[2];
        prof.dU[k] = (double)(y[1] / std::exp(tq));
        prof.dV[k] = (double)(y[3] / std::exp(tq));
        prof.Psi0[k] = (double)(y[1] + (long double)cu * y[0]);
        prof.Phi0[k] = (double)(y[3] + (long double)cv * y[2]);
        ++k;
    };
    emit((long double)t0, st.current_state());
    while (k < n) {
        st.do_step(sys);
        detail::shoot_state yy;
        while (k < n) {
            const long double tq = (long double)(t0 + hh * double(k));
            if (tq > st.current_time()) break;
            st.calc_state(tq, yy);
            emit(tq, yy);
        }
        const auto& y = st.current_state();
        if (y[0] <= 0.0l || y[2] <= 0.0l) {
            if (hit_plateau || prof.diag.bisect_width < 64.0 * std::numeric_limits<long double>::epsilon())
                throw unresolved_error(
                    "bisection interval at machine width but the trajectory still crosses "
                    "inside the mesh; increase r_classify or reduce r_max");
            throw unresolved_error("separatrix shot crossed zero inside the stored mesh");
        }
    }

    // tail constants and residual diagnostics
    double flo = o.fit_lo, fhi = o.fit_hi;
    if (flo <= 0.0) flo = std::max(80.0, o.r_max / 25.0);
    if (fhi <= 0.0) fhi = 0.7 * o.r_max;
    prof.tails = tail_constants_fit(prof, flo, fhi);

    // FD consistency and second-order residuals on the stored mesh
    {
        const std::size_t nn = prof.size();
        std::vector<double> ut(nn), vt(nn);
        for (std::size_t i = 0; i < nn; ++i) {
            ut[i] = prof.r[i] * prof.dU[i];
            vt[i] = prof.r[i] * prof.dV[i];
        }
        double cons_u = 0.0, cons_v = 0.0, res_u = 0.0, res_v = 0.0;
        const double Nm2 = double(e.dim) - 2.0;
        for (std::size_t i = 4; i + 4 < nn; ++i) {
            const double r2 = prof.r[i] * prof.r[i];
            const double fv = std::pow(std::abs(prof.V[i]), e.p);
            const double gu = std::pow(std::abs(prof.U[i]), e.q);
            const double dU_fd = detail::fd8(prof.U, i, hh);
            const double dV_fd = detail::fd8(prof.V, i, hh);
            cons_u = std::max(cons_u, std::abs(dU_fd - ut[i]) /
                                          (std::abs(prof.U[i]) + std::abs(ut[i]) + 1e-300));
            cons_v = std::max(cons_v, std::abs(dV_fd - vt[i]) /
                                          (std::abs(prof.V[i]) + std::abs(vt[i]) + 1e-300));
            const double duut = detail::fd8(ut, i, hh);
            const double dvvt = detail::fd8(vt, i, hh);
            const double den_u = std::abs(duut) + Nm2 * std::abs(ut[i]) + r2 * fv + 1e-300;
            const double den_v = std::abs(dvvt) + Nm2 * std::abs(vt[i]) + r2 * gu + 1e-300;
            res_u = std::max(res_u, std::abs(duut + Nm2 * ut[i] + r2 * fv) / den_u);
            res_v = std::max(res_v, std::abs(dvvt + Nm2 * vt[i] + r2 * gu) / den_v);
        }
        prof.diag.consistency_u = cons_u;
        prof.diag.consistency_v = cons_v;
        prof.diag.ode_residual_u = res_u;
        prof.diag.ode_residual_v = res_v;
        if (std::max({cons_u, cons_v, res_u, res_v}) > o.rtol)
            throw unresolved_error("stored-mesh ODE residual exceeds the requested tolerance");
    }
    return prof;
}

inline tail_constants tail_constants_fit(const bubble_profile& prof, double fit_lo,
                                         double fit_hi) {
    const auto& r = prof.r;
    if (r.empty()) throw bad_fit_error("empty profile");
    std::size_t i0 = 0, i1 = r.size();
    while (i0 < r.size() && r[i0] < fit_lo) ++i0;
    while (i1 > 0 && r[i1 - 1] > fit_hi) --i1;
    if (i1 <= i0 + 16) {
        std::ostringstream os;
        os << "fit window [" << fit_lo << ", " << fit_hi << "] covers fewer than 16 mesh nodes"
           << " (mesh spans [" << r.front() << ", " << r.back() << "])";
        throw bad_fit_error(os.str());
    }
    const auto& e = prof.exps;
    std::span<const double> rw(r.data() + i0, i1 - i0);
    std::span<const double> Uw(prof.U.data() + i0, i1 - i0);
    std::span<const double> Vw(prof.V.data() + i0, i1 - i0);
    // correction exponents: 1/r from the neighbour's expansion, the
    // homogeneous gap N-2-gamma_u for U, 1/r^2 next order
    auto fu = detail::fit_power_law(rw, Uw, {1.0, double(e.dim) - 2.0 - e.gamma_u, 2.0});
    auto fv = detail::fit_power_law(rw, Vw, {1.0, 2.0});

    tail_constants tc;
    tc.a_Np = fu.amplitude;
    tc.b_Np = fv.amplitude;
    tc.slope_u = fu.slope;
    tc.slope_v = fv.slope;
    tc.fit_lo = fit_lo;
    tc.fit_hi = fit_hi;
    tc.rms_u = fu.rms;
    tc.rms_v = fv.rms;
    tc.rms_residual = std::max(fu.rms, fv.rms);
    tc.u_corr_exps = fu.corr_exps;
    tc.u_corr_coefs = fu.corr_coefs;
    tc.v_corr_exps = fv.corr_exps;
    tc.v_corr_coefs = fv.corr_coefs;
    if (tc.rms_residual > 0.05)
        throw bad_fit_error("tail fit rms " + std::to_string(tc.rms_residual) +
                            " too large; r_max too small for the asymptotic regime");
    return tc;
}

// Kernel sample accessors plus the independent linearized-system check.
struct kernel_profiles_view {
    std::span<const double> psi0, phi0; // dilation pair
    std::span<const double> psi_r, phi_r; // translation pair, = (U', V')
};

inline kernel_profiles_view kernel_profiles(const bubble_profile& p) {
    return {p.Psi0, p.Phi0, p.dU, p.dV};
}

// FD application of the radial linearized operator to the sampled kernels:
//   psi_tt + (N-2) psi_t + e^{2t} p V^{p-1} phi = 0   (and symmetrically)
// Returns the max normalized residual over interior nodes.
inline std::pair<double, double> kernel_linearized_residual(const bubble_profile& prof) {
    const auto& e = prof.exps;
    const std::size_t n = prof.size();
    const double hh = prof.t[1] - prof.t[0];
    const double Nm2 = double(e.dim) - 2.0;
    const double cu = double(e.dim) / (e.q + 1.0);
    const double cv = double(e.dim) / (e.p + 1.0);
    std::vector<double> psit(n), phit(n);
    for (std::size_t i = 0; i < n; ++i) {
        // psi_t = u_tt + c_u u_t with u_tt from the field equation
        const double r2 = prof.r[i] * prof.r[i];
        const double ut = prof.r[i] * prof.dU[i];
        const double vt = prof.r[i] * prof.dV[i];
        const double utt = -Nm2 * ut - r2 * std::pow(std::abs(prof.V[i]), e.p);
        const double vtt = -Nm2 * vt - r2 * std::pow(std::abs(prof.U[i]), e.q);
        psit[i] = utt + cu * ut;
        phit[i] = vtt + cv * vt;
    }
    double res_psi = 0.0, res_phi = 0.0;
    for (std::size_t i = 4; i + 4 < n; ++i) {
        const double r2 = prof.r[i] * prof.r[i];
        const double fp = e.p * std::pow(std::abs(prof.V[i]), e.p - 1.0);
        const double gq = e.q * std::pow(std::abs(prof.U[i]), e.q - 1.0);
        const double dpsit = detail::fd8(psit, i, hh);
        const double dphit = detail::fd8(phit, i, hh);
        const double num_psi = dpsit + Nm2 * psit[i] + r2 * fp * prof.Phi0[i];
        const double num_phi = dphit + Nm2 * phit[i] + r2 * gq * prof.Psi0[i];
        const double den_psi =
            std::abs(dpsit) + Nm2 * std::abs(psit[i]) + r2 * fp * std::abs(prof.Phi0[i]) + 1e-300;
        const double den_phi =
            std::abs(dphit) + Nm2 * std::abs(phit[i]) + r2 * gq * std::abs(prof.Psi0[i]) + 1e-300;
        res_psi = std::max(res_psi, std::abs(num_psi) / den_psi);
        res_phi = std::max(res_phi, std::abs(num_phi) / den_phi);
    }
    return {res_psi, res_phi};
}

namespace detail {

// cubic Hermite interpolation in t = ln r of a profile column
inline double hermite_t(const bubble_profile& p, std::span<const double> f,
                        std::span<const double> df_dr, double tq) {
    const double h = p.t[1] - p.t[0];
    std::size_t i = (std::size_t)std::floor((tq - p.t[0]) / h);
    if (i + 1 >= p.size()) i = p.size() - 2;
    const double s = (tq - p.t[i]) / h;
    const double f0 = f[i], f1 = f[i + 1];
    const double m0 = p.r[i] * df_dr[i] * h;        // df/dt * h
    const double m1 = p.r[i + 1] * df_dr[i + 1] * h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * f1 +
           (s3 - s2) * m1;
}

} // namespace detail

// (U_{mu,xi}(x), V_{mu,xi}(x)) = (mu^{-N/(q+1)} U(|x-xi|/mu), mu^{-N/(p+1)} V(|x-xi|/mu))
inline std::pair<double, double> evaluate_bubble(const bubble_profile& p, double mu,
                                                 std::span<const double> xi,
                                                 std::span<const double> x) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) d2 += (x[k] - xi[k]) * (x[k] - xi[k]);
    const double s = std::sqrt(d2) / mu;
    const auto& e = p.exps;

    double Uv, Vv;
    if (s <= p.r.front()) {
        const double bp = std::pow(p.beta, e.p);
        Uv = 1.0 - bp * s * s / (2.0 * e.dim);
        Vv = p.beta - s * s / (2.0 * e.dim);
    } else if (s <= p.r.back()) {
        const double tq = std::log(s);
        Uv = detail::hermite_t(p, p.U, p.dU, tq);
        Vv = detail::hermite_t(p, p.V, p.dV, tq);
    } else {
        Uv = p.tails.eval_u(s);
        Vv = p.tails.eval_v(s);
    }
    const double su = std::pow(mu, -double(e.dim) / (e.q + 1.0));
    const double sv = std::pow(mu, -double(e.dim) / (e.p + 1.0));
    return {su * Uv, sv * Vv};
}

} // namespace lem
