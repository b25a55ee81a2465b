#pragma once

// Exponent algebra for the critical Sobolev hyperbola
//
//     1/(p+1) + 1/(q+1) = (N-2)/N,
//
// together with the decay rates of the ground state of the limit system:
// U decays like r^{-gamma_u} with gamma_u = (N-2)p-2 and V like
// r^{-gamma_v} with gamma_v = N-2.  The admissible window for p is
// (max(1, 2/(N-2)), (N-1)/(N-2)); it is empty for N = 3.

#include <cmath>
#include <sstream>

#include "lem/errors.hpp"

namespace lem {

struct critical_exponents {
    int dim = 0;          // N
    double p = 0.0;
    double q = 0.0;       // solved from the hyperbola
    double gamma_u = 0.0; // (N-2)p - 2
    double gamma_v = 0.0; // N - 2
    double kappa0 = 0.0;  // min{N-2, (N-1)p-2}

    // hyperbola residual 1/(p+1) + 1/(q+1) - (N-2)/N
    double hyperbola_residual() const {
        return 1.0 / (p + 1.0) + 1.0 / (q + 1.0) - (double(dim) - 2.0) / double(dim);
    }
    // residual of gamma_u = N(p+1)/(q+1)
    double gamma_identity_residual() const {
        return gamma_u - double(dim) * (p + 1.0) / (q + 1.0);
    }
};

inline double admissible_p_lower(int N) { return std::max(1.0, 2.0 / (double(N) - 2.0)); }
inline double admissible_p_upper(int N) { return (double(N) - 1.0) / (double(N) - 2.0); }

inline critical_exponents make_exponents(int N, double p) {
    if (N < 3)
        throw inadmissible_error("N must be at least 3, got N=" + std::to_string(N));
    const double lo = admissible_p_lower(N);
    const double hi = admissible_p_upper(N);
    if (!(lo < hi)) {
        std::ostringstream os;
        os << "N=" << N << ": admissible window (" << lo << ", " << hi
           << ") for p is empty (requires p > 2/(N-2) and p < (N-1)/(N-2))";
        throw inadmissible_error(os.str());
    }
    if (!(p > lo) || !(p < hi)) {
        std::ostringstream os;
        os << "p=" << p << " outside admissible window (" << lo << ", " << hi << ") for N=" << N;
        if (!(p > lo)) os << "; violates p > max(1, 2/(N-2)) = " << lo;
        if (!(p < hi)) os << "; violates p < (N-1)/(N-2) = " << hi;
        throw inadmissible_error(os.str());
    }

    critical_exponents e;
    e.dim = N;
    e.p = p;
    // q from 1/(q+1) = (N-2)/N - 1/(p+1)
    const double Nd = N;
    e.q = Nd * (p + 1.0) / ((Nd - 2.0) * (p + 1.0) - Nd) - 1.0;
    e.gamma_u = (Nd - 2.0) * p - 2.0;
    e.gamma_v = Nd - 2.0;
    e.kappa0 = std::min(Nd - 2.0, (Nd - 1.0) * p - 2.0);
    return e;
}

inline double sphere_area(int N) {
    // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2)
    return 2.0 * std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N);
}

inline double gamma_n(int N) {
    // fundamental solution coefficient: G_free(x) = gamma_n |x|^{2-N}
    return 1.0 / ((double(N) - 2.0) * sphere_area(N));
}

inline double gamma_tilde(const critical_exponents& e) {
    // -Delta( gamma_tilde r^{-gamma_u} ) = (gamma_n r^{2-N})^p  exactly
    const double N = e.dim;
    return std::pow(gamma_n(e.dim), e.p) / (e.gamma_u * (N - (N - 2.0) * e.p));
}

} // namespace lem
