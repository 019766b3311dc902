#pragma once

#include <Eigen/Dense>

#include "opwave/lattice.hpp"
#include "opwave/symbols.hpp"

namespace opwave {

// Regularized incomplete gamma functions. gamma_p is the lower tail P(s,x),
// gamma_q the upper tail Q(s,x) = 1 - P(s,x). s > 0, x >= 0.
double gamma_p(double s, double x);
double gamma_q(double s, double x);

// Sum over the integer lattice of |u+k|^{-q} for q > d, u not in Z^d,
// evaluated by Ewald splitting; absolute accuracy near machine precision.
double epstein_hurwitz(double q, const Eigen::VectorXd& u);

// Sum over k in Z^d \ {0} of |k|^{-q}, q > d.
double epstein_zeta(double q, int d);

// Periodized inverse-modulus power sums
//   S(omega) = sum over k of |L(omega + B_j k)|^{-2n},
// with B_j = 2*pi*(D^T)^{-j}, for symbols whose squared modulus has the
// radial form (shift + |w|^2)^g. A direct window captures the non-asymptotic
// part; the remainder is expanded in a convergent series of pure inverse
// powers and summed exactly with epstein_hurwitz.
//
// The sums are invariant under omega -> omega + B_j k and are evaluated
// after exact reduction to the base cell, so equivalent points give
// bit-identical results.
class InversePowerPeriodization {
public:
    InversePowerPeriodization(const OperatorSpec& op, const DilationMatrix& d, int j, int n,
                              double tol = 1e-10);

    // Excludes the k = 0 term. Returns +inf if a shifted point lies exactly
    // on the zero set of the symbol.
    double shifted(const Eigen::VectorXd& omega) const;

    // Includes the k = 0 term.
    double full(const Eigen::VectorXd& omega) const;

    // Direct shell summation without the analytic tail; reference
    // implementation used by tests and by uncertified tabulated symbols.
    double full_brute(const Eigen::VectorXd& omega, int shells) const;

    int window_radius() const { return window_; }
    double tolerance() const { return tol_; }
    int power() const { return n_; }

private:
    double sum_impl(const Eigen::VectorXd& omega, bool include_origin) const;
    double tail(const Eigen::VectorXd& u) const;

    OperatorSpec op_;
    DilationMatrix dil_;
    int j_;
    int n_;
    double tol_;
    double beta_;        // dual lattice scale 2*pi*a^{-j}
    double shift_;       // modulus family shift s
    double exponent_;    // total exponent w = n*g
    int dim_;
    int window_;         // direct window radius K
    int q_window_;       // Ewald real-space window K2
    int recip_window_;   // reciprocal window M
    double eta_;
    std::vector<double> series_coeff_; // binom(-w,i) * s^i * beta^{-(2w+2i)}
    std::vector<double> series_power_; // 2w + 2i
    // reciprocal-space data per series term: constant part and per-m integrals
    std::vector<double> recip_const_;
    std::vector<std::vector<double>> recip_integral_; // [term][m-list index]
    std::vector<Eigen::VectorXi> recip_modes_;
    bool brute_only_ = false;
};

} // namespace opwave
