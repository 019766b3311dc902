#include "opwave/lattice_sum.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace opwave {

namespace {

constexpr double kEta = M_PI;          // Ewald splitting parameter
constexpr int kRecipWindow = 4;        // e^{-pi m^2} < 3e-22 beyond |m| = 4
constexpr int kMaxSeries = 64;

// 64-point Gauss-Legendre rule on [0,1], generated once by Newton iteration
// on the Legendre polynomial.
struct GaussLegendre {
    std::array<double, 64> x{};
    std::array<double, 64> w{};
    GaussLegendre() {
        const int n = 64;
        for (int i = 0; i < n; ++i) {
            double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double p0, p1, dp;
            for (int it = 0; it < 100; ++it) {
                p0 = 1.0;
                p1 = t;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (t * p1 - p0) / (t * t - 1.0);
                const double step = p1 / dp;
                t -= step;
                if (std::abs(step) < 1e-15) break;
            }
            x[i] = 0.5 * (1.0 - t);
            w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

const GaussLegendre& gl64() {
    static const GaussLegendre g;
    return g;
}

// integral_0^eta t^{a-1} e^{-c/t} dt, a > 0, c > 0.
double incomplete_recip_integral(double a, double c) {
    const auto& g = gl64();
    double acc = 0.0;
    for (int i = 0; i < 64; ++i) {
        const double s = g.x[i];
        if (s <= 0.0) continue;
        acc += g.w[i] * std::pow(s, a - 1.0) * std::exp(-(c / kEta) / s);
    }
    return std::pow(kEta, a) * acc;
}

// |v|^{-p} * P(p/2, eta*v^2) evaluated without forming the singular factor;
// the x^s prefactor of the P series cancels |v|^{-p} exactly.
double window_p_term(double p, double v2) {
    const double s = 0.5 * p;
    const double x = kEta * v2;
    if (x < s + 1.0) {
        // series for P(s,x), with the eta^s prefactor substituted in
        double term = 1.0 / s;
        double sum = term;
        double ap = s;
        for (int it = 0; it < 500; ++it) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return std::exp(s * std::log(kEta) - x - std::lgamma(s)) * sum;
    }
    return std::pow(v2, -0.5 * p) * gamma_p(s, x);
}

} // namespace

double gamma_p(double s, double x) {
    if (x < 0.0 || s <= 0.0) raise(ErrorCode::BadParameter, "gamma_p domain");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) {
        double ap = s;
        double term = 1.0 / s;
        double sum = term;
        for (int it = 0; it < 1000; ++it) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * 1e-17) break;
        }
        return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
    }
    return 1.0 - gamma_q(s, x);
}

double gamma_q(double s, double x) {
    if (x < 0.0 || s <= 0.0) raise(ErrorCode::BadParameter, "gamma_q domain");
    if (x < s + 1.0) return 1.0 - gamma_p(s, x);
    // Lentz continued fraction for Q(s,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

namespace {

// Shared Ewald evaluation: sum over k (optionally excluding 0, optionally
// only |k| >= min_norm) of |u+k|^{-q}, split into screened real-space part
// and reciprocal part.
double ewald_real_space(double q, const Eigen::VectorXd& u, int window) {
    const int d = static_cast<int>(u.size());
    const double s = 0.5 * q;
    double acc = 0.0;
    std::vector<int> idx(d, -window);
    while (true) {
        double v2 = 0.0;
        for (int i = 0; i < d; ++i) {
            const double t = u(i) + idx[i];
            v2 += t * t;
        }
        if (v2 > 0.0) {
            const double x = kEta * v2;
            if (x < 700.0) {
                const double qq = gamma_q(s, x);
                if (qq > 0.0) acc += std::pow(v2, -s) * qq;
            }
        }
        int pos = d - 1;
        while (pos >= 0) {
            if (++idx[pos] <= window) break;
            idx[pos] = -window;
            --pos;
        }
        if (pos < 0) break;
    }
    return acc;
}

struct RecipTerms {
    double constant;                 // m = 0 contribution
    std::vector<Eigen::VectorXi> modes;
    std::vector<double> integrals;   // per mode, before the cosine factor
};

RecipTerms recip_terms(double q, int d) {
    RecipTerms out;
    const double a = 0.5 * (q - d);
    const double gq = std::tgamma(0.5 * q);
    const double pref = std::pow(M_PI, 0.5 * d) / gq;
    out.constant = pref * std::pow(kEta, a) / a;
    std::vector<int> idx(d, -kRecipWindow);
    while (true) {
        long m2 = 0;
        for (int i = 0; i < d; ++i) m2 += static_cast<long>(idx[i]) * idx[i];
        if (m2 > 0) {
            Eigen::VectorXi m(d);
            for (int i = 0; i < d; ++i) m(i) = idx[i];
            out.modes.push_back(m);
            out.integrals.push_back(pref *
                                    incomplete_recip_integral(a, M_PI * M_PI * static_cast<double>(m2)));
        }
        int pos = d - 1;
        while (pos >= 0) {
            if (++idx[pos] <= kRecipWindow) break;
            idx[pos] = -kRecipWindow;
            --pos;
        }
        if (pos < 0) break;
    }
    return out;
}

double recip_eval(const RecipTerms& t, const Eigen::VectorXd& u) {
    double acc = t.constant;
    for (std::size_t i = 0; i < t.modes.size(); ++i) {
        double phase = 0.0;
        for (int k = 0; k < u.size(); ++k) phase += t.modes[i](k) * u(k);
        acc += t.integrals[i] * std::cos(2.0 * M_PI * phase);
    }
    return acc;
}

int ewald_window_for(double q) {
    const double s = 0.5 * q;
    const double x_cut = s + 45.0 + 8.0 * std::sqrt(s + 4.0);
    return std::max(3, static_cast<int>(std::ceil(std::sqrt(x_cut / kEta))));
}

} // namespace

double epstein_hurwitz(double q, const Eigen::VectorXd& u) {
    const int d = static_cast<int>(u.size());
    if (q <= d) raise(ErrorCode::SlowDecay, "epstein_hurwitz requires q > d");
    const int window = ewald_window_for(q);
    const RecipTerms rt = recip_terms(q, d);
    return ewald_real_space(q, u, window) + recip_eval(rt, u);
}

double epstein_zeta(double q, int d) {
    if (q <= d) raise(ErrorCode::SlowDecay, "epstein_zeta requires q > d");
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
    const int window = ewald_window_for(q);
    const RecipTerms rt = recip_terms(q, d);
    // Real-space sum skips k = 0; the limit of the k = 0 screened term minus
    // the bare |u|^{-q} singularity contributes -eta^{q/2}/Gamma(q/2+1).
    double acc = 0.0;
    {
        std::vector<int> idx(d, -window);
        const double s = 0.5 * q;
        while (true) {
            double v2 = 0.0;
            for (int i = 0; i < d; ++i) v2 += static_cast<double>(idx[i]) * idx[i];
            if (v2 > 0.0) {
                const double x = kEta * v2;
                if (x < 700.0) {
                    const double qq = gamma_q(s, x);
                    if (qq > 0.0) acc += std::pow(v2, -s) * qq;
                }
            }
            int pos = d - 1;
            while (pos >= 0) {
                if (++idx[pos] <= window) break;
                idx[pos] = -window;
                --pos;
            }
            if (pos < 0) break;
        }
    }
    acc += recip_eval(rt, zero);
    acc -= std::exp(0.5 * q * std::log(kEta) - std::lgamma(0.5 * q + 1.0));
    return acc;
}

InversePowerPeriodization::InversePowerPeriodization(const OperatorSpec& op,
                                                     const DilationMatrix& d, int j, int n,
                                                     double tol)
    : op_(op), dil_(d), j_(j), n_(n), tol_(tol) {
    if (n < 1) raise(ErrorCode::BadParameter, "power sum exponent must be n >= 1");
    dim_ = d.dim();
    if (op.dim() != dim_) raise(ErrorCode::BadParameter, "operator/dilation dimension mismatch");
    beta_ = d.dual_scale(j);

    if (!op.has_radial_modulus()) {
        brute_only_ = true;
        window_ = 64;
        return;
    }

    shift_ = op.modulus_shift();
    exponent_ = static_cast<double>(n) * op.modulus_exponent();
    if (2.0 * exponent_ <= dim_) {
        raise(ErrorCode::SlowDecay,
              "periodization diverges: 2*n*r <= d for " + op.id() + " with n=" + std::to_string(n));
    }

    // Direct window: large enough that the inverse-power series of the
    // modulus converges with ratio <= 1/4 on every excluded point.
    const double safe = 2.0 * std::sqrt(std::abs(shift_)) / beta_;
    window_ = std::max(2, static_cast<int>(std::ceil(safe + 0.5)));
    if (window_ > 40) {
        raise(ErrorCode::UnsupportedScale,
              "dual lattice too coarse for " + op.id() + " at scale j=" + std::to_string(j));
    }

    // Series of pure inverse powers for the tail:
    //   (s + b^2 v^2)^{-w} = sum_i binom(-w,i) s^i b^{-2w-2i} v^{-2w-2i}.
    const double w = exponent_;
    const double edge2 = std::pow(beta_ * (window_ + 0.5), 2.0);
    double binom = 1.0; // binom(-w,i) * shift^i
    double rel = 1.0;   // magnitude of term i relative to term 0 at the window edge
    for (int i = 0; i < kMaxSeries; ++i) {
        const double p = 2.0 * w + 2.0 * i;
        series_power_.push_back(p);
        series_coeff_.push_back(binom * std::pow(beta_, -p));
        if (shift_ == 0.0) break;
        binom *= -(w + i) * shift_ / (i + 1.0);
        rel *= std::abs(shift_) * (w + i) / ((i + 1.0) * edge2);
        if (i >= 3 && rel < 1e-18) break;
    }
    if (shift_ != 0.0 && rel > 1e-12) {
        raise(ErrorCode::InternalError, "tail series failed to converge for " + op.id());
    }

    q_window_ = std::max(window_, ewald_window_for(series_power_.back()));
    recip_window_ = kRecipWindow;
    for (std::size_t i = 0; i < series_power_.size(); ++i) {
        const RecipTerms rt = recip_terms(series_power_[i], dim_);
        recip_const_.push_back(rt.constant);
        recip_integral_.push_back(rt.integrals);
        if (i == 0) recip_modes_ = rt.modes;
    }
}

double InversePowerPeriodization::tail(const Eigen::VectorXd& u) const {
    // Z_tail(p, u, K) = -sum_{|k|<=K} P(p/2, eta|u+k|^2)|u+k|^{-p}
    //                  + sum_{K<|k|<=K2} Q(p/2, eta|u+k|^2)|u+k|^{-p}
    //                  + reciprocal(u)
    double acc = 0.0;
    const int nterm = static_cast<int>(series_power_.size());
    std::vector<double> zt(nterm, 0.0);

    std::vector<int> idx(dim_, -q_window_);
    while (true) {
        int norm_inf = 0;
        double v2 = 0.0;
        for (int i = 0; i < dim_; ++i) {
            norm_inf = std::max(norm_inf, std::abs(idx[i]));
            const double t = u(i) + idx[i];
            v2 += t * t;
        }
        if (norm_inf <= window_) {
            for (int t = 0; t < nterm; ++t) zt[t] -= window_p_term(series_power_[t], v2);
        } else {
            const double x = kEta * v2;
            if (x < 700.0) {
                for (int t = 0; t < nterm; ++t) {
                    const double qq = gamma_q(0.5 * series_power_[t], x);
                    if (qq > 0.0) zt[t] += std::pow(v2, -0.5 * series_power_[t]) * qq;
                }
            }
        }
        int pos = dim_ - 1;
        while (pos >= 0) {
            if (++idx[pos] <= q_window_) break;
            idx[pos] = -q_window_;
            --pos;
        }
        if (pos < 0) break;
    }

    // reciprocal parts share the mode list; integrals differ per term
    std::vector<double> cosines(recip_modes_.size());
    for (std::size_t i = 0; i < recip_modes_.size(); ++i) {
        double phase = 0.0;
        for (int k = 0; k < dim_; ++k) phase += recip_modes_[i](k) * u(k);
        cosines[i] = std::cos(2.0 * M_PI * phase);
    }
    for (int t = 0; t < nterm; ++t) {
        double r = recip_const_[t];
        for (std::size_t i = 0; i < recip_modes_.size(); ++i) {
            r += recip_integral_[t][i] * cosines[i];
        }
        zt[t] += r;
    }

    for (int t = 0; t < nterm; ++t) acc += series_coeff_[t] * zt[t];
    return acc;
}

double InversePowerPeriodization::sum_impl(const Eigen::VectorXd& omega, bool include_origin) const {
    if (brute_only_) {
        double acc = full_brute(omega, window_);
        if (!include_origin) {
            acc -= std::pow(std::norm(op_.evaluate(omega)), -static_cast<double>(n_));
        }
        return acc;
    }

    // Reduce to the base cell: u in [-1/2, 1/2)^d with omega = B_j (u + k0).
    // In reduced coordinates the original k = 0 term sits at index k0.
    Eigen::VectorXd u = dil_.to_dual_coords(j_, omega);
    std::vector<long> k0(dim_);
    long k0_inf = 0;
    for (int i = 0; i < dim_; ++i) {
        const double f = std::floor(u(i) + 0.5);
        k0[i] = static_cast<long>(f);
        k0_inf = std::max(k0_inf, std::labs(k0[i]));
        u(i) -= f;
    }
    const bool exclude_in_loop = !include_origin && k0_inf <= window_;

    double acc = 0.0;
    std::vector<int> idx(dim_, -window_);
    bool singular = false;
    while (true) {
        double v2 = 0.0;
        bool is_origin_term = true;
        for (int i = 0; i < dim_; ++i) {
            const double t = u(i) + idx[i];
            v2 += t * t;
            if (idx[i] != k0[i]) is_origin_term = false;
        }
        if (!(exclude_in_loop && is_origin_term)) {
            const double m2 = op_.modulus_squared(beta_ * beta_ * v2);
            if (m2 <= 0.0) {
                singular = true;
            } else {
                acc += std::pow(m2, -static_cast<double>(n_));
            }
        }
        int pos = dim_ - 1;
        while (pos >= 0) {
            if (++idx[pos] <= window_) break;
            idx[pos] = -window_;
            --pos;
        }
        if (pos < 0) break;
    }
    if (singular) return std::numeric_limits<double>::infinity();
    acc += tail(u);
    if (!include_origin && !exclude_in_loop) {
        // The k = 0 point lies outside the window, far from the zero set;
        // subtracting its (small) term is well conditioned here.
        const double m2 = op_.modulus_squared(omega.squaredNorm());
        acc -= std::pow(m2, -static_cast<double>(n_));
    }
    return acc;
}

double InversePowerPeriodization::shifted(const Eigen::VectorXd& omega) const {
    return sum_impl(omega, false);
}

double InversePowerPeriodization::full(const Eigen::VectorXd& omega) const {
    return sum_impl(omega, true);
}

double InversePowerPeriodization::full_brute(const Eigen::VectorXd& omega, int shells) const {
    double acc = 0.0;
    const Eigen::MatrixXd b = dil_.dual_basis(j_);
    bool converged = false;
    for (int shell = 0; shell <= shells; ++shell) {
        double shell_acc = 0.0;
        std::vector<int> idx(dim_, -shell);
        while (true) {
            int norm_inf = 0;
            for (int i = 0; i < dim_; ++i) norm_inf = std::max(norm_inf, std::abs(idx[i]));
            if (norm_inf == shell) {
                Eigen::VectorXd p = omega;
                for (int i = 0; i < dim_; ++i) p += b.col(i) * static_cast<double>(idx[i]);
                const double m2 = std::norm(op_.evaluate(p));
                if (m2 > 0.0) shell_acc += std::pow(m2, -static_cast<double>(n_));
            }
            int pos = dim_ - 1;
            while (pos >= 0) {
                if (++idx[pos] <= shell) break;
                idx[pos] = -shell;
                --pos;
            }
            if (pos < 0) break;
        }
        acc += shell_acc;
        if (shell > 2 && shell_acc < (brute_only_ ? 1e-8 : tol_) * acc) {
            converged = true;
            break;
        }
    }
    if (brute_only_ && !converged) {
        raise(ErrorCode::SlowDecay, "shell summation did not reach tolerance within " +
                                        std::to_string(shells) + " shells for " + op_.id());
    }
    return acc;
}

} // namespace opwave
