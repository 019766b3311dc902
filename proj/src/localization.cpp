#include "opwave/localization.hpp"

#include <cmath>

namespace opwave {

namespace {

// C-infinity step: 0 on (-inf,0], 1 on [1,inf), built from exp(-1/t).
double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double f0 = std::exp(-1.0 / t);
    const double f1 = std::exp(-1.0 / (1.0 - t));
    return f0 / (f0 + f1);
}

} // namespace

Complex LocalizationSpec::evaluate(const Eigen::VectorXd& omega) const {
    switch (kind_) {
        case LocalizationKind::Identity:
            return 1.0;
        case LocalizationKind::Exponential: {
            const double w = omega(0);
            const double phase = -a_scale_ * w;
            const Complex base =
                1.0 - std::exp(a_scale_ * alpha_) * Complex(std::cos(phase), std::sin(phase));
            Complex v = 1.0;
            for (int i = 0; i < op_.power_exponent(); ++i) v *= base;
            return v;
        }
        case LocalizationKind::DiscreteLaplacian: {
            double s = 0.0;
            for (int i = 0; i < dim_; ++i) {
                const double half = 0.5 * a_scale_ * omega(i);
                const double sn = std::sin(half);
                s += 4.0 * sn * sn;
            }
            double v = prefactor_;
            for (int i = 0; i < m_; ++i) v *= s;
            return v;
        }
        case LocalizationKind::RadialBlend: {
            // sign-matched constants: the powered symbol is (+1)^n inside the
            // circle and (-1)^n outside
            const Eigen::VectorXd w = dil_.wrap_to_cell(j_, omega);
            const double rho = w.norm();
            const double delta = rho - radius_;
            const double outer = op_.power_exponent() % 2 == 0 ? 1.0 : -1.0;
            const double flat = delta < 0.0 ? 1.0 : outer;
            if (std::abs(delta) >= 3.0 * epsilon_) return flat;
            if (std::abs(delta) <= epsilon_) return op_.evaluate(w);
            const double t = (std::abs(delta) - epsilon_) / (2.0 * epsilon_);
            const double s = smoothstep(t);
            return (1.0 - s) * op_.evaluate(w) + s * flat;
        }
    }
    raise(ErrorCode::InternalError, "unreachable localization kind");
}

LocalizationSpec make_localization(const OperatorSpec& op, const DilationMatrix& d, int j,
                                   double epsilon) {
    LocalizationSpec loc;
    loc.j_ = j;
    loc.dim_ = d.dim();
    loc.op_ = op;
    loc.dil_ = d;

    switch (op.kind()) {
        case SymbolKind::Matern:
            loc.kind_ = LocalizationKind::Identity;
            return loc;
        case SymbolKind::ExpDerivative: {
            if (d.dim() != 1) raise(ErrorCode::BadParameter, "exponential localization needs d=1");
            loc.kind_ = LocalizationKind::Exponential;
            loc.alpha_ = op.param();
            loc.a_scale_ = std::pow(d.scale(), j);
            return loc;
        }
        case SymbolKind::Laplacian: {
            // requires D = a*I; periodicity of the sine factors needs axis
            // alignment of the dual lattice
            if (!d.rotation().isIdentity(1e-12)) {
                raise(ErrorCode::UnsupportedOperator,
                      "discrete Laplacian localization requires an axis-aligned dilation");
            }
            loc.kind_ = LocalizationKind::DiscreteLaplacian;
            loc.m_ = static_cast<int>(std::lround(op.param())) * op.power_exponent();
            loc.a_scale_ = std::pow(d.scale(), j);
            // scale normalization making the B-spline spectra satisfy
            // phi_j(w) = phi_0(a^j w)
            loc.prefactor_ = std::pow(loc.a_scale_, -2.0 * loc.m_);
            return loc;
        }
        case SymbolKind::Helmholtz: {
            // Wavelet scales are certified for j <= 0 only; the blend itself
            // is additionally needed one scale up, for the coarse space of
            // the decomposition.
            if (j > op.max_certified_scale().value_or(0) + 1) {
                raise(ErrorCode::UnsupportedScale,
                      "no localization is defined for the Helmholtz symbol at scale j=" +
                          std::to_string(j));
            }
            if (d.dim() != 2 || !d.rotation().isIdentity(1e-12) || d.det_abs() != 4) {
                raise(ErrorCode::BadParameter, "Helmholtz localization requires D = 2I in d=2");
            }
            loc.kind_ = LocalizationKind::RadialBlend;
            loc.epsilon_ = epsilon > 0.0 ? epsilon : 0.0625;
            loc.radius_ = op.zero_set().radius;
            const double half_cell = M_PI * std::pow(2.0, -j);
            if (loc.radius_ + 3.0 * loc.epsilon_ >= half_cell || 3.0 * loc.epsilon_ >= loc.radius_) {
                raise(ErrorCode::BadParameter, "blend width does not fit the fundamental cell");
            }
            return loc;
        }
        case SymbolKind::Tabulated:
            raise(ErrorCode::UnsupportedOperator, "no localization catalog for tabulated symbols");
    }
    raise(ErrorCode::InternalError, "unreachable operator kind");
}

double periodicity_residual(const LocalizationSpec& loc, const DilationMatrix& d, int j, int n) {
    FrequencyGrid grid(d, j, n);
    const Eigen::MatrixXd b = d.dual_basis(j);
    const int dd = d.dim();

    double worst = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, grid.size() / 4096);
    std::vector<int> shift(dd, -1);
    while (true) {
        bool nonzero = false;
        for (int i = 0; i < dd; ++i) nonzero |= shift[i] != 0;
        if (nonzero) {
            Eigen::VectorXd beta = Eigen::VectorXd::Zero(dd);
            for (int i = 0; i < dd; ++i) beta += b.col(i) * static_cast<double>(shift[i]);
            for (std::size_t p = 0; p < grid.size(); p += stride) {
                const Eigen::VectorXd w = grid.point(p);
                const Complex v0 = loc.evaluate(w);
                const Complex v1 = loc.evaluate(Eigen::VectorXd(w + beta));
                worst = std::max(worst, std::abs(v1 - v0));
            }
        }
        int pos = dd - 1;
        while (pos >= 0) {
            if (++shift[pos] <= 1) break;
            shift[pos] = -1;
            --pos;
        }
        if (pos < 0) break;
    }
    return worst;
}

namespace {

std::vector<Eigen::VectorXd> zero_probe_directions(int dim) {
    std::vector<Eigen::VectorXd> dirs;
    if (dim == 1) {
        Eigen::VectorXd e(1);
        e(0) = 1.0;
        dirs.push_back(e);
        dirs.push_back(-e);
        return dirs;
    }
    const int count = 16;
    for (int i = 0; i < count; ++i) {
        const double ang = 2.0 * M_PI * i / count;
        Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
        e(0) = std::cos(ang);
        e(1) = std::sin(ang);
        dirs.push_back(e);
    }
    return dirs;
}

// Sample points at distance r from the zero set.
std::vector<Eigen::VectorXd> zero_annulus(const ZeroSetDescriptor& z, int dim, double r) {
    std::vector<Eigen::VectorXd> pts;
    const auto dirs = zero_probe_directions(dim);
    if (z.shape == ZeroSetDescriptor::Shape::Points) {
        for (const auto& p : z.points) {
            for (const auto& e : dirs) pts.push_back(p + r * e);
        }
    } else if (z.shape == ZeroSetDescriptor::Shape::Sphere) {
        for (const auto& e : dirs) {
            pts.push_back((z.radius + r) * e);
            pts.push_back((z.radius - r) * e);
        }
    }
    return pts;
}

} // namespace

QuotientReport quotient_boundedness(const OperatorSpec& op, const LocalizationSpec& loc,
                                    const DilationMatrix& d, int j, int n) {
    QuotientReport rep;

    // Global boundedness on the offset grid, checked under one refinement.
    double prev_max = 0.0;
    for (int level = 0; level < 2; ++level) {
        FrequencyGrid grid(d, j, n << level);
        double mx = 0.0, mn = 1e300;
        const std::size_t stride = std::max<std::size_t>(1, grid.size() / 16384);
        for (std::size_t i = 0; i < grid.size(); i += stride) {
            const Eigen::VectorXd w = grid.point(i);
            const double den = std::abs(op.evaluate(w));
            if (den == 0.0) continue;
            const double q = std::abs(loc.evaluate(w)) / den;
            mx = std::max(mx, q);
            mn = std::min(mn, q);
        }
        if (level == 0) {
            prev_max = mx;
            rep.min_quotient_near_zeros = mn;
        } else {
            rep.pass = std::abs(mx - prev_max) <= 0.05 * prev_max;
            rep.max_quotient = std::max(mx, prev_max);
        }
    }

    // Shrinking annuli around the zero set: the quotient must neither blow
    // up (failed cancellation) nor collapse to zero (excess cancellation).
    const auto& zeros = op.zero_set();
    if (zeros.shape != ZeroSetDescriptor::Shape::Empty) {
        double annulus_min = 1e300;
        double prev_annulus_max = 0.0;
        int growth_streak = 0;
        const double eps0 = loc.blend_width() > 0.0 ? loc.blend_width() : 0.0625;
        for (int k = 0; k < 6; ++k) {
            const double r = eps0 * std::pow(2.0, -k);
            double amax = 0.0, amin = 1e300;
            for (const auto& p : zero_annulus(zeros, d.dim(), r)) {
                const double den = std::abs(op.evaluate(p));
                if (den == 0.0) continue;
                const double q = std::abs(loc.evaluate(p)) / den;
                amax = std::max(amax, q);
                amin = std::min(amin, q);
            }
            if (k > 0 && amax > 1.8 * prev_annulus_max) {
                if (++growth_streak >= 2) {
                    raise(ErrorCode::ZeroMismatch,
                          "quotient grows unboundedly toward the zero set of " + op.id());
                }
            } else {
                growth_streak = 0;
            }
            prev_annulus_max = amax;
            annulus_min = std::min(annulus_min, amin);
        }
        rep.min_quotient_near_zeros = annulus_min;
        rep.max_quotient = std::max(rep.max_quotient, prev_annulus_max);
        rep.pass = rep.pass && annulus_min > 1e-10 * rep.max_quotient;
    }
    return rep;
}

LatticeSeries localization_series(const LocalizationSpec& loc, const DilationMatrix& d, int j,
                                  int n) {
    FrequencyGrid grid(d, j, n, false);
    const int dd = d.dim();
    std::vector<Complex> samples(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        samples[i] = loc.evaluate(grid.point(i));
    }

    // p[k] = (1/N^d) sum_t Ld(omega(t)) e^{-2 pi i t.k}
    LatticeSeries out;
    std::vector<std::pair<IntVector, Complex>> all;
    double max_mag = 0.0;
    std::vector<int> k(dd, -n / 2);
    while (true) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Eigen::VectorXd t = grid.t_coord(i);
            double phase = 0.0;
            for (int q = 0; q < dd; ++q) phase += t(q) * k[q];
            acc += samples[i] * Complex(std::cos(-2.0 * M_PI * phase), std::sin(-2.0 * M_PI * phase));
        }
        acc /= static_cast<double>(grid.size());
        IntVector kv(dd);
        for (int q = 0; q < dd; ++q) kv(q) = k[q];
        all.emplace_back(kv, acc);
        max_mag = std::max(max_mag, std::abs(acc));
        int pos = dd - 1;
        while (pos >= 0) {
            if (++k[pos] < n / 2) break;
            k[pos] = -n / 2;
            --pos;
        }
        if (pos < 0) break;
    }
    for (auto& [kv, c] : all) {
        if (std::abs(c) >= 1e-12 * max_mag) {
            out.sites.push_back(kv);
            out.coeffs.push_back(c);
        }
    }
    return out;
}

} // namespace opwave
