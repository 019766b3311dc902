#include "opwave/wavelets.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <limits>
#include <cmath>
#include <map>

#include "opwave/parallel.hpp"

namespace opwave {

Complex wavelet_spectrum_at(const InversePowerPeriodization& sums, const OperatorSpec& op,
                            double det_pow_j, const Eigen::VectorXd& omega) {
    const Complex l = op.evaluate(omega);
    if (l == Complex(0.0)) return 0.0;
    const double shifted = sums.shifted(omega);
    if (std::isinf(shifted)) return 0.0;
    return det_pow_j * std::conj(l) / (1.0 + std::norm(l) * shifted);
}

SpectralField wavelet_spectrum(const OperatorSpec& op, const DilationMatrix& d, int j,
                               const FrequencyGrid& grid, double tol) {
    InversePowerPeriodization sums(op, d, j, 1, tol);
    const double det_pow_j = std::pow(static_cast<double>(d.det_abs()), j);
    std::vector<Complex> v(grid.size());
    parallel::for_each_index(grid.size(), [&](std::size_t i) {
        v[i] = wavelet_spectrum_at(sums, op, det_pow_j, grid.point(i));
    });
    return {std::move(v), grid, SpectrumTag::Wavelet};
}

SpectralField wavelet_spectrum_inverse_form(const OperatorSpec& op, const DilationMatrix& d, int j,
                                            const FrequencyGrid& grid, double tol) {
    InversePowerPeriodization sums(op, d, j, 1, tol);
    const double det_pow_j = std::pow(static_cast<double>(d.det_abs()), j);
    std::vector<Complex> v(grid.size());
    parallel::for_each_index(grid.size(), [&](std::size_t i) {
        const Eigen::VectorXd w = grid.point(i);
        const Complex l = op.evaluate(w);
        if (l == Complex(0.0)) {
            v[i] = 0.0;
            return;
        }
        const double t = sums.full(w);
        v[i] = std::isinf(t) ? Complex(0.0) : det_pow_j * (1.0 / l) / t;
    });
    return {std::move(v), grid, SpectrumTag::Wavelet};
}

double coset_energy_at(const OperatorSpec& op, const DilationMatrix& d, int j, int m,
                       const Eigen::VectorXd& omega, double tol) {
    InversePowerPeriodization sums(op, d, j, 1, tol);
    const Eigen::VectorXd shift = d.dual_basis(j + 1) * d.cosets()[m].cast<double>();
    const double t = sums.full(Eigen::VectorXd(omega + shift));
    const double det_pow = std::pow(static_cast<double>(d.det_abs()), j - 1);
    return std::isinf(t) ? 0.0 : det_pow / t;
}

CosetEnergies coset_energies(const OperatorSpec& op, const DilationMatrix& d, int j, int grid_n,
                             double tol) {
    FrequencyGrid grid(d, j + 1, grid_n);
    InversePowerPeriodization sums(op, d, j, 1, tol);
    const double det_pow = std::pow(static_cast<double>(d.det_abs()), j - 1);
    const int m_count = static_cast<int>(d.det_abs());

    std::vector<std::vector<double>> c(m_count, std::vector<double>(grid.size()));
    for (int m = 0; m < m_count; ++m) {
        const Eigen::VectorXd shift = d.dual_basis(j + 1) * d.cosets()[m].cast<double>();
        parallel::for_each_index(grid.size(), [&](std::size_t i) {
            const double t = sums.full(Eigen::VectorXd(grid.point(i) + shift));
            c[m][i] = std::isinf(t) ? 0.0 : det_pow / t;
        });
    }
    return {std::move(c), grid, j};
}

double coset_energy_direct(const OperatorSpec& op, const DilationMatrix& d, int j, int m,
                           const Eigen::VectorXd& omega, int window, double tol) {
    InversePowerPeriodization sums(op, d, j, 1, tol);
    const double det_pow_j = std::pow(static_cast<double>(d.det_abs()), j);
    const Eigen::VectorXd u = omega + d.dual_basis(j + 1) * d.cosets()[m].cast<double>();
    const Eigen::MatrixXd b = d.dual_basis(j);
    const int dd = d.dim();

    // window part: independently evaluated wavelet spectra
    double acc = 0.0;
    double raw_inverse = 0.0; // sum over the window of |L|^{-2}
    std::vector<int> idx(dd, -window);
    while (true) {
        Eigen::VectorXd p = u;
        for (int i = 0; i < dd; ++i) p += b.col(i) * static_cast<double>(idx[i]);
        acc += std::norm(wavelet_spectrum_at(sums, op, det_pow_j, p));
        const double m2 = std::norm(op.evaluate(p));
        if (m2 > 0.0) raw_inverse += 1.0 / m2;
        int pos = dd - 1;
        while (pos >= 0) {
            if (++idx[pos] <= window) break;
            idx[pos] = -window;
            --pos;
        }
        if (pos < 0) break;
    }
    // tail: |psi|^2 = |det|^{2j} |L|^{-2} / T^2 with T constant on the orbit
    const double t = sums.full(u);
    if (!std::isinf(t)) {
        acc += det_pow_j * det_pow_j * (t - raw_inverse) / (t * t);
    }
    return acc * std::pow(static_cast<double>(d.det_abs()), -j - 1);
}

double coset_energy_localized(const OperatorSpec& op, const LocalizationSpec& loc,
                              const DilationMatrix& d, int j, int m, const Eigen::VectorXd& omega,
                              double tol) {
    InversePowerPeriodization sums(op, d, j, 1, tol);
    const Eigen::VectorXd u = omega + d.dual_basis(j + 1) * d.cosets()[m].cast<double>();
    const double ld2 = std::norm(loc.evaluate(u));
    const double t = sums.full(u);
    const double power_sum = ld2 * t; // sum of |bspline|^2 over scale-j shifts
    if (power_sum <= 0.0 || std::isinf(t)) return 0.0;
    return std::pow(static_cast<double>(d.det_abs()), j - 1) * ld2 / power_sum;
}

namespace {

// Phase matrices for the Gramian assembly; entries depend only on the coset
// geometry, not on the frequency.
struct GramianGeometry {
    int m_count;
    Eigen::MatrixXcd h0;                    // M x (M-1), unitary coset DFT minus column 0
    std::vector<Eigen::MatrixXcd> phase;    // per m: (M-1) x (M-1) phase matrix
};

GramianGeometry gramian_geometry(const DilationMatrix& d) {
    GramianGeometry g;
    const int mc = static_cast<int>(d.det_abs());
    g.m_count = mc;
    const Eigen::MatrixXd dt_inv = d.dual_basis(1) / (2.0 * M_PI); // (D^T)^{-1}
    const auto& e = d.cosets();

    g.h0.resize(mc, mc - 1);
    for (int k = 0; k < mc; ++k) {
        for (int m = 1; m < mc; ++m) {
            const double phase = 2.0 * M_PI * e[m].cast<double>().dot(dt_inv * e[k].cast<double>());
            g.h0(k, m - 1) = Complex(std::cos(phase), std::sin(phase)) / std::sqrt(double(mc));
        }
    }
    for (int m = 0; m < mc; ++m) {
        Eigen::MatrixXcd pm(mc - 1, mc - 1);
        for (int k = 1; k < mc; ++k) {
            for (int l = 1; l < mc; ++l) {
                const Eigen::VectorXd diff = (e[k] - e[l]).cast<double>();
                const double phase = -2.0 * M_PI * diff.dot(dt_inv * e[m].cast<double>());
                pm(k - 1, l - 1) = Complex(std::cos(phase), std::sin(phase));
            }
        }
        g.phase.push_back(pm);
    }
    return g;
}

} // namespace

GramianExtremes gramian_extremes(const CosetEnergies& ce, const DilationMatrix& d,
                                 GramianRoute route) {
    const int mc = static_cast<int>(d.det_abs());
    if (mc < 2) raise(ErrorCode::BadParameter, "Gramian needs |det D| >= 2");
    const GramianGeometry geom = gramian_geometry(d);
    const std::size_t npts = ce.grid.size();

    GramianExtremes out;
    out.lambda.resize(npts);
    out.lambda_max.resize(npts);

    parallel::for_each_index(npts, [&](std::size_t i) {
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(mc - 1, mc - 1);
        if (route == GramianRoute::FactorH0) {
            Eigen::VectorXd diag(mc);
            for (int m = 0; m < mc; ++m) diag(m) = ce.c[m][i];
            g = static_cast<double>(mc) * geom.h0.adjoint() * diag.asDiagonal() * geom.h0;
        } else {
            for (int m = 0; m < mc; ++m) g += ce.c[m][i] * geom.phase[m];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
        out.lambda[i] = es.eigenvalues().minCoeff();
        out.lambda_max[i] = es.eigenvalues().maxCoeff();
    });

    out.min_lambda = out.lambda[0];
    out.max_lambda_max = out.lambda_max[0];
    for (std::size_t i = 1; i < npts; ++i) {
        out.min_lambda = std::min(out.min_lambda, out.lambda[i]);
        out.max_lambda_max = std::max(out.max_lambda_max, out.lambda_max[i]);
    }
    return out;
}

std::vector<double> zero_set_separations(const OperatorSpec& op, const DilationMatrix& d, int j) {
    const auto& zeros = op.zero_set();
    const int mc = static_cast<int>(d.det_abs());
    const int dd = d.dim();
    std::vector<double> seps;

    for (int m = 1; m < mc; ++m) {
        if (zeros.shape == ZeroSetDescriptor::Shape::Empty) {
            seps.push_back(std::numeric_limits<double>::infinity());
            continue;
        }
        const Eigen::VectorXd shift = d.dual_basis(j + 1) * d.cosets()[m].cast<double>();
        double reach = shift.norm() + 1.0;
        if (zeros.shape == ZeroSetDescriptor::Shape::Sphere) {
            reach += 2.0 * zeros.radius;
        } else {
            for (const auto& p : zeros.points) reach += 2.0 * p.norm();
        }
        const int window = 2 + static_cast<int>(std::ceil(reach / d.dual_scale(j)));

        double best = std::numeric_limits<double>::infinity();
        std::vector<int> idx(dd, -window);
        const Eigen::MatrixXd b = d.dual_basis(j);
        while (true) {
            Eigen::VectorXd lat = shift;
            for (int i = 0; i < dd; ++i) lat += b.col(i) * static_cast<double>(idx[i]);
            if (zeros.shape == ZeroSetDescriptor::Shape::Sphere) {
                best = std::min(best, lat.norm() - 2.0 * zeros.radius);
            } else {
                for (const auto& p : zeros.points) {
                    for (const auto& q : zeros.points) {
                        best = std::min(best, (p - q + lat).norm());
                    }
                }
            }
            int pos = dd - 1;
            while (pos >= 0) {
                if (++idx[pos] <= window) break;
                idx[pos] = -window;
                --pos;
            }
            if (pos < 0) break;
        }
        seps.push_back(best);
    }
    return seps;
}

double wavelet_normalization(double r, int dim, const DilationMatrix& d, int j) {
    return std::pow(static_cast<double>(d.det_abs()), (r / dim - 0.5) * j);
}

RieszReport riesz_basis_test(const OperatorSpec& op, const DilationMatrix& d, int j, int grid_n,
                             double tol) {
    RieszReport rep;
    rep.scale_j = j;
    rep.coset_zero_distances = zero_set_separations(op, d, j);
    rep.zero_overlap = false;
    for (double s : rep.coset_zero_distances) {
        if (s <= 1e-9) rep.zero_overlap = true;
    }

    const CosetEnergies ce = coset_energies(op, d, j, grid_n, tol);
    const GramianExtremes ge = gramian_extremes(ce, d);
    rep.lambda_min = ge.min_lambda;
    rep.lambda_max = ge.max_lambda_max;
    rep.normalization = wavelet_normalization(op.order(), d.dim(), d, j);
    rep.scale_supported = !op.max_certified_scale() || j <= *op.max_certified_scale();
    rep.pass = rep.scale_supported && !rep.zero_overlap && rep.lambda_min > 1e-12 * rep.lambda_max &&
               rep.lambda_max > 0.0;
    return rep;
}

double orthogonality_residual(const OperatorSpec& op, const DilationMatrix& d, int j,
                              const std::vector<IntVector>& shifts, int grid_n, int band_octaves,
                              double tol) {
    const int dd = d.dim();
    LocalizationSpec loc_next = make_localization(op, d, j + 1);
    InversePowerPeriodization sums(op, d, j, 1, tol);
    const double det_pow_j = std::pow(static_cast<double>(d.det_abs()), j);

    // Band grid at scale j - R. R drops to 0 when the scale-j lattice shifts
    // are not exact bin vectors, and for blend localizations, whose lattice
    // series decays too slowly for wide-band aliasing.
    int band = loc_next.kind() == LocalizationKind::RadialBlend ? 0 : band_octaves;
    Eigen::MatrixXd fold_mat;
    while (band > 0) {
        fold_mat = static_cast<double>(grid_n) * (d.matrix_power(band).transpose()).inverse();
        bool integral = true;
        for (int r = 0; r < dd; ++r) {
            for (int c = 0; c < dd; ++c) {
                if (std::abs(fold_mat(r, c) - std::round(fold_mat(r, c))) > 1e-9) integral = false;
            }
        }
        if (integral) break;
        --band;
    }
    FrequencyGrid grid(d, j - band, grid_n);
    const std::size_t npts = grid.size();
    const double cell = grid.cell_volume();
    const double classes = std::pow(static_cast<double>(d.det_abs()), band);

    // Per-bin pieces: phi_{j+1} conj(psi_{j+1}), the scale-j projection
    // weight, and the localization value.
    std::vector<Complex> product(npts);
    std::vector<double> weight(npts);
    std::vector<Complex> loc_vals(npts);
    parallel::for_each_index(npts, [&](std::size_t i) {
        const Eigen::VectorXd w = grid.point(i);
        const Complex l = op.evaluate(w);
        const Complex ld = loc_next.evaluate(w);
        const Complex psi = wavelet_spectrum_at(sums, op, det_pow_j, w);
        product[i] = (ld / l) * std::conj(psi);
        weight[i] = projection_weight_at(sums, op, 1, w);
        loc_vals[i] = ld;
    });

    // Fold the projection weights over congruence classes of the scale-j
    // dual lattice within the band; the out-of-band remainder of the
    // integrand is det^j * Ld * (1 - fold) per class.
    std::vector<double> fold_sum(npts);
    if (band == 0) {
        fold_sum = weight;
    } else {
        IntMatrix s(dd, dd);
        for (int r = 0; r < dd; ++r) {
            for (int c = 0; c < dd; ++c) s(r, c) = std::llround(fold_mat(r, c));
        }
        const Eigen::MatrixXd s_inv = s.cast<double>().inverse();
        auto key_of = [&](const std::vector<int>& bin) {
            Eigen::VectorXd x(dd);
            for (int q = 0; q < dd; ++q) x(q) = bin[q];
            Eigen::VectorXd y = s_inv * x;
            std::array<long, 3> key{0, 0, 0};
            for (int q = 0; q < dd; ++q) {
                const double frac = y(q) - std::floor(y(q));
                key[q] = std::lround(frac * (1 << 20));
                if (key[q] == (1 << 20)) key[q] = 0;
            }
            return key;
        };
        std::map<std::array<long, 3>, std::size_t> class_ids;
        std::vector<double> by_class;
        std::vector<std::size_t> class_of(npts);
        for (std::size_t i = 0; i < npts; ++i) {
            const auto key = key_of(grid.multi_index(i));
            auto [it, inserted] = class_ids.emplace(key, by_class.size());
            if (inserted) by_class.push_back(0.0);
            class_of[i] = it->second;
            by_class[it->second] += weight[i];
        }
        if (static_cast<double>(class_ids.size()) * classes != static_cast<double>(npts)) {
            raise(ErrorCode::InternalError, "band folding produced an unexpected class count");
        }
        for (std::size_t i = 0; i < npts; ++i) fold_sum[i] = by_class[class_of[i]];
    }

    const double scale = cell / std::pow(2.0 * M_PI, dd);
    const double phi_norm2 = parallel::deterministic_sum(npts, [&](std::size_t i) {
        return std::norm(loc_vals[i] / op.evaluate(grid.point(i)));
    });
    const double psi_norm2 = parallel::deterministic_sum(npts, [&](std::size_t i) {
        return std::norm(wavelet_spectrum_at(sums, op, det_pow_j, grid.point(i)));
    });
    const double norm_product = std::sqrt(phi_norm2 * scale) * std::sqrt(psi_norm2 * scale);

    double worst = 0.0;
    const Eigen::MatrixXd dj = d.matrix_power(j);
    for (const auto& k : shifts) {
        const Eigen::VectorXd x = dj * k.cast<double>();
        auto integrand = [&](std::size_t i) {
            const double phase = grid.point(i).dot(x);
            const Complex ti = product[i] + det_pow_j * loc_vals[i] * (1.0 - fold_sum[i]) / classes;
            return ti * Complex(std::cos(phase), std::sin(phase));
        };
        const double re =
            parallel::deterministic_sum(npts, [&](std::size_t i) { return integrand(i).real(); });
        const double im =
            parallel::deterministic_sum(npts, [&](std::size_t i) { return integrand(i).imag(); });
        worst = std::max(worst, std::hypot(re, im) * scale);
    }
    return worst / norm_product;
}

} // namespace opwave
