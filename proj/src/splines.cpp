#include "opwave/splines.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "opwave/parallel.hpp"

namespace opwave {

SpectralField bspline_spectrum(const OperatorSpec& op, const LocalizationSpec& loc,
                               const FrequencyGrid& grid) {
    std::vector<Complex> v(grid.size());
    std::size_t bad = grid.size();
    parallel::for_each_index(grid.size(), [&](std::size_t i) {
        const Eigen::VectorXd w = grid.point(i);
        const Complex den = op.evaluate(w);
        if (den == Complex(0.0)) {
            bad = i;
            return;
        }
        v[i] = loc.evaluate(w) / den;
    });
    if (bad != grid.size()) {
        raise(ErrorCode::SingularSample,
              "grid point " + std::to_string(bad) + " lies on the zero set of " + op.id());
    }
    return {std::move(v), grid, SpectrumTag::BSpline};
}

SpectralField periodized_power_sum(const OperatorSpec& op, const LocalizationSpec& loc,
                                   const DilationMatrix& d, int j, int n,
                                   const FrequencyGrid& grid, double tol) {
    InversePowerPeriodization sums(op, d, j, n, tol);
    std::vector<Complex> v(grid.size());
    std::size_t bad = grid.size();
    parallel::for_each_index(grid.size(), [&](std::size_t i) {
        const Eigen::VectorXd w = grid.point(i);
        const double t = sums.full(w);
        if (std::isinf(t)) {
            bad = i;
            return;
        }
        const double ld = std::abs(loc.evaluate(w));
        v[i] = std::pow(ld, 2.0 * n) * t;
    });
    if (bad != grid.size()) {
        raise(ErrorCode::SingularSample, "power sum sampled on the periodized zero set of " + op.id());
    }
    return {std::move(v), grid, SpectrumTag::PowerSum};
}

RieszBounds riesz_bounds(const SpectralField& power_sum) {
    if (power_sum.tag != SpectrumTag::PowerSum) {
        raise(ErrorCode::BadParameter, "riesz_bounds expects a power-sum field");
    }
    double lo = 1e300, hi = 0.0;
    for (const Complex& c : power_sum.values) {
        const double x = c.real();
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (lo < 1e-12 * hi) {
        raise(ErrorCode::DegenerateLowerBound, "lower Riesz bound collapsed");
    }
    RieszBounds b;
    b.lower = lo;
    b.upper = hi;
    return b;
}

RieszBounds riesz_bounds_refined(const OperatorSpec& op, const LocalizationSpec& loc,
                                 const DilationMatrix& d, int j, int n, int grid_n, double tol) {
    FrequencyGrid grid(d, j, grid_n);
    SpectralField field = periodized_power_sum(op, loc, d, j, n, grid, tol);
    InversePowerPeriodization sums(op, d, j, n, tol);

    std::size_t imin = 0, imax = 0;
    for (std::size_t i = 1; i < field.values.size(); ++i) {
        if (field.values[i].real() < field.values[imin].real()) imin = i;
        if (field.values[i].real() > field.values[imax].real()) imax = i;
    }

    auto value_at = [&](const Eigen::VectorXd& t) {
        const Eigen::VectorXd w = d.dual_basis(j) * t;
        return std::pow(std::abs(loc.evaluate(w)), 2.0 * n) * sums.full(w);
    };

    // Local subdivision: shrink a one-cell neighborhood around the extremal
    // sample, keeping the best point each round.
    auto refine = [&](std::size_t seed, bool maximize) {
        Eigen::VectorXd t = grid.t_coord(seed);
        double best = field.values[seed].real();
        double h = 1.0 / grid.samples_per_dim();
        const int dd = d.dim();
        for (int round = 0; round < 8; ++round) {
            Eigen::VectorXd tb = t;
            std::vector<int> idx(dd, -2);
            while (true) {
                Eigen::VectorXd probe = t;
                for (int q = 0; q < dd; ++q) probe(q) += 0.5 * h * idx[q];
                const double val = value_at(probe);
                if (maximize ? val > best : val < best) {
                    best = val;
                    tb = probe;
                }
                int pos = dd - 1;
                while (pos >= 0) {
                    if (++idx[pos] <= 2) break;
                    idx[pos] = -2;
                    --pos;
                }
                if (pos < 0) break;
            }
            t = tb;
            h *= 0.25;
        }
        return best;
    };

    RieszBounds b;
    b.lower = refine(imin, false);
    b.upper = refine(imax, true);
    b.tail_tol = tol;
    b.truncation_radius = sums.window_radius();
    if (b.lower < 1e-12 * b.upper) {
        raise(ErrorCode::DegenerateLowerBound, "lower Riesz bound collapsed for " + op.id());
    }
    return b;
}

double projection_weight_at(const InversePowerPeriodization& sums, const OperatorSpec& op, int n,
                            const Eigen::VectorXd& omega) {
    const double m2 = op.modulus_squared(omega.squaredNorm());
    const double shifted = sums.shifted(omega);
    if (m2 <= 0.0) return 1.0;              // the k=0 term dominates an exact zero
    if (std::isinf(shifted)) return 0.0;    // a shifted point hits the zero set
    // m = |L|^{-2n} / (|L|^{-2n} + shifted) = 1 / (1 + |L|^{2n} shifted)
    return 1.0 / (1.0 + std::pow(m2, static_cast<double>(n)) * shifted);
}

double interpolant_at(const InversePowerPeriodization& sums, const OperatorSpec& op,
                      double det_pow_j, const Eigen::VectorXd& omega) {
    const double m2 = op.modulus_squared(omega.squaredNorm());
    const double shifted = sums.shifted(omega);
    if (m2 <= 0.0) return det_pow_j;
    if (std::isinf(shifted)) return 0.0;
    return det_pow_j / (1.0 + m2 * shifted);
}

SpectralField interpolant_spectrum(const OperatorSpec& op, const DilationMatrix& d, int j,
                                   const FrequencyGrid& grid, double tol) {
    InversePowerPeriodization sums(op, d, j, 1, tol);
    const double det_pow_j = std::pow(static_cast<double>(d.det_abs()), j);
    std::vector<Complex> v(grid.size());
    parallel::for_each_index(grid.size(), [&](std::size_t i) {
        v[i] = interpolant_at(sums, op, det_pow_j, grid.point(i));
    });
    return {std::move(v), grid, SpectrumTag::Interpolant};
}

SpectralField projection_weight(const OperatorSpec& op, const DilationMatrix& d, int j, int n,
                                const FrequencyGrid& grid, double tol) {
    InversePowerPeriodization sums(op, d, j, n, tol);
    std::vector<Complex> v(grid.size());
    parallel::for_each_index(grid.size(), [&](std::size_t i) {
        v[i] = projection_weight_at(sums, op, n, grid.point(i));
    });
    return {std::move(v), grid, SpectrumTag::ProjectionWeight};
}

std::shared_ptr<const SpectralField> cached_field(const std::string& key,
                                                  const std::function<SpectralField()>& make) {
    static std::map<std::string, std::shared_ptr<const SpectralField>> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto field = std::make_shared<const SpectralField>(make());
    std::lock_guard<std::mutex> lock(mu);
    auto [it, inserted] = cache.emplace(key, field);
    return it->second;
}

} // namespace opwave
