#pragma once

#include <memory>

#include "opwave/lattice_sum.hpp"
#include "opwave/localization.hpp"

namespace opwave {

enum class SpectrumTag { BSpline, PowerSum, Interpolant, ProjectionWeight, Wavelet };

// Complex samples on a frequency grid.
struct SpectralField {
    std::vector<Complex> values;
    FrequencyGrid grid;
    SpectrumTag tag;

    SpectralField(std::vector<Complex> v, FrequencyGrid g, SpectrumTag t)
        : values(std::move(v)), grid(std::move(g)), tag(t) {}
};

struct RieszBounds {
    double lower = 0.0;       // A_j
    double upper = 0.0;       // B_j
    double tail_tol = 0.0;
    int truncation_radius = 0;
};

// Pointwise quotient localization(w)/L(w) on the grid. Throws SingularSample
// if a grid point lies on the zero set; offset grids avoid this.
SpectralField bspline_spectrum(const OperatorSpec& op, const LocalizationSpec& loc,
                               const FrequencyGrid& grid);

// sum over k of |bspline(w + 2 pi (D^T)^{-j} k)|^{2n} on the grid, evaluated
// as |Ld(w)|^{2n} times the periodized inverse modulus power sum.
SpectralField periodized_power_sum(const OperatorSpec& op, const LocalizationSpec& loc,
                                   const DilationMatrix& d, int j, int n,
                                   const FrequencyGrid& grid, double tol = 1e-10);

// Grid extremes of a power-sum field.
RieszBounds riesz_bounds(const SpectralField& power_sum);

// Grid extremes refined by local subdivision around the extremal samples.
RieszBounds riesz_bounds_refined(const OperatorSpec& op, const LocalizationSpec& loc,
                                 const DilationMatrix& d, int j, int n, int grid_n,
                                 double tol = 1e-10);

// Cardinal interpolant spectrum |det D|^j / (1 + |L(w)|^2 sum_{k != 0}
// |L(w + 2 pi (D^T)^{-j} k)|^{-2}); localization-free.
SpectralField interpolant_spectrum(const OperatorSpec& op, const DilationMatrix& d, int j,
                                   const FrequencyGrid& grid, double tol = 1e-10);

// Interpolation ratio |L(w)|^{-2n} / sum_k |L(w + shifts)|^{-2n}; takes
// values in [0,1] and acts as the spectral projection weight of the scale-j
// space.
SpectralField projection_weight(const OperatorSpec& op, const DilationMatrix& d, int j, int n,
                                const FrequencyGrid& grid, double tol = 1e-10);

// Pointwise versions used off-grid.
double projection_weight_at(const InversePowerPeriodization& sums, const OperatorSpec& op, int n,
                            const Eigen::VectorXd& omega);
double interpolant_at(const InversePowerPeriodization& sums, const OperatorSpec& op,
                      double det_pow_j, const Eigen::VectorXd& omega);

// Process-wide spectrum cache keyed by (operator, dilation, scale, grid,
// exponent, tolerance). Thread safe; entries are immutable.
std::shared_ptr<const SpectralField> cached_field(const std::string& key,
                                                  const std::function<SpectralField()>& make);

} // namespace opwave
