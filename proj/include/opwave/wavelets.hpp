#pragma once

#include "opwave/splines.hpp"

namespace opwave {

// Wavelet spectrum at scale j+1 on the given grid:
//   psi(w) = |det D|^j conj(L(w)) / (1 + |L(w)|^2 sum_{k != 0} |L(w+shift_k)|^{-2}),
// the adjoint symbol times the cardinal interpolant.
SpectralField wavelet_spectrum(const OperatorSpec& op, const DilationMatrix& d, int j,
                               const FrequencyGrid& grid, double tol = 1e-10);

// The same function computed through the inverse-symbol route
//   |det D|^j L(w)^{-1} / sum_k |L(w+shift_k)|^{-2};
// kept as an algebraically independent cross-check of wavelet_spectrum.
SpectralField wavelet_spectrum_inverse_form(const OperatorSpec& op, const DilationMatrix& d, int j,
                                            const FrequencyGrid& grid, double tol = 1e-10);

Complex wavelet_spectrum_at(const InversePowerPeriodization& sums, const OperatorSpec& op,
                            double det_pow_j, const Eigen::VectorXd& omega);

// Per-coset energies of the scale-(j+1) wavelet over the coset-shifted dual
// lattice:
//   c(m; w) = |det D|^{-j-1} sum_{beta in 2 pi (D^T)^{-j} Z^d}
//             |psi_{j+1}(w + 2 pi (D^T)^{-j-1} e_m + beta)|^2,
// stored over a scale-(j+1) fundamental-domain grid.
struct CosetEnergies {
    std::vector<std::vector<double>> c; // [m][grid index]
    FrequencyGrid grid;                 // scale j+1
    int scale_j;

    CosetEnergies(std::vector<std::vector<double>> cc, FrequencyGrid g, int j)
        : c(std::move(cc)), grid(std::move(g)), scale_j(j) {}
};

CosetEnergies coset_energies(const OperatorSpec& op, const DilationMatrix& d, int j, int grid_n,
                             double tol = 1e-10);

// Pointwise coset energy, usable off-grid.
double coset_energy_at(const OperatorSpec& op, const DilationMatrix& d, int j, int m,
                       const Eigen::VectorXd& omega, double tol = 1e-10);

// Reference route: truncated lattice sum of independently evaluated wavelet
// spectra plus the analytic tail. Used as a cross-check oracle.
double coset_energy_direct(const OperatorSpec& op, const DilationMatrix& d, int j, int m,
                           const Eigen::VectorXd& omega, int window, double tol = 1e-10);

// Closed-form route through the localization:
//   |det D|^{j-1} |Ld(u)|^2 / sum_k |bspline(u + scale-j shifts)|^2.
double coset_energy_localized(const OperatorSpec& op, const LocalizationSpec& loc,
                              const DilationMatrix& d, int j, int m, const Eigen::VectorXd& omega,
                              double tol = 1e-10);

enum class GramianRoute { FactorH0, DirectPhase };

// Eigenvalue fields of the (|det D|-1) x (|det D|-1) wavelet Gramian
// assembled from the coset energies, either through the unitary coset-DFT
// factorization (FactorH0) or by direct assembly of the phase sums.
struct GramianExtremes {
    std::vector<double> lambda;  // smallest eigenvalue per grid point
    std::vector<double> lambda_max;
    double min_lambda = 0.0;
    double max_lambda_max = 0.0;
};

GramianExtremes gramian_extremes(const CosetEnergies& ce, const DilationMatrix& d,
                                 GramianRoute route = GramianRoute::FactorH0);

// Riesz-basis certification of the scale-(j+1) wavelet family.
struct RieszReport {
    int scale_j = 0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    bool zero_overlap = false;
    std::vector<double> coset_zero_distances; // per coset m >= 1; +inf for empty zero sets
    double normalization = 1.0;               // |det D|^{(r/d - 1/2) j}
    bool scale_supported = true;
    bool pass = false;
};

RieszReport riesz_basis_test(const OperatorSpec& op, const DilationMatrix& d, int j,
                             int grid_n = 256, double tol = 1e-10);

// Normalized orthogonality residual
//   max_k |<phi_{j+1}, psi_{j+1}(. - D^j k)>| / (||phi_{j+1}|| ||psi_{j+1}||)
// over the supplied translations, evaluated by spectral quadrature over a
// band of band_octaves extra octaves with the out-of-band remainder folded in
// exactly through the periodization identity.
double orthogonality_residual(const OperatorSpec& op, const DilationMatrix& d, int j,
                              const std::vector<IntVector>& shifts, int grid_n = 256,
                              int band_octaves = 2, double tol = 1e-10);

// |det D|^{(r/d - 1/2) j}
double wavelet_normalization(double r, int dim, const DilationMatrix& d, int j);

// Zero-overlap test data: for each coset m >= 1, the minimal distance
// between the periodized zero set and its coset-shifted copy (exact for the
// point/sphere descriptors).
std::vector<double> zero_set_separations(const OperatorSpec& op, const DilationMatrix& d, int j);

} // namespace opwave
