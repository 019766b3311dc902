#pragma once

#include <complex>
#include <vector>

#include "opwave/lattice.hpp"
#include "opwave/symbols.hpp"

namespace opwave {

enum class LocalizationKind { Identity, Exponential, DiscreteLaplacian, RadialBlend };

// Periodic symbol that cancels the zeros of 1/L at one scale, so that the
// quotient localization/L is bounded and bounded away from zero on the
// fundamental domain. Periodic with respect to the scale-j dual lattice.
class LocalizationSpec {
public:
    LocalizationKind kind() const { return kind_; }
    int scale() const { return j_; }
    double blend_width() const { return epsilon_; }

    Complex evaluate(const Eigen::VectorXd& omega) const;

    friend LocalizationSpec make_localization(const OperatorSpec& op, const DilationMatrix& d,
                                              int j, double epsilon);

private:
    LocalizationKind kind_ = LocalizationKind::Identity;
    int j_ = 0;
    double alpha_ = 0.0;   // exponential
    double a_scale_ = 2.0; // lattice scale a^j for the exponential form
    int m_ = 1;            // discrete Laplacian power
    double epsilon_ = 0.0625;
    double radius_ = 0.5;
    double prefactor_ = 1.0;
    int dim_ = 1;
    OperatorSpec op_ = OperatorSpec::matern(1.0, 1);
    DilationMatrix dil_ = DilationMatrix::named("2I", 1);
};

// Dispatches on the operator kind. epsilon only applies to the radial blend;
// pass 0 to use the default width 1/16.
LocalizationSpec make_localization(const OperatorSpec& op, const DilationMatrix& d, int j,
                                   double epsilon = 0.0);

// Max over sampled omega and first-shell dual lattice shifts beta of
// |Ld(omega + beta) - Ld(omega)|.
double periodicity_residual(const LocalizationSpec& loc, const DilationMatrix& d, int j, int n);

struct QuotientReport {
    double max_quotient = 0.0;
    double min_quotient_near_zeros = 0.0;
    bool pass = false;
};

// Certifies that localization/L is bounded on the fundamental domain and
// bounded away from zero on shrinking annuli around the zero set. Throws
// ZeroMismatch when the quotient blows up toward a zero, i.e. the
// localization fails to cancel it.
QuotientReport quotient_boundedness(const OperatorSpec& op, const LocalizationSpec& loc,
                                    const DilationMatrix& d, int j, int n);

// Lattice-series coefficients p[k] with Ld(omega) = sum_k p[k] e^{i omega . D^j k},
// recovered by discrete Fourier analysis of the sampled evaluator and
// truncated at 1e-12 of the largest coefficient.
struct LatticeSeries {
    std::vector<IntVector> sites;
    std::vector<Complex> coeffs;
};

LatticeSeries localization_series(const LocalizationSpec& loc, const DilationMatrix& d, int j,
                                  int n = 32);

} // namespace opwave
