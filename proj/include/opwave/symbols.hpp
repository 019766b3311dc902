#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "opwave/lattice.hpp"

namespace opwave {

using Complex = std::complex<double>;

enum class SymbolKind { Matern, Laplacian, Helmholtz, ExpDerivative, Tabulated };

// Zero set of a symbol, described analytically. The catalog only produces the
// first three shapes; Points with several entries exists for synthetic test
// symbols.
struct ZeroSetDescriptor {
    enum class Shape { Empty, Points, Sphere };
    Shape shape = Shape::Empty;
    std::vector<Eigen::VectorXd> points;
    double radius = 0.0;

    static ZeroSetDescriptor empty() { return {}; }
    static ZeroSetDescriptor origin(int dim);
    static ZeroSetDescriptor sphere(double radius);
};

// An evaluable Fourier-multiplier symbol with its certification metadata.
//
// Every catalog symbol has squared modulus of the radial form
//   |L(w)|^2 = (shift + |w|^2)^g,
// which the periodization engine exploits for exact tail summation.
class OperatorSpec {
public:
    static OperatorSpec matern(double nu, int dim);
    static OperatorSpec laplacian(int m, int dim);
    static OperatorSpec helmholtz();                  // d = 2
    static OperatorSpec exp_derivative(double alpha); // d = 1

    // Pointwise n-th power: order and modulus exponents scale by n, the zero
    // set is unchanged.
    OperatorSpec power(int n) const;

    // Uncertified symbol from samples on a centered box (single dimension
    // per axis resolution), with caller-declared order and zero set.
    static OperatorSpec tabulated(std::vector<double> modulus_samples, int samples_per_dim,
                                  double half_extent, int dim, double order,
                                  ZeroSetDescriptor zeros);

    SymbolKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double order() const { return order_; }
    int power_exponent() const { return power_; }
    const ZeroSetDescriptor& zero_set() const { return zeros_; }
    bool growth_two_sided() const { return growth_two_sided_; }
    bool certified() const { return kind_ != SymbolKind::Tabulated; }

    // Coarsest scale at which localization operators exist for this symbol;
    // empty means every scale.
    std::optional<int> max_certified_scale() const { return max_certified_scale_; }

    // Radial squared-modulus family parameters (|L|^2 = (shift+|w|^2)^exponent).
    bool has_radial_modulus() const { return radial_modulus_; }
    double modulus_shift() const { return mod_shift_; }
    double modulus_exponent() const { return mod_exponent_; }

    Complex evaluate(const Eigen::VectorXd& omega) const;
    std::vector<Complex> evaluate(const std::vector<Eigen::VectorXd>& pts) const;
    double modulus_squared(double omega_norm_sq) const;

    double param() const { return p1_; }
    std::string id() const;

private:
    OperatorSpec() = default;

    SymbolKind kind_ = SymbolKind::Matern;
    int dim_ = 1;
    double p1_ = 0.0; // nu | m | alpha
    int power_ = 1;
    double order_ = 0.0;
    ZeroSetDescriptor zeros_;
    bool growth_two_sided_ = true;
    std::optional<int> max_certified_scale_;
    bool radial_modulus_ = true;
    double mod_shift_ = 0.0;
    double mod_exponent_ = 0.0;

    // tabulated payload
    std::vector<double> table_;
    int table_n_ = 0;
    double table_half_extent_ = 0.0;
};

// Factory keyed by catalog tag, used by the CLI. Parameter names: nu, m,
// alpha. Throws BadParameter outside the admissible ranges.
OperatorSpec make_operator(const std::string& kind, double param, int dim);

// Parses the CLI operator syntax: matern:nu=1.5 | laplacian:m=2 | helmholtz |
// expderiv:alpha=1.0 | pow:base=<spec>,n=3.
OperatorSpec parse_operator(const std::string& text, int dim);

struct OrderBoundReport {
    double c_estimate = 0.0;
    bool pass = false;
};

// Estimates the smallest C with C*(1 + |L(w)|^2) >= |w|^{2r} over several
// dyadic octaves; throws Diverging when the per-octave estimate keeps
// growing, which signals that r exceeds the symbol's true order.
OrderBoundReport order_bound_check(const OperatorSpec& op, double r, int octaves = 6,
                                   int samples_per_octave = 64);

// Real spatial samples on a periodic box.
struct SignalField {
    std::vector<double> samples; // row-major, n^d entries
    int n = 0;                   // samples per dimension
    int dim = 1;
    double extent = 0.0;         // box length per dimension

    std::size_t size() const { return samples.size(); }
    double spacing() const { return extent / n; }
    void validate() const;
};

// Quadrature approximation of ( integral |fhat|^2 (1 + |L|^2) )^{1/2} over
// the sampled band.
double sobolev_norm_spectrum(const std::vector<Complex>& fhat, const FrequencyGrid& grid,
                             const OperatorSpec& op);

} // namespace opwave
