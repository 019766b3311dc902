#include "opwave/symbols.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace opwave {

namespace {

std::string format_param(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

} // namespace

ZeroSetDescriptor ZeroSetDescriptor::origin(int dim) {
    ZeroSetDescriptor z;
    z.shape = Shape::Points;
    z.points.push_back(Eigen::VectorXd::Zero(dim));
    return z;
}

ZeroSetDescriptor ZeroSetDescriptor::sphere(double radius) {
    ZeroSetDescriptor z;
    z.shape = Shape::Sphere;
    z.radius = radius;
    return z;
}

OperatorSpec OperatorSpec::matern(double nu, int dim) {
    if (!(nu > dim / 2.0)) {
        raise(ErrorCode::BadParameter,
              "matern requires nu > d/2, got nu=" + format_param(nu) + ", d=" + std::to_string(dim));
    }
    OperatorSpec op;
    op.kind_ = SymbolKind::Matern;
    op.dim_ = dim;
    op.p1_ = nu;
    op.order_ = nu;
    op.zeros_ = ZeroSetDescriptor::empty();
    op.mod_shift_ = 1.0;
    op.mod_exponent_ = nu;
    return op;
}

OperatorSpec OperatorSpec::laplacian(int m, int dim) {
    if (!(m > dim / 4.0) || m < 1) {
        raise(ErrorCode::BadParameter,
              "laplacian requires integer m > d/4, got m=" + std::to_string(m) + ", d=" + std::to_string(dim));
    }
    OperatorSpec op;
    op.kind_ = SymbolKind::Laplacian;
    op.dim_ = dim;
    op.p1_ = m;
    op.order_ = 2.0 * m;
    op.zeros_ = ZeroSetDescriptor::origin(dim);
    op.mod_shift_ = 0.0;
    op.mod_exponent_ = 2.0 * m;
    return op;
}

OperatorSpec OperatorSpec::helmholtz() {
    OperatorSpec op;
    op.kind_ = SymbolKind::Helmholtz;
    op.dim_ = 2;
    op.order_ = 2.0;
    // The symbol 1/4 - |w|^2 vanishes where |w| = 1/2 (the computed root; see
    // the operator notes in the README).
    op.zeros_ = ZeroSetDescriptor::sphere(0.5);
    op.mod_shift_ = -0.25;
    op.mod_exponent_ = 2.0;
    op.max_certified_scale_ = 0;
    return op;
}

OperatorSpec OperatorSpec::exp_derivative(double alpha) {
    if (!(alpha > 0.0)) {
        raise(ErrorCode::BadParameter, "expderiv requires alpha > 0, got " + format_param(alpha));
    }
    OperatorSpec op;
    op.kind_ = SymbolKind::ExpDerivative;
    op.dim_ = 1;
    op.p1_ = alpha;
    op.order_ = 1.0;
    op.zeros_ = ZeroSetDescriptor::empty();
    op.mod_shift_ = alpha * alpha;
    op.mod_exponent_ = 1.0;
    return op;
}

OperatorSpec OperatorSpec::power(int n) const {
    if (n < 1) raise(ErrorCode::BadParameter, "power exponent must be >= 1");
    OperatorSpec op = *this;
    op.power_ = power_ * n;
    op.order_ = order_ * n;
    op.mod_exponent_ = mod_exponent_ * n;
    return op;
}

OperatorSpec OperatorSpec::tabulated(std::vector<double> modulus_samples, int samples_per_dim,
                                     double half_extent, int dim, double order,
                                     ZeroSetDescriptor zeros) {
    if (dim != 1) raise(ErrorCode::BadParameter, "tabulated symbols are limited to d=1");
    if (static_cast<int>(modulus_samples.size()) != samples_per_dim) {
        raise(ErrorCode::BadParameter, "tabulated sample count mismatch");
    }
    if (!(order > dim / 2.0)) raise(ErrorCode::BadParameter, "tabulated order must exceed d/2");
    OperatorSpec op;
    op.kind_ = SymbolKind::Tabulated;
    op.dim_ = dim;
    op.order_ = order;
    op.zeros_ = std::move(zeros);
    op.radial_modulus_ = false;
    op.growth_two_sided_ = false;
    op.table_ = std::move(modulus_samples);
    op.table_n_ = samples_per_dim;
    op.table_half_extent_ = half_extent;
    return op;
}

Complex OperatorSpec::evaluate(const Eigen::VectorXd& omega) const {
    const double w2 = omega.squaredNorm();
    switch (kind_) {
        case SymbolKind::Matern:
            return std::pow(1.0 + w2, 0.5 * p1_ * power_);
        case SymbolKind::Laplacian:
            return std::pow(w2, p1_ * power_);
        case SymbolKind::Helmholtz: {
            double base = 0.25 - w2;
            double v = 1.0;
            for (int i = 0; i < power_; ++i) v *= base;
            return v;
        }
        case SymbolKind::ExpDerivative: {
            Complex base(-p1_, omega(0));
            Complex v = 1.0;
            for (int i = 0; i < power_; ++i) v *= base;
            return v;
        }
        case SymbolKind::Tabulated: {
            const double x = omega(0);
            const double h = 2.0 * table_half_extent_ / table_n_;
            double pos = (x + table_half_extent_) / h - 0.5;
            if (pos <= 0.0) return table_.front();
            if (pos >= table_n_ - 1.0) return table_.back();
            const int i0 = static_cast<int>(pos);
            const double fr = pos - i0;
            return (1.0 - fr) * table_[i0] + fr * table_[i0 + 1];
        }
    }
    raise(ErrorCode::InternalError, "unreachable symbol kind");
}

std::vector<Complex> OperatorSpec::evaluate(const std::vector<Eigen::VectorXd>& pts) const {
    std::vector<Complex> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) out[i] = evaluate(pts[i]);
    return out;
}

double OperatorSpec::modulus_squared(double w2) const {
    if (!radial_modulus_) {
        Eigen::VectorXd omega(1);
        omega(0) = std::sqrt(w2);
        return std::norm(evaluate(omega));
    }
    const double base = mod_shift_ + w2;
    if (mod_shift_ < 0.0) {
        // integer exponent family with sign-changing base
        double v = 1.0;
        const int e = static_cast<int>(std::lround(mod_exponent_));
        for (int i = 0; i < e; ++i) v *= base;
        return v;
    }
    return std::pow(base, mod_exponent_);
}

std::string OperatorSpec::id() const {
    std::ostringstream os;
    std::string base;
    switch (kind_) {
        case SymbolKind::Matern: base = "matern:nu=" + format_param(p1_); break;
        case SymbolKind::Laplacian: base = "laplacian:m=" + format_param(p1_); break;
        case SymbolKind::Helmholtz: base = "helmholtz"; break;
        case SymbolKind::ExpDerivative: base = "expderiv:alpha=" + format_param(p1_); break;
        case SymbolKind::Tabulated: base = "tabulated"; break;
    }
    if (power_ == 1) return base + "@d" + std::to_string(dim_);
    os << "pow:base=" << base << ",n=" << power_ << "@d" << dim_;
    return os.str();
}

OperatorSpec make_operator(const std::string& kind, double param, int dim) {
    if (kind == "matern") return OperatorSpec::matern(param, dim);
    if (kind == "laplacian") {
        const int m = static_cast<int>(std::lround(param));
        if (std::abs(param - m) > 1e-12) {
            raise(ErrorCode::BadParameter, "laplacian exponent m must be an integer");
        }
        return OperatorSpec::laplacian(m, dim);
    }
    if (kind == "helmholtz") {
        if (dim != 2) raise(ErrorCode::BadParameter, "helmholtz is defined for d=2");
        return OperatorSpec::helmholtz();
    }
    if (kind == "expderiv") {
        if (dim != 1) raise(ErrorCode::BadParameter, "expderiv is defined for d=1");
        return OperatorSpec::exp_derivative(param);
    }
    raise(ErrorCode::UnsupportedOperator, "unknown operator kind '" + kind + "'");
}

OperatorSpec parse_operator(const std::string& text, int dim) {
    if (text.rfind("pow:", 0) == 0) {
        const std::string body = text.substr(4);
        const auto base_pos = body.find("base=");
        const auto n_pos = body.rfind(",n=");
        if (base_pos != 0 || n_pos == std::string::npos) {
            raise(ErrorCode::Usage, "power syntax is pow:base=<spec>,n=<int>");
        }
        const std::string base = body.substr(5, n_pos - 5);
        const int n = std::stoi(body.substr(n_pos + 3));
        return parse_operator(base, dim).power(n);
    }
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    double param = 0.0;
    if (colon != std::string::npos) {
        const std::string kv = text.substr(colon + 1);
        const auto eq = kv.find('=');
        if (eq == std::string::npos) raise(ErrorCode::Usage, "operator parameter syntax is name=value");
        param = std::stod(kv.substr(eq + 1));
    }
    return make_operator(kind, param, dim);
}

OrderBoundReport order_bound_check(const OperatorSpec& op, double r, int octaves,
                                   int samples_per_octave) {
    std::vector<double> octave_max(octaves, 0.0);
    Eigen::VectorXd omega = Eigen::VectorXd::Zero(op.dim());
    for (int oct = 0; oct < octaves; ++oct) {
        const double lo = std::pow(2.0, oct);
        const double hi = 2.0 * lo;
        double worst = 0.0;
        for (int i = 0; i < samples_per_octave; ++i) {
            const double w = lo + (hi - lo) * (i + 0.5) / samples_per_octave;
            omega.setZero();
            omega(0) = w;
            const double num = std::pow(w, 2.0 * r);
            const double den = 1.0 + std::norm(op.evaluate(omega));
            worst = std::max(worst, num / den);
        }
        octave_max[oct] = worst;
    }
    const double tail_ratio = octave_max[octaves - 1] / octave_max[octaves - 2];
    if (tail_ratio > 1.5) {
        raise(ErrorCode::Diverging, "order bound estimate grows by factor " + format_param(tail_ratio) +
                                        " per octave; r=" + format_param(r) + " exceeds the symbol order");
    }
    OrderBoundReport rep;
    rep.c_estimate = *std::max_element(octave_max.begin(), octave_max.end());
    rep.pass = tail_ratio <= 1.05;
    return rep;
}

void SignalField::validate() const {
    if (!(extent > 0.0)) raise(ErrorCode::BadParameter, "signal extent must be positive");
    std::size_t want = 1;
    for (int i = 0; i < dim; ++i) want *= static_cast<std::size_t>(n);
    if (want != samples.size()) {
        raise(ErrorCode::BadParameter, "signal sample count does not match shape");
    }
}

double sobolev_norm_spectrum(const std::vector<Complex>& fhat, const FrequencyGrid& grid,
                             const OperatorSpec& op) {
    if (fhat.size() != grid.size()) {
        raise(ErrorCode::BadParameter, "spectrum length does not match grid");
    }
    const double cell = grid.cell_volume();
    double acc = 0.0;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const Eigen::VectorXd w = grid.point(i);
        acc += std::norm(fhat[i]) * (1.0 + op.modulus_squared(w.squaredNorm())) * cell;
    }
    return std::sqrt(acc);
}

} // namespace opwave
