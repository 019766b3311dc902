#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "opwave/symbols.hpp"

using namespace opwave;

namespace {

Eigen::VectorXd vec1(double x) {
    Eigen::VectorXd v(1);
    v(0) = x;
    return v;
}

Eigen::VectorXd vec2(double x, double y) {
    Eigen::VectorXd v(2);
    v << x, y;
    return v;
}

} // namespace

TEST_CASE("catalog closed forms") {
    auto matern = OperatorSpec::matern(1.0, 1);
    CHECK(matern.evaluate(vec1(0.0)).real() == doctest::Approx(1.0));
    CHECK(matern.order() == doctest::Approx(1.0));
    CHECK(matern.zero_set().shape == ZeroSetDescriptor::Shape::Empty);

    auto lap = OperatorSpec::laplacian(1, 2);
    CHECK(lap.order() == doctest::Approx(2.0));
    CHECK(lap.evaluate(vec2(M_PI, 0.0)).real() == doctest::Approx(M_PI * M_PI).epsilon(1e-12));
    CHECK(lap.zero_set().shape == ZeroSetDescriptor::Shape::Points);

    auto helm = OperatorSpec::helmholtz();
    CHECK(helm.order() == doctest::Approx(2.0));
    CHECK(std::abs(helm.evaluate(vec2(0.5, 0.0))) == doctest::Approx(0.0));
    CHECK(std::abs(helm.evaluate(vec2(0.3, 0.4))) == doctest::Approx(0.0)); // |w| = 0.5
    CHECK(helm.zero_set().shape == ZeroSetDescriptor::Shape::Sphere);
    CHECK(helm.zero_set().radius == doctest::Approx(0.5));
    CHECK(helm.max_certified_scale().value() == 0);

    auto ed = OperatorSpec::exp_derivative(1.0);
    Complex v = ed.evaluate(vec1(2.0));
    CHECK(v.real() == doctest::Approx(-1.0));
    CHECK(v.imag() == doctest::Approx(2.0));
}

TEST_CASE("parameter ranges are enforced") {
    CHECK_THROWS_WITH_AS(OperatorSpec::matern(0.4, 1), doctest::Contains("BadParameter"), Error);
    CHECK_THROWS_WITH_AS(OperatorSpec::matern(1.0, 2), doctest::Contains("BadParameter"), Error);
    CHECK_THROWS_WITH_AS(OperatorSpec::exp_derivative(-0.5), doctest::Contains("BadParameter"), Error);
    CHECK_THROWS_WITH_AS(make_operator("helmholtz", 0.0, 3), doctest::Contains("BadParameter"), Error);
    CHECK_THROWS_WITH_AS(make_operator("fractional", 1.0, 1), doctest::Contains("UnsupportedOperator"),
                         Error);
}

TEST_CASE("powers obey the exponent law") {
    auto base = OperatorSpec::matern(1.0, 1);
    auto squared = base.power(2);
    auto direct = OperatorSpec::matern(2.0, 1);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (int i = 0; i < 200; ++i) {
        const double w = U(rng);
        const Complex a = squared.evaluate(vec1(w));
        const Complex b = base.evaluate(vec1(w));
        const Complex c = direct.evaluate(vec1(w));
        CHECK(std::abs(a - b * b) <= 1e-13 * std::abs(a));
        CHECK(std::abs(a - c) <= 1e-13 * std::abs(a));
    }
    CHECK(squared.order() == doctest::Approx(2.0));
    CHECK(base.power(1).order() == doctest::Approx(1.0));

    auto helm3 = OperatorSpec::helmholtz().power(3);
    CHECK(std::abs(helm3.evaluate(vec2(0.5, 0.0))) == doctest::Approx(0.0));
    CHECK(helm3.zero_set().shape == ZeroSetDescriptor::Shape::Sphere);
}

TEST_CASE("catalog moduli are radial") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-5.0, 5.0);
    auto lap = OperatorSpec::laplacian(1, 2);
    auto mat = OperatorSpec::matern(1.5, 2);
    for (int i = 0; i < 100; ++i) {
        Eigen::VectorXd w = vec2(U(rng), U(rng));
        const double ang = U(rng);
        Eigen::MatrixXd rot(2, 2);
        rot << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
        Eigen::VectorXd wr = rot * w;
        for (const auto& op : {lap, mat}) {
            const double a = std::abs(op.evaluate(w));
            const double b = std::abs(op.evaluate(wr));
            CHECK(std::abs(a - b) <= 1e-13 * (1.0 + a));
        }
    }
}

TEST_CASE("modulus_squared matches the evaluator") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.0, 30.0);
    for (const auto& op : {OperatorSpec::matern(1.0, 1), OperatorSpec::exp_derivative(0.7),
                           OperatorSpec::helmholtz().power(2)}) {
        for (int i = 0; i < 100; ++i) {
            const double r = U(rng);
            Eigen::VectorXd w = op.dim() == 1 ? vec1(r) : vec2(r, 0.0);
            const double direct = std::norm(op.evaluate(w));
            const double family = op.modulus_squared(r * r);
            CHECK(family == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("order bound check") {
    auto matern = OperatorSpec::matern(1.0, 1);
    auto rep = order_bound_check(matern, 1.0);
    CHECK(rep.pass);
    CHECK(rep.c_estimate <= 1.0);

    auto lap = OperatorSpec::laplacian(1, 2);
    auto rep2 = order_bound_check(lap, 2.0);
    CHECK(rep2.pass);
    CHECK(rep2.c_estimate <= 1.0);

    CHECK_THROWS_WITH_AS(order_bound_check(matern, 2.0), doctest::Contains("Diverging"), Error);
}

TEST_CASE("order bound estimate is monotone in r") {
    auto matern = OperatorSpec::matern(2.0, 1);
    const double c_low = order_bound_check(matern, 1.0).c_estimate;
    const double c_mid = order_bound_check(matern, 1.5).c_estimate;
    const double c_high = order_bound_check(matern, 2.0).c_estimate;
    CHECK(c_low <= c_mid);
    CHECK(c_mid <= c_high);
}

TEST_CASE("two-sided growth certificates") {
    // |L(w)| / |w|^r stays within fixed bounds for |w| >= 8
    for (const auto& op : {OperatorSpec::matern(1.0, 1), OperatorSpec::laplacian(1, 2),
                           OperatorSpec::helmholtz()}) {
        CHECK(op.growth_two_sided());
        double lo = 1e300, hi = 0.0;
        for (double w = 8.0; w <= 64.0; w *= 1.1) {
            Eigen::VectorXd p = op.dim() == 1 ? vec1(w) : vec2(w, 0.0);
            const double ratio = std::abs(op.evaluate(p)) / std::pow(w, op.order());
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        CHECK(lo > 0.5);
        CHECK(hi < 2.0);
    }
}

TEST_CASE("sobolev norm of a Gaussian spectrum") {
    auto d = DilationMatrix::named("2I", 1);
    auto op = OperatorSpec::matern(1.0, 1);
    // need a wide band: scale -3 covers [-8 pi, 8 pi)
    FrequencyGrid g(d, -3, 4096);
    std::vector<Complex> fhat(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double w = g.point(i)(0);
        fhat[i] = std::exp(-0.5 * w * w);
    }
    // integral of e^{-w^2}(2 + w^2) = 2.5 sqrt(pi)
    CHECK(sobolev_norm_spectrum(fhat, g, op) ==
          doctest::Approx(std::sqrt(2.5 * std::sqrt(M_PI))).epsilon(1e-6));

    SUBCASE("zero spectrum") {
        std::fill(fhat.begin(), fhat.end(), Complex(0.0));
        CHECK(sobolev_norm_spectrum(fhat, g, op) == doctest::Approx(0.0));
    }
    SUBCASE("homogeneity") {
        std::vector<Complex> twice(fhat);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double w = g.point(i)(0);
            fhat[i] = std::exp(-0.5 * w * w);
            twice[i] = 2.0 * fhat[i];
        }
        CHECK(sobolev_norm_spectrum(twice, g, op) ==
              doctest::Approx(2.0 * sobolev_norm_spectrum(fhat, g, op)).epsilon(1e-13));
    }
}

TEST_CASE("operator ids round-trip through the parser") {
    for (const char* text : {"matern:nu=1.5", "laplacian:m=2", "helmholtz", "expderiv:alpha=0.5",
                             "pow:base=matern:nu=1,n=3"}) {
        const int dim = std::string(text).find("helmholtz") != std::string::npos ? 2 : 1;
        const int use_dim = std::string(text).find("laplacian") != std::string::npos ? 2 : dim;
        auto op = parse_operator(text, use_dim);
        auto again = parse_operator(text, use_dim);
        CHECK(op.id() == again.id());
    }
    CHECK(parse_operator("pow:base=matern:nu=1,n=3", 1).order() == doctest::Approx(3.0));
}

TEST_CASE("tabulated symbols are marked uncertified") {
    std::vector<double> samples(128);
    for (int i = 0; i < 128; ++i) {
        const double w = -16.0 + 32.0 * (i + 0.5) / 128.0;
        samples[i] = 1.0 + w * w;
    }
    auto op = OperatorSpec::tabulated(samples, 128, 16.0, 1, 2.0, ZeroSetDescriptor::empty());
    CHECK(!op.certified());
    CHECK(std::abs(op.evaluate(vec1(2.0))) == doctest::Approx(5.0).epsilon(1e-2));
}
