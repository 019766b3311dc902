#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opwave/wavelets.hpp"

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

IntVector ivec1(std::int64_t k) {
    IntVector v(1);
    v(0) = k;
    return v;
}

IntVector ivec2(std::int64_t a, std::int64_t b) {
    IntVector v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("wavelet spectrum values") {
    auto d = DilationMatrix::named("2I", 1);
    auto op = OperatorSpec::matern(1.0, 1);
    InversePowerPeriodization sums(op, d, 0, 1);

    SUBCASE("matern value at the origin") {
        CHECK(wavelet_spectrum_at(sums, op, 1.0, vec1(0.0)).real() ==
              doctest::Approx(0.92424).epsilon(1e-4));
    }
    SUBCASE("laplacian wavelet annihilates constants") {
        auto d2 = DilationMatrix::named("2I", 2);
        auto op2 = OperatorSpec::laplacian(1, 2);
        InversePowerPeriodization s2(op2, d2, 0, 1);
        CHECK(std::abs(wavelet_spectrum_at(s2, op2, 1.0, vec2(0.0, 0.0))) == 0.0);
        CHECK(std::abs(wavelet_spectrum_at(s2, op2, 1.0, vec2(1e-4, 0.0))) < 1e-7);
    }
}

TEST_CASE("two formulas for the wavelet coincide") {
    struct Case {
        OperatorSpec op;
        DilationMatrix d;
    };
    std::vector<Case> cases = {
        {OperatorSpec::matern(1.0, 1), DilationMatrix::named("2I", 1)},
        {OperatorSpec::exp_derivative(1.0), DilationMatrix::named("2I", 1)},
        {OperatorSpec::laplacian(1, 2), DilationMatrix::named("2I", 2)},
        {OperatorSpec::helmholtz(), DilationMatrix::named("2I", 2)},
        {OperatorSpec::matern(1.5, 2), DilationMatrix::named("quincunx")},
    };
    for (const auto& c : cases) {
        for (int j : {-1, 0}) {
            FrequencyGrid g(c.d, j, c.d.dim() == 1 ? 64 : 16);
            auto a = wavelet_spectrum(c.op, c.d, j, g);
            auto b = wavelet_spectrum_inverse_form(c.op, c.d, j, g);
            for (std::size_t i = 0; i < g.size(); ++i) {
                CHECK(std::abs(a.values[i] - b.values[i]) <= 1e-12 * (std::abs(a.values[i]) + 1e-30));
            }
        }
    }
}

TEST_CASE("expderiv wavelet uses the adjoint symbol") {
    auto d = DilationMatrix::named("2I", 1);
    auto op = OperatorSpec::exp_derivative(1.0);
    InversePowerPeriodization sums(op, d, 0, 1);
    const Eigen::VectorXd w = vec1(0.9);
    const Complex psi = wavelet_spectrum_at(sums, op, 1.0, w);
    const Complex ratio = psi / std::conj(op.evaluate(w));
    CHECK(std::abs(ratio.imag()) < 1e-14); // interpolant factor is real
    CHECK(ratio.real() > 0.0);
}

TEST_CASE("coset energies: two cosets in one dimension") {
    auto d = DilationMatrix::named("2I", 1);
    auto op = OperatorSpec::matern(1.0, 1);
    auto ce = coset_energies(op, d, 0, 64);
    REQUIRE(ce.c.size() == 2);
    for (int m = 0; m < 2; ++m) {
        for (double v : ce.c[m]) CHECK(v > 0.0);
    }
}

TEST_CASE("coset energy routes agree") {
    auto check_routes = [](const OperatorSpec& op, const DilationMatrix& d, int j,
                           const Eigen::VectorXd& w) {
        auto loc = make_localization(op, d, j);
        for (int m = 0; m < d.det_abs(); ++m) {
            const double prod = coset_energy_at(op, d, j, m, w);
            const double direct = coset_energy_direct(op, d, j, m, w, 24);
            const double closed = coset_energy_localized(op, loc, d, j, m, w);
            CHECK(direct == doctest::Approx(prod).epsilon(1e-8));
            CHECK(closed == doctest::Approx(prod).epsilon(1e-10));
        }
    };
    check_routes(OperatorSpec::matern(1.0, 1), DilationMatrix::named("2I", 1), 0, vec1(0.37));
    check_routes(OperatorSpec::laplacian(1, 2), DilationMatrix::named("2I", 2), -1,
                 vec2(0.21, -0.4));
}

TEST_CASE("coset energies are periodic over the fine dual lattice") {
    auto d = DilationMatrix::named("2I", 1);
    auto op = OperatorSpec::matern(1.0, 1);
    const Eigen::VectorXd shift = d.dual_basis(1) * ivec1(1).cast<double>();
    for (double w : {0.2, 0.9}) {
        const double a = coset_energy_at(op, d, 0, 1, vec1(w));
        const double b = coset_energy_at(op, d, 0, 1, Eigen::VectorXd(vec1(w) + shift));
        CHECK(a == doctest::Approx(b).epsilon(1e-10));
    }
}

TEST_CASE("scalar Gramian identity for |det D| = 2") {
    auto d = DilationMatrix::named("2I", 1);
    auto op = OperatorSpec::matern(1.0, 1);
    auto ce = coset_energies(op, d, 0, 64);
    auto ge = gramian_extremes(ce, d);
    for (std::size_t i = 0; i < ce.grid.size(); ++i) {
        const double want = ce.c[0][i] + ce.c[1][i];
        CHECK(ge.lambda[i] == doctest::Approx(want).epsilon(1e-12));
        CHECK(ge.lambda_max[i] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("Gramian assembly routes and the eigenvalue sandwich") {
    for (const char* name : {"2I", "quincunx"}) {
        auto d = DilationMatrix::named(name, 2);
        auto op = OperatorSpec::matern(1.5, 2);
        auto ce = coset_energies(op, d, 0, 16);
        auto a = gramian_extremes(ce, d, GramianRoute::FactorH0);
        auto b = gramian_extremes(ce, d, GramianRoute::DirectPhase);
        const int mc = static_cast<int>(d.det_abs());
        for (std::size_t i = 0; i < ce.grid.size(); ++i) {
            CHECK(a.lambda[i] == doctest::Approx(b.lambda[i]).epsilon(1e-10));
            CHECK(a.lambda_max[i] == doctest::Approx(b.lambda_max[i]).epsilon(1e-10));
            double cmin = 1e300, cmax = 0.0;
            for (int m = 0; m < mc; ++m) {
                cmin = std::min(cmin, ce.c[m][i]);
                cmax = std::max(cmax, ce.c[m][i]);
            }
            CHECK(a.lambda[i] >= mc * cmin - 1e-10 * cmax);
            CHECK(a.lambda_max[i] <= mc * cmax + 1e-10 * cmax);
        }
    }
}

TEST_CASE("two vanishing coset energies collapse the smallest eigenvalue") {
    auto d = DilationMatrix::named("2I", 2);
    FrequencyGrid g(d, 1, 8);
    std::vector<std::vector<double>> c(4, std::vector<double>(g.size(), 0.5));
    c[1][3] = 0.0;
    c[2][3] = 0.0; // two energies vanish at the same frequency
    CosetEnergies ce(std::move(c), g, 0);
    auto ge = gramian_extremes(ce, d);
    CHECK(ge.lambda[3] < 1e-12);
    CHECK(ge.lambda[4] > 0.1);
}

TEST_CASE("zero set separations and overlap") {
    SUBCASE("empty zero set never overlaps") {
        auto d = DilationMatrix::named("2I", 1);
        auto op = OperatorSpec::matern(1.0, 1);
        auto seps = zero_set_separations(op, d, 0);
        REQUIRE(seps.size() == 1);
        CHECK(std::isinf(seps[0]));
    }
    SUBCASE("origin-only zero sets stay separated at every scale") {
        auto d = DilationMatrix::named("2I", 2);
        auto op = OperatorSpec::laplacian(1, 2);
        for (int j : {-3, 0, 2}) {
            for (double s : zero_set_separations(op, d, j)) CHECK(s > 1e-9);
        }
    }
    SUBCASE("helmholtz circles overlap only at very coarse scales") {
        auto d = DilationMatrix::named("2I", 2);
        auto op = OperatorSpec::helmholtz();
        for (int j : {-2, -1, 0}) {
            for (double s : zero_set_separations(op, d, j)) CHECK(s > 1e-9);
        }
        auto coarse = zero_set_separations(op, d, 2);
        CHECK(*std::min_element(coarse.begin(), coarse.end()) <= 1e-9);
    }
    SUBCASE("synthetic double zero periodizing onto a coset overlaps") {
        auto d = DilationMatrix::named("2I", 1);
        ZeroSetDescriptor z;
        z.shape = ZeroSetDescriptor::Shape::Points;
        z.points.push_back(vec1(0.0));
        z.points.push_back(vec1(M_PI)); // = dual_basis(1) * e_1 at j = 0
        std::vector<double> table(64, 1.0);
        auto op = OperatorSpec::tabulated(table, 64, 8.0, 1, 0.6, z);
        auto seps = zero_set_separations(op, d, 0);
        CHECK(seps[0] <= 1e-9);
    }
}

TEST_CASE("riesz basis certification") {
    SUBCASE("matern passes at every scale") {
        auto d = DilationMatrix::named("2I", 1);
        auto op = OperatorSpec::matern(1.0, 1);
        for (int j : {-2, 0, 1}) {
            auto rep = riesz_basis_test(op, d, j, 64);
            CHECK(rep.pass);
            CHECK(rep.lambda_min > 0.0);
            CHECK(!rep.zero_overlap);
        }
    }
    SUBCASE("helmholtz passes at fine scales and is rejected at j = +1") {
        auto d = DilationMatrix::named("2I", 2);
        auto op = OperatorSpec::helmholtz();
        auto fine = riesz_basis_test(op, d, 0, 32);
        CHECK(fine.pass);
        CHECK(fine.scale_supported);
        auto probe = riesz_basis_test(op, d, 1, 32);
        CHECK(!probe.pass);
        CHECK(!probe.scale_supported);
    }
}

TEST_CASE("wavelet normalization exponents") {
    auto d1 = DilationMatrix::named("2I", 1);
    CHECK(wavelet_normalization(1.0, 1, d1, -3) == doctest::Approx(std::pow(2.0, -1.5)));
    CHECK(wavelet_normalization(1.0, 1, d1, 0) == doctest::Approx(1.0));
    auto q = DilationMatrix::named("quincunx");
    CHECK(wavelet_normalization(1.5, 2, q, -2) == doctest::Approx(std::pow(2.0, -0.5)));
}

TEST_CASE("orthogonality of wavelets to the coarser spline space") {
    SUBCASE("matern") {
        auto d = DilationMatrix::named("2I", 1);
        auto op = OperatorSpec::matern(1.0, 1);
        CHECK(orthogonality_residual(op, d, 0, {ivec1(1)}, 256) < 1e-8);
        CHECK(orthogonality_residual(op, d, -1, {ivec1(1), ivec1(3)}, 256) < 1e-8);
    }
    SUBCASE("exponential spline") {
        auto d = DilationMatrix::named("2I", 1);
        auto op = OperatorSpec::exp_derivative(1.0);
        CHECK(orthogonality_residual(op, d, -1, {ivec1(1), ivec1(3)}, 256) < 1e-8);
    }
    SUBCASE("laplacian on the plane") {
        auto d = DilationMatrix::named("2I", 2);
        auto op = OperatorSpec::laplacian(1, 2);
        CHECK(orthogonality_residual(op, d, 0, {ivec2(1, 0), ivec2(0, 1), ivec2(1, 1)}, 64) < 1e-8);
    }
    SUBCASE("helmholtz blend") {
        auto d = DilationMatrix::named("2I", 2);
        auto op = OperatorSpec::helmholtz();
        CHECK(orthogonality_residual(op, d, -1, {ivec2(1, 0), ivec2(1, 1)}, 64) < 1e-8);
    }
    SUBCASE("shifts inside D Z^d are not orthogonal") {
        auto d = DilationMatrix::named("2I", 1);
        auto op = OperatorSpec::matern(1.0, 1);
        CHECK(orthogonality_residual(op, d, 0, {ivec1(2)}, 256) > 1e-4);
    }
}
