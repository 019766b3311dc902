#include "opwave/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opwave {

namespace {

constexpr double kOrthTol = 1e-12;
constexpr int kPeriodCap = 48;

std::int64_t int_det(const IntMatrix& m) {
    const int d = static_cast<int>(m.rows());
    if (d == 1) return m(0, 0);
    if (d == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    if (d == 3) {
        return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
             - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
             + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
    raise(ErrorCode::BadParameter, "dimension must be 1, 2, or 3");
}

// Adjugate: adj(M) * M = det(M) * I, exact in integers.
IntMatrix int_adjugate(const IntMatrix& m) {
    const int d = static_cast<int>(m.rows());
    IntMatrix adj(d, d);
    if (d == 1) {
        adj(0, 0) = 1;
    } else if (d == 2) {
        adj(0, 0) = m(1, 1);
        adj(0, 1) = -m(0, 1);
        adj(1, 0) = -m(1, 0);
        adj(1, 1) = m(0, 0);
    } else {
        // adj(k,i) = signed cofactor C_{ik}; cyclic indices carry the sign.
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < 3; ++k) {
                const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
                const int c0 = (k + 1) % 3, c1 = (k + 2) % 3;
                adj(k, i) = m(r0, c0) * m(r1, c1) - m(r0, c1) * m(r1, c0);
            }
        }
    }
    return adj;
}

std::string format_matrix(const IntMatrix& m) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < m.rows(); ++i) {
        os << "[";
        for (int k = 0; k < m.cols(); ++k) {
            os << m(i, k);
            if (k + 1 < m.cols()) os << ",";
        }
        os << "]";
        if (i + 1 < m.rows()) os << ",";
    }
    os << "]";
    return os.str();
}

} // namespace

DilationMatrix DilationMatrix::from_integer_matrix(const IntMatrix& m) {
    if (m.rows() != m.cols() || m.rows() < 1 || m.rows() > 3) {
        raise(ErrorCode::BadParameter, "dilation matrix must be square with dimension 1..3");
    }
    const int d = static_cast<int>(m.rows());

    // Structural check first: M^T M must be c*I with integer c (then a = sqrt(c)
    // and R = M/a is orthogonal). Exact in integer arithmetic.
    IntMatrix gram = m.transpose() * m;
    const std::int64_t c = gram(0, 0);
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k < d; ++k) {
            const std::int64_t want = (i == k) ? c : 0;
            if (gram(i, k) != want) {
                raise(ErrorCode::NotScaledOrthogonal,
                      "M^T M is not a^2*I for matrix " + format_matrix(m));
            }
        }
    }
    if (c <= 1) {
        raise(ErrorCode::NotExpansive,
              "all eigenvalues must exceed 1 in magnitude; got |lambda| = " +
                  std::to_string(std::sqrt(static_cast<double>(c))));
    }

    DilationMatrix out;
    out.entries_ = m;
    out.a_ = std::sqrt(static_cast<double>(c));
    out.rotation_ = m.cast<double>() / out.a_;

    Eigen::MatrixXd rtr = out.rotation_.transpose() * out.rotation_;
    if ((rtr - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() > kOrthTol) {
        raise(ErrorCode::NotScaledOrthogonal, "rotation factor failed orthogonality tolerance");
    }

    const std::int64_t det = int_det(m);
    out.det_abs_ = det < 0 ? -det : det;
    if (out.det_abs_ == 0) {
        raise(ErrorCode::NotExpansive, "matrix is singular");
    }

    // |det D| must equal a^d for D = a*R.
    std::int64_t cd = 1;
    for (int i = 0; i < d; ++i) cd *= c;
    if (out.det_abs_ * out.det_abs_ != cd) {
        raise(ErrorCode::NotScaledOrthogonal, "|det| inconsistent with scale factor");
    }

    // Coset representatives: integer points of D*[0,1)^d, i.e. points k with
    // adj(D)*k / det componentwise in [0,1). Exact integer tests.
    IntMatrix adj = int_adjugate(m);
    const std::int64_t bound = m.cwiseAbs().sum();
    std::vector<IntVector> reps;
    std::vector<std::int64_t> idx(d, -bound);
    while (true) {
        IntVector k(d);
        for (int i = 0; i < d; ++i) k(i) = idx[i];
        IntVector t = adj * k;
        bool inside = true;
        for (int i = 0; i < d; ++i) {
            if (det > 0) {
                if (t(i) < 0 || t(i) >= det) inside = false;
            } else {
                if (t(i) > 0 || t(i) <= det) inside = false;
            }
        }
        if (inside) reps.push_back(k);
        int pos = d - 1;
        while (pos >= 0) {
            if (++idx[pos] <= bound) break;
            idx[pos] = -bound;
            --pos;
        }
        if (pos < 0) break;
    }
    std::sort(reps.begin(), reps.end(), [d](const IntVector& x, const IntVector& y) {
        for (int i = 0; i < d; ++i) {
            if (x(i) != y(i)) return x(i) < y(i);
        }
        return false;
    });
    if (static_cast<std::int64_t>(reps.size()) != out.det_abs_) {
        raise(ErrorCode::InternalError, "coset enumeration found " + std::to_string(reps.size()) +
                                            " representatives, expected " + std::to_string(out.det_abs_));
    }
    if (!reps.empty() && reps.front().cwiseAbs().sum() != 0) {
        raise(ErrorCode::InternalError, "zero vector is not the first coset representative");
    }
    out.cosets_ = std::move(reps);

    // Verify D^T Z^d = D Z^d (holds for scaled-orthogonal matrices); the coset
    // list is shared between spatial and frequency constructs on this basis.
    for (int i = 0; i < d; ++i) {
        IntVector col = adj * m.transpose().col(i);
        for (int k = 0; k < d; ++k) {
            if (col(k) % det != 0) {
                raise(ErrorCode::InternalError, "lattice of D^T differs from lattice of D");
            }
        }
    }

    // Period exponent: smallest n with D^n = a^n I; a^n is then an integer t
    // with t^2 = c^n.
    {
        IntMatrix p = IntMatrix::Identity(d, d);
        std::int64_t cn = 1;
        bool found = false;
        for (int n = 1; n <= kPeriodCap; ++n) {
            if (cn > (std::int64_t{1} << 62) / c) break;
            p = p * m;
            cn *= c;
            if (p.cwiseAbs().maxCoeff() > (std::int64_t{1} << 31)) break;
            bool diagonal = true;
            for (int i = 0; i < d && diagonal; ++i) {
                for (int k = 0; k < d && diagonal; ++k) {
                    if (i != k && p(i, k) != 0) diagonal = false;
                }
            }
            if (!diagonal) continue;
            const std::int64_t t = p(0, 0);
            bool equal = t > 0;
            for (int i = 1; i < d; ++i) {
                if (p(i, i) != t) equal = false;
            }
            if (equal && t * t == cn) {
                out.period_exponent_ = n;
                found = true;
                break;
            }
        }
        if (!found) {
            raise(ErrorCode::InternalError, "period exponent not found within cap");
        }
    }

    out.inv_transpose_ = m.cast<double>().transpose().inverse();
    out.description_ = format_matrix(m);
    return out;
}

DilationMatrix DilationMatrix::named(const std::string& name, int dim) {
    if (name == "quincunx") {
        IntMatrix m(2, 2);
        m << 1, 1, 1, -1;
        DilationMatrix out = from_integer_matrix(m);
        out.description_ = "quincunx";
        return out;
    }
    if (name.size() >= 2 && name.back() == 'I') {
        const std::int64_t a = std::stoll(name.substr(0, name.size() - 1));
        IntMatrix m = IntMatrix::Identity(dim, dim) * a;
        DilationMatrix out = from_integer_matrix(m);
        out.description_ = name;
        return out;
    }
    raise(ErrorCode::BadParameter, "unknown dilation name '" + name + "'");
}

Eigen::MatrixXd DilationMatrix::dual_basis(int j) const {
    const int d = dim();
    Eigen::MatrixXd b = Eigen::MatrixXd::Identity(d, d);
    if (j >= 0) {
        for (int i = 0; i < j; ++i) b = b * inv_transpose_;
    } else {
        Eigen::MatrixXd t = entries_.cast<double>().transpose();
        for (int i = 0; i < -j; ++i) b = b * t;
    }
    return 2.0 * M_PI * b;
}

double DilationMatrix::dual_scale(int j) const {
    return 2.0 * M_PI * std::pow(a_, -j);
}

Eigen::MatrixXd DilationMatrix::matrix_power(int j) const {
    const int d = dim();
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(d, d);
    if (j >= 0) {
        const Eigen::MatrixXd m = entries_.cast<double>();
        for (int i = 0; i < j; ++i) p = p * m;
    } else {
        const Eigen::MatrixXd m = entries_.cast<double>().inverse();
        for (int i = 0; i < -j; ++i) p = p * m;
    }
    return p;
}

Eigen::VectorXd DilationMatrix::to_dual_coords(int j, const Eigen::VectorXd& omega) const {
    return dual_basis(j).inverse() * omega;
}

Eigen::VectorXd DilationMatrix::wrap_to_cell(int j, const Eigen::VectorXd& omega) const {
    Eigen::MatrixXd b = dual_basis(j);
    Eigen::VectorXd t = b.inverse() * omega;
    for (int i = 0; i < t.size(); ++i) {
        t(i) -= std::floor(t(i) + 0.5);
    }
    return b * t;
}

bool DilationMatrix::lattice_contains(int s, const IntVector& v) const {
    if (s < 0) raise(ErrorCode::BadParameter, "lattice_contains expects s >= 0");
    IntMatrix p = IntMatrix::Identity(dim(), dim());
    for (int i = 0; i < s; ++i) p = p * entries_;
    // Solve p * k = v exactly via adjugate.
    const std::int64_t det = int_det(p);
    IntVector t = int_adjugate(p) * v;
    for (int i = 0; i < dim(); ++i) {
        if (t(i) % det != 0) return false;
    }
    return true;
}

FrequencyGrid::FrequencyGrid(const DilationMatrix& d, int j, int n, bool use_offset)
    : dilation_(d), j_(j), n_(n), offset_(use_offset) {
    if (n < 8 || (n & (n - 1)) != 0) {
        raise(ErrorCode::ResolutionTooSmall,
              "grid resolution must be a power of two >= 8, got " + std::to_string(n));
    }
    total_ = 1;
    for (int i = 0; i < dilation_.dim(); ++i) total_ *= static_cast<std::size_t>(n);
    basis_ = dilation_.dual_basis(j);
}

std::vector<int> FrequencyGrid::multi_index(std::size_t flat) const {
    const int d = dim();
    std::vector<int> idx(d);
    for (int i = d - 1; i >= 0; --i) {
        idx[i] = static_cast<int>(flat % static_cast<std::size_t>(n_));
        flat /= static_cast<std::size_t>(n_);
    }
    return idx;
}

Eigen::VectorXd FrequencyGrid::t_coord(std::size_t flat) const {
    const int d = dim();
    Eigen::VectorXd t(d);
    const double off = offset_ ? 0.5 : 0.0;
    std::vector<int> idx = multi_index(flat);
    for (int i = 0; i < d; ++i) {
        t(i) = (static_cast<double>(idx[i]) + off) / static_cast<double>(n_) - 0.5;
    }
    return t;
}

Eigen::VectorXd FrequencyGrid::point(std::size_t flat) const {
    return basis_ * t_coord(flat);
}

double FrequencyGrid::cell_volume() const {
    const int d = dim();
    double v = std::pow(2.0 * M_PI, d) * std::pow(static_cast<double>(dilation_.det_abs()), -j_);
    return v / std::pow(static_cast<double>(n_), d);
}

} // namespace opwave
