// Test-side reference computations, kept independent of the library's
// decode/bound implementations.
#ifndef ASHARDS_TEST_ORACLES_HPP
#define ASHARDS_TEST_ORACLES_HPP

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace oracles {

using cplx = std::complex<double>;

// Vandermonde built by repeated multiplication (no angle tricks).
inline Eigen::MatrixXcd vandermonde(std::span<const cplx> points, int cols) {
    Eigen::MatrixXcd b(points.size(), cols);
    for (Eigen::Index i = 0; i < b.rows(); ++i) {
        cplx p = 1.0;
        for (Eigen::Index j = 0; j < cols; ++j) {
            b(i, j) = p;
            p *= points[static_cast<std::size_t>(i)];
        }
    }
    return b;
}

// First row of the least-squares pseudo-inverse (B^H B)^-1 B^H via dense
// inversion; the implementation under test uses a different decomposition.
inline std::vector<cplx> pinv_first_row(std::span<const cplx> points, int cols) {
    Eigen::MatrixXcd b = vandermonde(points, cols);
    Eigen::MatrixXcd pinv = (b.adjoint() * b).inverse() * b.adjoint();
    std::vector<cplx> row(points.size());
    for (Eigen::Index i = 0; i < pinv.cols(); ++i) row[static_cast<std::size_t>(i)] = pinv(0, i);
    return row;
}

// Constant term of the polynomial through (points[i], values[i]) by direct
// Lagrange interpolation at zero.
inline cplx lagrange_at_zero(std::span<const cplx> points, std::span<const cplx> values) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        cplx li = 1.0;
        for (std::size_t j = 0; j < points.size(); ++j) {
            if (i == j) continue;
            li *= points[j] / (points[j] - points[i]);
        }
        acc += li * values[i];
    }
    return acc;
}

// Condition number from Eigen's SVD, used as an independent check.
inline double svd_condition(const Eigen::MatrixXcd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    auto sv = svd.singularValues();
    return sv(0) / sv(sv.size() - 1);
}

} // namespace oracles

#endif
