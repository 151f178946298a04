#include "leocrlb/linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace leocrlb {

double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const double nb = b.norm();
    const double diff = (a - b).norm();
    return nb > 0.0 ? diff / nb : diff;
}

double relative_asymmetry(const Eigen::MatrixXd& a) {
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (a - a.transpose()).cwiseAbs().maxCoeff() / scale;
}

Eigen::VectorXd jacobi_scaling(const Eigen::MatrixXd& a) {
    Eigen::VectorXd d(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        d(i) = a(i, i) > 0.0 ? 1.0 / std::sqrt(a(i, i)) : 1.0;
    }
    return d;
}

SymmetricInverse symmetric_pseudo_inverse(const Eigen::MatrixXd& a, double floor_rel) {
    SymmetricInverse out;
    const Eigen::Index n = a.rows();
    out.inverse = Eigen::MatrixXd::Zero(n, n);
    if (n == 0) return out;

    const Eigen::VectorXd d = jacobi_scaling(a);
    const Eigen::MatrixXd scaled = d.asDiagonal() * a * d.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (scaled + scaled.transpose()));
    const Eigen::VectorXd& ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    if (top == 0.0) {
        out.floored = true;
        out.condition_number = std::numeric_limits<double>::infinity();
        return out;
    }
    const double floor = floor_rel * top;
    Eigen::VectorXd inv_ev = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (ev(i) > floor) {
            inv_ev(i) = 1.0 / ev(i);
        } else {
            out.floored = true;
        }
    }
    out.condition_number = ev(0) > 0.0 ? ev(n - 1) / ev(0) : std::numeric_limits<double>::infinity();
    const Eigen::MatrixXd& v = es.eigenvectors();
    const Eigen::MatrixXd scaled_inv = v * inv_ev.asDiagonal() * v.transpose();
    out.inverse = d.asDiagonal() * scaled_inv * d.asDiagonal();
    return out;
}

EigenRange eigen_range(const Eigen::MatrixXd& symmetric) {
    if (symmetric.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (symmetric + symmetric.transpose()),
                                                      Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(symmetric.rows() - 1)};
}

}  // namespace leocrlb
