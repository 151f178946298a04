#pragma once

#include <Eigen/Core>

namespace leocrlb {

/// ||a - b||_F / ||b||_F, or ||a||_F when b is zero.
double relative_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// max |A - A^T| / max |A|.
double relative_asymmetry(const Eigen::MatrixXd& a);

/// d_i = 1 / sqrt(A_ii), or 1 where A_ii <= 0.
Eigen::VectorXd jacobi_scaling(const Eigen::MatrixXd& a);

struct SymmetricInverse {
    Eigen::MatrixXd inverse;
    double condition_number{1.0};  // of the Jacobi-scaled matrix
    bool floored{false};           // some eigenvalue was below the floor
};

/// Inverse of a symmetric PSD matrix through an eigendecomposition of its
/// Jacobi-scaled form. Eigenvalues below floor_rel * max are dropped.
SymmetricInverse symmetric_pseudo_inverse(const Eigen::MatrixXd& a, double floor_rel = 1e-12);

struct EigenRange {
    double min{0.0};
    double max{0.0};
};

EigenRange eigen_range(const Eigen::MatrixXd& symmetric);

}  // namespace leocrlb
