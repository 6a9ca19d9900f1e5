#pragma once

#include <Eigen/Dense>

#include "qad/dataset.hpp"

namespace qad {

inline constexpr double kDefaultRidge = 1e-6;

/// Centroid and metric tensor shared by every Mahalanobis distance.
///
/// `whitener` is the upper-triangular factor W with W^T W = inv_cov, so that
/// d(u, v) = |W (u - v)|. It is derived from inv_cov by from_inverse.
struct CovarianceModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd inv_cov;
    double ridge = 0.0;
    Eigen::MatrixXd whitener;

    std::size_t dims() const { return static_cast<std::size_t>(mean.size()); }

    // Throws InvalidArgument unless inv_cov is square, symmetric and positive
    // definite with the same dimension as mean.
    static CovarianceModel from_inverse(Eigen::VectorXd mean, Eigen::MatrixXd inv_cov, double ridge = 0.0);
};

/// Column means and the inverse of the unbiased sample covariance plus
/// ridge * (trace(cov) / D) * I. Throws SingularCovariance when the
/// regularized covariance cannot be inverted.
CovarianceModel fit_covariance(const Dataset& data, double ridge = kDefaultRidge);

// d_i for every row, distance to the model mean.
Eigen::VectorXd mahalanobis_to_centroid(const CovarianceModel& model, const Dataset& data);

// Symmetric N x N matrix of d_ij with an exact zero diagonal.
Eigen::MatrixXd pairwise_mahalanobis(const CovarianceModel& model, const Dataset& data);

} // namespace qad
