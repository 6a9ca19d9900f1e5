#include "qad/distance.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qad/error.hpp"

namespace qad {

namespace {

// Relative eigenvalue floor below which a covariance is treated as singular.
constexpr double kSingularityTolerance = 1e-12;

void check_dims(const CovarianceModel& model, const Dataset& data) {
    if (model.dims() != data.dims() || static_cast<std::size_t>(model.whitener.cols()) != data.dims()) {
        throw InvalidArgument("covariance model has dimension " + std::to_string(model.dims())
                              + " but the data set has " + std::to_string(data.dims()) + " columns");
    }
}

// Columns are whitened, centered rows: |column i| = d_i.
Eigen::MatrixXd whiten(const CovarianceModel& model, const Dataset& data) {
    const Eigen::MatrixXd centered = data.rows.rowwise() - model.mean.transpose();
    return model.whitener * centered.transpose();
}

} // namespace

CovarianceModel CovarianceModel::from_inverse(Eigen::VectorXd mean, Eigen::MatrixXd inv_cov, double ridge) {
    const Eigen::Index d = mean.size();
    if (d < 1 || inv_cov.rows() != d || inv_cov.cols() != d) {
        throw InvalidArgument("inverse covariance must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    const double scale = inv_cov.cwiseAbs().maxCoeff();
    if (!inv_cov.allFinite() || (inv_cov - inv_cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw InvalidArgument("inverse covariance must be finite and symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(inv_cov);
    if (llt.info() != Eigen::Success) {
        throw InvalidArgument("inverse covariance is not positive definite");
    }
    CovarianceModel model;
    model.mean = std::move(mean);
    model.inv_cov = std::move(inv_cov);
    model.ridge = ridge;
    model.whitener = llt.matrixU();
    return model;
}

CovarianceModel fit_covariance(const Dataset& data, double ridge) {
    data.validate();
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
        throw InvalidArgument("ridge must be non-negative and finite");
    }
    const auto n = static_cast<double>(data.size());
    const auto d = static_cast<Eigen::Index>(data.dims());

    Eigen::VectorXd mean = data.rows.colwise().mean().transpose();
    const Eigen::MatrixXd centered = data.rows.rowwise() - mean.transpose();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / (n - 1.0);
    cov = 0.5 * (cov + cov.transpose()).eval();

    const double trace = cov.trace();
    if (ridge > 0.0) {
        cov.diagonal().array() += ridge * trace / static_cast<double>(d);
    }

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw SingularCovariance("eigendecomposition of the covariance failed");
    }
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double largest = values.maxCoeff();
    if (!(largest > 0.0) || values.minCoeff() <= kSingularityTolerance * largest) {
        throw SingularCovariance(
            "covariance is singular (" + std::to_string(data.size()) + " rows, " + std::to_string(d)
            + " columns, ridge " + std::to_string(ridge)
            + "); set ridge > 0 or reduce the number of feature columns"
            + (trace > 0.0 ? "" : " (all rows are identical, ridge cannot help)"));
    }
    const Eigen::MatrixXd& vectors = eig.eigenvectors();
    Eigen::MatrixXd inv_cov = vectors * values.cwiseInverse().asDiagonal() * vectors.transpose();
    inv_cov = 0.5 * (inv_cov + inv_cov.transpose()).eval();

    // W = diag(1/sqrt(lambda)) V^T satisfies W^T W = inv_cov without a second factorization.
    CovarianceModel model;
    model.mean = std::move(mean);
    model.inv_cov = std::move(inv_cov);
    model.ridge = ridge;
    model.whitener = values.cwiseSqrt().cwiseInverse().asDiagonal() * vectors.transpose();
    return model;
}

Eigen::VectorXd mahalanobis_to_centroid(const CovarianceModel& model, const Dataset& data) {
    check_dims(model, data);
    return whiten(model, data).colwise().norm().transpose();
}

Eigen::MatrixXd pairwise_mahalanobis(const CovarianceModel& model, const Dataset& data) {
    check_dims(model, data);
    const Eigen::MatrixXd y = whiten(model, data);
    const Eigen::Index n = y.cols();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const double v = (y.col(i) - y.col(j)).norm();
            dist(i, j) = v;
            dist(j, i) = v;
        }
    }
    return dist;
}

} // namespace qad
