#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qad {

using Labels = std::vector<std::uint8_t>;

/// Tabular data set: N rows of D finite features, optionally labeled.
///
/// Label 1 marks an outlier (the positive class). Instances built through
/// make_dataset, load_csv or generate_gaussian are validated and are not
/// modified afterwards.
struct Dataset {
    Eigen::MatrixXd rows;               // N x D
    std::optional<Labels> labels;       // length N, values in {0, 1}
    std::vector<std::string> ids;       // record identifiers, row index by default
    std::vector<std::string> feature_names;

    std::size_t size() const { return static_cast<std::size_t>(rows.rows()); }
    std::size_t dims() const { return static_cast<std::size_t>(rows.cols()); }
    bool labeled() const { return labels.has_value(); }

    // Number of rows labeled 1. Throws InvalidArgument when unlabeled.
    std::size_t outlier_count() const;

    // Throws InvalidArgument when any documented invariant is broken.
    void validate() const;
};

// Builds and validates a data set with default ids ("0".."N-1") and feature
// names ("x0".."x{D-1}").
Dataset make_dataset(Eigen::MatrixXd rows, std::optional<Labels> labels = std::nullopt);

struct GaussianSpec {
    std::size_t n_inliers = 95;
    std::size_t n_outliers = 5;
    std::size_t dims = 2;
    double sigma = 1.0;
    double outlier_shift = 6.0; // radius of the outlier shell, in units of sigma
    std::uint64_t seed = 42;

    void validate() const;
};

/// Inliers are i.i.d. isotropic N(0, sigma^2 I) draws; outliers sit at uniformly
/// random directions on the sphere of radius outlier_shift * sigma. Inliers
/// come first, then outliers. Pure function of the spec.
Dataset generate_gaussian(const GaussianSpec& spec);

/// Reads an RFC-4180-style CSV with a header row. When `label_column` is
/// given it must exist; its 0/1 values become the labels and it is removed
/// from the features.
Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<std::string>& label_column = std::nullopt);

// Like load_csv, but treats `label_column` as optional: labels are read only
// when the header contains it.
Dataset load_csv_if_labeled(const std::filesystem::path& path, const std::string& label_column);

// Writes features (full round-trip precision) and, when labeled, a trailing
// label column named `label_column`.
void write_csv(const Dataset& data, std::ostream& out, const std::string& label_column = "label");
void write_csv(const Dataset& data, const std::filesystem::path& path,
               const std::string& label_column = "label");

// Seeded stratified subsample keeping the class ratio; rows keep their
// original relative order and ids. Unlabeled data is sampled uniformly.
Dataset subsample_stratified(const Dataset& data, std::size_t target_rows, std::uint64_t seed);

} // namespace qad
