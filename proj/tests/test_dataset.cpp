#include <doctest.h>

#include <sstream>

#include "qad/dataset.hpp"
#include "qad/error.hpp"
#include "test_util.hpp"

using namespace qad;
using qad::testing::temp_path;
using qad::testing::write_file;

TEST_CASE("load_csv parses a plain numeric file") {
    const auto path = temp_path("plain.csv");
    write_file(path, "a,b\n1,2\n3,4\n5,6\n");
    const Dataset d = load_csv(path);
    CHECK(d.size() == 3);
    CHECK(d.dims() == 2);
    CHECK_FALSE(d.labeled());
    CHECK(d.rows(2, 1) == 6.0);
    CHECK(d.feature_names == std::vector<std::string>{"a", "b"});
    CHECK(d.ids == std::vector<std::string>{"0", "1", "2"});
}

TEST_CASE("load_csv extracts the label column") {
    const auto path = temp_path("labeled.csv");
    write_file(path, "x,label,y\n1,0,2\n3,0,4\n5,1,6\n7,0,8\n");
    const Dataset d = load_csv(path, "label");
    CHECK(d.size() == 4);
    CHECK(d.dims() == 2);
    REQUIRE(d.labeled());
    CHECK(*d.labels == Labels{0, 0, 1, 0});
    CHECK(d.rows(2, 0) == 5.0);
    CHECK(d.rows(2, 1) == 6.0);
    CHECK(d.outlier_count() == 1);
}

TEST_CASE("load_csv reports the row and column of an unparsable cell") {
    const auto path = temp_path("bad_cell.csv");
    write_file(path, "a,b\n1,2\n3,abc\n5,6\n");
    try {
        load_csv(path);
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 2") != std::string::npos);
        CHECK(msg.find("column \"b\"") != std::string::npos);
    }
}

TEST_CASE("load_csv error paths") {
    CHECK_THROWS_AS(load_csv(temp_path("does_not_exist.csv")), DataError);

    const auto one_row = temp_path("one_row.csv");
    write_file(one_row, "a,b\n1,2\n");
    CHECK_THROWS_AS(load_csv(one_row), DataError);

    const auto bad_label = temp_path("bad_label.csv");
    write_file(bad_label, "a,label\n1,0\n2,2\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_label, "label"), doctest::Contains("not 0 or 1"), DataError);

    const auto no_label = temp_path("no_label.csv");
    write_file(no_label, "a,b\n1,0\n2,1\n");
    CHECK_THROWS_AS(load_csv(no_label, "label"), DataError);
    CHECK_FALSE(load_csv_if_labeled(no_label, "label").labeled());

    const auto ragged = temp_path("ragged.csv");
    write_file(ragged, "a,b\n1,2\n3\n");
    CHECK_THROWS_AS(load_csv(ragged), DataError);

    const auto inf = temp_path("inf.csv");
    write_file(inf, "a\n1\ninf\n");
    CHECK_THROWS_AS(load_csv(inf), DataError);
}

TEST_CASE("load_csv handles quoting, CRLF and blank lines") {
    const auto path = temp_path("quoted.csv");
    write_file(path, "\"first, col\",\"Class\"\r\n\"1.5\",\"0\"\r\n\r\n-2e3,\"1\"\r\n");
    const Dataset d = load_csv(path, "Class");
    CHECK(d.size() == 2);
    CHECK(d.feature_names == std::vector<std::string>{"first, col"});
    CHECK(d.rows(0, 0) == 1.5);
    CHECK(d.rows(1, 0) == -2000.0);
    CHECK(*d.labels == Labels{0, 1});
}

TEST_CASE("generate_gaussian counts and labels") {
    GaussianSpec spec{95, 5, 2, 1.0, 6.0, 7};
    const Dataset d = generate_gaussian(spec);
    CHECK(d.size() == 100);
    CHECK(d.dims() == 2);
    CHECK(d.outlier_count() == 5);

    spec.n_outliers = 0;
    const Dataset clean = generate_gaussian(spec);
    CHECK(clean.size() == 95);
    CHECK(clean.outlier_count() == 0);
}

TEST_CASE("generate_gaussian is a pure function of its spec") {
    const GaussianSpec spec{40, 3, 4, 2.5, 3.0, 99};
    const Dataset a = generate_gaussian(spec);
    const Dataset b = generate_gaussian(spec);
    CHECK(a.rows == b.rows);
    CHECK(*a.labels == *b.labels);

    GaussianSpec other = spec;
    other.seed = 100;
    CHECK(generate_gaussian(other).rows != a.rows);
}

TEST_CASE("generated outliers lie on the shell of radius shift * sigma") {
    Rng rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        GaussianSpec spec;
        spec.n_inliers = 1 + rng.below(20);
        spec.n_outliers = 1 + rng.below(10);
        spec.dims = 1 + rng.below(6);
        spec.sigma = 0.1 + 5.0 * rng.uniform();
        spec.outlier_shift = 10.0 * rng.uniform();
        spec.seed = rng.next();
        const Dataset d = generate_gaussian(spec);
        for (std::size_t i = spec.n_inliers; i < d.size(); ++i) {
            CHECK((*d.labels)[i] == 1);
            CHECK(std::abs(d.rows.row(static_cast<Eigen::Index>(i)).norm() - spec.outlier_shift * spec.sigma)
                  <= 1e-9);
        }
    }
}

TEST_CASE("generate_gaussian rejects invalid specs") {
    CHECK_THROWS_AS(generate_gaussian({0, 5, 2, 1.0, 6.0, 1}), InvalidArgument);
    CHECK_THROWS_AS(generate_gaussian({10, 5, 0, 1.0, 6.0, 1}), InvalidArgument);
    CHECK_THROWS_AS(generate_gaussian({10, 5, 2, 0.0, 6.0, 1}), InvalidArgument);
    CHECK_THROWS_AS(generate_gaussian({10, 5, 2, 1.0, -1.0, 1}), InvalidArgument);
}

TEST_CASE("write_csv then load_csv reproduces rows exactly") {
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto n = static_cast<Eigen::Index>(2 + rng.below(30));
        const auto d = static_cast<Eigen::Index>(1 + rng.below(5));
        Eigen::MatrixXd rows(n, d);
        Labels labels(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) {
                rows(i, j) = std::ldexp(rng.normal(), static_cast<int>(rng.below(40)) - 20);
            }
            labels[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(rng.below(2));
        }
        const Dataset original = make_dataset(rows, labels);
        const auto path = temp_path("roundtrip.csv");
        write_csv(original, path);
        const Dataset back = load_csv(path, "label");
        CHECK(back.rows == original.rows);
        CHECK(*back.labels == *original.labels);
    }
}

TEST_CASE("subsample_stratified keeps both classes and is seeded") {
    const Dataset d = generate_gaussian({990, 10, 3, 1.0, 5.0, 3});
    const Dataset s = subsample_stratified(d, 200, 17);
    CHECK(s.size() == 200);
    CHECK(s.outlier_count() == 2);
    const Dataset again = subsample_stratified(d, 200, 17);
    CHECK(again.ids == s.ids);
    CHECK(subsample_stratified(d, 200, 18).ids != s.ids);
    CHECK(subsample_stratified(d, 5000, 1).size() == d.size());

    // Rare class survives heavy reduction.
    const Dataset tiny = subsample_stratified(d, 10, 4);
    CHECK(tiny.outlier_count() == 1);
}

TEST_CASE("make_dataset validates invariants") {
    CHECK_THROWS_AS(make_dataset(Eigen::MatrixXd::Zero(1, 2)), InvalidArgument);
    CHECK_THROWS_AS(make_dataset(Eigen::MatrixXd::Zero(3, 2), Labels{0, 1}), InvalidArgument);
    CHECK_THROWS_AS(make_dataset(Eigen::MatrixXd::Zero(2, 2), Labels{0, 2}), InvalidArgument);
    Eigen::MatrixXd nan = Eigen::MatrixXd::Zero(2, 2);
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_dataset(nan), InvalidArgument);
}
