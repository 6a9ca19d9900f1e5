#include <doctest.h>

#include <numeric>
#include <regex>

#include "qad/bench.hpp"
#include "qad/error.hpp"
#include "qad/serialize.hpp"
#include "test_util.hpp"

using namespace qad;
using namespace qad::testing;
using nlohmann::json;

namespace {

DetectorConfig quick() {
    DetectorConfig c;
    c.sa.restarts = 4;
    c.sa.sweeps = 200;
    return c;
}

std::vector<Method> methods(std::initializer_list<const char*> names) {
    std::vector<Method> out;
    for (const char* n : names) {
        out.push_back(parse_method(n));
    }
    return out;
}

json strip_timing(json report) {
    for (auto& run : report["runs"]) {
        run.erase("wall_seconds");
    }
    return report;
}

} // namespace

TEST_CASE("parse_method round-trips names") {
    for (const char* name : {"qubo", "qubo-fit", "mahalanobis-topk", "knn"}) {
        CHECK(parse_method(name).name() == name);
    }
    CHECK_THROWS_AS(parse_method("isolation-forest"), InvalidArgument);
}

TEST_CASE("gaussian suite with one cell") {
    GaussianSpec spec;
    const std::vector<std::uint64_t> seeds{1};
    const BenchmarkReport r = run_gaussian_suite({1.0}, spec, methods({"mahalanobis-topk"}), seeds);
    REQUIRE(r.runs.size() == 1);
    CHECK(r.runs[0].group == "sigma=1");
    CHECK(r.runs[0].method == "mahalanobis-topk");
    CHECK(r.runs[0].flagged == spec.n_outliers);
    CHECK(r.summary.size() == 1);
    CHECK(r.seeds == seeds);
    CHECK(r.runs[0].parameters.contains("data"));
}

TEST_CASE("gaussian suite grid cardinality and summary means") {
    const std::vector<std::uint64_t> seeds{1, 2, 3};
    const auto ms = methods({"qubo", "mahalanobis-topk", "knn"});
    GaussianSpec spec{40, 3, 2, 1.0, 6.0, 0};
    const BenchmarkReport r = run_gaussian_suite({0.5, 2.0}, spec, ms, seeds, quick());
    CHECK(r.runs.size() == 2 * 3 * 3);
    CHECK(r.summary.size() == 2 * 3);
    for (const SummaryRow& s : r.summary) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const MethodRun& run : r.runs) {
            if (run.group == s.group && run.method == s.method) {
                sum += run.eval.auc;
                ++count;
            }
        }
        CHECK(count == 3);
        CHECK(s.runs == 3);
        CHECK(s.mean_auc == doctest::Approx(sum / 3.0).epsilon(1e-15));
    }
}

TEST_CASE("well separated gaussians are detected by every method") {
    std::vector<std::uint64_t> seeds(10);
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{100});
    GaussianSpec spec;
    const BenchmarkReport r =
        run_gaussian_suite({1.0, 3.0}, spec, methods({"qubo", "mahalanobis-topk", "knn"}), seeds, quick());
    for (const SummaryRow& s : r.summary) {
        INFO(s.group << " " << s.method);
        CHECK(s.mean_auc >= 0.95);
    }
}

TEST_CASE("zero shift carries no signal") {
    std::vector<std::uint64_t> seeds(40);
    std::iota(seeds.begin(), seeds.end(), std::uint64_t{1});
    GaussianSpec spec;
    spec.outlier_shift = 0.0;
    const BenchmarkReport r = run_gaussian_suite({1.0}, spec, methods({"mahalanobis-topk"}), seeds);
    // Outliers sit at the centre, so the centroid baseline does no better than chance.
    CHECK(r.summary[0].mean_auc <= 0.55);
}

TEST_CASE("reports are deterministic and reproducible per run") {
    const std::vector<std::uint64_t> seeds{7, 8};
    GaussianSpec spec{30, 3, 2, 1.0, 4.0, 0};
    const auto ms = methods({"qubo", "qubo-fit", "knn"});
    const BenchmarkReport a = run_gaussian_suite({1.0}, spec, ms, seeds, quick());
    const BenchmarkReport b = run_gaussian_suite({1.0}, spec, ms, seeds, quick());
    CHECK(strip_timing(json(a)) == strip_timing(json(b)));

    // Re-run one qubo cell from its recorded parameters.
    const MethodRun& cell = a.runs[0];
    REQUIRE(cell.method == "qubo");
    GaussianSpec data_spec = spec;
    data_spec.seed = cell.parameters["data"]["seed"].get<std::uint64_t>();
    DetectorConfig cfg = quick();
    cfg.alpha = cell.parameters["alpha"].get<double>();
    cfg.k = cell.parameters["k"].get<std::size_t>();
    cfg.sa.seed = cell.parameters["sa"]["seed"].get<std::uint64_t>();
    const Dataset data = generate_gaussian(data_spec);
    const DetectionResult again = detect(data, cfg);
    CHECK(roc_auc_binary(*data.labels, again.flags).auc == cell.eval.auc);
}

TEST_CASE("csv suite on a digit-shaped file") {
    Rng rng(90);
    Eigen::MatrixXd rows = normal_rows(rng, 50, 784);
    rows.bottomRows(5).array() += 3.0;
    Labels labels(50, 0);
    std::fill(labels.begin() + 45, labels.end(), std::uint8_t{1});
    const auto path = temp_path("digits.csv");
    write_csv(make_dataset(rows, labels), path);

    const BenchmarkReport r = run_csv_suite({{path, "label"}}, methods({"qubo", "mahalanobis-topk"}), quick());
    REQUIRE(r.runs.size() == 2);
    CHECK(r.runs[0].group == "digits.csv");
    CHECK(r.runs[0].flagged == 5);
    CHECK(r.runs[0].parameters["ridge"].get<double>() == kDefaultRidge);
}

TEST_CASE("csv suite subsamples large files") {
    const Dataset big = generate_gaussian({1490, 10, 3, 1.0, 6.0, 5});
    const auto path = temp_path("fraud_like.csv");
    write_csv(big, path, "Class");
    const BenchmarkReport r = run_csv_suite({{path, "Class"}}, methods({"qubo"}), quick(), 1000, 3);
    REQUIRE(r.runs.size() == 1);
    CHECK(r.runs[0].flagged == r.runs[0].eval.tp + r.runs[0].eval.fp);
    CHECK(r.runs[0].eval.tp + r.runs[0].eval.fn + r.runs[0].eval.fp + r.runs[0].eval.tn == 1000);
    CHECK(r.runs[0].parameters["data"]["subsample"].get<std::size_t>() == 1000);
}

TEST_CASE("csv suite rejects bad inputs before running") {
    const auto unlabeled = temp_path("unlabeled.csv");
    write_file(unlabeled, "a,b\n1,2\n3,4\n5,7\n");
    CHECK_THROWS_AS(run_csv_suite({{unlabeled, "label"}}, methods({"qubo"})), DataError);
    CHECK_THROWS_AS(run_csv_suite({{temp_path("absent.csv"), "label"}}, methods({"qubo"})), DataError);

    const auto one_class = temp_path("one_class.csv");
    write_file(one_class, "a,label\n1,0\n2,0\n3,0\n");
    CHECK_THROWS_AS(run_csv_suite({{one_class, "label"}}, methods({"qubo"})), DataError);

    const auto big = temp_path("thirty.csv");
    write_csv(generate_gaussian({27, 3, 2, 1.0, 6.0, 1}), big);
    DetectorConfig exact;
    exact.solver = SolverKind::Exact;
    CHECK_THROWS_WITH_AS(run_csv_suite({{big, "label"}}, methods({"qubo"}), exact), doctest::Contains("sa"),
                         SolverLimit);
}

TEST_CASE("svg chart carries one labelled value per bar") {
    const std::vector<std::uint64_t> seeds{1};
    const BenchmarkReport r =
        run_gaussian_suite({1.0}, GaussianSpec{}, methods({"qubo", "mahalanobis-topk", "knn"}), seeds, quick());
    const std::string svg = render_svg(r);
    CHECK(svg.rfind("<svg", 0) == 0);
    const std::regex label(R"re(<text class="auc"[^>]*data-method="([^"]+)"[^>]*>([^ <]+) ([0-9.]+)</text>)re");
    std::size_t found = 0;
    for (std::sregex_iterator it(svg.begin(), svg.end(), label), end; it != end; ++it) {
        const std::string method = (*it)[1];
        CHECK((*it)[2] == method);
        const auto row = std::find_if(r.summary.begin(), r.summary.end(),
                                      [&](const SummaryRow& s) { return s.method == method; });
        REQUIRE(row != r.summary.end());
        CHECK(std::stod((*it)[3]) == doctest::Approx(row->mean_auc).epsilon(1e-6));
        ++found;
    }
    CHECK(found == 3);
}

TEST_CASE("flat csv report has one row per run") {
    const std::vector<std::uint64_t> seeds{1, 2};
    const BenchmarkReport r = run_gaussian_suite({1.0}, GaussianSpec{}, methods({"mahalanobis-topk", "knn"}), seeds);
    const auto path = temp_path("report.csv");
    write_report_csv(r, path);
    const std::string text = read_file(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 4);
    CHECK(text.rfind("scenario,group,method,seed,auc", 0) == 0);
}
