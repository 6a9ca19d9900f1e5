#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qad/bench.hpp"
#include "qad/dataset.hpp"
#include "qad/detector.hpp"
#include "qad/distance.hpp"
#include "qad/error.hpp"
#include "qad/eval.hpp"
#include "qad/qubo.hpp"
#include "qad/solver.hpp"

namespace py = pybind11;

namespace {

qad::Dataset to_dataset(const Eigen::MatrixXd& rows, const std::optional<qad::Labels>& labels) {
    return qad::make_dataset(rows, labels);
}

qad::SaConfig make_sa(std::size_t restarts, std::size_t sweeps, double beta_initial, double beta_final,
                      std::uint64_t seed, std::optional<std::size_t> warm_start_count) {
    qad::SaConfig c;
    c.restarts = restarts;
    c.sweeps = sweeps;
    c.beta_initial = beta_initial;
    c.beta_final = beta_final;
    c.seed = seed;
    c.warm_start_count = warm_start_count;
    return c;
}

qad::DetectorConfig make_detector(double alpha, std::size_t k, double ridge, std::optional<std::size_t> neighbor_limit,
                                  const std::string& solver, const qad::SaConfig& sa, bool squared,
                                  std::optional<double> penalty_weight) {
    qad::DetectorConfig c;
    c.alpha = alpha;
    c.k = k;
    c.ridge = ridge;
    c.neighbor_limit = neighbor_limit;
    c.solver = qad::parse_solver_kind(solver);
    c.sa = sa;
    c.squared_distances = squared;
    c.penalty_weight = penalty_weight;
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "QUBO formulation of anomaly detection: distances, QUBO builder, solvers, detector, metrics";

    py::register_exception<qad::Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<qad::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);

    py::class_<qad::Dataset>(m, "Dataset")
        .def_readonly("rows", &qad::Dataset::rows)
        .def_readonly("labels", &qad::Dataset::labels)
        .def_readonly("ids", &qad::Dataset::ids)
        .def_readonly("feature_names", &qad::Dataset::feature_names)
        .def("__len__", &qad::Dataset::size)
        .def_property_readonly("dims", &qad::Dataset::dims);

    m.def(
        "make_dataset", &to_dataset, py::arg("rows"), py::arg("labels") = py::none());
    m.def(
        "generate_gaussian",
        [](std::size_t n_inliers, std::size_t n_outliers, std::size_t dims, double sigma, double outlier_shift,
           std::uint64_t seed) {
            return qad::generate_gaussian({n_inliers, n_outliers, dims, sigma, outlier_shift, seed});
        },
        py::arg("n_inliers") = 95, py::arg("n_outliers") = 5, py::arg("dims") = 2, py::arg("sigma") = 1.0,
        py::arg("outlier_shift") = 6.0, py::arg("seed") = 42);
    m.def(
        "load_csv",
        [](const std::string& path, std::optional<std::string> label_column) {
            return qad::load_csv(path, label_column);
        },
        py::arg("path"), py::arg("label_column") = py::none());

    py::class_<qad::CovarianceModel>(m, "CovarianceModel")
        .def_readonly("mean", &qad::CovarianceModel::mean)
        .def_readonly("inv_cov", &qad::CovarianceModel::inv_cov)
        .def_readonly("ridge", &qad::CovarianceModel::ridge);
    m.def("fit_covariance", &qad::fit_covariance, py::arg("data"), py::arg("ridge") = qad::kDefaultRidge);
    m.def("mahalanobis_to_centroid", &qad::mahalanobis_to_centroid, py::arg("model"), py::arg("data"));
    m.def("pairwise_mahalanobis", &qad::pairwise_mahalanobis, py::arg("model"), py::arg("data"));

    py::class_<qad::Qubo>(m, "Qubo")
        .def_static(
            "from_terms",
            [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& terms) {
                std::vector<qad::Term> t;
                for (const auto& [i, j, c] : terms) {
                    t.push_back({i, j, c});
                }
                return qad::Qubo::from_terms(n, t);
            },
            py::arg("n"), py::arg("terms"))
        .def_property_readonly("n", &qad::Qubo::size)
        .def("terms",
             [](const qad::Qubo& q) {
                 std::vector<std::tuple<std::size_t, std::size_t, double>> out;
                 for (const auto& t : q.terms()) {
                     out.emplace_back(t.i, t.j, t.coeff);
                 }
                 return out;
             })
        .def("coefficient", &qad::Qubo::coefficient)
        .def("energy", [](const qad::Qubo& q, const qad::Assignment& x) { return qad::energy(q, x); });

    m.def(
        "build_anomaly_qubo",
        [](const Eigen::VectorXd& d_lin, const Eigen::MatrixXd& d_quad, double alpha, std::size_t k,
           std::optional<std::size_t> neighbor_limit) {
            qad::AnomalyQuboSpec spec;
            spec.alpha = alpha;
            spec.k = k;
            spec.neighbor_limit = neighbor_limit;
            return qad::build_anomaly_qubo(d_lin, d_quad, spec);
        },
        py::arg("d_lin"), py::arg("d_quad"), py::arg("alpha"), py::arg("k"), py::arg("neighbor_limit") = py::none());
    m.def("apply_cardinality_penalty", &qad::apply_cardinality_penalty, py::arg("q"), py::arg("k"),
          py::arg("weight") = py::none());

    py::class_<qad::Solution>(m, "Solution")
        .def_readonly("assignment", &qad::Solution::assignment)
        .def_readonly("objective", &qad::Solution::objective)
        .def_property_readonly("solver", [](const qad::Solution& s) { return std::string(qad::to_string(s.solver)); })
        .def_readonly("seed", &qad::Solution::seed)
        .def_readonly("sweeps", &qad::Solution::sweeps)
        .def_readonly("restarts", &qad::Solution::restarts);

    py::class_<qad::SaConfig>(m, "SaConfig")
        .def(py::init(&make_sa), py::arg("restarts") = 16, py::arg("sweeps") = 1000, py::arg("beta_initial") = 0.1,
             py::arg("beta_final") = 10.0, py::arg("seed") = 42, py::arg("warm_start_count") = py::none())
        .def_readwrite("restarts", &qad::SaConfig::restarts)
        .def_readwrite("sweeps", &qad::SaConfig::sweeps)
        .def_readwrite("seed", &qad::SaConfig::seed);

    m.def("solve_exact", &qad::solve_exact, py::arg("q"));
    m.def("solve_sa", &qad::solve_sa, py::arg("q"), py::arg("config") = qad::SaConfig{});

    py::class_<qad::DetectorConfig>(m, "DetectorConfig")
        .def(py::init(&make_detector), py::arg("alpha") = 0.5, py::arg("k") = 1, py::arg("ridge") = qad::kDefaultRidge,
             py::arg("neighbor_limit") = py::none(), py::arg("solver") = "sa", py::arg("sa") = qad::SaConfig{},
             py::arg("squared_distances") = false, py::arg("penalty_weight") = py::none())
        .def_readwrite("alpha", &qad::DetectorConfig::alpha)
        .def_readwrite("k", &qad::DetectorConfig::k);

    py::class_<qad::DetectionResult>(m, "DetectionResult")
        .def_readonly("method", &qad::DetectionResult::method)
        .def_readonly("flags", &qad::DetectionResult::flags)
        .def_readonly("objective", &qad::DetectionResult::objective)
        .def_readonly("alpha", &qad::DetectionResult::alpha)
        .def_readonly("k", &qad::DetectionResult::k)
        .def_readonly("feasible", &qad::DetectionResult::feasible)
        .def_readonly("scores", &qad::DetectionResult::scores)
        .def_readonly("solution", &qad::DetectionResult::solution);

    m.def("detect", py::overload_cast<const qad::Dataset&, const qad::DetectorConfig&>(&qad::detect), py::arg("data"),
          py::arg("config"));
    m.def(
        "fit_alpha",
        [](const qad::Dataset& data, const qad::DetectorConfig& config, std::optional<std::vector<double>> grid) {
            const auto g = grid.value_or(qad::default_alpha_grid());
            const auto fit = qad::fit_alpha(data, config, g);
            return py::make_tuple(fit.best_alpha, fit.table);
        },
        py::arg("data"), py::arg("config") = qad::DetectorConfig{}, py::arg("grid") = py::none());
    m.def("baseline_mahalanobis_topk", &qad::baseline_mahalanobis_topk, py::arg("data"), py::arg("k"),
          py::arg("ridge") = qad::kDefaultRidge);
    m.def("baseline_knn_dist", &qad::baseline_knn_dist, py::arg("data"), py::arg("k"), py::arg("m"),
          py::arg("ridge") = qad::kDefaultRidge);

    py::class_<qad::EvalReport>(m, "EvalReport")
        .def_readonly("auc", &qad::EvalReport::auc)
        .def_readonly("tp", &qad::EvalReport::tp)
        .def_readonly("fp", &qad::EvalReport::fp)
        .def_readonly("tn", &qad::EvalReport::tn)
        .def_readonly("fn", &qad::EvalReport::fn)
        .def_readonly("tpr", &qad::EvalReport::tpr)
        .def_readonly("fpr", &qad::EvalReport::fpr);
    m.def(
        "roc_auc_binary",
        [](const qad::Labels& labels, const qad::Assignment& flags) { return qad::roc_auc_binary(labels, flags); },
        py::arg("labels"), py::arg("flags"));
    m.def(
        "roc_auc_scores",
        [](const qad::Labels& labels, const std::vector<double>& scores) { return qad::roc_auc_scores(labels, scores); },
        py::arg("labels"), py::arg("scores"));
}
