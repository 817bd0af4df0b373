#include <sstream>

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "soqo/bounds.hpp"
#include "soqo/errors.hpp"
#include "soqo/cli.hpp"
#include "soqo/experiment.hpp"
#include "soqo/monte_carlo.hpp"
#include "soqo/plot.hpp"

namespace py = pybind11;
using namespace soqo;

namespace {

Mat to_mat(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    Mat m(n);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[r].size()) != n)
            throw DimensionMismatch("matrix rows must form a square");
        for (int c = 0; c < n; ++c) m(r, c) = rows[r][c];
    }
    return m;
}

std::vector<std::vector<double>> from_mat(const Mat& m) {
    std::vector<std::vector<double>> rows(m.dim(), std::vector<double>(m.dim()));
    for (int r = 0; r < m.dim(); ++r)
        for (int c = 0; c < m.dim(); ++c) rows[r][c] = m(r, c);
    return rows;
}

py::dict report_dict(const BoundReport& r) {
    py::dict d;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) d[key] = *v;
    };
    put("lai_cost_exact", r.lai_cost_exact);
    put("lai_cost_upper", r.lai_cost_upper);
    put("fi_regret_lower", r.fi_regret_lower);
    put("lai_gamma_regret_upper", r.lai_gamma_regret_upper);
    put("lai_gamma_regret_upper_dimsum", r.lai_gamma_regret_upper_dimsum);
    put("robd_cr", r.robd_cr);
    put("lai_cr_upper", r.lai_cr_upper);
    put("lai_gamma_cr_upper", r.lai_gamma_cr_upper);
    put("lai1_cr_smalllambda", r.lai1_cr_smalllambda);
    put("ftm_regret_lower", r.ftm_regret_lower);
    put("framework_cr", r.framework_cr);
    return d;
}

}  // namespace

PYBIND11_MODULE(_soqo, m) {
    m.doc() = "Smoothed online quadratic decision policies";
#ifdef SOQO_VERSION
    m.attr("__version__") = SOQO_VERSION;
#endif

    py::class_<Mat>(m, "Mat")
        .def(py::init([](const std::vector<std::vector<double>>& rows) { return to_mat(rows); }))
        .def("dim", &Mat::dim)
        .def("to_list", [](const Mat& m_) { return from_mat(m_); });

    py::class_<SpectralMatrix>(m, "SpectralMatrix")
        .def_static("decompose",
                    [](const std::vector<std::vector<double>>& rows) {
                        return SpectralMatrix::decompose(to_mat(rows));
                    })
        .def_static("from_eigvals", &SpectralMatrix::from_eigvals)
        .def("dim", &SpectralMatrix::dim)
        .def("eigvals", &SpectralMatrix::eigvals)
        .def("eigenvector", &SpectralMatrix::eigenvector)
        .def("min_eigval", &SpectralMatrix::min_eigval)
        .def("max_eigval", &SpectralMatrix::max_eigval)
        .def("condition_number", &SpectralMatrix::condition_number)
        .def("is_scalar", &SpectralMatrix::is_scalar)
        .def("reconstruct", [](const SpectralMatrix& a) { return from_mat(a.reconstruct()); })
        .def("to_eigenbasis", &SpectralMatrix::to_eigenbasis)
        .def("from_eigenbasis", &SpectralMatrix::from_eigenbasis);

    m.def("fixed_point_eigenvalue", &fixed_point_eigenvalue);
    m.def("fixed_point_matrix", &fixed_point_matrix);
    m.def("gamma_shift", &gamma_shift);
    m.def("robd_mu2", &robd_mu2);

    py::class_<CoefficientSchedule>(m, "CoefficientSchedule")
        .def("horizon", &CoefficientSchedule::horizon)
        .def("dim", &CoefficientSchedule::dim)
        .def("rho", &CoefficientSchedule::rho)
        .def("round", &CoefficientSchedule::round);

    m.def("lai_schedule", &lai_schedule);
    m.def("lai_gamma_schedule", &lai_gamma_schedule);
    m.def("robd_schedule", &robd_schedule);
    m.def("fi_schedule", &fi_schedule);
    m.def("eigen_gap_bound", &eigen_gap_bound);

    py::enum_<IncrementFamily>(m, "IncrementFamily")
        .value("UNIFORM", IncrementFamily::Uniform)
        .value("NORMAL", IncrementFamily::Normal)
        .value("LAPLACE", IncrementFamily::Laplace)
        .value("LOGISTIC", IncrementFamily::Logistic)
        .value("GUMBEL", IncrementFamily::Gumbel)
        .value("LOGNORMAL_SYM", IncrementFamily::LognormalSym)
        .value("LOMAX_SYM", IncrementFamily::LomaxSym);

    py::class_<IncrementSpec>(m, "IncrementSpec")
        .def(py::init<>())
        .def_readwrite("family", &IncrementSpec::family)
        .def_readwrite("sigma_c2", &IncrementSpec::sigma_c2)
        .def_readwrite("lomax_alpha", &IncrementSpec::lomax_alpha)
        .def_readwrite("lognormal_sigma", &IncrementSpec::lognormal_sigma);

    py::class_<AdversaryRule>(m, "AdversaryRule");
    m.def("alternating_ray", &alternating_ray);
    m.def("fixed_points", &fixed_points);

    py::enum_<TraceModeKind>(m, "TraceModeKind")
        .value("MARTINGALE", TraceModeKind::Martingale)
        .value("SHIFT_SCHEDULE", TraceModeKind::ShiftSchedule)
        .value("MIXED", TraceModeKind::Mixed)
        .value("PURE_ADVERSARIAL", TraceModeKind::PureAdversarial);

    py::class_<TraceSpec>(m, "TraceSpec")
        .def(py::init<>())
        .def_readwrite("dim", &TraceSpec::dim)
        .def_readwrite("horizon", &TraceSpec::horizon)
        .def_readwrite("x0", &TraceSpec::x0)
        .def_readwrite("mode", &TraceSpec::mode)
        .def_readwrite("base", &TraceSpec::base)
        .def_readwrite("segments", &TraceSpec::segments)
        .def_readwrite("correlation", &TraceSpec::correlation)
        .def_readwrite("adversarial_pct", &TraceSpec::adversarial_pct)
        .def_readwrite("adversary", &TraceSpec::adversary)
        .def_readwrite("seed", &TraceSpec::seed);

    py::class_<MinimizerTrace>(m, "MinimizerTrace")
        .def_readonly("v", &MinimizerTrace::v)
        .def_readonly("x0", &MinimizerTrace::x0)
        .def_readonly("replication", &MinimizerTrace::replication)
        .def("horizon", &MinimizerTrace::horizon)
        .def("dim", &MinimizerTrace::dim);

    m.def("adversarial_rounds", &adversarial_rounds);
    m.def("generate_trace", &generate_trace);
    m.def("write_trace_csv", &write_trace_csv);
    m.def("read_trace_csv", &read_trace_csv);

    py::class_<PolicyRun>(m, "PolicyRun")
        .def_readonly("actions", &PolicyRun::actions)
        .def_readonly("hit_costs", &PolicyRun::hit_costs)
        .def_readonly("switch_costs", &PolicyRun::switch_costs)
        .def_readonly("total", &PolicyRun::total);

    m.def(
        "run_policy",
        [](const std::string& policy, const SpectralMatrix& a, const MinimizerTrace& trace,
           bool perfect_drift) {
            const PolicySpec spec = parse_policy_spec(policy);
            if (perfect_drift) {
                const DriftOracle oracle = DriftOracle::perfect(trace);
                return run_policy(spec, a, trace, &oracle);
            }
            return run_policy(spec, a, trace);
        },
        py::arg("policy"), py::arg("a"), py::arg("trace"), py::arg("perfect_drift") = false);
    m.def("offline_optimal", &offline_optimal);
    m.def("offline_kkt_residual", &offline_kkt_residual);
    m.def("static_optimal_action", &static_optimal_action);
    m.def("static_optimal_expected_cost", &static_optimal_expected_cost);

    m.def("lai_expected_cost",
          [](const SpectralMatrix& a, const std::vector<std::vector<double>>& sigma, int horizon,
             const Vec& x0_gap) { return lai_expected_cost(a, to_mat(sigma), horizon, x0_gap); });
    m.def("w_interpolation_gap", &w_interpolation_gap);
    m.def("fi_regret_lower",
          [](const SpectralMatrix& a, const std::vector<std::vector<double>>& sigma,
             const Vec& c_eigvals, int horizon) {
              return fi_regret_lower(a, to_mat(sigma), c_eigvals, horizon);
          });
    m.def("robd_regret_lower",
          [](const SpectralMatrix& a, const std::vector<std::vector<double>>& sigma,
             int horizon) { return robd_regret_lower(a, to_mat(sigma), horizon); });
    m.def("lai_gamma_regret_upper",
          [](const SpectralMatrix& a, double sigma2, double gamma, const std::string& variant) {
              return lai_gamma_regret_upper(a, sigma2, gamma,
                                            variant == "dimsum" ? RegretBoundVariant::DimSum
                                                                : RegretBoundVariant::MinEig);
          },
          py::arg("a"), py::arg("sigma2"), py::arg("gamma"), py::arg("variant") = "mineig");
    m.def(
        "cr_bounds",
        [](const SpectralMatrix& a, std::optional<double> gamma) {
            return report_dict(cr_bounds(a, gamma));
        },
        py::arg("a"), py::arg("gamma") = std::nullopt);
    m.def("framework_cr", &framework_cr);
    m.def("schedule_strong_smooth", &schedule_strong_smooth);
    m.def("ftm_regret_lower", &ftm_regret_lower);

    py::class_<MonteCarloEstimate>(m, "MonteCarloEstimate")
        .def_readonly("mean", &MonteCarloEstimate::mean)
        .def_readonly("std_error", &MonteCarloEstimate::std_error)
        .def_readonly("p95", &MonteCarloEstimate::p95)
        .def_readonly("n_runs", &MonteCarloEstimate::n_runs);

    m.def("summarize", &summarize);
    m.def(
        "monte_carlo",
        [](const std::string& policy, const SpectralMatrix& a, const TraceSpec& spec, int n_runs,
           const std::string& statistic, int workers) {
            return monte_carlo(parse_policy_spec(policy), a, spec, n_runs,
                               parse_statistic(statistic), workers);
        },
        py::arg("policy"), py::arg("a"), py::arg("spec"), py::arg("n_runs"), py::arg("statistic"),
        py::arg("workers") = 1);
    m.def(
        "monte_carlo_samples",
        [](const std::string& policy, const SpectralMatrix& a, const TraceSpec& spec, int n_runs,
           const std::string& statistic, int workers) {
            return monte_carlo_samples(parse_policy_spec(policy), a, spec, n_runs,
                                       parse_statistic(statistic), workers);
        },
        py::arg("policy"), py::arg("a"), py::arg("spec"), py::arg("n_runs"), py::arg("statistic"),
        py::arg("workers") = 1);
    m.def("scenario_tree_optimum", &scenario_tree_optimum);

    py::class_<ResultRow>(m, "ResultRow")
        .def_readonly("experiment", &ResultRow::experiment)
        .def_readonly("sweep", &ResultRow::sweep)
        .def_readonly("policy", &ResultRow::policy)
        .def_readonly("mean", &ResultRow::mean)
        .def_readonly("std_error", &ResultRow::std_error)
        .def_readonly("p95", &ResultRow::p95)
        .def_readonly("n_runs", &ResultRow::n_runs)
        .def_readonly("seed", &ResultRow::seed);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def_readonly("name", &ExperimentConfig::name)
        .def_readonly("n_runs", &ExperimentConfig::n_runs)
        .def_readonly("sweep_values", &ExperimentConfig::sweep_values)
        .def_readonly("master_seed", &ExperimentConfig::master_seed);

    m.def("parse_config", &parse_config);
    m.def("load_config", &load_config);
    m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("workers") = 1);
    m.def("rows_to_csv", &rows_to_csv);
    m.def("write_rows_csv", &write_rows_csv);
    m.def("preset_names", &preset_names);
    m.def("preset", &preset);
    m.def("emit_plot", &emit_plot);
    m.def("write_plot_svg", &write_plot_svg);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
