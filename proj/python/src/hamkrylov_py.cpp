#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "hamkrylov/error.hpp"
#include "hamkrylov/factorization.hpp"
#include "hamkrylov/hamiltonian.hpp"
#include "hamkrylov/krylov.hpp"
#include "hamkrylov/problems.hpp"
#include "hamkrylov/projection.hpp"
#include "hamkrylov/runner.hpp"

namespace py = pybind11;
using namespace hamkrylov;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Vector to_vector(const Array& a) {
    if (a.ndim() != 1) throw DimensionError("expected a 1-D array");
    return Vector(a.data(), a.data() + a.size());
}

DenseMatrix to_dense_matrix(const Array& a) {
    if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
    const auto r = static_cast<std::size_t>(a.shape(0));
    const auto c = static_cast<std::size_t>(a.shape(1));
    return DenseMatrix(r, c, Vector(a.data(), a.data() + a.size()));
}

Array to_array(const Vector& v) {
    Array out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Array to_array(const DenseMatrix& m) {
    Array out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
    double* p = out.mutable_data();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) *p++ = m(i, j);
    return out;
}

Array to_array(const std::vector<Vector>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Array out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(cols)});
    double* p = out.mutable_data();
    for (const Vector& r : rows) p = std::copy(r.begin(), r.end(), p);
    return out;
}

Method method_from(const std::string& name) {
    const auto m = parse_method(name);
    if (!m) throw InvalidArgument("unknown method '" + name + "'");
    return *m;
}

py::dict record_to_dict(const TrajectoryRecord& r) {
    py::dict d;
    d["label"] = r.label;
    d["times"] = to_array(r.times);
    d["energy"] = to_array(r.energy);
    d["energy_error"] = to_array(r.energy_error);
    py::dict integrals;
    for (std::size_t i = 0; i < r.integral_orders.size(); ++i) integrals[py::int_(r.integral_orders[i])] = to_array(r.integrals[i]);
    d["integrals"] = integrals;
    d["global_error"] = r.global_error.empty() ? py::object(py::none()) : py::object(to_array(r.global_error));
    d["state_times"] = to_array(r.state_times);
    d["states"] = to_array(r.states);
    d["integral_preservation_claimed"] = r.integral_preservation_claimed;
    d["projections"] = r.projections;
    d["reduced_dim"] = r.reduced_dim;
    d["max_projection_defect"] = r.max_projection_defect;
    return d;
}

py::tuple basis_tuple(const KrylovBasis& kb) {
    return py::make_tuple(to_array(kb.basis), to_array(kb.small_matrix));
}

} // namespace

PYBIND11_MODULE(hamkrylov, m) {
    m.doc() = "Krylov projection methods for linear Hamiltonian systems";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
    py::register_exception<SingularMatrixError>(m, "SingularMatrixError", base.ptr());
    py::register_exception<IndefiniteWeightError>(m, "IndefiniteWeightError", base.ptr());
    py::register_exception<BreakdownError>(m, "BreakdownError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    py::class_<HamiltonianSystem>(m, "System")
        .def(py::init([](const Array& h, std::optional<Array> structure) {
                 if (!structure) return HamiltonianSystem(to_dense_matrix(h));
                 return HamiltonianSystem::with_structure(SparseMatrix::from_dense(to_dense_matrix(*structure)),
                                                          to_dense_matrix(h));
             }),
             py::arg("h"), py::arg("structure") = py::none(),
             "y' = J H y, or y' = S H y when a skew structure matrix S is given.")
        .def_property_readonly("dim", &HamiltonianSystem::dim)
        .def_property_readonly("description", &HamiltonianSystem::description)
        .def_property_readonly("is_canonical", &HamiltonianSystem::is_canonical)
        .def("h", [](const HamiltonianSystem& s) { return to_array(to_dense(s.h())); })
        .def("a", [](const HamiltonianSystem& s) { return to_array(s.materialize_a()); })
        .def("energy", [](const HamiltonianSystem& s, const Array& y) { return energy(s, to_vector(y)); })
        .def("first_integral",
             [](const HamiltonianSystem& s, std::size_t k, const Array& y) { return first_integral(s, k, to_vector(y)); })
        .def("structure_flags", [](const HamiltonianSystem& s) {
            const StructureFlags f = is_skew_hamiltonian(s);
            return py::make_tuple(f.hamiltonian, f.skew, f.commutes);
        })
        .def("energy_bound", [](const HamiltonianSystem& s, const Array& y0) {
            const EnergyBound b = energy_bound(s, to_vector(y0));
            return py::make_tuple(b.value, b.commutation_holds);
        });

    m.def(
        "make_problem",
        [](const std::string& family, std::size_t size, std::uint64_t seed, std::optional<std::string> initial) {
            ProblemSpec spec;
            const auto f = parse_family(family);
            if (!f) throw InvalidArgument("unknown problem family '" + family + "'");
            spec.family = *f;
            spec.size = size;
            spec.seed = seed;
            if (initial) {
                const auto mode = parse_initial_mode(*initial);
                if (!mode) throw InvalidArgument("unknown initial mode '" + *initial + "'");
                spec.initial = *mode;
            }
            Problem p = make_problem(spec);
            return py::make_tuple(std::move(p.system), to_array(p.y0));
        },
        py::arg("family"), py::arg("size"), py::arg("seed") = 0, py::arg("initial") = py::none(),
        "Returns (System, y0).");

    m.def(
        "run_method",
        [](const HamiltonianSystem& sys, const Array& y0, const std::string& method, std::size_t krylov_dim, double h,
           double horizon, std::optional<double> restart, std::vector<std::size_t> integrals, bool global_error) {
            DiagnosticsOptions diag;
            diag.integral_orders = std::move(integrals);
            diag.global_error = global_error;
            const Vector y = to_vector(y0);
            const Method mth = method_from(method);
            TrajectoryRecord r;
            {
                py::gil_scoped_release release;
                r = run_method(sys, y, mth, krylov_dim, Schedule{h, horizon, restart}, diag);
            }
            return record_to_dict(r);
        },
        py::arg("system"), py::arg("y0"), py::arg("method"), py::arg("krylov_dim"), py::arg("h") = 0.004,
        py::arg("T") = 1.0, py::arg("restart") = py::none(), py::arg("integrals") = std::vector<std::size_t>{},
        py::arg("global_error") = false);

    m.def(
        "reference_solution",
        [](const HamiltonianSystem& sys, const Array& y0, double h, double horizon, std::vector<std::size_t> integrals) {
            DiagnosticsOptions diag;
            diag.integral_orders = std::move(integrals);
            return record_to_dict(reference_solution(sys, to_vector(y0), Schedule{h, horizon, std::nullopt}, diag));
        },
        py::arg("system"), py::arg("y0"), py::arg("h") = 0.004, py::arg("T") = 1.0,
        py::arg("integrals") = std::vector<std::size_t>{});

    m.def(
        "arnoldi",
        [](const Array& a, const Array& b, std::size_t n, std::optional<Array> weight) {
            const InnerProduct ip = weight ? InnerProduct::weighted_by(std::make_shared<const AnyMatrix>(to_dense_matrix(*weight)))
                                           : InnerProduct::euclidean();
            return basis_tuple(arnoldi(LinearOperator::from_matrix(to_dense_matrix(a)), to_vector(b), n, ip));
        },
        py::arg("a"), py::arg("b"), py::arg("n"), py::arg("weight") = py::none(), "Returns (V, H_n).");

    m.def(
        "symplectic_lanczos",
        [](const Array& a, const Array& y0, std::size_t n) {
            return basis_tuple(symplectic_lanczos(LinearOperator::from_matrix(to_dense_matrix(a)), to_vector(y0), n));
        },
        py::arg("a"), py::arg("y0"), py::arg("n"), "Returns (S, H_2n).");

    m.def(
        "block_j_basis",
        [](const Array& a, const Array& y0, std::size_t n, bool stabilized) {
            return basis_tuple(block_j_basis(LinearOperator::from_matrix(to_dense_matrix(a)), to_vector(y0), n, stabilized));
        },
        py::arg("a"), py::arg("y0"), py::arg("n"), py::arg("stabilized") = true, "Returns (S, reduced matrix).");

    m.def(
        "cayley_step",
        [](const Array& a, double h, const Array& y) { return to_array(cayley_step(to_dense_matrix(a), h, to_vector(y))); },
        py::arg("a"), py::arg("h"), py::arg("y"));

    m.def(
        "run_config",
        [](const std::string& json_text) {
            const RunReport r = run(parse_config(json_text));
            py::dict out;
            out["summary"] = r.summary;
            out["failed"] = r.any_failure();
            py::dict csvs;
            for (const MethodOutcome& o : r.outcomes) {
                if (o.csv) csvs[py::str(o.method)] = *o.csv;
            }
            out["csv"] = csvs;
            return out;
        },
        py::arg("config_json"), "Runs an experiment described by a JSON config string.");

    m.def(
        "invariant_suite",
        [](std::uint64_t seed) {
            const InvariantReport r = invariant_suite(seed);
            return py::make_tuple(r.all_pass, r.json);
        },
        py::arg("seed") = 0, "Returns (all_pass, json_report).");
}
