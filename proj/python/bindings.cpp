#include <qcorr/entanglement.hpp>
#include <qcorr/entropies.hpp>
#include <qcorr/state_io.hpp>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace qcorr;

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t k = 0; k < n; ++k) out.emplace_back(1, static_cast<char>('a' + k));
    return out;
}

DimSignature make_sig(std::vector<int> dims, std::optional<std::vector<std::string>> labels) {
    auto l = labels ? *labels : default_labels(dims.size());
    return DimSignature(std::move(dims), std::move(l));
}

py::dict bounded(const BoundedValue& v) {
    py::dict d;
    d["lower"] = v.lower;
    d["upper"] = v.upper;
    d["provenance"] = to_string(v.provenance);
    return d;
}

py::dict report_dict(const EntanglementReport& r) {
    py::dict d;
    d["concurrence"] = r.concurrence;
    d["eof"] = r.eof;
    d["eof_closed_form"] = r.eof_closed_form;
    d["e_cost"] = bounded(r.e_cost);
    d["e_distillable"] = bounded(r.e_distillable);
    d["key_rate"] = bounded(r.key_rate);
    d["delta_loss"] = r.delta_loss;
    d["ree_upper"] = r.ree_upper;
    d["ree_lower"] = r.ree_lower;
    d["coherent_information"] = r.coherent_information;
    d["s_cond_ab"] = r.s_cond_ab;
    d["conditional"] = r.conditional;
    d["degenerate_a_states"] = r.degenerate_a_states;
    d["discord_ab_numeric"] = r.discord_ab_numeric;
    py::list violations;
    for (const auto& v : audit_chain(r)) violations.append(py::make_tuple(v.relation, v.excess));
    d["chain_violations"] = violations;
    return d;
}

py::dict discord_dict(const DiscordResult& r) {
    py::dict d;
    d["discord"] = r.discord;
    d["classical_correlation"] = r.classical_correlation;
    d["mutual_information"] = r.mutual_information;
    d["measurement"] = r.optimal_measurement.elements;
    d["seeds_tried"] = r.optimizer_trace.seeds_tried;
    return d;
}

ReportOptions report_options(bool with_discord, bool with_ree) {
    ReportOptions o;
    o.with_discord = with_discord;
    o.with_ree = with_ree;
    return o;
}

OptimizerBudget budget(int starts, int iterations) {
    OptimizerBudget b;
    b.starts = starts;
    b.iterations = iterations;
    return b;
}

} // namespace

PYBIND11_MODULE(_qcorr, m) {
    m.doc() = "Quantum correlation and entanglement measures for small bipartite states";

    auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<UnsupportedDimension>(m, "UnsupportedDimension", validation.ptr());
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    py::class_<DimSignature>(m, "DimSignature")
        .def(py::init(&make_sig), py::arg("dims"), py::arg("labels") = py::none())
        .def_property_readonly("dims", &DimSignature::dims)
        .def_property_readonly("labels", &DimSignature::labels)
        .def_property_readonly("total_dim", &DimSignature::total_dim)
        .def("__eq__", [](const DimSignature& a, const DimSignature& b) { return a == b; })
        .def("__repr__", [](const DimSignature& s) {
            std::string out = "DimSignature(";
            for (std::size_t k = 0; k < s.size(); ++k) {
                if (k) out += ", ";
                out += s.labels()[k] + "=" + std::to_string(s.dims()[k]);
            }
            return out + ")";
        });

    py::class_<DensityMatrix>(m, "DensityMatrix")
        .def(py::init([](const ComplexMatrix& matrix, std::vector<int> dims,
                         std::optional<std::vector<std::string>> labels) {
                 return DensityMatrix(matrix, make_sig(std::move(dims), std::move(labels)));
             }),
             py::arg("matrix"), py::arg("dims"), py::arg("labels") = py::none())
        .def_property_readonly("matrix", &DensityMatrix::matrix)
        .def_property_readonly("sig", &DensityMatrix::sig)
        .def_property_readonly("dims", [](const DensityMatrix& r) { return r.sig().dims(); })
        .def_property_readonly("labels", [](const DensityMatrix& r) { return r.sig().labels(); })
        .def("reduced", [](const DensityMatrix& r, std::vector<std::string> keep) { return r.reduced(keep); },
             py::arg("keep"))
        .def("eigenvalues", &DensityMatrix::eigenvalues)
        .def("rank", &DensityMatrix::rank, py::arg("cutoff") = kRankCutoff)
        .def("purity", &DensityMatrix::purity);

    py::class_<PureState>(m, "PureState")
        .def(py::init([](const ComplexVector& amplitudes, std::vector<int> dims,
                         std::optional<std::vector<std::string>> labels) {
                 return PureState(amplitudes, make_sig(std::move(dims), std::move(labels)));
             }),
             py::arg("amplitudes"), py::arg("dims"), py::arg("labels") = py::none())
        .def_property_readonly("amplitudes", &PureState::amplitudes)
        .def_property_readonly("sig", &PureState::sig)
        .def("density", &PureState::density)
        .def("reduced", [](const PureState& p, std::vector<std::string> keep) { return p.reduced(keep); },
             py::arg("keep"));

    // states
    m.def("bell_state", &bell_state);
    m.def(
        "example_family",
        [](double theta, double phi) {
            auto ex = example_family({theta, phi});
            py::dict d;
            d["psi"] = ex.psi;
            d["sigma_ab"] = ex.sigma_ab;
            d["rho_ac"] = ex.rho_ac;
            return d;
        },
        py::arg("theta"), py::arg("phi"));
    m.def(
        "random_density_matrix",
        [](std::vector<int> dims, int rank, std::uint64_t seed) { return random_density_matrix(make_sig(dims, {}), rank, seed); },
        py::arg("dims"), py::arg("rank"), py::arg("seed"));
    m.def(
        "random_pure_state", [](std::vector<int> dims, std::uint64_t seed) { return random_pure_state(make_sig(dims, {}), seed); },
        py::arg("dims"), py::arg("seed"));
    m.def("purify", &purify, py::arg("rho"), py::arg("ancilla_label") = py::none());
    m.def(
        "is_ppt",
        [](const DensityMatrix& rho, const std::string& subsystem) {
            const auto v = is_ppt(rho, subsystem);
            py::dict d;
            d["ppt"] = v.ppt;
            d["min_eigenvalue"] = v.min_eigenvalue;
            d["decides_separability"] = v.decides_separability;
            return d;
        },
        py::arg("rho"), py::arg("subsystem"));

    // entropies
    m.def("binary_entropy", &binary_entropy, py::arg("p"));
    m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
    m.def("conditional_entropy", &conditional_entropy, py::arg("rho"), py::arg("target"), py::arg("given"));
    m.def("mutual_information", &mutual_information, py::arg("rho"), py::arg("x"), py::arg("y"));
    m.def("coherent_information", &coherent_information, py::arg("rho"), py::arg("a"), py::arg("b"));

    // correlations
    m.def(
        "discord",
        [](const DensityMatrix& rho, const std::string& target, const std::string& measured, int starts, int iterations) {
            return discord_dict(discord(rho, target, measured, budget(starts, iterations)));
        },
        py::arg("rho"), py::arg("target"), py::arg("measured"), py::arg("starts") = 24, py::arg("iterations") = 200);
    m.def(
        "zero_discord_check",
        [](const DensityMatrix& rho, const std::string& measured) {
            const auto v = zero_discord_check(rho, measured);
            return py::make_tuple(v.zero_discord, v.basis);
        },
        py::arg("rho"), py::arg("measured"));

    // entanglement
    m.def("concurrence_2q", &concurrence_2q, py::arg("rho"));
    m.def("eof_2q", &eof_2q, py::arg("rho"));
    m.def(
        "eof_ensemble_oracle",
        [](const DensityMatrix& rho, int ensemble_size) { return eof_ensemble_oracle(rho, ensemble_size).value; },
        py::arg("rho"), py::arg("ensemble_size"));
    m.def(
        "eof_via_koashi_winter", [](const PureState& psi) { return eof_via_koashi_winter(psi).value; }, py::arg("psi"));
    m.def(
        "ree_estimate", [](const DensityMatrix& rho) { return ree_estimate(rho).ree_upper; }, py::arg("rho"));
    m.def(
        "lemma1_check",
        [](const DensityMatrix& rho) {
            const auto v = lemma1_check(rho);
            py::dict d;
            d["classification"] = to_string(v.classification);
            d["eof"] = v.eof;
            d["coherent_information"] = v.coherent_information;
            d["gap"] = v.gap;
            d["applicable"] = v.applicable;
            d["holds"] = v.holds;
            return d;
        },
        py::arg("rho"));
    m.def(
        "theorem2_report",
        [](double theta, double phi, bool with_discord, bool with_ree) {
            return report_dict(theorem2_report(ExampleFamilyParams{theta, phi}, report_options(with_discord, with_ree)));
        },
        py::arg("theta"), py::arg("phi"), py::arg("with_discord") = true, py::arg("with_ree") = true);
    m.def(
        "entanglement_report",
        [](const DensityMatrix& rho, bool with_discord, bool with_ree) {
            return report_dict(entanglement_report(rho, report_options(with_discord, with_ree)));
        },
        py::arg("rho"), py::arg("with_discord") = true, py::arg("with_ree") = true);
    m.def(
        "irreversibility_conditions",
        [](const DensityMatrix& rho) {
            const auto c = irreversibility_conditions(rho);
            py::dict d;
            d["pure"] = c.pure;
            d["separable"] = c.separable;
            d["pseudo_pure"] = c.pseudo_pure;
            d["additivity_certificate"] = c.additivity_certificate;
            d["certificate_route"] = c.certificate_route;
            d["verdict"] = to_string(c.verdict);
            return d;
        },
        py::arg("rho"));

    // documents
    m.def(
        "parse_state",
        [](const std::string& text) -> py::object {
            auto doc = parse_state(text);
            if (auto* p = std::get_if<PureState>(&doc)) return py::cast(*p);
            return py::cast(std::get<DensityMatrix>(doc));
        },
        py::arg("text"));
    m.def(
        "dump_state", [](const DensityMatrix& rho) { return dump_state(rho); }, py::arg("state"));
    m.def(
        "dump_state", [](const PureState& psi) { return dump_state(psi); }, py::arg("state"));
}
