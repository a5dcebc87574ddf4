#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tlab/bsreg.hpp"
#include "tlab/diagnostics.hpp"
#include "tlab/fewbody.hpp"
#include "tlab/jacobi.hpp"
#include "tlab/potential.hpp"
#include "tlab/runner.hpp"
#include "tlab/twobody.hpp"

namespace py = pybind11;
using namespace tlab;

PYBIND11_MODULE(_core, m) {
    m.doc() = "threshold-lab core: few-body zero-energy threshold numerics";
    m.attr("__version__") = kVersion;

    py::class_<PairPotential>(m, "PairPotential")
        .def_static("gaussian", &PairPotential::gaussian, py::arg("depth"), py::arg("range"))
        .def_static("square_well", &PairPotential::square_well, py::arg("depth"), py::arg("range"))
        .def_static("screened_coulomb", &PairPotential::screened_coulomb, py::arg("depth"), py::arg("range"))
        .def_static("gaussian_sum",
                    [](const std::vector<std::pair<double, double>>& terms) {
                        std::vector<GaussianTerm> ts;
                        for (auto [w, b] : terms) ts.push_back({w, b});
                        return PairPotential::gaussian_sum(ts);
                    })
        .def("__call__", [](const PairPotential& v, double r) { return v(r); })
        .def("positive_part", &PairPotential::positive_part)
        .def("negative_part", &PairPotential::negative_part)
        .def("scaled", &PairPotential::scaled)
        .def("support_radius", &PairPotential::support_radius,
             py::arg("tail_frac") = 1e-14);

    m.def("potential_norms", [](const PairPotential& v) {
        auto n = potential_norms(v);
        return std::pair(n.l1, n.l2);
    });
    m.def("fourier_sqrt_abs",
          py::overload_cast<const PairPotential&, double>(&fourier_sqrt_abs));
    m.def("regularizer_vr", &regularizer_vr);

    py::class_<JacobiFrame>(m, "JacobiFrame")
        .def_property_readonly("coords", [](const JacobiFrame& f) { return f.coords; })
        .def_property_readonly("alpha", &JacobiFrame::alpha)
        .def_property_readonly("gamma", &JacobiFrame::gamma);
    m.def("build_frame", &build_frame);
    m.def("kinematic_rotation", &kinematic_rotation);
    m.def("pair_separation_map", &pair_separation_map);
    m.def("kinetic_residual", &kinetic_residual);
    m.def("rotation_residual", &rotation_residual);

    py::class_<RadialGrid>(m, "RadialGrid")
        .def_static("composite_gl", &RadialGrid::composite_gl)
        .def_readonly("r_max", &RadialGrid::r_max)
        .def_readonly("n", &RadialGrid::n)
        .def_readonly("nodes", &RadialGrid::nodes)
        .def_readonly("weights", &RadialGrid::weights);

    py::class_<ThresholdReport>(m, "ThresholdReport")
        .def_readonly("lambda_lo", &ThresholdReport::lambda_lo)
        .def_readonly("lambda_hi", &ThresholdReport::lambda_hi)
        .def_readonly("lambda_cr", &ThresholdReport::lambda_cr)
        .def_readonly("residual", &ThresholdReport::residual)
        .def_readonly("iterations", &ThresholdReport::iterations);

    m.def("bound_states", [](const PairPotential& v, double lam, double r_max, int n) {
        auto r = bound_states(v, lam, r_max, n);
        return std::pair(r.energies, r.grid_warning);
    }, py::arg("v"), py::arg("lam"), py::arg("r_max") = 20.0, py::arg("n") = 2000);
    m.def("scattering_length", [](const PairPotential& v, double lam) {
        auto r = scattering_length(v, lam);
        return py::make_tuple(r.a, r.divergent, r.converged);
    });
    m.def("bs_max_eigenvalue", &bs_max_eigenvalue);
    m.def("bs_count_above_one", &bs_count_above_one);
    m.def("critical_coupling_2b", &critical_coupling_2b, py::arg("v"),
          py::arg("grid"), py::arg("lambda_max") = 64.0);
    m.def("resonance_check", [](const PairPotential& v, double lam, double tol,
                                const RadialGrid& g) {
        switch (resonance_check(v, lam, tol, g)) {
            case ResonanceClass::subcritical: return "subcritical";
            case ResonanceClass::resonant: return "resonant";
            case ResonanceClass::bound: return "supercritical";
        }
        return "?";
    });

    m.def("t_multiplier", &t_multiplier);
    m.def("apply_b", &apply_b);
    m.def("apply_b_inverse", &apply_b_inverse);
    m.def("find_omega", &find_omega);
    m.def("wegot_bound_check", [](double k) {
        auto w = wegot_bound_check(k);
        return py::make_tuple(w.value, w.bound, w.ok);
    });
    m.def("c0_constant", [](const PairPotential& v12, const PairPotential& v23,
                            const JacobiFrame& f) {
        auto r = c0_constant(v12, v23, f);
        py::dict d;
        d["c0"] = r.c0;
        d["factor1"] = r.factor1;
        d["factor2"] = r.factor2;
        d["factor3"] = r.factor3;
        d["gamma"] = r.gamma;
        return d;
    });

    py::class_<SystemSpec>(m, "SystemSpec")
        .def(py::init([](std::vector<double> masses,
                         const std::vector<std::tuple<int, int, PairPotential>>& pots,
                         double coupling) {
                 SystemSpec s;
                 s.masses = std::move(masses);
                 for (const auto& [i, j, v] : pots)
                     s.potentials.emplace(PairKey{std::min(i, j), std::max(i, j)}, v);
                 s.coupling = coupling;
                 s.validate();
                 return s;
             }),
             py::arg("masses"), py::arg("potentials"), py::arg("coupling") = 1.0);

    py::class_<GaussianBasisElement>(m, "GaussianBasisElement")
        .def(py::init([](const Eigen::MatrixXd& a) { return GaussianBasisElement{a}; }))
        .def_readonly("a", &GaussianBasisElement::a);

    py::class_<FewBodyProblem>(m, "FewBodyProblem")
        .def(py::init<SystemSpec, bool>(), py::arg("system"), py::arg("symmetrize") = true)
        .def_property_readonly("n_internal", &FewBodyProblem::n_internal);

    py::class_<SpectralResult>(m, "SpectralResult")
        .def_readonly("energy", &SpectralResult::energy)
        .def_readonly("basis_size", &SpectralResult::basis_size)
        .def_readonly("overlap_condition", &SpectralResult::overlap_condition);

    m.def("ground_state",
          [](const FewBodyProblem& pb, const std::vector<GaussianBasisElement>& basis,
             double lam) { return ground_state(pb, basis, lam); });
    m.def("ladder_basis", &ladder_basis);
    m.def("grid_basis", &grid_basis);
    m.def("threshold_on_basis", &threshold_on_basis, py::arg("problem"),
          py::arg("basis"), py::arg("lambda_hint") = 0.0);
    m.def("grow_basis",
          [](const FewBodyProblem& pb, std::vector<GaussianBasisElement> basis,
             std::uint64_t seed, int target, int pool, double b_min, double b_max,
             double lam) {
              GrowOptions g{seed, target, pool, b_min, b_max, lam};
              return grow_basis(pb, std::move(basis), g);
          });
    m.def("hyperradius_trace",
          [](const FewBodyProblem& pb, const std::vector<GaussianBasisElement>& basis,
             const std::vector<double>& schedule, std::vector<std::pair<int, int>> pairs,
             std::vector<double> ls) {
              AbsorptionOptions ao{std::move(pairs), std::move(ls)};
              const auto prof = absorption_trace(pb, basis, schedule, ao);
              py::list rows;
              for (const auto& r : prof.rows) {
                  py::dict d;
                  d["lambda"] = r.lambda;
                  d["energy"] = r.energy;
                  d["rho_sq"] = r.rho_sq;
                  d["pair_probs"] = r.pair_probs;
                  rows.append(d);
              }
              return rows;
          });
}
