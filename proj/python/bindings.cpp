#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fogloss/analytic.hpp"
#include "fogloss/config.hpp"
#include "fogloss/error.hpp"
#include "fogloss/kernel.hpp"
#include "fogloss/ring.hpp"
#include "fogloss/rwsolver.hpp"
#include "fogloss/simulator.hpp"
#include "fogloss/sweep.hpp"

namespace py = pybind11;
using namespace fogloss;

PYBIND11_MODULE(_fogloss, m) {
  m.doc() = "Blocking probabilities of cooperating loss systems with overflow rerouting";

  // leaked on purpose: the type must outlive the interpreter's module teardown
  static py::handle error_type = PyErr_NewException("fogloss.FoglossError", PyExc_RuntimeError, nullptr);
  m.add_object("FoglossError", py::reinterpret_borrow<py::object>(error_type));
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](double lambda1, double lambda2, double mu1, double mu2, double c1, double c2, double p1,
                       double p2) { return SystemParams{lambda1, lambda2, mu1, mu2, c1, c2, p1, p2}; }),
           py::arg("lambda1"), py::arg("lambda2"), py::arg("mu1") = 1.0, py::arg("mu2") = 1.0, py::arg("c1"),
           py::arg("c2"), py::arg("p1") = 0.0, py::arg("p2") = 0.0)
      .def_readwrite("lambda1", &SystemParams::lambda1)
      .def_readwrite("lambda2", &SystemParams::lambda2)
      .def_readwrite("mu1", &SystemParams::mu1)
      .def_readwrite("mu2", &SystemParams::mu2)
      .def_readwrite("c1", &SystemParams::c1)
      .def_readwrite("c2", &SystemParams::c2)
      .def_readwrite("p1", &SystemParams::p1)
      .def_readwrite("p2", &SystemParams::p2)
      .def("swapped", &SystemParams::swapped)
      .def("validate", &SystemParams::validate)
      .def("__repr__", &SystemParams::describe);

  py::class_<Regime>(m, "Regime")
      .def_property_readonly("tag", [](const Regime& r) { return std::string(to_string(r.tag)); })
      .def_readonly("margin", &Regime::margin)
      .def("saturated", &Regime::saturated);

  py::class_<StationarySolution>(m, "StationarySolution")
      .def_readonly("pi00", &StationarySolution::pi00)
      .def_readonly("P01", &StationarySolution::P01)
      .def_readonly("P10", &StationarySolution::P10)
      .def_readonly("phiY1", &StationarySolution::phiY1)
      .def_readonly("beta1", &StationarySolution::beta1)
      .def_readonly("beta2", &StationarySolution::beta2)
      .def_readonly("regime", &StationarySolution::regime)
      .def_property_readonly("method", [](const StationarySolution& s) { return std::string(to_string(s.method)); });

  m.def("regime", &regime, py::arg("params"), py::arg("eps") = kRegimeEps);
  m.def("blocking", &analytic::blocking, py::arg("params"), py::arg("tol_quad") = analytic::kDefaultQuadTol,
        "Limiting blocking probabilities from the explicit solution");
  m.def("pi00", &analytic::pi00, py::arg("params"), py::arg("tol_quad") = analytic::kDefaultQuadTol);
  m.def("phi_Y", &analytic::phi_Y, py::arg("y"), py::arg("params"), py::arg("tol_quad") = analytic::kDefaultQuadTol);
  m.def(
      "branch_points",
      [](const SystemParams& p) {
        const auto b = kernel::branch_points(p);
        return py::make_tuple(std::vector<double>(b.x.begin(), b.x.end()), std::vector<double>(b.y.begin(), b.y.end()));
      },
      py::arg("params"), "(x1..x4, y1..y4)");

  m.def(
      "oracle",
      [](const SystemParams& p, int M, double tol) {
        rw::TruncationOptions opts;
        opts.M = M;
        opts.tol = tol;
        return rw::oracle_solution(p, opts);
      },
      py::arg("params"), py::arg("M") = 160, py::arg("tol") = 1e-6, py::call_guard<py::gil_scoped_release>(),
      "Blocking probabilities from the truncated stationary solve of the limiting walk");

  py::class_<sim::FiniteBlocking>(m, "FiniteBlocking")
      .def_readonly("beta1", &sim::FiniteBlocking::beta1)
      .def_readonly("beta2", &sim::FiniteBlocking::beta2)
      .def_readonly("prob_full1", &sim::FiniteBlocking::prob_full1)
      .def_readonly("prob_full2", &sim::FiniteBlocking::prob_full2)
      .def_readonly("prob_both", &sim::FiniteBlocking::prob_both);

  py::class_<sim::SimEstimate>(m, "SimEstimate")
      .def_readonly("beta1_hat", &sim::SimEstimate::beta1_hat)
      .def_readonly("beta2_hat", &sim::SimEstimate::beta2_hat)
      .def_readonly("half_width1", &sim::SimEstimate::half_width1)
      .def_readonly("half_width2", &sim::SimEstimate::half_width2)
      .def_readonly("arrivals1", &sim::SimEstimate::arrivals1)
      .def_readonly("arrivals2", &sim::SimEstimate::arrivals2)
      .def_readonly("losses1", &sim::SimEstimate::losses1)
      .def_readonly("losses2", &sim::SimEstimate::losses2)
      .def_readonly("mean_L1", &sim::SimEstimate::mean_L1)
      .def_readonly("mean_L2", &sim::SimEstimate::mean_L2)
      .def_readonly("seed", &sim::SimEstimate::seed);

  m.def(
      "exact_finite",
      [](const SystemParams& p, int N) { return sim::exact_finite(sim::FiniteSystem::scaled(p, N)); },
      py::arg("params"), py::arg("N"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "simulate",
      [](const SystemParams& p, int N, double horizon, std::optional<double> warmup, std::uint64_t seed) {
        return sim::simulate_two(sim::FiniteSystem::scaled(p, N), horizon,
                                 warmup ? *warmup : sim::default_warmup(horizon), seed);
      },
      py::arg("params"), py::arg("N"), py::arg("horizon"), py::arg("warmup") = py::none(), py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>());
  m.def("erlang_b", &sim::erlang_b, py::arg("servers"), py::arg("offered"));

  py::class_<ring::Node>(m, "Node")
      .def(py::init([](double lambda, double mu, double c, double p) { return ring::Node{lambda, mu, c, p}; }),
           py::arg("lam"), py::arg("mu"), py::arg("c"), py::arg("p"))
      .def_readwrite("lam", &ring::Node::lambda)
      .def_readwrite("mu", &ring::Node::mu)
      .def_readwrite("c", &ring::Node::c)
      .def_readwrite("p", &ring::Node::p);

  auto to_ring = [](const std::vector<ring::Node>& nodes) { return ring::RingParams{nodes}; };
  m.def(
      "classify_ring",
      [to_ring](const std::vector<ring::Node>& nodes) {
        const auto c = ring::classify_ring(to_ring(nodes));
        return py::make_tuple(std::string(ring::to_string(c.tag)), c.j0(), c.reason);
      },
      py::arg("nodes"), "(case tag, first congested node or -1, reason)");
  m.def(
      "ring_blocking", [to_ring](const std::vector<ring::Node>& nodes) { return ring::ring_blocking(to_ring(nodes)).beta; },
      py::arg("nodes"));
  m.def(
      "simulate_ring",
      [to_ring](const std::vector<ring::Node>& nodes, int N, double horizon, std::optional<double> warmup,
                std::uint64_t seed) {
        std::vector<std::pair<double, double>> out;
        for (const auto& e : sim::simulate_ring(to_ring(nodes), N, horizon,
                                                warmup ? *warmup : sim::default_warmup(horizon), seed)) {
          out.emplace_back(e.beta_hat, e.half_width);
        }
        return out;
      },
      py::arg("nodes"), py::arg("N"), py::arg("horizon"), py::arg("warmup") = py::none(), py::arg("seed") = 1,
      py::call_guard<py::gil_scoped_release>(), "[(beta_hat, half_width)] per node");

  m.def(
      "run_config",
      [](const std::string& text, bool wide) {
        const cli::RunConfig cfg = cli::parse_config(text);
        std::ostringstream out;
        py::gil_scoped_release release;
        if (cfg.mode == cli::Mode::ring) {
          cli::write_ring(cfg, out);
        } else if (wide) {
          cli::write_wide(cli::run_sweep(cfg), out);
        } else {
          cli::write_long(cli::run_sweep(cfg), out);
        }
        return out.str();
      },
      py::arg("text"), py::arg("wide") = false, "Runs a configuration and returns the TSV table");
  m.def(
      "figure_table",
      [](const std::string& name, bool wide) {
        std::ostringstream out;
        const auto t = cli::emit_figure_presets(name);
        if (wide) {
          cli::write_wide(t, out);
        } else {
          cli::write_long(t, out);
        }
        return out.str();
      },
      py::arg("name"), py::arg("wide") = false);
}
