// Python bindings for the core library: geometry primitives, diameter
// graphs and audits, intersection bodies, randomized verifiers, the
// extremal search, and the CLI front end for deterministic reports.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "schurlab/cli.hpp"
#include "schurlab/diameter_graph.hpp"
#include "schurlab/extremal_search.hpp"
#include "schurlab/geom.hpp"
#include "schurlab/lemma_lab.hpp"
#include "schurlab/pointset_io.hpp"
#include "schurlab/rand.hpp"
#include "schurlab/reuleaux.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace schurlab;

PYBIND11_MODULE(schurlab, m) {
  m.doc() =
      "verification laboratory for diameter graphs and unit-ball "
      "intersection bodies";
  m.attr("__version__") = cli::kVersion;

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DegeneracyError>(m, "DegeneracyError",
                                          PyExc_ArithmeticError);

  //--------------------------------------------------------------------------
  // core geometry
  //--------------------------------------------------------------------------

  py::class_<Tolerance>(m, "Tolerance")
      .def(py::init<>())
      .def_readwrite("eq_tol", &Tolerance::eq_tol)
      .def_readwrite("geom_tol", &Tolerance::geom_tol);

  py::class_<Space>(m, "Space")
      .def_static("euclidean", &Space::euclidean, py::arg("dim"))
      .def_static("sphere", &Space::sphere, py::arg("dim"), py::arg("radius"))
      .def_readonly("dim", &Space::dim)
      .def_readonly("radius", &Space::radius)
      .def("is_sphere", &Space::is_sphere)
      .def("ambient_dim", &Space::ambient_dim);

  py::class_<PointConfig>(m, "PointConfig")
      .def(py::init<>())
      .def(py::init([](const Space& space, std::vector<Vec> points) {
             PointConfig c;
             c.space = space;
             c.points = std::move(points);
             return c;
           }),
           py::arg("space"), py::arg("points"))
      .def_readwrite("space", &PointConfig::space)
      .def_readwrite("points", &PointConfig::points)
      .def("n", &PointConfig::n);

  py::class_<Ball>(m, "Ball")
      .def_readonly("center", &Ball::center)
      .def_readonly("radius", &Ball::radius);

  m.def("regular_unit_simplex", &regular_unit_simplex, py::arg("dim"),
        py::arg("k"));
  m.def("diameter",
        [](const PointConfig& config) { return diameter(config); },
        py::arg("config"));
  m.def("centroid",
        [](const std::vector<Vec>& points) { return centroid(points); },
        py::arg("points"));
  m.def("circumscribed_ball", &circumscribed_ball, py::arg("config"),
        py::arg("tol") = Tolerance{});
  m.def("min_enclosing_ball",
        [](const std::vector<Vec>& points) {
          return min_enclosing_ball(points);
        },
        py::arg("points"));
  m.def("mix_seed", &mix_seed, py::arg("master"), py::arg("stream"));

  m.def("read_config", &read_config, py::arg("path"),
        py::arg("tol") = Tolerance{});
  m.def("write_config", &write_config, py::arg("config"), py::arg("path"));

  //--------------------------------------------------------------------------
  // diameter graphs and audits
  //--------------------------------------------------------------------------

  py::class_<DiameterGraph>(m, "DiameterGraph")
      .def_readonly("config", &DiameterGraph::config)
      .def("n", &DiameterGraph::n)
      .def("edge", &DiameterGraph::edge, py::arg("i"), py::arg("j"))
      .def("edge_count", &DiameterGraph::edge_count);

  m.def("build_diameter_graph", &build_diameter_graph, py::arg("config"),
        py::arg("tol") = Tolerance{});

  py::class_<CliqueReport>(m, "CliqueReport")
      .def_readonly("l", &CliqueReport::l)
      .def_readonly("count", &CliqueReport::count)
      .def_readonly("cliques", &CliqueReport::cliques)
      .def_readonly("pairwise_shared", &CliqueReport::pairwise_shared);

  m.def("count_cliques", &count_cliques, py::arg("graph"), py::arg("l"));
  m.def("brute_force_cliques", &brute_force_cliques, py::arg("graph"),
        py::arg("l"));

  py::class_<AuditReport>(m, "AuditReport")
      .def_readonly("n", &AuditReport::n)
      .def_readonly("dim", &AuditReport::dim)
      .def_readonly("clique_count", &AuditReport::clique_count)
      .def_readonly("count_bound_holds", &AuditReport::count_bound_holds)
      .def_readonly("min_pairwise_intersection",
                    &AuditReport::min_pairwise_intersection)
      .def_readonly("intersection_bound_holds",
                    &AuditReport::intersection_bound_holds)
      .def_readonly("min_edge_dist", &AuditReport::min_edge_dist)
      .def_readonly("max_nonedge_dist", &AuditReport::max_nonedge_dist)
      .def_readonly("geodesic_residual", &AuditReport::geodesic_residual)
      .def_readonly("out_of_scope", &AuditReport::out_of_scope)
      .def_readonly("violation", &AuditReport::violation);

  m.def("schur_audit", &schur_audit, py::arg("config"),
        py::arg("tol") = Tolerance{});

  //--------------------------------------------------------------------------
  // intersection bodies
  //--------------------------------------------------------------------------

  py::class_<ReuleauxBody>(m, "ReuleauxBody")
      .def_static("simplex", &ReuleauxBody::simplex, py::arg("vertices"),
                  py::arg("tol") = Tolerance{})
      .def_static("rugby_ball", &ReuleauxBody::rugby_ball,
                  py::arg("vertices"), py::arg("tol") = Tolerance{})
      .def_readonly("vertices", &ReuleauxBody::vertices)
      .def("dim", &ReuleauxBody::dim)
      .def("spherical", &ReuleauxBody::spherical)
      .def("n_vertices", &ReuleauxBody::n_vertices)
      .def("margin", &ReuleauxBody::margin, py::arg("point"))
      .def("contains", &ReuleauxBody::contains, py::arg("point"));

  m.def("arc_midpoint", &arc_midpoint, py::arg("body"), py::arg("i"),
        py::arg("j"));
  m.def("sample_body",
        [](const ReuleauxBody& body, long n, uint64_t seed) {
          return sample_body(body, n, seed);
        },
        py::arg("body"), py::arg("n"), py::arg("seed"));
  m.def("sample_face", &sample_face, py::arg("body"), py::arg("subset"),
        py::arg("n"), py::arg("seed"));

  py::class_<RedBlue>(m, "RedBlue")
      .def_readonly("red", &RedBlue::red)
      .def_readonly("blue", &RedBlue::blue)
      .def_readonly("delta", &RedBlue::delta)
      .def_readonly("min_blue_blue", &RedBlue::min_blue_blue)
      .def_readonly("max_red_blue", &RedBlue::max_red_blue)
      .def_readonly("min_margin", &RedBlue::min_margin);

  m.def("red_blue_construction", &red_blue_construction, py::arg("dim"),
        py::arg("delta") = 1e-3);
  m.def("red_blue_max_delta", &red_blue_max_delta, py::arg("dim"));

  //--------------------------------------------------------------------------
  // randomized verifiers
  //--------------------------------------------------------------------------

  py::class_<LemmaReport>(m, "LemmaReport")
      .def_readonly("id", &LemmaReport::id)
      .def_readonly("trials", &LemmaReport::trials)
      .def_readonly("violations", &LemmaReport::violations)
      .def_readonly("equality_cases", &LemmaReport::equality_cases)
      .def_readonly("worst_margin", &LemmaReport::worst_margin)
      .def_property_readonly(
          "witness", [](const LemmaReport& r) -> std::optional<std::string> {
            if (!r.witness) return std::nullopt;
            return r.witness->dump();
          });

  py::class_<SphereCut>(m, "SphereCut")
      .def_readonly("axis_offset", &SphereCut::axis_offset)
      .def_readonly("cut_offset", &SphereCut::cut_offset)
      .def_readonly("radius", &SphereCut::radius);

  m.def("sphere_cut_closed_form", &sphere_cut_closed_form, py::arg("r"),
        py::arg("k"));
  m.def("verify_sphere_cut", &verify_sphere_cut, py::arg("r"), py::arg("k"),
        py::arg("dim"), py::arg("trials"), py::arg("seed"));
  m.def("verify_half_body_diameter", &verify_half_body_diameter,
        py::arg("dim"), py::arg("trials"), py::arg("seed"));
  m.def("verify_vertex_farthest", &verify_vertex_farthest, py::arg("dim"),
        py::arg("trials"), py::arg("seed"));
  m.def("verify_boundary_farthest", &verify_boundary_farthest,
        py::arg("euclidean"), py::arg("trials"), py::arg("seed"));
  m.def("verify_rotation", &verify_rotation, py::arg("dim"),
        py::arg("trials"), py::arg("seed"));
  m.def("verify_observations", &verify_observations, py::arg("trials"),
        py::arg("seed"));

  //--------------------------------------------------------------------------
  // extremal search
  //--------------------------------------------------------------------------

  py::class_<TraceEntry>(m, "TraceEntry")
      .def_readonly("iteration", &TraceEntry::iteration)
      .def_readonly("count", &TraceEntry::count)
      .def_readonly("slack", &TraceEntry::slack);

  py::class_<SearchProblem>(m, "SearchProblem")
      .def(py::init<>())
      .def_readwrite("space", &SearchProblem::space)
      .def_readwrite("n", &SearchProblem::n)
      .def_readwrite("l", &SearchProblem::l)
      .def_readwrite("budget", &SearchProblem::budget)
      .def_readwrite("restarts", &SearchProblem::restarts)
      .def_readwrite("seed", &SearchProblem::seed)
      .def_readwrite("sigma_hi", &SearchProblem::sigma_hi)
      .def_readwrite("sigma_lo", &SearchProblem::sigma_lo)
      .def_readwrite("tol", &SearchProblem::tol);

  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("best", &SearchResult::best)
      .def_readonly("count", &SearchResult::count)
      .def_readonly("best_slack", &SearchResult::best_slack)
      .def_readonly("trace", &SearchResult::trace)
      .def_readonly("diagnostic", &SearchResult::diagnostic);

  m.def("search", &search, py::arg("problem"),
        py::call_guard<py::gil_scoped_release>());
  m.def("reuleaux_polygon", &reuleaux_polygon, py::arg("n"));
  m.def("counterexample_hunt", &counterexample_hunt, py::arg("dim"),
        py::arg("budget"), py::arg("seed"), py::arg("second_size") = 0,
        py::call_guard<py::gil_scoped_release>());

  //--------------------------------------------------------------------------
  // CLI front end (in-process, for deterministic report scripting)
  //--------------------------------------------------------------------------

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"),
      "run a CLI invocation in process; returns (exit_code, stdout, stderr)");
}
