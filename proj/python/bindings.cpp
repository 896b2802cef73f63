#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sweepot/grid_io.hpp"
#include "sweepot/harness.hpp"

namespace py = pybind11;
using namespace sweepot;

namespace {

// Exceptions cross the boundary as ValueError with the code prefix intact.
void translate_error(const Error& e) { PyErr_SetString(PyExc_ValueError, e.what()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sweep planning for granular material via exact optimal transport";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      translate_error(e);
    }
  });

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Vec2{x, y}; }))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y)
      .def("__repr__", [](const Vec2& v) {
        std::ostringstream out;
        out << "Vec2(" << v.x << ", " << v.y << ")";
        return out.str();
      });

  py::class_<GridGeometry>(m, "GridGeometry")
      .def(py::init<>())
      .def_readwrite("width_cells", &GridGeometry::width_cells)
      .def_readwrite("height_cells", &GridGeometry::height_cells)
      .def_readwrite("cell_size", &GridGeometry::cell_size)
      .def_readwrite("origin", &GridGeometry::origin)
      .def("num_cells", &GridGeometry::num_cells)
      .def("cell_center", py::overload_cast<int>(&GridGeometry::cell_center, py::const_))
      .def("workspace_center", &GridGeometry::workspace_center);

  py::class_<HeightMap>(m, "HeightMap")
      .def(py::init<>())
      .def_static("zeros", &HeightMap::zeros)
      .def_readwrite("geometry", &HeightMap::geometry)
      .def_readwrite("heights", &HeightMap::heights)
      .def("total_mass", &HeightMap::total_mass)
      .def("max_height", &HeightMap::max_height);

  py::class_<NormalizedDistribution>(m, "NormalizedDistribution")
      .def_readwrite("geometry", &NormalizedDistribution::geometry)
      .def_readwrite("weights", &NormalizedDistribution::weights);

  m.def("normalize", &normalize);
  m.def("load_grid", py::overload_cast<const std::string&>(&load_grid));
  m.def("save_grid", py::overload_cast<const HeightMap&, const std::string&>(&save_grid));

  py::enum_<SourceKind>(m, "SourceKind")
      .value("ONE_BLOB", SourceKind::OneBlob)
      .value("TWO_BLOBS", SourceKind::TwoBlobs)
      .value("FOUR_BLOBS", SourceKind::FourBlobs)
      .value("GAUSSIAN", SourceKind::Gaussian)
      .value("UNIFORM", SourceKind::Uniform);
  m.def("generate_source", &generate_source, py::arg("kind"), py::arg("geometry"),
        py::arg("total_mass"), py::arg("seed"));
  m.def("generate_target_gather", &generate_target_gather, py::arg("geometry"),
        py::arg("total_mass"), py::arg("center"), py::arg("radius"));
  m.def("generate_target_sep", &generate_target_sep, py::arg("geometry"), py::arg("total_mass"),
        py::arg("centers"), py::arg("radius"));
  m.def("generate_target_letter", &generate_target_letter, py::arg("geometry"),
        py::arg("total_mass"), py::arg("glyph"));

  py::class_<PlanEntry>(m, "PlanEntry")
      .def_readonly("source_index", &PlanEntry::source_index)
      .def_readonly("target_index", &PlanEntry::target_index)
      .def_readonly("mass", &PlanEntry::mass);

  py::class_<TransportPlan>(m, "TransportPlan")
      .def_readonly("entries", &TransportPlan::entries)
      .def_readonly("cost", &TransportPlan::cost);

  py::class_<GroundCost>(m, "GroundCost").def("at", &GroundCost::at);
  m.def("ground_cost", &ground_cost, py::arg("source"), py::arg("target"), py::arg("p") = 1.0);
  m.def("solve_ot", &solve_ot);
  m.def("emd", &emd, py::arg("source"), py::arg("target"), py::arg("p") = 1.0);

  py::class_<SweepAction>(m, "SweepAction")
      .def(py::init([](Vec2 start, Vec2 end, double width) {
             return SweepAction{start, end, width};
           }),
           py::arg("start"), py::arg("end"), py::arg("spatula_width") = 0.07)
      .def_readwrite("start", &SweepAction::start)
      .def_readwrite("end", &SweepAction::end)
      .def_readwrite("spatula_width", &SweepAction::spatula_width)
      .def("length", &SweepAction::length);

  py::class_<PlannerConfig>(m, "PlannerConfig")
      .def(py::init<>())
      .def_readwrite("alpha_plus", &PlannerConfig::alpha_plus)
      .def_readwrite("alpha_minus", &PlannerConfig::alpha_minus)
      .def_readwrite("num_samples", &PlannerConfig::num_samples)
      .def_readwrite("delta_refine", &PlannerConfig::delta_refine)
      .def_readwrite("delta_min", &PlannerConfig::delta_min)
      .def_readwrite("spatula_width", &PlannerConfig::spatula_width)
      .def_readwrite("convergence_emd", &PlannerConfig::convergence_emd)
      .def_readwrite("seed", &PlannerConfig::seed);

  m.def(
      "next_best_sweep",
      [](const HeightMap& source, const HeightMap& target, const PlannerConfig& cfg,
         std::uint64_t seed) -> std::optional<SweepAction> {
        Rng rng(seed);
        return next_best_sweep(source, target, cfg, rng);
      },
      py::arg("source"), py::arg("target"), py::arg("config") = PlannerConfig{},
      py::arg("seed") = 0);
  m.def(
      "baseline_max_ot",
      [](const HeightMap& source, const HeightMap& target, const PlannerConfig& cfg) {
        return baseline_max_ot(source, target, cfg);
      },
      py::arg("source"), py::arg("target"), py::arg("config") = PlannerConfig{});
  m.def(
      "baseline_diff_map",
      [](const HeightMap& source, const HeightMap& target, const PlannerConfig& cfg,
         std::uint64_t seed) {
        Rng rng(seed);
        return baseline_diff_map(source, target, cfg, rng);
      },
      py::arg("source"), py::arg("target"), py::arg("config") = PlannerConfig{},
      py::arg("seed") = 0);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("pickup_fraction", &SimConfig::pickup_fraction)
      .def_readwrite("trail_fraction", &SimConfig::trail_fraction)
      .def_readwrite("deposit_spread_cells", &SimConfig::deposit_spread_cells)
      .def_readwrite("repose_ratio", &SimConfig::repose_ratio)
      .def_readwrite("relax_iterations", &SimConfig::relax_iterations)
      .def_readwrite("noise_std", &SimConfig::noise_std)
      .def_readwrite("seed", &SimConfig::seed);

  m.def(
      "apply_sweep",
      [](const HeightMap& map, const SweepAction& action, const SimConfig& cfg) {
        const SweepOutcome outcome = apply_sweep(map, action, cfg);
        return py::make_tuple(outcome.map, outcome.degenerate);
      },
      py::arg("map"), py::arg("action"), py::arg("config") = SimConfig{});
  m.def("repose_relax", &repose_relax, py::arg("map"), py::arg("config") = SimConfig{});

  m.def("iou", &iou, py::arg("current"), py::arg("target"), py::arg("occupancy_threshold"));
  m.def("default_iou_threshold", &default_iou_threshold);

  py::enum_<TaskKind>(m, "TaskKind")
      .value("GATHER", TaskKind::Gather)
      .value("SEP_N", TaskKind::SepN)
      .value("LETTER", TaskKind::Letter);
  py::enum_<Method>(m, "Method")
      .value("OURS", Method::Ours)
      .value("MAX_OT", Method::MaxOt)
      .value("DIFF_MAP", Method::DiffMap);

  py::class_<TaskSpec>(m, "TaskSpec")
      .def(py::init<>())
      .def_readwrite("task", &TaskSpec::task)
      .def_readwrite("source", &TaskSpec::source)
      .def_readwrite("method", &TaskSpec::method)
      .def_readwrite("geometry", &TaskSpec::geometry)
      .def_readwrite("total_mass", &TaskSpec::total_mass)
      .def_readwrite("iterations", &TaskSpec::iterations)
      .def_readwrite("seed", &TaskSpec::seed)
      .def_readwrite("planner", &TaskSpec::planner)
      .def_readwrite("sim", &TaskSpec::sim)
      .def_readwrite("gather_radius", &TaskSpec::gather_radius)
      .def_readwrite("sep_count", &TaskSpec::sep_count)
      .def_readwrite("sep_radius", &TaskSpec::sep_radius)
      .def_readwrite("letter", &TaskSpec::letter);

  py::class_<MetricRecord>(m, "MetricRecord")
      .def_readonly("iteration", &MetricRecord::iteration)
      .def_readonly("emd_m", &MetricRecord::emd_m)
      .def_readonly("iou", &MetricRecord::iou);
  py::class_<MetricSeries>(m, "MetricSeries")
      .def_readonly("episode_id", &MetricSeries::episode_id)
      .def_readonly("records", &MetricSeries::records);

  py::class_<EpisodeRecord>(m, "EpisodeRecord")
      .def_readonly("source_map", &EpisodeRecord::source_map)
      .def_readonly("target_map", &EpisodeRecord::target_map)
      .def_readonly("final_map", &EpisodeRecord::final_map)
      .def_readonly("metrics", &EpisodeRecord::metrics)
      .def_readonly("actions_taken", &EpisodeRecord::actions_taken)
      .def_readonly("converged", &EpisodeRecord::converged);

  m.def("run_episode", &run_episode, py::arg("spec"), py::arg("keep_steps") = false);
}
