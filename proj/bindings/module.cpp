#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "oeq/decomposition.hpp"
#include "oeq/equation.hpp"
#include "oeq/generators.hpp"
#include "oeq/io.hpp"
#include "oeq/linalg.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

using oeq::Index;
using oeq::Mat;
using oeq::Vec;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-dimensional toolkit for the orthogonality equation";

  py::register_exception<oeq::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<oeq::FileFormatError>(m, "FileFormatError", PyExc_ValueError);
  py::register_exception<oeq::NotLinearError>(m, "NotLinearError", PyExc_ValueError);
  py::register_exception<oeq::NotHilbertError>(m, "NotHilbertError", PyExc_ValueError);
  static py::exception<oeq::ExtractError> extract_error(m, "ExtractError",
                                                        PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const oeq::ExtractError& err) {
      const std::string msg =
          std::string("[") + oeq::to_string(err.stage()) + "] " + err.what();
      py::set_error(extract_error, msg.c_str());
    }
  });

  m.attr("RANK_TOL") = oeq::kRankTol;
  m.attr("ORTHO_TOL") = oeq::kOrthoTol;
  m.attr("CONDITION_LIMIT") = oeq::kConditionLimit;
  m.attr("DEFAULT_TOL") = oeq::kDefaultTol;
  m.attr("CERT_TOL") = oeq::kCertTol;
  m.attr("LOOKUP_TOL") = oeq::kLookupTol;

  py::class_<oeq::RankReport>(m, "RankReport")
      .def_readonly("rank", &oeq::RankReport::rank)
      .def_readonly("singular_values", &oeq::RankReport::singular_values)
      .def_readonly("tolerance_used", &oeq::RankReport::tolerance_used);
  m.def("rank_report", &oeq::rank_report, "mat"_a, "rel_tol"_a = oeq::kRankTol);

  py::class_<oeq::Pairing>(m, "Pairing")
      .def(py::init<Mat, double>(), "gram"_a, "rel_tol"_a = oeq::kRankTol)
      .def_static("standard", &oeq::Pairing::standard, "dim"_a)
      .def_property_readonly("dim", &oeq::Pairing::dim)
      .def_property_readonly("gram", &oeq::Pairing::gram)
      .def("evaluate", &oeq::Pairing::evaluate, "x"_a, "alpha"_a)
      .def("transposed", &oeq::Pairing::transposed)
      .def("__repr__", [](const oeq::Pairing& p) {
        return "Pairing(dim=" + std::to_string(p.dim()) + ")";
      });

  py::class_<oeq::Subspace>(m, "Subspace")
      .def(py::init<Index, Mat>(), "ambient_dim"_a, "basis"_a)
      .def_static("zero", &oeq::Subspace::zero, "ambient_dim"_a)
      .def_static("full", &oeq::Subspace::full, "ambient_dim"_a)
      .def_property_readonly("ambient_dim", &oeq::Subspace::ambient_dim)
      .def_property_readonly("rank", &oeq::Subspace::rank)
      .def_property_readonly("basis", &oeq::Subspace::basis)
      .def("project", &oeq::Subspace::project, "v"_a)
      .def("distance", &oeq::Subspace::distance, "v"_a)
      .def("contains",
           py::overload_cast<const Vec&, double>(&oeq::Subspace::contains, py::const_),
           "v"_a, "tol"_a)
      .def("contains",
           py::overload_cast<const oeq::Subspace&, double>(&oeq::Subspace::contains,
                                                           py::const_),
           "other"_a, "tol"_a)
      .def("__repr__", [](const oeq::Subspace& s) {
        return "Subspace(ambient_dim=" + std::to_string(s.ambient_dim()) +
               ", rank=" + std::to_string(s.rank()) + ")";
      });
  m.def("same_span", &oeq::same_span, "a"_a, "b"_a, "tol"_a);

  py::class_<oeq::LinearOperator>(m, "LinearOperator")
      .def(py::init<Mat, oeq::Pairing, oeq::Pairing>(), "matrix"_a,
           "domain_pairing"_a, "codomain_pairing"_a)
      .def_static("plain", &oeq::LinearOperator::plain, "matrix"_a)
      .def_property_readonly("matrix", &oeq::LinearOperator::matrix)
      .def_property_readonly("domain_dim", &oeq::LinearOperator::domain_dim)
      .def_property_readonly("codomain_dim", &oeq::LinearOperator::codomain_dim)
      .def_property_readonly("domain_pairing", &oeq::LinearOperator::domain_pairing)
      .def_property_readonly("codomain_pairing", &oeq::LinearOperator::codomain_pairing)
      .def("apply", &oeq::LinearOperator::apply, "x"_a)
      .def("__call__", &oeq::LinearOperator::apply, "x"_a);

  m.def("orthonormal_span",
        py::overload_cast<Index, const Mat&, double>(&oeq::orthonormal_span),
        "ambient_dim"_a, "columns"_a, "rel_tol"_a = oeq::kRankTol);
  m.def("annihilator", &oeq::annihilator, "span"_a, "pairing"_a, "of_dual"_a = false);
  m.def("adjoint", &oeq::adjoint, "op"_a);

  py::class_<oeq::QuotientProjection>(m, "QuotientProjection")
      .def_readonly("representatives", &oeq::QuotientProjection::representatives)
      .def_readonly("map", &oeq::QuotientProjection::map);
  m.def("quotient_projection", &oeq::quotient_projection, "span"_a, "degenerate"_a);

  m.def("operator_norm", py::overload_cast<const Mat&>(&oeq::operator_norm), "mat"_a);
  m.def("operator_norm",
        py::overload_cast<const oeq::LinearOperator&>(&oeq::operator_norm), "op"_a);
  m.def("condition_number", py::overload_cast<const Mat&>(&oeq::condition_number),
        "mat"_a);
  m.def("condition_number",
        py::overload_cast<const oeq::LinearOperator&>(&oeq::condition_number), "op"_a);
  m.def("is_invertible", &oeq::is_invertible, "op"_a);

  py::class_<oeq::Sample>(m, "Sample")
      .def(py::init([](Vec in, Vec out) {
             return oeq::Sample{std::move(in), std::move(out)};
           }),
           "in_"_a, "out"_a)
      .def_readonly("in_", &oeq::Sample::in)
      .def_readonly("out", &oeq::Sample::out);

  py::class_<oeq::PointMap>(m, "PointMap")
      .def(py::init<Index, Index, std::vector<oeq::Sample>>(), "domain_dim"_a,
           "codomain_dim"_a, "samples"_a)
      .def(py::init([](Index domain_dim, Index codomain_dim,
                       const std::vector<std::pair<Vec, Vec>>& pairs) {
             std::vector<oeq::Sample> samples;
             samples.reserve(pairs.size());
             for (const auto& [in, out] : pairs) samples.push_back(oeq::Sample{in, out});
             return oeq::PointMap(domain_dim, codomain_dim, std::move(samples));
           }),
           "domain_dim"_a, "codomain_dim"_a, "pairs"_a)
      .def_property_readonly("domain_dim", &oeq::PointMap::domain_dim)
      .def_property_readonly("codomain_dim", &oeq::PointMap::codomain_dim)
      .def_property_readonly("samples", &oeq::PointMap::samples)
      .def("__len__", &oeq::PointMap::size)
      .def("inputs", &oeq::PointMap::inputs)
      .def("outputs", &oeq::PointMap::outputs)
      .def("lookup", &oeq::PointMap::lookup, "key"_a, "tol"_a = oeq::kLookupTol);

  py::class_<oeq::Instance>(m, "Instance")
      .def(py::init<oeq::Pairing, oeq::Pairing, oeq::PointMap, oeq::PointMap>(),
           "e_pairing"_a, "f_pairing"_a, "f_map"_a, "g_map"_a)
      .def_readonly("e_pairing", &oeq::Instance::e_pairing)
      .def_readonly("f_pairing", &oeq::Instance::f_pairing)
      .def_readonly("f_map", &oeq::Instance::f_map)
      .def_readonly("g_map", &oeq::Instance::g_map)
      .def_property_readonly("domain_dim", &oeq::Instance::domain_dim)
      .def_property_readonly("codomain_dim", &oeq::Instance::codomain_dim);

  py::class_<oeq::ResidualReport>(m, "ResidualReport")
      .def_readonly("max_abs_residual", &oeq::ResidualReport::max_abs_residual)
      .def_readonly("worst_f_index", &oeq::ResidualReport::worst_f_index)
      .def_readonly("worst_g_index", &oeq::ResidualReport::worst_g_index)
      .def_readonly("pair_count", &oeq::ResidualReport::pair_count);
  m.def("residual", &oeq::residual, "instance"_a);
  m.def("pairing_scale", &oeq::pairing_scale, "instance"_a);
  m.def("fit_linear", &oeq::fit_linear, "samples"_a, "rel_tol"_a);

  py::class_<oeq::Decomposition>(m, "Decomposition")
      .def(py::init([](oeq::Pairing e_pairing, oeq::Pairing f_pairing,
                       oeq::Subspace span, oeq::Subspace degenerate, const Mat& core,
                       oeq::PointMap projection_section,
                       oeq::PointMap restriction_section) {
             oeq::LinearOperator core_op(core, e_pairing,
                                         oeq::Pairing::standard(core.rows()));
             return oeq::Decomposition{std::move(e_pairing),
                                       std::move(f_pairing),
                                       std::move(span),
                                       std::move(degenerate),
                                       std::move(core_op),
                                       std::move(projection_section),
                                       std::move(restriction_section)};
           }),
           "e_pairing"_a, "f_pairing"_a, "span"_a, "degenerate"_a, "core"_a,
           "projection_section"_a, "restriction_section"_a)
      .def_readonly("e_pairing", &oeq::Decomposition::e_pairing)
      .def_readonly("f_pairing", &oeq::Decomposition::f_pairing)
      .def_readonly("span", &oeq::Decomposition::span)
      .def_readonly("degenerate", &oeq::Decomposition::degenerate)
      .def_readonly("core", &oeq::Decomposition::core)
      .def_readonly("projection_section", &oeq::Decomposition::projection_section)
      .def_readonly("restriction_section", &oeq::Decomposition::restriction_section)
      .def("validate",
           [](const oeq::Decomposition& dec) { oeq::validate(dec); });

  m.def("quotient_representatives", &oeq::quotient_representatives, "dec"_a);
  m.def("dual_key_matrix", &oeq::dual_key_matrix, "dec"_a);
  m.def("synthesize", &oeq::synthesize, "dec"_a, "x_grid"_a, "alpha_grid"_a);

  py::class_<oeq::VerificationReport>(m, "VerificationReport")
      .def_readonly("passed", &oeq::VerificationReport::passed)
      .def_readonly("scale", &oeq::VerificationReport::scale)
      .def_readonly("containment_residual",
                    &oeq::VerificationReport::containment_residual)
      .def_readonly("containment_ok", &oeq::VerificationReport::containment_ok)
      .def_readonly("core_condition", &oeq::VerificationReport::core_condition)
      .def_readonly("core_invertible", &oeq::VerificationReport::core_invertible)
      .def_readonly("projection_identity_residual",
                    &oeq::VerificationReport::projection_identity_residual)
      .def_readonly("projection_identity_ok",
                    &oeq::VerificationReport::projection_identity_ok)
      .def_readonly("restriction_identity_residual",
                    &oeq::VerificationReport::restriction_identity_residual)
      .def_readonly("restriction_identity_ok",
                    &oeq::VerificationReport::restriction_identity_ok)
      .def_readonly("forward_match_residual",
                    &oeq::VerificationReport::forward_match_residual)
      .def_readonly("forward_match_ok", &oeq::VerificationReport::forward_match_ok)
      .def_readonly("dual_match_residual",
                    &oeq::VerificationReport::dual_match_residual)
      .def_readonly("dual_match_ok", &oeq::VerificationReport::dual_match_ok)
      .def_readonly("equation_residual", &oeq::VerificationReport::equation_residual)
      .def_readonly("equation_ok", &oeq::VerificationReport::equation_ok);
  m.def("verify_decomposition", &oeq::verify_decomposition, "dec"_a, "instance"_a,
        "rel_tol"_a = oeq::kDefaultTol);

  py::class_<oeq::ExtractionDetail>(m, "ExtractionDetail")
      .def_readonly("decomposition", &oeq::ExtractionDetail::decomposition)
      .def_readonly("input_residual", &oeq::ExtractionDetail::input_residual)
      .def_readonly("scale", &oeq::ExtractionDetail::scale)
      .def_readonly("dual_fit", &oeq::ExtractionDetail::dual_fit)
      .def_readonly("quotient_dual_fit", &oeq::ExtractionDetail::quotient_dual_fit)
      .def_readonly("dual_fit_residual", &oeq::ExtractionDetail::dual_fit_residual)
      .def_readonly("quotient_fit_residual",
                    &oeq::ExtractionDetail::quotient_fit_residual)
      .def_readonly("identity_residual", &oeq::ExtractionDetail::identity_residual)
      .def_readonly("quotient_dual_norm", &oeq::ExtractionDetail::quotient_dual_norm);
  m.def("extract", &oeq::extract, "instance"_a, "rel_tol"_a = oeq::kDefaultTol);
  m.def("extract_detailed", &oeq::extract_detailed, "instance"_a,
        "rel_tol"_a = oeq::kDefaultTol);

  py::class_<oeq::HilbertDecomposition>(m, "HilbertDecomposition")
      .def_readonly("e_pairing", &oeq::HilbertDecomposition::e_pairing)
      .def_readonly("f_pairing", &oeq::HilbertDecomposition::f_pairing)
      .def_readonly("linear_range", &oeq::HilbertDecomposition::linear_range)
      .def_readonly("forward_defect", &oeq::HilbertDecomposition::forward_defect)
      .def_readonly("dual_defect", &oeq::HilbertDecomposition::dual_defect)
      .def_readonly("linear_part", &oeq::HilbertDecomposition::linear_part)
      .def_readonly("dual_linear_part", &oeq::HilbertDecomposition::dual_linear_part)
      .def_readonly("forward_offset", &oeq::HilbertDecomposition::forward_offset)
      .def_readonly("dual_offset", &oeq::HilbertDecomposition::dual_offset);
  m.def("hilbert_decompose", &oeq::hilbert_decompose, "instance"_a,
        "rel_tol"_a = oeq::kDefaultTol);

  py::class_<oeq::SplitMix64>(m, "SplitMix64")
      .def(py::init<std::uint64_t>(), "seed"_a)
      .def("next_u64", &oeq::SplitMix64::next_u64)
      .def("next_double", &oeq::SplitMix64::next_double)
      .def("next_uniform", &oeq::SplitMix64::next_uniform, "lo"_a, "hi"_a)
      .def("next_gaussian", &oeq::SplitMix64::next_gaussian);

  py::enum_<oeq::PairingMode>(m, "PairingMode")
      .value("STANDARD", oeq::PairingMode::kStandard)
      .value("RANDOM_SPD", oeq::PairingMode::kRandomSpd)
      .value("RANDOM_INVERTIBLE", oeq::PairingMode::kRandomInvertible);
  py::enum_<oeq::SectionMode>(m, "SectionMode")
      .value("ZERO", oeq::SectionMode::kZero)
      .value("POLYNOMIAL", oeq::SectionMode::kPolynomial)
      .value("TRIGONOMETRIC", oeq::SectionMode::kTrigonometric);

  py::class_<oeq::GenConfig>(m, "GenConfig")
      .def(py::init<>())
      .def_readwrite("domain_dim", &oeq::GenConfig::domain_dim)
      .def_readwrite("codomain_dim", &oeq::GenConfig::codomain_dim)
      .def_readwrite("span_rank", &oeq::GenConfig::span_rank)
      .def_readwrite("degenerate_rank", &oeq::GenConfig::degenerate_rank)
      .def_readwrite("pairing_mode", &oeq::GenConfig::pairing_mode)
      .def_readwrite("section_mode", &oeq::GenConfig::section_mode)
      .def_readwrite("seed", &oeq::GenConfig::seed)
      .def_readwrite("grid_size", &oeq::GenConfig::grid_size)
      .def("validate", [](const oeq::GenConfig& config) { oeq::validate(config); });

  py::class_<oeq::GeneratedCase>(m, "GeneratedCase")
      .def_readonly("decomposition", &oeq::GeneratedCase::decomposition)
      .def_readonly("x_grid", &oeq::GeneratedCase::x_grid)
      .def_readonly("alpha_grid", &oeq::GeneratedCase::alpha_grid);
  m.def("gen_case", &oeq::gen_case, "config"_a);
  m.def("gen_decomposition", &oeq::gen_decomposition, "config"_a);
  m.def("gen_instance", &oeq::gen_instance, "config"_a);

  m.def("instance_to_json", &oeq::instance_to_json, "instance"_a);
  m.def("instance_from_json", &oeq::instance_from_json, "text"_a);
  m.def("save_instance",
        [](const oeq::Instance& instance, const std::string& path) {
          oeq::save_instance(instance, path);
        },
        "instance"_a, "path"_a);
  m.def("load_instance",
        [](const std::string& path) { return oeq::load_instance(path); }, "path"_a);
  m.def("decomposition_to_json", &oeq::decomposition_to_json, "dec"_a);
  m.def("decomposition_from_json", &oeq::decomposition_from_json, "text"_a);
  m.def("save_decomposition",
        [](const oeq::Decomposition& dec, const std::string& path) {
          oeq::save_decomposition(dec, path);
        },
        "dec"_a, "path"_a);
  m.def("load_decomposition",
        [](const std::string& path) { return oeq::load_decomposition(path); },
        "path"_a);
}
