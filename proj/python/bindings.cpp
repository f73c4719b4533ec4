#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sdom/generators.hpp"
#include "sdom/io.hpp"
#include "sdom/oracle.hpp"
#include "sdom/sparse.hpp"
#include "sdom/weights.hpp"

namespace py = pybind11;
using namespace sdom;

namespace {

FunctionTuple to_ftuple(const std::vector<std::vector<double>>& f) { return FunctionTuple(f); }
WeightTuple to_weights(const std::vector<std::vector<double>>& w) { return WeightTuple(w); }

py::dict report_dict(const ValidationReport& r) {
  py::list violations;
  for (const auto& v : r.violations) {
    py::dict d;
    d["kind"] = v.kind;
    d["detail"] = v.detail;
    d["ids"] = v.ids;
    d["radius"] = v.radius;
    d["value"] = v.value;
    d["bound"] = v.bound;
    violations.append(d);
  }
  py::dict out;
  out["ok"] = r.ok();
  out["subject"] = r.subject;
  out["checked"] = r.checked;
  out["skipped"] = r.skipped;
  out["vacuous"] = r.vacuous;
  out["worst_ratio"] = r.worst_ratio;
  out["violations"] = violations;
  out["summary"] = r.summary();
  return out;
}

py::dict bound_dict(const BoundCheck& b) {
  py::dict d;
  d["lhs"] = b.lhs;
  d["rhs"] = b.rhs;
  d["ratio"] = b.ratio;
  d["slack"] = b.slack;
  d["c_omega"] = b.c_omega;
  d["regime"] = to_string(b.regime);
  d["ok"] = b.ok;
  return d;
}

}  // namespace

PYBIND11_MODULE(_sparsedom, m) {
  m.doc() = "Sparse domination and multilinear weights on finite metric measure spaces";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<InfeasibleConstants>(m, "InfeasibleConstants", base.ptr());
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());

  py::class_<MetricMeasureSpace>(m, "Space")
      .def(py::init([](std::vector<double> masses, std::vector<std::vector<double>> dist) {
             std::vector<double> flat;
             for (const auto& row : dist) {
               if (row.size() != masses.size()) throw InvalidInput("distance matrix must be square");
               flat.insert(flat.end(), row.begin(), row.end());
             }
             if (dist.size() != masses.size()) throw InvalidInput("distance matrix must be square");
             return MetricMeasureSpace(std::move(masses), std::move(flat));
           }),
           py::arg("masses"), py::arg("dist"))
      .def_static("from_coords", &MetricMeasureSpace::from_coords, py::arg("coords"), py::arg("masses"),
                  py::arg("max_points") = MetricMeasureSpace::kDefaultMaxPoints)
      .def_static("generate", &gen::make_space, py::arg("generator"), py::arg("n"), py::arg("seed") = 1)
      .def_static("load", [](const std::string& path) {
        std::istringstream is(io::read_file(path));
        return io::read_space(is);
      })
      .def("save", [](const MetricMeasureSpace& s, const std::string& path) { io::write_file(path, io::space_text(s)); })
      .def_property_readonly("size", &MetricMeasureSpace::size)
      .def_property_readonly("masses", &MetricMeasureSpace::masses)
      .def_property_readonly("support", &MetricMeasureSpace::support)
      .def_property_readonly("diameter", &MetricMeasureSpace::diameter)
      .def_property_readonly("total_mass", &MetricMeasureSpace::total_mass)
      .def("dist", &MetricMeasureSpace::dist)
      .def("ball_points", [](const MetricMeasureSpace& s, PointId c, double r) { return s.ball_points({c, r}); })
      .def("measure", [](const MetricMeasureSpace& s, const PointSet& pts) { return s.measure(pts); })
      .def("breakpoint_radii", py::overload_cast<PointId>(&MetricMeasureSpace::breakpoint_radii, py::const_))
      .def("__len__", &MetricMeasureSpace::size);

  m.def("generator_names", &gen::generator_names);

  py::class_<DominatingFunction>(m, "DominatingFunction")
      .def_static("power", &DominatingFunction::power, py::arg("c"), py::arg("n"), py::arg("c_lambda"))
      .def_static("fit_power", &DominatingFunction::fit_power)
      .def("__call__", &DominatingFunction::operator())
      .def_property_readonly("c", &DominatingFunction::c)
      .def_property_readonly("n", &DominatingFunction::n)
      .def_property_readonly("c_lambda", &DominatingFunction::c_lambda);

  m.def("check_upper_doubling",
        [](const MetricMeasureSpace& s, const DominatingFunction& l) { return report_dict(check_upper_doubling(s, l)); });
  m.def(
      "check_geometric_doubling",
      [](const MetricMeasureSpace& s, double n, double C) { return report_dict(check_geometric_doubling(s, n, C)); },
      py::arg("space"), py::arg("n"), py::arg("C"));

  py::class_<Cell>(m, "Cell")
      .def_readonly("id", &Cell::id)
      .def_readonly("level", &Cell::level)
      .def_readonly("members", &Cell::members)
      .def_readonly("center", &Cell::center)
      .def_readonly("radius", &Cell::radius)
      .def_readonly("parent", &Cell::parent)
      .def_readonly("children", &Cell::children)
      .def_readonly("is_doubling", &Cell::is_doubling);

  py::class_<Lattice>(m, "Lattice")
      .def_property_readonly("cells", &Lattice::cells)
      .def_property_readonly("k_min", [](const Lattice& l) { return l.constants().k_min; })
      .def_property_readonly("k_max", [](const Lattice& l) { return l.constants().k_max; })
      .def_property_readonly("mode", [](const Lattice& l) { return std::string(to_string(l.constants().mode)); })
      .def("cell", &Lattice::cell, py::return_value_policy::copy)
      .def("level", &Lattice::level)
      .def("chain", &Lattice::chain)
      .def("__len__", &Lattice::size);

  m.def(
      "build_lattice",
      [](const MetricMeasureSpace& s, const std::string& mode, double C0, std::optional<double> A0,
         std::optional<int> k_min, std::optional<int> k_max, std::uint64_t seed) {
        const LatticeMode lm = parse_lattice_mode(mode);
        const double a = A0 ? *A0 : (lm == LatticeMode::Strict ? 5000.0 * C0 + 1.0 : 4.0);
        auto K = default_constants(s, lm, C0, a);
        if (k_min) K.k_min = *k_min;
        if (k_max) K.k_max = *k_max;
        return build_lattice(s, K, seed);
      },
      py::arg("space"), py::arg("mode") = "lab", py::arg("C0") = 2.0, py::arg("A0") = py::none(),
      py::arg("k_min") = py::none(), py::arg("k_max") = py::none(), py::arg("seed") = 0);
  m.def("check_lattice", [](const Lattice& l, const MetricMeasureSpace& s) { return report_dict(check_lattice(l, s)); });

  py::class_<Kernel>(m, "Kernel")
      .def_static(
          "builtin",
          [](const DominatingFunction& lambda, int m, const std::string& family, double delta) {
            return Kernel::builtin(parse_kernel_family(family), lambda, m, delta);
          },
          py::arg("lambda_"), py::arg("m") = 2, py::arg("family") = "lambda-sum", py::arg("delta") = 1.0)
      .def_property_readonly("m", &Kernel::m)
      .def_property_readonly("size_const", &Kernel::size_const)
      .def_property_readonly("reg_const", &Kernel::reg_const)
      .def("__call__", [](const Kernel& k, const MetricMeasureSpace& s, PointId x, std::vector<PointId> ys) {
        return k(s, x, ys);
      });

  m.def("check_kernel_size", [](const Kernel& k, const MetricMeasureSpace& s, const DominatingFunction& l) {
    return report_dict(check_kernel_size(k, s, l));
  });
  m.def("check_kernel_regularity", [](const Kernel& k, const MetricMeasureSpace& s, const DominatingFunction& l) {
    return report_dict(check_kernel_regularity(k, s, l));
  });

  auto trunc = [](const std::string& s) { return parse_trunc_mode(s); };
  m.def(
      "truncated_T",
      [trunc](const Kernel& k, const MetricMeasureSpace& s, const std::vector<std::vector<double>>& f, PointId x,
              double r, const std::string& mode) { return truncated_T(k, s, to_ftuple(f), x, r, trunc(mode)); },
      py::arg("kernel"), py::arg("space"), py::arg("f"), py::arg("x"), py::arg("r"), py::arg("mode") = "linf");
  m.def(
      "maximal_T_star",
      [trunc](const Kernel& k, const MetricMeasureSpace& s, const std::vector<std::vector<double>>& f,
              const std::string& mode) { return maximal_T_star_all(k, s, to_ftuple(f), trunc(mode)); },
      py::arg("kernel"), py::arg("space"), py::arg("f"), py::arg("mode") = "linf");
  m.def("M_lambda", [](const MetricMeasureSpace& s, const std::vector<std::vector<double>>& f,
                       const DominatingFunction& l) {
    std::vector<double> out(s.size());
    const auto ft = to_ftuple(f);
    for (PointId x = 0; x < s.size(); ++x) out[x] = M_lambda(s, ft, x, l);
    return out;
  });
  m.def("grand_maximal", [](const Kernel& k, const MetricMeasureSpace& s, const std::vector<std::vector<double>>& f,
                            CellId q0, const Lattice& l) { return grand_maximal_all(k, s, to_ftuple(f), q0, l); });
  m.def("bilinear_average", [](const std::vector<std::vector<double>>& f, const Lattice& l, CellId q,
                               const MetricMeasureSpace& s, double alpha) {
    return bilinear_average_A(to_ftuple(f), l.cell(q), s, alpha);
  });

  py::class_<SparseFamily>(m, "SparseFamily")
      .def_readonly("cells", &SparseFamily::cells)
      .def_readonly("E", &SparseFamily::E)
      .def_readonly("eta", &SparseFamily::eta)
      .def_readonly("alpha", &SparseFamily::alpha)
      .def_readonly("layer", &SparseFamily::layer)
      .def_property_readonly("coefficient", &SparseFamily::coefficient);

  py::class_<DominationResult>(m, "Domination")
      .def_readonly("root", &DominationResult::root)
      .def_readonly("alpha", &DominationResult::alpha)
      .def_readonly("layers", &DominationResult::layers)
      .def_readonly("C_dom", &DominationResult::C_dom)
      .def_readonly("depth", &DominationResult::depth)
      .def_readonly("nodes", &DominationResult::nodes)
      .def_property_readonly("certificates_ok", &DominationResult::certificates_ok)
      .def_property_readonly("slack", [](const DominationResult& r) {
        py::list rows;
        for (const auto& s : r.slack) rows.append(py::make_tuple(s.x, s.t_star, s.sparse, s.ratio));
        return rows;
      });

  m.def(
      "dominate",
      [trunc](const Kernel& k, const std::vector<std::vector<double>>& f, const Lattice& l, const MetricMeasureSpace& s,
              const DominatingFunction& lambda, double alpha, double M_init, int K_max, const std::string& mode) {
        DominationConfig cfg;
        cfg.M_init = M_init;
        cfg.K_max = K_max;
        cfg.mode = trunc(mode);
        return build_sparse_domination(k, to_ftuple(f), {}, l, s, lambda, alpha, cfg);
      },
      py::arg("kernel"), py::arg("f"), py::arg("lattice"), py::arg("space"), py::arg("lambda_"), py::arg("alpha") = 4.0,
      py::arg("M_init") = 1.0, py::arg("K_max") = 12, py::arg("mode") = "linf");
  m.def("sparse_operator", [](const DominationResult& r, const std::vector<std::vector<double>>& f, const Lattice& l,
                              const MetricMeasureSpace& s) {
    std::vector<double> out(s.size());
    const auto ft = to_ftuple(f);
    for (PointId x = 0; x < s.size(); ++x) out[x] = sparse_operator(r.layers, ft, x, l, s);
    return out;
  });
  m.def(
      "check_sparseness",
      [](const SparseFamily& fam, const Lattice& l, const MetricMeasureSpace& s, double eta) {
        return report_dict(check_sparseness(fam, l, s, eta));
      },
      py::arg("family"), py::arg("lattice"), py::arg("space"), py::arg("eta_min") = 0.4);

  m.def("nu_w", [](const std::vector<std::vector<double>>& w, const std::vector<double>& p) {
    return nu_w(to_weights(w), ExponentTuple(p));
  });
  m.def("regime", [](const std::vector<double>& p) { return std::string(to_string(ExponentTuple(p).regime())); });
  m.def(
      "ap_characteristic",
      [](const std::vector<std::vector<double>>& w, const std::vector<double>& p, double rho,
         const MetricMeasureSpace& s) {
        const ExponentTuple P(p);
        const auto a = ap_characteristic(to_weights(w), P, rho, s);
        py::dict d;
        d["value"] = a.value;
        d["infinite"] = a.infinite;
        d["power_normalized"] = a.power_normalized(P);
        d["argmax"] = py::make_tuple(a.argmax.center, a.argmax.radius);
        return d;
      },
      py::arg("w"), py::arg("p"), py::arg("rho"), py::arg("space"));
  m.def(
      "check_duality",
      [](const std::vector<std::vector<double>>& w, const std::vector<double>& p, int i, double rho,
         const MetricMeasureSpace& s) {
        const auto d = check_duality_identity(to_weights(w), ExponentTuple(p), i, rho, s);
        py::dict out;
        out["lhs"] = d.lhs;
        out["rhs"] = d.rhs;
        out["max_rel_err"] = d.max_rel_err;
        out["ok"] = d.ok;
        return out;
      },
      py::arg("w"), py::arg("p"), py::arg("i"), py::arg("rho"), py::arg("space"));
  m.def(
      "c_omega",
      [](const std::vector<std::vector<double>>& w, const std::vector<double>& p, double alpha,
         const MetricMeasureSpace& s, const Lattice& l, const DominationResult& r) {
        const auto c = c_omega(to_weights(w), ExponentTuple(p), alpha, s, l, r.layers);
        py::dict d;
        d["value"] = c.value;
        d["regime"] = to_string(c.regime);
        d["argmax"] = c.argmax;
        return d;
      },
      py::arg("w"), py::arg("p"), py::arg("alpha"), py::arg("space"), py::arg("lattice"), py::arg("domination"));
  m.def(
      "verify_sparse_bound",
      [](const DominationResult& r, const std::vector<std::vector<double>>& f, const std::vector<std::vector<double>>& w,
         const std::vector<double>& p, const MetricMeasureSpace& s, const Lattice& l, double slack) {
        return bound_dict(verify_sparse_weighted_bound(r.layers, to_ftuple(f), to_weights(w), ExponentTuple(p), r.alpha,
                                                       s, l, slack));
      },
      py::arg("domination"), py::arg("f"), py::arg("w"), py::arg("p"), py::arg("space"), py::arg("lattice"),
      py::arg("slack") = 64.0);
  m.def(
      "verify_T_bound",
      [](const Kernel& k, const DominationResult& r, const std::vector<std::vector<double>>& f,
         const std::vector<std::vector<double>>& w, const std::vector<double>& p, const MetricMeasureSpace& s,
         const Lattice& l, double slack) {
        return bound_dict(verify_T_weighted_bound(k, to_ftuple(f), to_weights(w), ExponentTuple(p), r, l, s,
                                                  TruncMode::Linf, slack));
      },
      py::arg("kernel"), py::arg("domination"), py::arg("f"), py::arg("w"), py::arg("p"), py::arg("space"),
      py::arg("lattice"), py::arg("slack") = 64.0);

  auto orc = m.def_submodule("oracle", "Naive reference implementations");
  orc.def(
      "T_star",
      [trunc](const Kernel& k, const MetricMeasureSpace& s, const std::vector<std::vector<double>>& f, PointId x,
              const std::string& mode) { return oracle::brute_T_star(k, s, to_ftuple(f), x, trunc(mode)); },
      py::arg("kernel"), py::arg("space"), py::arg("f"), py::arg("x"), py::arg("mode") = "linf");
  orc.def("M_lambda", [](const MetricMeasureSpace& s, const std::vector<std::vector<double>>& f, PointId x,
                         const DominatingFunction& l) { return oracle::brute_M_lambda(s, to_ftuple(f), x, l); });
  orc.def("ap_characteristic", [](const std::vector<std::vector<double>>& w, const std::vector<double>& p, double rho,
                                  const MetricMeasureSpace& s) {
    return oracle::brute_ap_characteristic(to_weights(w), ExponentTuple(p), rho, s);
  });
}
