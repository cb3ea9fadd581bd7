#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arbo/certificate.hpp"
#include "arbo/generator.hpp"
#include "arbo/graph_of_relations.hpp"
#include "arbo/kurosh.hpp"
#include "arbo/tuple_oracle.hpp"
#include "arbo/verify.hpp"

namespace py = pybind11;
using namespace arbo;

namespace {

EquivRelation make_relation(int space_size,
                            const std::vector<std::vector<int>>& classes) {
  return EquivRelation::from_classes(FiniteSpace(space_size), classes);
}

std::vector<std::vector<int>> classes_of(const EquivRelation& r) {
  std::vector<std::vector<int>> out;
  for (int rep : r.class_reps()) out.push_back(r.class_members(rep));
  return out;
}

py::dict product_check_dict(const ProductCheck& pc) {
  py::dict d;
  d["accepted"] = pc.accepted;
  if (pc.rejection) {
    d["tuple_points"] = pc.rejection->points;
    d["tuple_tags"] = pc.rejection->factor_tags;
  }
  return d;
}

py::dict kurosh_dict(const KuroshDecomposition& k) {
  py::dict d;
  py::list fs;
  for (const auto& f : k.factors) {
    py::dict fd;
    fd["factor_index"] = f.factor_index;
    fd["identity"] = f.identity_factor;
    fd["conjugator"] = f.conjugator.pairs();
    fd["classes"] = classes_of(f.relation);
    fs.append(fd);
  }
  d["factors"] = fs;
  d["treeing"] = k.treeing.unordered_edges();
  d["freeness_accepted"] = k.freeness.accepted;
  return d;
}

}  // namespace

PYBIND11_MODULE(arbopy, m) {
  m.doc() = "finite Bass-Serre engine for equivalence relations";

  py::register_exception<Error>(m, "ArboError");

  py::class_<EquivRelation>(m, "EquivRelation")
      .def(py::init(&make_relation), py::arg("space_size"), py::arg("classes"))
      .def_property_readonly(
          "space_size", [](const EquivRelation& r) { return r.space().size; })
      .def("classes", &classes_of)
      .def("domain", [](const EquivRelation& r) { return r.domain().members(); })
      .def("related", &EquivRelation::related)
      .def("is_trivial", &EquivRelation::is_trivial)
      .def("__eq__", [](const EquivRelation& a, const EquivRelation& b) {
        return a == b;
      });

  m.def("trivial_relation", [](int n) {
    return EquivRelation::trivial_full(FiniteSpace(n));
  });
  m.def("join", [](const std::vector<EquivRelation>& rels) { return join(rels); });
  m.def("intersect", &intersect);
  m.def("restrict", [](const EquivRelation& r, const std::vector<int>& pts) {
    return restrict(r, PointSet(r.space(), pts));
  });
  m.def("saturate", [](const EquivRelation& r, const std::vector<int>& pts) {
    return saturate(r, PointSet(r.space(), pts)).members();
  });
  m.def("fundamental_domain", [](const EquivRelation& r) {
    return fundamental_domain(r).members();
  });
  m.def("is_subrelation", &is_subrelation);

  m.def("verify_free_product",
        [](const EquivRelation& r, const std::vector<EquivRelation>& factors) {
          return product_check_dict(verify_free_product(r, factors));
        });
  m.def("verify_amalgam",
        [](const EquivRelation& r, const EquivRelation& r1,
           const EquivRelation& r2, const EquivRelation& r3) {
          return product_check_dict(verify_amalgam(r, r1, r2, r3));
        });
  m.def("oracle_is_free_product",
        [](const EquivRelation& r, const std::vector<EquivRelation>& factors) {
          return oracle_is_free_product(r, factors);
        });

  m.def("bass_serre_is_tree",
        [](const EquivRelation& r, const EquivRelation& r1,
           const EquivRelation& r2) {
          return is_treefield(bass_serre_free(r, r1, r2)).ok;
        });

  m.def("extract_treeing",
        [](const EquivRelation& r, const EquivRelation& r1,
           const EquivRelation& r2, const EquivRelation& s) {
          GraphField g = act_by_subrelation(bass_serre_free(r, r1, r2), s);
          return extract_treeing(g).unordered_edges();
        },
        py::arg("r"), py::arg("r1"), py::arg("r2"), py::arg("s"));

  m.def("kurosh",
        [](const EquivRelation& r, const std::vector<EquivRelation>& factors,
           const EquivRelation& s) { return kurosh_dict(kurosh(r, factors, s)); });

  m.def("restrict_decomposition",
        [](const EquivRelation& r, const std::vector<EquivRelation>& factors,
           const std::vector<int>& y) {
          RestrictionDecomposition d =
              restrict_decomposition(r, factors, PointSet(r.space(), y));
          py::dict out = kurosh_dict(d.decomposition);
          out["saturation_partition"] = d.saturation_partition;
          return out;
        });

  m.def("gen_free_product_text", [](uint64_t seed, int size, int factors) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.space_size = size;
    cfg.factor_count = factors;
    return serialize_instance(gen_free_product(cfg));
  });
  m.def("gen_subrelation", &gen_subrelation, py::arg("seed"), py::arg("r"),
        py::arg("density"));
  m.def("parse_instance_text", [](const std::string& text) {
    InstanceFile inst = parse_instance(text);
    py::dict out;
    out["space"] = inst.space_size;
    py::dict rels;
    for (const auto& [name, r] : inst.relations) rels[name.c_str()] = r;
    out["relations"] = rels;
    out["free_factors"] = inst.free_factors;
    return out;
  });
}
