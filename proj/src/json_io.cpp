#include "jc/json_io.hpp"

#include <fstream>

namespace jc {

const char* const kToolVersion = "jc 0.1.0";

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return j;
}

void expect_keys(const json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw SchemaError("expected a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (item.key() == k) ok = true;
    if (!ok) throw SchemaError("unknown field: " + item.key());
  }
}

const json& require_key(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field: ") + key);
  return j.at(key);
}

namespace {

double as_number(const json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + ": expected a number");
  return j.get<double>();
}

int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw SchemaError(std::string(what) + ": expected an integer");
  return j.get<int>();
}

std::vector<double> as_vector(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + ": expected an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(as_number(e, what));
  return v;
}

std::string as_string(const json& j, const char* what) {
  if (!j.is_string()) throw SchemaError(std::string(what) + ": expected a string");
  return j.get<std::string>();
}

}  // namespace

AlgebraDescriptor parse_algebra(const json& j) {
  expect_keys(j, {"factors"});
  const json& factors = require_key(j, "factors");
  if (!factors.is_array() || factors.empty()) throw SchemaError("algebra: factors must be a nonempty array");
  std::vector<SimpleFactor> fs;
  for (const auto& f : factors) {
    const std::string kind = as_string(require_key(f, "kind"), "factor kind");
    if (kind == "real") {
      expect_keys(f, {"kind"});
      fs.push_back({FactorKind::Real, 1});
    } else if (kind == "sym") {
      expect_keys(f, {"kind", "n"});
      fs.push_back({FactorKind::Sym, as_int(require_key(f, "n"), "sym n")});
    } else if (kind == "spin") {
      expect_keys(f, {"kind", "n"});
      fs.push_back({FactorKind::Spin, as_int(require_key(f, "n"), "spin n")});
    } else {
      throw SchemaError("algebra: unknown factor kind '" + kind + "'");
    }
  }
  return AlgebraDescriptor(std::move(fs));
}

json algebra_to_json(const AlgebraDescriptor& a) {
  json factors = json::array();
  for (const auto& f : a.factors()) {
    switch (f.kind) {
      case FactorKind::Real:
        factors.push_back({{"kind", "real"}});
        break;
      case FactorKind::Sym:
        factors.push_back({{"kind", "sym"}, {"n", f.n}});
        break;
      case FactorKind::Spin:
        factors.push_back({{"kind", "spin"}, {"n", f.n}});
        break;
    }
  }
  return json{{"factors", factors}};
}

Element parse_element(const json& j, const AlgebraDescriptor& a) {
  expect_keys(j, {"blocks"});
  const json& blocks = require_key(j, "blocks");
  if (!blocks.is_array()) throw SchemaError("element: blocks must be an array");
  std::vector<std::vector<double>> b;
  for (const auto& e : blocks) b.push_back(as_vector(e, "element block"));
  return element_from_blocks(a, b);
}

json element_to_json(const Element& x) {
  json blocks = json::array();
  for (const auto& b : natural_blocks(x)) blocks.push_back(b);
  return json{{"blocks", blocks}};
}

Element parse_element_file(const json& j) {
  expect_keys(j, {"algebra", "blocks"});
  const AlgebraDescriptor a = parse_algebra(require_key(j, "algebra"));
  return parse_element(json{{"blocks", require_key(j, "blocks")}}, a);
}

SpectralSetSpec parse_spec(const json& j, const AlgebraDescriptor& a) {
  const std::string kind = as_string(require_key(j, "kind"), "spec kind");
  SpectralSetSpec s;
  if (kind == "whole_space") {
    expect_keys(j, {"kind"});
    s = SpectralSetSpec::whole_space();
  } else if (kind == "symmetric_cone") {
    expect_keys(j, {"kind"});
    s = SpectralSetSpec::symmetric_cone();
  } else if (kind == "sorted_box") {
    expect_keys(j, {"kind", "lower", "upper"});
    s = SpectralSetSpec::sorted_box(as_vector(require_key(j, "lower"), "sorted_box lower"),
                                    as_vector(require_key(j, "upper"), "sorted_box upper"));
  } else if (kind == "trace_affine") {
    expect_keys(j, {"kind", "coeffs", "constant", "of"});
    s = SpectralSetSpec::trace_affine(as_vector(require_key(j, "coeffs"), "trace_affine coeffs"),
                                      as_number(require_key(j, "constant"), "trace_affine constant"),
                                      parse_spec(require_key(j, "of"), a));
  } else if (kind == "product") {
    expect_keys(j, {"kind", "factors"});
    const json& kids = require_key(j, "factors");
    if (!kids.is_array() || static_cast<int>(kids.size()) != a.factor_count())
      throw SchemaError("product spec: one child per factor required");
    std::vector<SpectralSetSpec> children;
    for (int f = 0; f < a.factor_count(); ++f)
      children.push_back(parse_spec(kids[f], AlgebraDescriptor({a.factors()[f]})));
    s = SpectralSetSpec::product(std::move(children));
  } else if (kind == "primitive_cross") {
    expect_keys(j, {"kind", "factor"});
    s = SpectralSetSpec::primitive_cross(j.contains("factor") ? as_int(j.at("factor"), "factor") : 0);
  } else {
    throw SchemaError("spec: unknown kind '" + kind + "'");
  }
  validate_spec(s, a);
  return s;
}

json spec_to_json(const SpectralSetSpec& s) {
  switch (s.kind) {
    case SpectralSetSpec::Kind::WholeSpace:
      return json{{"kind", "whole_space"}};
    case SpectralSetSpec::Kind::SymmetricCone:
      return json{{"kind", "symmetric_cone"}};
    case SpectralSetSpec::Kind::SortedBox:
      return json{{"kind", "sorted_box"}, {"lower", s.lower}, {"upper", s.upper}};
    case SpectralSetSpec::Kind::TraceAffine:
      return json{{"kind", "trace_affine"},
                  {"coeffs", s.trace_coeffs},
                  {"constant", s.trace_constant},
                  {"of", spec_to_json(s.children[0])}};
    case SpectralSetSpec::Kind::ProductPerFactor: {
      json kids = json::array();
      for (const auto& c : s.children) kids.push_back(spec_to_json(c));
      return json{{"kind", "product"}, {"factors", kids}};
    }
    case SpectralSetSpec::Kind::PrimitiveCross:
      return json{{"kind", "primitive_cross"}, {"factor", s.cross_factor}};
  }
  return json();
}

SpectralFunctionSpec parse_fspec(const json& j) {
  const std::string kind = as_string(require_key(j, "kind"), "fspec kind");
  const double weight = j.contains("weight") ? as_number(j.at("weight"), "fspec weight") : 1.0;
  if (kind == "linear") {
    expect_keys(j, {"kind", "weight"});
    return SpectralFunctionSpec::linear(weight);
  }
  if (kind == "quadratic") {
    expect_keys(j, {"kind", "weight"});
    return SpectralFunctionSpec::quadratic(weight);
  }
  if (kind == "power_sum") {
    expect_keys(j, {"kind", "weight", "p"});
    return SpectralFunctionSpec::power_sum(as_number(require_key(j, "p"), "power_sum p"), weight);
  }
  if (kind == "log_barrier") {
    expect_keys(j, {"kind", "weight"});
    return SpectralFunctionSpec::log_barrier(weight);
  }
  throw SchemaError("fspec: unknown kind '" + kind + "'");
}

NDSystem parse_nds_system(const json& j) {
  const std::string kind = as_string(require_key(j, "kind"), "nds kind");
  if (kind == "signed_perm") {
    expect_keys(j, {"kind", "n"});
    return NDSystem::signed_perm(as_int(require_key(j, "n"), "signed_perm n"));
  }
  if (kind == "eja") {
    expect_keys(j, {"kind", "algebra"});
    return NDSystem::eja(parse_algebra(require_key(j, "algebra")));
  }
  if (kind == "rect") {
    expect_keys(j, {"kind", "rows", "cols"});
    return NDSystem::rect(as_int(require_key(j, "rows"), "rect rows"), as_int(require_key(j, "cols"), "rect cols"));
  }
  throw SchemaError("nds system: unknown kind '" + kind + "'");
}

json nds_system_to_json(const NDSystem& s) {
  switch (s.kind()) {
    case NDSystem::Kind::SignedPerm:
      return json{{"kind", "signed_perm"}, {"n", s.n()}};
    case NDSystem::Kind::EJA:
      return json{{"kind", "eja"}, {"algebra", algebra_to_json(s.algebra())}};
    case NDSystem::Kind::Rect:
      return json{{"kind", "rect"}, {"rows", s.rows()}, {"cols", s.cols()}};
  }
  return json();
}

Point parse_nds_point(const json& j, const NDSystem& sys) {
  if (j.is_object() && j.contains("blocks")) {
    if (sys.kind() != NDSystem::Kind::EJA)
      throw SchemaError("nds point: block form is only valid for EJA systems");
    expect_keys(j, {"blocks"});
    return parse_element(j, sys.algebra()).coords();
  }
  expect_keys(j, {"point"});
  Point p = as_vector(require_key(j, "point"), "nds point");
  if (static_cast<int>(p.size()) != sys.dim())
    throw SchemaError("nds point: dimension does not match the system");
  return p;
}

SolveOptions parse_options(const json& j) {
  SolveOptions o;
  expect_keys(j, {"stop_tol", "max_iterations", "armijo_c", "initial_step", "certificate_tol", "seed"});
  if (j.contains("stop_tol")) o.stop_tol = as_number(j.at("stop_tol"), "stop_tol");
  if (j.contains("max_iterations")) o.max_iterations = as_int(j.at("max_iterations"), "max_iterations");
  if (j.contains("armijo_c")) o.armijo_c = as_number(j.at("armijo_c"), "armijo_c");
  if (j.contains("initial_step")) o.initial_step = as_number(j.at("initial_step"), "initial_step");
  if (j.contains("certificate_tol")) o.certificate_tol = as_number(j.at("certificate_tol"), "certificate_tol");
  if (j.contains("seed")) o.seed = j.at("seed").get<std::uint64_t>();
  return o;
}

namespace {

ThetaSpec parse_theta(const json& j, const AlgebraDescriptor* algebra, int dim) {
  auto coords = [&](const json& spec, const char* what) -> std::vector<double> {
    if (algebra != nullptr) return parse_element(spec, *algebra).coords();
    std::vector<double> v = as_vector(spec, what);
    if (static_cast<int>(v.size()) != dim) throw SchemaError(std::string(what) + ": wrong dimension");
    return v;
  };
  const std::string kind = as_string(require_key(j, "kind"), "theta kind");
  if (kind == "linear") {
    expect_keys(j, {"kind", "c"});
    return ThetaSpec::linear(coords(require_key(j, "c"), "theta c"));
  }
  if (kind == "quadratic_distance") {
    expect_keys(j, {"kind", "d"});
    return ThetaSpec::quadratic_distance(coords(require_key(j, "d"), "theta d"));
  }
  if (kind == "linear_plus_quadratic") {
    expect_keys(j, {"kind", "c", "quad_weight"});
    const double w = j.contains("quad_weight") ? as_number(j.at("quad_weight"), "quad_weight") : 1.0;
    return ThetaSpec::linear_plus_quadratic(coords(require_key(j, "c"), "theta c"), w);
  }
  throw SchemaError("theta: unknown kind '" + kind + "'");
}

NdsOmega parse_omega(const json& j, const NDSystem& sys) {
  const std::string kind = as_string(require_key(j, "kind"), "omega kind");
  if (kind == "whole_space") {
    expect_keys(j, {"kind"});
    return NdsOmega::whole_space();
  }
  if (kind == "norm_ball") {
    expect_keys(j, {"kind", "radius"});
    return NdsOmega::norm_ball(as_number(require_key(j, "radius"), "norm_ball radius"));
  }
  if (kind == "orbit_polytope") {
    expect_keys(j, {"kind", "vertex"});
    Point v = as_vector(require_key(j, "vertex"), "orbit_polytope vertex");
    if (static_cast<int>(v.size()) != sys.dim()) throw SchemaError("orbit_polytope vertex: wrong dimension");
    return NdsOmega::orbit_polytope(std::move(v));
  }
  throw SchemaError("omega: unknown kind '" + kind + "'");
}

}  // namespace

Problem parse_problem(const json& j) {
  Problem p;
  const std::string kind = as_string(require_key(j, "kind"), "problem kind");
  if (kind == "minimize" || kind == "vi" || kind == "cp") {
    p.algebra = parse_algebra(require_key(j, "algebra"));
    const char* spec_key = kind == "cp" ? "cone" : "spec";
    p.spec = parse_spec(require_key(j, spec_key), p.algebra);
    if (kind == "minimize") {
      expect_keys(j, {"kind", "algebra", "spec", "objective", "start", "options"});
      p.kind = Problem::Kind::Minimize;
      const json& obj = require_key(j, "objective");
      expect_keys(obj, {"theta", "fspec"});
      p.objective.theta = parse_theta(require_key(obj, "theta"), &p.algebra, p.algebra.dim());
      if (obj.contains("fspec") && !obj.at("fspec").is_null()) p.objective.fspec = parse_fspec(obj.at("fspec"));
    } else {
      expect_keys(j, {"kind", "algebra", kind == "cp" ? "cone" : "spec", "g", "start", "options"});
      p.kind = kind == "vi" ? Problem::Kind::Vi : Problem::Kind::Cp;
      const json& g = require_key(j, "g");
      expect_keys(g, {"kind", "matrix", "offset"});
      if (as_string(require_key(g, "kind"), "g kind") != "affine")
        throw SchemaError("g: only the 'affine' oracle is expressible in problem files");
      if (g.contains("matrix")) {
        const json& rows = g.at("matrix");
        const int d = p.algebra.dim();
        if (!rows.is_array() || static_cast<int>(rows.size()) != d) throw SchemaError("g matrix: wrong shape");
        DenseMatrix m(d, d);
        for (int i = 0; i < d; ++i) {
          const auto row = as_vector(rows[i], "g matrix row");
          if (static_cast<int>(row.size()) != d) throw SchemaError("g matrix: wrong shape");
          for (int c = 0; c < d; ++c) m(i, c) = row[c];
        }
        p.g_matrix = std::move(m);
      }
      if (g.contains("offset")) p.g_offset = parse_element(g.at("offset"), p.algebra);
    }
    if (j.contains("start") && !j.at("start").is_null()) p.start = parse_element(j.at("start"), p.algebra);
  } else if (kind == "nds") {
    expect_keys(j, {"kind", "system", "omega", "objective", "start", "options"});
    p.kind = Problem::Kind::NdsMinimize;
    p.system = parse_nds_system(require_key(j, "system"));
    p.omega = parse_omega(require_key(j, "omega"), p.system);
    const json& obj = require_key(j, "objective");
    expect_keys(obj, {"theta", "f"});
    const AlgebraDescriptor* alg = p.system.kind() == NDSystem::Kind::EJA ? &p.system.algebra() : nullptr;
    p.nds_theta = parse_theta(require_key(obj, "theta"), alg, p.system.dim());
    if (obj.contains("f") && !obj.at("f").is_null()) {
      const json& f = obj.at("f");
      expect_keys(f, {"weight", "power"});
      p.nds_f.weight = as_number(require_key(f, "weight"), "f weight");
      if (f.contains("power")) p.nds_f.power = as_number(f.at("power"), "f power");
    }
    if (j.contains("start") && !j.at("start").is_null()) p.nds_start = parse_nds_point(j.at("start"), p.system);
  } else {
    throw SchemaError("problem: unknown kind '" + kind + "'");
  }
  if (j.contains("options") && !j.at("options").is_null()) p.options = parse_options(j.at("options"));
  return p;
}

GOracle make_affine_oracle(const Problem& p) {
  const DenseMatrix* m = p.g_matrix ? &*p.g_matrix : nullptr;
  const std::optional<Element>& q = p.g_offset;
  const AlgebraDescriptor algebra = p.algebra;
  DenseMatrix mat = m ? *m : DenseMatrix();
  const bool has_m = m != nullptr;
  return [algebra, mat, has_m, q](const Element& x) {
    Element y = has_m ? Element(algebra, mat * x.coords()) : x;
    if (q) y = y + *q;
    return y;
  };
}

json decomposition_to_json(const SpectralDecomposition& sd) {
  json frame = json::array();
  for (const auto& c : sd.frame) frame.push_back(element_to_json(c));
  return json{{"eigenvalues", sd.eigenvalues}, {"frame", frame}};
}

json certificate_to_json(const CommutationCertificate& c) {
  json j{{"a", element_to_json(c.a)},
         {"b", element_to_json(c.b)},
         {"residual", c.residual},
         {"eigen_alignment", c.eigen_alignment},
         {"joint_frame", nullptr}};
  if (c.joint_frame) {
    json frame = json::array();
    for (const auto& f : c.joint_frame->frame) frame.push_back(element_to_json(f));
    j["joint_frame"] = json{{"frame", frame},
                            {"a_coeffs", c.joint_frame->a_coeffs},
                            {"b_coeffs", c.joint_frame->b_coeffs}};
  }
  return j;
}

json solution_to_json(const Solution& s) {
  return json{{"point", element_to_json(s.point)},
              {"value", s.value},
              {"stationarity", s.stationarity},
              {"iterations", s.iterations},
              {"converged", s.converged}};
}

json nds_solution_to_json(const NdsSolution& s) {
  return json{{"point", s.point},
              {"value", s.value},
              {"stationarity", s.stationarity},
              {"iterations", s.iterations},
              {"converged", s.converged}};
}

json nds_certificate_to_json(const NdsCommuteCertificate& c) {
  json j{{"commutes", c.commutes},
         {"gap", c.gap},
         {"tol", c.tol},
         {"reconstruction_residual", c.reconstruction_residual},
         {"joint_frame", nullptr},
         {"witness", nullptr}};
  if (c.joint_frame) {
    json frame = json::array();
    for (const auto& f : *c.joint_frame) frame.push_back(element_to_json(f));
    j["joint_frame"] = json{{"frame", frame}, {"x_coeffs", c.x_coeffs}, {"w_coeffs", c.w_coeffs}};
  }
  if (c.witness) {
    json rows = json::array();
    for (int i = 0; i < c.witness->rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < c.witness->cols(); ++k) row.push_back((*c.witness)(i, k));
      rows.push_back(row);
    }
    j["witness"] = rows;
  }
  if (c.joint_u && c.joint_v) {
    auto mat = [](const DenseMatrix& m) {
      json rows = json::array();
      for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
      }
      return rows;
    };
    j["joint_u"] = mat(*c.joint_u);
    j["joint_v"] = mat(*c.joint_v);
  }
  return j;
}

}  // namespace jc
