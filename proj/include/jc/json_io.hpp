#pragma once

#include <json.hpp>

#include "jc/solver.hpp"

namespace jc {

using nlohmann::json;

// JSON codecs for every externally visible schema. Parsers are strict:
// unknown fields are rejected with SchemaError, as are missing required
// ones and shape mismatches.

AlgebraDescriptor parse_algebra(const json& j);
json algebra_to_json(const AlgebraDescriptor& a);

// {"blocks": [[...], ...]} with natural per-factor encodings.
Element parse_element(const json& j, const AlgebraDescriptor& a);
json element_to_json(const Element& x);

// Standalone file form {"algebra": {...}, "blocks": [...]}.
Element parse_element_file(const json& j);

SpectralSetSpec parse_spec(const json& j, const AlgebraDescriptor& a);
json spec_to_json(const SpectralSetSpec& s);

SpectralFunctionSpec parse_fspec(const json& j);

NDSystem parse_nds_system(const json& j);
json nds_system_to_json(const NDSystem& s);

// NDS point: {"point": [...]} always works; {"blocks": [...]} also accepted
// for EJA systems.
Point parse_nds_point(const json& j, const NDSystem& sys);

SolveOptions parse_options(const json& j);

struct Problem {
  enum class Kind { Minimize, Vi, Cp, NdsMinimize };
  Kind kind = Kind::Minimize;
  // EJA problems
  AlgebraDescriptor algebra;
  SpectralSetSpec spec;
  Objective objective;
  std::optional<DenseMatrix> g_matrix;  // affine G(x) = M x + q (identity when absent)
  std::optional<Element> g_offset;
  std::optional<Element> start;
  // NDS problems
  NDSystem system;
  NdsOmega omega;
  ThetaSpec nds_theta;
  NdsInvariantFn nds_f;
  std::optional<Point> nds_start;

  SolveOptions options;
};

Problem parse_problem(const json& j);

GOracle make_affine_oracle(const Problem& p);

json decomposition_to_json(const SpectralDecomposition& sd);
json certificate_to_json(const CommutationCertificate& c);
json solution_to_json(const Solution& s);
json nds_certificate_to_json(const NdsCommuteCertificate& c);
json nds_solution_to_json(const NdsSolution& s);

// Helpers shared by the CLI.
json load_json_file(const std::string& path);
void expect_keys(const json& j, std::initializer_list<const char*> allowed);
const json& require_key(const json& j, const char* key);

extern const char* const kToolVersion;

}  // namespace jc
