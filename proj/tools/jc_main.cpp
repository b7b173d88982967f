// jc: Euclidean Jordan algebra computations, commutation checks, spectral
// optimization, and the reference verification suites.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "jc/json_io.hpp"
#include "jc/verify.hpp"

namespace {

using namespace jc;

int classify_current_exception() {
  try {
    throw;
  } catch (const SchemaError&) {
    return 2;
  } catch (const AlgebraMismatchError&) {
    return 2;
  } catch (const DimensionMismatchError&) {
    return 2;
  } catch (const NotEssentiallySimpleError&) {
    return 2;
  } catch (const InvalidFrameError&) {
    return 2;
  } catch (const NonConvexSpecError&) {
    return 2;
  } catch (const OverlappingSupportsError&) {
    return 2;
  } catch (const UnsupportedSystemError&) {
    return 2;
  } catch (const UnsupportedOmegaError&) {
    return 2;
  } catch (const Error&) {
    return 3;
  } catch (const std::exception&) {
    return 3;
  }
}

std::uint64_t env_seed() {
  const char* s = std::getenv("JC_SEED");
  if (!s) return 42;
  return std::strtoull(s, nullptr, 10);
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

int cmd_decompose(const std::string& input) {
  const Element x = parse_element_file(load_json_file(input));
  const SpectralDecomposition sd = spectral_decompose(x);
  std::cout << decomposition_to_json(sd).dump(2) << "\n";
  return 0;
}

int cmd_commute(const std::string& a_path, const std::string& b_path, double tol) {
  const Element a = parse_element_file(load_json_file(a_path));
  const Element b = parse_element_file(load_json_file(b_path));
  require_same_algebra(a, b, "commute");
  const CommutationCertificate cert = make_certificate(a, b, tol);
  json out = certificate_to_json(cert);
  out["commute"] = cert.residual <= tol;
  out["tol"] = tol;
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_solve(const std::string& problem_path, const std::string& out_path) {
  Problem p = parse_problem(load_json_file(problem_path));
  if (p.options.seed == 42) p.options.seed = env_seed();
  json out{{"version", kToolVersion}, {"seed", p.options.seed}};
  bool converged = false;
  double residual = 0.0;

  switch (p.kind) {
    case Problem::Kind::Minimize: {
      const MinimizeResult res = minimize(p.algebra, p.spec, p.objective, p.options, p.start);
      out["kind"] = "minimize";
      out["solution"] = solution_to_json(res.solution);
      out["certificate"] = certificate_to_json(res.certificate);
      converged = res.solution.converged;
      residual = res.certificate.residual;
      break;
    }
    case Problem::Kind::Vi: {
      const ViResult res = vi_solve(p.algebra, p.spec, make_affine_oracle(p), p.options, p.start);
      out["kind"] = "vi";
      out["solution"] = solution_to_json(res.solution);
      out["certificate"] = certificate_to_json(res.certificate);
      converged = res.solution.converged;
      residual = res.certificate.residual;
      break;
    }
    case Problem::Kind::Cp: {
      const CpResult res = cp_solve(p.algebra, p.spec, make_affine_oracle(p), p.options, p.start);
      out["kind"] = "cp";
      out["solution"] = solution_to_json(res.solution);
      out["certificate"] = certificate_to_json(res.certificate);
      out["complementarity"] = res.complementarity;
      out["dual_margin"] = res.dual_margin;
      out["dual_samples"] = res.dual_samples;
      converged = res.solution.converged;
      residual = res.certificate.residual;
      break;
    }
    case Problem::Kind::NdsMinimize: {
      const NdsMinimizeResult res = nds_minimize(p.system, p.omega, p.nds_theta, p.nds_f, p.options, p.nds_start);
      out["kind"] = "nds";
      out["system"] = nds_system_to_json(p.system);
      out["solution"] = nds_solution_to_json(res.solution);
      out["certificate"] = nds_certificate_to_json(res.certificate);
      out["minus_theta_grad"] = res.minus_theta_grad;
      converged = res.solution.converged;
      residual = res.certificate.gap;
      break;
    }
  }
  out["converged"] = converged;
  if (!out_path.empty()) write_json(out_path, out);
  std::printf("certificate residual: %.17g\n", residual);
  if (!converged) {
    std::fprintf(stderr, "solver did not reach the stationarity tolerance; result flagged\n");
    return 4;
  }
  return 0;
}

int cmd_nds(const std::string& mode, const std::string& sys_path, const std::string& x_path,
            const std::string& w_path, double tol) {
  const NDSystem sys = parse_nds_system(load_json_file(sys_path));
  const Point x = parse_nds_point(load_json_file(x_path), sys);
  if (mode == "gamma") {
    std::cout << json{{"gamma", gamma(sys, x)}}.dump(2) << "\n";
    return 0;
  }
  const Point w = parse_nds_point(load_json_file(w_path), sys);
  if (mode == "max") {
    std::printf("%.17g\n", max_inner_over_group(sys, x, w));
    return 0;
  }
  const NdsCommuteCertificate cert = nds_commute(sys, x, w, tol);
  std::cout << nds_certificate_to_json(cert).dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_path) {
  const std::vector<SuiteResult> suites = run_suites(suite, seed);
  bool all_passed = true;
  for (const auto& s : suites) {
    std::printf("[%s] %s (%.2fs, seed %" PRIu64 ")\n", s.passed ? "PASS" : "FAIL", s.name.c_str(),
                s.elapsed_seconds, s.seed);
    for (const auto& c : s.checks) {
      if (!c.passed)
        std::printf("  FAIL %s: value %.17g exceeds %.17g\n", c.name.c_str(), c.value, c.threshold);
    }
    if (!s.passed) all_passed = false;
  }
  if (!out_path.empty()) write_json(out_path, suites_to_json(suites, seed));
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euclidean Jordan algebra computations and commutation certificates"};
  app.require_subcommand(1);

  std::string in_path, a_path, b_path, problem_path, out_path, sys_path, x_path, w_path;
  std::string suite = "all";
  double commute_tol = 1e-8;
  double nds_tol = -1.0;
  std::uint64_t seed = env_seed();

  CLI::App* decompose = app.add_subcommand("decompose", "Spectral decomposition of an element");
  decompose->add_option("-i,--input", in_path, "element JSON file")->required();

  CLI::App* commute = app.add_subcommand("commute", "Operator-commutation certificate for a pair");
  commute->add_option("-a", a_path, "first element JSON file")->required();
  commute->add_option("-b", b_path, "second element JSON file")->required();
  commute->add_option("--tol", commute_tol, "commutation tolerance");

  CLI::App* solve = app.add_subcommand("solve", "Solve a problem file and emit a certificate");
  solve->add_option("-p,--problem", problem_path, "problem JSON file")->required();
  solve->add_option("-o,--output", out_path, "result JSON file");

  CLI::App* nds = app.add_subcommand("nds", "Normal decomposition system queries");
  nds->require_subcommand(1);
  CLI::App* nds_gamma = nds->add_subcommand("gamma", "Evaluate gamma(x)");
  CLI::App* nds_commute_cmd = nds->add_subcommand("commute", "Commutation test in (X, G, gamma)");
  CLI::App* nds_max = nds->add_subcommand("max", "max over the group of <Ax, w>");
  for (CLI::App* sub : {nds_gamma, nds_commute_cmd, nds_max}) {
    sub->add_option("-s,--system", sys_path, "system JSON file")->required();
    sub->add_option("-x", x_path, "point JSON file")->required();
  }
  nds_commute_cmd->add_option("-w", w_path, "second point JSON file")->required();
  nds_max->add_option("-w", w_path, "second point JSON file")->required();
  nds_commute_cmd->add_option("--tol", nds_tol, "gap tolerance (negative: scale-aware default)");

  CLI::App* verify = app.add_subcommand("verify", "Run the reference verification suites");
  verify->add_option("--suite", suite, "all|remark2|remark7|theorem2|theorem5|tvn|cp|axioms");
  verify->add_option("--seed", seed, "suite seed (default: JC_SEED or 42)");
  verify->add_option("-o,--output", out_path, "machine-readable report file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(decompose)) return cmd_decompose(in_path);
    if (app.got_subcommand(commute)) return cmd_commute(a_path, b_path, commute_tol);
    if (app.got_subcommand(solve)) return cmd_solve(problem_path, out_path);
    if (app.got_subcommand(nds)) {
      if (nds->got_subcommand(nds_gamma)) return cmd_nds("gamma", sys_path, x_path, w_path, nds_tol);
      if (nds->got_subcommand(nds_max)) return cmd_nds("max", sys_path, x_path, w_path, nds_tol);
      return cmd_nds("commute", sys_path, x_path, w_path, nds_tol);
    }
    if (app.got_subcommand(verify)) return cmd_verify(suite, seed, out_path);
  } catch (const std::exception& e) {
    const int code = classify_current_exception();
    std::fprintf(stderr, "error: %s\n", e.what());
    return code;
  }
  return 0;
}
