// ncvx: build, assess, plot and exploit convex models of interval variables.
//
// Exit codes: 0 success, 2 input or validation error, 3 numeric failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncvx/ncvx.hpp"

namespace {

using namespace ncvx;

constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

/// Error annotated with the pipeline stage that raised it.
struct StageError {
  std::string stage;
  Error error;
};

template <typename F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw StageError{name, e};
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string percent(double fraction) { return fixed(100.0 * fraction, 2) + "%"; }

void print_matrix(const Matrix& m, int digits) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::cout << "  ";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const std::string cell = fixed(m(i, j), digits);
      std::cout << std::string(cell.size() < 8 ? 8 - cell.size() : 0, ' ') << cell << (j + 1 < m.cols() ? " " : "");
    }
    std::cout << "\n";
  }
}

ConvexModel load_model(const std::string& path) {
  return stage("model file", [&] { return deserialize(read_text_file(path)); });
}

// ---------------------------------------------------------------------------

struct BuildArgs {
  std::string samples;
  std::string intervals;
  std::string variant = "me";
  std::string method = "ccc";
  std::string pd = "strict";
  std::string infeasible = "error";
  std::string out;
};

int run_build(const BuildArgs& a) {
  const ModelVariant variant = parse_variant(a.variant);
  const CorrelationMethod method = parse_method(a.method);
  if (method == CorrelationMethod::Given) throw Error(Errc::InvalidArgument, "--method must be ccc or scc");
  const PdPolicy policy = a.pd == "repair" ? PdPolicy::Repair : PdPolicy::Strict;

  const auto [spec, samples] = stage("data preparation", [&] {
    return std::pair{parse_intervals(read_text_file(a.intervals)), parse_samples_csv(read_text_file(a.samples))};
  });
  const RegularizedSamples u = stage("regularization", [&] { return regularize(spec, samples); });

  std::vector<PairFitReport> fits;
  const CorrelationMatrix raw = stage("correlation", [&] {
    if (method == CorrelationMethod::Scc) {
      const CorrelationMatrix s = scc_matrix(u);
      return CorrelationMatrix(s.matrix(), CorrelationMethod::Scc, variant);
    }
    CccOptions options;
    options.on_infeasible = a.infeasible == "closest" ? InfeasiblePolicy::Closest : InfeasiblePolicy::Throw;
    CccMatrixResult result = ccc_matrix(variant, u, options);
    fits = std::move(result.fits);
    return result.matrix;
  });
  const PdResult pd = stage("positive definiteness", [&] { return ensure_positive_definite(raw, policy); });
  const ConvexModel model = stage("model construction", [&] { return build_model(variant, spec, pd.matrix); });
  write_file(a.out, serialize(model));

  std::cout << "n=" << spec.size() << " variant=" << variant_tag(variant) << " method=" << method_tag(method)
            << " samples=" << samples.count() << "\n";
  std::cout << "R:\n";
  print_matrix(model.correlation().matrix(), 4);
  std::cout << "lambda_min=" << fixed(pd.report.min_eigenvalue_after, 6) << "\n";
  if (pd.report.repaired) {
    std::cout << "warning: R repaired (lambda_min before " << fixed(pd.report.min_eigenvalue_before, 6)
              << ", max entry change " << fixed(pd.report.max_entry_change, 6) << ")\n";
  }
  for (const auto& f : fits) {
    if (f.fit.status == FitStatus::Degenerate) {
      std::cout << "warning: degenerate fit for pair (" << f.i + 1 << "," << f.j + 1 << "), r clamped to "
                << fixed(f.fit.r, 6) << "\n";
    } else if (f.fit.status == FitStatus::Infeasible) {
      std::cout << "warning: no enclosing member for pair (" << f.i + 1 << "," << f.j + 1
                << "), least-violation r = " << fixed(f.fit.r, 6) << "\n";
    }
  }
  for (const auto& w : model.warnings()) std::cout << "warning: " << w << "\n";
  std::cout << "wrote " << a.out << "\n";
  return 0;
}

int run_assess(const std::string& model_path, const std::string& samples_path, const std::string& json_path) {
  const ConvexModel model = load_model(model_path);
  const SampleSet samples = stage("data preparation", [&] { return parse_samples_csv(read_text_file(samples_path)); });
  const AssessmentReport report = assess(model, samples);
  std::cout << "kappa=" << report.enclosed << "/" << report.total << " nu=" << percent(report.nu)
            << " nu_bar=" << percent(report.nu_bar) << "\n";
  std::cout << "excluded:";
  if (report.excluded.empty()) std::cout << " none";
  for (std::size_t k = 0; k < report.excluded.size(); ++k) std::cout << (k ? "," : " ") << report.excluded[k] + 1;
  std::cout << "\n";
  if (!json_path.empty()) write_file(json_path, report_to_json(report).dump(2) + "\n");
  return 0;
}

int run_project(const std::string& model_path, std::size_t i, std::size_t j, const std::string& out,
                const std::string& overlay, bool display_hull) {
  const ConvexModel model = load_model(model_path);
  if (is_parallelepiped(model.variant()) && !display_hull) {
    throw Error(Errc::NotEllipsoid, "exact projection exists for ME models only; pass --display-hull to plot the "
                                    "vertex hull of an MP model");
  }
  if (i == 0 || j == 0) throw Error(Errc::IndexOutOfRange, "indices are 1-based");
  std::optional<SampleSet> samples;
  if (!overlay.empty()) samples = parse_samples_csv(read_text_file(overlay));
  write_file(out, projection_svg(model, i - 1, j - 1, samples));
  if (model.variant() == ModelVariant::Ellipsoid) {
    const Matrix p = project_2d(model, i - 1, j - 1);
    std::cout << "projection r=" << fixed(p(0, 1), 4) << "\n";
  } else {
    std::cout << "display hull (visualization only)\n";
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_sample(const std::string& model_path, std::size_t n, std::uint64_t seed, const std::string& out) {
  const ConvexModel model = load_model(model_path);
  const Matrix points = sample_uniform(model, n, seed);
  write_file(out, write_samples_csv(model.spec().names(), points));
  std::cout << "wrote " << n << " points to " << out << "\n";
  return 0;
}

int run_verify(const std::string& variant_tag_text, std::optional<double> r, const std::string& corr_path,
               std::size_t n, std::uint64_t seed, const std::string& method_text) {
  const ModelVariant variant = parse_variant(variant_tag_text);
  Matrix truth;
  if (r) {
    truth = correlation_2d(*r);
  } else {
    truth = parse_matrix_csv(read_text_file(corr_path));
  }
  if (method_text == "ccc") {
    // Report-only: fit CCC on draws from the known domain and show the gaps.
    const CorrelationMatrix t(truth, CorrelationMethod::Given, variant);
    const ConvexModel model = build_model(variant, standard_spec(t.size()), t);
    const Matrix u = sample_uniform_regularized(model, n, seed);
    const CccMatrixResult fitted = ccc_matrix(variant, RegularizedSamples(u));
    std::cout << "ccc demo (no verdict): max_gap=" << fixed(max_abs(fitted.matrix.matrix() - truth), 6) << "\n";
    print_matrix(fitted.matrix.matrix(), 4);
    return 0;
  }
  const UnbiasednessReport report = verify_unbiasedness(variant, truth, n, seed);
  std::cout << "verdict=" << verdict_tag(report.verdict) << " max_err=" << fixed(report.max_abs_error, 6) << "\n";
  return 0;
}

int run_reliability(const std::string& model_path, const std::string& g_path, const std::vector<std::string>& binds,
                    const std::string& norm, double eta_max, std::uint64_t seed) {
  const ConvexModel model = load_model(model_path);
  const LimitState g = parse_limit_state(read_text_file(g_path));
  ReliabilityOptions options;
  for (const auto& b : binds) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(Errc::ParseError, "binding '" + b + "' is not name=value");
    options.bindings[b.substr(0, eq)] = parse_real(b.substr(eq + 1), "binding '" + b + "'");
  }
  if (norm == "2") options.norm = NormKind::Euclidean;
  if (norm == "inf") options.norm = NormKind::Infinity;
  options.eta_max = eta_max;
  options.seed = seed;
  const ReliabilityResult result = reliability_index(model, g, options);
  std::cout << "eta=" << fixed(result.eta, 6) << " norm=" << (result.norm == NormKind::Euclidean ? "2" : "inf")
            << " converged=" << (result.converged ? "yes" : "no") << " evaluations=" << result.evaluations << "\n";
  std::cout << "g(midpoint)=" << format_real(result.g_midpoint) << " sign=" << (result.g_midpoint > 0 ? "+" : "-")
            << "\n";
  std::cout << "delta*=";
  for (std::size_t k = 0; k < result.delta_star.size(); ++k) std::cout << (k ? "," : "") << fixed(result.delta_star[k], 6);
  std::cout << "\nx*=";
  for (std::size_t k = 0; k < result.x_star.size(); ++k) std::cout << (k ? "," : "") << format_real(result.x_star[k]);
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex models of correlated interval variables"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* cmd_build = app.add_subcommand("build", "Fit R from samples and write a model file");
  cmd_build->add_option("--samples", build.samples, "Sample CSV (header of names)")->required();
  cmd_build->add_option("--intervals", build.intervals, "Interval file (name,lower,upper)")->required();
  cmd_build->add_option("--variant", build.variant)->check(CLI::IsMember({"me", "mp1", "mp2", "rect", "ltri", "utri"}));
  cmd_build->add_option("--method", build.method)->check(CLI::IsMember({"ccc", "scc"}));
  cmd_build->add_option("--pd", build.pd)->check(CLI::IsMember({"strict", "repair"}));
  cmd_build->add_option("--infeasible", build.infeasible, "CCC pairs no family member encloses: error or closest")
      ->check(CLI::IsMember({"error", "closest"}));
  cmd_build->add_option("--out", build.out)->required();

  std::string model_path;
  std::string samples_path;
  std::string json_path;
  auto* cmd_assess = app.add_subcommand("assess", "Fitness and volume ratios of a model");
  cmd_assess->add_option("--model", model_path)->required();
  cmd_assess->add_option("--samples", samples_path)->required();
  cmd_assess->add_option("--json", json_path, "Also write the report as JSON");

  std::size_t pi = 1;
  std::size_t pj = 2;
  std::string out;
  std::string overlay;
  bool display_hull = false;
  auto* cmd_project = app.add_subcommand("project", "SVG of the projection on a coordinate plane");
  cmd_project->add_option("--model", model_path)->required();
  cmd_project->add_option("--i", pi, "First variable (1-based)")->required();
  cmd_project->add_option("--j", pj, "Second variable (1-based)")->required();
  cmd_project->add_option("--out", out)->required();
  cmd_project->add_option("--overlay", overlay, "Samples to mark inside/outside");
  cmd_project->add_flag("--display-hull", display_hull, "Allow the vertex-hull drawing for MP models");

  std::size_t count = 1000;
  std::uint64_t seed = 1;
  auto* cmd_sample = app.add_subcommand("sample", "Uniform points inside a model");
  cmd_sample->add_option("--model", model_path)->required();
  cmd_sample->add_option("--n", count)->required();
  cmd_sample->add_option("--seed", seed);
  cmd_sample->add_option("--out", out)->required();

  std::string variant = "me";
  std::optional<double> r;
  std::string corr_path;
  std::string verify_method = "scc";
  auto* cmd_verify = app.add_subcommand("verify", "Recover R from uniform draws (unbiasedness check)");
  cmd_verify->add_option("--variant", variant)->required()->check(
      CLI::IsMember({"me", "mp1", "mp2", "rect", "ltri", "utri"}));
  auto* opt_r = cmd_verify->add_option("--r", r, "Correlation of a 2D model");
  auto* opt_corr = cmd_verify->add_option("--corr", corr_path, "CSV file holding R");
  opt_r->excludes(opt_corr);
  cmd_verify->add_option("--n", count)->required();
  cmd_verify->add_option("--seed", seed);
  cmd_verify->add_option("--method", verify_method, "scc (verdict) or ccc (report only)")
      ->check(CLI::IsMember({"scc", "ccc"}));

  std::string g_path;
  std::vector<std::string> binds;
  std::string norm;
  double eta_max = 10.0;
  auto* cmd_rel = app.add_subcommand("reliability", "Non-probabilistic reliability index");
  cmd_rel->add_option("--model", model_path)->required();
  cmd_rel->add_option("--g", g_path, "File holding the limit-state expression")->required();
  cmd_rel->add_option("--bind", binds, "Constants as name=value")->expected(0, -1);
  cmd_rel->add_option("--norm", norm)->check(CLI::IsMember({"2", "inf"}));
  cmd_rel->add_option("--eta-max", eta_max);
  cmd_rel->add_option("--seed", seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*cmd_build) return run_build(build);
    if (*cmd_assess) return run_assess(model_path, samples_path, json_path);
    if (*cmd_project) return run_project(model_path, pi, pj, out, overlay, display_hull);
    if (*cmd_sample) return run_sample(model_path, count, seed, out);
    if (*cmd_verify) {
      if (!r && corr_path.empty()) throw Error(Errc::InvalidArgument, "verify needs --r or --corr");
      return run_verify(variant, r, corr_path, count, seed, verify_method);
    }
    if (*cmd_rel) return run_reliability(model_path, g_path, binds, norm, eta_max, seed);
  } catch (const StageError& e) {
    std::cerr << "error (" << e.stage << "): " << e.error.what() << "\n";
    return is_numeric_failure(e.error.code()) ? kExitNumeric : kExitInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_numeric_failure(e.code()) ? kExitNumeric : kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
