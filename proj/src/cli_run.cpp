#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "regop/algebra.hpp"
#include "regop/cli.hpp"
#include "regop/correspondence.hpp"
#include "regop/diffop.hpp"
#include "regop/errors.hpp"
#include "regop/fibered.hpp"
#include "regop/linalg.hpp"
#include "regop/report.hpp"
#include "regop/spec_io.hpp"
#include "regop/tolerances.hpp"

namespace regop {

namespace {

constexpr double kKernelErrorMax = 5e-3;
constexpr double kRegularSigmaMin = 0.999;
constexpr double kJumpMin = 1e-2;
constexpr double kFlatMax = 1e-8;
constexpr double kRatioLo = 0.33;
constexpr double kRatioHi = 0.75;

struct Settings {
  SpecFile spec;
  Index n_x = 0;
  Index n_pi = 0;
  double tol_graph = tol::kGraph;
  std::optional<double> modulus;
};

SpecFile read_spec(const RunConfig& c) {
  if (c.input_path.empty()) {
    std::istringstream empty;
    return SpecFile::parse(empty, "<defaults>");
  }
  return SpecFile::load(c.input_path);
}

Settings settings(const RunConfig& c, Index default_nx, Index default_npi) {
  Settings s{read_spec(c), 0, 0, tol::kGraph, std::nullopt};
  s.spec.require_keys("grid", {"n_x", "n_pi", "tol_graph", "modulus"});
  s.n_x = c.n_x ? static_cast<Index>(*c.n_x) : s.spec.integer("grid", "n_x", default_nx);
  s.n_pi = c.n_pi ? static_cast<Index>(*c.n_pi) : s.spec.integer("grid", "n_pi", default_npi);
  s.tol_graph = c.tol_graph.value_or(s.spec.number("grid", "tol_graph", tol::kGraph));
  if (c.modulus) s.modulus = c.modulus;
  else if (s.spec.has("grid", "modulus")) s.modulus = s.spec.number("grid", "modulus", 0.0);

  if (s.n_x < 32 || s.n_x > 4096) throw Error(ErrorCode::GridTooCoarse, "n_x must lie in [32, 4096]");
  if (s.n_pi < 2 || s.n_pi > 512) throw Error(ErrorCode::GridTooCoarse, "n_pi must lie in [2, 512]");
  if (!(s.tol_graph > 0)) throw Error(ErrorCode::PreconditionViolated, "tol_graph must be positive");
  if (s.modulus && !(*s.modulus > 0)) {
    throw Error(ErrorCode::PreconditionViolated, "modulus must be positive");
  }
  return s;
}

void grid_params(Report& r, const Settings& s) {
  r.param("n_x", std::to_string(s.n_x));
  r.param("n_pi", std::to_string(s.n_pi));
  r.param("tol_graph", s.tol_graph);
  if (s.modulus) r.param("modulus", *s.modulus);
}

GaugeField gauge_from_spec(const Settings& s) {
  const SpecFile& f = s.spec;
  f.require_keys("gauge", {"kind", "pi", "row"});
  const std::string kind = f.text("gauge", "kind", "linear_phase");
  const std::vector<double> grid = uniform_pi_grid(s.n_pi);
  if (kind == "linear_phase") return GaugeField::linear_phase(grid, s.n_x);
  if (kind == "identity") return GaugeField(grid, s.n_x, [](double, double) { return 0.0; });
  if (kind == "table") {
    const std::vector<double> pis = f.numbers("gauge", "pi");
    const std::vector<SpecEntry> rows = f.all("gauge", "row");
    if (rows.size() != pis.size() || rows.empty()) {
      f.fail(rows.empty() ? 0 : rows.front().line, "gauge table needs one row per pi value");
    }
    RealMatrix samples(static_cast<Index>(rows.size()), s.n_x + 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::vector<double> v = f.parse_reals(rows[r]);
      if (static_cast<Index>(v.size()) != s.n_x + 1) {
        f.fail(rows[r].line, "gauge row needs n_x + 1 = " + std::to_string(s.n_x + 1) + " samples");
      }
      for (Index j = 0; j <= s.n_x; ++j) samples(static_cast<Index>(r), j) = v[j];
    }
    return GaugeField::from_table(pis, samples, grid);
  }
  for (const auto& e : f.all("gauge", "kind")) f.fail(e.line, "unknown gauge kind '" + kind + "'");
  throw Error(ErrorCode::MalformedSpec, "unknown gauge kind");
}

double max_of(const std::vector<double>& v, std::size_t from = 0) {
  double m = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) m = std::max(m, v[i]);
  return m;
}

void kernel_checks(Report& r, Index n_x, bool& ok) {
  const KernelReport k = kernel_certificate(n_x);
  ok &= r.check("kernel.dimension", static_cast<double>(k.kernel_dim), Bound::Within, 1.0, 1.0);
  ok &= r.check("kernel.gap_ratio", k.gap_ratio, Bound::AtMost, tol::kKernelGap);
  ok &= r.check("kernel.l2_error", k.l2_error, Bound::AtMost, kKernelErrorMax);
  ok &= r.check("kernel.residual", k.residual, Bound::AtMost, tol::kAlg * k.sigma_next);
  const RealVector sv = composite_singular_values(n_x, BoundaryTag::periodic());
  ok &= r.check("regular_complement.sigma_min", sv(sv.size() - 1), Bound::AtLeast, kRegularSigmaMin);
}

std::vector<std::vector<std::string>> profile_rows(const FiberedOperator& f, const ZFieldReport& z,
                                                   const ZFieldReport* other) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::vector<std::string> row{Report::num(f.pi_grid()[i]), Report::num(z.gaps[i])};
    row.push_back(i + 1 < f.size() ? Report::num(z.deviations[i]) : "");
    if (other) row.push_back(i + 1 < f.size() ? Report::num(other->deviations[i]) : "");
    row.push_back(Report::num(z.threshold));
    rows.push_back(std::move(row));
  }
  return rows;
}

int certify_nonregular(const RunConfig& c, Report& r) {
  const Settings s = settings(c, 400, 16);
  s.spec.require_keys("operator", {});
  grid_params(r, s);
  bool ok = true;
  kernel_checks(r, s.n_x, ok);

  FiberedOperator t = build_counterexample_t(s.n_pi, s.n_x);
  const ZFieldReport zt = zfield(t);
  FiberedOperator adj = fibered_adjoint(t, s.modulus);
  const ZFieldReport za = zfield(adj);
  ok &= r.check("zfield.jump_at_0", zt.deviations.front(), Bound::AtLeast, kJumpMin);
  ok &= r.check("zfield.max_deviation_pi_positive", max_of(zt.deviations, 1), Bound::AtMost, kFlatMax);
  ok &= r.check("adjoint.max_deviation", max_of(za.deviations), Bound::AtMost, kFlatMax);
  r.table("zfield", {"pi", "gap", "deviation", "adjoint_deviation", "jump_threshold"},
          profile_rows(t, zt, &za));
  if (!ok) {
    r.verdict("TOLERANCE-VIOLATION");
    return kToleranceViolation;
  }
  r.verdict("NONREGULAR-CERTIFIED");
  return kCertifiedFailure;
}

int kernel_cert(const RunConfig& c, Report& r) {
  const Settings s = settings(c, 400, 2);
  r.param("n_x", std::to_string(s.n_x));
  bool ok = true;
  kernel_checks(r, s.n_x, ok);
  r.verdict(ok ? "KERNEL-CERTIFIED" : "TOLERANCE-VIOLATION");
  return ok ? kVerified : kToleranceViolation;
}

int zfield_cmd(const RunConfig& c, Report& r) {
  const Settings s = settings(c, 128, 16);
  s.spec.require_keys("operator", {"kind"});
  const std::string kind = s.spec.text("operator", "kind", "counterexample");
  grid_params(r, s);
  r.text("operator", kind);

  std::optional<FiberedOperator> field;
  if (kind == "counterexample") {
    field = build_counterexample_t(s.n_pi, s.n_x);
  } else if (kind == "counterexample-adjoint") {
    field = fibered_adjoint(build_counterexample_t(s.n_pi, s.n_x), s.modulus);
  } else if (kind == "gauge") {
    const GridOperator t0 = build_derivative(s.n_x, BoundaryTag::periodic(), GridLayout::Periodic);
    field = gauge_extension(t0, gauge_from_spec(s)).field;
  } else {
    for (const auto& e : s.spec.all("operator", "kind")) {
      s.spec.fail(e.line, "unknown operator kind '" + kind + "'");
    }
  }
  const ZFieldReport z = zfield(*field);
  r.info("zfield.median_deviation", z.median);
  r.info("zfield.max_deviation", max_of(z.deviations));
  r.info("zfield.jump_threshold", z.threshold);
  r.info("zfield.jump_count", static_cast<double>(z.jumps.size()));
  r.table("zfield", {"pi", "gap", "deviation", "jump_threshold"}, profile_rows(*field, z, nullptr));
  if (z.jumps.empty()) {
    r.verdict("CONTINUOUS");
    return kVerified;
  }
  r.verdict("DISCONTINUOUS");
  return kCertifiedFailure;
}

int extend(const RunConfig& c, Report& r) {
  const Settings s = settings(c, 64, 16);
  s.spec.require_keys("operator", {});
  grid_params(r, s);
  const GaugeField u = gauge_from_spec(s);
  r.text("gauge", s.spec.text("gauge", "kind", "linear_phase"));
  const GridOperator t0 = build_derivative(s.n_x, BoundaryTag::periodic(), GridLayout::Periodic);
  const GaugeExtension ext = gauge_extension(t0, u);
  const FiberedOperator t = build_counterexample_t(s.n_pi, s.n_x);

  bool ok = true;
  r.info("gauge.z_deviation", ext.z_deviation);
  r.info("gauge.linear_constant", ext.linear_constant);
  if (ext.z_deviation > tol::kAlg) {
    ok &= r.check("gauge.z_ratio_under_halving", ext.z_ratio, Bound::Within, kRatioLo, kRatioHi);
    ok &= r.check("gauge.probe_ratio_under_halving", ext.probe_ratio, Bound::Within, kRatioLo, kRatioHi);
  }
  const ExtensionReport inc = extension_inclusion_check(t, ext.field, s.tol_graph, s.modulus);
  std::vector<std::vector<std::string>> rows;
  for (const auto& f : inc.fibers) {
    rows.push_back({Report::num(f.pi), f.result.included ? "1" : "0",
                    Report::num(f.result.domain_residual), Report::num(f.result.action_residual),
                    Report::num(s.tol_graph)});
  }
  r.table("fiber_inclusion", {"pi", "included", "domain_residual", "action_residual", "tol_graph"},
          rows);
  r.info("inclusion.failing_fibers", static_cast<double>(inc.failing_pi.size()));
  r.text("inclusion.s_in_s_tilde", inc.s_in_s_tilde ? "true" : "false");
  r.text("inclusion.s_tilde_in_t_tilde", inc.s_tilde_in_t_tilde ? "true" : "false");
  r.text("inclusion.t_tilde_is_t", inc.t_tilde_is_t ? "true" : "false");
  ok &= inc.included;
  r.verdict(ok ? "REGULAR-EXTENSION-VERIFIED" : "EXTENSION-NOT-VERIFIED");
  return ok ? kVerified : kToleranceViolation;
}

int phi_roundtrip(const RunConfig& c, Report& r) {
  if (c.input_path.empty()) throw Error(ErrorCode::MalformedSpec, "phi-roundtrip needs --config");
  const SpecFile f = SpecFile::load(c.input_path);
  f.require_keys("operator", {"m", "k", "action", "domain_vector"});
  for (const char* sec : {"algebra", "gauge", "grid"}) f.require_keys(sec, {});
  const ModuleShape shape{f.integer("operator", "m", 0), f.integer("operator", "k", 0)};
  if (shape.m < 1 || shape.k < 1 || shape.m * shape.k > 64) {
    throw Error(ErrorCode::MalformedSpec, f.source() + ": need m, k >= 1 with m k <= 64");
  }
  const auto actions = f.all("operator", "action");
  if (actions.size() != 1) throw Error(ErrorCode::MalformedSpec, f.source() + ": one action required");
  const Matrix t = f.parse_square(actions.front(), shape.m);

  Matrix span(shape.m, 0);
  for (const auto& e : f.all("operator", "domain_vector")) {
    const auto v = f.parse_complexes(e);
    if (static_cast<Index>(v.size()) != shape.m) f.fail(e.line, "domain vector needs m entries");
    span.conservativeResize(Eigen::NoChange, span.cols() + 1);
    for (Index i = 0; i < shape.m; ++i) span(i, span.cols() - 1) = v[i];
  }
  if (span.cols() == 0) span = Matrix::Identity(shape.m, shape.m);
  const Matrix v = linalg::orth(span);
  Matrix frame = Matrix::Zero(shape.module_dim(), shape.k * v.cols());
  for (Index j = 0; j < shape.k; ++j)
    frame.block(j * shape.m, j * v.cols(), shape.m, v.cols()) = v;
  const DomainedOperator op(module_left_multiplication(t, shape), frame);

  r.param("m", std::to_string(shape.m));
  r.param("k", std::to_string(shape.k));
  r.param("domain_rank", std::to_string(v.cols()));
  bool ok = true;
  const RoundtripReport mod = roundtrip_check_module(op, shape);
  ok &= r.check("module.inclusion_residual", mod.inclusion.residual(), Bound::AtMost, tol::kAlg);
  ok &= r.check("module.reverse_residual", mod.reverse.residual(), Bound::AtMost, tol::kAlg);
  ok &= r.check("module.domain_distance", mod.domain_distance, Bound::AtMost, tol::kAlg);
  const DomainedOperator s = phi1(op, shape);
  const RoundtripReport comp = roundtrip_check_compact(s, shape);
  ok &= r.check("compact.inclusion_residual", comp.inclusion.residual(), Bound::AtMost, tol::kAlg);
  ok &= r.check("compact.reverse_residual", comp.reverse.residual(), Bound::AtMost, tol::kAlg);
  ok &= r.check("compact.domain_distance", comp.domain_distance, Bound::AtMost, tol::kAlg);
  ok &= mod.closures_equal && comp.closures_equal;
  r.verdict(ok ? "ROUNDTRIP-VERIFIED" : "TOLERANCE-VIOLATION");
  return ok ? kVerified : kToleranceViolation;
}

int density_check(const RunConfig& c, Report& r) {
  if (c.input_path.empty()) throw Error(ErrorCode::MalformedSpec, "density-check needs --config");
  const SpecFile f = SpecFile::load(c.input_path);
  f.require_keys("algebra", {"labels", "dims", "generator"});
  for (const char* sec : {"operator", "gauge", "grid"}) f.require_keys(sec, {});
  const auto label_entries = f.all("algebra", "labels");
  if (label_entries.size() != 1) throw Error(ErrorCode::MalformedSpec, f.source() + ": labels required");
  std::vector<std::string> labels;
  {
    std::istringstream in(label_entries.front().value);
    for (std::string t; in >> t;) labels.push_back(t);
  }
  std::vector<Index> dims;
  for (double d : f.numbers("algebra", "dims")) {
    if (d != std::floor(d) || d < 1) f.fail(f.all("algebra", "dims").front().line, "bad dimension");
    dims.push_back(static_cast<Index>(d));
  }
  if (dims.size() != labels.size()) f.fail(label_entries.front().line, "labels and dims differ in length");
  const FiberIndex index(labels, dims);

  std::vector<AlgebraElement> gens;
  for (const auto& e : f.all("algebra", "generator")) {
    std::vector<Matrix> fibers;
    std::istringstream in(e.value);
    std::string block;
    std::size_t i = 0;
    while (std::getline(in, block, '|')) {
      if (i >= index.size()) f.fail(e.line, "too many fiber blocks");
      fibers.push_back(f.parse_square(SpecEntry{e.key, block, e.line}, index.dim(i)));
      ++i;
    }
    if (i != index.size()) f.fail(e.line, "one block per fiber required, separated by '|'");
    gens.emplace_back(index, std::move(fibers));
  }
  if (gens.empty()) throw Error(ErrorCode::MalformedSpec, f.source() + ": no generators");

  const DensityVerdict v = ideal_density_check(gens);
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < index.size(); ++i) {
    rows.push_back({index.label(i), std::to_string(index.dim(i)),
                    std::to_string(v.column_rank_per_fiber[i]), v.dense_per_fiber[i] ? "DENSE" : "NOT-DENSE",
                    Report::num(tol::kRank)});
  }
  r.param("generators", std::to_string(gens.size()));
  r.table("density", {"label", "dim", "column_rank", "verdict", "rank_tol"}, rows);
  r.verdict(v.dense ? "DENSE" : "NOT-DENSE");
  return v.dense ? kVerified : kCertifiedFailure;
}

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::MalformedSpec:
    case ErrorCode::ShapeMismatch:
    case ErrorCode::UnknownFiber:
    case ErrorCode::GridTooCoarse:
    case ErrorCode::PreconditionViolated:
      return true;
    default:
      return false;
  }
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<int(const RunConfig&, Report&)>> commands{
      {"certify-nonregular", certify_nonregular}, {"zfield", zfield_cmd},
      {"extend", extend},                         {"phi-roundtrip", phi_roundtrip},
      {"density-check", density_check},           {"kernel-cert", kernel_cert},
  };
  const auto it = commands.find(config.command);
  if (it == commands.end()) {
    err << "unknown command '" << config.command << "'\n";
    return kInputError;
  }
  Report report(config.command);
  int code = kVerified;
  try {
    code = it->second(config, report);
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (is_input_error(e.code())) return kInputError;
    report.text("error", e.what());
    report.verdict("TOLERANCE-VIOLATION");
    code = kToleranceViolation;
  }

  const std::string stamp = config.timestamp.empty() ? utc_timestamp() : config.timestamp;
  if (config.output_path.empty()) {
    report.write(out, stamp);
  } else {
    std::ofstream file(config.output_path);
    if (!file) {
      err << "cannot write " << config.output_path << "\n";
      return kInputError;
    }
    report.write(file, stamp);
  }
  err << report.verdict() << "\n";
  return code;
}

}  // namespace regop
