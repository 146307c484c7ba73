#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "regop/diffop.hpp"
#include "regop/errors.hpp"
#include "regop/linalg.hpp"
#include "regop/unbounded.hpp"
#include "support.hpp"

using namespace regop;
using std::numbers::pi;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::ShapeMismatch;
}

GridFunction fourier(Index n, int k) {
  return GridFunction::sample(n, [k](double x) { return std::polar(1.0, 2 * pi * k * x); });
}

double eigen_error(Index n) {
  const GridOperator t = build_derivative(n, BoundaryTag::periodic());
  const GridFunction f = fourier(n, 1);
  const Vector y = t.embed(f);
  const Vector image = t.nodal(t.matrix() * y);
  return (image + 2 * pi * f.samples()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(GridFunction, TrapezoidNorm) {
  const GridFunction one = GridFunction::sample(16, [](double) { return Complex(1.0); });
  EXPECT_NEAR(one.norm(), 1.0, 1e-15);
  const GridFunction x = GridFunction::sample(64, [](double s) { return Complex(s); });
  EXPECT_NEAR(x.norm() * x.norm(), 1.0 / 3.0, 1e-4);
}

TEST(BuildDerivative, TooCoarse) {
  EXPECT_EQ(code_of([] { build_derivative(7, BoundaryTag::periodic()); }), ErrorCode::GridTooCoarse);
  EXPECT_EQ(code_of([] { build_derivative(16, BoundaryTag::maximal(), GridLayout::Periodic); }),
            ErrorCode::PreconditionViolated);
}

TEST(BuildDerivative, PeriodicFourierEigenrelation) {
  const double e100 = eigen_error(100), e200 = eigen_error(200);
  EXPECT_LT(e100, 50.0 / (100.0 * 100.0));
  EXPECT_GT(e100 / e200, 3.5);
  EXPECT_LT(e100 / e200, 4.5);
}

TEST(BuildDerivative, PeriodicLayoutFourierEigenrelation) {
  const Index n = 128;
  const GridOperator t = build_derivative(n, BoundaryTag::periodic(), GridLayout::Periodic);
  const GridFunction f = fourier(n, 2);
  const Vector image = t.nodal(t.matrix() * t.embed(f));
  const double exact = -std::sin(4 * pi / n) * n;  // discrete symbol of the centered stencil
  EXPECT_LT((image - exact * f.samples().head(n)).norm(), 1e-10 * n);
}

TEST(BuildDerivative, MaximalKillsConstants) {
  const GridOperator t = build_derivative(32, BoundaryTag::maximal());
  const GridFunction one = GridFunction::sample(32, [](double) { return Complex(1.0); });
  EXPECT_LT((t.matrix() * t.embed(one)).norm(), 1e-12);
}

TEST(BuildDerivative, TwistedConstraintRow) {
  const Index n = 32;
  const GridOperator t = build_derivative(n, BoundaryTag::twisted(pi));
  const Matrix c = t.constraint_rows();
  ASSERT_EQ(c.rows(), 1);
  EXPECT_LT(std::abs(c(0, n) - 1.0), 1e-15);
  EXPECT_LT(std::abs(c(0, 0) + std::polar(1.0, pi)), 1e-15);
  // every domain vector satisfies f(1) = e^{i pi} f(0)
  for (Index j = 0; j < t.frame().cols(); ++j) {
    const Vector f = t.nodal(t.frame().col(j));
    EXPECT_LT(std::abs(f(n) - std::polar(1.0, pi) * f(0)), 1e-12);
  }
  EXPECT_EQ(build_derivative(n, BoundaryTag::minimal()).constraint_rows().rows(), 2);
  EXPECT_EQ(build_derivative(n, BoundaryTag::maximal()).constraint_rows().rows(), 0);
}

TEST(BuildDerivative, PeriodicIsSymmetricUnderTrapezoidWeights) {
  for (BoundaryTag tag : {BoundaryTag::periodic(), BoundaryTag::twisted(1.3)}) {
    const GridOperator t = build_derivative(48, tag);
    const Matrix c = t.frame().adjoint() * t.matrix() * t.frame();
    EXPECT_LT((c - c.adjoint()).norm(), 1e-10 * c.norm());
    EXPECT_TRUE(graph_inclusion(t.as_domained(), adjoint_via_graph(t.as_domained())).included);
  }
}

// With <f, g> conjugate-linear in f the boundary term is -i [conj(f) g]_0^1.
TEST(BuildDerivative, DiscreteIntegrationByParts) {
  const Index n = 64;
  const GridOperator t = build_derivative(n, BoundaryTag::maximal());
  const GridFunction f = GridFunction::sample(n, [](double x) { return Complex(std::cos(3 * x), x * x); });
  const GridFunction g = GridFunction::sample(n, [](double x) { return Complex(std::exp(x), -x); });
  const Vector yf = t.embed(f), yg = t.embed(g);
  const Complex lhs = (t.matrix() * yf).dot(yg) - yf.dot(t.matrix() * yg);
  const Complex boundary = Complex(0, -1) * (std::conj(f.samples()(n)) * g.samples()(n) -
                                             std::conj(f.samples()(0)) * g.samples()(0));
  EXPECT_LT(std::abs(lhs - boundary), 1e-10);
}

TEST(BuildDerivative, AdjointOfMinimalIsMaximal) {
  const Index n = 40;
  const GridOperator minimal = build_derivative(n, BoundaryTag::minimal());
  const GridOperator maximal = build_derivative(n, BoundaryTag::maximal());
  const LinearRelation rel = adjoint_relation(minimal.as_domained());
  const DomainedOperator adj = rel.operator_part();
  EXPECT_TRUE(adj.has_full_domain());
  // interior rows reproduce the maximal stencil row by row
  for (Index r = 1; r < n; ++r) {
    EXPECT_LT((adj.action().row(r) - maximal.matrix().row(r)).norm(), 1e-8 * n) << "row " << r;
  }
  // the endpoint rows are not determined: they form the multivalued part
  Matrix ends = Matrix::Zero(n + 1, 2);
  ends(0, 0) = 1.0;
  ends(n, 1) = 1.0;
  EXPECT_LT(linalg::subspace_distance(rel.multivalued_frame(), ends), 1e-10);
}

TEST(BuildDerivative, AdjointOfMaximalExtendsMinimal) {
  const Index n = 40;
  const GridOperator minimal = build_derivative(n, BoundaryTag::minimal());
  const DomainedOperator adj = adjoint_via_graph(build_derivative(n, BoundaryTag::maximal()).as_domained());
  EXPECT_TRUE(graph_inclusion(minimal.as_domained(), adj, 1e-8).included);
  // D00 subset D0 subset D
  const DomainedOperator periodic = build_derivative(n, BoundaryTag::periodic()).as_domained();
  EXPECT_LT(linalg::containment_residual(periodic.frame(), minimal.frame()), 1e-12);
}

TEST(KernelCertificate, MatchesOracle) {
  const KernelReport r = kernel_certificate(400);
  EXPECT_EQ(r.kernel_dim, 1);
  EXPECT_LE(r.l2_error, 5e-3);
  // the null vector is accurate to about eps * cond(M) ~ 1e-10
  EXPECT_NEAR(r.l2_error, fixtures::kKernelError400, 1e-10);
}

TEST(KernelCertificate, SecondOrderConvergence) {
  const double e100 = kernel_certificate(100).l2_error;
  const double e200 = kernel_certificate(200).l2_error;
  EXPECT_NEAR(e100, fixtures::kKernelError100, 1e-10);
  EXPECT_NEAR(e200, fixtures::kKernelError200, 1e-10);
  EXPECT_GT(e100 / e200, 3.5);
  EXPECT_LT(e100 / e200, 4.5);
}

TEST(KernelCertificate, GapAcrossResolutions) {
  for (Index n : {64, 128, 256}) {
    const KernelReport r = kernel_certificate(n);
    EXPECT_EQ(r.kernel_dim, 1);
    EXPECT_LE(r.gap_ratio, 0.1);
  }
  EXPECT_EQ(code_of([] { kernel_certificate(31); }), ErrorCode::GridTooCoarse);
}

TEST(KernelCertificate, PeriodicOuterHasNoKernel) {
  const RealVector s = composite_singular_values(400, BoundaryTag::periodic());
  EXPECT_GE(s(s.size() - 1), 1.0 - 1e-9);
  EXPECT_EQ(gap_kernel_dimension(s, 1e-6), 0);
  EXPECT_EQ(code_of([] { composite_singular_values(64, BoundaryTag::minimal()); }),
            ErrorCode::PreconditionViolated);
}

TEST(PeriodicSpectrum, LowModes) {
  const std::vector<double> ev = periodic_spectrum(400, 3);
  ASSERT_EQ(ev.size(), 7u);
  EXPECT_NEAR(ev[3], 0.0, 1e-9);
  EXPECT_NEAR(ev[2], -2 * pi, 1e-3);  // k = +1
  EXPECT_NEAR(ev[4], 2 * pi, 1e-3);   // k = -1
  for (int k = 1; k <= 3; ++k) {
    const double rel = std::abs(ev[3 + k] - 2 * pi * k) / (2 * pi * k);
    EXPECT_LT(rel, 2.0 * std::pow(2 * pi * k / 400.0, 2));
  }
  EXPECT_EQ(code_of([] { periodic_spectrum(40, 11); }), ErrorCode::GridTooCoarse);
}

TEST(PeriodicSpectrum, ScalarSpectralMapping) {
  const std::vector<double> ev = periodic_spectrum(64, 4);
  RealVector d(ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) d(i) = ev[i];
  const ZTransform z = z_transform(DomainedOperator::full(d.cast<Complex>().asDiagonal()));
  for (std::size_t i = 0; i < ev.size(); ++i) {
    EXPECT_NEAR(z.z(i, i).real(), ev[i] / std::sqrt(1 + ev[i] * ev[i]), 1e-12);
  }
}
