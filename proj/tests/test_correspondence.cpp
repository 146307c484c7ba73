#include <gtest/gtest.h>

#include "regop/correspondence.hpp"
#include "regop/errors.hpp"
#include "regop/linalg.hpp"
#include "support.hpp"

using namespace regop;
using regop::testing::Rng;

namespace {

// Submodule {X : columns of X in span(v)} of M_{m x k}, vectorized.
Matrix submodule_frame(const Matrix& v, const ModuleShape& shape) {
  const Matrix q = linalg::orth(v);
  Matrix f = Matrix::Zero(shape.module_dim(), shape.k * q.cols());
  for (Index j = 0; j < shape.k; ++j) f.block(j * shape.m, j * q.cols(), shape.m, q.cols()) = q;
  return f;
}

// Right ideal {K : range K in span(v)} of M_m, vectorized.
Matrix right_ideal_frame(const Matrix& v, const ModuleShape& shape) {
  return submodule_frame(v, ModuleShape{shape.m, shape.m});
}

void expect_same(const DomainedOperator& a, const DomainedOperator& b, double tol = 1e-10) {
  EXPECT_LE(linalg::subspace_distance(a.frame(), b.frame()), tol);
  EXPECT_LE(linalg::op_norm((a.action() - b.action()) * b.frame()), tol);
}

}  // namespace

TEST(Phi1, IdentityAndZero) {
  const ModuleShape shape{3, 2};
  const Matrix id = Matrix::Identity(shape.module_dim(), shape.module_dim());
  expect_same(phi1(DomainedOperator::full(id), shape),
              DomainedOperator::full(Matrix::Identity(shape.compact_dim(), shape.compact_dim())));
  const DomainedOperator z = phi1(DomainedOperator::full(Matrix::Zero(6, 6)), shape);
  EXPECT_EQ(z.domain_dim(), shape.compact_dim());
  EXPECT_LE(linalg::op_norm(z.restricted_action()), 1e-14);
}

TEST(Phi1, LeftMultiplicationOverM2) {
  Rng rng(51);
  const ModuleShape shape{2, 2};
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix t = rng.matrix(2, 2);
    const DomainedOperator p = phi1(DomainedOperator::full(module_left_multiplication(t, shape)), shape);
    expect_same(p, DomainedOperator::full(compact_left_multiplication(t, shape)));
  }
}

TEST(Phi2, IdentityAndLeftMultiplication) {
  Rng rng(52);
  const ModuleShape shape{3, 2};
  expect_same(phi2(DomainedOperator::full(Matrix::Identity(9, 9)), shape),
              DomainedOperator::full(Matrix::Identity(6, 6)));
  const Matrix t = rng.matrix(3, 3);
  expect_same(phi2(DomainedOperator::full(compact_left_multiplication(t, shape)), shape),
              DomainedOperator::full(module_left_multiplication(t, shape)));
}

TEST(Phi1, RightMultiplicationIsIllDefined) {
  const ModuleShape shape{2, 2};
  Matrix c(2, 2);
  c << 1.0, 2.0, 0.0, 1.0;
  // vec(X c) = (c^T kron I) vec(X): not right-A-linear
  Matrix right = Matrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) right.block(2 * i, 2 * j, 2, 2) = c(j, i) * Matrix::Identity(2, 2);
  try {
    phi1(DomainedOperator::full(right), shape);
    FAIL() << "expected IllDefined";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllDefined);
    EXPECT_GT(e.residual(), 1e-3);
  }
}

TEST(Phi2, NonLeftMultiplicationIsIllDefined) {
  const ModuleShape shape{2, 1};
  // transpose on M_2 does not commute with right multiplication
  Matrix tr = Matrix::Zero(4, 4);
  tr(0, 0) = tr(3, 3) = 1.0;
  tr(1, 2) = tr(2, 1) = 1.0;
  try {
    phi2(DomainedOperator::full(tr), shape);
    FAIL() << "expected IllDefined";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IllDefined);
  }
}

TEST(Phi, ShapeMismatch) {
  const ModuleShape shape{3, 2};
  try {
    phi1(DomainedOperator::full(Matrix::Identity(5, 5)), shape);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
}

TEST(Roundtrip, FullDomain) {
  Rng rng(53);
  const ModuleShape shape{3, 2};
  const DomainedOperator t = DomainedOperator::full(module_left_multiplication(rng.matrix(3, 3), shape));
  const RoundtripReport r = roundtrip_check_module(t, shape);
  EXPECT_TRUE(r.included);
  EXPECT_TRUE(r.closures_equal);
  EXPECT_LE(r.inclusion.residual(), 1e-10);
}

TEST(Roundtrip, HalfDomainSubmodule) {
  Rng rng(54);
  for (const ModuleShape shape : {ModuleShape{2, 2}, ModuleShape{4, 3}}) {
    const Matrix v = rng.matrix(shape.m, shape.m / 2);
    const DomainedOperator t(module_left_multiplication(rng.matrix(shape.m, shape.m), shape),
                             submodule_frame(v, shape));
    const RoundtripReport r = roundtrip_check_module(t, shape);
    EXPECT_TRUE(r.closures_equal);
    EXPECT_LE(r.domain_distance, 1e-10);
    // the corresponding domain in K(E) is the right ideal over the same columns
    EXPECT_LE(linalg::subspace_distance(phi1(t, shape).frame(), right_ideal_frame(v, shape)), 1e-10);
  }
}

TEST(Roundtrip, RightIdealCompact) {
  Rng rng(55);
  const ModuleShape shape{3, 2};
  const Matrix v = rng.matrix(3, 2);
  const DomainedOperator s(compact_left_multiplication(rng.matrix(3, 3), shape), right_ideal_frame(v, shape));
  const RoundtripReport r = roundtrip_check_compact(s, shape);
  EXPECT_TRUE(r.closures_equal);
  EXPECT_LE(r.reverse.residual(), 1e-10);
}

TEST(Phi1, Monotone) {
  Rng rng(56);
  const ModuleShape shape{4, 2};
  const Matrix t = module_left_multiplication(rng.matrix(4, 4), shape);
  const Matrix v = rng.matrix(4, 3);
  const DomainedOperator small(t, submodule_frame(v.leftCols(1), shape));
  const DomainedOperator big(t, submodule_frame(v, shape));
  ASSERT_TRUE(graph_inclusion(small, big).included);
  EXPECT_TRUE(graph_inclusion(phi1(small, shape), phi1(big, shape)).included);
  EXPECT_FALSE(graph_inclusion(phi1(big, shape), phi1(small, shape)).included);
}

TEST(Phi1, CommutesWithZTransform) {
  Rng rng(57);
  const ModuleShape shape{3, 2};
  const Matrix t = rng.matrix(3, 3);
  const Matrix z_e = z_transform(DomainedOperator::full(module_left_multiplication(t, shape))).z;
  const Matrix z_k = z_transform(DomainedOperator::full(compact_left_multiplication(t, shape))).z;
  // both are left multiplication by the same z_t
  const Matrix z_t = z_transform(DomainedOperator::full(t)).z;
  EXPECT_LE(linalg::op_norm(z_e - module_left_multiplication(z_t, shape)), 1e-12);
  EXPECT_LE(linalg::op_norm(z_k - compact_left_multiplication(z_t, shape)), 1e-12);
}

TEST(RankOne, IdentityDecomposition) {
  const ModuleShape shape{3, 2};
  Matrix sum = Matrix::Zero(3, 3);
  for (const auto& r : identity_from_rank_ones(shape)) sum += r.matrix();
  EXPECT_LE((sum - Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(RankOne, ComposeAndAdjoint) {
  Rng rng(58);
  const ModuleShape shape{3, 2};
  auto mv = [&] { return module_vector(shape, rng.matrix(3, 2)); };
  const RankOneOperator a(mv(), mv()), b(mv(), mv());
  EXPECT_LE((a.compose(b).matrix() - a.matrix() * b.matrix()).norm(), 1e-12);
  EXPECT_LE((a.adjoint().matrix() - a.matrix().adjoint()).norm(), 1e-12);
  const ModuleVector z = mv();
  EXPECT_LE((a.apply(z).fiber(0) - a.matrix() * z.fiber(0)).norm(), 1e-12);
}
