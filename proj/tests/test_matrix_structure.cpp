#include <doctest.h>

#include <cmath>
#include <random>

#include "crossmax/matrix_structure.hpp"

using namespace crossmax;

namespace {

Grid g1() { return Grid(1, 16); }

MatrixField const_field(const ConstMatrix& M) { return MatrixField::constant(M, g1()); }

}  // namespace

TEST_CASE("is_cooperative") {
  ConstMatrix A(2, 2);
  A << -5, 1, 2, -3;
  CHECK(is_cooperative(A, 0.0));
  CHECK(is_cooperative(ConstMatrix::Identity(3, 3), 0.0));
  ConstMatrix B(2, 2);
  B << 1, -0.1, 0, 1;
  CHECK(!is_cooperative(B, 0.0));
}

TEST_CASE("is_triangular modes") {
  ConstMatrix L(2, 2);
  L << 1, 0, 3, 2;
  CHECK(is_triangular(L, 0.0, TriMode::Lower));
  CHECK(!is_triangular(L, 0.0, TriMode::Upper));
  CHECK(is_triangular(ConstMatrix::Identity(2, 2), 0.0, TriMode::Diagonal));
  double eps = 1e-6;
  ConstMatrix U(2, 2);
  U << 1, eps, 0, 1;
  CHECK(!is_triangular(U, eps / 2, TriMode::Lower));
  CHECK(is_triangular(U, 2 * eps, TriMode::Lower));
}

TEST_CASE("ellipticity margin closed forms") {
  CHECK(ellipticity_margin(const_field(ConstMatrix::Identity(2, 2))) ==
        doctest::Approx(1.0));
  ConstMatrix A(2, 2);
  A << 1, 2, 2, 5;
  // smallest eigenvalue of [[1,2],[2,5]] is 3 - 2*sqrt(2)
  CHECK(ellipticity_margin(const_field(A)) ==
        doctest::Approx(3 - 2 * std::sqrt(2.0)).epsilon(1e-12));
  ConstMatrix Z(2, 2);
  Z << 0, 0, 1, 1;
  CHECK(ellipticity_margin(const_field(Z)) <= 0);
}

TEST_CASE("block_inverse matches the dense inverse and flags singular blocks") {
  // Trivial identity split.
  ConstMatrix a1(1, 1);
  a1 << 1;
  BlockInverse bi = block_inverse(a1, Eigen::VectorXd::Zero(1),
                                  Eigen::RowVectorXd::Zero(1), 1.0);
  CHECK(bi.dense().isApprox(ConstMatrix::Identity(2, 2), 1e-14));

  // Random well-conditioned splits up to n = 8 against the dense oracle.
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      ConstMatrix M = ConstMatrix::NullaryExpr(n, n, [&](int, int) { return U(rng); });
      M += 3.0 * n * ConstMatrix::Identity(n, n);  // keep it well-conditioned
      int p = n - 1;
      BlockInverse b = block_inverse(M.topLeftCorner(p, p), M.topRightCorner(p, 1),
                                     M.bottomLeftCorner(1, p), M(p, p));
      CHECK((b.dense() - M.inverse()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((b.dense() * M - ConstMatrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  // delta equal to gamma*alpha^-1*beta makes the Schur complement zero.
  ConstMatrix alpha(1, 1);
  alpha << 2;
  Eigen::VectorXd beta(1);
  beta << 1;
  Eigen::RowVectorXd gamma(1);
  gamma << 1;
  CHECK_THROWS_AS(block_inverse(alpha, beta, gamma, 0.5), Error);
}

TEST_CASE("db_binv_check pattern detection") {
  Grid g = g1();
  // Constant B: exact.
  ConstMatrix C(2, 2);
  C << 1, 2, 0, 1;
  PatternReport pr = db_binv_check(MatrixField::constant(C, g), TriMode::Lower);
  CHECK(pr.ok);
  CHECK(pr.residual == doctest::Approx(0.0));

  // Lemma family: B = [[alpha, alpha*k],[0,1]] with k constant.
  MatrixField Bf(2, g);
  for (int node = 0; node < g.node_count(); ++node) {
    double alpha = 1.0 + 0.5 * std::sin(3.0 * g.x_of(node)) + 1.0;
    ConstMatrix M(2, 2);
    M << alpha, alpha * 0.7, 0, 1;
    Bf.set_at(node, M);
  }
  // DB*B^-1 = [[Dalpha/alpha, 0],[0,0]] is lower triangular for this family.
  CHECK(db_binv_check(Bf, TriMode::Lower).ok);

  // Nonconstant ratio: upper entry of DB*B^-1 is Dphi-like, not lower.
  MatrixField Bbad(2, g);
  for (int node = 0; node < g.node_count(); ++node) {
    ConstMatrix M(2, 2);
    M << 1, std::sin(M_PI * g.x_of(node)), 0, 1;
    Bbad.set_at(node, M);
  }
  PatternReport bad = db_binv_check(Bbad, TriMode::Lower);
  CHECK(!bad.ok);
  CHECK(bad.residual > 1.0);  // comparable to max |pi*cos(pi x)|
}

TEST_CASE("alt_membership certificates") {
  Grid g = g1();
  // Diagonal: all k_j = 0.
  ConstMatrix D = ConstMatrix::Identity(3, 3) * 2.0;
  ALTCertificate c = alt_membership(MatrixField::constant(D, g));
  CHECK(c.ok);
  for (const auto& k : c.k_vectors) CHECK(k.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  // 2x2 family [[a, -d*k],[c, d]]: certificate recovers k.
  double kv = 0.8;
  MatrixField A(2, g);
  for (int node = 0; node < g.node_count(); ++node) {
    double a = 2.0 + std::sin(2 * g.x_of(node)), cc = 0.3, d = 1.5;
    ConstMatrix M(2, 2);
    M << a, -d * kv, cc, d;
    A.set_at(node, M);
  }
  ALTCertificate c2 = alt_membership(A);
  CHECK(c2.ok);
  REQUIRE(c2.k_vectors.size() == 1);
  CHECK(c2.k_vectors[0](0) == doctest::Approx(kv).epsilon(1e-10));

  // Nonconstant b/d ratio: fails at block 1.
  MatrixField Abad(2, g);
  for (int node = 0; node < g.node_count(); ++node) {
    ConstMatrix M(2, 2);
    M << 2, std::sin(M_PI * g.x_of(node)) + 2.0, 0.3, 1.5;
    Abad.set_at(node, M);
  }
  ALTCertificate c3 = alt_membership(Abad);
  CHECK(!c3.ok);
  CHECK(c3.failing_block == 1);
}

TEST_CASE("matrowconda on the structured 3x3 family") {
  Grid g = g1();
  // beta2=0.5, gamma2=1.4, gamma3=1.8 (interior of the stated ranges and
  // nondegenerate: beta2*gamma3 = 0.9 != 1; gamma3 = 2 would make it 1).
  double b1 = 0.7, b2 = 0.5, g2 = 1.4, g3 = 1.8;
  ConstMatrix A(3, 3);
  A << 1, b1, b1 * b2,
       g2, 1, b2,
       g3 * g2, g3, 1;
  RowCondResult rc = matrowconda_check(MatrixField::constant(A, g));
  CHECK(rc.ok);
  CHECK(rc.beta(0) == doctest::Approx(b1));
  CHECK(rc.beta(1) == doctest::Approx(b2));
  CHECK(rc.gamma(1) == doctest::Approx(g2));
  CHECK(rc.gamma(2) == doctest::Approx(g3));

  // gamma3 = 2.0 makes beta2*gamma3 = 1: the nondegeneracy clause trips.
  ConstMatrix Adeg(3, 3);
  Adeg << 1, b1, b1 * b2,
          g2, 1, b2,
          2.0 * g2, 2.0, 1;
  RowCondResult deg = matrowconda_check(MatrixField::constant(Adeg, g));
  CHECK(!deg.ok);

  // Diagonal: degenerate acceptance.
  CHECK(matrowconda_check(const_field(2.0 * ConstMatrix::Identity(3, 3))).ok);

  // Nonconstant ratio: constancy clause.
  MatrixField Abad(2, g);
  for (int node = 0; node < g.node_count(); ++node) {
    ConstMatrix M(2, 2);
    M << 1, 0.5 + 0.2 * g.x_of(node), 0.1, 1;
    Abad.set_at(node, M);
  }
  RowCondResult bad = matrowconda_check(Abad);
  CHECK(!bad.ok);
  CHECK(bad.violated_clause.find("const") != std::string::npos);
}

TEST_CASE("construct_transform bundles") {
  Grid g = g1();

  SUBCASE("diagonal A gives identity transform") {
    ConstMatrix D(2, 2);
    D << 1, 0, 0, 2;
    TransformBundle b = construct_transform(MatrixField::constant(D, g),
                                            TransformStructure::Alt);
    CHECK(b.B_const.isApprox(ConstMatrix::Identity(2, 2), 1e-12));
    CHECK(b.A_d.at(0).isApprox(D, 1e-12));
    CHECK(b.residual < 1e-12);
  }

  SUBCASE("lower triangular 2x2 with constant ratio") {
    ConstMatrix A(2, 2);
    A << 1, 0, 1, 1.5;  // gamma1 = c/a = 1
    TransformBundle b = construct_transform(MatrixField::constant(A, g),
                                            TransformStructure::Alt);
    CHECK(b.B_const.isApprox(ConstMatrix::Identity(2, 2), 1e-12));
    CHECK(b.L_mat.at(0)(1, 0) == doctest::Approx(-1.0));
    CHECK(b.A_d.at(0)(0, 0) == doctest::Approx(1.0));
    CHECK(b.A_d.at(0)(1, 1) == doctest::Approx(1.5));
  }

  SUBCASE("3x3 structured matrix via the row-multiplier path") {
    double b1 = 0.7, b2 = 0.5, g2 = 1.4, g3 = 1.8;
    ConstMatrix A(3, 3);
    A << 1, b1, b1 * b2,
         g2, 1, b2,
         g3 * g2, g3, 1;
    TransformBundle b = construct_transform(MatrixField::constant(A, g),
                                            TransformStructure::RowCond);
    // B is the upper-bidiagonal matrix with -beta_i above the diagonal.
    CHECK(b.B_const(0, 1) == doctest::Approx(-b1));
    CHECK(b.B_const(1, 2) == doctest::Approx(-b2));
    CHECK(b.residual < 1e-12);
    // Bundle invariant: B*A = L^-1*A_d at every node.
    ConstMatrix lhs = b.B_const * A;
    ConstMatrix rhs = b.L_inv.at(0) * b.A_d.at(0);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    for (int i = 0; i < 3; ++i) CHECK(b.A_d.at(0)(i, i) > 0);
  }

  SUBCASE("nonconstant multiplier is rejected") {
    MatrixField Abad(2, g);
    for (int node = 0; node < g.node_count(); ++node) {
      ConstMatrix M(2, 2);
      M << 1, 0.3 + 0.2 * g.x_of(node), 0.1, 1;
      Abad.set_at(node, M);
    }
    CHECK_THROWS_AS(construct_transform(Abad, TransformStructure::Alt), Error);
  }
}

TEST_CASE("blockgencond khat/kbar recovery") {
  Grid g = g1();
  SUBCASE("identity T, diagonal A") {
    ConstMatrix D(2, 2);
    D << 1, 0, 0, 2;
    BlockGenResult r = blockgencond_check(MatrixField::constant(D, g),
                                          MatrixField(2, g),
                                          MatrixField::constant(ConstMatrix::Identity(2, 2), g));
    CHECK(r.ok);
    for (const auto& kh : r.khat) CHECK(kh.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    for (const auto& kb : r.kbar) CHECK(kb.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
  SUBCASE("constructed pair passes, perturbation fails") {
    // T with beta = alpha*khat, khat = 0.5; A built so that
    // -a*khat + b = (d - c*khat)*kbar with kbar = 0.25 at every node.
    double khat = 0.5, kbar = 0.25;
    MatrixField A(2, g), T(2, g);
    for (int node = 0; node < g.node_count(); ++node) {
      double alpha = 2.0 + std::sin(g.x_of(node));
      ConstMatrix Tm(2, 2);
      Tm << alpha, alpha * khat, 0.2, 1.0;
      T.set_at(node, Tm);
      double a = 3.0 + g.x_of(node), c = 0.4, d = 2.0;
      double b = a * khat + (d - c * khat) * kbar;
      ConstMatrix Am(2, 2);
      Am << a, b, c, d;
      A.set_at(node, Am);
    }
    BlockGenResult r = blockgencond_check(A, MatrixField(2, g), T);
    CHECK(r.ok);
    REQUIRE(!r.khat.empty());
    CHECK(r.khat[0](0) == doctest::Approx(khat).epsilon(1e-9));
    CHECK(r.kbar[0](0) == doctest::Approx(kbar).epsilon(1e-9));

    MatrixField Abad = A;
    ConstMatrix M = Abad.at(5);
    M(0, 1) += 0.05;
    Abad.set_at(5, M);
    CHECK(!blockgencond_check(Abad, MatrixField(2, g), T).ok);
  }
}

TEST_CASE("genAcond structure") {
  Grid g = g1();
  // b = -d*k family (2x2): recovered k, and CB*A admits the certificate.
  double kv = 0.6;
  MatrixField A(2, g);
  for (int node = 0; node < g.node_count(); ++node) {
    double a = 2.0 + std::cos(g.x_of(node)), c = 0.3, d = 1.2;
    ConstMatrix M(2, 2);
    M << a, -d * kv, c, d;
    A.set_at(node, M);
  }
  GenACondResult r = genAcond_structure(A);
  CHECK(r.ok);
  CHECK(r.k(0) == doctest::Approx(kv).epsilon(1e-9));
  CHECK(alt_membership(A.premultiply_const(r.CB)).ok);

  // Nonconstant b/d: failure.
  MatrixField Abad(2, g);
  for (int node = 0; node < g.node_count(); ++node) {
    ConstMatrix M(2, 2);
    M << 2, std::sin(1 + g.x_of(node)), 0.3, 1.2;
    Abad.set_at(node, M);
  }
  CHECK(!genAcond_structure(Abad).ok);
}

TEST_CASE("zm_decompose") {
  ZMDecomposition r = zm_decompose(ConstMatrix::Identity(2, 2));
  CHECK(r.s == doctest::Approx(1.0));
  CHECK(r.B.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

  ConstMatrix P(2, 2);
  P << 2, -1, -1, 2;
  ZMDecomposition r2 = zm_decompose(P);
  CHECK(r2.s == doctest::Approx(2.0));
  CHECK(r2.B(0, 1) == doctest::Approx(1.0));
  CHECK(r2.rho_B == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r2.rho_B < r2.s);

  ConstMatrix bad(2, 2);
  bad << 1, -2, -2, 1;  // inverse has negative entries
  CHECK_THROWS_AS(zm_decompose(bad), Error);

  ConstMatrix notz(2, 2);
  notz << 1, 0.5, 0, 1;
  CHECK_THROWS_AS(zm_decompose(notz), Error);
}

TEST_CASE("zm_decompose randomized against the dense oracle") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int accepted = 0;
  for (int rep = 0; rep < 400 && accepted < 200; ++rep) {
    int n = 2 + static_cast<int>(U(rng) * 6.99);  // 2..8
    ConstMatrix B = ConstMatrix::NullaryExpr(n, n, [&](int, int) { return U(rng); });
    double s = B.rowwise().sum().maxCoeff() + 0.5 + U(rng);  // diagonally dominant
    ConstMatrix P = s * ConstMatrix::Identity(n, n) - B;
    ZMDecomposition d = zm_decompose(P);
    ++accepted;
    // Exact reassembly and the spectral-radius bound.
    CHECK(((d.s * ConstMatrix::Identity(n, n) - d.B) - P).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.rho_B < d.s);
    // Power-iteration radius vs dense eigenvalues.
    double dense_rho = d.B.eigenvalues().cwiseAbs().maxCoeff();
    CHECK(std::abs(d.rho_B - dense_rho) < 1e-8 * std::max(1.0, dense_rho));
  }
  CHECK(accepted == 200);
}

TEST_CASE("product positivity") {
  ConstMatrix A3 = ConstMatrix::Constant(2, 2, 3.0);
  ProductPositivity p = product_positivity(1.0, A3, 1.0, A3);
  CHECK(p.positive);
  CHECK(p.sufficient_condition);

  ProductPositivity z = product_positivity(1.0, ConstMatrix::Zero(2, 2), 1.0,
                                           ConstMatrix::Zero(2, 2));
  CHECK(!z.positive);  // identity has zero off-diagonals
  CHECK(!z.sufficient_condition);

  ConstMatrix A1 = ConstMatrix::Constant(2, 2, 1.0);
  ProductPositivity one = product_positivity(1.0, A1, 1.0, A1);
  CHECK(!one.sufficient_condition);
  // (I - A1)^2 = [[1,0],[0,1]] - 2*A1 + A1^2; direct product decides.
  ConstMatrix prod = (ConstMatrix::Identity(2, 2) - A1) * (ConstMatrix::Identity(2, 2) - A1);
  CHECK(one.positive == (prod.minCoeff() > 0));
}

TEST_CASE("product positivity randomized entries > 2") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(2.0 + 1e-6, 9.0);
  for (int rep = 0; rep < 200; ++rep) {
    int n = 2 + rep % 5;
    ConstMatrix A = ConstMatrix::NullaryExpr(n, n, [&](int, int) { return U(rng); });
    ConstMatrix B = ConstMatrix::NullaryExpr(n, n, [&](int, int) { return U(rng); });
    ProductPositivity p = product_positivity(1.0, A, 1.0, B);
    CHECK(p.sufficient_condition);
    CHECK(p.positive);
    CHECK(p.min_entry > 0);
  }
}

TEST_CASE("sign flip transform") {
  ConstMatrix G(2, 2);
  G << 1, -1, -1, 1;
  ConstMatrix F = sign_flip_transform(G, 1);
  CHECK(F(0, 1) == doctest::Approx(1.0));
  CHECK(F(1, 0) == doctest::Approx(1.0));
  CHECK(is_cooperative(F, 0.0));

  // Involution.
  CHECK(sign_flip_transform(F, 1).isApprox(G, 0.0));

  // Diagonal unchanged.
  ConstMatrix D = ConstMatrix::Identity(3, 3) * 4.0;
  CHECK(sign_flip_transform(D, 2).isApprox(D, 0.0));

  // Mixed signs are not fixed by a pure diagonal flip.
  ConstMatrix M(2, 2);
  M << 1, -1, 2, 1;
  CHECK(!is_cooperative(sign_flip_transform(M, 1), 0.0));

  CHECK_THROWS_AS(sign_flip_transform(G, 0), Error);
  CHECK_THROWS_AS(sign_flip_transform(G, 2), Error);
}
