#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace mfq;
using testsupport::max_abs;

TEST_CASE("basis enumeration and ordering") {
  auto s = build_space(2, 2, 0.1);
  CHECK(s->dim() == 6);
  CHECK(s->level_dim(0) == 1);
  CHECK(s->level_dim(1) == 2);
  CHECK(s->level_dim(2) == 3);
  CHECK(s->multi_index(3) == MultiIndex({2, 0}));
  CHECK(s->multi_index(4) == MultiIndex({1, 1}));
  CHECK(s->multi_index(5) == MultiIndex({0, 2}));

  auto s1 = build_space(1, 7, 0.5);
  for (int n = 0; n <= 7; ++n) CHECK(s1->level_dim(n) == 1);

  // brute force count of |alpha| = 3 in three modes
  int count = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 3; ++c) count += (a + b + c == 3);
  auto s3 = build_space(3, 3, 0.1);
  CHECK(s3->level_dim(3) == static_cast<std::size_t>(count));
  CHECK(count == 10);
  for (std::size_t i = 0; i < s3->dim(); ++i) CHECK(s3->index_of(s3->multi_index(i)) == i);
}

TEST_CASE("space construction errors") {
  CHECK_THROWS_AS(build_space(2, 3, 0.0), DomainError);
  CHECK_THROWS_AS(build_space(2, 3, -1.0), DomainError);
  CHECK_THROWS_AS(build_space(6, 60, 0.1, 1000), CapacityError);
}

TEST_CASE("creation and annihilation on basis states") {
  const double eps = 0.3;
  auto s = build_space(2, 3, eps);
  const auto ad1 = create(0, s);
  const FockVector v = ad1.apply(FockVector::vacuum(s));
  CHECK(std::abs(v.coeffs(static_cast<Eigen::Index>(s->index_of(MultiIndex({1, 0})))) - std::sqrt(eps)) < 1e-15);
  CHECK(std::abs(v.norm() - std::sqrt(eps)) < 1e-15);

  const FockVector w = annihilate(0, s).apply(FockVector::basis_state(s, MultiIndex({2, 0})));
  CHECK(std::abs(w.coeffs(static_cast<Eigen::Index>(s->index_of(MultiIndex({1, 0})))) - std::sqrt(2 * eps)) < 1e-15);
  CHECK(std::abs(w.norm() - std::sqrt(2 * eps)) < 1e-15);

  CHECK(annihilate(1, s).apply(FockVector::vacuum(s)).norm() == 0.0);
  Vec xi(2);
  xi << 1.0, 1.0;
  CHECK(a_general(xi, s).apply(FockVector::vacuum(s)).norm() == 0.0);
  CHECK_THROWS_AS(create(2, s), DomainError);
}

TEST_CASE("ladder operators agree with the tensor definitions") {
  std::mt19937_64 rng(11);
  for (int d = 1; d <= 2; ++d) {
    const double eps = 0.37;
    auto s = build_space(d, 5, eps);
    const Vec xi = random_complex_vector(rng, d);
    const auto ad = a_dag_general(xi, s);
    const auto a = a_general(xi, s);
    for (int n = 0; n <= 4; ++n) {
      const Mat Jn = tensor_isometry(d, n), Jn1 = tensor_isometry(d, n + 1);
      const Mat In = Mat::Identity(Jn.rows(), Jn.rows());
      const Mat raise = std::sqrt(eps * (n + 1)) * Jn1.adjoint() * kron(xi, In) * Jn;
      CHECK(max_abs(ad.block(n + 1, n) - raise) < 1e-12);
      if (n >= 1) {
        const Mat Jm = tensor_isometry(d, n - 1);
        const Mat Im = Mat::Identity(Jm.rows(), Jm.rows());
        const Mat lower = std::sqrt(eps * n) * Jm.adjoint() * kron(xi.adjoint(), Im) * Jn;
        CHECK(max_abs(a.block(n - 1, n) - lower) < 1e-12);
      }
    }
  }
}

TEST_CASE("canonical commutation relations on guarded levels") {
  std::mt19937_64 rng(3);
  const double eps = 0.05;
  auto s = build_space(3, 8, eps);
  const int L = 6;
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x1 = random_complex_vector(rng, 3), x2 = random_complex_vector(rng, 3);
    const auto a1 = a_general(x1, s), ad2 = a_dag_general(x2, s);
    const Mat comm = (a1 * ad2 - ad2 * a1).guarded(L);
    const Mat expect = eps * inner(x1, x2) * Mat::Identity(comm.rows(), comm.cols());
    CHECK(max_abs(comm - expect) <= 1e-12);
    const auto a2 = a_general(x2, s);
    CHECK(max_abs((a1 * a2 - a2 * a1).matrix()) <= 1e-12);
    const auto ad1 = a_dag_general(x1, s);
    CHECK(max_abs((ad1 * ad2 - ad2 * ad1).matrix()) <= 1e-12);
  }
}

TEST_CASE("field operators") {
  std::mt19937_64 rng(5);
  const double eps = 0.2;
  auto s = build_space(2, 7, eps);
  const Vec x1 = random_complex_vector(rng, 2), x2 = random_complex_vector(rng, 2);
  const auto phi1 = field_phi(x1, s), phi2 = field_phi(x2, s), pi2 = field_pi(x2, s);
  CHECK(phi1.is_hermitian());
  CHECK(max_abs((pi2 - field_phi(I_unit * x2, s)).matrix()) == 0.0);
  const int L = s->n_max() - 2;
  const Mat c1 = (phi1 * phi2 - phi2 * phi1).guarded(L);
  CHECK(max_abs(c1 - I_unit * eps * sigma_form(x1, x2) * Mat::Identity(c1.rows(), c1.cols())) < 1e-12);
  const Mat c2 = (phi1 * pi2 - pi2 * phi1).guarded(L);
  CHECK(max_abs(c2 - I_unit * eps * s_form(x1, x2) * Mat::Identity(c2.rows(), c2.cols())) < 1e-12);
  const FockVector v = phi1.apply(FockVector::vacuum(s));
  const FockVector w = a_dag_general(x1, s).apply(FockVector::vacuum(s));
  CHECK((v.coeffs - w.coeffs / std::sqrt(2.0)).norm() < 1e-15);
}

TEST_CASE("Weyl operators") {
  std::mt19937_64 rng(7);
  const double eps = 0.1;
  auto s = build_space(2, 40, eps);
  Vec zero = Vec::Zero(2);
  CHECK(max_abs(weyl(zero, s).matrix() - Mat::Identity(s->dim(), s->dim())) < 1e-14);

  Vec xi = 0.8 * random_unit_vector(rng, 2);
  const auto W = weyl(xi, s);
  CHECK(max_abs(W.matrix().adjoint() * W.matrix() - Mat::Identity(s->dim(), s->dim())) < 1e-12);
  // vacuum overlap: Gaussian series
  CHECK(std::abs(W.matrix()(0, 0) - std::exp(-eps * xi.squaredNorm() / 4.0)) < 1e-12);

  const Vec x1 = 0.7 * random_unit_vector(rng, 2), x2 = 0.6 * random_unit_vector(rng, 2);
  const Mat lhs = weyl(x1, s).matrix() * weyl(x2, s).matrix();
  const Mat rhs = std::exp(-I_unit * (eps / 2.0) * sigma_form(x1, x2)) * weyl(x1 + x2, s).matrix();
  const auto low = static_cast<Eigen::Index>(s->dim_up_to(6));
  CHECK(max_abs(lhs.leftCols(low) - rhs.leftCols(low)) < 1e-10);
  // the opposite orientation of the phase is distinguishable
  const Mat wrong = std::exp(+I_unit * (eps / 2.0) * sigma_form(x1, x2)) * weyl(x1 + x2, s).matrix();
  CHECK(max_abs(lhs.leftCols(low) - wrong.leftCols(low)) > 1e-4);
}

TEST_CASE("number operator, dGamma and Gamma") {
  std::mt19937_64 rng(9);
  const double eps = 0.25;
  auto s = build_space(3, 5, eps);
  const auto N = number_operator(s);
  for (std::size_t i = 0; i < s->dim(); ++i)
    CHECK(std::abs(N.matrix()(i, i) - eps * s->multi_index(i).total()) < 1e-15);
  CHECK(max_abs((dGamma(Mat::Identity(3, 3), s) - N).matrix()) < 1e-14);

  const Mat A = random_hermitian(rng, 3);
  const double t = 0.7;
  const Mat lhs = Gamma(hermitian_expi(A, t), s).matrix();
  const Mat rhs = hermitian_expi(dGamma(A, s).matrix(), t / eps);
  CHECK(max_abs(lhs - rhs) < 1e-10);
  CHECK(max_abs(lhs.adjoint() * lhs - Mat::Identity(s->dim(), s->dim())) < 1e-12);

  auto s2 = build_space(2, 3, eps);
  Mat S = Mat::Identity(2, 2);
  const double sv = 0.6;
  S(0, 0) = sv;
  const auto G = Gamma(S, s2);
  const auto i20 = static_cast<Eigen::Index>(s2->index_of(MultiIndex({2, 0})));
  CHECK(std::abs(G.matrix()(i20, i20) - sv * sv) < 1e-15);
  // full tensor oracle for a generic S
  const Mat S2 = random_complex_matrix(rng, 2, 2);
  const Mat J = tensor_isometry(2, 3);
  CHECK(max_abs(sym_power(S2, 3) - J.adjoint() * kron(S2, kron(S2, S2)) * J) < 1e-12);
}

TEST_CASE("symmetrizer oracle") {
  auto s = build_space(2, 3, 0.1);
  std::mt19937_64 rng(1);
  const Vec xi = random_complex_vector(rng, 2);
  const Vec t = tensor_power(xi, 2);
  const FockVector v = symmetrizer_oracle(t, 2, s);
  // xi (x) xi is already symmetric: embedding back recovers it
  const Mat J = tensor_isometry(2, 2);
  CHECK((J * v.coeffs.segment(s->level_offset(2), 3) - t).norm() < 1e-14);

  Vec e12 = Vec::Zero(4);
  e12(1) = 1.0;  // e_1 (x) e_2
  const FockVector u = symmetrizer_oracle(e12, 2, s);
  CHECK(std::abs(u.coeffs(static_cast<Eigen::Index>(s->index_of(MultiIndex({1, 1})))) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(u.norm() - 1.0 / std::sqrt(2.0)) < 1e-15);

  // polarization: x1 v x2 = (1/(2^2 2!)) sum_{s_i = +-1} s1 s2 (s1 x1 + s2 x2)^{(x)2}
  const Vec x1 = random_complex_vector(rng, 2), x2 = random_complex_vector(rng, 2);
  Vec pol = Vec::Zero(4);
  for (int s1 : {-1, 1})
    for (int s2 : {-1, 1}) pol += double(s1 * s2) * tensor_power(double(s1) * x1 + double(s2) * x2, 2);
  pol /= 8.0;
  const Vec sym = 0.5 * (kron(x1, x2) + kron(x2, x1));
  CHECK((pol - sym).norm() < 1e-14);
  CHECK((symmetrizer_oracle(kron(x1, x2), 2, s).coeffs - symmetrizer_oracle(pol, 2, s).coeffs).norm() < 1e-14);
}
