#include "doctest.h"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "netwave/forms.hpp"
#include "netwave/linalg.hpp"

using namespace netwave;

namespace {

Matrix diag_of(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(Eigen::Index(d.size()), Eigen::Index(d.size()));
  int i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

// second-sound flux matrix QM at unit parameters
Matrix second_sound_qm_unit() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 1) = m(1, 0) = 1.0;
  m(1, 2) = m(2, 1) = -1.0;
  m(2, 3) = m(3, 2) = -1.0;
  return m;
}

Matrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  return Matrix(qr.householderQ()) * Matrix::Identity(n, n);
}

Matrix planted(int neg, int pos, std::mt19937_64& rng) {
  const int n = neg + pos;
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  Matrix u = random_unitary(n, rng);
  Vector lambda(n);
  for (int i = 0; i < n; ++i)
    lambda(i) = (i < neg ? -1.0 : 1.0) * mag(rng);
  Matrix p = u * lambda.asDiagonal() * u.adjoint();
  return 0.5 * (p + p.adjoint());
}

}  // namespace

TEST_CASE("signature on diagonal forms") {
  auto s1 = signature(HermitianForm::validate(diag_of({1, 1})));
  CHECK(s1.negative == 0);
  CHECK(s1.positive == 2);
  auto s2 = signature(HermitianForm::validate(diag_of({-1, 1})));
  CHECK(s2.negative == 1);
  CHECK(s2.positive == 1);
}

TEST_CASE("second-sound flux signature and spectrum at unit parameters") {
  auto form = HermitianForm::validate(second_sound_qm_unit());
  auto s = signature(form);
  CHECK(s.negative == 2);
  CHECK(s.positive == 2);
  // eigenvalues are the golden-ratio pair +-(1 +- sqrt 5)/2
  Eigen::SelfAdjointEigenSolver<Matrix> es(form.P);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double psi = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(es.eigenvalues()(0) == doctest::Approx(-phi).epsilon(1e-12));
  CHECK(es.eigenvalues()(1) == doctest::Approx(-psi).epsilon(1e-12));
  CHECK(es.eigenvalues()(2) == doctest::Approx(psi).epsilon(1e-12));
  CHECK(es.eigenvalues()(3) == doctest::Approx(phi).epsilon(1e-12));
}

TEST_CASE("isotropy index") {
  CHECK(isotropy_index(HermitianForm::validate(diag_of({1, 1}))) == 0);
  CHECK(isotropy_index(HermitianForm::validate(diag_of({-1, 1}))) == 1);
  CHECK(isotropy_index(HermitianForm::validate(diag_of({-1, -1, 1, 1, 1}))) == 2);
}

TEST_CASE("constructed isotropic bases") {
  {
    auto f = HermitianForm::validate(diag_of({-1, 1}));
    Matrix b = max_totally_isotropic_basis(f);
    REQUIRE(b.cols() == 1);
    Matrix expect(2, 1);
    expect << 1, 1;
    CHECK(subspace_distance(b, expect) < 1e-12);
  }
  {
    auto f = HermitianForm::validate(diag_of({-4, 1}));
    Matrix b = max_totally_isotropic_basis(f);
    Matrix expect(2, 1);
    expect << 1, 2;
    CHECK(subspace_distance(b, expect) < 1e-12);
    CHECK(std::abs((b.adjoint() * f.P * b)(0, 0)) < 1e-12);
  }
  {
    // shallow-water endpoint form at g=10, H=1, V=1
    Matrix B(2, 2);
    B << 10.0, 10.0, 10.0, 1.0;
    auto f = HermitianForm::validate(B);
    CHECK(isotropy_index(f) == 1);
    Matrix b = max_totally_isotropic_basis(f);
    REQUIRE(b.cols() == 1);
    CHECK((b.adjoint() * f.P * b).norm() <= 1e-10);
  }
}

TEST_CASE("cone classification") {
  auto f = HermitianForm::validate(diag_of({-1, 1}));
  Matrix b11(2, 1), b10(2, 1);
  b11 << 1, 1;
  b10 << 1, 0;
  CHECK(classify_subspace(f, b11).cls == ConeClass::Null);
  CHECK(classify_subspace(f, b10).cls == ConeClass::Nonpositive);
  CHECK(classify_subspace(f, Matrix::Identity(2, 2)).cls == ConeClass::Indefinite);

  // edge-start block of the two-component relativistic model: T = -M
  const Complex i(0, 1);
  Matrix M(2, 2);
  M << 0.0, i, -i, 0.0;
  auto ft = HermitianForm::validate(Matrix(-M));
  CHECK(classify_subspace(ft, b11).cls == ConeClass::Null);
}

TEST_CASE("nonpositive dimension bound and witness") {
  CHECK(max_nonpositive_dim(HermitianForm::validate(diag_of({1, 1}))) == 0);
  auto f = HermitianForm::validate(diag_of({-1, -1, 1}));
  CHECK(max_nonpositive_dim(f) == 2);
  Matrix w = nonpositive_witness(f);
  REQUIRE(w.cols() == 2);
  Matrix expect(3, 2);
  expect << 1, 0, 0, 1, 0, 0;
  CHECK(subspace_distance(w, expect) < 1e-12);
  CHECK(max_nonpositive_dim(HermitianForm::validate(second_sound_qm_unit())) == 2);
}

TEST_CASE("singular forms are rejected") {
  CHECK_THROWS_AS(HermitianForm::validate(diag_of({0, 1})), Error);
  Matrix nonherm(2, 2);
  nonherm << 1, 1, 0, 1;
  CHECK_THROWS_AS(HermitianForm::validate(nonherm), Error);
}

TEST_CASE("planted signatures: recovery, isotropy, witness") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + int(rng() % 5);
    const int neg = int(rng() % (n + 1));
    const int pos = n - neg;
    if (neg == 0 && pos == 0) continue;
    auto f = HermitianForm::validate(planted(neg, pos, rng));
    auto s = signature(f);
    CHECK(s.negative == neg);
    CHECK(s.positive == pos);
    CHECK(isotropy_index(f) == std::min(neg, pos));
    Matrix b = max_totally_isotropic_basis(f);
    CHECK(int(b.cols()) == std::min(neg, pos));
    if (b.cols() > 0) {
      CHECK(numeric_rank(b) == b.cols());
      CHECK((b.adjoint() * f.P * b).norm() <= 1e-8);
      CHECK(classify_subspace(f, b).cls == ConeClass::Null);
    }
    if (neg > 0)
      CHECK(classify_subspace(f, nonpositive_witness(f)).cls == ConeClass::Nonpositive);
  }
}

TEST_CASE("brute-force search oracle agrees with the isotropy index (n <= 3)") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + int(rng() % 2);
    const int neg = int(rng() % (n + 1));
    auto f = HermitianForm::validate(planted(neg, n - neg, rng));
    auto q = [&](const Vector& xi) { return (f.P * xi).dot(xi).real(); };
    // sample the unit sphere; if both signs occur, bisect to an isotropic
    // vector, otherwise the form is definite on the sphere
    Vector vpos, vneg;
    bool has_pos = false, has_neg = false;
    for (int s = 0; s < 4000 && !(has_pos && has_neg); ++s) {
      Vector xi(n);
      for (int r = 0; r < n; ++r) xi(r) = Complex(g(rng), g(rng));
      xi.normalize();
      const double val = q(xi);
      if (val > 0 && !has_pos) vpos = xi, has_pos = true;
      if (val < 0 && !has_neg) vneg = xi, has_neg = true;
    }
    bool found = false;
    if (has_pos && has_neg) {
      Vector a = vpos, b = vneg;
      for (int it = 0; it < 200 && !found; ++it) {
        Vector mid = (a + b).normalized();
        const double val = q(mid);
        if (std::abs(val) <= 1e-9)
          found = true;
        else if (val > 0)
          a = mid;
        else
          b = mid;
      }
    }
    CHECK(found == (isotropy_index(f) >= 1));
  }
}

TEST_CASE("sign-flipped members of the isotropic family are isotropic too") {
  std::mt19937_64 rng(4);
  auto f = HermitianForm::validate(planted(2, 3, rng));
  Matrix plus = max_totally_isotropic_basis(f);
  Matrix minus = max_totally_isotropic_basis(f, {}, {true, false});
  REQUIRE(plus.cols() == 2);
  REQUIRE(minus.cols() == 2);
  CHECK((minus.adjoint() * f.P * minus).norm() <= 1e-8);
  CHECK(subspace_distance(plus, minus) > 1e-3);  // a different member
}
