#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpcorr/classify.hpp"
#include "mpcorr/states.hpp"
#include "support/cc_states.hpp"

using namespace mpcorr;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

double sech(double x) { return 1 / std::cosh(x); }

}  // namespace

TEST_CASE("correlation_spectrum") {
  const auto zero = correlation_spectrum(RMatrix<double>(RMatrix<double>::Zero(3, 3)));
  CHECK(zero.nsv_count == 0);
  CHECK(zero.threshold_used == 1e-12);

  const auto singlet = correlation_spectrum(decompose_bipartite(bell(BellState::PsiMinus)).C());
  CHECK(singlet.nsv_count == 3);
  CHECK((singlet.singular_values - Eigen::Vector3d::Ones()).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE(singlet.eigenvalues);
  CHECK(std::abs(singlet.eigenvalues->sum() - std::complex<double>(-3)) < 1e-14);

  const Eigen::Vector3d z(0, 0, 1);
  const auto cc = cc_mixture<double>({{0.5, z, -z}, {0.5, -z, z}});
  CHECK(correlation_spectrum(decompose_bipartite(cc).C()).nsv_count == 1);

  testing::Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const RMatrix<double> c = RMatrix<double>::Random(3, 3);
    const auto s = correlation_spectrum(c);
    CHECK(std::abs(s.eigenvalues->sum().real() - c.trace()) < 1e-10);
    for (Index i = 1; i < s.singular_values.size(); ++i) CHECK(s.singular_values(i) <= s.singular_values(i - 1));
  }
  const auto rect = correlation_spectrum(RMatrix<double>(RMatrix<double>::Ones(3, 8)));
  CHECK(rect.nsv_count == 1);
  CHECK(!rect.eigenvalues);
}

TEST_CASE("ph_test") {
  const auto s = ph_test(bell(BellState::PsiMinus));
  CHECK(s.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(s.entangled);

  const auto boundary = ph_test(generalized_werner(1.0 / 3.0, 0.0));
  CHECK(std::abs(boundary.min_eigenvalue) < 1e-15);
  CHECK(!boundary.entangled);

  testing::Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto product = tensor(testing::random_state(rng, {2}), testing::random_state(rng, {3}));
    CHECK(ph_test(product).min_eigenvalue >= -1e-12);
    CHECK(!ph_test(product).entangled);
    CHECK(ph_test(product).conclusive);
  }
  const auto big = ph_test(tensor(testing::random_state(rng, {3}), testing::random_state(rng, {3})));
  CHECK(!big.conclusive);
  CHECK(code_of([] { ph_test(ghz(3, 2)); }) == ErrorCode::ShapeMismatch);
}

TEST_CASE("ph_test_signflip agrees with ph_test") {
  CHECK(ph_test_signflip(bell(BellState::PsiMinus)).entangled);
  CHECK(ph_test_signflip(bell(BellState::PsiMinus)).min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(!ph_test_signflip(validate<double>(CMatrix<double>::Identity(4, 4) / 4.0, {2, 2})).entangled);

  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 16; ++j) {
      const auto rho = generalized_werner(0.05 * i, -2.0 + 0.25 * j);
      const auto a = ph_test(rho);
      const auto b = ph_test_signflip(rho);
      CHECK(a.entangled == b.entangled);
      CHECK(std::abs(a.min_eigenvalue - b.min_eigenvalue) < 1e-12);
    }

  testing::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto rho = trial % 4 ? testing::random_state(rng, {2, 2}) : testing::random_pure(rng, {2, 2});
    CHECK(ph_test(rho).entangled == ph_test_signflip(rho).entangled);
  }
  CHECK(code_of([&] { ph_test_signflip(testing::random_state(rng, {2, 3})); }) == ErrorCode::Unsupported);
}

TEST_CASE("ph_invariants on the generalized Werner family") {
  for (double p : {0.1, 0.5, 0.9})
    for (double theta : {-1.2, -0.3, 0.3, 0.8}) {
      const auto inv = ph_invariants(decompose_bipartite(generalized_werner(p, theta)));
      const double t = std::tanh(2 * theta);
      CHECK(std::abs(inv.xi + 2 * p * sech(2 * theta)) < 1e-11);
      CHECK(std::abs(inv.na_dot_nb + p * p * t * t) < 1e-14);
      CHECK(std::abs(-inv.xi + std::sqrt(inv.xi * inv.xi / 4 - inv.na_dot_nb) - p * (1 + 2 * sech(2 * theta))) < 1e-10);
    }

  const auto inv = ph_invariants(decompose_bipartite(generalized_werner(0.5, 0.3)));
  CHECK(std::abs(-inv.xi + std::sqrt(inv.xi * inv.xi / 4 - inv.na_dot_nb) - 0.5 * (1 + 2 * sech(0.6))) <= 1e-10);
  CHECK(std::abs(ph_condition_value(inv) - 0.5 * (1 + 2 * sech(0.6))) <= 1e-10);

  CHECK(code_of([] { ph_invariants(decompose_bipartite(generalized_werner(0.5, 0.0))); }) ==
        ErrorCode::DegenerateBlochVectors);
}

TEST_CASE("ph_condition_explicit") {
  CHECK(0.9 * (1 + 2 * sech(0.4)) == doctest::Approx(2.565).epsilon(1e-3));
  CHECK(ph_condition_explicit(ph_invariants(decompose_bipartite(generalized_werner(0.9, 0.2)))));

  // theta = 0 gives xi = -2p and n_A.n_B = 0; the condition is still defined there.
  PHInvariants<double> werner{-0.4, 0.0, 0.0};
  CHECK(ph_condition_value(werner) == doctest::Approx(0.6));
  CHECK(!ph_condition_explicit(werner));

  PHInvariants<double> bad{0.1, 1.0, 0.0};
  CHECK(code_of([&] { ph_condition_explicit(bad); }) == ErrorCode::NegativeDiscriminant);

  // The largest root of (x + xi/2)^2 + xi (x + xi/2) + n_A.n_B = 0.
  const auto inv = ph_invariants(decompose_bipartite(generalized_werner(0.7, -0.5)));
  const double x = ph_condition_value(inv);
  const double y = x + inv.xi / 2;
  CHECK(std::abs(y * y + inv.xi * y + inv.na_dot_nb) < 1e-12);

  for (int i = 1; i <= 50; ++i)
    for (int j = 0; j <= 40; ++j) {
      const double theta = -2.0 + 0.1 * j;
      if (std::abs(std::tanh(2 * theta)) < 1e-6) continue;
      const auto rho = generalized_werner(0.02 * i, theta);
      CHECK(ph_condition_explicit(ph_invariants(decompose_bipartite(rho))) == ph_test(rho).entangled);
    }
}

TEST_CASE("ph invariants are unchanged by simultaneous local rotations") {
  testing::Rng rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = testing::random_state(rng, {2, 2});
    const auto rotated = testing::random_common_rotation(rng, rho);
    const auto a = ph_invariants(decompose_bipartite(rho));
    const auto b = ph_invariants(decompose_bipartite(rotated));
    CHECK(std::abs(a.xi - b.xi) <= 1e-10);
    CHECK(std::abs(a.na_dot_nb - b.na_dot_nb) <= 1e-10);
  }
}

TEST_CASE("classify_two_qubit") {
  const auto bell_report = classify_two_qubit(bell(BellState::PhiPlus));
  CHECK(bell_report.category == Category::PureEntangled);
  CHECK(bell_report.nsv_count == 3);
  CHECK(!bell_report.invariants);

  CVector<double> ud(4), du(4);
  ud << 0, 1, 0, 0;
  du << 0, 0, 1, 0;
  const auto cc = mix<double>({0.5, 0.5}, {from_pure<double>(ud, {2, 2}), from_pure<double>(du, {2, 2})});
  const auto cc_report = classify_two_qubit(cc);
  CHECK(cc_report.category == Category::ClassicallyCorrelated);
  CHECK(cc_report.nsv_count == 1);

  const auto w = classify_two_qubit(generalized_werner(0.9, 0.0));
  CHECK(w.category == Category::MixedEntangled);
  CHECK(w.nsv_count == 3);
  CHECK(w.ph_entangled);

  CVector<double> prod(4);
  prod << 1, 0, 0, 0;
  CHECK(classify_two_qubit(from_pure<double>(prod, {2, 2})).category == Category::PureProduct);

  testing::Rng rng(3);
  const auto mixed_product = tensor(testing::random_state(rng, {2}), testing::random_state(rng, {2}));
  const auto mp = classify_two_qubit(mixed_product);
  CHECK(mp.category == Category::Uncorrelated);
  CHECK(mp.invariants);

  CHECK(classify_two_qubit(generalized_werner(0.2, 0.5)).category == Category::ClassicallyCorrelated);
  CHECK(code_of([] { classify_two_qubit(ghz(3, 2)); }) == ErrorCode::Unsupported);
}

TEST_CASE("NSV count follows the number of classically correlated terms") {
  testing::Rng rng(101);
  for (int k = 2; k <= 8; ++k) {
    const int expected = std::min(k - 1, 3);
    int hits = 0;
    for (int draw = 0; draw < 200; ++draw) {
      const auto rho = testing::random_cc_qubits(rng, k);
      const int nsv = correlation_spectrum(decompose_bipartite(rho).C()).nsv_count;
      CHECK(nsv <= expected);
      hits += nsv == expected;
      CHECK(!ph_test(rho).entangled);
    }
    CHECK(hits >= 198);
  }
  for (int k = 2; k <= 10; ++k)
    for (int draw = 0; draw < 20; ++draw) {
      const int nsv =
          correlation_spectrum(decompose_bipartite(testing::random_cc_product_mixture(rng, 3, k)).C()).nsv_count;
      CHECK(nsv <= std::min(k - 1, 8));
      if (k == 2) CHECK(nsv == 1);
    }
}

TEST_CASE("pure two-qutrit NSV classes") {
  testing::Rng rng(103);
  for (int draw = 0; draw < 20; ++draw) {
    // Schmidt rank 2: local unitaries applied to a|00> + b|11>.
    CVector<double> psi = CVector<double>::Zero(9);
    std::uniform_real_distribution<double> uni(0.2, 1.0);
    psi(0) = uni(rng);
    psi(4) = uni(rng);
    const auto rank2 = testing::random_local_rotation(rng, from_pure<double>(psi, {3, 3}));
    CHECK(correlation_spectrum(decompose_bipartite(rank2).C()).nsv_count == 3);
    CHECK(correlation_spectrum(decompose_bipartite(testing::random_pure(rng, {3, 3})).C()).nsv_count == 8);
  }
}
