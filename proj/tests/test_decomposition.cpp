#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpcorr/classify.hpp"
#include "mpcorr/decomposition.hpp"
#include "mpcorr/measures.hpp"
#include "mpcorr/states.hpp"
#include "support/oracle.hpp"
#include "support/random_states.hpp"

using namespace mpcorr;

namespace {

double max_abs(const auto& m) { return m.cwiseAbs().maxCoeff(); }

void check_against_oracle(const DensityMatrixd& rho, const BlochDecompositiond& d, double tol) {
  const auto& dims = rho.dims();
  for (int p = 0; p < rho.parties(); ++p)
    for (Index i = 0; i < d.coherence_vectors[std::size_t(p)].size(); ++i)
      CHECK(std::abs(d.coherence_vectors[std::size_t(p)](i) - testing::oracle_single(rho.matrix(), dims, p, int(i))) <=
            tol);
  for (const auto& [key, c] : d.pair_correlations)
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j)
        CHECK(std::abs(c(i, j) - testing::oracle_correlation(rho.matrix(), dims, {key.first, key.second},
                                                              {int(i), int(j)})) <= tol);
  auto check_tensor = [&](const CorrelationTensor<double>& t) {
    for (Index flat = 0; flat < t.values().size(); ++flat)
      CHECK(std::abs(t.values()(flat) - testing::oracle_correlation(rho.matrix(), dims, t.parties(), t.unflatten(flat))) <=
            tol);
  };
  for (const auto& [key, t] : d.triple_correlations) check_tensor(t);
  if (d.quad_correlations) check_tensor(*d.quad_correlations);
}

}  // namespace

TEST_CASE("coherence_vector") {
  CVector<double> up(2);
  up << 1, 0;
  const auto v = coherence_vector(from_pure<double>(up, {2}));
  CHECK(max_abs(v - Eigen::Vector3d(0, 0, 1)) == 0.0);

  const auto mixed3 = validate<double>(CMatrix<double>::Identity(3, 3) / 3.0, {3});
  CHECK(max_abs(coherence_vector(mixed3)) < 1e-16);

  for (double theta : {-0.8, 0.25, 1.5}) {
    const auto n = coherence_vector(partial_trace(rashid(theta), {0}));
    CHECK(max_abs(n - Eigen::Vector3d(0, 0, -std::tanh(2 * theta))) < 1e-14);
  }
  CHECK_THROWS_AS(coherence_vector(mixed3, pauli_basis()), Error);
  CHECK_THROWS_AS(coherence_vector(bell(BellState::PsiMinus)), Error);
}

TEST_CASE("decompose_bipartite on named states") {
  const auto singlet = decompose_bipartite(bell(BellState::PsiMinus));
  CHECK(max_abs(singlet.coherence_vectors[0]) < 1e-15);
  CHECK(max_abs(singlet.coherence_vectors[1]) < 1e-15);
  CHECK(max_abs(singlet.C() + RMatrix<double>::Identity(3, 3)) <= 1e-14);

  for (double theta : {-2.0, -0.4, 0.0, 0.3, 1.1}) {
    const double sech = 1 / std::cosh(2 * theta);
    RMatrix<double> expected = RMatrix<double>::Zero(3, 3);
    expected.diagonal() << sech, -sech, sech * sech;
    CHECK(max_abs(decompose_bipartite(rashid(theta)).C() - expected) < 1e-13);
  }

  for (double p : {0.0, 0.3, 0.75, 1.0})
    for (double theta : {-1.0, 0.0, 0.6}) {
      const double sech = 1 / std::cosh(2 * theta);
      const auto d = decompose_bipartite(generalized_werner(p, theta));
      RMatrix<double> expected = RMatrix<double>::Zero(3, 3);
      expected.diagonal() << sech, sech, 1 - p + p * sech * sech;
      expected *= -p;
      CHECK(max_abs(d.C() - expected) <= 1e-12);
      CHECK(max_abs(d.coherence_vectors[0] - Eigen::Vector3d(0, 0, p * std::tanh(2 * theta))) <= 1e-12);
      CHECK(max_abs(d.coherence_vectors[1] + d.coherence_vectors[0]) <= 1e-12);
    }

  CHECK_THROWS_AS(decompose_bipartite(ghz(3, 2)), Error);
}

TEST_CASE("decompose_bipartite matches the brute-force oracle for n x m") {
  testing::Rng rng(21);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 2}, Dims{3, 3}, Dims{2, 4}, Dims{4, 3}}) {
    CAPTURE(dims[0]);
    CAPTURE(dims[1]);
    const auto rho = testing::random_state(rng, dims);
    const auto d = decompose_bipartite(rho);
    CHECK(d.C().rows() == dims[0] * dims[0] - 1);
    CHECK(d.C().cols() == dims[1] * dims[1] - 1);
    check_against_oracle(rho, d, 1e-13);
  }
}

TEST_CASE("decompose_tripartite") {
  testing::Rng rng(4);
  const auto product = tensor(tensor(testing::random_state(rng, {2}), testing::random_state(rng, {2})),
                              testing::random_state(rng, {2}));
  const auto dp = decompose_tripartite(product);
  for (const auto& [key, c] : dp.pair_correlations) CHECK(max_abs(c) < 1e-15);
  CHECK(max_abs(dp.D().values()) < 1e-15);

  // GHZ: D_xxx = 1, D_xyy = D_yxy = D_yyx = -1, every other D zero; C_zz = 1 on each pair.
  const auto g = decompose_tripartite(ghz(3, 2));
  CorrelationTensor<double> expected({0, 1, 2}, {3, 3, 3});
  expected({0, 0, 0}) = 1;
  expected({0, 1, 1}) = expected({1, 0, 1}) = expected({1, 1, 0}) = -1;
  CHECK(max_abs(g.D().values() - expected.values()) < 1e-15);
  for (const auto& [key, c] : g.pair_correlations) {
    RMatrix<double> zz = RMatrix<double>::Zero(3, 3);
    zz(2, 2) = 1;
    CHECK(max_abs(c - zz) < 1e-15);
  }

  const auto e3 = decompose_tripartite(tripartite_qutrit_e3(0.0, 0.0));
  CHECK(e3.D().squared_norm() == doctest::Approx(160.0 / 27.0).epsilon(1e-13));

  for (const Dims& dims : {Dims{2, 2, 2}, Dims{3, 3, 3}}) {
    const auto rho = testing::random_state(rng, dims);
    check_against_oracle(rho, decompose_tripartite(rho), 1e-13);
  }

  try {
    decompose_tripartite(testing::random_state(rng, {2, 2, 3}));
    FAIL("expected Unsupported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Unsupported);
  }
  CHECK_THROWS_AS(decompose_tripartite(bell(BellState::PsiMinus)), Error);
}

TEST_CASE("decompose_quadripartite") {
  testing::Rng rng(8);
  auto product = testing::random_state(rng, {2});
  for (int k = 0; k < 3; ++k) product = tensor(product, testing::random_state(rng, {2}));
  const auto dp = decompose_quadripartite(product);
  CHECK(dp.pair_correlations.size() == 6);
  CHECK(dp.triple_correlations.size() == 4);
  for (const auto& [key, c] : dp.pair_correlations) CHECK(max_abs(c) < 1e-15);
  for (const auto& [key, t] : dp.triple_correlations) CHECK(max_abs(t.values()) < 1e-15);
  CHECK(max_abs(dp.E().values()) < 1e-15);

  const auto g4 = decompose_quadripartite(ghz(4, 2));
  CHECK(g4.E()({0, 0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
  for (Index flat = 0; flat < g4.E().values().size(); ++flat) {
    const auto idx = g4.E().unflatten(flat);
    const auto ys = std::count(idx.begin(), idx.end(), 1);
    if (ys % 2 == 1) CHECK(std::abs(g4.E().values()(flat)) < 1e-15);
  }
  check_against_oracle(ghz(4, 2), g4, 1e-14);

  const auto singlets = tensor(bell(BellState::PsiMinus), bell(BellState::PsiMinus));
  const auto ds = decompose_quadripartite(singlets);
  check_against_oracle(singlets, ds, 1e-14);
  // With all coherence vectors zero, E_ijkl = C^AB_ij C^CD_kl = delta_ij delta_kl.
  for (Index flat = 0; flat < ds.E().values().size(); ++flat) {
    const auto idx = ds.E().unflatten(flat);
    CHECK(ds.E().values()(flat) == doctest::Approx(idx[0] == idx[1] && idx[2] == idx[3] ? 1.0 : 0.0));
  }

  const auto rho = testing::random_state(rng, {2, 2, 2, 2});
  check_against_oracle(rho, decompose_quadripartite(rho), 1e-13);

  CHECK_THROWS_AS(decompose_quadripartite(testing::random_state(rng, {2, 2, 2, 3})), Error);
  CHECK_THROWS_AS(decompose_quadripartite(ghz(3, 2)), Error);
}

TEST_CASE("reconstruct") {
  BlochDecompositiond zero;
  zero.dims = {2, 2};
  zero.coherence_vectors = {RVector<double>::Zero(3), RVector<double>::Zero(3)};
  zero.pair_correlations[{0, 1}] = RMatrix<double>::Zero(3, 3);
  CHECK(max_abs(reconstruct(zero).matrix() - CMatrix<double>::Identity(4, 4) / 4.0) == 0.0);

  const auto phi = bell(BellState::PhiPlus);
  CHECK(max_abs(reconstruct(decompose(phi)).matrix() - phi.matrix()) <= 1e-14);

  auto singlet = zero;
  singlet.pair_correlations[{0, 1}] = -RMatrix<double>::Identity(3, 3);
  CHECK(max_abs(reconstruct(singlet).matrix() - bell(BellState::PsiMinus).matrix()) <= 1e-15);

  auto bad = zero;
  bad.pair_correlations[{0, 1}] = RMatrix<double>::Zero(3, 8);
  CHECK_THROWS_AS(reconstruct(bad), Error);
  bad = zero;
  bad.coherence_vectors.pop_back();
  CHECK_THROWS_AS(reconstruct(bad), Error);

  // A hand-built decomposition need not be PSD.
  auto too_strong = zero;
  too_strong.pair_correlations[{0, 1}] = -2 * RMatrix<double>::Identity(3, 3);
  CHECK(reconstruct_operator(too_strong).min_eigenvalue() < 0);
  CHECK_THROWS_AS(reconstruct(too_strong), Error);
}

TEST_CASE("roundtrip on random states of every supported shape") {
  testing::Rng rng(17);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}, Dims{2, 4}, Dims{4, 4}, Dims{2, 2, 2}, Dims{3, 3, 3},
                           Dims{4, 4, 4}, Dims{2, 2, 2, 2}}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto rho = trial % 2 ? testing::random_pure(rng, dims) : testing::random_state(rng, dims);
      const auto back = reconstruct_operator(decompose(rho));
      CHECK(max_abs(back.matrix() - rho.matrix()) <= 1e-12);
    }
  }
}

TEST_CASE("operator form of the pair correlation") {
  testing::Rng rng(23);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}, Dims{3, 4}})
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = testing::random_state(rng, dims);
      const auto d = decompose_bipartite(rho);
      CHECK(std::abs(connected_square_bipartite(rho) - d.C().squaredNorm() / 4) <= 1e-12);
    }
}

TEST_CASE("local unitaries leave the singular values of C unchanged") {
  testing::Rng rng(29);
  for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 3}})
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = testing::random_state(rng, dims);
      const auto rotated = testing::random_local_rotation(rng, rho);
      const auto s1 = correlation_spectrum(decompose_bipartite(rho).C()).singular_values;
      const auto s2 = correlation_spectrum(decompose_bipartite(rotated).C()).singular_values;
      CHECK(max_abs(s1 - s2) <= 1e-10);
    }
}

TEST_CASE("stored coherence vectors equal those of the marginals") {
  testing::Rng rng(31);
  for (const Dims& dims : {Dims{2, 3}, Dims{3, 3, 3}, Dims{2, 2, 2, 2}}) {
    const auto rho = testing::random_state(rng, dims);
    const auto d = decompose(rho);
    for (int p = 0; p < rho.parties(); ++p)
      CHECK(max_abs(coherence_vector(partial_trace(rho, {p})) - d.coherence_vectors[std::size_t(p)]) <= 1e-12);
  }
}

TEST_CASE("long double instantiation") {
  const auto rho = rashid<long double>(0.3L);
  const auto d = decompose_bipartite(rho);
  const long double sech = 1 / std::cosh(0.6L);
  CHECK(std::abs(double(d.C()(0, 0) - sech)) < 1e-17);
  CHECK(double((reconstruct_operator(d).matrix() - rho.matrix()).cwiseAbs().maxCoeff()) < 1e-17);
}
