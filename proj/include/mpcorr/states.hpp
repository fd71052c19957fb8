#pragma once

#include <array>

#include "mpcorr/qstate.hpp"
#include "mpcorr/su_basis.hpp"

// Basis convention: |up> = (1,0)^T is the +1 eigenvector of sigma_z, |down> = (0,1)^T.
// Two-qubit amplitudes are ordered |up up>, |up down>, |down up>, |down down>.

namespace mpcorr {

enum class BellState { PsiMinus, PsiPlus, PhiMinus, PhiPlus };

inline const char* to_string(BellState b) {
  switch (b) {
    case BellState::PsiMinus: return "psi-minus";
    case BellState::PsiPlus: return "psi-plus";
    case BellState::PhiMinus: return "phi-minus";
    case BellState::PhiPlus: return "phi-plus";
  }
  return "unknown";
}

template <std::floating_point Real = double>
DensityMatrix<Real> bell(BellState which) {
  CVector<Real> psi = CVector<Real>::Zero(4);
  switch (which) {
    case BellState::PsiMinus: psi << 0, 1, -1, 0; break;
    case BellState::PsiPlus: psi << 0, 1, 1, 0; break;
    case BellState::PhiMinus: psi << 1, 0, 0, -1; break;
    case BellState::PhiPlus: psi << 1, 0, 0, 1; break;
  }
  return from_pure<Real>(psi, {2, 2});
}

/// (e^{-theta}|up up> + e^{theta}|down down>) / sqrt(2 cosh 2 theta).
template <std::floating_point Real = double>
DensityMatrix<Real> rashid(Real theta) {
  CVector<Real> psi = CVector<Real>::Zero(4);
  psi(0) = std::exp(-theta);
  psi(3) = std::exp(theta);
  return from_pure<Real>(psi / std::sqrt(Real(2) * std::cosh(Real(2) * theta)), {2, 2});
}

/// Single-qubit state (1 + n . sigma) / 2.
template <std::floating_point Real = double>
CMatrix<Real> bloch_qubit(const Eigen::Matrix<Real, 3, 1>& n) {
  const auto& paulis = *shared_basis<Real>(2);
  CMatrix<Real> m = CMatrix<Real>::Identity(2, 2);
  for (int i = 0; i < 3; ++i) m += n(i) * paulis[i];
  return m / Real(2);
}

template <std::floating_point Real>
struct CcTerm {
  Real weight;
  Eigen::Matrix<Real, 3, 1> n_a;
  Eigen::Matrix<Real, 3, 1> n_b;
};

/// Classically correlated two-qubit state (1/4) sum_k p_k (1 + n_Ak.sigma)(1 + n_Bk.sigma).
template <std::floating_point Real = double>
DensityMatrix<Real> cc_mixture(const std::vector<CcTerm<Real>>& terms) {
  std::vector<Real> weights;
  std::vector<DensityMatrix<Real>> states;
  for (const auto& t : terms) {
    for (const auto* n : {&t.n_a, &t.n_b})
      if (!(double(n->norm()) <= 1.0 + 1e-12))
        throw Error(ErrorCode::InvalidArgument, "Bloch vector norm exceeds 1", double(n->norm()));
    weights.push_back(t.weight);
    states.push_back(DensityMatrix<Real>::assume_valid(
        Eigen::kroneckerProduct(bloch_qubit<Real>(t.n_a), bloch_qubit<Real>(t.n_b)).eval(), {2, 2}));
  }
  return mix<Real>(weights, states);
}

/// Two-term classically correlated family: weights e^{-2 theta}, e^{2 theta} (over 2 cosh 2 theta)
/// on |down up> and |up down>. Its only nonzero correlation is C_zz = -sech^2 2 theta.
template <std::floating_point Real = double>
DensityMatrix<Real> cc_theta(Real theta) {
  const Real norm = Real(2) * std::cosh(Real(2) * theta);
  const Eigen::Matrix<Real, 3, 1> up(0, 0, 1), down(0, 0, -1);
  return cc_mixture<Real>({{std::exp(-Real(2) * theta) / norm, down, up}, {std::exp(Real(2) * theta) / norm, up, down}});
}

/// p |psi-><psi-| + (1 - p) I/4 with the theta-tilted singlet
/// |psi-> = (e^{theta}|up down> - e^{-theta}|down up>) / sqrt(2 cosh 2 theta),
/// oriented so that n_A = -n_B = p tanh(2 theta) z. theta = 0 is the standard Werner state.
template <std::floating_point Real = double>
DensityMatrix<Real> generalized_werner(Real p, Real theta) {
  if (!(p >= Real(0) && p <= Real(1))) throw Error(ErrorCode::InvalidArgument, "p must lie in [0,1]", double(p));
  CVector<Real> psi = CVector<Real>::Zero(4);
  psi(1) = std::exp(theta);
  psi(2) = -std::exp(-theta);
  psi /= std::sqrt(Real(2) * std::cosh(Real(2) * theta));
  CMatrix<Real> rho = p * (psi * psi.adjoint()) + (Real(1) - p) / Real(4) * CMatrix<Real>::Identity(4, 4);
  return DensityMatrix<Real>::assume_valid(std::move(rho), {2, 2});
}

/// Equal superposition of |v v ... v> over the level basis.
template <std::floating_point Real = double>
DensityMatrix<Real> ghz(int parties, int level) {
  if ((parties != 3 && parties != 4) || (level != 2 && level != 3))
    throw Error(ErrorCode::Unsupported, "GHZ states are provided for 3 or 4 parties of qubits or qutrits");
  const Dims dims(std::size_t(parties), level);
  const SubsystemIndexer idx(dims);
  CVector<Real> psi = CVector<Real>::Zero(idx.total());
  for (int v = 0; v < level; ++v) {
    Index i = 0;
    for (int p = 0; p < parties; ++p) i += v * idx.stride(p);
    psi(i) = 1;
  }
  return from_pure<Real>(psi, dims);
}

/// (e^{theta1} e^{theta2}|v1 v1 v1> + e^{-theta1}|v2 v2 v2> + e^{-theta2}|v3 v3 v3>), normalized.
template <std::floating_point Real = double>
DensityMatrix<Real> tripartite_qutrit_e3(Real theta1, Real theta2) {
  const Dims dims{3, 3, 3};
  CVector<Real> psi = CVector<Real>::Zero(27);
  psi(0) = std::exp(theta1 + theta2);
  psi(13) = std::exp(-theta1);
  psi(26) = std::exp(-theta2);
  return from_pure<Real>(psi, dims);
}

}  // namespace mpcorr
