#pragma once

#include "mpcorr/qstate.hpp"
#include "mpcorr/su_basis.hpp"

namespace mpcorr {

inline constexpr double kNullProjectionTol = 1e-12;

namespace detail {

// sigma_A . sigma_B on two qubits.
template <std::floating_point Real>
CMatrix<Real> sigma_dot_sigma() {
  const auto& paulis = *shared_basis<Real>(2);
  CMatrix<Real> out = CMatrix<Real>::Zero(4, 4);
  for (int i = 0; i < 3; ++i) out += Eigen::kroneckerProduct(paulis[i], paulis[i]).eval();
  return out;
}

}  // namespace detail

/// S = (1 + P_AB)/2 = 3/4 + (1/4) sigma_A . sigma_B, the projector onto the triplet.
template <std::floating_point Real = double>
HermitianOperator<Real> symmetrizer_two_qubit() {
  CMatrix<Real> s = Real(0.75) * CMatrix<Real>::Identity(4, 4) + Real(0.25) * detail::sigma_dot_sigma<Real>();
  return HermitianOperator<Real>(std::move(s), {2, 2});
}

/// A = (1 - P_AB)/2 = 1/4 - (1/4) sigma_A . sigma_B, the projector onto the singlet.
template <std::floating_point Real = double>
HermitianOperator<Real> antisymmetrizer_two_qubit() {
  CMatrix<Real> a = Real(0.25) * CMatrix<Real>::Identity(4, 4) - Real(0.25) * detail::sigma_dot_sigma<Real>();
  return HermitianOperator<Real>(std::move(a), {2, 2});
}

enum class ExchangeKind { Symmetric, Antisymmetric };

template <std::floating_point Real>
struct ExchangeProjection {
  ExchangeKind kind;
  DensityMatrix<Real> projected;  // P rho P / Tr(P rho P)
  Real weight;                    // Tr(P rho P)
};

template <std::floating_point Real>
ExchangeProjection<Real> project_exchange(const DensityMatrix<Real>& rho, ExchangeKind kind) {
  if (rho.dims() != Dims{2, 2}) throw Error(ErrorCode::Unsupported, "exchange projection supports two qubits only");
  const auto p = kind == ExchangeKind::Symmetric ? symmetrizer_two_qubit<Real>() : antisymmetrizer_two_qubit<Real>();
  const CMatrix<Real> raw = p.matrix() * rho.matrix() * p.matrix();
  const Real weight = raw.trace().real();
  if (double(weight) <= kNullProjectionTol)
    throw Error(ErrorCode::NullProjection, "state has no weight in the requested exchange subspace", double(weight));
  CMatrix<Real> normalized = raw / weight;
  normalized = (normalized + normalized.adjoint()).eval() / Real(2);
  return {kind, validate(normalized, rho.dims()), weight};
}

}  // namespace mpcorr
