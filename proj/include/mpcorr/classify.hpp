#pragma once

#include <Eigen/SVD>

#include "mpcorr/decomposition.hpp"

namespace mpcorr {

inline constexpr double kNsvRelativeTol = 1e-9;
inline constexpr double kNsvAbsoluteTol = 1e-12;
inline constexpr double kPurityCutoff = 1e-8;
inline constexpr double kDegenerateBlochTol = 1e-12;
inline constexpr double kPhConditionTol = 1e-10;

/// Singular values of a correlation matrix and the count of those above threshold.
template <std::floating_point Real>
struct CorrelationSpectrum {
  RVector<Real> singular_values;                     // descending
  std::optional<CVector<Real>> eigenvalues;          // square C only
  int nsv_count = 0;
  Real threshold_used = 0;
};

template <std::floating_point Real>
CorrelationSpectrum<Real> correlation_spectrum(const RMatrix<Real>& c) {
  CorrelationSpectrum<Real> s;
  if (c.size() == 0) {
    s.singular_values = RVector<Real>(0);
    s.threshold_used = Real(kNsvAbsoluteTol);
    return s;
  }
  Eigen::JacobiSVD<RMatrix<Real>> svd(c);
  s.singular_values = svd.singularValues();
  const Real d_max = s.singular_values.size() ? s.singular_values(0) : Real(0);
  s.threshold_used = std::max(Real(kNsvAbsoluteTol), Real(kNsvRelativeTol) * d_max);
  for (Real d : s.singular_values)
    if (d > s.threshold_used) ++s.nsv_count;
  if (c.rows() == c.cols()) {
    Eigen::EigenSolver<RMatrix<Real>> eig(c, false);
    s.eigenvalues = eig.eigenvalues();
  }
  return s;
}

/// Outcome of the partial-transpose test on party B.
struct PhResult {
  double min_eigenvalue = 0;
  bool entangled = false;
  /// False when the state is PPT on a space where PPT does not imply separability (beyond 2x3).
  bool conclusive = true;
};

namespace detail {

inline PhResult ph_from_min_eigenvalue(double min_eig, const Dims& dims) {
  PhResult r;
  r.min_eigenvalue = min_eig;
  r.entangled = min_eig < -kPsdTol;
  r.conclusive = r.entangled || total_dimension(dims) <= 6;
  return r;
}

template <std::floating_point Real>
void require_two_qubits(const Dims& dims) {
  if (dims.size() != 2 || dims[0] != 2 || dims[1] != 2)
    throw Error(ErrorCode::Unsupported, "operation supports two-qubit states only (dims [2,2])");
}

}  // namespace detail

/// Minimum eigenvalue of rho^{T_B}; negative beyond tolerance certifies entanglement.
template <std::floating_point Real>
PhResult ph_test(const DensityMatrix<Real>& rho) {
  if (rho.parties() != 2) throw Error(ErrorCode::ShapeMismatch, "partial-transpose test needs 2 parties");
  return detail::ph_from_min_eigenvalue(double(partial_transpose(rho, 1).min_eigenvalue()), rho.dims());
}

/// Same test done in the Bloch picture: transposing B flips the sign of every sigma_y on B,
/// i.e. n_{y,B} and the column C_{iy}. The rebuilt operator is checked for positivity.
template <std::floating_point Real>
PhResult ph_test_signflip(const DensityMatrix<Real>& rho) {
  detail::require_two_qubits<Real>(rho.dims());
  auto d = decompose_bipartite(rho);
  d.coherence_vectors[1](1) = -d.coherence_vectors[1](1);
  d.pair_correlations[{0, 1}].col(1) *= Real(-1);
  return detail::ph_from_min_eigenvalue(double(reconstruct_operator(d).min_eigenvalue()), rho.dims());
}

template <std::floating_point Real>
struct PHInvariants {
  Real xi = 0;
  Real na_dot_nb = 0;
  Real na_dot_C_nb = 0;
};

/// xi = sum_i d_i - (n_A . C . n_B) / (n_A . n_B), with d_i the (signed) eigenvalues of C,
/// so sum_i d_i = Tr C.
template <std::floating_point Real>
PHInvariants<Real> ph_invariants(const BlochDecomposition<Real>& d) {
  detail::require_two_qubits<Real>(d.dims);
  const auto& a = d.coherence_vectors[0];
  const auto& b = d.coherence_vectors[1];
  const auto& c = d.C(0, 1);
  PHInvariants<Real> inv;
  inv.na_dot_nb = a.dot(b);
  inv.na_dot_C_nb = a.dot(c * b);
  if (std::abs(double(inv.na_dot_nb)) <= kDegenerateBlochTol)
    throw Error(ErrorCode::DegenerateBlochVectors, "n_A . n_B vanishes; xi is undefined", double(inv.na_dot_nb));
  inv.xi = c.trace() - inv.na_dot_C_nb / inv.na_dot_nb;
  return inv;
}

/// Largest root of (x + xi/2)^2 + xi (x + xi/2) + n_A.n_B = 0, i.e.
/// -xi/2 + (-xi + sqrt(xi^2 - 4 n_A.n_B)) / 2.
template <std::floating_point Real>
Real ph_condition_value(const PHInvariants<Real>& inv) {
  const Real disc = inv.xi * inv.xi - Real(4) * inv.na_dot_nb;
  if (disc < Real(0)) throw Error(ErrorCode::NegativeDiscriminant, "xi^2 - 4 n_A.n_B < 0", double(disc));
  return -inv.xi / Real(2) + (-inv.xi + std::sqrt(disc)) / Real(2);
}

/// True when the largest root reaches 1 (the state is reported entangled).
template <std::floating_point Real>
bool ph_condition_explicit(const PHInvariants<Real>& inv) {
  return double(ph_condition_value(inv)) >= 1.0 - kPhConditionTol;
}

enum class Category { PureProduct, PureEntangled, ClassicallyCorrelated, MixedEntangled, Uncorrelated };

inline const char* to_string(Category c) {
  switch (c) {
    case Category::PureProduct: return "PureProduct";
    case Category::PureEntangled: return "PureEntangled";
    case Category::ClassicallyCorrelated: return "ClassicallyCorrelated";
    case Category::MixedEntangled: return "MixedEntangled";
    case Category::Uncorrelated: return "Uncorrelated";
  }
  return "Unknown";
}

template <std::floating_point Real>
struct ClassificationReport {
  Category category = Category::Uncorrelated;
  int nsv_count = 0;
  bool ph_entangled = false;
  double min_pt_eigenvalue = 0;
  Real purity = 0;
  CorrelationSpectrum<Real> spectrum;
  std::optional<PHInvariants<Real>> invariants;  // absent when n_A . n_B vanishes
};

/// Two-qubit classification by NSV count, purity and the partial-transpose test.
template <std::floating_point Real>
ClassificationReport<Real> classify_two_qubit(const DensityMatrix<Real>& rho) {
  detail::require_two_qubits<Real>(rho.dims());
  const auto d = decompose_bipartite(rho);
  ClassificationReport<Real> r;
  r.spectrum = correlation_spectrum(d.C(0, 1));
  r.nsv_count = r.spectrum.nsv_count;
  const auto ph = ph_test(rho);
  r.ph_entangled = ph.entangled;
  r.min_pt_eigenvalue = ph.min_eigenvalue;
  r.purity = rho.purity();
  try {
    r.invariants = ph_invariants(d);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateBlochVectors) throw;
  }
  const bool pure = double(r.purity) >= 1.0 - kPurityCutoff;
  if (r.nsv_count == 0) r.category = pure ? Category::PureProduct : Category::Uncorrelated;
  else if (pure) r.category = Category::PureEntangled;
  else r.category = ph.entangled ? Category::MixedEntangled : Category::ClassicallyCorrelated;
  return r;
}

}  // namespace mpcorr
