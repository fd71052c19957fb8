#pragma once

#include "mpcorr/decomposition.hpp"

namespace mpcorr {

/// Purity window for the pure-state-only measures.
inline constexpr double kPureMeasureTol = 1e-8;

/// n^2 / (4 (n^2 - 1)), the factor that scales a maximally correlated pair to 1.
inline double e_c_normalization(int n) { return double(n) * n / (4.0 * (double(n) * n - 1.0)); }

/// [n_<^2 / (4 (n_<^2 - 1))] Tr C C^T with n_< = min(n, m).
template <std::floating_point Real>
Real e_c_bipartite(const RMatrix<Real>& c, int n, int m) {
  if (n < 2 || m < 2 || c.rows() != n * n - 1 || c.cols() != m * m - 1)
    throw Error(ErrorCode::ShapeMismatch, "correlation matrix shape does not match dims (" + std::to_string(n) +
                                              "," + std::to_string(m) + ")");
  return Real(e_c_normalization(std::min(n, m))) * c.squaredNorm();
}

template <std::floating_point Real>
Real e_c_bipartite(const BlochDecomposition<Real>& d) {
  if (d.parties() != 2) throw Error(ErrorCode::ShapeMismatch, "bipartite measure needs 2 parties");
  return e_c_bipartite(d.C(0, 1), d.dims[0], d.dims[1]);
}

/// Sum over unordered pairs {I,J} of the bipartite measure; parties must share one dimension.
/// Summing over ordered pairs instead gives exactly twice this value.
template <std::floating_point Real>
Real e_c_multipartite(const BlochDecomposition<Real>& d) {
  if (d.parties() < 3) throw Error(ErrorCode::ShapeMismatch, "multipartite measure needs at least 3 parties");
  const int n = d.dims[0];
  for (int m : d.dims)
    if (m != n) throw Error(ErrorCode::Unsupported, "multipartite measure requires equal party dimensions");
  Real sum = 0;
  for (int i = 0; i < d.parties(); ++i)
    for (int j = i + 1; j < d.parties(); ++j) sum += d.C(i, j).squaredNorm();
  return Real(e_c_normalization(n)) * sum;
}

/// K for the three-party measure: 1/4 for qubits, 27/160 for qutrits.
inline double e_d_constant(int n) {
  if (n == 2) return 0.25;
  if (n == 3) return 27.0 / 160.0;
  throw Error(ErrorCode::Unsupported, "three-party measure is defined for qubits and qutrits only");
}

/// K sum_ijk D_ijk^2.
template <std::floating_point Real>
Real e_d(const BlochDecomposition<Real>& d) {
  if (d.parties() != 3) throw Error(ErrorCode::ShapeMismatch, "three-party measure needs 3 parties");
  const int n = d.dims[0];
  if (d.dims[1] != n || d.dims[2] != n) throw Error(ErrorCode::Unsupported, "mixed party dimensions");
  return Real(e_d_constant(n)) * d.D().squared_norm();
}

/// (1/8) sum_ijkl E_ijkl^2 for four qubits.
template <std::floating_point Real>
Real e_e(const BlochDecomposition<Real>& d) {
  if (d.parties() != 4) throw Error(ErrorCode::ShapeMismatch, "four-party measure needs 4 parties");
  for (int n : d.dims)
    if (n != 2) throw Error(ErrorCode::Unsupported, "four-party measure is defined for qubits only");
  return Real(0.125) * d.E().squared_norm();
}

/// Lifts an operator on the listed parties to the full space (identity elsewhere).
template <std::floating_point Real>
CMatrix<Real> embed(const CMatrix<Real>& op, const Dims& dims, const std::vector<int>& parties) {
  const SubsystemIndexer full(dims);
  Dims sub_dims;
  for (int p : parties) sub_dims.push_back(dims[std::size_t(p)]);
  const SubsystemIndexer sub(sub_dims);
  std::vector<int> rest;
  for (int p = 0; p < full.parties(); ++p)
    if (std::find(parties.begin(), parties.end(), p) == parties.end()) rest.push_back(p);
  auto sub_index = [&](Index i) {
    Index s = 0;
    for (std::size_t k = 0; k < parties.size(); ++k) s += full.digit(i, parties[k]) * sub.stride(int(k));
    return s;
  };
  CMatrix<Real> out = CMatrix<Real>::Zero(full.total(), full.total());
  for (Index j = 0; j < full.total(); ++j)
    for (Index i = 0; i < full.total(); ++i) {
      bool same = true;
      for (int p : rest) same = same && full.digit(i, p) == full.digit(j, p);
      if (same) out(i, j) = op(sub_index(i), sub_index(j));
    }
  return out;
}

/// Tr[(rho_AB - rho_A (x) rho_B)^2], which equals (1/4) Tr C C^T.
template <std::floating_point Real>
Real connected_square_bipartite(const DensityMatrix<Real>& rho) {
  if (rho.parties() != 2) throw Error(ErrorCode::ShapeMismatch, "needs 2 parties");
  const CMatrix<Real> r = rho.matrix() - tensor(partial_trace(rho, {0}), partial_trace(rho, {1})).matrix();
  return (r * r).trace().real();
}

/// Operator-form cross-check of e_d: with
///   R = rho - rho_A rho_B rho_C - sum_{I<J} (rho_IJ - rho_I rho_J) (x) 1_K / n_K
/// one has Tr R^2 = (1/8) sum D^2, hence e_d = 8 K Tr R^2.
template <std::floating_point Real>
Real e_d_operator_form(const DensityMatrix<Real>& rho) {
  if (rho.parties() != 3) throw Error(ErrorCode::ShapeMismatch, "needs 3 parties");
  const int n = rho.dims()[0];
  const double k = e_d_constant(n);
  if (rho.dims()[1] != n || rho.dims()[2] != n) throw Error(ErrorCode::Unsupported, "mixed party dimensions");
  std::vector<DensityMatrix<Real>> singles;
  for (int p = 0; p < 3; ++p) singles.push_back(partial_trace(rho, {p}));
  CMatrix<Real> r = rho.matrix() - tensor(tensor(singles[0], singles[1]), singles[2]).matrix();
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const CMatrix<Real> connected =
          partial_trace(rho, {i, j}).matrix() - tensor(singles[std::size_t(i)], singles[std::size_t(j)]).matrix();
      r -= embed(connected, rho.dims(), {i, j}) / Real(n);
    }
  return Real(8 * k) * (r * r).trace().real();
}

namespace detail {

template <std::floating_point Real>
DensityMatrix<Real> pure_marginal_a(const DensityMatrix<Real>& rho) {
  if (rho.parties() != 2) throw Error(ErrorCode::ShapeMismatch, "pure-state measures need 2 parties");
  if (!is_pure(rho, kPureMeasureTol))
    throw Error(ErrorCode::MixedStateUnsupported, "state is not pure", 1.0 - double(rho.purity()));
  return partial_trace(rho, {0});
}

}  // namespace detail

/// sqrt(2 (1 - Tr rho_A^2)) for pure bipartite states.
template <std::floating_point Real>
Real concurrence_pure(const DensityMatrix<Real>& rho) {
  const auto rho_a = detail::pure_marginal_a(rho);
  return std::sqrt(std::max(Real(0), Real(2) * (Real(1) - rho_a.purity())));
}

/// -Tr rho_A log2 rho_A in bits, for pure bipartite states.
template <std::floating_point Real>
Real entanglement_entropy(const DensityMatrix<Real>& rho) {
  const auto rho_a = detail::pure_marginal_a(rho);
  Real s = 0;
  for (Real mu : rho_a.eigenvalues())
    if (mu > Real(0)) s -= mu * std::log2(mu);
  return std::max(Real(0), s);
}

/// Every measure that applies to the state's party structure.
struct MeasureSet {
  double e_c = 0;
  std::optional<double> e_d;
  std::optional<double> e_e;
  std::optional<double> concurrence;
  std::optional<double> entropy_bits;
};

template <std::floating_point Real>
MeasureSet measure_all(const DensityMatrix<Real>& rho) {
  const auto d = decompose(rho);
  MeasureSet m;
  if (rho.parties() == 2) {
    m.e_c = double(e_c_bipartite(d));
    if (is_pure(rho, kPureMeasureTol)) {
      m.concurrence = double(concurrence_pure(rho));
      m.entropy_bits = double(entanglement_entropy(rho));
    }
    return m;
  }
  m.e_c = double(e_c_multipartite(d));
  const int n = rho.dims()[0];
  if (rho.parties() == 3 && (n == 2 || n == 3)) m.e_d = double(e_d(d));
  if (rho.parties() == 4) m.e_e = double(e_e(d));
  return m;
}

}  // namespace mpcorr
