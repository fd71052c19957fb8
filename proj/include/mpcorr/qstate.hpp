#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include <Eigen/Eigenvalues>

#include "mpcorr/common.hpp"

namespace mpcorr {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kPureTol = 1e-10;

/// Row-major multi-index over a tensor-product space; party 0 is the most significant digit,
/// matching the Kronecker product convention A (x) B.
class SubsystemIndexer {
 public:
  explicit SubsystemIndexer(Dims dims) : dims_(std::move(dims)), strides_(dims_.size()) {
    Index s = 1;
    for (std::size_t k = dims_.size(); k-- > 0;) {
      strides_[k] = s;
      s *= dims_[k];
    }
    total_ = s;
  }

  Index total() const noexcept { return total_; }
  int parties() const noexcept { return int(dims_.size()); }
  const Dims& dims() const noexcept { return dims_; }
  Index stride(int party) const { return strides_.at(std::size_t(party)); }

  int digit(Index index, int party) const {
    return int((index / strides_[std::size_t(party)]) % dims_[std::size_t(party)]);
  }

  Index with_digit(Index index, int party, int value) const {
    return index + (value - digit(index, party)) * strides_[std::size_t(party)];
  }

 private:
  Dims dims_;
  std::vector<Index> strides_;
  Index total_ = 1;
};

namespace detail {

inline void check_dims(const Dims& dims) {
  if (dims.empty()) throw Error(ErrorCode::ShapeMismatch, "at least one party is required");
  for (int n : dims)
    if (n < 2) throw Error(ErrorCode::ShapeMismatch, "every subsystem needs dimension >= 2");
  if (total_dimension(dims) > kMaxTotalDimension)
    throw Error(ErrorCode::Unsupported,
                "total dimension exceeds " + std::to_string(kMaxTotalDimension));
}

template <std::floating_point Real>
void check_square(const CMatrix<Real>& m, const Dims& dims) {
  check_dims(dims);
  const Index d = total_dimension(dims);
  if (m.rows() != d || m.cols() != d)
    throw Error(ErrorCode::ShapeMismatch, "matrix is " + std::to_string(m.rows()) + "x" +
                                              std::to_string(m.cols()) + ", expected " +
                                              std::to_string(d) + "x" + std::to_string(d));
}

}  // namespace detail

/// Hermitian operator on a tensor-product space; not necessarily PSD or unit-trace.
template <std::floating_point Real>
class HermitianOperator {
 public:
  HermitianOperator(CMatrix<Real> matrix, Dims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {
    detail::check_square(matrix_, dims_);
    const double residual = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (residual > kHermitianTol)
      throw Error(ErrorCode::NotHermitian, "operator is not Hermitian", residual);
  }

  const CMatrix<Real>& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }

  RVector<Real> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

  Real min_eigenvalue() const { return eigenvalues().minCoeff(); }

 private:
  CMatrix<Real> matrix_;
  Dims dims_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix with its subsystem signature.
///
/// Instances are obtained from validate(), from_pure() or the structural operations below, so a
/// DensityMatrix value always satisfies its invariants.
template <std::floating_point Real>
class DensityMatrix {
 public:
  const CMatrix<Real>& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  int parties() const noexcept { return int(dims_.size()); }
  Index dimension() const noexcept { return matrix_.rows(); }

  Real purity() const { return (matrix_ * matrix_).trace().real(); }

  RVector<Real> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(matrix_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

  HermitianOperator<Real> as_operator() const { return HermitianOperator<Real>(matrix_, dims_); }

  /// Skips validation. Only for results that are valid by construction.
  static DensityMatrix assume_valid(CMatrix<Real> matrix, Dims dims) {
    return DensityMatrix(std::move(matrix), std::move(dims));
  }

 private:
  DensityMatrix(CMatrix<Real> matrix, Dims dims) : matrix_(std::move(matrix)), dims_(std::move(dims)) {}

  CMatrix<Real> matrix_;
  Dims dims_;
};

using DensityMatrixd = DensityMatrix<double>;
using HermitianOperatord = HermitianOperator<double>;

/// Checks the three density-matrix invariants in order and throws the first failure.
template <std::floating_point Real>
DensityMatrix<Real> validate(const CMatrix<Real>& matrix, const Dims& dims) {
  detail::check_square(matrix, dims);
  if (!matrix.allFinite()) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
  const double herm = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTol) throw Error(ErrorCode::NotHermitian, "max |rho - rho^dagger| too large", herm);
  const double tr = std::abs(matrix.trace() - Complex<Real>(1));
  if (tr > kTraceTol) throw Error(ErrorCode::TraceNotOne, "|Tr rho - 1| too large", tr);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(matrix, Eigen::EigenvaluesOnly);
  const double min_eig = solver.eigenvalues().minCoeff();
  if (min_eig < -kPsdTol) throw Error(ErrorCode::NotPSD, "negative eigenvalue", min_eig);
  return DensityMatrix<Real>::assume_valid(matrix, dims);
}

/// |psi><psi| / <psi|psi>.
template <std::floating_point Real>
DensityMatrix<Real> from_pure(const CVector<Real>& amplitudes, const Dims& dims) {
  detail::check_dims(dims);
  if (amplitudes.size() != total_dimension(dims))
    throw Error(ErrorCode::ShapeMismatch, "amplitude vector length " + std::to_string(amplitudes.size()) +
                                              " does not match dims product " +
                                              std::to_string(total_dimension(dims)));
  const Real norm2 = amplitudes.squaredNorm();
  if (!(norm2 > Real(0)) || !std::isfinite(double(norm2)))
    throw Error(ErrorCode::InvalidArgument, "state vector has zero or non-finite norm");
  const CVector<Real> psi = amplitudes / std::sqrt(norm2);
  CMatrix<Real> rho = psi * psi.adjoint();
  return DensityMatrix<Real>::assume_valid(std::move(rho), dims);
}

template <std::floating_point Real>
DensityMatrix<Real> tensor(const DensityMatrix<Real>& a, const DensityMatrix<Real>& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  detail::check_dims(dims);
  CMatrix<Real> out = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return DensityMatrix<Real>::assume_valid(std::move(out), std::move(dims));
}

/// Convex combination sum_k p_k rho_k.
template <std::floating_point Real>
DensityMatrix<Real> mix(std::span<const Real> weights, std::span<const DensityMatrix<Real>> states) {
  if (weights.empty() || weights.size() != states.size())
    throw Error(ErrorCode::InvalidArgument, "weights and states must be nonempty and of equal length");
  Real sum = 0;
  for (Real w : weights) {
    if (!(w > Real(0))) throw Error(ErrorCode::InvalidArgument, "mixture weights must be positive");
    sum += w;
  }
  if (std::abs(double(sum) - 1.0) > 1e-12)
    throw Error(ErrorCode::InvalidArgument, "mixture weights must sum to 1", double(sum) - 1.0);
  const Dims& dims = states.front().dims();
  CMatrix<Real> out = CMatrix<Real>::Zero(states.front().dimension(), states.front().dimension());
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].dims() != dims) throw Error(ErrorCode::ShapeMismatch, "mixture components differ in dims");
    out += weights[k] * states[k].matrix();
  }
  return DensityMatrix<Real>::assume_valid(std::move(out), dims);
}

template <std::floating_point Real>
DensityMatrix<Real> mix(const std::vector<Real>& weights, const std::vector<DensityMatrix<Real>>& states) {
  return mix(std::span<const Real>(weights), std::span<const DensityMatrix<Real>>(states));
}

/// Reduced state on the kept parties (returned in their original order).
template <std::floating_point Real>
DensityMatrix<Real> partial_trace(const DensityMatrix<Real>& rho, std::vector<int> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) throw Error(ErrorCode::InvalidArgument, "partial trace needs a nonempty keep set");
  for (int p : keep)
    if (p < 0 || p >= rho.parties())
      throw Error(ErrorCode::InvalidArgument, "party index " + std::to_string(p) + " out of range");
  if (int(keep.size()) == rho.parties()) return rho;

  const SubsystemIndexer full(rho.dims());
  Dims kept_dims;
  std::vector<int> traced;
  for (int p = 0; p < rho.parties(); ++p) {
    if (std::binary_search(keep.begin(), keep.end(), p)) kept_dims.push_back(rho.dims()[std::size_t(p)]);
    else traced.push_back(p);
  }
  const SubsystemIndexer kept(kept_dims);
  Dims traced_dims;
  for (int p : traced) traced_dims.push_back(rho.dims()[std::size_t(p)]);
  const SubsystemIndexer rest(traced_dims);

  std::vector<Index> kept_index(std::size_t(full.total())), rest_index(std::size_t(full.total()));
  for (Index i = 0; i < full.total(); ++i) {
    Index k = 0, r = 0;
    for (std::size_t q = 0; q < keep.size(); ++q) k += full.digit(i, keep[q]) * kept.stride(int(q));
    for (std::size_t q = 0; q < traced.size(); ++q) r += full.digit(i, traced[q]) * rest.stride(int(q));
    kept_index[std::size_t(i)] = k;
    rest_index[std::size_t(i)] = r;
  }

  CMatrix<Real> out = CMatrix<Real>::Zero(kept.total(), kept.total());
  const auto& m = rho.matrix();
  for (Index j = 0; j < full.total(); ++j)
    for (Index i = 0; i < full.total(); ++i)
      if (rest_index[std::size_t(i)] == rest_index[std::size_t(j)])
        out(kept_index[std::size_t(i)], kept_index[std::size_t(j)]) += m(i, j);
  return DensityMatrix<Real>::assume_valid(std::move(out), std::move(kept_dims));
}

/// Transposes the indices of one party only.
template <std::floating_point Real>
HermitianOperator<Real> partial_transpose(const CMatrix<Real>& matrix, const Dims& dims, int party) {
  detail::check_square(matrix, dims);
  if (party < 0 || party >= int(dims.size()))
    throw Error(ErrorCode::InvalidArgument, "party index " + std::to_string(party) + " out of range");
  const SubsystemIndexer idx(dims);
  CMatrix<Real> out(matrix.rows(), matrix.cols());
  for (Index j = 0; j < idx.total(); ++j)
    for (Index i = 0; i < idx.total(); ++i) {
      const int di = idx.digit(i, party);
      const int dj = idx.digit(j, party);
      out(idx.with_digit(i, party, dj), idx.with_digit(j, party, di)) = matrix(i, j);
    }
  return HermitianOperator<Real>(std::move(out), dims);
}

template <std::floating_point Real>
HermitianOperator<Real> partial_transpose(const DensityMatrix<Real>& rho, int party) {
  return partial_transpose(rho.matrix(), rho.dims(), party);
}

template <std::floating_point Real>
HermitianOperator<Real> partial_transpose(const HermitianOperator<Real>& op, int party) {
  return partial_transpose(op.matrix(), op.dims(), party);
}

template <std::floating_point Real>
Real purity(const DensityMatrix<Real>& rho) {
  return rho.purity();
}

template <std::floating_point Real>
bool is_pure(const DensityMatrix<Real>& rho, double tol = kPureTol) {
  return std::abs(double(rho.purity()) - 1.0) <= tol;
}

}  // namespace mpcorr
