#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "mpcorr/common.hpp"

namespace mpcorr {

/// Nonzero entry of a local operator.
template <std::floating_point Real>
struct SparseEntry {
  int row;
  int col;
  Complex<Real> value;
};

template <std::floating_point Real>
using SparseOperator = std::vector<SparseEntry<Real>>;

template <std::floating_point Real>
SparseOperator<Real> sparsify(const CMatrix<Real>& m) {
  SparseOperator<Real> out;
  for (Index c = 0; c < m.cols(); ++c)
    for (Index r = 0; r < m.rows(); ++r)
      if (m(r, c) != Complex<Real>(0)) out.push_back({int(r), int(c), m(r, c)});
  return out;
}

template <std::floating_point Real>
SparseOperator<Real> sparse_identity(int n) {
  SparseOperator<Real> out;
  for (int i = 0; i < n; ++i) out.push_back({i, i, Complex<Real>(1)});
  return out;
}

/// Ordered traceless Hermitian generators of SU(n), normalized to Tr(G_i G_j) = 2 delta_ij.
///
/// Bases are immutable once built. Every generator is kept both dense (for algebra and
/// verification) and as a sparse entry list (for expectation values on large tensor spaces).
template <std::floating_point Real>
class GeneratorBasis {
 public:
  GeneratorBasis(int dimension, std::vector<CMatrix<Real>> generators)
      : dimension_(dimension), generators_(std::move(generators)) {
    for (const auto& g : generators_) {
      if (g.rows() != dimension_ || g.cols() != dimension_)
        throw Error(ErrorCode::ShapeMismatch, "generator is not " + std::to_string(dimension_) +
                                                  "x" + std::to_string(dimension_));
      sparse_.push_back(sparsify<Real>(g));
    }
  }

  int dimension() const noexcept { return dimension_; }
  int size() const noexcept { return int(generators_.size()); }
  const CMatrix<Real>& operator[](int i) const { return generators_.at(std::size_t(i)); }
  const SparseOperator<Real>& sparse(int i) const { return sparse_.at(std::size_t(i)); }
  const std::vector<CMatrix<Real>>& generators() const noexcept { return generators_; }

 private:
  int dimension_;
  std::vector<CMatrix<Real>> generators_;
  std::vector<SparseOperator<Real>> sparse_;
};

namespace detail {

template <std::floating_point Real>
CMatrix<Real> symmetric_generator(int n, int j, int k) {
  CMatrix<Real> g = CMatrix<Real>::Zero(n, n);
  g(j, k) = g(k, j) = Complex<Real>(1);
  return g;
}

template <std::floating_point Real>
CMatrix<Real> antisymmetric_generator(int n, int j, int k) {
  CMatrix<Real> g = CMatrix<Real>::Zero(n, n);
  g(j, k) = Complex<Real>(0, -1);
  g(k, j) = Complex<Real>(0, 1);
  return g;
}

// l in [1, n-1]: sqrt(2/(l(l+1))) * (sum_{i<l} E_ii - l E_ll), zero-based.
template <std::floating_point Real>
CMatrix<Real> diagonal_generator(int n, int l) {
  CMatrix<Real> g = CMatrix<Real>::Zero(n, n);
  const Real scale = std::sqrt(Real(2) / (Real(l) * Real(l + 1)));
  for (int i = 0; i < l; ++i) g(i, i) = scale;
  g(l, l) = -Real(l) * scale;
  return g;
}

}  // namespace detail

/// Generalized Gell-Mann generators. n = 2 gives (sigma_x, sigma_y, sigma_z); n = 3 gives
/// lambda_1 ... lambda_8 in textbook order. For n >= 4 the order is the (j,k)-lexicographic
/// symmetric/antisymmetric pairs followed by the n-1 diagonal generators.
template <std::floating_point Real = double>
GeneratorBasis<Real> gell_mann_basis(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "SU(n) basis needs n >= 2");
  using detail::antisymmetric_generator;
  using detail::diagonal_generator;
  using detail::symmetric_generator;
  std::vector<CMatrix<Real>> gens;
  if (n == 3) {
    gens = {symmetric_generator<Real>(3, 0, 1), antisymmetric_generator<Real>(3, 0, 1),
            diagonal_generator<Real>(3, 1),     symmetric_generator<Real>(3, 0, 2),
            antisymmetric_generator<Real>(3, 0, 2), symmetric_generator<Real>(3, 1, 2),
            antisymmetric_generator<Real>(3, 1, 2), diagonal_generator<Real>(3, 2)};
  } else {
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        gens.push_back(symmetric_generator<Real>(n, j, k));
        gens.push_back(antisymmetric_generator<Real>(n, j, k));
      }
    for (int l = 1; l < n; ++l) gens.push_back(diagonal_generator<Real>(n, l));
  }
  return GeneratorBasis<Real>(n, std::move(gens));
}

template <std::floating_point Real = double>
GeneratorBasis<Real> pauli_basis() {
  return gell_mann_basis<Real>(2);
}

/// Shared, lazily built basis for dimension n.
template <std::floating_point Real = double>
std::shared_ptr<const GeneratorBasis<Real>> shared_basis(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GeneratorBasis<Real>>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto basis = std::make_shared<const GeneratorBasis<Real>>(gell_mann_basis<Real>(n));
  cache.emplace(n, basis);
  return basis;
}

/// Worst-case residual of each basis invariant.
struct BasisDiagnostics {
  double hermiticity = 0;    // max |G - G^dagger|
  double trace = 0;          // max |Tr G|
  double orthogonality = 0;  // max |Tr(G_i G_j) - 2 delta_ij|
  bool count_ok = false;     // size == n^2 - 1
};

template <std::floating_point Real>
BasisDiagnostics verify_basis(const GeneratorBasis<Real>& basis) {
  BasisDiagnostics d;
  const int n = basis.dimension();
  d.count_ok = basis.size() == n * n - 1;
  for (int i = 0; i < basis.size(); ++i) {
    const auto& g = basis[i];
    d.hermiticity = std::max<double>(d.hermiticity, (g - g.adjoint()).cwiseAbs().maxCoeff());
    d.trace = std::max<double>(d.trace, std::abs(g.trace()));
    for (int j = 0; j < basis.size(); ++j) {
      const Complex<Real> ip = (g * basis[j]).trace();
      const Real expected = i == j ? Real(2) : Real(0);
      d.orthogonality = std::max<double>(d.orthogonality, std::abs(ip - expected));
    }
  }
  return d;
}

}  // namespace mpcorr
