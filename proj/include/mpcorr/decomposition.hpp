#pragma once

#include <array>
#include <functional>
#include <map>
#include <utility>

#include "mpcorr/qstate.hpp"
#include "mpcorr/su_basis.hpp"

namespace mpcorr {

inline constexpr double kImaginaryResidueTol = 1e-12;

/// Dense real tensor over the generator indices of a fixed set of parties, row-major.
template <std::floating_point Real>
class CorrelationTensor {
 public:
  CorrelationTensor() = default;
  CorrelationTensor(std::vector<int> parties, std::vector<int> extents)
      : parties_(std::move(parties)), extents_(std::move(extents)) {
    Index size = 1;
    for (int e : extents_) size *= e;
    values_ = RVector<Real>::Zero(size);
  }

  const std::vector<int>& parties() const noexcept { return parties_; }
  const std::vector<int>& extents() const noexcept { return extents_; }
  int order() const noexcept { return int(extents_.size()); }
  const RVector<Real>& values() const noexcept { return values_; }
  RVector<Real>& values() noexcept { return values_; }

  Index flat_index(std::span<const int> idx) const {
    if (idx.size() != extents_.size()) throw Error(ErrorCode::ShapeMismatch, "tensor index has wrong order");
    Index flat = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] < 0 || idx[k] >= extents_[k]) throw Error(ErrorCode::ShapeMismatch, "tensor index out of range");
      flat = flat * extents_[k] + idx[k];
    }
    return flat;
  }

  Real operator()(std::initializer_list<int> idx) const {
    return values_(flat_index(std::span<const int>(idx.begin(), idx.size())));
  }
  Real& operator()(std::initializer_list<int> idx) {
    return values_(flat_index(std::span<const int>(idx.begin(), idx.size())));
  }

  /// Multi-index of a flat position.
  std::vector<int> unflatten(Index flat) const {
    std::vector<int> idx(extents_.size());
    for (std::size_t k = extents_.size(); k-- > 0;) {
      idx[k] = int(flat % extents_[k]);
      flat /= extents_[k];
    }
    return idx;
  }

  Real squared_norm() const { return values_.squaredNorm(); }

 private:
  std::vector<int> parties_;
  std::vector<int> extents_;
  RVector<Real> values_;
};

using PartyPair = std::pair<int, int>;
using PartyTriple = std::array<int, 3>;

/// Coherence vectors plus pairwise (C), three-party (D) and four-party (E) correlation tensors.
template <std::floating_point Real>
struct BlochDecomposition {
  Dims dims;
  std::vector<RVector<Real>> coherence_vectors;
  std::map<PartyPair, RMatrix<Real>> pair_correlations;
  std::map<PartyTriple, CorrelationTensor<Real>> triple_correlations;
  std::optional<CorrelationTensor<Real>> quad_correlations;

  int parties() const noexcept { return int(dims.size()); }

  const RMatrix<Real>& C(int i = 0, int j = 1) const {
    auto it = pair_correlations.find({std::min(i, j), std::max(i, j)});
    if (it == pair_correlations.end()) throw Error(ErrorCode::InvalidArgument, "no such party pair");
    return it->second;
  }

  const CorrelationTensor<Real>& D(PartyTriple t = {0, 1, 2}) const {
    auto it = triple_correlations.find(t);
    if (it == triple_correlations.end()) throw Error(ErrorCode::InvalidArgument, "no such party triple");
    return it->second;
  }

  const CorrelationTensor<Real>& E() const {
    if (!quad_correlations) throw Error(ErrorCode::InvalidArgument, "no four-party tensor");
    return *quad_correlations;
  }
};

using BlochDecompositiond = BlochDecomposition<double>;

namespace detail {

// Calls visit(row, col, value) for every nonzero of (x)_k ops[k].
template <std::floating_point Real, typename Visit>
void for_each_product_entry(const SubsystemIndexer& idx, std::span<const SparseOperator<Real>* const> ops,
                            Visit&& visit) {
  const int parties = idx.parties();
  std::function<void(int, Index, Index, Complex<Real>)> rec = [&](int k, Index row, Index col, Complex<Real> v) {
    if (k == parties) {
      visit(row, col, v);
      return;
    }
    for (const auto& e : *ops[std::size_t(k)])
      rec(k + 1, row + e.row * idx.stride(k), col + e.col * idx.stride(k), v * e.value);
  };
  rec(0, 0, 0, Complex<Real>(1));
}

// Tr[(ops_1 (x) ... (x) ops_N) rho], real part after a residue check.
template <std::floating_point Real>
Real expectation(const CMatrix<Real>& rho, const SubsystemIndexer& idx,
                 std::span<const SparseOperator<Real>* const> ops) {
  Complex<Real> acc(0);
  for_each_product_entry<Real>(idx, ops, [&](Index r, Index c, Complex<Real> v) { acc += v * rho(c, r); });
  if (std::abs(double(acc.imag())) > kImaginaryResidueTol)
    throw std::logic_error("expectation value has imaginary residue " + std::to_string(double(acc.imag())));
  return acc.real();
}

template <std::floating_point Real>
CMatrix<Real> hermitian_part(const CMatrix<Real>& m) {
  return (m + m.adjoint()) / Real(2);
}

template <std::floating_point Real>
void require_parties(const DensityMatrix<Real>& rho, int count) {
  if (rho.parties() != count)
    throw Error(ErrorCode::ShapeMismatch, "expected " + std::to_string(count) + " parties, got " +
                                              std::to_string(rho.parties()));
}

}  // namespace detail

/// <G_i> = Tr(G_i rho) for a single-party state.
template <std::floating_point Real>
RVector<Real> coherence_vector(const DensityMatrix<Real>& rho, const GeneratorBasis<Real>& basis) {
  if (rho.parties() != 1 || rho.dims()[0] != basis.dimension())
    throw Error(ErrorCode::ShapeMismatch, "coherence vector needs a single party of dimension " +
                                              std::to_string(basis.dimension()));
  const CMatrix<Real> m = detail::hermitian_part(rho.matrix());
  const SubsystemIndexer idx(rho.dims());
  RVector<Real> out(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    const SparseOperator<Real>* op = &basis.sparse(i);
    out(i) = detail::expectation<Real>(m, idx, std::span(&op, 1));
  }
  return out;
}

template <std::floating_point Real>
RVector<Real> coherence_vector(const DensityMatrix<Real>& rho) {
  if (rho.parties() != 1) throw Error(ErrorCode::ShapeMismatch, "coherence vector needs a single party");
  return coherence_vector(rho, *shared_basis<Real>(rho.dims()[0]));
}

namespace detail {

// C_ij = <G_i (x) G_j> - a_i b_j on a two-party state with given coherence vectors.
template <std::floating_point Real>
RMatrix<Real> pair_correlation(const DensityMatrix<Real>& pair, const RVector<Real>& a, const RVector<Real>& b) {
  const auto ba = shared_basis<Real>(pair.dims()[0]);
  const auto bb = shared_basis<Real>(pair.dims()[1]);
  const CMatrix<Real> m = hermitian_part(pair.matrix());
  const SubsystemIndexer idx(pair.dims());
  RMatrix<Real> c(ba->size(), bb->size());
  for (int i = 0; i < ba->size(); ++i)
    for (int j = 0; j < bb->size(); ++j) {
      const std::array<const SparseOperator<Real>*, 2> ops{&ba->sparse(i), &bb->sparse(j)};
      c(i, j) = expectation<Real>(m, idx, ops) - a(i) * b(j);
    }
  return c;
}

// T_{i...} = <G_i (x) ...> - prod of coherence components, over the listed parties of rho.
template <std::floating_point Real>
CorrelationTensor<Real> full_correlation(const DensityMatrix<Real>& rho, const std::vector<RVector<Real>>& coh,
                                         std::vector<int> parties) {
  std::vector<std::shared_ptr<const GeneratorBasis<Real>>> bases;
  std::vector<int> extents;
  for (int n : rho.dims()) {
    bases.push_back(shared_basis<Real>(n));
    extents.push_back(n * n - 1);
  }
  CorrelationTensor<Real> t(std::move(parties), extents);
  const CMatrix<Real> m = hermitian_part(rho.matrix());
  const SubsystemIndexer idx(rho.dims());
  std::vector<const SparseOperator<Real>*> ops(rho.dims().size());
  for (Index flat = 0; flat < t.values().size(); ++flat) {
    const auto multi = t.unflatten(flat);
    Real product = 1;
    for (std::size_t k = 0; k < multi.size(); ++k) {
      ops[k] = &bases[k]->sparse(multi[k]);
      product *= coh[k](multi[k]);
    }
    t.values()(flat) = expectation<Real>(m, idx, ops) - product;
  }
  return t;
}

template <std::floating_point Real>
std::vector<RVector<Real>> all_coherence_vectors(const DensityMatrix<Real>& rho) {
  std::vector<RVector<Real>> out;
  for (int p = 0; p < rho.parties(); ++p) out.push_back(coherence_vector(partial_trace(rho, {p})));
  return out;
}

template <std::floating_point Real>
void fill_pairs(const DensityMatrix<Real>& rho, BlochDecomposition<Real>& d) {
  for (int i = 0; i < rho.parties(); ++i)
    for (int j = i + 1; j < rho.parties(); ++j)
      d.pair_correlations[{i, j}] = pair_correlation(partial_trace(rho, {i, j}), d.coherence_vectors[std::size_t(i)],
                                                     d.coherence_vectors[std::size_t(j)]);
}

}  // namespace detail

/// Coherence vectors of both parties and C_ij = <G_i (x) G_j> - <G_i><G_j> for any n x m pair.
template <std::floating_point Real>
BlochDecomposition<Real> decompose_bipartite(const DensityMatrix<Real>& rho) {
  detail::require_parties(rho, 2);
  BlochDecomposition<Real> d;
  d.dims = rho.dims();
  d.coherence_vectors = detail::all_coherence_vectors(rho);
  d.pair_correlations[{0, 1}] = detail::pair_correlation(rho, d.coherence_vectors[0], d.coherence_vectors[1]);
  return d;
}

/// Three-party decomposition. Pairwise C are taken on the two-party marginals and
/// D_ijk = <G_i G_j G_k> - n_i n_j n_k. All parties must share one dimension.
template <std::floating_point Real>
BlochDecomposition<Real> decompose_tripartite(const DensityMatrix<Real>& rho) {
  detail::require_parties(rho, 3);
  if (rho.dims()[0] != rho.dims()[1] || rho.dims()[1] != rho.dims()[2])
    throw Error(ErrorCode::Unsupported, "three-party tensor requires equal party dimensions");
  BlochDecomposition<Real> d;
  d.dims = rho.dims();
  d.coherence_vectors = detail::all_coherence_vectors(rho);
  detail::fill_pairs(rho, d);
  d.triple_correlations[{0, 1, 2}] = detail::full_correlation(rho, d.coherence_vectors, {0, 1, 2});
  return d;
}

/// Four-qubit decomposition: six C, four D (on three-party marginals) and
/// E_ijkl = <s_i s_j s_k s_l> - n_i n_j n_k n_l.
template <std::floating_point Real>
BlochDecomposition<Real> decompose_quadripartite(const DensityMatrix<Real>& rho) {
  detail::require_parties(rho, 4);
  for (int n : rho.dims())
    if (n != 2) throw Error(ErrorCode::Unsupported, "four-party decomposition is limited to qubits");
  BlochDecomposition<Real> d;
  d.dims = rho.dims();
  d.coherence_vectors = detail::all_coherence_vectors(rho);
  detail::fill_pairs(rho, d);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      for (int k = j + 1; k < 4; ++k) {
        const auto marginal = partial_trace(rho, {i, j, k});
        const std::vector<RVector<Real>> coh{d.coherence_vectors[std::size_t(i)], d.coherence_vectors[std::size_t(j)],
                                             d.coherence_vectors[std::size_t(k)]};
        d.triple_correlations[{i, j, k}] = detail::full_correlation(marginal, coh, {i, j, k});
      }
  d.quad_correlations = detail::full_correlation(rho, d.coherence_vectors, {0, 1, 2, 3});
  return d;
}

/// Dispatches on party count (2, 3 or 4).
template <std::floating_point Real>
BlochDecomposition<Real> decompose(const DensityMatrix<Real>& rho) {
  switch (rho.parties()) {
    case 2: return decompose_bipartite(rho);
    case 3: return decompose_tripartite(rho);
    case 4: return decompose_quadripartite(rho);
    default:
      throw Error(ErrorCode::Unsupported, "decomposition supports 2, 3 or 4 parties, got " +
                                              std::to_string(rho.parties()));
  }
}

namespace detail {

template <std::floating_point Real>
void check_shapes(const BlochDecomposition<Real>& d) {
  const int parties = d.parties();
  if (parties < 1 || parties > 4) throw Error(ErrorCode::ShapeMismatch, "decomposition needs 1 to 4 parties");
  detail::check_dims(d.dims);
  if (int(d.coherence_vectors.size()) != parties)
    throw Error(ErrorCode::ShapeMismatch, "one coherence vector per party is required");
  auto extent = [&](int p) { return d.dims[std::size_t(p)] * d.dims[std::size_t(p)] - 1; };
  for (int p = 0; p < parties; ++p)
    if (d.coherence_vectors[std::size_t(p)].size() != extent(p))
      throw Error(ErrorCode::ShapeMismatch, "coherence vector " + party_label(p) + " has wrong length");
  for (const auto& [key, c] : d.pair_correlations) {
    if (key.first < 0 || key.second >= parties || key.first >= key.second)
      throw Error(ErrorCode::ShapeMismatch, "invalid party pair");
    if (c.rows() != extent(key.first) || c.cols() != extent(key.second))
      throw Error(ErrorCode::ShapeMismatch, "correlation matrix has wrong shape");
  }
  auto check_tensor = [&](const CorrelationTensor<Real>& t) {
    if (t.parties().size() != t.extents().size()) throw Error(ErrorCode::ShapeMismatch, "malformed tensor");
    for (std::size_t k = 0; k < t.parties().size(); ++k) {
      const int p = t.parties()[k];
      if (p < 0 || p >= parties || t.extents()[k] != extent(p))
        throw Error(ErrorCode::ShapeMismatch, "correlation tensor has wrong shape");
    }
  };
  for (const auto& [key, t] : d.triple_correlations) {
    if (std::vector<int>(key.begin(), key.end()) != t.parties())
      throw Error(ErrorCode::ShapeMismatch, "triple key does not match tensor parties");
    check_tensor(t);
  }
  if (d.quad_correlations) check_tensor(*d.quad_correlations);
}

}  // namespace detail

/// Rebuilds the operator
///   (1/prod n) [ (x)_I (1 + n_I/2 a_I.G) + sum_pairs (n_I n_J/4) G C G
///                + sum_triples (n_I n_J n_K/8) G G G D + (prod n/16) G G G G E ].
/// The result is Hermitian and unit-trace but not necessarily PSD for hand-built input.
template <std::floating_point Real>
HermitianOperator<Real> reconstruct_operator(const BlochDecomposition<Real>& d) {
  detail::check_shapes(d);
  const SubsystemIndexer idx(d.dims);
  const int parties = d.parties();
  std::vector<std::shared_ptr<const GeneratorBasis<Real>>> bases;
  std::vector<SparseOperator<Real>> identities;
  for (int n : d.dims) {
    bases.push_back(shared_basis<Real>(n));
    identities.push_back(sparse_identity<Real>(n));
  }

  CMatrix<Real> out = CMatrix<Real>::Ones(1, 1);
  for (int p = 0; p < parties; ++p) {
    const int n = d.dims[std::size_t(p)];
    CMatrix<Real> local = CMatrix<Real>::Identity(n, n);
    for (int i = 0; i < bases[std::size_t(p)]->size(); ++i)
      local += (Real(n) / 2 * d.coherence_vectors[std::size_t(p)](i)) * (*bases[std::size_t(p)])[i];
    CMatrix<Real> next = Eigen::kroneckerProduct(out, local).eval();
    out = std::move(next);
  }

  std::vector<const SparseOperator<Real>*> ops(static_cast<std::size_t>(parties));
  auto add_term = [&](const std::vector<int>& which, const std::vector<int>& gens, Real coeff) {
    for (int p = 0; p < parties; ++p) ops[std::size_t(p)] = &identities[std::size_t(p)];
    for (std::size_t k = 0; k < which.size(); ++k)
      ops[std::size_t(which[k])] = &bases[std::size_t(which[k])]->sparse(gens[k]);
    detail::for_each_product_entry<Real>(idx, ops, [&](Index r, Index c, Complex<Real> v) { out(r, c) += coeff * v; });
  };
  auto prefactor = [&](const std::vector<int>& which) {
    Real f = 1;
    for (int p : which) f *= Real(d.dims[std::size_t(p)]) / 2;
    return f;
  };

  for (const auto& [key, c] : d.pair_correlations) {
    const std::vector<int> which{key.first, key.second};
    const Real f = prefactor(which);
    for (Index i = 0; i < c.rows(); ++i)
      for (Index j = 0; j < c.cols(); ++j)
        if (c(i, j) != Real(0)) add_term(which, {int(i), int(j)}, f * c(i, j));
  }
  auto add_tensor = [&](const CorrelationTensor<Real>& t) {
    const Real f = prefactor(t.parties());
    for (Index flat = 0; flat < t.values().size(); ++flat)
      if (t.values()(flat) != Real(0)) add_term(t.parties(), t.unflatten(flat), f * t.values()(flat));
  };
  for (const auto& [key, t] : d.triple_correlations) add_tensor(t);
  if (d.quad_correlations) add_tensor(*d.quad_correlations);

  out /= Real(idx.total());
  return HermitianOperator<Real>(std::move(out), d.dims);
}

/// reconstruct_operator followed by density-matrix validation.
template <std::floating_point Real>
DensityMatrix<Real> reconstruct(const BlochDecomposition<Real>& d) {
  return validate(reconstruct_operator(d).matrix(), d.dims);
}

}  // namespace mpcorr
