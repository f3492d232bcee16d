#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fsga/error.hpp"
#include "fsga/fock.hpp"
#include "fsga/path.hpp"
#include "fsga/sparse.hpp"
#include "fsga/types.hpp"

namespace fsga {

/// Point of the eigenvalue ball at vertex x: weights on the loops at x.
struct EigenPoint {
  std::size_t vertex = 0;
  std::vector<cplx> lambda;  // indexed by edge; zero off the loops at x

  double norm_squared() const {
    double r = 0.0;
    for (auto l : lambda) r += std::norm(l);
    return r;
  }
};

inline void validate_eigen_point(const DirectedMultigraph& g, const EigenPoint& p) {
  if (p.vertex >= g.vertex_count()) throw InvalidEigenPoint("vertex out of range");
  if (p.lambda.size() != g.edge_count())
    throw InvalidEigenPoint("weight vector must have one entry per edge");
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    if (p.lambda[e] != cplx{} && !(ed.src == p.vertex && ed.dst == p.vertex))
      throw InvalidEigenPoint("weight on edge '" + ed.label + "', which is not a loop at '" +
                              g.vertex_label(p.vertex) + "'");
  }
  if (!(p.norm_squared() < 1.0)) throw InvalidEigenPoint("weight vector must have norm < 1");
}

struct Eigenvector {
  std::vector<cplx> vector;
  double tail = 0.0;            // norm of the part cut off above the level
  double eigen_residual = 0.0;  // bound on |L_e^* nu - conj(lambda_e) nu| over edges
  double norm = 0.0;
};

inline bool is_loop_word_at(const DirectedMultigraph& g, const Path& w, std::size_t x) {
  if (w.src != x || w.rng != x) return false;
  return std::all_of(w.edges.begin(), w.edges.end(), [&](std::size_t e) {
    return g.edge(e).src == x && g.edge(e).dst == x;
  });
}

/// nu = sqrt(1 - |lambda|^2) sum over loop words w at x of conj(w(lambda)) xi_w.
/// Loop words commute under evaluation, so the same vector serves side R.
inline Eigenvector eigenvector(const FockSpace& s, const EigenPoint& p, Side side = Side::L) {
  (void)side;
  const auto& g = s.graph();
  validate_eigen_point(g, p);
  const double r = p.norm_squared();
  const double scale = std::sqrt(1.0 - r);
  Eigenvector out;
  out.vector.assign(s.dim(), cplx{});
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const Path& w = s.path(i);
    if (!is_loop_word_at(g, w, p.vertex)) continue;
    out.vector[i] = scale * std::conj(path_eval(w, p.lambda));
  }
  const double n = static_cast<double>(s.level());
  out.tail = std::pow(r, (n + 1.0) / 2.0);
  double max_lambda = 0.0;
  for (auto l : p.lambda) max_lambda = std::max(max_lambda, std::abs(l));
  out.eigen_residual = max_lambda * scale * std::pow(r, n / 2.0);
  out.norm = vector_norm(out.vector);
  return out;
}

/// <A nu, nu>.
inline cplx point_functional(const SparseOperator& a, std::span<const cplx> nu) {
  auto an = a.apply(nu);
  return inner(an, nu);
}

// ---------------------------------------------------------------------------
// Wandering subspaces

inline Eigen::MatrixXcd columns_of(const std::vector<std::vector<cplx>>& vs, std::size_t dim) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) {
    if (vs[j].size() != dim) throw DimensionMismatch("spanning vector has the wrong size");
    for (std::size_t i = 0; i < dim; ++i)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vs[j][i];
  }
  return m;
}

/// Orthonormal basis of the column space, rank decided at `tol` relative to 1.
inline Eigen::MatrixXcd orthonormal_basis(const Eigen::MatrixXcd& m, double tol = kRankTolerance) {
  if (m.cols() == 0) return Eigen::MatrixXcd(m.rows(), 0);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Multiplies by a unimodular scalar so the largest entry is real positive.
inline std::vector<cplx> phase_normalized(std::vector<cplx> v, double tol = kEntryTolerance) {
  double best = 0.0;
  std::size_t at = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > best + tol) {
      best = std::abs(v[i]);
      at = i;
    }
  if (best == 0.0) return v;
  const cplx phase = std::abs(v[at]) / v[at];
  for (auto& x : v) x *= phase;
  return v;
}

struct WanderingVector {
  std::size_t vertex = 0;  // P_x zeta = zeta (side L) or Q_x zeta = zeta (side R)
  std::vector<cplx> vector;
};

struct WanderingResult {
  std::vector<WanderingVector> basis;
  double invariance_residual = 0.0;
  std::size_t subspace_dim = 0;
  double rank_tolerance = kRankTolerance;
};

/// Orthonormal basis of W = M minus the span of gen_e M, split through the
/// vertex projections (P_x on side L, Q_x on side R).
inline WanderingResult wandering_basis(const FockSpace& s,
                                       const std::vector<std::vector<cplx>>& spanning, Side side,
                                       double tol = kRankTolerance) {
  const auto& g = s.graph();
  const auto dim = s.dim();
  WanderingResult out;
  out.rank_tolerance = tol;
  Eigen::MatrixXcd q = orthonormal_basis(columns_of(spanning, dim), tol);
  out.subspace_dim = static_cast<std::size_t>(q.cols());
  if (q.cols() == 0) return out;

  // Translates gen_e M and invariance check.
  std::vector<Eigen::MatrixXcd> parts;
  Eigen::Index total = 0;
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    Eigen::MatrixXcd gen = to_dense(side == Side::L ? left_creation(s, e) : right_creation(s, e));
    Eigen::MatrixXcd moved = gen * q;
    Eigen::MatrixXcd outside = moved - q * (q.adjoint() * moved);
    if (outside.size() > 0)
      out.invariance_residual = std::max(out.invariance_residual, outside.cwiseAbs().maxCoeff());
    total += moved.cols();
    parts.push_back(std::move(moved));
  }
  if (out.invariance_residual > tol) throw NonInvariantSubspace(out.invariance_residual);
  Eigen::MatrixXcd translates(static_cast<Eigen::Index>(dim), total);
  Eigen::Index at = 0;
  for (const auto& p : parts) {
    translates.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  Eigen::MatrixXcd k = orthonormal_basis(translates, tol);
  Eigen::MatrixXcd rest = q - k * (k.adjoint() * q);

  for (std::size_t x = 0; x < g.vertex_count(); ++x) {
    Eigen::MatrixXcd corner = rest;
    for (std::size_t i = 0; i < dim; ++i) {
      const Path& w = s.path(i);
      if ((side == Side::L ? w.rng : w.src) != x) corner.row(static_cast<Eigen::Index>(i)).setZero();
    }
    Eigen::MatrixXcd b = orthonormal_basis(corner, tol);
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      std::vector<cplx> v(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        v[i] = b(static_cast<Eigen::Index>(i), j);
        if (std::abs(v[i]) <= kEntryTolerance) v[i] = {};
      }
      out.basis.push_back({x, phase_normalized(std::move(v))});
    }
  }
  return out;
}

struct CyclicPiece {
  std::size_t vertex = 0;
  std::vector<cplx> wandering;
  SparseOperator partial_isometry;  // on the opposite side; range = cyclic subspace
};

struct BeurlingSplit {
  std::vector<CyclicPiece> pieces;
  double invariance_residual = 0.0;
  double range_overlap = 0.0;             // max |V_i^* V_j| on safe columns, i != j
  double reconstruction_residual = 0.0;   // distance of M's basis from the span of the ranges
};

inline BeurlingSplit beurling_split(const FockSpace& s,
                                    const std::vector<std::vector<cplx>>& spanning, Side side,
                                    double tol = kRankTolerance) {
  auto w = wandering_basis(s, spanning, side, tol);
  BeurlingSplit out;
  out.invariance_residual = w.invariance_residual;
  const Side opposite = side == Side::L ? Side::R : Side::L;
  for (auto& v : w.basis) {
    auto op = make_creation_from_vector(s, opposite, v.vertex, v.vector);
    out.pieces.push_back({v.vertex, std::move(v.vector), std::move(op)});
  }
  for (std::size_t i = 0; i < out.pieces.size(); ++i)
    for (std::size_t j = i + 1; j < out.pieces.size(); ++j) {
      const auto& a = out.pieces[i].partial_isometry;
      const auto& b = out.pieces[j].partial_isometry;
      const auto mask = s.safe_mask(std::max(a.degree(), b.degree()));
      out.range_overlap =
          std::max(out.range_overlap, (a.adjoint() * b).restrict_columns(mask).max_abs());
    }
  // Span of all ranges vs M.
  std::vector<std::vector<cplx>> cols;
  for (const auto& p : out.pieces)
    for (std::size_t c = 0; c < s.dim(); ++c) {
      auto col = p.partial_isometry.column(c);
      if (vector_norm(col) > 0.0) cols.push_back(std::move(col));
    }
  Eigen::MatrixXcd ranges = orthonormal_basis(columns_of(cols, s.dim()), tol);
  Eigen::MatrixXcd m = orthonormal_basis(columns_of(spanning, s.dim()), tol);
  if (m.cols() > 0) {
    Eigen::MatrixXcd miss = m - ranges * (ranges.adjoint() * m);
    out.reconstruction_residual = miss.cwiseAbs().maxCoeff();
  }
  return out;
}

}  // namespace fsga
