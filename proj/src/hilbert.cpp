#include "oql/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace oql {

namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

// Rotates v so that its first amplitude above `tol` is real and positive.
void fix_phase(ComplexVector& v, double tol = 1e-10) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > tol) {
      v *= std::conj(v[i]) / mag;
      v[i] = Complex(std::abs(v[i]), 0.0);
      return;
    }
  }
}

// Orthonormal basis of span(columns) built by projecting the standard basis
// vectors in order.
std::vector<ComplexVector> canonical_basis(const std::vector<ComplexVector>& span) {
  const Eigen::Index n = span.front().size();
  ComplexMatrix q = ComplexMatrix::Zero(n, n);
  for (const auto& v : span) q += v * v.adjoint();

  std::vector<ComplexVector> out;
  for (Eigen::Index k = 0; k < n && out.size() < span.size(); ++k) {
    ComplexVector w = q.col(k);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : out) w -= u * u.dot(w);
    const double norm = w.norm();
    if (norm > 1e-6) out.push_back(w / norm);
  }
  return out;
}

}  // namespace

// --- value types --------------------------------------------------------

StateVector::StateVector(ComplexVector amplitudes, std::optional<FactorDims> dims, double eps)
    : amp_(std::move(amplitudes)), dims_(dims) {
  if (amp_.size() == 0) throw DimensionMismatch("state vector must have positive dimension");
  if (!all_finite(amp_)) throw NormViolation("state vector has non-finite amplitudes");
  if (std::abs(amp_.norm() - 1.0) > eps) throw NormViolation("state vector is not unit norm");
  if (dims_ && dims_->total() != dim())
    throw DimensionMismatch("factor dimensions do not multiply to the vector dimension");
}

StateVector StateVector::normalized(ComplexVector v, std::optional<FactorDims> dims) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NormViolation("cannot normalise a zero vector");
  return StateVector(v / norm, dims);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::product(const StateVector& a, const StateVector& b) {
  ComplexVector v = tensor(a.amplitudes(), b.amplitudes());
  return StateVector(std::move(v), FactorDims{a.dim(), b.dim()});
}

DensityOperator::DensityOperator(ComplexMatrix m, double eps) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw InvalidOperator("density operator must be a nonempty square matrix");
  if (!all_finite(m_)) throw InvalidOperator("density operator has non-finite entries");
  if (!is_hermitian(m_, eps)) throw InvalidOperator("not Hermitian within eps");
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > eps) throw InvalidOperator("trace is not 1 within eps");
  const auto eig = hermitian_eigen(m_);
  if (eig.back().weight < -eps) throw InvalidOperator("not positive semidefinite within eps");
}

DensityOperator DensityOperator::pure(const StateVector& psi) {
  return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return DensityOperator(ComplexMatrix::Identity(n, n) / static_cast<double>(dim));
}

double DensityOperator::purity() const { return (m_ * m_).trace().real(); }

Projection::Projection(ComplexMatrix m, double eps) : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols())
    throw InvalidOperator("projection must be a nonempty square matrix");
  if (!all_finite(m_)) throw InvalidOperator("projection has non-finite entries");
  if (!is_hermitian(m_, eps)) throw InvalidOperator("projection is not self-adjoint within eps");
  if (max_abs_diff(m_ * m_, m_) > eps) throw InvalidOperator("projection is not idempotent within eps");
  const double tr = m_.trace().real();
  const double r = std::round(tr);
  if (std::abs(tr - r) > std::max(eps, 1e-12 * static_cast<double>(m_.rows())))
    throw InvalidOperator("projection trace is not an integer rank");
  rank_ = static_cast<std::size_t>(std::max(0.0, r));
}

Projection Projection::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Projection(ComplexMatrix::Zero(n, n));
}

Projection Projection::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Projection(ComplexMatrix::Identity(n, n));
}

Projection Projection::onto(const StateVector& psi) {
  return Projection(psi.amplitudes() * psi.amplitudes().adjoint());
}

Projection Projection::onto_columns(const ComplexMatrix& cols) {
  ComplexMatrix p = cols * cols.adjoint();
  p = (p + p.adjoint()) / 2.0;
  return Projection(std::move(p));
}

// --- kernels --------------------------------------------------------------

bool is_hermitian(const ComplexMatrix& m, double eps) {
  return m.rows() == m.cols() && max_abs_diff(m, m.adjoint()) <= eps;
}

bool is_unitary(const ComplexMatrix& m, double eps) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  return max_abs_diff(m.adjoint() * m, ComplexMatrix::Identity(m.rows(), m.cols())) <= eps;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shapes differ");
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

double phase_overlap(const ComplexVector& u, const ComplexVector& v) { return std::abs(u.dot(v)); }

std::vector<EigenPair> hermitian_eigen(const ComplexMatrix& h, double degeneracy_tol) {
  if (h.rows() != h.cols() || h.rows() == 0) throw DimensionMismatch("eigensolver needs a square matrix");
  const Eigen::Index n = h.rows();
  ComplexMatrix a = (h + h.adjoint()) / 2.0;
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale) break;

    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const Complex phase = apq / mag;
        const double tau = (a(q, q).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on the (p, q) plane.
        const Complex gpp = c, gpq = s, gqp = -s * std::conj(phase), gqq = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() > a(y, y).real(); });

  std::vector<EigenPair> out;
  for (Eigen::Index i : order) out.push_back({a(i, i).real(), v.col(i)});

  // Canonical bases inside (near-)degenerate eigenspaces.
  for (std::size_t start = 0; start < out.size();) {
    std::size_t end = start + 1;
    while (end < out.size() && out[end - 1].weight - out[end].weight <= degeneracy_tol) ++end;
    if (end - start > 1) {
      std::vector<ComplexVector> span;
      for (std::size_t i = start; i < end; ++i) span.push_back(out[i].vector);
      auto basis = canonical_basis(span);
      if (basis.size() == span.size())
        for (std::size_t i = start; i < end; ++i) out[i].vector = basis[i - start];
    }
    start = end;
  }
  for (auto& e : out) fix_phase(e.vector);
  return out;
}

Svd jacobi_svd(const ComplexMatrix& m) {
  const Eigen::Index cols = m.cols();
  ComplexMatrix w = m;
  ComplexMatrix v = ComplexMatrix::Identity(cols, cols);

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (Eigen::Index i = 0; i < cols; ++i) {
      for (Eigen::Index j = i + 1; j < cols; ++j) {
        const double alpha = w.col(i).squaredNorm();
        const double beta = w.col(j).squaredNorm();
        const Complex gamma = w.col(i).dot(w.col(j));
        const double mag = std::abs(gamma);
        if (mag == 0.0 || mag <= 1e-15 * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const Complex phase = std::conj(gamma / mag);
        const double zeta = (beta - alpha) / (2.0 * mag);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        ComplexVector wi = w.col(i), wj = w.col(j) * phase;
        w.col(i) = c * wi - s * wj;
        w.col(j) = s * wi + c * wj;
        ComplexVector vi = v.col(i), vj = v.col(j) * phase;
        v.col(i) = c * vi - s * vj;
        v.col(j) = s * vi + c * vj;
      }
    }
    if (!rotated) break;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::vector<double> norms(static_cast<std::size_t>(cols));
  for (Eigen::Index k = 0; k < cols; ++k) norms[static_cast<std::size_t>(k)] = w.col(k).norm();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return norms[static_cast<std::size_t>(x)] > norms[static_cast<std::size_t>(y)];
  });

  Svd out;
  for (Eigen::Index k : order) {
    const double sigma = norms[static_cast<std::size_t>(k)];
    out.singular_values.push_back(sigma);
    out.left.push_back(sigma > 0.0 ? ComplexVector(w.col(k) / sigma)
                                   : ComplexVector(ComplexVector::Zero(m.rows())));
    out.right.push_back(v.col(k));
  }
  return out;
}

// --- operations -----------------------------------------------------------

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityOperator partial_trace(const DensityOperator& w, FactorDims dims, Factor keep) {
  if (dims.a == 0 || dims.b == 0 || dims.total() != w.dim())
    throw DimensionMismatch("partial trace: dimension " + std::to_string(w.dim()) + " is not " +
                            std::to_string(dims.a) + " x " + std::to_string(dims.b));
  const auto da = static_cast<Eigen::Index>(dims.a), db = static_cast<Eigen::Index>(dims.b);
  const ComplexMatrix& m = w.matrix();
  ComplexMatrix out;
  if (keep == Factor::A) {
    out = ComplexMatrix::Zero(da, da);
    for (Eigen::Index x = 0; x < da; ++x)
      for (Eigen::Index y = 0; y < da; ++y)
        for (Eigen::Index k = 0; k < db; ++k) out(x, y) += m(x * db + k, y * db + k);
  } else {
    out = ComplexMatrix::Zero(db, db);
    for (Eigen::Index x = 0; x < db; ++x)
      for (Eigen::Index y = 0; y < db; ++y)
        for (Eigen::Index k = 0; k < da; ++k) out(x, y) += m(k * db + x, k * db + y);
  }
  out = (out + out.adjoint()) / 2.0;
  return DensityOperator(std::move(out));
}

SchmidtForm schmidt(const StateVector& psi, FactorDims dims, double eps) {
  if (dims.a == 0 || dims.b == 0 || dims.total() != psi.dim())
    throw DimensionMismatch("schmidt: vector dimension does not match factor dimensions");
  const auto da = static_cast<Eigen::Index>(dims.a), db = static_cast<Eigen::Index>(dims.b);
  ComplexMatrix amp(da, db);
  for (Eigen::Index x = 0; x < da; ++x)
    for (Eigen::Index y = 0; y < db; ++y) amp(x, y) = psi.amplitudes()[x * db + y];

  // amp = sum s_k u_k v_k^dagger, so psi = sum s_k u_k (x) conj(v_k).
  const Svd svd = jacobi_svd(amp);
  SchmidtForm out;
  for (std::size_t k = 0; k < svd.singular_values.size(); ++k) {
    if (svd.singular_values[k] <= eps) continue;
    ComplexVector left = svd.left[k];
    ComplexVector right = svd.right[k].conjugate();
    for (Eigen::Index i = 0; i < left.size(); ++i) {
      const double mag = std::abs(left[i]);
      if (mag > 1e-10) {
        const Complex rot = std::conj(left[i]) / mag;
        left *= rot;
        right /= rot;
        break;
      }
    }
    out.coefficients.push_back(svd.singular_values[k]);
    out.left_basis.push_back(std::move(left));
    out.right_basis.push_back(std::move(right));
  }
  return out;
}

bool is_entangled(const StateVector& psi, FactorDims dims, double eps) {
  return schmidt(psi, dims, eps).rank() > 1;
}

std::vector<EigenPair> eigendecomposition(const DensityOperator& w, double eps) {
  auto all = hermitian_eigen(w.matrix());
  std::erase_if(all, [&](const EigenPair& e) { return e.weight <= eps; });
  return all;
}

std::vector<ConvexDecomposition> decompositions_sample(const DensityOperator& w, std::size_t parts,
                                                       std::size_t count, std::uint64_t seed,
                                                       double eps) {
  const auto eig = eigendecomposition(w, eps);
  const std::size_t rank = eig.size();
  if (parts < rank)
    throw PartsBelowRank("decomposition needs at least " + std::to_string(rank) + " parts, got " +
                         std::to_string(parts));

  const auto k = static_cast<Eigen::Index>(parts), r = static_cast<Eigen::Index>(rank);
  const auto n = static_cast<Eigen::Index>(w.dim());
  ComplexMatrix scaled(n, r);
  for (Eigen::Index i = 0; i < r; ++i)
    scaled.col(i) = std::sqrt(eig[static_cast<std::size_t>(i)].weight) * eig[static_cast<std::size_t>(i)].vector;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ConvexDecomposition> out;
  out.reserve(count);
  for (std::size_t sample = 0; sample < count; ++sample) {
    ComplexMatrix g(k, r);
    for (Eigen::Index j = 0; j < r; ++j)
      for (Eigen::Index i = 0; i < k; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    const ComplexMatrix isometry = qr.householderQ() * ComplexMatrix::Identity(k, r);

    ConvexDecomposition d;
    for (Eigen::Index j = 0; j < k; ++j) {
      const ComplexVector x = scaled * isometry.row(j).transpose();
      const double q = x.squaredNorm();
      if (q <= 0.0) continue;
      d.push_back({q, x / std::sqrt(q)});
    }
    out.push_back(std::move(d));
  }
  return out;
}

ComplexMatrix reconstruct(const ConvexDecomposition& d) {
  if (d.empty()) return {};
  const auto n = d.front().vector.size();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& term : d) out += term.weight * term.vector * term.vector.adjoint();
  return out;
}

double born(const DensityOperator& w, const Projection& p) {
  if (w.dim() != p.dim()) throw DimensionMismatch("born: operator dimensions differ");
  const double v = (w.matrix() * p.matrix()).trace().real();
  return std::clamp(v, 0.0, 1.0);
}

Projection support_projection(const ComplexMatrix& hermitian, double eps) {
  const auto eig = hermitian_eigen(hermitian);
  std::vector<ComplexVector> kept;
  for (const auto& e : eig)
    if (e.weight > eps) kept.push_back(e.vector);
  ComplexMatrix cols(hermitian.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = kept[i];
  return Projection::onto_columns(cols);
}

bool range_preorder(const DensityOperator& w1, const DensityOperator& w2, double eps) {
  if (w1.dim() != w2.dim()) throw DimensionMismatch("range preorder: operator dimensions differ");
  const Projection q2 = support_projection(w2.matrix(), eps);
  return max_abs_diff(q2.matrix() * w1.matrix() * q2.matrix(), w1.matrix()) <= eps;
}

Projection projection_meet(const Projection& p, const Projection& q, double eps) {
  if (p.dim() != q.dim()) throw DimensionMismatch("projection meet: dimensions differ");
  const auto n = static_cast<Eigen::Index>(p.dim());
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix complements = (id - p.matrix()) + (id - q.matrix());
  const auto eig = hermitian_eigen(complements);
  std::vector<ComplexVector> kernel;
  for (const auto& e : eig)
    if (e.weight <= eps) kernel.push_back(e.vector);
  ComplexMatrix cols(n, static_cast<Eigen::Index>(kernel.size()));
  for (std::size_t i = 0; i < kernel.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = kernel[i];
  return Projection::onto_columns(cols);
}

PurityChange reduced_evolution(const StateVector& psi0, const ComplexMatrix& u, FactorDims dims,
                               double eps) {
  if (dims.total() != psi0.dim() || u.rows() != static_cast<Eigen::Index>(psi0.dim()) ||
      u.cols() != u.rows())
    throw DimensionMismatch("reduced evolution: dimensions do not match");
  if (!is_unitary(u, eps)) throw NotUnitary("evolution operator is not unitary within eps");
  const StateVector psi1(u * psi0.amplitudes(), dims, eps);
  const double before = partial_trace(DensityOperator::pure(psi0), dims, Factor::A).purity();
  const double after = partial_trace(DensityOperator::pure(psi1), dims, Factor::A).purity();
  return {before, after};
}

}  // namespace oql
