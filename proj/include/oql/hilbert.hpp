#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oql {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Tolerances shared by every numerical routine.
struct Tolerance {
  double eps = 1e-9;        // structural checks
  double eps_recon = 1e-8;  // reconstructions
};

class HilbertError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public HilbertError {
public:
  using HilbertError::HilbertError;
};

class NormViolation : public HilbertError {
public:
  using HilbertError::HilbertError;
};

class NotUnitary : public HilbertError {
public:
  using HilbertError::HilbertError;
};

class InvalidOperator : public HilbertError {
public:
  using HilbertError::HilbertError;
};

class PartsBelowRank : public HilbertError {
public:
  using HilbertError::HilbertError;
};

/// Bipartite factor dimensions; composite index is a * dB + b.
struct FactorDims {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t total() const { return a * b; }
};

enum class Factor { A, B };

/// Unit vector, optionally tagged with bipartite factor dimensions.
class StateVector {
public:
  StateVector(ComplexVector amplitudes, std::optional<FactorDims> dims = std::nullopt,
              double eps = Tolerance{}.eps);

  std::size_t dim() const { return static_cast<std::size_t>(amp_.size()); }
  const ComplexVector& amplitudes() const { return amp_; }
  const std::optional<FactorDims>& factor_dims() const { return dims_; }

  /// Normalises `v` first; throws NormViolation on a zero vector.
  static StateVector normalized(ComplexVector v, std::optional<FactorDims> dims = std::nullopt);
  static StateVector basis(std::size_t dim, std::size_t index);
  static StateVector product(const StateVector& a, const StateVector& b);

private:
  ComplexVector amp_;
  std::optional<FactorDims> dims_;
};

/// Hermitian, positive semidefinite, unit trace (all within eps).
class DensityOperator {
public:
  explicit DensityOperator(ComplexMatrix m, double eps = Tolerance{}.eps);

  static DensityOperator pure(const StateVector& psi);
  static DensityOperator maximally_mixed(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  double purity() const;

private:
  ComplexMatrix m_;
};

/// Orthogonal projection: P^2 = P = P^dagger within eps.
class Projection {
public:
  explicit Projection(ComplexMatrix m, double eps = Tolerance{}.eps);

  static Projection zero(std::size_t dim);
  static Projection identity(std::size_t dim);
  static Projection onto(const StateVector& psi);
  /// Projection onto the span of the given orthonormal columns.
  static Projection onto_columns(const ComplexMatrix& orthonormal_columns);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  std::size_t rank() const { return rank_; }

private:
  ComplexMatrix m_;
  std::size_t rank_ = 0;
};

struct SchmidtForm {
  std::vector<double> coefficients;  // descending, each above eps
  std::vector<ComplexVector> left_basis;
  std::vector<ComplexVector> right_basis;
  std::size_t rank() const { return coefficients.size(); }
};

struct EigenPair {
  double weight;
  ComplexVector vector;
};

struct WeightedVector {
  double weight;
  ComplexVector vector;
};
using ConvexDecomposition = std::vector<WeightedVector>;

// Numerical kernels.

/// Every eigenpair of a Hermitian matrix by cyclic Jacobi rotations, sorted by
/// descending eigenvalue. Degenerate eigenspaces get a canonical basis and
/// each vector's first nonzero amplitude is made real-positive.
std::vector<EigenPair> hermitian_eigen(const ComplexMatrix& h, double degeneracy_tol = 1e-9);

struct Svd {
  std::vector<double> singular_values;  // descending
  std::vector<ComplexVector> left;      // u_k
  std::vector<ComplexVector> right;     // v_k, with M = sum s_k u_k v_k^dagger
};

/// One-sided (Hestenes) Jacobi SVD.
Svd jacobi_svd(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double eps);
bool is_unitary(const ComplexMatrix& m, double eps);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Maximum over global phases of |<u, v>|, i.e. |<u, v>| itself.
double phase_overlap(const ComplexVector& u, const ComplexVector& v);

// Operations.

/// Kronecker product, left factor major.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on the kept factor.
DensityOperator partial_trace(const DensityOperator& w, FactorDims dims, Factor keep);

SchmidtForm schmidt(const StateVector& psi, FactorDims dims, double eps = Tolerance{}.eps);
bool is_entangled(const StateVector& psi, FactorDims dims, double eps = Tolerance{}.eps);

/// Spectral decomposition with weights descending and weights <= eps dropped.
std::vector<EigenPair> eigendecomposition(const DensityOperator& w, double eps = Tolerance{}.eps);

/// Seeded random convex decompositions into `parts` pure terms, generated by
/// random k x rank isometries applied to the scaled eigenvectors.
std::vector<ConvexDecomposition> decompositions_sample(const DensityOperator& w, std::size_t parts,
                                                       std::size_t count, std::uint64_t seed,
                                                       double eps = Tolerance{}.eps);

/// Sum of q_j |v_j><v_j|.
ComplexMatrix reconstruct(const ConvexDecomposition& d);

/// Tr(W P), clamped into [0, 1].
double born(const DensityOperator& w, const Projection& p);

/// range(W1) is contained in range(W2).
bool range_preorder(const DensityOperator& w1, const DensityOperator& w2,
                    double eps = Tolerance{}.eps);

/// Projection onto the span of eigenvectors with eigenvalue above eps.
Projection support_projection(const ComplexMatrix& hermitian, double eps = Tolerance{}.eps);

/// Projection onto the intersection of the ranges.
Projection projection_meet(const Projection& p, const Projection& q, double eps = Tolerance{}.eps);

struct PurityChange {
  double before;
  double after;
};

/// Purity of the reduced operator on factor A before and after applying U.
PurityChange reduced_evolution(const StateVector& psi0, const ComplexMatrix& u, FactorDims dims,
                               double eps = Tolerance{}.eps);

}  // namespace oql
