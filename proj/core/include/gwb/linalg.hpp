#ifndef GWB_LINALG_HPP
#define GWB_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace gwb {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using VectorC = Eigen::VectorXcd;

constexpr double kDefaultTol = 1e-9;

/// Numerical rank by singular-value thresholding at tol * sigma_max.
int rank_of(const MatrixC& m, double tol = kDefaultTol);

/// Orthonormal basis of the null space (columns), same thresholding.
MatrixC null_space(const MatrixC& m, double tol = kDefaultTol);

/// Flattens a matrix column-major into a vector.
VectorC vec(const MatrixC& m);
MatrixC unvec(const VectorC& v, int rows, int cols);

/// Hilbert-Schmidt inner product tr(a^* b).
Complex hs_inner(const MatrixC& a, const MatrixC& b);

/// Maintains an orthonormal (Hilbert-Schmidt) matrix basis; add() returns
/// true when the candidate enlarged the span.
class MatrixSpan {
public:
    explicit MatrixSpan(double tol = kDefaultTol) : tol_(tol) {}
    bool add(const MatrixC& m);
    bool contains(const MatrixC& m) const;
    const std::vector<MatrixC>& basis() const { return basis_; }
    int dim() const { return static_cast<int>(basis_.size()); }

private:
    double tol_;
    std::vector<MatrixC> basis_;
};

/// Smallest unital algebra (linear span closed under product) containing
/// the generators; returns an HS-orthonormal basis.
std::vector<MatrixC> generate_algebra(const std::vector<MatrixC>& generators,
                                      int ambient_dim, double tol = kDefaultTol);

/// Basis of {X : [X, A_i] = 0 for all i} inside all n x n matrices.
std::vector<MatrixC> commutant(const std::vector<MatrixC>& algebra_basis,
                               int ambient_dim, double tol = kDefaultTol);

/// Span equality of two sets of matrices of the same shape.
bool same_span(const std::vector<MatrixC>& a, const std::vector<MatrixC>& b,
               double tol = kDefaultTol);

/// Minimum eigenvalue of a Hermitian matrix (input symmetrized).
double min_eigenvalue(const MatrixC& hermitian);

/// Solution space of U A_i = B_i U for all i (U: dim_a -> dim_b columns/rows
/// swapped: U is dim_b x dim_a). Returns a basis of solutions.
std::vector<MatrixC> intertwiner_space(const std::vector<MatrixC>& a,
                                       const std::vector<MatrixC>& b,
                                       int dim_a, int dim_b,
                                       double tol = kDefaultTol);

/// Searches the span of `space` for an invertible element via randomized
/// combinations; returns one, or an empty matrix when none is found.
MatrixC find_invertible(const std::vector<MatrixC>& space, unsigned seed = 7,
                        double tol = kDefaultTol);

} // namespace gwb

#endif
