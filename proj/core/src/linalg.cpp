#include "gwb/linalg.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <random>

namespace gwb {

int rank_of(const MatrixC& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<MatrixC> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0) return 0;
    double cut = tol * s(0);
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return r;
}

MatrixC null_space(const MatrixC& m, double tol) {
    if (m.size() == 0) return MatrixC::Identity(0, 0);
    Eigen::JacobiSVD<MatrixC> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double cut = (s.size() > 0 && s(0) > 0) ? tol * s(0) : 0.0;
    int r = 0;
    for (int i = 0; i < s.size(); ++i)
        if (s(i) > cut) ++r;
    return svd.matrixV().rightCols(m.cols() - r);
}

VectorC vec(const MatrixC& m) {
    return Eigen::Map<const VectorC>(m.data(), m.size());
}

MatrixC unvec(const VectorC& v, int rows, int cols) {
    return Eigen::Map<const MatrixC>(v.data(), rows, cols);
}

Complex hs_inner(const MatrixC& a, const MatrixC& b) {
    return (a.adjoint() * b).trace();
}

bool MatrixSpan::add(const MatrixC& m) {
    MatrixC r = m;
    for (const auto& b : basis_) r -= hs_inner(b, r) * b;
    // One re-orthogonalization pass for numerical safety at scale.
    for (const auto& b : basis_) r -= hs_inner(b, r) * b;
    double norm = std::sqrt(std::abs(hs_inner(r, r)));
    double ref = std::sqrt(std::abs(hs_inner(m, m)));
    if (norm <= tol_ * std::max(1.0, ref)) return false;
    basis_.push_back(r / norm);
    return true;
}

bool MatrixSpan::contains(const MatrixC& m) const {
    MatrixC r = m;
    for (const auto& b : basis_) r -= hs_inner(b, r) * b;
    double norm = std::sqrt(std::abs(hs_inner(r, r)));
    double ref = std::sqrt(std::abs(hs_inner(m, m)));
    return norm <= tol_ * std::max(1.0, ref);
}

std::vector<MatrixC> generate_algebra(const std::vector<MatrixC>& generators,
                                      int ambient_dim, double tol) {
    MatrixSpan span(tol);
    span.add(MatrixC::Identity(ambient_dim, ambient_dim));
    for (const auto& g : generators) span.add(g);
    // Close under products; each pass multiplies all current basis pairs.
    bool grew = true;
    while (grew) {
        grew = false;
        auto snapshot = span.basis();
        for (const auto& a : snapshot)
            for (const auto& b : snapshot)
                if (span.add(a * b)) grew = true;
        if (span.dim() >= ambient_dim * ambient_dim) break;
    }
    return span.basis();
}

std::vector<MatrixC> commutant(const std::vector<MatrixC>& algebra_basis,
                               int ambient_dim, double tol) {
    const int n = ambient_dim;
    const int k = static_cast<int>(algebra_basis.size());
    if (k == 0) {
        std::vector<MatrixC> all;
        for (int i = 0; i < n * n; ++i) {
            MatrixC e = MatrixC::Zero(n, n);
            e(i % n, i / n) = 1.0;
            all.push_back(e);
        }
        return all;
    }
    // vec(AX - XA) = (I kron A - A^T kron I) vec(X)
    MatrixC sys(static_cast<Eigen::Index>(k) * n * n, n * n);
    MatrixC id = MatrixC::Identity(n, n);
    for (int i = 0; i < k; ++i) {
        const MatrixC& a = algebra_basis[i];
        MatrixC block = Eigen::kroneckerProduct(id, a).eval() -
                        Eigen::kroneckerProduct(a.transpose(), id).eval();
        sys.middleRows(static_cast<Eigen::Index>(i) * n * n, n * n) = block;
    }
    MatrixC ns = null_space(sys, tol);
    std::vector<MatrixC> out;
    for (int j = 0; j < ns.cols(); ++j) out.push_back(unvec(ns.col(j), n, n));
    return out;
}

bool same_span(const std::vector<MatrixC>& a, const std::vector<MatrixC>& b,
               double tol) {
    MatrixSpan sa(tol), sb(tol);
    for (const auto& m : a) sa.add(m);
    for (const auto& m : b) sb.add(m);
    if (sa.dim() != sb.dim()) return false;
    for (const auto& m : a)
        if (!sb.contains(m)) return false;
    for (const auto& m : b)
        if (!sa.contains(m)) return false;
    return true;
}

double min_eigenvalue(const MatrixC& hermitian) {
    if (hermitian.size() == 0) return 0.0;
    MatrixC h = 0.5 * (hermitian + hermitian.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixC> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

std::vector<MatrixC> intertwiner_space(const std::vector<MatrixC>& a,
                                       const std::vector<MatrixC>& b,
                                       int dim_a, int dim_b, double tol) {
    const int k = static_cast<int>(a.size());
    // vec(U A_i - B_i U) = (A_i^T kron I_b - I_a kron B_i) vec(U)
    MatrixC sys(static_cast<Eigen::Index>(std::max(k, 1)) * dim_a * dim_b,
                static_cast<Eigen::Index>(dim_a) * dim_b);
    sys.setZero();
    MatrixC ia = MatrixC::Identity(dim_a, dim_a);
    MatrixC ib = MatrixC::Identity(dim_b, dim_b);
    for (int i = 0; i < k; ++i) {
        MatrixC block = Eigen::kroneckerProduct(a[i].transpose(), ib).eval() -
                        Eigen::kroneckerProduct(ia, b[i]).eval();
        sys.middleRows(static_cast<Eigen::Index>(i) * dim_a * dim_b, dim_a * dim_b) = block;
    }
    MatrixC ns = null_space(sys, tol);
    std::vector<MatrixC> out;
    for (int j = 0; j < ns.cols(); ++j) out.push_back(unvec(ns.col(j), dim_b, dim_a));
    return out;
}

MatrixC find_invertible(const std::vector<MatrixC>& space, unsigned seed, double tol) {
    if (space.empty()) return MatrixC();
    if (space[0].rows() != space[0].cols()) return MatrixC();
    const int n = static_cast<int>(space[0].rows());
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 32; ++attempt) {
        MatrixC cand = MatrixC::Zero(n, n);
        for (const auto& m : space)
            cand += Complex(gauss(rng), gauss(rng)) * m;
        Eigen::JacobiSVD<MatrixC> svd(cand);
        const auto& s = svd.singularValues();
        if (s.size() > 0 && s(0) > 0 && s(s.size() - 1) > tol * s(0)) return cand;
    }
    return MatrixC();
}

} // namespace gwb
