#ifndef GWB_ALGEBRA_HPP
#define GWB_ALGEBRA_HPP

#include "gwb/linalg.hpp"
#include "gwb/measure.hpp"

namespace gwb {

/// Complex-valued function on the arrows of a groupoid. On a finite set
/// every integrability class collapses to the full function space.
struct AlgebraElement {
    VectorC coeff;
};

namespace detail {
template <typename S> struct scalar_ops;
template <> struct scalar_ops<Complex> {
    static Complex from_rational(const Rational& q) { return Complex(to_double(q), 0.0); }
    static Complex conj(const Complex& z) { return std::conj(z); }
};
template <> struct scalar_ops<Rational> {
    static Rational from_rational(const Rational& q) { return q; }
    static Rational conj(const Rational& q) { return q; } // real-valued path
};
} // namespace detail

/// (f*g)(x) = sum_{y in G^{s(x)}} weight(y) f(xy) g(y^{-1}).
/// Instantiated with Complex for numeric work and Rational for exact checks
/// on real rational-valued functions.
template <typename S>
std::vector<S> convolve_fn(const MeasuredGroupoid& mg, const std::vector<S>& f,
                           const std::vector<S>& g) {
    const auto& G = *mg.g;
    std::vector<S> out(G.num_arrows(), S(0));
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        for (ArrowId y = 0; y < G.num_arrows(); ++y) {
            if (G.tgt(y) != G.src(x)) continue;
            out[x] += detail::scalar_ops<S>::from_rational(mg.haar.weight[y]) *
                      f[G.comp_raw(x, y)] * g[G.inv(y)];
        }
    return out;
}

/// f^*(x) = conj(f(x^{-1})).
template <typename S>
std::vector<S> involute_fn(const FiniteGroupoid& g, const std::vector<S>& f) {
    std::vector<S> out(g.num_arrows(), S(0));
    for (ArrowId x = 0; x < g.num_arrows(); ++x)
        out[x] = detail::scalar_ops<S>::conj(f[g.inv(x)]);
    return out;
}

AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g,
                        const MeasuredGroupoid& mg);
AlgebraElement involute(const AlgebraElement& f, const MeasuredGroupoid& mg);
AlgebraElement delta_element(const MeasuredGroupoid& mg, ArrowId x);
/// Two-sided unit of convolution: 1/weight(unit(u)) on each unit arrow.
AlgebraElement unit_element(const MeasuredGroupoid& mg);

/// The left regular representation on L^2(G, nu), with the right regular
/// representation and the modular conjugation J of the standard form.
/// Operators are matrices acting on coefficient vectors in the delta basis;
/// the inner product is <phi, psi> = sum_x nu(x) conj(phi(x)) psi(x).
class RegularRepresentation {
public:
    explicit RegularRepresentation(const MeasuredGroupoid& mg);

    int dim() const { return static_cast<int>(nu_.size()); }
    const std::vector<double>& space_weights() const { return nu_; }
    const std::vector<double>& modular_delta() const { return delta_; }

    MatrixC piL(const AlgebraElement& f) const;
    MatrixC piR(const AlgebraElement& f) const;
    MatrixC piL_delta(ArrowId x) const;
    MatrixC piR_delta(ArrowId x) const;
    std::vector<MatrixC> piL_generators() const;
    std::vector<MatrixC> piR_generators() const;

    /// Matrix of the antilinear map J; apply as J * conj(psi).
    const MatrixC& J_matrix() const { return jmat_; }
    /// J A J for a linear operator A (a linear operator again).
    MatrixC conjugate_by_J(const MatrixC& a) const;

    /// Adjoint with respect to the weighted inner product.
    MatrixC adjoint(const MatrixC& a) const;
    /// Conjugation into the orthonormal frame e_x / sqrt(nu(x)), where the
    /// Hilbert-Schmidt geometry of linalg.hpp applies directly.
    MatrixC to_orthonormal(const MatrixC& a) const;

    Complex inner(const VectorC& a, const VectorC& b) const;

private:
    const MeasuredGroupoid* mg_;
    std::vector<double> nu_;     // per arrow
    std::vector<double> delta_;  // modular homomorphism
    MatrixC jmat_;
};

/// Full-matrix block sizes (sorted ascending) of the *-closed unital
/// algebra spanned by `basis` (matrices in an orthonormal frame).
/// Diagonalizes the center with a randomized self-adjoint central element;
/// retries on spectral degeneracy, throws std::runtime_error after that.
std::vector<int> wedderburn(const std::vector<MatrixC>& basis,
                            double tol = kDefaultTol, unsigned seed = 11);

/// Convenience: W*(G) of a measured groupoid as an HS-orthonormal basis in
/// the orthonormal frame of L^2(G), plus its Wedderburn block sizes.
struct AlgebraSummary {
    int dimension;
    int center_dimension;
    std::vector<int> blocks;
};
AlgebraSummary analyze_convolution_algebra(const MeasuredGroupoid& mg,
                                           double tol = kDefaultTol);

} // namespace gwb

#endif
