#ifndef GWB_BIMODULE_HPP
#define GWB_BIMODULE_HPP

#include "gwb/algebra.hpp"
#include "gwb/bibundle.hpp"

#include <optional>

namespace gwb {

/// A C*(G)-C*(H) Hilbert bimodule in a finite basis: delta-generator action
/// matrices, the C*(H)-valued inner product of basis vectors, and the
/// scalarized gram (trace of the right inner product in the left regular
/// representation of C*(H), which is faithful for fully supported
/// measures). Concrete modules built from bibundles keep their carrier
/// basis; interior tensor products live in an orthonormal quotient basis
/// (scalar_gram = identity).
struct BimoduleSpace {
    MeasuredGroupoid left_measure;  // G
    MeasuredGroupoid right_measure; // H
    int dim = 0;
    std::vector<MatrixC> left;                // per arrow of G
    std::vector<MatrixC> right;               // per arrow of H
    std::vector<std::vector<VectorC>> ip;     // ip[i][j] in C^{|H_1|}
    MatrixC scalar_gram;

    MatrixC left_of(const AlgebraElement& f) const;
    MatrixC right_of(const AlgebraElement& g) const;
    /// <v, w> as an algebra element over the right groupoid.
    VectorC ip_of(const VectorC& v, const VectorC& w) const;
    /// Block operator [pi_L(<e_i, e_j>)] on C^dim (x) L^2(H), in the
    /// orthonormal frame; its positivity is the module positivity.
    MatrixC operator_gram() const;
};

/// Exact rational F1-F3 kernels (real rational-valued functions), used for
/// the canonical-bibundle identities that must hold exactly.
std::vector<Rational> inner_product_exact(const Bibundle& b,
                                          const InducedMeasureSystem& mu,
                                          const std::vector<Rational>& phi,
                                          const std::vector<Rational>& psi);
std::vector<Rational> left_action_exact(const Bibundle& b, const MeasuredGroupoid& mg,
                                        const std::vector<Rational>& f,
                                        const std::vector<Rational>& phi);
std::vector<Rational> right_action_exact(const Bibundle& b, const MeasuredGroupoid& mh,
                                         const std::vector<Rational>& g,
                                         const std::vector<Rational>& phi);

/// E(M) of a left principal bibundle; throws std::runtime_error when the
/// operator gram fails positivity beyond tolerance.
BimoduleSpace build_bimodule(const Bibundle& b, const MeasuredGroupoid& mg,
                             const MeasuredGroupoid& mh, double tol = kDefaultTol);

/// Rieffel interior tensor product over the shared middle algebra.
BimoduleSpace interior_tensor(const BimoduleSpace& e1, const BimoduleSpace& e2,
                              double tol = kDefaultTol);

/// Unitary module-map existence between two bimodules over the same pair
/// of algebras; the witness also transports the algebra-valued inner
/// product within tolerance.
std::optional<MatrixC> bimodule_unitarily_equivalent(const BimoduleSpace& a,
                                                     const BimoduleSpace& b,
                                                     double tol = kDefaultTol,
                                                     unsigned seed = 29);

struct BimoduleCertificate {
    bool well_defined = false;  // exact, rational arithmetic
    bool isometry = false;
    bool surjective = false;
    bool left_linear = false, right_linear = false, middle_balanced = false;
    double isometry_residual = 0.0;
    double linearity_residual = 0.0;
    int rank = 0, target_dim = 0;
    MatrixC unitary;
    bool passed() const {
        return well_defined && isometry && surjective && left_linear &&
               right_linear && middle_balanced;
    }
    std::string summary() const;
};

/// The map U(phi (x) psi)[m,n] = sum_{h in H^{sigma(m)}} w(h) phi(m h) psi(h^{-1} n)
/// from E(M) (x) E(N) onto E(M (*) N), with its full certificate.
BimoduleCertificate bimodule_intertwiner(const Bibundle& b1, const Bibundle& b2,
                                         const MeasuredGroupoid& mg,
                                         const MeasuredGroupoid& mh,
                                         const MeasuredGroupoid& mk,
                                         double tol = kDefaultTol);

/// Isotropy group of the orbit of u0, as a multiplication table over the
/// arrows with src = tgt = u0.
struct IsotropyGroup {
    ObjectId basepoint;
    std::vector<ArrowId> elements;
    std::vector<std::vector<int>> table; // indices into elements
};
IsotropyGroup isotropy_group(const FiniteGroupoid& g, ObjectId u0);

/// Exhaustive isomorphism search between small group tables.
std::optional<std::vector<int>> group_isomorphism(
    const std::vector<std::vector<int>>& a, const std::vector<std::vector<int>>& b);

struct MoritaVerdict {
    bool equivalent = false;
    std::optional<Bibundle> witness; // biprincipal when equivalent
    std::string obstruction;
    std::vector<int> blocks_left, blocks_right; // Wedderburn cross-check
};

/// Orbit/isotropy classification of Morita equivalence for finite
/// groupoids, with an explicit biprincipal witness bibundle on success.
MoritaVerdict morita_decide(std::shared_ptr<const FiniteGroupoid> g,
                            std::shared_ptr<const FiniteGroupoid> h,
                            double tol = kDefaultTol);

} // namespace gwb

#endif
