#ifndef GWB_CORRESPONDENCE_HPP
#define GWB_CORRESPONDENCE_HPP

#include "gwb/algebra.hpp"

#include <utility>

namespace gwb {

/// A bimodule-style space in a fixed finite basis: an inner product matrix
/// plus commuting left/right actions given on delta generators of the two
/// convolution algebras. Concrete correspondences have a diagonal gram;
/// fusion quotients carry an identity gram in their orthonormal basis.
struct TwoSidedSpace {
    int dim = 0;
    MatrixC gram;
    std::vector<MatrixC> left;  // index = arrow of the left groupoid
    std::vector<MatrixC> right; // index = arrow of the right groupoid

    MatrixC left_of(const AlgebraElement& f) const;
    MatrixC right_of(const AlgebraElement& g) const;
};

/// The correspondence L^2(Phi) of a measured functor Phi: G -> H.
/// Basis: pairs (u, h), u in G_0, h in H_1 with Phi_0(u) = tgt(h);
/// weight(u, h) = base_G(u) * haar_H(h).
class CorrespondenceSpace {
public:
    CorrespondenceSpace(GroupoidFunctor f, MeasuredGroupoid dom, MeasuredGroupoid cod);

    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<std::pair<ObjectId, ArrowId>>& basis() const { return basis_; }
    int index_of(ObjectId u, ArrowId h) const; // -1 when not a basis pair
    double weight(int i) const { return weight_[i]; }

    const GroupoidFunctor& functor() const { return functor_; }
    const MeasuredGroupoid& dom() const { return dom_; }
    const MeasuredGroupoid& cod() const { return cod_; }

    /// pi_lambda(f) phi(u,h) =
    ///   sum_{y in G^u} w(y) Delta(y)^{-1/2} f(y) phi(s(y), Phi_1(y^{-1}) h)
    MatrixC pi_lambda(const AlgebraElement& f) const;
    /// pi_rho(g) phi(u,h) = sum_{l in H^{s(h)}} w(l) g(l^{-1}) phi(u, h l)
    MatrixC pi_rho(const AlgebraElement& g) const;
    MatrixC pi_lambda_delta(ArrowId x) const;
    MatrixC pi_rho_delta(ArrowId h) const;

    Complex inner(const VectorC& a, const VectorC& b) const;

    TwoSidedSpace as_space() const;

private:
    GroupoidFunctor functor_;
    MeasuredGroupoid dom_, cod_;
    std::vector<std::pair<ObjectId, ArrowId>> basis_;
    std::vector<int> index_;    // (u * |H_1| + h) -> basis index or -1
    std::vector<double> weight_;
    std::vector<double> delta_dom_; // modular data of dom, as doubles
};

CorrespondenceSpace build_correspondence(const GroupoidFunctor& f,
                                         const MeasuredGroupoid& dom,
                                         const MeasuredGroupoid& cod);
/// L^2(id_G): the standard self-correspondence of W*(G).
CorrespondenceSpace standard_correspondence(const MeasuredGroupoid& mg);

/// <psi1, psi2>_lambda over H, for psi_i in L^2(Psi) with Psi: H -> K:
/// h |-> sum_{k in K^{Psi_0(s h)}} w(k) conj(psi1(s h, k)) psi2(t h, Psi_1(h) k)
AlgebraElement inner_product_valued(const VectorC& psi1, const VectorC& psi2,
                                    const CorrespondenceSpace& psi_space);

/// The sesquilinear fusion form on L^2(Phi) (x) L^2(Psi), index a*dim2+b:
/// (phi1 (x) psi1, phi2 (x) psi2)_0 = (phi1, pi_rho(<psi1,psi2>_lambda) phi2).
MatrixC fusion_form(const CorrespondenceSpace& c1, const CorrespondenceSpace& c2);

struct RelativeTensorResult {
    TwoSidedSpace space;      // quotient, orthonormal basis, gram = identity
    MatrixC form;             // the fusion form on the full tensor product
    MatrixC quotient_basis;   // columns: tensor-product coords of the ON basis
    double min_form_eigenvalue;
};

/// Connes fusion of two matched correspondences; throws on a PSD failure
/// beyond tolerance (an implementation bug by construction).
RelativeTensorResult relative_tensor(const CorrespondenceSpace& c1,
                                     const CorrespondenceSpace& c2,
                                     double tol = kDefaultTol);

struct FusionCertificate {
    bool isometry = false, surjective = false, intertwining = false;
    double isometry_residual = 0.0;
    double intertwining_residual = 0.0;
    int rank = 0, target_dim = 0, quotient_dim = 0;
    MatrixC unitary; // target (orthonormal frame) x quotient basis
    bool passed() const { return isometry && surjective && intertwining; }
    std::string summary() const;
};

/// Builds the fusion intertwiner
///   U(phi (x) psi)(u,k) = sum_{h in H^{Phi_0(u)}} w(h) phi(u,h) psi(s h, Psi_1(h^{-1}) k)
/// from L^2(Phi) (x) L^2(Psi) onto L^2(Psi . Phi) and certifies isometry,
/// surjectivity, and two-sided intertwining.
FusionCertificate fusion_intertwiner(const GroupoidFunctor& phi,
                                     const GroupoidFunctor& psi,
                                     const MeasuredGroupoid& mg_g,
                                     const MeasuredGroupoid& mg_h,
                                     const MeasuredGroupoid& mg_k,
                                     double tol = kDefaultTol);

/// Intertwiner-existence test for unitary equivalence of two spaces over
/// the same pair of algebras (same generator index ranges). Returns a
/// unitary witness in the orthonormal frames, or nullopt.
std::optional<MatrixC> unitarily_equivalent(const TwoSidedSpace& a,
                                            const TwoSidedSpace& b,
                                            double tol = kDefaultTol,
                                            unsigned seed = 23);

} // namespace gwb

#endif
