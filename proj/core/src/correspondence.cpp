#include "gwb/correspondence.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <sstream>

namespace gwb {

MatrixC TwoSidedSpace::left_of(const AlgebraElement& f) const {
    MatrixC m = MatrixC::Zero(dim, dim);
    for (size_t x = 0; x < left.size(); ++x) m += f.coeff(x) * left[x];
    return m;
}

MatrixC TwoSidedSpace::right_of(const AlgebraElement& g) const {
    MatrixC m = MatrixC::Zero(dim, dim);
    for (size_t x = 0; x < right.size(); ++x) m += g.coeff(x) * right[x];
    return m;
}

CorrespondenceSpace::CorrespondenceSpace(GroupoidFunctor f, MeasuredGroupoid dom,
                                         MeasuredGroupoid cod)
    : functor_(std::move(f)), dom_(std::move(dom)), cod_(std::move(cod)) {
    const auto& G = *dom_.g;
    const auto& H = *cod_.g;
    index_.assign(static_cast<size_t>(G.num_objects()) * H.num_arrows(), -1);
    for (ObjectId u = 0; u < G.num_objects(); ++u)
        for (ArrowId h = 0; h < H.num_arrows(); ++h)
            if (functor_.phi0[u] == H.tgt(h)) {
                index_[static_cast<size_t>(u) * H.num_arrows() + h] =
                    static_cast<int>(basis_.size());
                basis_.emplace_back(u, h);
                weight_.push_back(to_double(dom_.base[u] * cod_.haar.weight[h]));
            }
    auto md = modular(dom_);
    delta_dom_.resize(G.num_arrows());
    for (ArrowId x = 0; x < G.num_arrows(); ++x)
        delta_dom_[x] = to_double(md.delta[x]);
}

int CorrespondenceSpace::index_of(ObjectId u, ArrowId h) const {
    return index_[static_cast<size_t>(u) * cod_.g->num_arrows() + h];
}

MatrixC CorrespondenceSpace::pi_lambda(const AlgebraElement& f) const {
    const auto& G = *dom_.g;
    MatrixC m = MatrixC::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        auto [u, h] = basis_[i];
        for (ArrowId y = 0; y < G.num_arrows(); ++y) {
            if (G.tgt(y) != u) continue;
            ArrowId hy = cod_.g->comp(functor_.phi1[G.inv(y)], h);
            int j = index_of(G.src(y), hy);
            if (j < 0)
                throw std::logic_error("correspondence: fiber compatibility violated");
            m(i, j) += to_double(dom_.haar.weight[y]) * f.coeff(y) /
                       std::sqrt(delta_dom_[y]);
        }
    }
    return m;
}

MatrixC CorrespondenceSpace::pi_rho(const AlgebraElement& g) const {
    const auto& H = *cod_.g;
    MatrixC m = MatrixC::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) {
        auto [u, h] = basis_[i];
        for (ArrowId l = 0; l < H.num_arrows(); ++l) {
            if (H.tgt(l) != H.src(h)) continue;
            int j = index_of(u, H.comp(h, l));
            if (j < 0)
                throw std::logic_error("correspondence: fiber compatibility violated");
            m(i, j) += to_double(cod_.haar.weight[l]) * g.coeff(H.inv(l));
        }
    }
    return m;
}

MatrixC CorrespondenceSpace::pi_lambda_delta(ArrowId x) const {
    return pi_lambda(delta_element(dom_, x));
}

MatrixC CorrespondenceSpace::pi_rho_delta(ArrowId h) const {
    return pi_rho(delta_element(cod_, h));
}

Complex CorrespondenceSpace::inner(const VectorC& a, const VectorC& b) const {
    Complex s = 0.0;
    for (int i = 0; i < dim(); ++i) s += weight_[i] * std::conj(a(i)) * b(i);
    return s;
}

TwoSidedSpace CorrespondenceSpace::as_space() const {
    TwoSidedSpace s;
    s.dim = dim();
    s.gram = MatrixC::Zero(dim(), dim());
    for (int i = 0; i < dim(); ++i) s.gram(i, i) = weight_[i];
    for (ArrowId x = 0; x < dom_.g->num_arrows(); ++x)
        s.left.push_back(pi_lambda_delta(x));
    for (ArrowId h = 0; h < cod_.g->num_arrows(); ++h)
        s.right.push_back(pi_rho_delta(h));
    return s;
}

CorrespondenceSpace build_correspondence(const GroupoidFunctor& f,
                                         const MeasuredGroupoid& dom,
                                         const MeasuredGroupoid& cod) {
    auto rep = measured_functor_check(f, dom, cod);
    if (!rep.validation.ok())
        throw std::invalid_argument("not a measured functor: " +
                                    rep.validation.to_string());
    return CorrespondenceSpace(f, dom, cod);
}

CorrespondenceSpace standard_correspondence(const MeasuredGroupoid& mg) {
    return CorrespondenceSpace(identity_functor(mg.g), mg, mg);
}

AlgebraElement inner_product_valued(const VectorC& psi1, const VectorC& psi2,
                                    const CorrespondenceSpace& psi_space) {
    const auto& H = *psi_space.dom().g;
    const auto& K = *psi_space.cod().g;
    const auto& psiF = psi_space.functor();
    AlgebraElement out;
    out.coeff = VectorC::Zero(H.num_arrows());
    for (ArrowId h = 0; h < H.num_arrows(); ++h) {
        Complex s = 0.0;
        for (ArrowId k = 0; k < K.num_arrows(); ++k) {
            if (K.tgt(k) != psiF.phi0[H.src(h)]) continue;
            int i1 = psi_space.index_of(H.src(h), k);
            int i2 = psi_space.index_of(H.tgt(h), K.comp(psiF.phi1[h], k));
            s += to_double(psi_space.cod().haar.weight[k]) *
                 std::conj(psi1(i1)) * psi2(i2);
        }
        out.coeff(h) = s;
    }
    return out;
}

MatrixC fusion_form(const CorrespondenceSpace& c1, const CorrespondenceSpace& c2) {
    const int d1 = c1.dim(), d2 = c2.dim();
    const auto& H = *c1.cod().g;
    const auto& K = *c2.cod().g;
    const auto& psiF = c2.functor();
    MatrixC f = MatrixC::Zero(static_cast<Eigen::Index>(d1) * d2,
                              static_cast<Eigen::Index>(d1) * d2);
    // F[(a1,b1),(a2,b2)] = w1(a1) * pi_rho(<e_b1, e_b2>_lambda)(a1, a2),
    // accumulated per arrow h of H: <e_b1, e_b2>_lambda(h) is supported on
    // at most one b2 for each b1.
    for (ArrowId h = 0; h < H.num_arrows(); ++h) {
        MatrixC rho = c1.pi_rho_delta(h);
        for (int b1 = 0; b1 < d2; ++b1) {
            auto [v1, k1] = c2.basis()[b1];
            if (H.src(h) != v1) continue;
            int b2 = c2.index_of(H.tgt(h), K.comp(psiF.phi1[h], k1));
            if (b2 < 0) continue;
            double wk = to_double(c2.cod().haar.weight[k1]);
            for (int a1 = 0; a1 < d1; ++a1)
                for (int a2 = 0; a2 < d1; ++a2) {
                    Complex v = rho(a1, a2);
                    if (v == Complex(0.0)) continue;
                    f(static_cast<Eigen::Index>(a1) * d2 + b1,
                      static_cast<Eigen::Index>(a2) * d2 + b2) +=
                        c1.weight(a1) * v * wk;
                }
        }
    }
    return f;
}

RelativeTensorResult relative_tensor(const CorrespondenceSpace& c1,
                                     const CorrespondenceSpace& c2, double tol) {
    RelativeTensorResult res;
    res.form = fusion_form(c1, c2);
    MatrixC herm = 0.5 * (res.form + res.form.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixC> es(herm);
    const auto& ev = es.eigenvalues();
    const double top = ev.size() ? std::max(0.0, ev(ev.size() - 1)) : 0.0;
    res.min_form_eigenvalue = ev.size() ? ev(0) : 0.0;
    if (res.min_form_eigenvalue < -tol * std::max(1.0, top))
        throw std::runtime_error("fusion form not positive semidefinite");

    const double cut = tol * std::max(1.0, top);
    std::vector<int> keep;
    for (int i = 0; i < ev.size(); ++i)
        if (ev(i) > cut) keep.push_back(i);
    const int r = static_cast<int>(keep.size());
    const int d1 = c1.dim(), d2 = c2.dim();
    res.quotient_basis.resize(static_cast<Eigen::Index>(d1) * d2, r);
    for (int j = 0; j < r; ++j)
        res.quotient_basis.col(j) =
            es.eigenvectors().col(keep[j]) / std::sqrt(ev(keep[j]));

    res.space.dim = r;
    res.space.gram = MatrixC::Identity(r, r);
    MatrixC i1 = MatrixC::Identity(d1, d1);
    MatrixC i2 = MatrixC::Identity(d2, d2);
    const MatrixC& q = res.quotient_basis;
    for (ArrowId x = 0; x < c1.dom().g->num_arrows(); ++x) {
        MatrixC t = Eigen::kroneckerProduct(c1.pi_lambda_delta(x), i2).eval();
        res.space.left.push_back(q.adjoint() * res.form * t * q);
    }
    for (ArrowId k = 0; k < c2.cod().g->num_arrows(); ++k) {
        MatrixC t = Eigen::kroneckerProduct(i1, c2.pi_rho_delta(k)).eval();
        res.space.right.push_back(q.adjoint() * res.form * t * q);
    }
    return res;
}

std::string FusionCertificate::summary() const {
    std::ostringstream os;
    os << (passed() ? "PASS" : "FAIL")
       << " isometry=" << isometry_residual
       << " intertwining=" << intertwining_residual
       << " rank=" << rank << "/" << target_dim
       << " quotient_dim=" << quotient_dim;
    return os.str();
}

FusionCertificate fusion_intertwiner(const GroupoidFunctor& phi,
                                     const GroupoidFunctor& psi,
                                     const MeasuredGroupoid& mg_g,
                                     const MeasuredGroupoid& mg_h,
                                     const MeasuredGroupoid& mg_k, double tol) {
    CorrespondenceSpace c1 = build_correspondence(phi, mg_g, mg_h);
    CorrespondenceSpace c2 = build_correspondence(psi, mg_h, mg_k);
    GroupoidFunctor comp = compose_functors(psi, phi);
    CorrespondenceSpace ct = build_correspondence(comp, mg_g, mg_k);

    const int d1 = c1.dim(), d2 = c2.dim(), dt = ct.dim();
    const auto& H = *mg_h.g;
    const auto& K = *mg_k.g;

    // U(e_a (x) e_b) for a = (u_a, h_a), b = (v_b, k_b): supported on the
    // single target basis vector (u_a, Psi_1(h_a) k_b) when s(h_a) = v_b,
    // with coefficient w_H(h_a).
    MatrixC u_tilde = MatrixC::Zero(dt, static_cast<Eigen::Index>(d1) * d2);
    for (int a = 0; a < d1; ++a) {
        auto [ua, ha] = c1.basis()[a];
        for (int b = 0; b < d2; ++b) {
            auto [vb, kb] = c2.basis()[b];
            if (H.src(ha) != vb) continue;
            ArrowId k = K.comp(psi.phi1[ha], kb);
            int t = ct.index_of(ua, k);
            if (t < 0) throw std::logic_error("fusion: target index missing");
            u_tilde(t, static_cast<Eigen::Index>(a) * d2 + b) +=
                to_double(mg_h.haar.weight[ha]);
        }
    }

    RelativeTensorResult rt = relative_tensor(c1, c2, tol);

    FusionCertificate cert;
    cert.target_dim = dt;
    cert.quotient_dim = rt.space.dim;

    MatrixC wt = MatrixC::Zero(dt, dt);
    for (int i = 0; i < dt; ++i) wt(i, i) = ct.weight(i);

    MatrixC gram_pulled = u_tilde.adjoint() * wt * u_tilde;
    double scale = std::max(1.0, rt.form.cwiseAbs().maxCoeff());
    cert.isometry_residual = (gram_pulled - rt.form).cwiseAbs().maxCoeff() / scale;
    cert.isometry = cert.isometry_residual < tol;

    cert.rank = rank_of(u_tilde, tol);
    cert.surjective = (cert.rank == dt) && (rt.space.dim == dt);

    double worst = 0.0;
    MatrixC i1 = MatrixC::Identity(d1, d1);
    MatrixC i2 = MatrixC::Identity(d2, d2);
    for (ArrowId x = 0; x < mg_g.g->num_arrows(); ++x) {
        MatrixC lhs = u_tilde * Eigen::kroneckerProduct(c1.pi_lambda_delta(x), i2).eval();
        MatrixC rhs = ct.pi_lambda_delta(x) * u_tilde;
        double sc = std::max({1.0, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / sc);
    }
    for (ArrowId k = 0; k < mg_k.g->num_arrows(); ++k) {
        MatrixC lhs = u_tilde * Eigen::kroneckerProduct(i1, c2.pi_rho_delta(k)).eval();
        MatrixC rhs = ct.pi_rho_delta(k) * u_tilde;
        double sc = std::max({1.0, lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff()});
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff() / sc);
    }
    cert.intertwining_residual = worst;
    cert.intertwining = worst < tol;

    // The descended unitary, expressed from the quotient ON basis into the
    // orthonormal frame of L^2(Psi . Phi).
    MatrixC wt_half = MatrixC::Zero(dt, dt);
    for (int i = 0; i < dt; ++i) wt_half(i, i) = std::sqrt(ct.weight(i));
    cert.unitary = wt_half * u_tilde * rt.quotient_basis;
    return cert;
}

std::optional<MatrixC> unitarily_equivalent(const TwoSidedSpace& a,
                                            const TwoSidedSpace& b, double tol,
                                            unsigned seed) {
    if (a.dim != b.dim || a.left.size() != b.left.size() ||
        a.right.size() != b.right.size())
        return std::nullopt;
    auto on_frame = [](const TwoSidedSpace& s) {
        Eigen::SelfAdjointEigenSolver<MatrixC> es(0.5 * (s.gram + s.gram.adjoint()));
        MatrixC half = es.operatorSqrt();
        MatrixC half_inv = es.operatorInverseSqrt();
        std::vector<MatrixC> ops;
        for (const auto& m : s.left) ops.push_back(half * m * half_inv);
        for (const auto& m : s.right) ops.push_back(half * m * half_inv);
        return ops;
    };
    auto ops_a = on_frame(a);
    auto ops_b = on_frame(b);
    auto sols = intertwiner_space(ops_a, ops_b, a.dim, b.dim, tol);
    MatrixC x = find_invertible(sols, seed, tol);
    if (x.size() == 0) return std::nullopt;
    // Polar part; generator families are *-closed, so it intertwines too.
    Eigen::JacobiSVD<MatrixC> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
    MatrixC u = svd.matrixU() * svd.matrixV().adjoint();
    for (size_t i = 0; i < ops_a.size(); ++i) {
        double sc = std::max({1.0, ops_a[i].cwiseAbs().maxCoeff(),
                              ops_b[i].cwiseAbs().maxCoeff()});
        if (((u * ops_a[i] - ops_b[i] * u).cwiseAbs().maxCoeff() / sc) > 1e3 * tol)
            return std::nullopt;
    }
    return u;
}

} // namespace gwb
