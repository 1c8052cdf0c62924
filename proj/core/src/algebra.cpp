#include "gwb/algebra.hpp"

#include <random>

namespace gwb {

AlgebraElement convolve(const AlgebraElement& f, const AlgebraElement& g,
                        const MeasuredGroupoid& mg) {
    std::vector<Complex> fv(f.coeff.data(), f.coeff.data() + f.coeff.size());
    std::vector<Complex> gv(g.coeff.data(), g.coeff.data() + g.coeff.size());
    auto out = convolve_fn<Complex>(mg, fv, gv);
    AlgebraElement r;
    r.coeff = Eigen::Map<VectorC>(out.data(), out.size());
    return r;
}

AlgebraElement involute(const AlgebraElement& f, const MeasuredGroupoid& mg) {
    const auto& g = *mg.g;
    AlgebraElement r;
    r.coeff.resize(f.coeff.size());
    for (ArrowId x = 0; x < g.num_arrows(); ++x)
        r.coeff(x) = std::conj(f.coeff(g.inv(x)));
    return r;
}

AlgebraElement delta_element(const MeasuredGroupoid& mg, ArrowId x) {
    AlgebraElement r;
    r.coeff = VectorC::Zero(mg.g->num_arrows());
    r.coeff(x) = 1.0;
    return r;
}

AlgebraElement unit_element(const MeasuredGroupoid& mg) {
    const auto& g = *mg.g;
    AlgebraElement r;
    r.coeff = VectorC::Zero(g.num_arrows());
    for (ObjectId u = 0; u < g.num_objects(); ++u) {
        ArrowId e = g.unit(u);
        r.coeff(e) = 1.0 / to_double(mg.haar.weight[e]);
    }
    return r;
}

RegularRepresentation::RegularRepresentation(const MeasuredGroupoid& mg) : mg_(&mg) {
    const auto& g = *mg.g;
    const int n = g.num_arrows();
    nu_.resize(n);
    for (ArrowId x = 0; x < n; ++x) nu_[x] = to_double(mg.nu(x));
    auto md = modular(mg);
    delta_.resize(n);
    for (ArrowId x = 0; x < n; ++x) delta_[x] = to_double(md.delta[x]);
    jmat_ = MatrixC::Zero(n, n);
    for (ArrowId x = 0; x < n; ++x)
        jmat_(x, g.inv(x)) = 1.0 / std::sqrt(delta_[x]);
}

MatrixC RegularRepresentation::piL(const AlgebraElement& f) const {
    const auto& g = *mg_->g;
    const int n = g.num_arrows();
    MatrixC m = MatrixC::Zero(n, n);
    // pi_L(f) psi (x) = sum_{y in G^{s(x)}} w(y) Delta(xy)^{-1/2} f(xy) psi(y^{-1})
    for (ArrowId x = 0; x < n; ++x)
        for (ArrowId y = 0; y < n; ++y) {
            if (g.tgt(y) != g.src(x)) continue;
            ArrowId xy = g.comp_raw(x, y);
            m(x, g.inv(y)) += to_double(mg_->haar.weight[y]) *
                              f.coeff(xy) / std::sqrt(delta_[xy]);
        }
    return m;
}

MatrixC RegularRepresentation::piR(const AlgebraElement& f) const {
    const auto& g = *mg_->g;
    const int n = g.num_arrows();
    MatrixC m = MatrixC::Zero(n, n);
    // pi_R(f) psi (x) = (psi * f)(x) = sum_{y in G^{s(x)}} w(y) psi(xy) f(y^{-1})
    for (ArrowId x = 0; x < n; ++x)
        for (ArrowId y = 0; y < n; ++y) {
            if (g.tgt(y) != g.src(x)) continue;
            m(x, g.comp_raw(x, y)) += to_double(mg_->haar.weight[y]) *
                                      f.coeff(g.inv(y));
        }
    return m;
}

MatrixC RegularRepresentation::piL_delta(ArrowId x) const {
    return piL(delta_element(*mg_, x));
}

MatrixC RegularRepresentation::piR_delta(ArrowId x) const {
    return piR(delta_element(*mg_, x));
}

std::vector<MatrixC> RegularRepresentation::piL_generators() const {
    std::vector<MatrixC> out;
    for (ArrowId x = 0; x < dim(); ++x) out.push_back(piL_delta(x));
    return out;
}

std::vector<MatrixC> RegularRepresentation::piR_generators() const {
    std::vector<MatrixC> out;
    for (ArrowId x = 0; x < dim(); ++x) out.push_back(piR_delta(x));
    return out;
}

MatrixC RegularRepresentation::conjugate_by_J(const MatrixC& a) const {
    // J (A (J psi)) with J psi = jmat * conj(psi); jmat is real.
    return jmat_ * a.conjugate() * jmat_;
}

MatrixC RegularRepresentation::adjoint(const MatrixC& a) const {
    const int n = dim();
    MatrixC out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = std::conj(a(j, i)) * nu_[j] / nu_[i];
    return out;
}

MatrixC RegularRepresentation::to_orthonormal(const MatrixC& a) const {
    const int n = dim();
    MatrixC out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out(i, j) = a(i, j) * std::sqrt(nu_[i] / nu_[j]);
    return out;
}

Complex RegularRepresentation::inner(const VectorC& a, const VectorC& b) const {
    Complex s = 0.0;
    for (int x = 0; x < dim(); ++x) s += nu_[x] * std::conj(a(x)) * b(x);
    return s;
}

namespace {

/// Basis of the center of span(basis): coefficient vectors c with
/// sum_j c_j [A_j, A_i] = 0 for all i.
std::vector<MatrixC> center_of(const std::vector<MatrixC>& basis, double tol) {
    const int k = static_cast<int>(basis.size());
    const int n = static_cast<int>(basis[0].rows());
    MatrixC sys(static_cast<Eigen::Index>(k) * n * n, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            MatrixC comm = basis[j] * basis[i] - basis[i] * basis[j];
            sys.block(static_cast<Eigen::Index>(i) * n * n, j, n * n, 1) = vec(comm);
        }
    MatrixC ns = null_space(sys, tol);
    std::vector<MatrixC> out;
    for (int c = 0; c < ns.cols(); ++c) {
        MatrixC z = MatrixC::Zero(n, n);
        for (int j = 0; j < k; ++j) z += ns(j, c) * basis[j];
        out.push_back(z);
    }
    return out;
}

} // namespace

std::vector<int> wedderburn(const std::vector<MatrixC>& basis, double tol,
                            unsigned seed) {
    if (basis.empty()) return {};
    const int n = static_cast<int>(basis[0].rows());
    const int alg_dim = static_cast<int>(basis.size());
    auto center = center_of(basis, tol);
    const int num_blocks = static_cast<int>(center.size());

    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::string last_error = "degenerate central spectrum";
    for (int attempt = 0; attempt < 8; ++attempt) {
        MatrixC z = MatrixC::Zero(n, n);
        for (const auto& c : center) z += Complex(gauss(rng), gauss(rng)) * c;
        z = 0.5 * (z + z.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<MatrixC> es(z);
        const auto& ev = es.eigenvalues();
        double scale = std::max(1.0, std::abs(ev(0)));
        scale = std::max(scale, std::abs(ev(ev.size() - 1)));
        // Cluster eigenvalues; spectral projections are the candidate
        // minimal central projections.
        std::vector<std::pair<int, int>> clusters; // [begin, end)
        int begin = 0;
        for (int i = 1; i <= ev.size(); ++i) {
            if (i == ev.size() || ev(i) - ev(i - 1) > 1e-6 * scale) {
                clusters.emplace_back(begin, i);
                begin = i;
            }
        }
        if (static_cast<int>(clusters.size()) != num_blocks) continue;

        std::vector<int> sizes;
        int dim_sum = 0;
        bool ok = true;
        for (auto [b, e] : clusters) {
            MatrixC v = es.eigenvectors().middleCols(b, e - b);
            MatrixC p = v * v.adjoint();
            // dim(p A p) = d^2 for a full matrix block of size d.
            MatrixSpan compressed(tol);
            for (const auto& a : basis) compressed.add(p * a * p);
            int d2 = compressed.dim();
            int d = static_cast<int>(std::lround(std::sqrt(double(d2))));
            if (d * d != d2) { ok = false; last_error = "block dimension not a square"; break; }
            sizes.push_back(d);
            dim_sum += d2;
        }
        if (!ok || dim_sum != alg_dim) continue;
        std::sort(sizes.begin(), sizes.end());
        return sizes;
    }
    throw std::runtime_error("wedderburn: " + last_error + " after retries");
}

AlgebraSummary analyze_convolution_algebra(const MeasuredGroupoid& mg, double tol) {
    RegularRepresentation rep(mg);
    std::vector<MatrixC> gens;
    for (ArrowId x = 0; x < rep.dim(); ++x)
        gens.push_back(rep.to_orthonormal(rep.piL_delta(x)));
    auto basis = generate_algebra(gens, rep.dim(), tol);
    AlgebraSummary s;
    s.dimension = static_cast<int>(basis.size());
    s.blocks = wedderburn(basis, tol);
    s.center_dimension = static_cast<int>(s.blocks.size());
    return s;
}

} // namespace gwb
