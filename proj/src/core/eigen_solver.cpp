#include "eigen_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrl {

namespace {

Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(a.rows(), a.cols());
    a.for_each_entry([&](int r, int c, const cplx& v) { m(r, c) = v; });
    return m;
}

bool is_real(const ComplexMatrix& a) {
    bool real = true;
    a.for_each_entry([&](int, int, const cplx& v) {
        if (v.imag() != 0.0) real = false;
    });
    return real;
}

double round9(double x) { return std::round(x * 1e9) / 1e9; }

// Phase-fix in place: first entry with |rounded| > 0 becomes real positive.
void canonicalize_phase(std::vector<cplx>& v) {
    for (const cplx& e : v) {
        if (round9(std::abs(e)) > 0.0) {
            cplx phase = e / std::abs(e);
            cplx fix = std::conj(phase);
            for (cplx& x : v) x *= fix;
            return;
        }
    }
}

bool lex_less(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        double ar = round9(a[i].real()), br = round9(b[i].real());
        if (ar != br) return ar < br;
        double ai = round9(a[i].imag()), bi = round9(b[i].imag());
        if (ai != bi) return ai < bi;
    }
    return false;
}

}  // namespace

std::vector<cplx> SpectralDecomposition::eigenvector(int i) const {
    std::vector<cplx> v(eigenvectors.rows());
    for (int r = 0; r < eigenvectors.rows(); ++r) v[static_cast<std::size_t>(r)] = eigenvectors.at(r, i);
    return v;
}

double SpectralDecomposition::reconstruction_error(const ComplexMatrix& a) const {
    int d = eigenvectors.rows();
    ComplexMatrix rec = ComplexMatrix::zero(d, d);
    auto& data = rec.dense_data();
    for (int k = 0; k < d; ++k) {
        auto v = eigenvector(k);
        double lam = eigenvalues[static_cast<std::size_t>(k)];
        for (int r = 0; r < d; ++r) {
            if (v[static_cast<std::size_t>(r)] == cplx(0.0, 0.0) && lam == 0.0) continue;
            for (int c = 0; c < d; ++c)
                data[static_cast<std::size_t>(r) * d + c] +=
                    lam * v[static_cast<std::size_t>(r)] * std::conj(v[static_cast<std::size_t>(c)]);
        }
    }
    return rec.max_abs_diff(a.dense_copy());
}

double SpectralDecomposition::orthonormality_error() const {
    int d = eigenvectors.rows();
    double worst = 0.0;
    for (int i = 0; i < d; ++i) {
        auto vi = eigenvector(i);
        for (int j = 0; j <= i; ++j) {
            auto vj = eigenvector(j);
            cplx ip = 0.0;
            for (int r = 0; r < d; ++r) ip += std::conj(vi[static_cast<std::size_t>(r)]) * vj[static_cast<std::size_t>(r)];
            double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(ip - cplx(target, 0.0)));
        }
    }
    return worst;
}

SpectralDecomposition hermitian_eig(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw_domain("hermitian_eig: matrix not square");
    if (!a.is_hermitian()) throw_domain("hermitian_eig: input not hermitian within 1e-10");
    int d = a.rows();
    if (d > caps::max_dense_dim)
        throw_capacity("hermitian_eig: dimension exceeds dense eigensolver cap");

    std::vector<double> vals(static_cast<std::size_t>(d));
    std::vector<std::vector<cplx>> vecs(static_cast<std::size_t>(d));
    if (is_real(a)) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
        a.for_each_entry([&](int r, int c, const cplx& v) { m(r, c) = v.real(); });
        m = 0.5 * (m + m.transpose().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
        if (es.info() != Eigen::Success) throw_invariant("hermitian_eig: solver failed");
        for (int i = 0; i < d; ++i) {
            vals[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
            auto& v = vecs[static_cast<std::size_t>(i)];
            v.resize(static_cast<std::size_t>(d));
            for (int r = 0; r < d; ++r) v[static_cast<std::size_t>(r)] = es.eigenvectors()(r, i);
        }
    } else {
        Eigen::MatrixXcd m = to_eigen(a);
        m = 0.5 * (m + m.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
        if (es.info() != Eigen::Success) throw_invariant("hermitian_eig: solver failed");
        for (int i = 0; i < d; ++i) {
            vals[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
            auto& v = vecs[static_cast<std::size_t>(i)];
            v.resize(static_cast<std::size_t>(d));
            for (int r = 0; r < d; ++r) v[static_cast<std::size_t>(r)] = es.eigenvectors()(r, i);
        }
    }

    for (auto& v : vecs) canonicalize_phase(v);
    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        double vi = vals[static_cast<std::size_t>(i)], vj = vals[static_cast<std::size_t>(j)];
        if (vi != vj) return vi > vj;
        return lex_less(vecs[static_cast<std::size_t>(i)], vecs[static_cast<std::size_t>(j)]);
    });

    SpectralDecomposition out;
    out.eigenvalues.resize(static_cast<std::size_t>(d));
    out.eigenvectors = ComplexMatrix::zero(d, d);
    for (int k = 0; k < d; ++k) {
        out.eigenvalues[static_cast<std::size_t>(k)] = vals[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        const auto& v = vecs[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
        for (int r = 0; r < d; ++r) out.eigenvectors.set(r, k, v[static_cast<std::size_t>(r)]);
    }
    return out;
}

std::vector<double> hermitian_eigvals(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) throw_domain("hermitian_eigvals: matrix not square");
    if (!a.is_hermitian()) throw_domain("hermitian_eigvals: input not hermitian within 1e-10");
    int d = a.rows();
    Eigen::VectorXd ev;
    if (is_real(a)) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
        a.for_each_entry([&](int r, int c, const cplx& v) { m(r, c) = v.real(); });
        m = 0.5 * (m + m.transpose().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw_invariant("hermitian_eigvals: solver failed");
        ev = es.eigenvalues();
    } else {
        Eigen::MatrixXcd m = to_eigen(a);
        m = 0.5 * (m + m.adjoint().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw_invariant("hermitian_eigvals: solver failed");
        ev = es.eigenvalues();
    }
    std::vector<double> vals(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) vals[static_cast<std::size_t>(i)] = ev(i);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    return vals;
}

std::vector<std::vector<cplx>> orthonormalize(const std::vector<std::vector<cplx>>& vectors,
                                              double tol) {
    std::vector<std::vector<cplx>> basis;
    for (auto v : vectors) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                cplx ip = 0.0;
                for (std::size_t k = 0; k < v.size(); ++k) ip += std::conj(b[k]) * v[k];
                for (std::size_t k = 0; k < v.size(); ++k) v[k] -= ip * b[k];
            }
        }
        double norm = 0.0;
        for (const auto& x : v) norm += std::norm(x);
        norm = std::sqrt(norm);
        if (norm <= tol) continue;
        for (auto& x : v) x /= norm;
        basis.push_back(std::move(v));
    }
    return basis;
}

ComplementEigPair top_eigvec_in_complement(const ComplexMatrix& a,
                                           const std::vector<std::vector<cplx>>& basis) {
    if (a.rows() != a.cols()) throw_domain("top_eigvec_in_complement: matrix not square");
    if (!a.is_hermitian()) throw_domain("top_eigvec_in_complement: input not hermitian");
    int d = a.rows();

    // Orthonormal basis of the complement: seed with the given basis, extend
    // by standard coordinates, keep the extension.
    std::vector<std::vector<cplx>> all = basis;
    for (int i = 0; i < d; ++i) {
        std::vector<cplx> e(static_cast<std::size_t>(d), cplx(0.0, 0.0));
        e[static_cast<std::size_t>(i)] = 1.0;
        all.push_back(std::move(e));
    }
    auto onb = orthonormalize(all, 1e-8);
    if (onb.size() <= basis.size()) {
        ComplementEigPair out;
        out.exhausted = true;
        return out;
    }
    std::vector<std::vector<cplx>> comp(onb.begin() + static_cast<std::ptrdiff_t>(basis.size()), onb.end());
    int k = static_cast<int>(comp.size());

    // Compressed matrix C = W^dagger A W over the complement basis.
    Eigen::MatrixXcd c(k, k);
    std::vector<std::vector<cplx>> aw(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) aw[static_cast<std::size_t>(j)] = a.apply(comp[static_cast<std::size_t>(j)]);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
            cplx ip = 0.0;
            for (int r = 0; r < d; ++r)
                ip += std::conj(comp[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)]) *
                      aw[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
            c(i, j) = ip;
        }
    c = 0.5 * (c + c.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
    if (es.info() != Eigen::Success) throw_invariant("top_eigvec_in_complement: solver failed");

    ComplementEigPair out;
    out.value = es.eigenvalues()(k - 1);
    out.vector.assign(static_cast<std::size_t>(d), cplx(0.0, 0.0));
    for (int j = 0; j < k; ++j) {
        cplx w = es.eigenvectors()(j, k - 1);
        for (int r = 0; r < d; ++r)
            out.vector[static_cast<std::size_t>(r)] += w * comp[static_cast<std::size_t>(j)][static_cast<std::size_t>(r)];
    }
    canonicalize_phase(out.vector);
    return out;
}

}  // namespace qrl
