#include "complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrl {

namespace {

void check_dims(int rows, int cols) {
    if (rows <= 0 || cols <= 0) throw_domain("matrix: dimensions must be positive");
    if (rows > caps::max_dim() || cols > caps::max_dim())
        throw_capacity("matrix: dimension " + std::to_string(std::max(rows, cols)) +
                       " exceeds cap " + std::to_string(caps::max_dim()));
}

}  // namespace

ComplexMatrix ComplexMatrix::zero(int rows, int cols) {
    check_dims(rows, cols);
    if (rows > caps::max_dense_dim || cols > caps::max_dense_dim)
        throw_capacity("matrix: dense storage capped at dimension " +
                       std::to_string(caps::max_dense_dim));
    ComplexMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.sparse_ = false;
    m.dense_.assign(static_cast<std::size_t>(rows) * cols, cplx(0.0, 0.0));
    return m;
}

ComplexMatrix ComplexMatrix::sparse_zero(int rows, int cols) {
    check_dims(rows, cols);
    ComplexMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.sparse_ = true;
    m.sparse_rows_.resize(rows);
    return m;
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m = zero(n, n);
    for (int i = 0; i < n; ++i) m.dense_[static_cast<std::size_t>(i) * n + i] = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::sparse_identity(int n) {
    ComplexMatrix m = sparse_zero(n, n);
    for (int i = 0; i < n; ++i) m.sparse_rows_[i].emplace_back(i, cplx(1.0, 0.0));
    return m;
}

cplx ComplexMatrix::at(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw_domain("matrix: index out of range");
    if (!sparse_) return dense_[static_cast<std::size_t>(r) * cols_ + c];
    const auto& row = sparse_rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const std::pair<int, cplx>& e, int col) { return e.first < col; });
    if (it != row.end() && it->first == c) return it->second;
    return cplx(0.0, 0.0);
}

void ComplexMatrix::set(int r, int c, cplx v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw_domain("matrix: index out of range");
    if (!sparse_) {
        dense_[static_cast<std::size_t>(r) * cols_ + c] = v;
        return;
    }
    auto& row = sparse_rows_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const std::pair<int, cplx>& e, int col) { return e.first < col; });
    if (it != row.end() && it->first == c)
        it->second = v;
    else
        row.insert(it, {c, v});
}

void ComplexMatrix::add_at(int r, int c, cplx v) { set(r, c, at(r, c) + v); }

cplx ComplexMatrix::trace() const {
    if (rows_ != cols_) throw_domain("trace: matrix not square");
    cplx t = 0.0;
    for (int i = 0; i < rows_; ++i) t += at(i, i);
    return t;
}

std::size_t ComplexMatrix::nonzero_count() const {
    std::size_t n = 0;
    for_each_entry([&](int, int, const cplx&) { ++n; });
    return n;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for_each_entry([&](int, int, const cplx& v) { m = std::max(m, std::abs(v)); });
    return m;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw_domain("max_abs_diff: shape mismatch");
    if (!sparse_ && !other.sparse_) {
        double m = 0.0;
        for (std::size_t i = 0; i < dense_.size(); ++i)
            m = std::max(m, std::abs(dense_[i] - other.dense_[i]));
        return m;
    }
    // Sparse path: walk the union of supports.
    double m = 0.0;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c < cols_; ++c) {
            // only touch columns present in either row when both sparse
            if (sparse_ && other.sparse_) break;
            m = std::max(m, std::abs(at(r, c) - other.at(r, c)));
        }
    }
    if (sparse_ && other.sparse_) {
        for (int r = 0; r < rows_; ++r) {
            for (const auto& [c, v] : sparse_rows_[r]) m = std::max(m, std::abs(v - other.at(r, c)));
            for (const auto& [c, v] : other.sparse_rows_[r]) m = std::max(m, std::abs(at(r, c) - v));
        }
    }
    return m;
}

double ComplexMatrix::hermitian_deviation() const {
    if (rows_ != cols_) throw_domain("hermitian_deviation: matrix not square");
    double m = 0.0;
    for_each_entry([&](int r, int c, const cplx& v) {
        m = std::max(m, std::abs(v - std::conj(at(c, r))));
    });
    return m;
}

ComplexMatrix ComplexMatrix::dense_copy() const {
    if (!sparse_) return *this;
    ComplexMatrix m = zero(rows_, cols_);
    for_each_entry([&](int r, int c, const cplx& v) {
        m.dense_[static_cast<std::size_t>(r) * cols_ + c] = v;
    });
    return m;
}

ComplexMatrix ComplexMatrix::sparse_copy() const {
    if (sparse_) return *this;
    ComplexMatrix m = sparse_zero(rows_, cols_);
    for_each_entry([&](int r, int c, const cplx& v) { m.sparse_rows_[r].emplace_back(c, v); });
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m = sparse_ ? sparse_zero(cols_, rows_) : zero(cols_, rows_);
    for_each_entry([&](int r, int c, const cplx& v) { m.set(c, r, std::conj(v)); });
    return m;
}

ComplexMatrix ComplexMatrix::scaled(cplx factor) const {
    ComplexMatrix m = *this;
    if (m.sparse_) {
        for (auto& row : m.sparse_rows_)
            for (auto& e : row) e.second *= factor;
    } else {
        for (auto& v : m.dense_) v *= factor;
    }
    return m;
}

ComplexMatrix ComplexMatrix::plus(const ComplexMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw_domain("plus: shape mismatch");
    if (!sparse_ && !other.sparse_) {
        ComplexMatrix m = *this;
        for (std::size_t i = 0; i < dense_.size(); ++i) m.dense_[i] += other.dense_[i];
        return m;
    }
    ComplexMatrix m = sparse_copy();
    other.for_each_entry([&](int r, int c, const cplx& v) { m.add_at(r, c, v); });
    return m;
}

ComplexMatrix ComplexMatrix::matmul(const ComplexMatrix& other) const {
    if (cols_ != other.rows_) throw_domain("matmul: shape mismatch");
    ComplexMatrix out = zero(rows_, other.cols_);
    if (other.sparse_) {
        for (int r = 0; r < rows_; ++r)
            for (int k = 0; k < cols_; ++k) {
                cplx a = at(r, k);
                if (a == cplx(0.0, 0.0)) continue;
                for (const auto& [c, v] : other.sparse_rows_[k])
                    out.dense_[static_cast<std::size_t>(r) * out.cols_ + c] += a * v;
            }
        return out;
    }
    for_each_entry([&](int r, int k, const cplx& a) {
        const cplx* brow = &other.dense_[static_cast<std::size_t>(k) * other.cols_];
        cplx* orow = &out.dense_[static_cast<std::size_t>(r) * out.cols_];
        for (int c = 0; c < other.cols_; ++c) orow[c] += a * brow[c];
    });
    return out;
}

cplx ComplexMatrix::trace_product(const ComplexMatrix& other) const {
    if (cols_ != other.rows_ || rows_ != other.cols_) throw_domain("trace_product: shape mismatch");
    cplx t = 0.0;
    for_each_entry([&](int r, int c, const cplx& v) { t += v * other.at(c, r); });
    return t;
}

cplx ComplexMatrix::quadratic_form(const std::vector<cplx>& v) const {
    if (static_cast<int>(v.size()) != cols_ || rows_ != cols_)
        throw_domain("quadratic_form: dimension mismatch");
    cplx t = 0.0;
    for_each_entry([&](int r, int c, const cplx& a) { t += std::conj(v[r]) * a * v[c]; });
    return t;
}

std::vector<cplx> ComplexMatrix::apply(const std::vector<cplx>& x) const {
    if (static_cast<int>(x.size()) != cols_) throw_domain("apply: dimension mismatch");
    std::vector<cplx> y(rows_, cplx(0.0, 0.0));
    for_each_entry([&](int r, int c, const cplx& a) { y[r] += a * x[c]; });
    return y;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    long long rr = static_cast<long long>(a.rows()) * b.rows();
    long long cc = static_cast<long long>(a.cols()) * b.cols();
    if (rr > caps::max_dim() || cc > caps::max_dim())
        throw_capacity("kron: result dimension " + std::to_string(std::max(rr, cc)) +
                       " exceeds cap " + std::to_string(caps::max_dim()));
    bool sparse = a.is_sparse() || b.is_sparse() || rr > caps::max_dense_dim ||
                  cc > caps::max_dense_dim;
    ComplexMatrix out = sparse ? ComplexMatrix::sparse_zero(static_cast<int>(rr), static_cast<int>(cc))
                               : ComplexMatrix::zero(static_cast<int>(rr), static_cast<int>(cc));
    // First factor fastest: out[rb*a.rows + ra][cb*a.cols + ca] = a(ra,ca) b(rb,cb).
    b.for_each_entry([&](int rb, int cb, const cplx& bv) {
        a.for_each_entry([&](int ra, int ca, const cplx& av) {
            out.set(rb * a.rows() + ra, cb * a.cols() + ca, av * bv);
        });
    });
    return out;
}

std::vector<cplx> kron_vec(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<cplx> out(a.size() * b.size());
    for (std::size_t ib = 0; ib < b.size(); ++ib)
        for (std::size_t ia = 0; ia < a.size(); ++ia) out[ib * a.size() + ia] = a[ia] * b[ib];
    return out;
}

ComplexMatrix partial_trace_last(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) throw_domain("partial_trace_last: matrix not square");
    if (m.rows() < 2 || (m.rows() & 1)) throw_domain("partial_trace_last: dimension not 2^n, n>=1");
    int h = m.rows() / 2;
    ComplexMatrix out = m.is_sparse() ? ComplexMatrix::sparse_zero(h, h) : ComplexMatrix::zero(h, h);
    m.for_each_entry([&](int r, int c, const cplx& v) {
        if ((r < h) == (c < h)) out.add_at(r % h, c % h, v);
    });
    return out;
}

void DensityMatrix::validate_basic() const {
    if (mat.rows() != dim() || mat.cols() != dim())
        throw_invariant("density: matrix shape does not match qubit count");
    if (mat.hermitian_deviation() > tol_herm)
        throw_invariant("density: hermitian deviation exceeds 1e-10");
    cplx t = mat.trace();
    if (std::abs(t - cplx(1.0, 0.0)) > tol_trace)
        throw_invariant("density: trace deviates from 1 beyond 1e-9");
    for (int i = 0; i < dim(); ++i) {
        if (mat.at(i, i).real() < -tol_psd)
            throw_invariant("density: negative diagonal entry beyond psd tolerance");
    }
}

DensityMatrix density_from(int qubits, ComplexMatrix m) {
    DensityMatrix rho{qubits, std::move(m)};
    rho.validate_basic();
    return rho;
}

DensityMatrix partial_trace_last(const DensityMatrix& rho) {
    if (rho.qubits < 1) throw_domain("partial_trace_last: state has no qubits");
    if (rho.qubits == 1) throw_domain("partial_trace_last: cannot trace below one qubit");
    return DensityMatrix{rho.qubits - 1, partial_trace_last(rho.mat)};
}

ComplexMatrix projector_from(const std::vector<std::vector<cplx>>& vectors) {
    if (vectors.empty()) throw_domain("projector_from: empty vector list");
    int dim = static_cast<int>(vectors[0].size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (static_cast<int>(vectors[i].size()) != dim)
            throw_domain("projector_from: inconsistent vector dimensions");
        for (std::size_t j = 0; j <= i; ++j) {
            cplx ip = 0.0;
            for (int k = 0; k < dim; ++k) ip += std::conj(vectors[i][k]) * vectors[j][k];
            double target = (i == j) ? 1.0 : 0.0;
            if (std::abs(ip - cplx(target, 0.0)) > 1e-9)
                throw_domain("projector_from: vectors " + std::to_string(j) + " and " +
                             std::to_string(i) + " not orthonormal");
        }
    }
    ComplexMatrix p = ComplexMatrix::zero(dim, dim);
    auto& d = p.dense_data();
    for (const auto& v : vectors)
        for (int r = 0; r < dim; ++r) {
            if (v[r] == cplx(0.0, 0.0)) continue;
            for (int c = 0; c < dim; ++c)
                d[static_cast<std::size_t>(r) * dim + c] += v[r] * std::conj(v[c]);
        }
    return p;
}

double trace_inner(const DensityMatrix& rho, const ComplexMatrix& p) {
    if (p.rows() != rho.dim() || p.cols() != rho.dim())
        throw_domain("trace_inner: dimension mismatch");
    cplx t = rho.mat.trace_product(p);
    if (std::abs(t.imag()) > 1e-9)
        throw_invariant("trace_inner: imaginary part exceeds 1e-9");
    return t.real();
}

int qubits_for_dim(int dim) {
    int n = 0;
    while ((1 << n) < dim) ++n;
    if ((1 << n) != dim) throw_domain("dimension is not a power of two");
    return n;
}

}  // namespace qrl
