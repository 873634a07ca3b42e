#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "error.hpp"

namespace qrl {

using cplx = std::complex<double>;

constexpr double tol_herm = 1e-10;
constexpr double tol_trace = 1e-9;
constexpr double tol_psd = 1e-9;

// Dense or sparse-by-row complex matrix. Sparse rows hold (col, value) pairs
// sorted by column. Kronecker products follow the convention in which the
// FIRST factor's index varies fastest:
//
//   [a1,b1]^T (x) [a2,b2]^T = [a1*a2, b1*a2, a1*b2, b1*b2]^T
//
// so qubit i of an n-qubit register occupies bit i-1 of the basis index and
// the last qubit is the most significant bit. partial_trace_last sums that
// top bit out.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    static ComplexMatrix zero(int rows, int cols);
    static ComplexMatrix sparse_zero(int rows, int cols);
    static ComplexMatrix identity(int n);
    static ComplexMatrix sparse_identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_sparse() const { return sparse_; }

    cplx at(int r, int c) const;
    void set(int r, int c, cplx v);
    void add_at(int r, int c, cplx v);

    cplx trace() const;
    std::size_t nonzero_count() const;
    double max_abs() const;
    double max_abs_diff(const ComplexMatrix& other) const;
    double hermitian_deviation() const;  // max |A[i][j] - conj(A[j][i])|
    bool is_hermitian(double tol = tol_herm) const { return hermitian_deviation() <= tol; }

    ComplexMatrix dense_copy() const;
    ComplexMatrix sparse_copy() const;
    ComplexMatrix adjoint() const;
    ComplexMatrix scaled(cplx factor) const;
    ComplexMatrix plus(const ComplexMatrix& other) const;
    ComplexMatrix matmul(const ComplexMatrix& other) const;  // dense result

    // Re Tr(A * B); bound on the imaginary part is the caller's business.
    cplx trace_product(const ComplexMatrix& other) const;

    // <v|A|v> for a dense vector of matching dimension.
    cplx quadratic_form(const std::vector<cplx>& v) const;

    // y = A x
    std::vector<cplx> apply(const std::vector<cplx>& x) const;

    // Visits nonzero (or all dense) entries as f(row, col, value).
    template <typename F>
    void for_each_entry(F&& f) const {
        if (sparse_) {
            for (int r = 0; r < rows_; ++r)
                for (const auto& [c, v] : sparse_rows_[r]) f(r, c, v);
        } else {
            for (int r = 0; r < rows_; ++r)
                for (int c = 0; c < cols_; ++c) {
                    const cplx& v = dense_[static_cast<std::size_t>(r) * cols_ + c];
                    if (v != cplx(0.0, 0.0)) f(r, c, v);
                }
        }
    }

    const std::vector<cplx>& dense_data() const { return dense_; }
    std::vector<cplx>& dense_data() { return dense_; }

private:
    int rows_ = 0;
    int cols_ = 0;
    bool sparse_ = false;
    std::vector<cplx> dense_;
    std::vector<std::vector<std::pair<int, cplx>>> sparse_rows_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> kron_vec(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Traces out the last qubit (most significant index bit).
ComplexMatrix partial_trace_last(const ComplexMatrix& m);

// Hermitian PSD trace-1 matrix on `qubits` qubits.
struct DensityMatrix {
    int qubits = 0;
    ComplexMatrix mat;

    int dim() const { return 1 << qubits; }
    // Hermiticity and trace always; diagonal nonnegativity as a cheap PSD probe.
    void validate_basic() const;
};

DensityMatrix density_from(int qubits, ComplexMatrix m);
DensityMatrix partial_trace_last(const DensityMatrix& rho);

// P = sum |v><v| over pairwise-orthonormal vectors; domain error names the
// first offending pair.
ComplexMatrix projector_from(const std::vector<std::vector<cplx>>& vectors);

// Re Tr(rho * p); throws if the imaginary part exceeds 1e-9.
double trace_inner(const DensityMatrix& rho, const ComplexMatrix& p);

int qubits_for_dim(int dim);

}  // namespace qrl
