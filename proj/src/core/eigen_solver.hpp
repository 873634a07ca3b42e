#pragma once

#include <vector>

#include "complex_matrix.hpp"

namespace qrl {

// Eigenvalues descending; eigenvector i stored as column i. Degenerate pairs
// are ordered by first-differing-coordinate lexicographic comparison on the
// entries rounded to 1e-9, after fixing each vector's phase so its first
// significant entry is real positive. Same input, same output, bitwise.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    std::vector<cplx> eigenvector(int i) const;
    double reconstruction_error(const ComplexMatrix& a) const;
    double orthonormality_error() const;
};

SpectralDecomposition hermitian_eig(const ComplexMatrix& a);

// Eigenvalues only, descending. Real-symmetric inputs take a cheaper path.
std::vector<double> hermitian_eigvals(const ComplexMatrix& a);

struct ComplementEigPair {
    double value = 0.0;
    std::vector<cplx> vector;
    bool exhausted = false;  // basis already spans the whole space
};

// Largest eigenpair of the compression of `a` onto the orthocomplement of
// span(basis). Returned vector is orthogonal to every basis vector.
ComplementEigPair top_eigvec_in_complement(const ComplexMatrix& a,
                                           const std::vector<std::vector<cplx>>& basis);

// Gram-Schmidt with re-orthogonalization; drops vectors whose residual falls
// below `tol` and returns an orthonormal spanning set.
std::vector<std::vector<cplx>> orthonormalize(const std::vector<std::vector<cplx>>& vectors,
                                              double tol = 1e-10);

}  // namespace qrl
