#ifndef SARTENSOR_NUMERICS_HPP
#define SARTENSOR_NUMERICS_HPP

#include "sartensor/parallel.hpp"
#include "sartensor/types.hpp"

namespace sartensor {

/// Thin (economy) SVD, M = U diag(s) Vh with r = min(rows, cols).
struct SvdResult {
    ComplexMatrix u;                     // rows x r
    std::vector<double> singular_values; // length r, non-increasing
    ComplexMatrix vh;                    // r x cols
};

/// LAPACK-backed complex SVD. Throws std::runtime_error with the matrix shape
/// in the message if the underlying iteration fails to converge.
SvdResult svd(const ComplexMatrix& m);

struct MatrixNorms {
    double nuclear = 0.0;
    double spectral = 0.0;
    double frobenius = 0.0;
    double l1 = 0.0;
};

MatrixNorms matrix_norms(const ComplexMatrix& m);

double frobenius_norm(const ComplexMatrix& m);
double l1_norm(const ComplexMatrix& m);
double nuclear_norm(const ComplexMatrix& m);
double spectral_norm(const ComplexMatrix& m);

double frobenius_norm(const ComplexTensor3& t);
double l1_norm(const ComplexTensor3& t);

/// Unitary DFT along the panel index, out_k = n3^{-1/2} sum_l w^{lk} in_l with
/// w = exp(i 2 pi / n3); the inverse uses the conjugate kernel and the same
/// scale, so forward followed by inverse is the identity.
ComplexTensor3 dft_axis3(const ComplexTensor3& t, bool inverse = false,
                         Exec exec = Exec::Parallel);

/// Complex soft-thresholding: magnitude shrunk by lambda and floored at zero,
/// phase preserved.
inline cplx soft_threshold(cplx a, double lambda) {
    double mag = std::abs(a);
    if (mag <= lambda) return cplx(0.0, 0.0);
    return a * ((mag - lambda) / mag);
}

} // namespace sartensor

#endif
