#ifndef SARTENSOR_TEST_HELPERS_HPP
#define SARTENSOR_TEST_HELPERS_HPP

#include "sartensor/numerics.hpp"

#include <random>

namespace sartensor::testing {

inline ComplexMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (auto& v : m.data()) v = cplx(gauss(rng), gauss(rng));
    return m;
}

inline ComplexTensor3 random_tensor(std::size_t n1, std::size_t n2, std::size_t n3,
                                    std::uint64_t seed) {
    ComplexTensor3 t(n1, n2, n3);
    for (std::size_t l = 0; l < n3; ++l) t.panel(l) = random_matrix(n1, n2, seed + l);
    return t;
}

inline double rel_err(const ComplexMatrix& a, const ComplexMatrix& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a.data()[i] - b.data()[i]);
        den += std::norm(b.data()[i]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double rel_err(const ComplexTensor3& a, const ComplexTensor3& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < a.n3(); ++l)
        for (std::size_t i = 0; i < a.panel(l).size(); ++i) {
            num += std::norm(a.panel(l).data()[i] - b.panel(l).data()[i]);
            den += std::norm(b.panel(l).data()[i]);
        }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline ComplexMatrix matmul_ref(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    return c;
}

/// Rebuild U diag(s) Vh with a plain triple loop (oracle path).
inline ComplexMatrix svd_reconstruct(const SvdResult& f) {
    ComplexMatrix scaled = f.vh;
    for (std::size_t r = 0; r < scaled.rows(); ++r)
        for (std::size_t c = 0; c < scaled.cols(); ++c) scaled(r, c) *= f.singular_values[r];
    return matmul_ref(f.u, scaled);
}

} // namespace sartensor::testing

#endif
