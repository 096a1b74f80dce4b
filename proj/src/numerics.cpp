#include "sartensor/numerics.hpp"

#include <lapacke.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

extern "C" void openblas_set_num_threads(int);

namespace sartensor {

int exec_threads(Exec exec) {
    return exec == Exec::Serial ? 1 : omp_get_max_threads();
}

void set_thread_count(int n) {
    if (n > 0) omp_set_num_threads(n);
}

namespace {

// BLAS stays single-threaded; parallelism lives in the per-panel and per-row
// loops of this library.
const int blas_init = [] {
    openblas_set_num_threads(1);
    return 0;
}();

std::vector<double> singular_values_lapack(const ComplexMatrix& m, ComplexMatrix* u,
                                           ComplexMatrix* vh) {
    const auto rows = static_cast<lapack_int>(m.rows());
    const auto cols = static_cast<lapack_int>(m.cols());
    const lapack_int r = std::min(rows, cols);

    std::vector<cplx> a = m.data(); // gesdd destroys its input
    std::vector<double> s(static_cast<std::size_t>(r));
    std::vector<cplx> ubuf(u ? m.rows() * static_cast<std::size_t>(r) : 1);
    std::vector<cplx> vbuf(vh ? static_cast<std::size_t>(r) * m.cols() : 1);

    const char jobz = (u || vh) ? 'S' : 'N';
    lapack_int info = LAPACKE_zgesdd(
        LAPACK_ROW_MAJOR, jobz, rows, cols, reinterpret_cast<lapack_complex_double*>(a.data()),
        cols, s.data(), reinterpret_cast<lapack_complex_double*>(ubuf.data()), r,
        reinterpret_cast<lapack_complex_double*>(vbuf.data()), cols);
    if (info > 0) {
        // Divide-and-conquer failed to converge; retry with the QR-based driver.
        a = m.data();
        std::vector<double> superb(static_cast<std::size_t>(std::max<lapack_int>(1, r - 1)));
        info = LAPACKE_zgesvd(LAPACK_ROW_MAJOR, jobz, jobz, rows, cols,
                              reinterpret_cast<lapack_complex_double*>(a.data()), cols, s.data(),
                              reinterpret_cast<lapack_complex_double*>(ubuf.data()), r,
                              reinterpret_cast<lapack_complex_double*>(vbuf.data()), cols,
                              superb.data());
    }
    if (info != 0)
        throw std::runtime_error("svd: LAPACK failed on " + m.shape_string() +
                                 " matrix (info=" + std::to_string(info) + ")");

    if (u) *u = ComplexMatrix(m.rows(), static_cast<std::size_t>(r), std::move(ubuf));
    if (vh) *vh = ComplexMatrix(static_cast<std::size_t>(r), m.cols(), std::move(vbuf));
    return s;
}

} // namespace

SvdResult svd(const ComplexMatrix& m) {
    if (!m.all_finite())
        throw std::invalid_argument("svd: non-finite input, shape " + m.shape_string());
    SvdResult out;
    out.singular_values = singular_values_lapack(m, &out.u, &out.vh);
    return out;
}

MatrixNorms matrix_norms(const ComplexMatrix& m) {
    MatrixNorms n;
    const std::vector<double> s = singular_values_lapack(m, nullptr, nullptr);
    for (double v : s) n.nuclear += v;
    n.spectral = s.empty() ? 0.0 : s.front();
    for (const cplx& v : m.data()) {
        n.frobenius += std::norm(v);
        n.l1 += std::abs(v);
    }
    n.frobenius = std::sqrt(n.frobenius);
    return n;
}

double frobenius_norm(const ComplexMatrix& m) {
    double acc = 0.0;
    for (const cplx& v : m.data()) acc += std::norm(v);
    return std::sqrt(acc);
}

double l1_norm(const ComplexMatrix& m) {
    double acc = 0.0;
    for (const cplx& v : m.data()) acc += std::abs(v);
    return acc;
}

double nuclear_norm(const ComplexMatrix& m) {
    double acc = 0.0;
    for (double v : singular_values_lapack(m, nullptr, nullptr)) acc += v;
    return acc;
}

double spectral_norm(const ComplexMatrix& m) {
    const std::vector<double> s = singular_values_lapack(m, nullptr, nullptr);
    return s.empty() ? 0.0 : s.front();
}

double frobenius_norm(const ComplexTensor3& t) {
    double acc = 0.0;
    for (const auto& p : t.panels())
        for (const cplx& v : p.data()) acc += std::norm(v);
    return std::sqrt(acc);
}

double l1_norm(const ComplexTensor3& t) {
    double acc = 0.0;
    for (const auto& p : t.panels()) acc += l1_norm(p);
    return acc;
}

ComplexTensor3 dft_axis3(const ComplexTensor3& t, bool inverse, Exec exec) {
    const std::size_t n3 = t.n3();
    ComplexTensor3 out(t.n1(), t.n2(), n3);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n3));
    const double sign = inverse ? -1.0 : 1.0;

    // Twiddle table indexed mod n3 keeps the kernel bit-identical for any
    // execution order.
    std::vector<cplx> twiddle(n3);
    for (std::size_t j = 0; j < n3; ++j) {
        const double phi = sign * 2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(n3);
        twiddle[j] = cplx(std::cos(phi), std::sin(phi));
    }

#pragma omp parallel for schedule(static) num_threads(exec_threads(exec))
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n3); ++k) {
        auto& dst = out.panel(static_cast<std::size_t>(k)).data();
        for (std::size_t l = 0; l < n3; ++l) {
            const cplx w = twiddle[(static_cast<std::size_t>(k) * l) % n3] * scale;
            const auto& src = t.panel(l).data();
            for (std::size_t i = 0; i < src.size(); ++i) dst[i] += w * src[i];
        }
    }
    return out;
}

} // namespace sartensor
