#include "sartensor/rpca.hpp"

#include <cblas.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sartensor {

void SolverConfig::validate() const {
    if (!(eta > 0.0)) throw std::invalid_argument("SolverConfig: eta must be positive");
    if (!(rho > 1.0)) throw std::invalid_argument("SolverConfig: rho must exceed 1");
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
}

double default_eta(std::size_t n1, std::size_t n2, std::size_t n3) {
    return 1.0 / std::sqrt(static_cast<double>(n3) * static_cast<double>(std::max(n1, n2)));
}

namespace {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows(), b.cols());
    const cplx one(1.0, 0.0), zero(0.0, 0.0);
    cblas_zgemm(CblasRowMajor, CblasNoTrans, CblasNoTrans, static_cast<int>(a.rows()),
                static_cast<int>(b.cols()), static_cast<int>(a.cols()), &one, a.data().data(),
                static_cast<int>(a.cols()), b.data().data(), static_cast<int>(b.cols()), &zero,
                c.data().data(), static_cast<int>(b.cols()));
    return c;
}

// Proximal step of the nuclear norm: SVD, shrink the singular values by
// lambda, rebuild from the surviving rank.
ComplexMatrix svt_apply(const ComplexMatrix& w, double lambda) {
    const SvdResult f = svd(w);
    std::size_t rank = 0;
    while (rank < f.singular_values.size() && f.singular_values[rank] > lambda) ++rank;
    if (rank == 0) return ComplexMatrix(w.rows(), w.cols());

    // Scale the leading rows of Vh by the shrunk values, then one GEMM.
    ComplexMatrix scaled_vh(rank, w.cols());
    for (std::size_t j = 0; j < rank; ++j) {
        const double sv = f.singular_values[j] - lambda;
        auto src = f.vh.row(j);
        auto dst = scaled_vh.row(j);
        for (std::size_t c = 0; c < w.cols(); ++c) dst[c] = src[c] * sv;
    }
    ComplexMatrix u_lead(w.rows(), rank);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        auto src = f.u.row(r);
        auto dst = u_lead.row(r);
        std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(rank), dst.begin());
    }
    return matmul(u_lead, scaled_vh);
}

// The elementwise kernels are shared verbatim by the matrix and tensor
// solvers so the n3 = 1 reduction reproduces the matrix iterates bit for bit.
void form_l_target(std::span<cplx> w, std::span<const cplx> d, std::span<const cplx> s,
                   std::span<const cplx> y, double inv_mu) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = d[i] - s[i] + y[i] * inv_mu;
}

void shrink_into(std::span<cplx> s, std::span<const cplx> d, std::span<const cplx> l,
                 std::span<const cplx> y, double inv_mu, double threshold) {
    for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = soft_threshold(d[i] - l[i] + y[i] * inv_mu, threshold);
}

double update_multiplier(std::span<cplx> y, std::span<const cplx> d, std::span<const cplx> l,
                         std::span<const cplx> s, double mu) {
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const cplx r = d[i] - l[i] - s[i];
        y[i] += mu * r;
        acc += std::norm(r);
    }
    return acc;
}

} // namespace

MatrixSeparation rpca_matrix(const ComplexMatrix& d, const SolverConfig& cfg, Exec exec,
                             const MatrixObserver& observer) {
    cfg.validate();
    const double dnorm = frobenius_norm(d);
    if (dnorm == 0.0) throw std::invalid_argument("rpca_matrix: zero input");
    (void)exec; // the SVD dominates; elementwise passes stay serial

    // Default penalty start 1.25 / |D|_2: the first SVT threshold then keeps
    // only the leading singular directions, which is what lets the iteration
    // separate instead of swallowing D into L whole.
    double mu = cfg.mu0 > 0.0 ? cfg.mu0 : 1.25 / spectral_norm(d);
    ComplexMatrix low(d.rows(), d.cols());
    ComplexMatrix sparse(d.rows(), d.cols());
    ComplexMatrix y(d.rows(), d.cols());
    ComplexMatrix w(d.rows(), d.cols());

    MatrixSeparation res;
    res.eta_used = cfg.eta;
    double rel = 1.0;
    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        const double inv_mu = 1.0 / mu;
        form_l_target(w.data(), d.data(), sparse.data(), y.data(), inv_mu);
        low = svt_apply(w, inv_mu);
        shrink_into(sparse.data(), d.data(), low.data(), y.data(), inv_mu, cfg.eta * inv_mu);
        rel = std::sqrt(update_multiplier(y.data(), d.data(), low.data(), sparse.data(), mu)) /
              dnorm;
        res.iterations = k + 1;
        if (observer) observer(k + 1, low, sparse, mu, rel);
        if (rel <= cfg.tol) {
            res.converged = true;
            break;
        }
        mu *= cfg.rho;
    }
    res.final_residual = rel;
    res.low = std::move(low);
    res.sparse = std::move(sparse);
    return res;
}

TensorSeparation rpca_tensor(const ComplexTensor3& a, const SolverConfig& cfg, Exec exec,
                             const TensorObserver& observer) {
    cfg.validate();
    const double anorm = frobenius_norm(a);
    if (anorm == 0.0) throw std::invalid_argument("rpca_tensor: zero input");
    const std::size_t n3 = a.n3();

    double mu = cfg.mu0;
    if (mu <= 0.0) {
        std::vector<double> spec(n3);
#pragma omp parallel for schedule(dynamic) num_threads(exec_threads(exec))
        for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(n3); ++l)
            spec[static_cast<std::size_t>(l)] =
                spectral_norm(a.panel(static_cast<std::size_t>(l)));
        mu = 1.25 / *std::max_element(spec.begin(), spec.end());
    }

    ComplexTensor3 low(a.n1(), a.n2(), n3);
    ComplexTensor3 sparse(a.n1(), a.n2(), n3);
    ComplexTensor3 y(a.n1(), a.n2(), n3);
    ComplexTensor3 w(a.n1(), a.n2(), n3);

    TensorSeparation res;
    res.eta_used = cfg.eta;
    double rel = 1.0;
    std::exception_ptr err;
    for (std::size_t k = 0; k < cfg.max_iters; ++k) {
        const double inv_mu = 1.0 / mu;
        for (std::size_t l = 0; l < n3; ++l)
            form_l_target(w.panel(l).data(), a.panel(l).data(), sparse.panel(l).data(),
                          y.panel(l).data(), inv_mu);

        ComplexTensor3 w_hat = dft_axis3(w, false, exec);
#pragma omp parallel for schedule(dynamic) num_threads(exec_threads(exec))
        for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(n3); ++l) {
            try {
                w_hat.panel(static_cast<std::size_t>(l)) =
                    svt_apply(w_hat.panel(static_cast<std::size_t>(l)), inv_mu);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
        low = dft_axis3(w_hat, true, exec);

        std::vector<double> partial(n3, 0.0);
        for (std::size_t l = 0; l < n3; ++l) {
            shrink_into(sparse.panel(l).data(), a.panel(l).data(), low.panel(l).data(),
                        y.panel(l).data(), inv_mu, cfg.eta * inv_mu);
            partial[l] = update_multiplier(y.panel(l).data(), a.panel(l).data(),
                                           low.panel(l).data(), sparse.panel(l).data(), mu);
        }
        double acc = 0.0;
        for (double v : partial) acc += v;
        rel = std::sqrt(acc) / anorm;

        res.iterations = k + 1;
        if (observer) observer(k + 1, low, sparse, mu, rel);
        if (rel <= cfg.tol) {
            res.converged = true;
            break;
        }
        mu *= cfg.rho;
    }
    res.final_residual = rel;
    res.low = std::move(low);
    res.sparse = std::move(sparse);
    return res;
}

TensorSeparation rpca_decoupled(const ComplexTensor3& a, std::span<const double> per_panel_eta,
                                const SolverConfig& cfg, Exec exec) {
    const std::size_t n3 = a.n3();
    if (per_panel_eta.size() != n3)
        throw std::invalid_argument("rpca_decoupled: eta list length " +
                                    std::to_string(per_panel_eta.size()) + " != n3 " +
                                    std::to_string(n3));

    TensorSeparation res;
    res.low = ComplexTensor3(a.n1(), a.n2(), n3);
    res.sparse = ComplexTensor3(a.n1(), a.n2(), n3);
    res.converged = true;

    std::vector<MatrixSeparation> parts(n3);
    std::exception_ptr err;
    std::string err_panel;
#pragma omp parallel for schedule(dynamic) num_threads(exec_threads(exec))
    for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(n3); ++l) {
        try {
            SolverConfig panel_cfg = cfg;
            panel_cfg.eta = per_panel_eta[static_cast<std::size_t>(l)];
            parts[static_cast<std::size_t>(l)] =
                rpca_matrix(a.panel(static_cast<std::size_t>(l)), panel_cfg, Exec::Serial);
        } catch (...) {
#pragma omp critical
            if (!err) {
                err = std::current_exception();
                err_panel = std::to_string(l);
            }
        }
    }
    if (err) {
        try {
            std::rethrow_exception(err);
        } catch (const std::exception& e) {
            throw std::runtime_error("rpca_decoupled: panel " + err_panel + ": " + e.what());
        }
    }

    double eta_acc = 0.0;
    for (std::size_t l = 0; l < n3; ++l) {
        res.low.panel(l) = std::move(parts[l].low);
        res.sparse.panel(l) = std::move(parts[l].sparse);
        res.iterations = std::max(res.iterations, parts[l].iterations);
        res.converged = res.converged && parts[l].converged;
        eta_acc += per_panel_eta[l];
    }
    res.eta_used = eta_acc / static_cast<double>(n3);

    double acc = 0.0;
    for (std::size_t l = 0; l < n3; ++l)
        for (std::size_t i = 0; i < a.panel(l).size(); ++i)
            acc += std::norm(a.panel(l).data()[i] - res.low.panel(l).data()[i] -
                             res.sparse.panel(l).data()[i]);
    res.final_residual = std::sqrt(acc) / frobenius_norm(a);
    return res;
}

} // namespace sartensor
