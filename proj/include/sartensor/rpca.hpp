#ifndef SARTENSOR_RPCA_HPP
#define SARTENSOR_RPCA_HPP

#include "sartensor/numerics.hpp"

#include <functional>
#include <span>

namespace sartensor {

/// Inexact augmented-Lagrangian solver parameters. mu0 <= 0 selects the
/// default policy mu0 = 1.25 / max_l |A^(l)|_2.
struct SolverConfig {
    double eta = 0.0;
    double mu0 = 0.0;
    double rho = 1.4;
    double tol = 1e-7;
    std::size_t max_iters = 500;

    void validate() const;
};

/// L + S = input up to final_residual (relative Frobenius); converged means
/// final_residual <= tol within max_iters.
template <class Part>
struct SeparationResult {
    Part low;
    Part sparse;
    std::size_t iterations = 0;
    double final_residual = 0.0;
    double eta_used = 0.0;
    bool converged = false;
};

using MatrixSeparation = SeparationResult<ComplexMatrix>;
using TensorSeparation = SeparationResult<ComplexTensor3>;

/// Per-iteration observer (iteration number starting at 1, current L and S,
/// the mu used by that iteration, relative feasibility residual).
using MatrixObserver =
    std::function<void(std::size_t, const ComplexMatrix&, const ComplexMatrix&, double, double)>;
using TensorObserver =
    std::function<void(std::size_t, const ComplexTensor3&, const ComplexTensor3&, double, double)>;

/// min |L|_* + eta |S|_1 s.t. L + S = D by inexact ALM: singular-value
/// thresholding at 1/mu_k, elementwise complex soft threshold at eta/mu_k,
/// multiplier update, mu_{k+1} = rho mu_k.
MatrixSeparation rpca_matrix(const ComplexMatrix& d, const SolverConfig& cfg,
                             Exec exec = Exec::Parallel, const MatrixObserver& observer = {});

/// min |L|_{*,F} + eta |S|_1 s.t. L + S = A. The L step thresholds singular
/// values per panel in the DFT domain; the S step thresholds elementwise in
/// the real domain. With n3 = 1 the iterates match rpca_matrix exactly.
TensorSeparation rpca_tensor(const ComplexTensor3& a, const SolverConfig& cfg,
                             Exec exec = Exec::Parallel, const TensorObserver& observer = {});

/// Independent matrix RPCA per panel with its own eta; per_panel_eta must
/// have length n3.
TensorSeparation rpca_decoupled(const ComplexTensor3& a, std::span<const double> per_panel_eta,
                                const SolverConfig& cfg, Exec exec = Exec::Parallel);

/// Default trade-off weight when no oracle is available: 1/sqrt(max(n1,n2))
/// for matrices, extended to 1/sqrt(n3 max(n1,n2)) for tensors.
double default_eta(std::size_t n1, std::size_t n2, std::size_t n3 = 1);

} // namespace sartensor

#endif
