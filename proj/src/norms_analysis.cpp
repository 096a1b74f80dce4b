#include "sartensor/norms_analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sartensor {

namespace {

std::vector<double> panel_nuclear_norms(const ComplexTensor3& t, Exec exec) {
    std::vector<double> norms(t.n3(), 0.0);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) num_threads(exec_threads(exec))
    for (std::ptrdiff_t l = 0; l < static_cast<std::ptrdiff_t>(t.n3()); ++l) {
        try {
            norms[static_cast<std::size_t>(l)] =
                nuclear_norm(t.panel(static_cast<std::size_t>(l)));
        } catch (...) {
#pragma omp critical
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    return norms;
}

} // namespace

double nuclear_decoupled(const ComplexTensor3& t, Exec exec) {
    double acc = 0.0;
    for (double v : panel_nuclear_norms(t, exec)) acc += v;
    return acc;
}

double nuclear_fourier(const ComplexTensor3& t, Exec exec) {
    const ComplexTensor3 hat = dft_axis3(t, false, exec);
    double acc = 0.0;
    for (double v : panel_nuclear_norms(hat, exec)) acc += v;
    return acc;
}

ComplexMatrix block_circulant_embed(const ComplexTensor3& t, std::size_t max_entries) {
    const std::size_t n1 = t.n1(), n2 = t.n2(), n3 = t.n3();
    if (n1 * n3 * n2 * n3 > max_entries)
        throw std::invalid_argument("block_circulant_embed: " + std::to_string(n1 * n3) + "x" +
                                    std::to_string(n2 * n3) + " embedding exceeds the memory cap");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n3));
    ComplexMatrix out(n1 * n3, n2 * n3);
    for (std::size_t br = 0; br < n3; ++br)
        for (std::size_t bc = 0; bc < n3; ++bc) {
            const ComplexMatrix& block = t.panel((bc + n3 - br) % n3);
            for (std::size_t i = 0; i < n1; ++i)
                for (std::size_t j = 0; j < n2; ++j)
                    out(br * n1 + i, bc * n2 + j) = scale * block(i, j);
        }
    return out;
}

NormReport bounds(const ComplexTensor3& t, Exec exec) {
    NormReport r;
    const std::vector<double> per_panel = panel_nuclear_norms(t, exec);
    double sum = 0.0, sumsq = 0.0;
    for (double v : per_panel) {
        sum += v;
        sumsq += v * v;
    }
    r.nuclear_decoupled = sum;
    r.lower_bound = std::sqrt(sumsq);
    r.upper_bound = std::sqrt(static_cast<double>(t.n3())) * sum;
    r.nuclear_fourier = nuclear_fourier(t, exec);
    r.l1 = l1_norm(t);
    r.frobenius = frobenius_norm(t);

    const double slack = 1e-9 * std::max(1.0, r.upper_bound);
    if (r.nuclear_fourier < r.lower_bound - slack || r.nuclear_fourier > r.upper_bound + slack)
        throw std::logic_error("bounds: Fourier nuclear norm escaped its bracket");
    return r;
}

namespace {

EtaReport eta_from_norms(double nuc_low, double l1_low, double nuc_sparse, double l1_sparse,
                         EtaVariant variant) {
    if (l1_low <= 0.0 || l1_sparse <= 0.0)
        throw std::invalid_argument("eta_report: degenerate input with zero l1 norm");
    EtaReport r;
    r.variant = variant;
    r.eta_max = nuc_sparse / l1_sparse;
    r.eta_min = nuc_low / l1_low;
    r.eta_star = std::sqrt(r.eta_max * r.eta_min);
    r.ratio = r.eta_max / r.eta_min;
    return r;
}

} // namespace

EtaReport eta_report(const ComplexTensor3& low, const ComplexTensor3& sparse, EtaVariant variant,
                     Exec exec) {
    if (low.n1() != sparse.n1() || low.n2() != sparse.n2() || low.n3() != sparse.n3())
        throw std::invalid_argument("eta_report: tensor shapes differ");
    if (variant == EtaVariant::Matrix)
        throw std::invalid_argument("eta_report: matrix variant takes matrices");
    const bool fourier = variant == EtaVariant::Fourier;
    const double nl = fourier ? nuclear_fourier(low, exec) : nuclear_decoupled(low, exec);
    const double ns = fourier ? nuclear_fourier(sparse, exec) : nuclear_decoupled(sparse, exec);
    return eta_from_norms(nl, l1_norm(low), ns, l1_norm(sparse), variant);
}

EtaReport eta_report(const ComplexMatrix& low, const ComplexMatrix& sparse) {
    if (!low.same_shape(sparse)) throw std::invalid_argument("eta_report: matrix shapes differ");
    return eta_from_norms(nuclear_norm(low), l1_norm(low), nuclear_norm(sparse),
                          l1_norm(sparse), EtaVariant::Matrix);
}

double matrix_eta_optimal(const RadarConfig& cfg, double n_vt) {
    if (n_vt < 0.0) throw std::invalid_argument("matrix_eta_optimal: n_vt must be >= 0");
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    const double bdt = cfg.bandwidth * cfg.fast_dt;
    const double front = std::sqrt(cfg.pulse_interval * bdt /
                                   (4.0 * cfg.aperture_duration * sqrt_pi));
    const double inner = 1.0 / std::sqrt(n_vt * bdt / (2.0 * sqrt_pi) + 0.5) *
                         (std::sqrt(2.0) * n_vt * bdt / std::numbers::pi + 1.0) / 2.0;
    return front * std::sqrt(inner);
}

double cross_term_suppression(double b_l, double b_lp, double omega, double bandwidth) {
    const double denom = b_l * b_l + b_lp * b_lp;
    if (denom <= 0.0)
        throw std::invalid_argument("cross_term_suppression: both slopes are zero");
    const double diff = b_l - b_lp;
    const double ratio = omega / bandwidth;
    return std::exp(-0.5 * ratio * ratio * diff * diff / denom);
}

SweepGrid SweepGrid::paper_default() {
    SweepGrid g;
    g.sub_aperture_fractions = {0.005, 0.01};
    for (int k = 2; k <= 30; ++k) g.sub_aperture_fractions.push_back(0.01 * k);
    for (int k = 1; k <= 9; ++k) g.overlaps.push_back(0.1 * k);
    for (int k = 0; k <= 7; ++k) g.alphas.push_back(std::numbers::pi * k / 16.0);
    return g;
}

std::vector<SweepPoint> sweep(const SceneTemplate& tpl, const RadarConfig& cfg,
                              const SweepGrid& grid, Exec exec, std::size_t* skipped) {
    if (grid.sub_aperture_fractions.empty() || grid.overlaps.empty() || grid.alphas.empty())
        throw std::invalid_argument("sweep: empty grid");

    // The stationary background does not depend on alpha; synthesize it once.
    SceneTemplate background = tpl;
    background.mover_speed = 0.0;
    const Scene bg_scene = make_scene(background, cfg);
    const DataMatrix d_low = synthesize(bg_scene, cfg, exec);

    const std::size_t ns = grid.sub_aperture_fractions.size();
    const std::size_t no = grid.overlaps.size();
    const std::size_t cells = ns * no;

    std::vector<SweepPoint> out;
    std::size_t skip_count = 0;

    for (double alpha : grid.alphas) {
        SceneTemplate mover_tpl = tpl;
        mover_tpl.stationary_count = 0;
        mover_tpl.mover_heading = alpha;
        const Scene mover_scene = make_scene(mover_tpl, cfg);
        const DataMatrix d_sparse = synthesize(mover_scene, cfg, exec);

        std::vector<SweepPoint> row(cells);
        std::vector<char> valid(cells, 0);
        std::exception_ptr err;

#pragma omp parallel for schedule(dynamic) num_threads(exec_threads(exec))
        for (std::ptrdiff_t cell = 0; cell < static_cast<std::ptrdiff_t>(cells); ++cell) {
            const double frac = grid.sub_aperture_fractions[static_cast<std::size_t>(cell) / no];
            const double overlap = grid.overlaps[static_cast<std::size_t>(cell) % no];
            TensorPlan plan;
            try {
                plan = make_plan(cfg.aperture_duration, frac * cfg.aperture_duration, overlap,
                                 cfg.pulse_interval);
            } catch (const std::invalid_argument&) {
                continue; // degenerate cell at this row resolution
            }
            try {
                const ComplexTensor3 t_low = slice_rows(d_low.values, plan);
                const ComplexTensor3 t_sparse = slice_rows(d_sparse.values, plan);

                SweepPoint& p = row[static_cast<std::size_t>(cell)];
                p.alpha = alpha;
                p.sub_fraction = frac;
                p.overlap = overlap;
                p.n1 = plan.rows_per_panel;
                p.n3 = plan.n3;
                p.nuc_decoupled_low = nuclear_decoupled(t_low, Exec::Serial);
                p.nuc_fourier_low = nuclear_fourier(t_low, Exec::Serial);
                p.nuc_decoupled_sparse = nuclear_decoupled(t_sparse, Exec::Serial);
                p.nuc_fourier_sparse = nuclear_fourier(t_sparse, Exec::Serial);
                p.l1_low = l1_norm(t_low);
                p.l1_sparse = l1_norm(t_sparse);
                p.eta_fourier = eta_from_norms(p.nuc_fourier_low, p.l1_low, p.nuc_fourier_sparse,
                                               p.l1_sparse, EtaVariant::Fourier);
                p.eta_decoupled = eta_from_norms(p.nuc_decoupled_low, p.l1_low,
                                                 p.nuc_decoupled_sparse, p.l1_sparse,
                                                 EtaVariant::Decoupled);
                valid[static_cast<std::size_t>(cell)] = 1;
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);

        for (std::size_t cell = 0; cell < cells; ++cell) {
            if (valid[cell])
                out.push_back(row[cell]);
            else
                ++skip_count;
        }
    }
    if (skipped) *skipped = skip_count;
    return out;
}

} // namespace sartensor
