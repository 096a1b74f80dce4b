#include "sartensor/tensorize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sartensor {

namespace {

// ceil with a relative guard so that exact integer ratios perturbed by
// floating-point representation do not round up.
double fuzzy_ceil(double x) { return std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))); }

} // namespace

TensorPlan make_plan(double s_tot, double s_sub, double overlap, double ds) {
    if (!(s_sub > 0.0) || s_sub > s_tot * (1.0 + 1e-12))
        throw std::invalid_argument("make_plan: need 0 < s_sub <= s_tot, got s_sub=" +
                                    std::to_string(s_sub) + " s_tot=" + std::to_string(s_tot));
    if (overlap < 0.0 || overlap >= 1.0)
        throw std::invalid_argument("make_plan: overlap must be in [0, 1)");
    if (!(ds > 0.0)) throw std::invalid_argument("make_plan: ds must be positive");

    TensorPlan plan;
    plan.sub_aperture_s = s_sub;
    plan.overlap_fraction = overlap;
    plan.total_rows = static_cast<std::size_t>(std::llround(s_tot / ds)) + 1;
    plan.rows_per_panel = static_cast<std::size_t>(std::llround(s_sub / ds)) + 1;
    if (plan.rows_per_panel > plan.total_rows) plan.rows_per_panel = plan.total_rows;

    plan.stride_rows = static_cast<std::size_t>(
        std::llround((1.0 - overlap) * static_cast<double>(plan.rows_per_panel)));
    if (plan.stride_rows == 0)
        throw std::invalid_argument("make_plan: stride rounds to zero rows (s_sub=" +
                                    std::to_string(s_sub) + ", overlap=" +
                                    std::to_string(overlap) + ")");

    plan.n3 = 1 + static_cast<std::size_t>(
                      std::max(0.0, fuzzy_ceil((s_tot - s_sub) / ((1.0 - overlap) * s_sub))));

    for (std::size_t l = 0; l + 1 < plan.n3; ++l)
        if (plan.panel_start(l + 1) > plan.panel_start(l) + plan.rows_per_panel)
            throw std::invalid_argument("make_plan: plan does not cover every slow-time row");
    return plan;
}

ComplexTensor3 slice_rows(const ComplexMatrix& m, const TensorPlan& plan) {
    if (m.rows() != plan.total_rows)
        throw std::invalid_argument("to_tensor: matrix has " + std::to_string(m.rows()) +
                                    " rows but the plan covers " +
                                    std::to_string(plan.total_rows));
    ComplexTensor3 t(plan.rows_per_panel, m.cols(), plan.n3);
    for (std::size_t l = 0; l < plan.n3; ++l) {
        const std::size_t start = plan.panel_start(l);
        ComplexMatrix& panel = t.panel(l);
        for (std::size_t r = 0; r < plan.rows_per_panel; ++r) {
            auto src = m.row(start + r);
            auto dst = panel.row(r);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    }
    return t;
}

DataTensor to_tensor(const DataMatrix& d, const TensorPlan& plan) {
    DataTensor out;
    out.tensor = slice_rows(d.values, plan);
    out.plan = plan;
    out.slow_axis = d.slow_axis;
    out.fast_axis = d.fast_axis;
    out.config = d.config;
    return out;
}

std::size_t innermost_panel(const TensorPlan& plan, std::size_t row) {
    bool found = false;
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t l = 0; l < plan.n3; ++l) {
        if (!plan.covers(row, l)) continue;
        const double a = static_cast<double>(l);
        const double b = a - static_cast<double>(plan.n3) + 1.0;
        const double score = a * a + b * b;
        if (!found || score < best_score) {
            found = true;
            best = l;
            best_score = score;
        }
    }
    if (!found)
        throw std::logic_error("reconstruct: row " + std::to_string(row) +
                               " is covered by no panel");
    return best;
}

ComplexMatrix merge_rows(const ComplexTensor3& t, const TensorPlan& plan) {
    if (t.n3() != plan.n3 || t.n1() != plan.rows_per_panel)
        throw std::invalid_argument("reconstruct: tensor shape disagrees with the plan");
    ComplexMatrix out(plan.total_rows, t.n2());
    for (std::size_t row = 0; row < plan.total_rows; ++row) {
        const std::size_t l = innermost_panel(plan, row);
        auto src = t.panel(l).row(row - plan.panel_start(l));
        auto dst = out.row(row);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

DataMatrix reconstruct(const DataTensor& t) {
    DataMatrix out;
    out.values = merge_rows(t.tensor, t.plan);
    out.slow_axis = t.slow_axis;
    out.fast_axis = t.fast_axis;
    out.config = t.config;
    return out;
}

} // namespace sartensor
