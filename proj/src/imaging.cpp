#include "sartensor/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sartensor {

GridSpec GridSpec::centered(const Vec3& center, double spacing, std::size_t nx, std::size_t ny) {
    GridSpec g;
    g.spacing = spacing;
    g.nx = nx;
    g.ny = ny;
    g.origin = {center.x - spacing * static_cast<double>(nx - 1) / 2.0,
                center.y - spacing * static_cast<double>(ny - 1) / 2.0, center.z};
    return g;
}

std::pair<std::size_t, std::size_t> ImageGrid::peak() const {
    std::size_t bx = 0, by = 0;
    double best = -1.0;
    for (std::size_t iy = 0; iy < spec.ny; ++iy)
        for (std::size_t ix = 0; ix < spec.nx; ++ix)
            if (magnitude(ix, iy) > best) {
                best = magnitude(ix, iy);
                bx = ix;
                by = iy;
            }
    return {bx, by};
}

Vec3 ImageGrid::peak_position() const {
    auto [ix, iy] = peak();
    return spec.pixel(ix, iy);
}

ImageGrid backproject(const DataMatrix& d, const Scene& geometry, const GridSpec& spec,
                      const Vec3& velocity, Exec exec) {
    const RadarConfig& cfg = d.config;
    const std::size_t rows = d.values.rows();
    const std::size_t cols = d.values.cols();
    if (rows != cfg.slow_samples() || cols != cfg.fast_samples())
        throw std::invalid_argument("backproject: matrix shape disagrees with its config");

    ImageGrid img;
    img.spec = spec;
    img.velocity = velocity;
    img.values = ComplexMatrix(spec.ny, spec.nx);

    std::vector<std::size_t> misses(spec.ny, 0);
#pragma omp parallel for schedule(static) num_threads(exec_threads(exec))
    for (std::ptrdiff_t iy = 0; iy < static_cast<std::ptrdiff_t>(spec.ny); ++iy) {
        std::size_t miss = 0;
        for (std::size_t ix = 0; ix < spec.nx; ++ix) {
            const Vec3 rho = spec.pixel(ix, static_cast<std::size_t>(iy));
            cplx acc(0.0, 0.0);
            for (std::size_t j = 0; j < rows; ++j) {
                const double s = d.slow_axis[j];
                const Vec3 r = geometry.platform.position(s);
                const Vec3 p = rho + velocity * s;
                const double dtau = 2.0 *
                                    ((r - p).norm() - (r - geometry.reference_point).norm()) /
                                    cfg.lightspeed;
                const double li = (dtau - cfg.fast_t_min) / cfg.fast_dt;
                if (li < 0.0 || li > static_cast<double>(cols - 1)) {
                    ++miss;
                    continue;
                }
                const std::size_t l0 = std::min(static_cast<std::size_t>(li), cols - 2);
                const double frac = li - static_cast<double>(l0);
                const cplx sample = d.values(j, l0) * (1.0 - frac) + d.values(j, l0 + 1) * frac;
                acc += sample * std::exp(cplx(0.0, cfg.carrier_omega0 * dtau));
            }
            img.values(static_cast<std::size_t>(iy), ix) = acc;
        }
        misses[static_cast<std::size_t>(iy)] = miss;
    }
    for (std::size_t m : misses) img.out_of_window += m;
    return img;
}

std::vector<TracePoint> extract_trace(const DataMatrix& sparse, double stability_threshold) {
    const std::size_t rows = sparse.values.rows();
    const std::size_t cols = sparse.values.cols();

    double global_max = 0.0;
    for (const cplx& v : sparse.values.data()) global_max = std::max(global_max, std::abs(v));
    if (global_max <= 0.0) throw std::invalid_argument("extract_trace: all-zero input");

    std::vector<TracePoint> trace;
    for (std::size_t j = 0; j < rows; ++j) {
        double best = -1.0;
        std::size_t arg = 0;
        for (std::size_t l = 0; l < cols; ++l) {
            const double mag = std::abs(sparse.values(j, l));
            if (mag > best) {
                best = mag;
                arg = l;
            }
        }
        if (best >= stability_threshold * global_max)
            trace.push_back({sparse.slow_axis[j], sparse.fast_axis[arg]});
    }
    if (trace.empty())
        throw std::invalid_argument("extract_trace: no row passes the stability threshold, no "
                                    "detectable target");
    return trace;
}

double huber_loss(double x, double delta) {
    const double a = std::abs(x);
    if (a <= delta) return 0.5 * x * x;
    return delta * (a - 0.5 * delta);
}

namespace {

// Parameter vector of the motion fit: ground-plane position and velocity.
struct FitParams {
    double x, y, vx, vy;

    bool operator<(const FitParams& o) const {
        if (x != o.x) return x < o.x;
        if (y != o.y) return y < o.y;
        if (vx != o.vx) return vx < o.vx;
        return vy < o.vy;
    }
};

struct FitObjective {
    const std::vector<TracePoint>& trace;
    const Scene& geometry;
    double lightspeed;
    double delta;
    double z;

    double operator()(const FitParams& p) const {
        double acc = 0.0;
        for (const TracePoint& pt : trace) {
            const Vec3 rho{p.x + p.vx * pt.s, p.y + p.vy * pt.s, z};
            const Vec3 r = geometry.platform.position(pt.s);
            const double f = 2.0 *
                             ((r - rho).norm() - (r - geometry.reference_point).norm()) /
                             lightspeed;
            acc += huber_loss(pt.delta_tau - f, delta);
        }
        return acc;
    }
};

struct LocalMin {
    FitParams params;
    double loss;
    std::size_t evals;
};

// Nelder-Mead with standard coefficients; velocity coordinates are scaled by
// the aperture half-span so the termination size is a position tolerance.
LocalMin nelder_mead(const FitObjective& obj, const FitParams& start, double pos_step,
                     double vel_step, double tol_m, double time_scale, std::size_t max_evals) {
    constexpr std::size_t dim = 4;
    using Vertex = std::array<double, dim>;
    auto to_params = [](const Vertex& v) { return FitParams{v[0], v[1], v[2], v[3]}; };

    std::array<Vertex, dim + 1> simplex;
    simplex[0] = {start.x, start.y, start.vx, start.vy};
    for (std::size_t i = 0; i < dim; ++i) {
        simplex[i + 1] = simplex[0];
        simplex[i + 1][i] += (i < 2) ? pos_step : vel_step;
    }

    std::size_t evals = 0;
    std::array<double, dim + 1> f;
    for (std::size_t i = 0; i <= dim; ++i) {
        f[i] = obj(to_params(simplex[i]));
        ++evals;
    }

    auto size_metric = [&](const std::array<Vertex, dim + 1>& s, std::size_t best) {
        double m = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            double d2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double scale = (k < 2) ? 1.0 : time_scale;
                const double dd = (s[i][k] - s[best][k]) * scale;
                d2 += dd * dd;
            }
            m = std::max(m, std::sqrt(d2));
        }
        return m;
    };

    while (evals < max_evals) {
        std::array<std::size_t, dim + 1> order;
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t best = order[0], worst = order[dim], second = order[dim - 1];

        if (size_metric(simplex, best) < tol_m) break;

        Vertex centroid{};
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k] / dim;
        }
        auto affine = [&](double t) {
            Vertex v;
            for (std::size_t k = 0; k < dim; ++k)
                v[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
            return v;
        };

        const Vertex refl = affine(-1.0);
        const double f_refl = obj(to_params(refl));
        ++evals;
        if (f_refl < f[best]) {
            const Vertex expd = affine(-2.0);
            const double f_expd = obj(to_params(expd));
            ++evals;
            if (f_expd < f_refl) {
                simplex[worst] = expd;
                f[worst] = f_expd;
            } else {
                simplex[worst] = refl;
                f[worst] = f_refl;
            }
        } else if (f_refl < f[second]) {
            simplex[worst] = refl;
            f[worst] = f_refl;
        } else {
            const Vertex contr = affine(f_refl < f[worst] ? -0.5 : 0.5);
            const double f_contr = obj(to_params(contr));
            ++evals;
            if (f_contr < std::min(f_refl, f[worst])) {
                simplex[worst] = contr;
                f[worst] = f_contr;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < dim; ++k)
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    f[i] = obj(to_params(simplex[i]));
                    ++evals;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i)
        if (f[i] < f[best]) best = i;
    return {to_params(simplex[best]), f[best], evals};
}

} // namespace

MotionEstimate fit_motion(const std::vector<TracePoint>& trace, const Scene& geometry,
                          const RadarConfig& cfg, const FitOptions& options, Exec exec) {
    if (trace.size() < 8)
        throw std::invalid_argument("fit_motion: need at least 8 trace points, got " +
                                    std::to_string(trace.size()));

    const double delta = 10.0 * cfg.fast_dt;
    double s_span = 0.0;
    for (const TracePoint& p : trace) s_span = std::max(s_span, std::abs(p.s));
    const FitObjective obj{trace, geometry, cfg.lightspeed, delta, options.position_seed.z};

    const double tol_m = 1e-3 * cfg.fast_dt * cfg.lightspeed;
    const double time_scale = std::max(s_span, 1e-6);

    const std::size_t n_speed = std::max<std::size_t>(options.speed_starts, 1);
    const std::size_t n_angle = std::max<std::size_t>(options.angle_starts, 1);
    const std::size_t n_starts = n_speed * n_angle;

    std::vector<LocalMin> results(n_starts);
#pragma omp parallel for schedule(dynamic) num_threads(exec_threads(exec))
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n_starts); ++i) {
        const std::size_t si = static_cast<std::size_t>(i) / n_angle;
        const std::size_t ai = static_cast<std::size_t>(i) % n_angle;
        const double speed = options.v_max * static_cast<double>(si) /
                             static_cast<double>(std::max<std::size_t>(n_speed - 1, 1));
        const double angle = (std::numbers::pi / 2.0) * static_cast<double>(ai) /
                             static_cast<double>(std::max<std::size_t>(n_angle - 1, 1));
        FitParams start{options.position_seed.x, options.position_seed.y,
                        speed * std::cos(angle), speed * std::sin(angle)};
        const double vel_step = std::max(0.05 * options.v_max, 0.02);
        results[static_cast<std::size_t>(i)] =
            nelder_mead(obj, start, 2.0, vel_step, tol_m, time_scale,
                        options.max_evals_per_start);
    }

    std::size_t winner = 0;
    for (std::size_t i = 1; i < n_starts; ++i) {
        if (results[i].loss < results[winner].loss ||
            (results[i].loss == results[winner].loss &&
             results[i].params < results[winner].params))
            winner = i;
    }

    MotionEstimate est;
    est.position = {results[winner].params.x, results[winner].params.y, options.position_seed.z};
    est.velocity = {results[winner].params.vx, results[winner].params.vy, 0.0};
    est.loss = results[winner].loss;
    est.trace = trace;
    const double ceiling =
        options.loss_ceiling_scale * static_cast<double>(trace.size()) * delta * delta;
    est.reliable = est.loss <= ceiling;
    return est;
}

} // namespace sartensor
