#include "sartensor/sar_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sartensor {

void RadarConfig::validate() const {
    if (carrier_omega0 <= 0 || bandwidth <= 0 || pulse_interval <= 0 || fast_dt <= 0 ||
        lightspeed <= 0)
        throw std::invalid_argument("RadarConfig: rates and intervals must be positive");
    if (slow_count % 2 != 0)
        throw std::invalid_argument("RadarConfig: slow_count must be even, got " +
                                    std::to_string(slow_count));
    if (fast_dt > 1.0 / (2.0 * bandwidth) * (1.0 + 1e-12))
        throw std::invalid_argument(
            "RadarConfig: fast_dt violates the baseband Nyquist bound 1/(2B)");
    if (fast_t_max <= fast_t_min)
        throw std::invalid_argument("RadarConfig: empty fast-time window");
    const double expected = static_cast<double>(slow_count) * pulse_interval;
    if (std::abs(aperture_duration - expected) > 1e-9 * std::max(1.0, expected))
        throw std::invalid_argument(
            "RadarConfig: aperture_duration != slow_count * pulse_interval");
}

std::size_t RadarConfig::fast_samples() const {
    return static_cast<std::size_t>(std::llround((fast_t_max - fast_t_min) / fast_dt)) + 1;
}

RadarConfig RadarConfig::desk_default(std::size_t n) {
    RadarConfig cfg;
    cfg.slow_count = n;
    cfg.aperture_duration = 11.5 * static_cast<double>(n) / 512.0;
    cfg.pulse_interval = 11.5 / 512.0;
    cfg.validate();
    return cfg;
}

Scene Scene::stationary_only() const {
    Scene s = *this;
    s.movers.clear();
    return s;
}

Scene Scene::movers_only() const {
    Scene s = *this;
    s.stationary.clear();
    return s;
}

void Scene::validate(const RadarConfig& cfg) const {
    const double speed = platform.velocity.norm();
    if (std::abs(speed - cfg.platform_speed) > 1e-9 * std::max(1.0, cfg.platform_speed))
        throw std::invalid_argument("Scene: platform velocity magnitude disagrees with "
                                    "RadarConfig.platform_speed");
    for (const auto* group : {&stationary, &movers})
        for (const PointTarget& t : *group) {
            if (t.reflectivity < 0)
                throw std::invalid_argument("Scene: negative reflectivity");
            const double half = cfg.aperture_duration / 2.0;
            for (double s : {-half, 0.0, half})
                if ((platform.position(s) - t.position(s)).norm() < 1.0)
                    throw std::invalid_argument(
                        "Scene: target coincides with the platform trajectory");
        }
}

double travel_time(const Scene& scene, double s, const Vec3& p, double lightspeed) {
    return 2.0 * (scene.platform.position(s) - p).norm() / lightspeed;
}

double delta_tau(const Scene& scene, const PointTarget& target, double s, double lightspeed) {
    const Vec3 r = scene.platform.position(s);
    return 2.0 * ((r - target.position(s)).norm() - (r - scene.reference_point).norm()) /
           lightspeed;
}

double gaussian_envelope(double t, double bandwidth) {
    const double bt = bandwidth * t;
    return std::exp(-0.5 * bt * bt);
}

namespace {

// Columns farther than this from a trace center get no contribution; the
// envelope there is below 1.4e-14 of the peak.
constexpr double kEnvelopeSupport = 8.0;

void check_window(const Scene& scene, const RadarConfig& cfg,
                  const std::vector<PointTarget>& targets, const char* kind) {
    for (std::size_t i = 0; i < targets.size(); ++i)
        for (std::size_t j = 0; j < cfg.slow_samples(); ++j) {
            const double s = cfg.slow_time(j);
            const double dt = delta_tau(scene, targets[i], s, cfg.lightspeed);
            if (dt < cfg.fast_t_min || dt > cfg.fast_t_max) {
                std::ostringstream msg;
                msg << "synthesize: fast-time window [" << cfg.fast_t_min << ", "
                    << cfg.fast_t_max << "] does not cover delta_tau=" << dt << " of " << kind
                    << " target " << i << " at slow time s=" << s;
                throw std::invalid_argument(msg.str());
            }
        }
}

void accumulate(ComplexMatrix& acc, const Scene& scene, const RadarConfig& cfg,
                const std::vector<PointTarget>& targets, Exec exec) {
    const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(cfg.slow_samples());
    const std::size_t cols = cfg.fast_samples();
    const double support = kEnvelopeSupport / (cfg.bandwidth * cfg.fast_dt);

#pragma omp parallel for schedule(static) num_threads(exec_threads(exec))
    for (std::ptrdiff_t j = 0; j < rows; ++j) {
        const double s = cfg.slow_time(static_cast<std::size_t>(j));
        auto row = acc.row(static_cast<std::size_t>(j));
        for (const PointTarget& t : targets) {
            const double dt = delta_tau(scene, t, s, cfg.lightspeed);
            const cplx phase = t.reflectivity *
                               std::exp(cplx(0.0, -cfg.carrier_omega0 * dt));
            const double center = (dt - cfg.fast_t_min) / cfg.fast_dt;
            const std::size_t l0 = static_cast<std::size_t>(
                std::max(0.0, std::ceil(center - support)));
            const std::size_t l1 = static_cast<std::size_t>(
                std::min(static_cast<double>(cols - 1), std::floor(center + support)));
            for (std::size_t l = l0; l <= l1 && l < cols; ++l)
                row[l] += phase * gaussian_envelope(cfg.fast_time(l) - dt, cfg.bandwidth);
        }
    }
}

} // namespace

DataMatrix synthesize(const Scene& scene, const RadarConfig& cfg, Exec exec) {
    cfg.validate();
    check_window(scene, cfg, scene.stationary, "stationary");
    check_window(scene, cfg, scene.movers, "moving");

    const std::size_t rows = cfg.slow_samples();
    const std::size_t cols = cfg.fast_samples();

    // Stationary and mover echoes accumulate into separate buffers summed
    // once at the end, which makes superposition over the two groups exact in
    // floating point as well.
    ComplexMatrix low(rows, cols);
    ComplexMatrix sparse(rows, cols);
    accumulate(low, scene, cfg, scene.stationary, exec);
    accumulate(sparse, scene, cfg, scene.movers, exec);

    DataMatrix out;
    out.values = ComplexMatrix(rows, cols);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values.data()[i] = low.data()[i] + sparse.data()[i];
    out.slow_axis.resize(rows);
    for (std::size_t j = 0; j < rows; ++j) out.slow_axis[j] = cfg.slow_time(j);
    out.fast_axis.resize(cols);
    for (std::size_t l = 0; l < cols; ++l) out.fast_axis[l] = cfg.fast_time(l);
    out.config = cfg;
    return out;
}

double column_support_estimate(const Scene& scene, const RadarConfig& cfg,
                               const PointTarget& target) {
    const double speed = target.velocity.norm();
    if (speed <= 0.0)
        throw std::invalid_argument("column_support_estimate: target speed must be nonzero");
    Vec3 los = scene.platform.position(0.0) - scene.reference_point;
    los.z = 0.0;
    const double los_norm = los.norm();
    if (los_norm <= 0.0)
        throw std::invalid_argument("column_support_estimate: platform is directly above the "
                                    "reference point, heading undefined");
    Vec3 vh = target.velocity;
    vh.z = 0.0;
    const double cos_alpha = los.dot(vh) / (los_norm * speed);
    return 4.0 * cfg.aperture_duration / cfg.fast_dt * speed / cfg.lightspeed * cos_alpha;
}

Scene make_scene(const SceneTemplate& tpl, const RadarConfig& cfg) {
    Scene scene;
    scene.platform.start = {tpl.platform_standoff, 0.0, tpl.platform_altitude};
    scene.platform.velocity = {0.0, cfg.platform_speed, 0.0};
    scene.reference_point = {0.0, 0.0, 0.0};

    std::mt19937_64 rng(tpl.seed);
    std::uniform_real_distribution<double> coord_x(-tpl.region_extent, tpl.region_extent);
    std::uniform_real_distribution<double> coord_y(-tpl.region_extent_y, tpl.region_extent_y);
    scene.stationary.reserve(tpl.stationary_count);
    for (std::size_t i = 0; i < tpl.stationary_count; ++i) {
        PointTarget t;
        const double x = coord_x(rng);
        const double y = coord_y(rng);
        t.position0 = {x, y, 0.0};
        t.velocity = {0.0, 0.0, 0.0};
        t.reflectivity = tpl.stationary_reflectivity;
        scene.stationary.push_back(t);
    }

    if (tpl.mover_speed > 0.0) {
        // Heading alpha is measured from the horizontal projection of the
        // line of sight r(0) - rho_o, which here is the x axis.
        PointTarget m;
        m.position0 = tpl.mover_position;
        m.velocity = {tpl.mover_speed * std::cos(tpl.mover_heading),
                      tpl.mover_speed * std::sin(tpl.mover_heading), 0.0};
        m.reflectivity = tpl.mover_reflectivity;
        scene.movers.push_back(m);
    }

    scene.validate(cfg);
    return scene;
}

} // namespace sartensor
