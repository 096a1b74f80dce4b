#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sartensor/sar_model.hpp"
#include "test_helpers.hpp"

#include <numbers>

using namespace sartensor;

namespace {

RadarConfig small_config() {
    RadarConfig cfg = RadarConfig::desk_default(128);
    return cfg;
}

Scene single_target_scene(const RadarConfig& cfg, const PointTarget& t, bool moving) {
    SceneTemplate tpl;
    tpl.stationary_count = 0;
    tpl.mover_speed = 0.0;
    Scene scene = make_scene(tpl, cfg);
    if (moving)
        scene.movers.push_back(t);
    else
        scene.stationary.push_back(t);
    return scene;
}

} // namespace

TEST_CASE("travel_time matches the closed form") {
    Scene scene;
    scene.platform.start = {0.0, 0.0, 3000.0};
    scene.platform.velocity = {0.0, 200.0, 0.0};
    scene.reference_point = {0.0, 0.0, 0.0};

    CHECK(travel_time(scene, 0.0, {0.0, 0.0, 0.0}, 3.0e8) ==
          doctest::Approx(2.0e-5).epsilon(1e-14));
    CHECK(travel_time(scene, 0.0, scene.platform.start, 3.0e8) == 0.0);

    // independent norm evaluation at a generic point and slow time
    const double s = 1.7;
    const Vec3 p{120.0, -40.0, 5.0};
    const Vec3 r{0.0, 200.0 * s, 3000.0};
    const double want =
        2.0 * std::sqrt(std::pow(r.x - p.x, 2) + std::pow(r.y - p.y, 2) + std::pow(r.z - p.z, 2)) /
        3.0e8;
    CHECK(travel_time(scene, s, p, 3.0e8) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("delta_tau vanishes for a target at the reference point") {
    const RadarConfig cfg = small_config();
    SceneTemplate tpl;
    tpl.stationary_count = 0;
    tpl.mover_speed = 0.0;
    const Scene scene = make_scene(tpl, cfg);
    PointTarget t;
    t.position0 = scene.reference_point;
    for (double s : {-5.0, -1.0, 0.0, 2.5})
        CHECK(std::abs(delta_tau(scene, t, s, cfg.lightspeed)) < 1e-18);
}

TEST_CASE("delta_tau range over the aperture is larger for alpha=0 than alpha=pi/2") {
    const RadarConfig cfg = small_config();
    auto trace_range = [&](double alpha) {
        SceneTemplate tpl;
        tpl.stationary_count = 0;
        tpl.mover_speed = 15.0;
        tpl.mover_heading = alpha;
        const Scene scene = make_scene(tpl, cfg);
        double lo = 1e30, hi = -1e30;
        for (std::size_t j = 0; j < cfg.slow_samples(); ++j) {
            const double v = delta_tau(scene, scene.movers[0], cfg.slow_time(j), cfg.lightspeed);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        return hi - lo;
    };
    CHECK(trace_range(0.0) > 3.0 * trace_range(std::numbers::pi / 2.0));
}

TEST_CASE("synthesize: single stationary target at the reference point") {
    const RadarConfig cfg = small_config();
    PointTarget t;
    t.position0 = {0.0, 0.0, 0.0};
    t.reflectivity = 1.0;
    const Scene scene = single_target_scene(cfg, t, false);
    const DataMatrix d = synthesize(scene, cfg);

    REQUIRE(d.values.rows() == cfg.slow_count + 1);
    REQUIRE(d.values.cols() == cfg.fast_samples());
    for (std::size_t j = 0; j < d.values.rows(); ++j)
        for (std::size_t l = 0; l < d.values.cols(); ++l) {
            const double env = gaussian_envelope(d.fast_axis[l], cfg.bandwidth);
            const double want = env < 1e-13 ? 0.0 : env;
            CHECK(std::abs(d.values(j, l) - cplx(want, 0.0)) < 1e-12);
        }
}

TEST_CASE("synthesize: empty scene gives the zero matrix") {
    const RadarConfig cfg = small_config();
    SceneTemplate tpl;
    tpl.stationary_count = 0;
    tpl.mover_speed = 0.0;
    const DataMatrix d = synthesize(make_scene(tpl, cfg), cfg);
    for (const cplx& v : d.values.data()) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("synthesize is exactly linear in the targets") {
    const RadarConfig cfg = small_config();
    PointTarget a, b;
    a.position0 = {25.0, -10.0, 0.0};
    a.reflectivity = 1.0;
    b.position0 = {-40.0, 18.0, 0.0};
    b.reflectivity = 0.7;

    SUBCASE("two stationary targets") {
        Scene both = single_target_scene(cfg, a, false);
        both.stationary.push_back(b);
        const DataMatrix d_both = synthesize(both, cfg);
        const DataMatrix d_a = synthesize(single_target_scene(cfg, a, false), cfg);
        const DataMatrix d_b = synthesize(single_target_scene(cfg, b, false), cfg);
        for (std::size_t i = 0; i < d_both.values.size(); ++i)
            CHECK(d_both.values.data()[i] == d_a.values.data()[i] + d_b.values.data()[i]);
    }

    SUBCASE("stationary plus mover split") {
        SceneTemplate tpl;
        tpl.stationary_count = 10;
        tpl.mover_speed = 15.0;
        tpl.mover_heading = 0.0;
        tpl.mover_reflectivity = 0.1;
        const Scene scene = make_scene(tpl, cfg);
        const DataMatrix full = synthesize(scene, cfg);
        const DataMatrix low = synthesize(scene.stationary_only(), cfg);
        const DataMatrix sparse = synthesize(scene.movers_only(), cfg);
        for (std::size_t i = 0; i < full.values.size(); ++i)
            CHECK(full.values.data()[i] == low.values.data()[i] + sparse.values.data()[i]);
    }
}

TEST_CASE("synthesize serial and parallel agree bit for bit") {
    const RadarConfig cfg = small_config();
    SceneTemplate tpl;
    tpl.stationary_count = 7;
    tpl.mover_speed = 5.0;
    const Scene scene = make_scene(tpl, cfg);
    const DataMatrix par = synthesize(scene, cfg, Exec::Parallel);
    const DataMatrix ser = synthesize(scene, cfg, Exec::Serial);
    for (std::size_t i = 0; i < par.values.size(); ++i)
        CHECK(par.values.data()[i] == ser.values.data()[i]);
}

TEST_CASE("synthesize rejects a window that misses a target trace") {
    RadarConfig cfg = small_config();
    cfg.fast_t_min = -1e-8;
    cfg.fast_t_max = 1e-8; // far too narrow for a target 300 m off reference
    PointTarget t;
    t.position0 = {300.0, 0.0, 0.0};
    const Scene scene = single_target_scene(cfg, t, false);
    CHECK_THROWS_WITH_AS(synthesize(scene, cfg), doctest::Contains("does not cover"),
                         std::invalid_argument);
}

TEST_CASE("stationary rows vary much more slowly than a fast mover's") {
    const RadarConfig cfg = small_config();
    auto adjacent_row_variation = [](const DataMatrix& d) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j + 1 < d.values.rows(); ++j) {
            for (std::size_t l = 0; l < d.values.cols(); ++l) {
                num += std::norm(d.values(j + 1, l) - d.values(j, l));
                den += std::norm(d.values(j, l));
            }
        }
        return std::sqrt(num / den);
    };

    SceneTemplate stat_tpl;
    stat_tpl.stationary_count = 10;
    stat_tpl.mover_speed = 0.0;
    const double stat_var = adjacent_row_variation(synthesize(make_scene(stat_tpl, cfg), cfg));

    SceneTemplate mover_tpl;
    mover_tpl.stationary_count = 0;
    mover_tpl.mover_speed = 15.0;
    mover_tpl.mover_heading = 0.0;
    mover_tpl.mover_reflectivity = 1.0;
    const double mover_var = adjacent_row_variation(synthesize(make_scene(mover_tpl, cfg), cfg));

    CHECK(stat_var < 0.2 * mover_var);
}

TEST_CASE("changing the reference point shifts traces without reshaping them") {
    const RadarConfig cfg = small_config();
    PointTarget t;
    t.position0 = {35.0, -20.0, 0.0};
    Scene scene1 = single_target_scene(cfg, t, false);
    Scene scene2 = scene1;
    scene2.reference_point = {12.0, 0.0, 0.0};

    const DataMatrix d1 = synthesize(scene1, cfg);
    const DataMatrix d2 = synthesize(scene2, cfg);

    for (std::size_t j : {std::size_t(0), cfg.slow_samples() / 2, cfg.slow_samples() - 1}) {
        const double s = cfg.slow_time(j);
        const Vec3 r = scene1.platform.position(s);
        const double shift = 2.0 *
                             ((r - scene1.reference_point).norm() -
                              (r - scene2.reference_point).norm()) /
                             cfg.lightspeed;
        const long lag_expect = std::lround(shift / cfg.fast_dt);

        const std::size_t cols = d1.values.cols();
        long best_lag = 0;
        double best = -1.0, e1 = 0.0, e2 = 0.0;
        for (std::size_t l = 0; l < cols; ++l) {
            e1 += std::pow(std::abs(d1.values(j, l)), 2);
            e2 += std::pow(std::abs(d2.values(j, l)), 2);
        }
        for (long lag = lag_expect - 40; lag <= lag_expect + 40; ++lag) {
            double acc = 0.0;
            for (std::size_t l = 0; l < cols; ++l) {
                const long k = static_cast<long>(l) + lag;
                if (k < 0 || k >= static_cast<long>(cols)) continue;
                acc += std::abs(d1.values(j, l)) *
                       std::abs(d2.values(j, static_cast<std::size_t>(k)));
            }
            if (acc > best) {
                best = acc;
                best_lag = lag;
            }
        }
        CHECK(std::abs(best_lag - lag_expect) <= 1);
        CHECK(best / std::sqrt(e1 * e2) > 0.98);
    }
}

TEST_CASE("column_support_estimate") {
    RadarConfig cfg;
    cfg.aperture_duration = 11.5;
    cfg.fast_dt = 1e-8;
    cfg.lightspeed = 3.0e8;
    cfg.slow_count = 512;
    cfg.pulse_interval = 11.5 / 512.0;

    SceneTemplate tpl;
    tpl.stationary_count = 0;
    tpl.mover_speed = 15.0;
    tpl.mover_heading = 0.0;
    Scene scene = make_scene(tpl, cfg);

    SUBCASE("paper-style magnitude at alpha=0") {
        CHECK(column_support_estimate(scene, cfg, scene.movers[0]) ==
              doctest::Approx(230.0).epsilon(1e-12));
    }
    SUBCASE("alpha=pi/2 gives zero") {
        scene.movers[0].velocity = {0.0, 15.0, 0.0};
        CHECK(column_support_estimate(scene, cfg, scene.movers[0]) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("linearity in the speed") {
        const double n1 = column_support_estimate(scene, cfg, scene.movers[0]);
        scene.movers[0].velocity = scene.movers[0].velocity * 2.0;
        CHECK(column_support_estimate(scene, cfg, scene.movers[0]) ==
              doctest::Approx(2.0 * n1).epsilon(1e-12));
    }
    SUBCASE("zero speed is rejected") {
        scene.movers[0].velocity = {0.0, 0.0, 0.0};
        CHECK_THROWS_AS(column_support_estimate(scene, cfg, scene.movers[0]),
                        std::invalid_argument);
    }
}
