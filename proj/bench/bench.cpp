// Timings of the data-parallel kernels against their serial reference paths.
// The serial paths are the ground truth the tests compare against; this
// target reports what the OpenMP versions buy on the current machine.

#include "sartensor/imaging.hpp"
#include "sartensor/norms_analysis.hpp"
#include "sartensor/rpca.hpp"

#include <chrono>
#include <cstdio>
#include <numbers>

using namespace sartensor;

namespace {

template <class F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count());
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s %9.3f ms %9.3f ms %6.2fx\n", name, 1e3 * serial, 1e3 * parallel,
                serial / parallel);
}

} // namespace

int main() {
    std::printf("%-28s %12s %12s %7s  (%d threads)\n", "kernel", "serial", "openmp", "speedup",
                exec_threads(Exec::Parallel));

    const RadarConfig cfg = RadarConfig::desk_default(512);
    SceneTemplate tpl;
    tpl.stationary_count = 12;
    tpl.mover_speed = 1.0;
    tpl.mover_heading = std::numbers::pi / 2;
    tpl.seed = 3;
    const Scene scene = make_scene(tpl, cfg);

    report("synthesize 513x641",
           time_best_of(10, [&] { synthesize(scene, cfg, Exec::Serial); }),
           time_best_of(10, [&] { synthesize(scene, cfg, Exec::Parallel); }));

    const DataMatrix d = synthesize(scene, cfg);
    const TensorPlan plan =
        make_plan(cfg.aperture_duration, 0.05 * cfg.aperture_duration, 0.7, cfg.pulse_interval);
    const ComplexTensor3 a = slice_rows(d.values, plan);

    report("dft_axis3 27x641x65",
           time_best_of(3, [&] { dft_axis3(a, false, Exec::Serial); }),
           time_best_of(3, [&] { dft_axis3(a, false, Exec::Parallel); }));

    report("nuclear_fourier 27x641x65",
           time_best_of(3, [&] { nuclear_fourier(a, Exec::Serial); }),
           time_best_of(3, [&] { nuclear_fourier(a, Exec::Parallel); }));

    SolverConfig solver;
    solver.eta = default_eta(plan.rows_per_panel, d.values.cols(), plan.n3);
    solver.max_iters = 5;
    report("rpca_tensor (5 iterations)",
           time_best_of(2, [&] { rpca_tensor(a, solver, Exec::Serial); }),
           time_best_of(2, [&] { rpca_tensor(a, solver, Exec::Parallel); }));

    const GridSpec grid = GridSpec::centered({20.0, 30.0, 0.0}, 0.5, 96, 96);
    report("backproject 96x96",
           time_best_of(2, [&] { backproject(d, scene, grid, {}, Exec::Serial); }),
           time_best_of(2, [&] { backproject(d, scene, grid, {}, Exec::Parallel); }));

    SweepGrid sg;
    sg.sub_aperture_fractions = {0.05, 0.1, 0.2};
    sg.overlaps = {0.2, 0.5};
    sg.alphas = {0.0};
    report("sweep 3x2x1 cells",
           time_best_of(1, [&] { sweep(tpl, cfg, sg, Exec::Serial); }),
           time_best_of(1, [&] { sweep(tpl, cfg, sg, Exec::Parallel); }));

    return 0;
}
