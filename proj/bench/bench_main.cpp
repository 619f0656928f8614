// Serial vs OpenMP timing for the batch kernels: equilibrium grid scans,
// outcome sweeps, and separatrix scan lines. Both modes must produce
// bit-identical results; the benchmark verifies that while timing them.
//
// usage: fearpp_bench [quick]

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "fearpp/dynamics.hpp"
#include "fearpp/equilibria.hpp"
#include "fearpp/manifolds.hpp"
#include "fearpp/parallel.hpp"
#include "fearpp/presets.hpp"

using namespace fearpp;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int mismatches = 0;

void row(const char* name, double serial_s, double omp_s, bool identical) {
    std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %.2fx   results %s\n", name,
                serial_s, omp_s, serial_s / omp_s, identical ? "identical" : "DIFFER");
    if (!identical) ++mismatches;
}

template <typename Fn>
double timed(par::Mode mode, Fn&& fn) {
    par::default_mode() = mode;
    const auto t0 = Clock::now();
    fn();
    return seconds_since(t0);
}

void bench_grid_scan(int sweeps) {
    ModelParams P = preset_params("fig2");
    auto run = [&](std::vector<double>& out) {
        out.clear();
        for (int i = 0; i < sweeps; ++i) {
            ModelParams Q = P;
            Q.k = 0.04 * i / double(sweeps);
            for (const auto& eq : find_coexistence(Q, 8192).equilibria) {
                out.push_back(eq.location.u);
                out.push_back(eq.location.v);
            }
        }
    };
    std::vector<double> a, b;
    const double ts = timed(par::Mode::Serial, [&] { run(a); });
    const double tp = timed(par::Mode::OpenMP, [&] { run(b); });
    row("equilibrium grid scan", ts, tp, a == b);
}

void bench_sweep(int n) {
    ModelParams P = preset_params("fig6");
    IntegratorConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-11;
    cfg.t_end = 400.0;
    auto run = [&](std::vector<int>& out) {
        out.assign(n * n, -1);
        par::for_each_index(static_cast<std::size_t>(n) * n, [&](std::size_t idx) {
            ModelParams Q = P;
            Q.k = 0.05 * (double(idx % n) + 0.5) / n;
            Q.c = 2.0 + 1.0 * (double(idx / n) + 0.5) / n;
            out[idx] = static_cast<int>(classify_outcome(Q, {4.8, 8.3}, cfg).kind);
        });
    };
    std::vector<int> a, b;
    const double ts = timed(par::Mode::Serial, [&] { run(a); });
    const double tp = timed(par::Mode::OpenMP, [&] { run(b); });
    row("outcome sweep", ts, tp, a == b);
}

void bench_separatrix(int lines) {
    ModelParams P = preset_params("fig6");
    ProbeConfig cfg;
    cfg.scan_lines = lines;
    cfg.state_tol = 1e-5;
    auto run = [&](std::vector<double>& out) {
        out.clear();
        Separatrix sep = separatrix(P, cfg);
        for (const auto& pt : sep.polyline) {
            out.push_back(pt.u);
            out.push_back(pt.v);
        }
    };
    std::vector<double> a, b;
    const double ts = timed(par::Mode::Serial, [&] { run(a); });
    const double tp = timed(par::Mode::OpenMP, [&] { run(b); });
    row("separatrix scan lines", ts, tp, a == b);
}

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "quick") == 0;
#ifdef _OPENMP
    std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp NOT available; both columns run serially\n");
#endif
    bench_grid_scan(quick ? 40 : 400);
    bench_sweep(quick ? 6 : 16);
    bench_separatrix(quick ? 12 : 48);
    if (mismatches) {
        std::printf("FAIL: %d kernel(s) gave mode-dependent results\n", mismatches);
        return 1;
    }
    return 0;
}
