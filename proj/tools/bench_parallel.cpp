// Times the OpenMP kernels against their serial reference implementations
// and checks that both produce identical bytes.

#include <chrono>
#include <cstdio>
#include <functional>

#include "gaze3d/depth.hpp"
#include "gaze3d/rng.hpp"
#include "gaze3d/scene.hpp"
#include "gaze3d/svr.hpp"
#include "gaze3d/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace gaze3d;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    // warm-up
    fn();
    const auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; comparing identical serial paths\n");
#endif
    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        const SceneSpec scene = scene1_spec();
        const SubjectParams subject = make_subjects(1, 11)[0];
        const NoiseSpec noise{0.5, 0.1, 11};
        Dataset a, b;
        const double ts = time_ms([&] { a = generate_session_serial(scene, subject, noise, 32); }, 3);
        const double tp = time_ms([&] { b = generate_session(scene, subject, noise, 32); }, 3);
        row("generate_session", ts, tp, dataset_to_csv(a) == dataset_to_csv(b));
    }

    {
        Rng rng(3);
        Matrix Z(1200, 23);
        for (auto& v : Z.data) v = rng.gaussian();
        Matrix a, b;
        const double ts = time_ms([&] { a = rbf_kernel_matrix_serial(Z, 4.0); }, 3);
        const double tp = time_ms([&] { b = rbf_kernel_matrix(Z, 4.0); }, 3);
        row("rbf_kernel_matrix", ts, tp, a.data == b.data);
    }

    {
        Rng rng(4);
        Matrix X(400, 8);
        for (auto& v : X.data) v = rng.gaussian();
        std::vector<double> y(X.rows);
        for (std::size_t i = 0; i < X.rows; ++i) y[i] = std::sin(X(i, 0)) + 0.2 * X(i, 1);
        const SvrModel model = svr_fit(X, y);
        Matrix Q(20000, 8);
        for (auto& v : Q.data) v = rng.gaussian();
        std::vector<double> a, b;
        const double ts = time_ms([&] { a = svr_predict_batch_serial(model, Q); }, 3);
        const double tp = time_ms([&] { b = svr_predict_batch(model, Q); }, 3);
        row("svr_predict_batch", ts, tp, a == b);
    }

    {
        Rng rng(5);
        DepthTable table;
        table.unit_name = "cm";
        table.X = Matrix(4000, DepthFeatureRow::kFeatureCount);
        for (auto& v : table.X.data) v = rng.gaussian();
        table.z.resize(table.X.rows);
        table.subject_id.assign(table.X.rows, 0);
        table.plane_index.assign(table.X.rows, 0);
        for (std::size_t i = 0; i < table.X.rows; ++i) {
            table.z[i] = 2.0 * table.X(i, 2) + table.X(i, 6) + 0.1 * rng.gaussian();
        }
        ImportanceReport a, b;
        const double ts = time_ms([&] { a = gini_importance_serial(table, 5); }, 1);
        const double tp = time_ms([&] { b = gini_importance(table, 5); }, 1);
        row("gini_importance", ts, tp, a.importance == b.importance);
    }
    return 0;
}
