// Timing harness comparing the parallel kernels against their serial
// reference implementations. Build target only; not registered with ctest.
#include "hlsum/forms.hpp"
#include "hlsum/norms.hpp"
#include "hlsum/parallel.hpp"
#include "hlsum/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

using namespace hlsum;

namespace {

MultilinearForm random_form(int degree, int dim, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const std::int64_t size = MultilinearForm::checked_dense_size(degree, dim);
    std::vector<double> coefficients(static_cast<std::size_t>(size));
    for (double& c : coefficients) c = rng.next_gaussian();
    return MultilinearForm::dense(degree, dim, std::move(coefficients));
}

template <typename F>
double time_seconds(int repeats, F&& body) {
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repeats; ++i) body();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count() / repeats;
}

// The production kernels use fixed-size compensated blocks (for worker-count
// determinism), so they agree with the naive references to rounding, not
// bitwise; report the relative gap alongside the timings.
void report(const char* label, double serial, double parallel, double check_serial,
            double check_parallel) {
    const double gap = std::fabs(check_serial - check_parallel) /
                       std::max(1.0, std::fabs(check_serial));
    std::printf("%-34s serial %10.4f ms   parallel %10.4f ms   speedup %7.2fx   rel gap %.2e\n",
                label, serial * 1e3, parallel * 1e3, serial / parallel, gap);
}

}  // namespace

int main() {
    std::printf("workers available: %d\n\n", max_threads());

    {
        const MultilinearForm T = random_form(2, 320, 1);
        const BlockPattern pattern({1, 1});
        const double r = 0.8;
        double got_serial = 0.0;
        double got_parallel = 0.0;
        const double ts = time_seconds(
            5, [&] { got_serial = blocked_power_sum_serial(T, pattern, r); });
        const double tp =
            time_seconds(5, [&] { got_parallel = blocked_power_sum(T, pattern, r); });
        report("blocked power sum (n=320, m=2)", ts, tp, got_serial, got_parallel);
    }
    {
        const MultilinearForm T = random_form(3, 44, 2);
        const BlockPattern pattern({2, 1});
        const double r = 1.3;
        double got_serial = 0.0;
        double got_parallel = 0.0;
        const double ts = time_seconds(
            5, [&] { got_serial = blocked_power_sum_serial(T, pattern, r); });
        const double tp =
            time_seconds(5, [&] { got_parallel = blocked_power_sum(T, pattern, r); });
        report("blocked power sum (n=44, m=3)", ts, tp, got_serial, got_parallel);
    }
    {
        const MultilinearForm T = random_form(2, 20, 3);
        double got_serial = 0.0;
        double got_parallel = 0.0;
        const double ts =
            time_seconds(1, [&] { got_serial = exact_norm_sup_serial(T).value; });
        const double tp = time_seconds(3, [&] { got_parallel = exact_norm_sup(T).value; });
        report("exhaustive sup norm (n=20, m=2)", ts, tp, got_serial, got_parallel);
    }
    {
        const MultilinearForm T = random_form(3, 10, 4);
        double got_serial = 0.0;
        double got_parallel = 0.0;
        const double ts =
            time_seconds(1, [&] { got_serial = exact_norm_sup_serial(T).value; });
        const double tp = time_seconds(3, [&] { got_parallel = exact_norm_sup(T).value; });
        report("exhaustive sup norm (n=10, m=3)", ts, tp, got_serial, got_parallel);
    }
    return 0;
}
