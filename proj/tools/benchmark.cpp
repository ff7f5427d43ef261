// Compares the OpenMP kernels against their serial references: full-law
// enumeration (exact and float) and batch chain sampling.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "regcomp/sampler.hpp"

using namespace regcomp;

namespace {

template <class F>
double time_s(F&& f) {
    auto start = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class S>
void bench_enumeration(const char* label, int n) {
    auto q = two_param_decrement<S>(S(1) / S(2), S(1) / S(2), n);
    double t_serial = time_s([&] { (void)enumerate_law_serial(q, n); });
    double t_par = time_s([&] { (void)enumerate_law(q, n); });
    std::printf("%-28s n=%2d  serial %8.3fs  parallel %8.3fs  speedup %.2fx\n", label, n,
                t_serial, t_par, t_serial / t_par);
}

void bench_sampling(int n, std::uint64_t count) {
    auto q = two_param_decrement<Rational>(Rational(1, 2), Rational(1, 2), n);
    SamplerTable<Rational> table(q);
    double t_serial = time_s([&] { (void)sample_batch_serial(table, n, count, 12345); });
    double t_par = time_s([&] { (void)sample_batch(table, n, count, 12345); });
    std::printf("%-28s n=%2d  serial %8.3fs  parallel %8.3fs  speedup %.2fx  (%llu draws)\n",
                "chain sampling", n, t_serial, t_par, t_serial / t_par,
                static_cast<unsigned long long>(count));
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; parallel kernels run serially\n");
#endif
    bench_enumeration<Rational>("law enumeration (exact)", 16);
    bench_enumeration<double>("law enumeration (float)", 16);
    bench_sampling(12, 2000000);
    return 0;
}
