#include <benchmark/benchmark.h>

#include <Eigen/Core>
#include <cstdlib>

int main(int argc, char **argv) {
    if (const char *env = std::getenv("TADM_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) Eigen::setNbThreads(n);
    }
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}
