// Rough single-thread throughput check for the dense kernels, at the
// shapes the training loop actually uses. Not part of the test suite.

#include <chrono>
#include <cstdio>

#include "disent/matrix.hpp"
#include "disent/rng.hpp"

using namespace disent;

static double bench(const char* name, std::size_t m, std::size_t k, std::size_t n, bool nt) {
    RngState rng = RngState::seeded(1);
    DenseMatrix A = DenseMatrix::gaussian(m, k, 1.0, rng);
    DenseMatrix B = nt ? DenseMatrix::gaussian(n, k, 1.0, rng) : DenseMatrix::gaussian(k, n, 1.0, rng);
    DenseMatrix C;
    // warmup
    if (nt) gemm_nt(A, B, C); else gemm_nn(A, B, C);
    int reps = static_cast<int>(std::max<std::size_t>(1, (1ull << 31) / (2 * m * k * n)));
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) {
        if (nt) gemm_nt(A, B, C); else gemm_nn(A, B, C);
    }
    auto t1 = std::chrono::steady_clock::now();
    double sec = std::chrono::duration<double>(t1 - t0).count();
    double gflops = 2.0 * m * k * n * reps / sec / 1e9;
    std::printf("%-10s m=%5zu k=%5zu n=%5zu reps=%4d  %7.2f GFLOP/s\n", name, m, k, n, reps, gflops);
    return gflops;
}

int main() {
    // encoder layer 1 forward: X(B x 4096) * W(H x 4096)^T
    bench("nt fwd", 128, 4096, 256, true);
    bench("nt fwd", 128, 4096, 1200, true);
    // decoder output forward
    bench("nt fwd", 128, 256, 4096, true);
    // dX = dY * W
    bench("nn dX", 128, 256, 4096, false);
    bench("nn dX", 128, 4096, 256, false);
    // dW = dY^T * X as nn after transpose
    bench("nn dW", 256, 128, 4096, false);
    bench("nn dW", 4096, 128, 256, false);
    // MNIST shapes
    bench("nt fwd", 128, 784, 500, true);
    bench("nn dW", 500, 128, 784, false);
    return 0;
}
