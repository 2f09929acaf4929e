#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "disent/gradcheck.hpp"
#include "disent/matrix.hpp"
#include "disent/nn.hpp"
#include "disent/rng.hpp"

using namespace disent;

TEST_CASE("affine_forward: identity, constant, forced arithmetic") {
    DenseMatrix I = DenseMatrix::identity(2);
    std::vector<double> b0 = {0, 0};
    std::vector<double> x = {3, -1};
    REQUIRE(affine_forward(I, b0, x) == std::vector<double>{3, -1});

    DenseMatrix Z(1, 2, 0.0);
    std::vector<double> b5 = {5};
    REQUIRE(affine_forward(Z, b5, x) == std::vector<double>{5});

    DenseMatrix W(1, 1);
    W(0, 0) = 2;
    std::vector<double> b1 = {1}, x3 = {3};
    REQUIRE(affine_forward(W, b1, x3) == std::vector<double>{7});
}

TEST_CASE("affine dimension mismatch names both shapes") {
    DenseMatrix W(2, 3);
    std::vector<double> b = {0, 0}, x = {1, 2};  // x too short
    try {
        affine_forward(W, b, x);
        FAIL("expected DimError");
    } catch (const DimError& e) {
        const std::string msg = e.what();
        REQUIRE(msg.find("2x3") != std::string::npos);
        REQUIRE(msg.find("2x1") != std::string::npos);
    }
}

TEST_CASE("affine_backward trivial cases") {
    RngState rng = RngState::seeded(11);
    DenseMatrix W = DenseMatrix::gaussian(3, 4, 1.0, rng);
    std::vector<double> b = rng.normal_vector(3);
    std::vector<double> x = rng.normal_vector(4);

    std::vector<double> zero(3, 0.0);
    AffineGrads g0 = affine_backward(W, b, x, zero);
    for (double v : g0.grad_w.flat()) REQUIRE(v == 0.0);
    for (double v : g0.grad_b) REQUIRE(v == 0.0);
    for (double v : g0.grad_x) REQUIRE(v == 0.0);

    std::vector<double> u = rng.normal_vector(3);
    AffineGrads g = affine_backward(W, b, x, u);
    REQUIRE(g.grad_b == u);  // d(Wx+b)/db = I
}

TEST_CASE("affine_backward matches central finite differences on a random 4x3 case") {
    RngState rng = RngState::seeded(42);
    DenseMatrix W = DenseMatrix::gaussian(4, 3, 1.0, rng);
    std::vector<double> b = rng.normal_vector(4);
    std::vector<double> x = rng.normal_vector(3);
    std::vector<double> u = rng.normal_vector(4);  // fixed cotangent

    AffineGrads g = affine_backward(W, b, x, u);

    // pack all parameters (W, b, x) into one vector; loss = u . (Wx + b)
    std::vector<double> params;
    params.insert(params.end(), W.flat().begin(), W.flat().end());
    params.insert(params.end(), b.begin(), b.end());
    params.insert(params.end(), x.begin(), x.end());
    std::vector<double> analytic;
    analytic.insert(analytic.end(), g.grad_w.flat().begin(), g.grad_w.flat().end());
    analytic.insert(analytic.end(), g.grad_b.begin(), g.grad_b.end());
    analytic.insert(analytic.end(), g.grad_x.begin(), g.grad_x.end());

    auto loss = [&](std::span<const double> p) {
        DenseMatrix Wp(4, 3);
        std::copy(p.begin(), p.begin() + 12, Wp.flat().begin());
        std::vector<double> bp(p.begin() + 12, p.begin() + 16);
        std::vector<double> xp(p.begin() + 16, p.begin() + 19);
        std::vector<double> y = affine_forward(Wp, bp, xp);
        double s = 0;
        for (int i = 0; i < 4; ++i) s += u[i] * y[i];
        return s;
    };
    GradReport rep = grad_check(loss, params, analytic, 1e-5, 1e-6);
    INFO("max rel err " << rep.max_relative_error);
    REQUIRE(rep.passed);
}

TEST_CASE("gemm_nn and gemm_nt agree with a naive triple loop") {
    RngState rng = RngState::seeded(77);
    for (auto [m, k, n] : {std::array<std::size_t, 3>{5, 7, 9},
                           std::array<std::size_t, 3>{1, 1, 1},
                           std::array<std::size_t, 3>{17, 33, 8},
                           std::array<std::size_t, 3>{64, 100, 31}}) {
        DenseMatrix A = DenseMatrix::gaussian(m, k, 1.0, rng);
        DenseMatrix B = DenseMatrix::gaussian(k, n, 1.0, rng);
        DenseMatrix ref(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0;
                for (std::size_t p = 0; p < k; ++p) s += A(i, p) * B(p, j);
                ref(i, j) = s;
            }
        DenseMatrix C1, C2;
        gemm_nn(A, B, C1);
        gemm_nt(A, transposed(B), C2);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                REQUIRE(C1(i, j) == Catch::Approx(ref(i, j)).margin(1e-9));
                REQUIRE(C2(i, j) == Catch::Approx(ref(i, j)).margin(1e-9));
            }
    }
}

TEST_CASE("gemm rejects mismatched shapes") {
    DenseMatrix A(2, 3), B(4, 5), C;
    REQUIRE_THROWS_AS(gemm_nn(A, B, C), DimError);
    REQUIRE_THROWS_AS(gemm_nt(A, B, C), DimError);
}

TEST_CASE("bce_with_logits closed forms") {
    std::vector<double> g(1);

    // logit 0, target 1 -> ln 2; gradient sigmoid(0) - 1 = -0.5
    std::vector<double> l = {0.0}, t = {1.0};
    REQUIRE(bce_with_logits(l, t, g) == Catch::Approx(std::log(2.0)).margin(1e-15));
    REQUIRE(g[0] == Catch::Approx(-0.5).margin(1e-15));

    // saturation: logit +50 with target 1 is numerically ~exp(-50)
    l = {50.0};
    REQUIRE(bce_with_logits(l, t) < 1e-8);

    // agreement with the naive formula at safe magnitudes
    RngState rng = RngState::seeded(8);
    for (int i = 0; i < 200; ++i) {
        const double logit = 6.0 * (rng.next_uniform() - 0.5);
        const double target = rng.next_uniform();
        std::vector<double> ll = {logit}, tt = {target};
        const double stable = bce_with_logits(ll, tt);
        const double p = 1.0 / (1.0 + std::exp(-logit));
        const double naive = -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
        REQUIRE(stable == Catch::Approx(naive).margin(1e-10));
    }
}

TEST_CASE("bce_with_logits stays finite at extreme logits") {
    std::vector<double> l = {1000.0, -1000.0}, t = {0.0, 1.0}, g(2);
    const double loss = bce_with_logits(l, t, g);
    REQUIRE(std::isfinite(loss));
    REQUIRE(std::isfinite(g[0]));
    REQUIRE(std::isfinite(g[1]));
    REQUIRE(loss == Catch::Approx(2000.0).margin(1e-9));
}

TEST_CASE("bce_with_logits length mismatch") {
    std::vector<double> l = {0.0, 1.0}, t = {1.0};
    REQUIRE_THROWS_AS(bce_with_logits(l, t), DimError);
}

TEST_CASE("bce gradient matches finite differences on random vectors") {
    RngState rng = RngState::seeded(9);
    std::vector<double> logits(16), targets(16), grad(16);
    for (int i = 0; i < 16; ++i) {
        logits[i] = 4.0 * (rng.next_uniform() - 0.5);
        targets[i] = rng.next_uniform();
    }
    bce_with_logits(logits, targets, grad);
    auto loss = [&](std::span<const double> p) {
        return bce_with_logits(p, targets);
    };
    GradReport rep = grad_check(loss, logits, grad, 1e-5, 1e-4);
    REQUIRE(rep.passed);
}

TEST_CASE("grad_check: quadratic, constant, and a deliberately wrong gradient") {
    // f(theta) = theta^2 at theta = 3; central differences are exact on
    // quadratics up to rounding
    std::vector<double> theta = {3.0};
    std::vector<double> analytic = {6.0};
    auto f = [](std::span<const double> p) { return p[0] * p[0]; };
    GradReport rep = grad_check(f, theta, analytic, 1e-5, 1e-7);
    REQUIRE(rep.max_relative_error < 1e-7);
    REQUIRE(rep.passed);

    // constant function: both sides zero
    std::vector<double> zero = {0.0};
    auto c = [](std::span<const double>) { return 42.0; };
    GradReport repc = grad_check(c, theta, zero, 1e-5, 1e-7);
    REQUIRE(repc.max_relative_error == 0.0);

    // gradient off by 2x: rel = |a - n| / max(|a|, |n|) = |12 - 6| / 12 = 1/2,
    // far above any sane tolerance
    std::vector<double> wrong = {12.0};
    GradReport repw = grad_check(f, theta, wrong, 1e-5, 1e-4);
    REQUIRE(repw.max_relative_error > 0.3);
    REQUIRE_FALSE(repw.passed);
}

TEST_CASE("grad_check surfaces non-finite losses") {
    std::vector<double> theta = {1.0};
    std::vector<double> g = {0.0};
    auto bad = [](std::span<const double> p) { return std::log(-1.0 + 0.0 * p[0]); };
    REQUIRE_THROWS_AS(grad_check(bad, theta, g, 1e-5, 1e-4), NumericError);
}

TEST_CASE("relu forward/backward") {
    std::vector<double> v = {-1.0, 0.0, 2.5};
    relu_inplace(v);
    REQUIRE(v == std::vector<double>{0.0, 0.0, 2.5});
    std::vector<double> grad = {1.0, 1.0, 1.0};
    relu_backward_inplace(v, grad);
    REQUIRE(grad == std::vector<double>{0.0, 0.0, 1.0});
}
