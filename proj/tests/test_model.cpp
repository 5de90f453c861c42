#include <doctest.h>

#include <cmath>
#include <deblur/model.hpp>
#include <random>
#include <stdexcept>

using namespace deblur;

namespace {

Image delta12(std::size_t i) { return generate_image(GeneratorDescriptor::delta(i, 1.0), 12); }

}  // namespace

TEST_CASE("built-in kernels have the documented taps") {
    const Kernel k3 = kernel_3bin();
    CHECK(k3.tap_count() == 3);
    CHECK(k3.weight_at(0) == 0.550);
    CHECK(k3.weight_at(1) == 0.225);
    CHECK(k3.weight_at(-1) == 0.225);
    CHECK(k3.weight_at(2) == 0.0);
    CHECK(k3.max_abs_offset() == 1);
    CHECK(k3.is_symmetric());

    const Kernel k5 = kernel_5bin();
    CHECK(k5.tap_count() == 5);
    CHECK(k5.weight_at(0) == 0.250);
    CHECK(k5.weight_at(1) == 0.250);
    CHECK(k5.weight_at(-1) == 0.250);
    CHECK(k5.weight_at(2) == 0.125);
    CHECK(k5.weight_at(-2) == 0.125);
    CHECK(k5.max_abs_offset() == 2);
    CHECK(k5.is_symmetric());

    const Kernel id = kernel_identity();
    CHECK(id.tap_count() == 1);
    CHECK(id.weight_at(0) == 1.0);

    for (const Kernel& k : {k3, k5, id}) {
        double total = 0.0;
        for (const auto& [offset, weight] : k.taps()) total += weight;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("kernel construction rejects bad weights") {
    CHECK_THROWS_AS(Kernel::from_taps({{0, 0.5}, {1, -0.1}, {-1, 0.6}}), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::from_taps({{0, 0.5}, {1, 0.4}}), std::invalid_argument);
    CHECK_THROWS_AS(Kernel::from_taps({}), std::invalid_argument);
    const Kernel lopsided = Kernel::from_taps({{0, 0.5}, {1, 0.5}});
    CHECK_FALSE(lopsided.is_symmetric());
}

TEST_CASE("circulant matrix places weights at cyclic offsets") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    REQUIRE(t.rows() == 12);
    REQUIRE(t.cols() == 12);
    // Column 5 holds the point-spread of a source at pixel 5.
    CHECK(t(3, 5) == 0.125);
    CHECK(t(4, 5) == 0.250);
    CHECK(t(5, 5) == 0.250);
    CHECK(t(6, 5) == 0.250);
    CHECK(t(7, 5) == 0.125);
    CHECK(t(8, 5) == 0.0);
    CHECK(t(0, 5) == 0.0);
    // Wrap-around: a source at pixel 11 spills onto pixels 0 and 1.
    CHECK(t(0, 11) == 0.250);
    CHECK(t(1, 11) == 0.125);

    for (std::size_t i = 0; i < 12; ++i) {
        double col = 0.0, row = 0.0;
        for (std::size_t j = 0; j < 12; ++j) {
            col += t(j, i);
            row += t(i, j);
        }
        CHECK(col == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    }

    CHECK(circulant_matrix(kernel_identity(), 4) == Matrix::identity(4));
}

TEST_CASE("circulant matrix rejects dimensions too small for the support") {
    CHECK_THROWS_AS(circulant_matrix(kernel_5bin(), 4), std::invalid_argument);
    CHECK_THROWS_AS(circulant_matrix(kernel_3bin(), 2), std::invalid_argument);
    CHECK_THROWS_AS(circulant_matrix(Kernel::from_taps({{0, 0.5}, {6, 0.5}}), 5),
                    std::invalid_argument);
    CHECK_NOTHROW(circulant_matrix(kernel_5bin(), 5));
    CHECK_NOTHROW(circulant_matrix(kernel_3bin(), 3));
}

TEST_CASE("blurring a point source reproduces the kernel column") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    const Image g = blur(t, delta12(5));
    const Image expected = {0, 0, 0, 0.125, 0.250, 0.250, 0.250, 0.125, 0, 0, 0, 0};
    CHECK(max_abs_diff(g, expected) == 0.0);
}

TEST_CASE("blurring the flat-top strip gives the staircase profile") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    const Image f = generate_image(GeneratorDescriptor::ramp(5, 4, 1.0), 12);
    const Image g = blur(t, f);
    const Image expected = {0, 0, 0, 0.125, 0.375, 0.625, 0.875, 0.875, 0.625, 0.375, 0.125, 0};
    CHECK(max_abs_diff(g, expected) == 0.0);
}

TEST_CASE("uniform images are fixed points of blurring") {
    for (const Kernel& k : {kernel_3bin(), kernel_5bin()}) {
        const Matrix t = circulant_matrix(k, 12);
        const Image g = blur(t, Image(12, 0.7));
        CHECK(max_abs_diff(g, Image(12, 0.7)) <= 1e-14);
    }
}

TEST_CASE("blurring conserves total intensity") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    for (int trial = 0; trial < 20; ++trial) {
        Image f(12);
        for (double& v : f) v = dist(rng);
        CHECK(std::abs(sum(blur(t, f)) - sum(f)) <= 1e-12);
    }
}

TEST_CASE("blur rejects mismatched dimensions") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    CHECK_THROWS_AS(blur(t, Image(11, 0.0)), std::invalid_argument);
}

TEST_CASE("shift and reflect move pixels cyclically") {
    const Image x = {1.0, 2.0, 3.0, 4.0};
    CHECK(shift_image(x, 1) == Image{4.0, 1.0, 2.0, 3.0});
    CHECK(shift_image(x, -1) == Image{2.0, 3.0, 4.0, 1.0});
    CHECK(shift_image(x, 5) == shift_image(x, 1));
    CHECK(reflect_image(x, 0) == Image{1.0, 4.0, 3.0, 2.0});
    CHECK(reflect_image(x, 1) == Image{3.0, 2.0, 1.0, 4.0});
}

TEST_CASE("blurring commutes with cyclic shifts") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    const Image f = generate_image(GeneratorDescriptor::background_plus_delta(0.3, 2, 0.5), 12);
    for (long s : {1L, 5L, -3L, 12L}) {
        const Image lhs = blur(t, shift_image(f, s));
        const Image rhs = shift_image(blur(t, f), s);
        CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("blurring with a symmetric kernel commutes with reflection") {
    for (const Kernel& k : {kernel_3bin(), kernel_5bin()}) {
        const Matrix t = circulant_matrix(k, 12);
        const Image f = generate_image(GeneratorDescriptor::ramp(9, 5, 0.8), 12);
        for (std::size_t c : {std::size_t{0}, std::size_t{4}, std::size_t{11}}) {
            const Image lhs = blur(t, reflect_image(f, c));
            const Image rhs = reflect_image(blur(t, f), c);
            CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
        }
    }
}

TEST_CASE("identity kernel blurring is the identity map") {
    const Matrix t = circulant_matrix(kernel_identity(), 12);
    const Image f = generate_image(GeneratorDescriptor::ramp(3, 6, 0.5), 12);
    CHECK(blur(t, f) == f);
}

TEST_CASE("generators realize the documented test images") {
    const Image d = delta12(5);
    for (std::size_t i = 0; i < 12; ++i) CHECK(d[i] == (i == 5 ? 1.0 : 0.0));

    const Image r = generate_image(GeneratorDescriptor::ramp(5, 4, 1.0), 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(r[i] == ((i >= 5 && i <= 8) ? 1.0 : 0.0));

    // The strip wraps around the end of the lattice.
    const Image wrapped = generate_image(GeneratorDescriptor::ramp(10, 4, 0.5), 12);
    for (std::size_t i = 0; i < 12; ++i)
        CHECK(wrapped[i] == ((i >= 10 || i <= 1) ? 0.5 : 0.0));

    const Image b = generate_image(GeneratorDescriptor::background_plus_delta(0.75, 5, 0.25), 12);
    for (std::size_t i = 0; i < 12; ++i) CHECK(b[i] == (i == 5 ? 1.0 : 0.75));

    const Image c = generate_image(GeneratorDescriptor::custom({0.1, 0.2, 0.3}), 3);
    CHECK(c == Image{0.1, 0.2, 0.3});
}

TEST_CASE("generators reject out-of-range parameters") {
    using G = GeneratorDescriptor;
    CHECK_THROWS_AS(generate_image(G::delta(12, 1.0), 12), std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::delta(5, 1.5), 12), std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::delta(5, -0.1), 12), std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::ramp(5, 0, 1.0), 12), std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::ramp(5, 13, 1.0), 12), std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::ramp(12, 2, 1.0), 12), std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::background_plus_delta(1.2, 5, 0.0), 12),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::background_plus_delta(0.8, 5, 0.3), 12),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::background_plus_delta(0.8, 5, -0.1), 12),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::custom({0.1, 0.2}), 3), std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::custom({0.1, 0.2, std::nan("")}), 3),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_image(G::delta(0, 1.0), 0), std::invalid_argument);
}

TEST_CASE("grayscale check flags out-of-range values and honors slack") {
    CHECK(is_within_grayscale({0.0, 0.5, 1.0}));
    CHECK_FALSE(is_within_grayscale({0.0, 1.0000001}));
    CHECK(is_within_grayscale({0.0, 1.0000001}, 1e-6));
    CHECK_FALSE(is_within_grayscale({-0.1, 0.5}));
    CHECK(is_within_grayscale({-0.1, 0.5}, 0.2));
}
