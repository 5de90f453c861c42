#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deblur/errors.hpp>
#include <deblur/model.hpp>
#include <deblur/spectral.hpp>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

using namespace deblur;

namespace {

// Largest-magnitude entry of A - B.
double matrix_distance(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            worst = std::max(worst, std::abs(a(r, c) - b(r, c)));
    return worst;
}

Matrix outer_accumulate(const std::vector<Image>& basis) {
    const std::size_t n = basis.empty() ? 0 : basis.front().size();
    Matrix p(n, n, 0.0);
    for (const Image& v : basis)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) p(r, c) += v[r] * v[c];
    return p;
}

// Orthonormalize spanning vectors (dropping near-zero ones) and return the
// projector onto their span.
Matrix projector_from_span(std::vector<Image> span) {
    std::vector<Image> basis;
    for (Image v : span) {
        for (const Image& b : basis) axpy(v, -dot(b, v), b);
        const double len = norm2(v);
        if (len < 1e-8) continue;
        for (double& x : v) x /= len;
        basis.push_back(v);
    }
    return outer_accumulate(basis);
}

Matrix group_projector(const SvdFactorization& fac, const SigmaGroup& group, BasisSide side) {
    std::vector<Image> basis;
    for (std::size_t a = group.first; a < group.first + group.count; ++a)
        basis.push_back(side == BasisSide::right ? fac.right_vector(a) : fac.left_vector(a));
    return outer_accumulate(basis);
}

Image fourier_wave(std::size_t n, std::size_t freq, bool sine) {
    Image v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double angle = 2.0 * std::numbers::pi * double(freq) * double(i) / double(n);
        v[i] = sine ? std::sin(angle) : std::cos(angle);
    }
    return v;
}

const std::vector<double>& wide_kernel_sigmas() {
    // 0.25 + 0.5 cos(pi k / 6) + 0.25 cos(pi k / 3) for k = 0..11, moduli
    // sorted descending.
    static const std::vector<double> values = {1.0,
                                               0.8080127018922193,
                                               0.8080127018922193,
                                               0.375,
                                               0.375,
                                               0.125,
                                               0.125,
                                               0.0580127018922193,
                                               0.0580127018922193,
                                               0.0,
                                               0.0,
                                               0.0};
    return values;
}

}  // namespace

TEST_CASE("identity transfer has a flat unit spectrum") {
    const SvdFactorization fac = svd(Matrix::identity(4));
    REQUIRE(fac.size() == 4);
    for (double s : fac.sigma) CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(null_space(fac).empty());
}

TEST_CASE("wide-kernel spectrum at n=12 matches the closed-form values") {
    const SvdFactorization fac = svd(circulant_matrix(kernel_5bin(), 12));
    REQUIRE(fac.size() == 12);
    for (std::size_t a = 0; a < 12; ++a)
        CHECK(std::abs(fac.sigma[a] - wide_kernel_sigmas()[a]) <= 1e-12);
    CHECK(fac.rank_tol == doctest::Approx(1e-10).epsilon(1e-10));
    CHECK(null_space(fac).size() == 3);
}

TEST_CASE("narrow-kernel spectrum at n=12 has full rank and minimum 0.100") {
    const SvdFactorization fac = svd(circulant_matrix(kernel_3bin(), 12));
    CHECK(std::abs(fac.sigma.back() - 0.100) <= 1e-12);
    CHECK(fac.sigma.back() > fac.rank_tol);
    CHECK(null_space(fac).empty());
}

TEST_CASE("factorization reproduces the matrix with orthonormal bases") {
    for (const Kernel& k : {kernel_3bin(), kernel_5bin()}) {
        const Matrix t = circulant_matrix(k, 12);
        const SvdFactorization fac = svd(t);

        Matrix rebuilt(12, 12, 0.0);
        for (std::size_t a = 0; a < 12; ++a) {
            const Image u = fac.left_vector(a);
            const Image v = fac.right_vector(a);
            for (std::size_t r = 0; r < 12; ++r)
                for (std::size_t c = 0; c < 12; ++c) rebuilt(r, c) += fac.sigma[a] * u[r] * v[c];
        }
        CHECK(matrix_distance(rebuilt, t) <= 1e-12);

        for (const Matrix& basis : {fac.left, fac.right}) {
            const Matrix gram = basis.transposed().multiply(basis);
            CHECK(matrix_distance(gram, Matrix::identity(12)) <= 1e-12);
        }
    }
}

TEST_CASE("sigma values are sorted and the right-vector sign is pinned") {
    const SvdFactorization fac = svd(circulant_matrix(kernel_5bin(), 12));
    CHECK(std::is_sorted(fac.sigma.rbegin(), fac.sigma.rend()));
    for (std::size_t a = 0; a < fac.size(); ++a) {
        const Image v = fac.right_vector(a);
        for (double x : v) {
            if (std::abs(x) > 1e-12) {
                CHECK(x > 0.0);
                break;
            }
        }
    }
}

TEST_CASE("factorization is deterministic for a fixed input") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    const SvdFactorization a = svd(t);
    const SvdFactorization b = svd(t);
    CHECK(a.sigma == b.sigma);
    CHECK(a.left == b.left);
    CHECK(a.right == b.right);
}

TEST_CASE("svd rejects malformed matrices") {
    CHECK_THROWS_AS(svd(Matrix(3, 4, 0.5)), std::invalid_argument);
    CHECK_THROWS_AS(svd(Matrix()), std::invalid_argument);
    Matrix bad(2, 2, 1.0);
    bad(0, 0) = std::nan("");
    CHECK_THROWS_AS(svd(bad), std::invalid_argument);
}

TEST_CASE("two independent spectrum routes agree across sizes and kernels") {
    // Route one: Jacobi factorization of the dense matrix. Route two: the
    // closed-form cyclic spectrum. Sorted moduli must coincide.
    for (std::size_t n = 3; n <= 32; ++n) {
        for (const Kernel& k : {kernel_3bin(), kernel_5bin()}) {
            if (std::size_t(2 * k.max_abs_offset()) >= n) continue;
            std::vector<double> expected = circulant_spectrum_oracle(k, n);
            for (double& v : expected) v = std::abs(v);
            std::sort(expected.rbegin(), expected.rend());
            const SvdFactorization fac = svd(circulant_matrix(k, n));
            REQUIRE(fac.size() == n);
            for (std::size_t a = 0; a < n; ++a)
                CHECK(std::abs(fac.sigma[a] - expected[a]) <= 1e-10);
        }
    }
}

TEST_CASE("the spectrum routes also agree for an asymmetric kernel") {
    const Kernel k = Kernel::from_taps({{0, 0.5}, {1, 0.3}, {-1, 0.2}});
    std::vector<double> expected = circulant_spectrum_oracle(k, 8);
    for (double v : expected) CHECK(v >= 0.0);  // moduli, not signed values
    std::sort(expected.rbegin(), expected.rend());
    const SvdFactorization fac = svd(circulant_matrix(k, 8));
    for (std::size_t a = 0; a < 8; ++a) CHECK(std::abs(fac.sigma[a] - expected[a]) <= 1e-10);
}

TEST_CASE("degeneracy groups at n=12 have the documented shape") {
    const SvdFactorization fac = svd(circulant_matrix(kernel_5bin(), 12));
    const std::vector<SigmaGroup> groups = degenerate_groups(fac);
    REQUIRE(groups.size() == 6);
    const std::size_t expected_first[] = {0, 1, 3, 5, 7, 9};
    const std::size_t expected_count[] = {1, 2, 2, 2, 2, 3};
    for (std::size_t i = 0; i < groups.size(); ++i) {
        CHECK(groups[i].first == expected_first[i]);
        CHECK(groups[i].count == expected_count[i]);
        CHECK(groups[i].sigma == doctest::Approx(wide_kernel_sigmas()[groups[i].first])
                                     .epsilon(1e-10));
    }
}

TEST_CASE("degenerate subspaces match the Fourier wave spans") {
    // Vector-by-vector comparison is meaningless inside a degenerate group;
    // compare projectors onto whole subspaces instead.
    const std::size_t n = 12;
    const SvdFactorization fac = svd(circulant_matrix(kernel_5bin(), n));
    const std::vector<SigmaGroup> groups = degenerate_groups(fac);

    const std::vector<std::vector<std::size_t>> frequencies = {{0}, {1}, {2}, {4}, {5}, {3, 6}};
    REQUIRE(groups.size() == frequencies.size());
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        std::vector<Image> span;
        for (std::size_t freq : frequencies[gi]) {
            span.push_back(fourier_wave(n, freq, false));
            span.push_back(fourier_wave(n, freq, true));
        }
        const Matrix expected = projector_from_span(span);
        CHECK(matrix_distance(group_projector(fac, groups[gi], BasisSide::right), expected) <=
              1e-9);
        // The matrix is symmetric, so left subspaces agree with right ones.
        CHECK(matrix_distance(group_projector(fac, groups[gi], BasisSide::left), expected) <=
              1e-9);
    }
}

TEST_CASE("decompose and reconstruct are mutually inverse") {
    const SvdFactorization fac = svd(circulant_matrix(kernel_5bin(), 12));
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        Image x(12);
        for (double& v : x) v = dist(rng);
        for (BasisSide side : {BasisSide::right, BasisSide::left}) {
            const SpectralCoefficients c = decompose(x, fac, side);
            REQUIRE(c.coeffs.size() == 12);
            CHECK(max_abs_diff(reconstruct(c, fac), x) <= 1e-12);
            double power = 0.0;
            for (double v : c.coeffs) power += v * v;
            CHECK(std::abs(power - dot(x, x)) <= 1e-10);  // orthonormal basis
        }
    }
}

TEST_CASE("a uniform image is carried entirely by the leading vector") {
    const SvdFactorization fac = svd(circulant_matrix(kernel_5bin(), 12));
    const SpectralCoefficients c = decompose(Image(12, 0.5), fac);
    CHECK(std::abs(c.coeffs[0] - 0.5 * std::sqrt(12.0)) <= 1e-12);
    for (std::size_t a = 1; a < 12; ++a) CHECK(std::abs(c.coeffs[a]) <= 1e-12);
}

TEST_CASE("blurring scales each coefficient by its sigma") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    const SvdFactorization fac = svd(t);
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    Image f(12);
    for (double& v : f) v = dist(rng);
    const SpectralCoefficients cf = decompose(f, fac, BasisSide::right);
    const SpectralCoefficients cg = decompose(blur(t, f), fac, BasisSide::left);
    for (std::size_t a = 0; a < 12; ++a)
        CHECK(std::abs(cg.coeffs[a] - fac.sigma[a] * cf.coeffs[a]) <= 1e-12);
}

TEST_CASE("null-space vectors are orthonormal and annihilated by the transfer") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    const SvdFactorization fac = svd(t);
    const std::vector<Image> null_basis = null_space(fac);
    REQUIRE(null_basis.size() == 3);
    for (std::size_t i = 0; i < null_basis.size(); ++i) {
        CHECK(norm2(blur(t, null_basis[i])) <= 1e-10);
        for (std::size_t j = 0; j < null_basis.size(); ++j) {
            const double expected = i == j ? 1.0 : 0.0;
            CHECK(std::abs(dot(null_basis[i], null_basis[j]) - expected) <= 1e-12);
        }
    }
}

TEST_CASE("null-space tolerance must sit strictly between zero and sigma-max") {
    const SvdFactorization fac = svd(circulant_matrix(kernel_5bin(), 12));
    CHECK_THROWS_AS(null_space(fac, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(null_space(fac, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(null_space(fac, 2.0), std::invalid_argument);
    CHECK_NOTHROW(null_space(fac, 0.5));
    CHECK(null_space(fac, 0.5).size() == 9);  // everything below 0.5 counts as null here
}

TEST_CASE("row-space projection removes exactly the null component") {
    const Matrix t = circulant_matrix(kernel_5bin(), 12);
    const SvdFactorization fac = svd(t);
    const std::vector<Image> null_basis = null_space(fac);

    Image x = generate_image(GeneratorDescriptor::delta(5, 1.0), 12);
    const Image projected = project_row_space(x, fac);
    for (const Image& v : null_basis) CHECK(std::abs(dot(projected, v)) <= 1e-12);
    CHECK(max_abs_diff(project_row_space(projected, fac), projected) <= 1e-12);

    // Adding null content changes nothing after projection.
    Image seeded = projected;
    axpy(seeded, 0.3, null_basis[0]);
    axpy(seeded, -0.2, null_basis[2]);
    CHECK(max_abs_diff(project_row_space(seeded, fac), projected) <= 1e-12);

    // Blurring cannot see the difference either.
    CHECK(max_abs_diff(blur(t, seeded), blur(t, x)) <= 1e-10);
}
