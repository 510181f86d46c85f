#include <doctest.h>

#include <random>

#include "qsw/exact.hpp"
#include "support/h2_fixture.hpp"
#include "support/oracle.hpp"
#include "support/random_gen.hpp"

using namespace qsw;

TEST_CASE("dense spectrum of single-qubit Z") {
    PauliSum H(1);
    H.add("Z", 0.75);
    const SpectrumResult s = dense_spectrum(H);
    REQUIRE(s.eigenvalues.size() == 2);
    CHECK(s.eigenvalues[0] == doctest::Approx(-0.75));
    CHECK(s.eigenvalues[1] == doctest::Approx(0.75));
}

TEST_CASE("dense spectrum of a scaled identity") {
    const std::size_t n = 3;
    PauliSum H(n);
    H.add("III", -1.25);
    const SpectrumResult s = dense_spectrum(H);
    REQUIRE(s.eigenvalues.size() == 8);
    for (double e : s.eigenvalues) CHECK(e == doctest::Approx(-1.25));
}

TEST_CASE("dense spectrum on the 15-string 4-qubit structure") {
    std::mt19937_64 rng(21);
    const PauliSum H = testgen::random_h2_structure(rng);
    const SpectrumResult s = dense_spectrum(H);
    REQUIRE(s.eigenvalues.size() == 16);
    const auto expect = oracle::spectrum(H);
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(s.eigenvalues[i] == doctest::Approx(expect[i]).epsilon(1e-10));
}

TEST_CASE("dense spectrum errors") {
    PauliSum wide(15);
    wide.add("ZIIIIIIIIIIIIII", 1.0);
    CHECK_THROWS_AS(dense_spectrum(wide), std::invalid_argument);

    PauliSum nonherm(1);
    nonherm.add("X", cplx{0.0, 0.5});
    CHECK_THROWS_AS(dense_spectrum(nonherm), std::invalid_argument);
}

TEST_CASE("apply_pauli_sum basics") {
    PauliSum H(2);
    H.add("II", 2.5);
    std::vector<cplx> v = {1.0, 0.0, cplx{0.0, 1.0}, -2.0};
    auto out = apply_pauli_sum(H, v);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(std::abs(out[i] - 2.5 * v[i]) < 1e-14);

    PauliSum X0(2);
    X0.add("XI", 1.0);
    std::vector<cplx> basis0 = {1.0, 0.0, 0.0, 0.0};
    out = apply_pauli_sum(X0, basis0);
    CHECK(std::abs(out[1] - cplx{1.0, 0.0}) < 1e-14);  // |00> -> |10>
    CHECK(std::abs(out[0]) < 1e-14);
}

TEST_CASE("matrix-free application matches the dense matrix") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int rep = 0; rep < 12; ++rep) {
        const std::size_t n = 1 + rng() % 6;
        const std::size_t dim = std::size_t{1} << n;
        // Complex coefficients exercise the phase bookkeeping too.
        PauliSum H(n);
        for (int k = 0; k < 8; ++k)
            H.add_term(testgen::random_term(rng, n, false));
        std::vector<cplx> v(dim);
        for (auto& a : v) a = {amp(rng), amp(rng)};
        const auto got = apply_pauli_sum(H, v);
        Eigen::VectorXcd vin(dim);
        for (std::size_t i = 0; i < dim; ++i) vin(i) = v[i];
        const Eigen::VectorXcd expect = oracle::to_matrix(H) * vin;
        for (std::size_t i = 0; i < dim; ++i)
            CHECK(std::abs(got[i] - expect(i)) < 1e-12);
    }
}

TEST_CASE("apply_pauli_sum is linear") {
    std::mt19937_64 rng(23);
    const std::size_t n = 4, dim = 16;
    const PauliSum H = testgen::random_hermitian_sum(rng, n, 10);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    std::vector<cplx> u(dim), v(dim), w(dim);
    const cplx alpha{0.3, -1.1}, beta{-0.8, 0.2};
    for (std::size_t i = 0; i < dim; ++i) {
        u[i] = {amp(rng), amp(rng)};
        v[i] = {amp(rng), amp(rng)};
        w[i] = alpha * u[i] + beta * v[i];
    }
    const auto hu = apply_pauli_sum(H, u);
    const auto hv = apply_pauli_sum(H, v);
    const auto hw = apply_pauli_sum(H, w);
    for (std::size_t i = 0; i < dim; ++i)
        CHECK(std::abs(hw[i] - (alpha * hu[i] + beta * hv[i])) < 1e-12);
}

TEST_CASE("iterative ground state of a diagonal Hamiltonian") {
    PauliSum H(3);
    H.add("ZII", 0.5);
    H.add("IZI", 0.3);
    H.add("IIZ", -0.2);
    // minimum at z0=-1, z1=-1, z2=+1 -> bits 110 -> index 3
    const GroundStateResult g = ground_state(H);
    CHECK(g.converged);
    CHECK(g.energy == doctest::Approx(-1.0));
    CHECK(std::norm(g.amplitudes[3]) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("two-qubit a*ZZ + b*XX has the +/-a+/-b spectrum") {
    PauliSum H(2);
    const double a = 0.6, b = -1.3;
    H.add("ZZ", a);
    H.add("XX", b);
    const GroundStateResult g = ground_state(H);
    CHECK(g.converged);
    CHECK(g.energy == doctest::Approx(-std::abs(a) - std::abs(b)));
    const SpectrumResult s = dense_spectrum(H);
    std::vector<double> expect = {a + b, a - b, -a + b, -a - b};
    std::sort(expect.begin(), expect.end());
    for (int i = 0; i < 4; ++i)
        CHECK(s.eigenvalues[i] == doctest::Approx(expect[i]));
}

TEST_CASE("iterative agrees with dense on random instances") {
    std::mt19937_64 rng(24);
    for (int rep = 0; rep < 6; ++rep) {
        const std::size_t n = 2 + rng() % 9;  // up to 10
        const PauliSum H = testgen::random_hermitian_sum(rng, n, 4 * n);
        const double dense = dense_spectrum(H).eigenvalues.front();
        const GroundStateResult g = ground_state(H);
        CHECK(g.converged);
        CHECK(g.residual <= 1e-8);
        CHECK(g.energy == doctest::Approx(dense).epsilon(1e-9));
    }
}

TEST_CASE("spectrum is invariant under rotation-sequence conjugation") {
    std::mt19937_64 rng(25);
    for (int rep = 0; rep < 6; ++rep) {
        const std::size_t n = 2 + rng() % 3;
        const PauliSum H = testgen::random_hermitian_sum(rng, n, 8);
        RotationSequence seq;
        seq.push_clifford(testgen::random_term(rng, n, true, false), 1);
        seq.push(testgen::random_term(rng, n, true, false), 1.234);
        const auto before = dense_spectrum(H).eigenvalues;
        const auto after = dense_spectrum(conjugate(H, seq)).eigenvalues;
        for (std::size_t i = 0; i < before.size(); ++i)
            CHECK(before[i] == doctest::Approx(after[i]).epsilon(1e-10));
    }
}

TEST_CASE("iterative ground energy lower-bounds random Rayleigh quotients") {
    std::mt19937_64 rng(26);
    const std::size_t n = 5, dim = 32;
    const PauliSum H = testgen::random_hermitian_sum(rng, n, 20);
    const GroundStateResult g = ground_state(H);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<cplx> v(dim);
        double norm2 = 0.0;
        for (auto& x : v) {
            x = {amp(rng), amp(rng)};
            norm2 += std::norm(x);
        }
        const auto hv = apply_pauli_sum(H, v);
        double quotient = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            quotient += (std::conj(v[i]) * hv[i]).real();
        quotient /= norm2;
        CHECK(g.energy <= quotient + 1e-9);
    }
}

TEST_CASE("ground state is deterministic") {
    std::mt19937_64 rng(27);
    const PauliSum H = testgen::random_hermitian_sum(rng, 6, 24);
    const GroundStateResult a = ground_state(H);
    const GroundStateResult b = ground_state(H);
    CHECK(a.energy == b.energy);
    CHECK(a.iterations == b.iterations);
    for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
        CHECK(a.amplitudes[i] == b.amplitudes[i]);
}
