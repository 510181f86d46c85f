#include <doctest.h>

#include <random>

#include "qsw/exact.hpp"
#include "qsw/projection.hpp"
#include "support/oracle.hpp"
#include "support/random_gen.hpp"

using namespace qsw;

namespace {

/// Dense reference for project(): projector sandwich then partial trace.
oracle::Mat dense_projection(const PauliSum& H, const ProjectionPlan& plan) {
    const std::size_t n = H.n_qubits();
    const oracle::Mat u = oracle::rotation_unitary(n, plan.pre_rotation);
    const oracle::Mat rotated = u * oracle::to_matrix(H) * u.adjoint();
    const oracle::Mat p =
        oracle::projector(n, plan.qubit_indices, plan.sectors, plan.bases);
    std::vector<std::size_t> traced = plan.qubit_indices;
    std::sort(traced.begin(), traced.end());
    return oracle::partial_trace(p * rotated * p, n, traced);
}

ProjectionPlan random_plan(std::mt19937_64& rng, std::size_t n,
                           std::size_t n_project, bool with_rotation) {
    ProjectionPlan plan;
    std::vector<std::size_t> qubits(n);
    for (std::size_t q = 0; q < n; ++q) qubits[q] = q;
    std::shuffle(qubits.begin(), qubits.end(), rng);
    const char basis_chars[3] = {'X', 'Y', 'Z'};
    for (std::size_t i = 0; i < n_project; ++i) {
        plan.qubit_indices.push_back(qubits[i]);
        plan.sectors.push_back(rng() & 1 ? +1 : -1);
        plan.bases.push_back(basis_chars[rng() % 3]);
    }
    if (with_rotation) {
        plan.pre_rotation.push_clifford(
            testgen::random_term(rng, n, true, false), 1);
        std::uniform_real_distribution<double> angle(-2.0, 2.0);
        plan.pre_rotation.push(testgen::random_term(rng, n, true, false),
                               angle(rng));
    }
    return plan;
}

}  // namespace

TEST_CASE("project annihilates the anticommuting term") {
    PauliSum H(2);
    H.add("ZI", 0.7);
    H.add("XI", 0.4);
    ProjectionPlan plan;
    plan.qubit_indices = {0};
    plan.sectors = {-1};
    plan.bases = {'Z'};
    const PauliSum out = project(H, plan);
    CHECK(out.n_qubits() == 1);
    CHECK(out.n_terms() == 1);
    CHECK(out.coefficient("I") == cplx{-0.7, 0.0});
}

TEST_CASE("projecting nothing returns the sum unchanged") {
    std::mt19937_64 rng(31);
    const PauliSum H = testgen::random_hermitian_sum(rng, 4, 10);
    const PauliSum out = project(H, ProjectionPlan{});
    CHECK(out.terms() == H.terms());
}

TEST_CASE("X-basis projection keeps the aligned term") {
    PauliSum H(2);
    H.add("XX", 0.9);
    ProjectionPlan plan;
    plan.qubit_indices = {0};
    plan.sectors = {+1};
    plan.bases = {'X'};
    const PauliSum out = project(H, plan);
    CHECK(out.n_qubits() == 1);
    CHECK(out.coefficient("X") == cplx{0.9, 0.0});

    const oracle::Mat expect = dense_projection(H, plan);
    CHECK((expect - oracle::to_matrix(out)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("plan validation") {
    PauliSum H(3);
    H.add("ZZZ", 1.0);
    ProjectionPlan plan;
    plan.qubit_indices = {0, 3};
    plan.sectors = {1, 1};
    plan.bases = {'Z', 'Z'};
    CHECK_THROWS_AS(project(H, plan), std::invalid_argument);  // out of range
    plan.qubit_indices = {0, 0};
    CHECK_THROWS_AS(project(H, plan), std::invalid_argument);  // duplicate
    plan.qubit_indices = {0, 1};
    plan.bases = {'Z', 'Q'};
    CHECK_THROWS_AS(project(H, plan), std::invalid_argument);  // bad basis
}

TEST_CASE("project matches the dense projector sandwich and partial trace") {
    std::mt19937_64 rng(32);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 2 + rng() % 4;  // up to 5
        const std::size_t n_project = 1 + rng() % n;
        const PauliSum H = testgen::random_hermitian_sum(rng, n, 3 * n);
        const ProjectionPlan plan = random_plan(rng, n, n_project, rep % 2 == 0);
        const PauliSum projected = project(H, plan);
        CHECK(projected.n_qubits() == n - n_project);
        const oracle::Mat expect = dense_projection(H, plan);
        const double defect =
            (expect - oracle::to_matrix(projected)).cwiseAbs().maxCoeff();
        CHECK(defect < 1e-12);
    }
}

TEST_CASE("the stabilizer projector is idempotent (dense)") {
    std::mt19937_64 rng(33);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 2 + rng() % 3;
        const ProjectionPlan plan = random_plan(rng, n, 1 + rng() % n, false);
        const oracle::Mat p = oracle::projector(n, plan.qubit_indices,
                                                plan.sectors, plan.bases);
        CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("projected eigenvalues are a subset of the sandwiched spectrum") {
    std::mt19937_64 rng(34);
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t n = 2 + rng() % 3;
        const std::size_t n_project = 1 + rng() % (n - 1);
        const PauliSum H = testgen::random_hermitian_sum(rng, n, 3 * n);
        const ProjectionPlan plan = random_plan(rng, n, n_project, false);
        const PauliSum projected = project(H, plan);

        const oracle::Mat p = oracle::projector(n, plan.qubit_indices,
                                                plan.sectors, plan.bases);
        const oracle::Mat sandwiched = p * oracle::to_matrix(H) * p;
        const auto big = oracle::spectrum(sandwiched);
        const auto small = oracle::spectrum(projected);
        // Every projected eigenvalue appears in the sandwiched spectrum.
        for (double e : small) {
            double best = 1e9;
            for (double b : big) best = std::min(best, std::abs(b - e));
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("term count never grows under all-Clifford projection") {
    std::mt19937_64 rng(35);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng() % 4;
        const PauliSum H = testgen::random_hermitian_sum(rng, n, 3 * n);
        ProjectionPlan plan = random_plan(rng, n, 1 + rng() % n, false);
        plan.pre_rotation.push_clifford(
            testgen::random_term(rng, n, true, false), 1);
        plan.pre_rotation.push_clifford(
            testgen::random_term(rng, n, true, false), -1);
        CHECK(project(H, plan).n_terms() <= H.n_terms());
    }
}

TEST_CASE("freeze_orbitals fixes occupied and virtual qubits") {
    // Diagonal Hamiltonian frozen everywhere leaves the matching constant.
    PauliSum H(3);
    H.add("ZII", 0.5);
    H.add("IZI", -0.25);
    H.add("IIZ", 1.5);
    H.add("ZZI", 0.75);
    const PauliSum constant = freeze_orbitals(H, {0, 1}, {2});
    CHECK(constant.n_qubits() == 0);
    // occupied bits 1,1 and virtual bit 0 -> reference bitstring 110
    const double expect = expectation_in_basis_state(H, "110");
    REQUIRE(constant.n_terms() == 1);
    CHECK(constant.terms().begin()->second.real() == doctest::Approx(expect));

    const PauliSum untouched = freeze_orbitals(H, {}, {});
    CHECK(untouched.terms() == H.terms());

    CHECK_THROWS_AS(freeze_orbitals(H, {0, 1}, {1}), std::invalid_argument);
}

TEST_CASE("freezing is a variational restriction") {
    std::mt19937_64 rng(36);
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t n = 8;
        const PauliSum H = testgen::random_hermitian_sum(rng, n, 30);
        const PauliSum frozen = freeze_orbitals(H, {0, 1}, {});
        if (frozen.empty()) continue;
        const double full = oracle::spectrum(H).front();
        const double reduced = oracle::spectrum(frozen).front();
        CHECK(reduced >= full - 1e-10);
    }
}

TEST_CASE("core_indices_below applies the energy window") {
    const std::vector<double> mu = {-20.0, -1.1, -0.4, 0.3, 5.0};
    CHECK(core_indices_below(mu, 1.0) == std::vector<std::size_t>{0, 1});
    CHECK(core_indices_below(mu, 100.0).empty());
}
