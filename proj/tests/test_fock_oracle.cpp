#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qot/dsl.hpp"
#include "qot/fock_oracle.hpp"
#include "qot/metrics.hpp"
#include "qot/presets.hpp"

using namespace qot;

namespace {

VacuumBasis pair_basis() { return VacuumBasis::with_signal("s", {"v"}); }

}  // namespace

TEST_CASE("state preparation") {
    SUBCASE("vacuum product state") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{}, 16);
        fock::ModeMoments m = fock::measure(state, 0);
        CHECK(m.quad.var_plus == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(m.quad.var_minus == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(m.mean_photon == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(state.trusted());
    }

    SUBCASE("coherent state moments are Poissonian") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{1.0, 0.0}, 40);
        fock::ModeMoments m = fock::measure(state, 0);
        CHECK(m.mean_photon == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(m.var_photon == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(m.quad.mean_plus == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(m.quad.var_plus == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(m.quad.var_minus == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("half-photon displacement lands on the plus quadrature") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{0.5, 0.0}, 24);
        fock::ModeMoments m = fock::measure(state, 0);
        CHECK(m.quad.mean_plus == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(m.quad.mean_minus == doctest::Approx(0.0).epsilon(1e-10));
    }

    SUBCASE("imaginary displacement lands on the minus quadrature") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{0.0, 0.4}, 24);
        fock::ModeMoments m = fock::measure(state, 0);
        CHECK(m.quad.mean_plus == doctest::Approx(0.0).epsilon(1e-10));
        CHECK(m.quad.mean_minus == doctest::Approx(0.8).epsilon(1e-10));
    }

    SUBCASE("cutoff too small for the displacement is refused") {
        CHECK_THROWS_AS(fock::prepare(pair_basis(), Complex{6.0, 0.0}, 10),
                        std::invalid_argument);
        CHECK_THROWS_AS(fock::prepare(pair_basis(), Complex{1.0, 0.0}, 4),
                        std::invalid_argument);
    }
}

TEST_CASE("element unitaries against closed forms") {
    SUBCASE("fully transmissive beamsplitter leaves the state untouched") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{0.5, 0.2}, 24);
        const std::vector<Complex> before = state.amplitudes();
        fock::apply_beamsplitter(state, 0, 1, 1.0);
        CHECK(state.amplitudes() == before);
    }

    SUBCASE("beamsplitter splits a displacement by sqrt(eps)") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{0.6, 0.0}, 32);
        fock::apply_beamsplitter(state, 0, 1, 0.25);
        fock::ModeMoments kept = fock::measure(state, 0);
        fock::ModeMoments reflected = fock::measure(state, 1);
        CHECK(kept.quad.mean_plus == doctest::Approx(0.5 * 1.2).epsilon(1e-9));
        CHECK(reflected.quad.mean_plus ==
              doctest::Approx(std::sqrt(0.75) * 1.2).epsilon(1e-9));
        CHECK(kept.quad.var_plus == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }

    SUBCASE("two-mode squeezer reproduces the EPR correlation level") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{}, 40);
        fock::apply_two_mode_squeezer(state, 0, 1, 1.2);
        JointStats j = fock::measure_joint(state, 0, 1);
        CHECK(j.difference_variance_plus() ==
              doctest::Approx(0.8404082057734575).epsilon(1e-6));
        CHECK(j.sum_variance_minus() == doctest::Approx(0.8404082057734575).epsilon(1e-6));
        CHECK(j.var_plus_1 == doctest::Approx(2.0 * 1.2 - 1.0).epsilon(1e-6));
        CHECK(state.trusted());
        CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-8));
    }

    SUBCASE("single-mode squeezer stays at minimum uncertainty") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{}, 40);
        fock::apply_single_mode_squeezer(state, 0, 1.2, 0.0);
        fock::ModeMoments m = fock::measure(state, 0);
        CHECK(m.quad.var_plus * m.quad.var_minus == doctest::Approx(1.0).epsilon(1e-6));
        const double expected = std::pow(std::sqrt(1.2) + std::sqrt(0.2), 2.0);
        CHECK(m.quad.var_plus == doctest::Approx(expected).epsilon(1e-6));
    }

    SUBCASE("opposite pump phase swaps the squeezed quadrature") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{}, 40);
        fock::apply_single_mode_squeezer(state, 0, 1.2, 3.14159265358979323846);
        fock::ModeMoments m = fock::measure(state, 0);
        CHECK(m.quad.var_plus < 1.0);
        CHECK(m.quad.var_minus > 1.0);
    }

    SUBCASE("amplifier as a two-mode squeezer adds 2G-1 vacuum units") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{}, 40);
        fock::apply_two_mode_squeezer(state, 0, 1, 2.0);
        fock::ModeMoments m = fock::measure(state, 0);
        CHECK(m.quad.var_plus == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(m.quad.var_minus == doctest::Approx(3.0).epsilon(1e-6));
    }
}

TEST_CASE("whole circuits in the truncated basis") {
    SUBCASE("dual-homodyne teleporter: variance 3, unity mean gain") {
        fock::CircuitFockRun run_ =
            fock::run_circuit(build_eo_classical(1.0, 1.0, Complex{0.3, 0.0}), 40);
        REQUIRE(run_.state.trusted());
        fock::ModeMoments out = fock::measure(run_.state, run_.output_slot);
        CHECK(out.quad.var_plus == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(out.quad.var_minus == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(out.quad.mean_plus == doctest::Approx(0.6).epsilon(1e-6));
    }

    SUBCASE("identity-like circuit overlap is one") {
        Circuit c = parse("input a coherent 0.3 0\noutput a\n");
        fock::CircuitFockRun run_ = fock::run_circuit(c, 32);
        CHECK(fock::overlap(run_.state, Complex{0.3, 0.0}, run_.output_slot) ==
              doctest::Approx(1.0).epsilon(1e-8));
    }

    SUBCASE("classical teleporter fidelity matches the Gaussian formula at finite gain") {
        const Complex alpha{0.3, 0.0};
        fock::CircuitFockRun run_ = fock::run_circuit(build_ao_classical(2.0, alpha), 40);
        REQUIRE(run_.state.trusted());
        const double fock_fidelity = fock::overlap(run_.state, alpha, run_.output_slot);
        CHECK(fock_fidelity == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    }

    SUBCASE("entangled teleporter fidelity matches the coefficient algebra") {
        const Complex alpha{0.3, 0.0};
        auto fidelity_check = [&](const Circuit& c, int cutoff, double tol) {
            fock::CircuitFockRun run_ = fock::run_circuit(c, cutoff);
            REQUIRE(run_.state.trusted());
            RunResult algebra = run(c);
            QuadratureStats s = quadrature_stats(algebra.output);
            const double expected = coherent_fidelity(1.0, s.var_plus, s.var_minus, alpha);
            CHECK(fock::overlap(run_.state, alpha, run_.output_slot) ==
                  doctest::Approx(expected).epsilon(tol));
        };
        fidelity_check(build_ao_quantum(1.2, 1.2, false, alpha), 40, 1e-6);
        fidelity_check(build_ao_quantum(1.2, 1.2, true, alpha), 40, 1e-6);
        fidelity_check(build_ao_quantum(1.4, 2.0, true, alpha), 56, 1e-6);
        // heavier gains push occupation against the box wall; a 40-level box
        // is honestly flagged while 72 levels restore certified agreement
        Circuit heavy = build_ao_quantum(2.0, 2.0, false, alpha);
        CHECK_FALSE(fock::run_circuit(heavy, 40).state.trusted());
        fidelity_check(heavy, 72, 1e-6);
    }

    SUBCASE("final slots cover output and waste beams") {
        fock::CircuitFockRun run_ = fock::run_circuit(build_ao_quantum(1.2, 1.2, true), 32);
        RunResult algebra = run(build_ao_quantum(1.2, 1.2, true));
        REQUIRE(run_.final_modes.size() == 3);
        for (const auto& [name, slot] : run_.final_modes) {
            const BogoliubovMode* mode = algebra.find(name);
            REQUIRE(mode != nullptr);
            fock::ModeMoments m = fock::measure(run_.state, slot);
            QuadratureStats s = quadrature_stats(*mode);
            CHECK(m.quad.var_plus == doctest::Approx(s.var_plus).epsilon(1e-6));
            CHECK(m.quad.var_minus == doctest::Approx(s.var_minus).epsilon(1e-6));
        }
    }
}

TEST_CASE("trust bookkeeping") {
    SUBCASE("tight cutoffs are flagged, not silently accepted") {
        fock::CircuitFockRun run_ = fock::run_circuit(build_ao_classical(2.0), 8);
        CHECK_FALSE(run_.state.trusted());
        CHECK_FALSE(fock::measure(run_.state, run_.output_slot).trusted);
    }

    SUBCASE("manual flag propagates through measurement") {
        fock::FockState state = fock::prepare(pair_basis(), Complex{}, 16);
        state.flag_untrusted();
        CHECK_FALSE(fock::measure(state, 0).trusted);
    }

    SUBCASE("raising the cutoff moves the oracle toward the algebra") {
        Circuit c = build_ao_quantum(2.25, 2.25, false, Complex{1.0, 0.0});
        RunResult algebra = run(c);
        const double target = quadrature_stats(algebra.output).var_plus;
        double previous_error = 1e9;
        for (int cutoff : {16, 28, 40}) {
            fock::CircuitFockRun run_ = fock::run_circuit(c, cutoff);
            fock::ModeMoments m = fock::measure(run_.state, run_.output_slot);
            const double error = std::abs(m.quad.var_plus - target);
            CHECK(error <= previous_error + 1e-12);
            previous_error = error;
        }
        CHECK(previous_error < 5e-3);
    }
}

TEST_CASE("circuits the oracle cannot express are refused") {
    SUBCASE("mode feeding two elements") {
        Circuit c = parse(
            "input a\nvacuum v w\n"
            "bs 0.5 a v -> x y\n"
            "bs 0.5 a w -> p q\n"  // reuses a
            "output x\n");
        CHECK_THROWS_WITH_AS(fock::run_circuit(c, 8), doctest::Contains("more than one"),
                             std::invalid_argument);
    }

    SUBCASE("displacing a beam that is not a homodyne channel") {
        Circuit c = parse("input a\nvacuum v w\ndisplace 1 a v -> o\noutput o\n");
        CHECK_THROWS_AS(fock::run_circuit(c, 8), std::invalid_argument);
    }

    SUBCASE("homodyne channel left dangling") {
        Circuit c = parse("input a\nvacuum v w\neochan 1 a v -> ch\noutput w\n");
        CHECK_THROWS_WITH_AS(fock::run_circuit(c, 8), doctest::Contains("unconsumed"),
                             std::invalid_argument);
    }
}
