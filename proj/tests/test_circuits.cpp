#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_set>

#include "qot/presets.hpp"
#include "support/random_circuit.hpp"

using namespace qot;

namespace {
const double kExact = 1e-12;
}

TEST_CASE("electro-optic teleporter output") {
    SUBCASE("matched gains: output is a_in + v1^dag - v2") {
        RunResult r = run(build_eo_classical(1.0, 1.0));
        CHECK(std::abs(r.output.coeff(0).alpha - 1.0) < kExact);
        CHECK(std::abs(r.output.coeff(1).beta - 1.0) < kExact);
        CHECK(std::abs(r.output.coeff(2).alpha + 1.0) < kExact);
        CHECK(std::abs(r.output.coeff(0).beta) < kExact);
        CHECK(std::abs(r.output.coeff(1).alpha) < kExact);
        CHECK(std::abs(r.output.coeff(2).beta) < kExact);
        CHECK(r.output.is_physical());
        CHECK(r.channel_label == "A_c");
    }

    SUBCASE("coherent input passes through at unity gain with variance 3") {
        RunResult r = run(build_eo_classical(1.0, 1.0, Complex{1.0, 0.0}));
        QuadratureStats s = quadrature_stats(r.output);
        CHECK(s.mean_plus == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(s.mean_minus == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(s.var_plus == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(s.var_minus == doctest::Approx(3.0).epsilon(1e-12));
    }

    SUBCASE("lambda K = 2 doubles the signal amplltude") {
        RunResult r = run(build_eo_classical(2.0, 1.0));
        CHECK(std::abs(r.output.coeff(0).alpha - 2.0) < kExact);
    }

    SUBCASE("matched gains at any K") {
        for (double k : {0.3, 1.0, 7.5}) {
            Circuit c = build_eo_classical(k, 1.0 / k);
            RunResult r = run(c);
            BogoliubovMode expected =
                c.basis.signal_mode() + c.basis.mode("v1").conjugated() - c.basis.mode("v2");
            CHECK(max_coeff_distance(r.output, expected) < kExact);
        }
    }
}

TEST_CASE("all-optical classical teleporter output") {
    SUBCASE("signal coefficient is exactly one for any gain") {
        for (double g : {1.5, 2.0, 10.0, 1e4}) {
            RunResult r = run(build_ao_classical(g));
            CHECK(std::abs(r.output.coeff(0).alpha - 1.0) < kExact);
            const double w = std::sqrt((g - 1.0) / g);
            CHECK(std::abs(r.output.coeff(1).beta - w) < kExact);
            CHECK(std::abs(r.output.coeff(2).alpha + w) < kExact);
            CHECK(r.output.is_physical());
        }
    }

    SUBCASE("added noise approaches 2 from below") {
        QuadratureStats s100 = quadrature_stats(run(build_ao_classical(100.0)).output);
        CHECK(s100.var_plus - 1.0 == doctest::Approx(1.98).epsilon(1e-12));
        QuadratureStats s1e4 = quadrature_stats(run(build_ao_classical(1e4)).output);
        CHECK(std::abs((s1e4.var_plus - 1.0) - 2.0) <= 2e-4);
    }

    SUBCASE("waste beams are recorded and physical") {
        RunResult r = run(build_ao_classical(2.0));
        REQUIRE(r.discarded.size() == 2);
        CHECK(r.discarded[0].first == "e");
        CHECK(r.discarded[1].first == "f");
        CHECK(r.discarded[0].second.is_physical());
        CHECK(r.discarded[1].second.is_physical());
    }

    SUBCASE("gain at or below one is rejected") {
        CHECK_THROWS_AS(build_ao_classical(1.0), std::invalid_argument);
        CHECK_THROWS_AS(build_ao_classical(0.5), std::invalid_argument);
    }
}

TEST_CASE("all-optical quantum teleporter output") {
    SUBCASE("coefficients carry the EPR-cancelled weight") {
        const double g = 1e6, h = 25.0;
        RunResult r = run(build_ao_quantum(g, h));
        const double w = std::sqrt((g - 1.0) / g) * (std::sqrt(h) - std::sqrt(h - 1.0));
        CHECK(std::abs(r.output.coeff(0).alpha - 1.0) < kExact);
        CHECK(std::abs(r.output.coeff(1).beta - w) < kExact);
        CHECK(std::abs(r.output.coeff(2).alpha + w) < kExact);
        QuadratureStats s = quadrature_stats(r.output);
        CHECK(s.var_plus - 1.0 == doctest::Approx(0.020410268262587572).epsilon(1e-9));
    }

    SUBCASE("no entanglement reduces to the classical scheme, coefficient for coefficient") {
        for (double g : {2.0, 100.0}) {
            RunResult quantum = run(build_ao_quantum(g, 1.0));
            RunResult classical = run(build_ao_classical(g));
            CHECK(max_coeff_distance(quantum.output, classical.output) < kExact);
        }
    }

    SUBCASE("strong entanglement hands the input through untouched") {
        RunResult r = run(build_ao_quantum(1e6, 1e6, false, Complex{0.3, -0.7}));
        QuadratureStats s = quadrature_stats(r.output);
        CHECK(s.var_plus - 1.0 < 1e-5);
        CHECK(std::abs(r.output.displacement() - Complex{0.3, -0.7}) < kExact);
    }

    SUBCASE("composite amplifier variant matches the ideal-element variant") {
        for (double g : {1.5, 2.0, 10.0}) {
            RunResult ideal = run(build_ao_quantum(g, 2.0, false));
            RunResult composite = run(build_ao_quantum(g, 2.0, true));
            CHECK(max_coeff_distance(ideal.output, composite.output) < kExact);
            const BogoliubovMode* e_ideal = ideal.find("e");
            const BogoliubovMode* e_composite = composite.find("e");
            REQUIRE(e_ideal);
            REQUIRE(e_composite);
            CHECK(max_coeff_distance(*e_ideal, *e_composite) < kExact);
        }
    }

    SUBCASE("waste beams e and f are recorded") {
        RunResult r = run(build_ao_quantum(2.0, 2.0, true));
        REQUIRE(r.discarded.size() == 2);
        CHECK(r.discarded[0].first == "e");
        CHECK(r.discarded[1].first == "f");
        CHECK(r.channel_label == "a_c");
    }
}

TEST_CASE("composite amplifier fragment") {
    VacuumBasis basis = VacuumBasis::with_signal("a_in", {"v1", "v2"});
    BogoliubovMode a = basis.signal_mode(Complex{0.2, 0.1});

    SUBCASE("vacuum noise mode reproduces the ideal amplifier") {
        for (double g : {1.0, 1.5, 2.0, 10.0}) {
            CompositeAmplifier frag = composite_amplifier(a, basis.mode("v1"), g);
            auto ideal = ideal_linear_amplifier(a, basis.mode("v1"), g);
            CHECK(max_coeff_distance(frag.amplified, ideal.amplified) < kExact);
            CHECK(max_coeff_distance(frag.waste, ideal.idler) < kExact);
            CHECK(frag.amplified.is_physical());
            CHECK(frag.waste.is_physical());
        }
    }

    SUBCASE("unit gain passes both beams through") {
        CompositeAmplifier frag = composite_amplifier(a, basis.mode("v1"), 1.0);
        CHECK(max_coeff_distance(frag.amplified, a) < kExact);
        CHECK(max_coeff_distance(frag.waste, basis.mode("v1")) < kExact);
    }

    SUBCASE("EPR noise mode gives sqrt(G) a_in + sqrt(G-1) b1^dag") {
        auto [b1, b2] = nondegenerate_pa(basis.mode("v1"), basis.mode("v2"), 3.0);
        const double g = 2.0;
        CompositeAmplifier frag = composite_amplifier(a, b1, g);
        BogoliubovMode expected = std::sqrt(g) * a + std::sqrt(g - 1.0) * b1.conjugated();
        CHECK(max_coeff_distance(frag.amplified, expected) < kExact);
        // waste = sqrt(G) b1 + sqrt(G-1) a_in^dag
        BogoliubovMode expected_waste = std::sqrt(g) * b1 + std::sqrt(g - 1.0) * a.conjugated();
        CHECK(max_coeff_distance(frag.waste, expected_waste) < kExact);
        CHECK(std::abs(frag.waste.coeff(0).beta - std::sqrt(g - 1.0)) < kExact);
    }

    SUBCASE("intermediate beams follow the two opposite pump phases") {
        const double g = 2.0;
        CompositeAmplifier frag = composite_amplifier(a, basis.mode("v1"), g);
        CHECK(max_coeff_distance(frag.squeezed_sum, degenerate_pa(frag.mixed_sum, g, 0.0)) <
              kExact);
        BogoliubovMode expected_diff =
            std::sqrt(g) * frag.mixed_diff - std::sqrt(g - 1.0) * frag.mixed_diff.conjugated();
        CHECK(max_coeff_distance(frag.squeezed_diff, expected_diff) < 1e-10);
    }
}

TEST_CASE("running circuits") {
    SUBCASE("empty circuit echoes the input") {
        Circuit c{VacuumBasis::with_signal("a", {}), Complex{0.5, 0.5}, {}, "a", {}, {}};
        RunResult r = run(c);
        CHECK(max_coeff_distance(r.output, r.input) == 0.0);
        CHECK(r.output.displacement() == Complex{0.5, 0.5});
    }

    SUBCASE("dangling operand names the step") {
        Circuit c{VacuumBasis::with_signal("a", {"v"}), {}, {}, "a", {}, {}};
        c.steps.push_back(BsStep{0.5, "a", "ghost", "x", "y"});
        CHECK_THROWS_WITH_AS(run(c), doctest::Contains("step 1"), std::invalid_argument);
        CHECK_THROWS_WITH_AS(run(c), doctest::Contains("ghost"), std::invalid_argument);
    }

    SUBCASE("redefined result names the step") {
        Circuit c{VacuumBasis::with_signal("a", {"v"}), {}, {}, "a", {}, {}};
        c.steps.push_back(BsStep{0.5, "a", "v", "x", "v"});
        CHECK_THROWS_WITH_AS(run(c), doctest::Contains("already defined"), std::invalid_argument);
    }

    SUBCASE("self-mixing is rejected") {
        Circuit c{VacuumBasis::with_signal("a", {"v"}), {}, {}, "a", {}, {}};
        c.steps.push_back(BsStep{0.5, "v", "v", "x", "y"});
        CHECK_THROWS_WITH_AS(run(c), doctest::Contains("distinct"), std::invalid_argument);
    }

    SUBCASE("displacement override") {
        Circuit c = build_eo_classical(1.0, 1.0);
        RunResult r = run(c, Complex{2.0, 0.0});
        CHECK(r.output.displacement() == Complex{2.0, 0.0});
    }
}

TEST_CASE("high-gain channel constants line up with dual homodyne") {
    // K = sqrt(G) makes the photocurrent channel and the amplified beam agree
    // on the signal coefficient exactly and on the conjugate term in ratio.
    VacuumBasis basis = VacuumBasis::with_signal("a_in", {"v1", "v2"});
    for (double g : {100.0, 1e4, 1e6}) {
        BogoliubovMode chan = eo_classical_channel(basis.signal_mode(), basis.mode("v1"),
                                                   std::sqrt(g));
        auto amp = ideal_linear_amplifier(basis.signal_mode(), basis.mode("v1"), g);
        CHECK(std::abs(chan.coeff(0).alpha - amp.amplified.coeff(0).alpha) < kExact);
        const double ratio = chan.coeff(1).beta.real() / amp.amplified.coeff(1).beta.real();
        CHECK(ratio == doctest::Approx(1.0).epsilon(2.0 / g));
        // both sit far above the quantum limit
        CHECK(quadrature_stats(chan).var_plus >= 100.0);
        CHECK(quadrature_stats(amp.amplified).var_plus >= 100.0);
    }
}

TEST_CASE("commutator bookkeeping across whole circuits") {
    std::mt19937 rng(99);

    SUBCASE("random circuits keep physical modes physical and channels formal") {
        qot::testing::RandomCircuitOptions opts;
        for (int trial = 0; trial < 300; ++trial) {
            auto random = qot::testing::make_random_circuit(rng, opts);
            RunResult r = run(random.circuit);
            for (const auto& [name, mode] : r.modes) {
                const bool is_channel =
                    std::find(random.channel_modes.begin(), random.channel_modes.end(), name) !=
                    random.channel_modes.end();
                if (is_channel) {
                    CHECK(std::abs(mode.commutator_norm()) < 1e-10);
                } else {
                    CHECK(std::abs(mode.commutator_norm() - 1.0) < 1e-10);
                }
            }
        }
    }

    SUBCASE("live modes of unitary circuits account for every basis mode") {
        qot::testing::RandomCircuitOptions opts;
        opts.allow_classical_pair = false;
        for (int trial = 0; trial < 100; ++trial) {
            auto random = qot::testing::make_random_circuit(rng, opts);
            RunResult r = run(random.circuit);
            std::unordered_set<std::string> consumed;
            for (const auto& step : random.circuit.steps) {
                for (const auto& name : step_operands(step)) consumed.insert(name);
            }
            double total = 0.0;
            for (const auto& [name, mode] : r.modes) {
                if (!consumed.count(name)) total += mode.commutator_norm();
            }
            CHECK(total == doctest::Approx(double(random.circuit.basis.size())).epsilon(1e-9));
        }
    }

    SUBCASE("teleporter output alone undercounts; output plus waste accounts for all") {
        for (bool composite : {false, true}) {
            RunResult r = run(build_ao_quantum(2.0, 2.0, composite));
            double total = r.output.commutator_norm();
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
            for (const auto& [name, mode] : r.discarded) total += mode.commutator_norm();
            CHECK(total == doctest::Approx(3.0).epsilon(1e-10));
        }
    }
}
