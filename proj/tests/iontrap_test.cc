// Copyright 2026 The qecc-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qecc/iontrap.hpp"

#include "gtest/gtest.h"
#include "qecc/codes.hpp"
#include "test_util.hpp"

using namespace qecc;
using P = PulseKind;

namespace {

int bit(std::size_t index, std::size_t pos, std::size_t n) { return static_cast<int>((index >> (n - 1 - pos)) & 1); }

// Largest deviation of a simulated operator from diag(phase(basis index)).
template <typename F>
double diagonal_error(const Matrix &u, F phase) {
    double worst = 0;
    for (Eigen::Index r = 0; r < u.rows(); ++r) {
        for (Eigen::Index c = 0; c < u.cols(); ++c) {
            cplx want = r == c ? cplx(phase(static_cast<std::size_t>(r))) : cplx(0);
            worst = std::max(worst, std::abs(u(r, c) - want));
        }
    }
    return worst;
}

std::vector<P> kinds(const PulseSequence &seq) {
    std::vector<P> out;
    for (const Pulse &p : seq.pulses) {
        out.push_back(p.kind);
    }
    return out;
}

}  // namespace

TEST(iontrap, PrimitiveActions) {
    TrapState g1 = TrapState::basis({Level::g}, 1);
    TrapState w = apply_pulse(g1, Pulse::make(P::WPhon, 0));
    EXPECT_NEAR(std::abs(w[TrapState::index_of({Level::e}, 0)] - cplx(0, -1)), 0, 1e-15);

    TrapState v = apply_pulse(g1, Pulse::make(P::VPulse, 0));
    EXPECT_NEAR(std::abs(v[TrapState::index_of({Level::g}, 1)] - cplx(-1)), 0, 1e-15);

    TrapState vp = apply_pulse(g1, Pulse::make(P::VPhon, 0));
    EXPECT_NEAR(std::abs(vp[TrapState::index_of({Level::ep}, 0)] - cplx(0, -1)), 0, 1e-15);

    // Fixed points listed in the primitive tables.
    for (P k : {P::WPhon, P::VPulse, P::VPhon}) {
        for (auto [lvl, ph] : {std::pair{Level::g, 0}, std::pair{Level::e, 1}}) {
            TrapState s = apply_pulse(TrapState::basis({lvl}, ph), Pulse::make(k, 0));
            EXPECT_NEAR(std::abs(s[TrapState::index_of({lvl}, ph)] - cplx(1)), 0, 1e-15);
        }
    }
    TrapState e0 = apply_pulse(TrapState::basis({Level::e}, 0), Pulse::make(P::WPhon, 0));
    EXPECT_NEAR(std::abs(e0[TrapState::index_of({Level::g}, 1)] - cplx(0, -1)), 0, 1e-15);
}

TEST(iontrap, PulseMatricesAreUnitaryAndDaggersInvert) {
    for (P k : {P::WPhon, P::WPhonDag, P::VPulse, P::VPhon, P::VPhonDag}) {
        Matrix m = detail::pulse_local_matrix(Pulse::make(k, 0));
        EXPECT_LT((m.adjoint() * m - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-15);
    }
    Matrix w = detail::pulse_local_matrix(Pulse::make(P::WPhon, 0));
    Matrix wd = detail::pulse_local_matrix(Pulse::make(P::WPhonDag, 0));
    EXPECT_LT((wd * w - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(iontrap, FusedDoublePhaseTable) {
    PulseSequence seq = compile_cphase({0}, {1, 2});
    EXPECT_EQ(kinds(seq), (std::vector<P>{P::WPhon, P::VPulse, P::VPulse, P::WPhonDag}));
    PulseSimulation sim = simulate_pulse_sequence(seq, 3);
    double err = diagonal_error(sim.unitary, [](std::size_t i) {
        int eps = bit(i, 0, 3), h1 = bit(i, 1, 3), h2 = bit(i, 2, 3);
        return ((h1 * eps + h2 * eps) % 2) ? -1.0 : 1.0;
    });
    EXPECT_LT(err, 1e-12);
    EXPECT_LT(sim.leakage, 1e-12);
    EXPECT_LT(sim.phonon_residual, 1e-12);
}

TEST(iontrap, ThreeControlTwoTargetSequence) {
    PulseSequence seq = compile_cphase({0, 1, 2}, {3, 4});
    EXPECT_EQ(kinds(seq), (std::vector<P>{P::WPhon, P::VPhon, P::VPhon, P::VPulse, P::VPulse, P::VPhonDag,
                                          P::VPhonDag, P::WPhonDag}));
    EXPECT_EQ(seq.pulses[1].ion, 1u);
    EXPECT_EQ(seq.pulses[5].ion, 2u);
    PulseSimulation sim = simulate_pulse_sequence(seq, 5);
    double err = diagonal_error(sim.unitary, [](std::size_t i) {
        int e = bit(i, 0, 5) * bit(i, 1, 5) * bit(i, 2, 5);
        return ((bit(i, 3, 5) * e + bit(i, 4, 5) * e) % 2) ? -1.0 : 1.0;
    });
    EXPECT_LT(err, 1e-12);
    EXPECT_LT(sim.leakage, 1e-12);
    EXPECT_LT(sim.phonon_residual, 1e-12);
}

TEST(iontrap, TwoControlThreeTargetSequence) {
    PulseSequence seq = compile_cphase({0, 1}, {2, 3, 4});
    EXPECT_EQ(kinds(seq), (std::vector<P>{P::WPhon, P::VPhon, P::VPulse, P::VPulse, P::VPulse, P::VPhon, P::WPhon}));
    PulseSimulation sim = simulate_pulse_sequence(seq, 5);
    double err = diagonal_error(sim.unitary, [](std::size_t i) {
        int e = bit(i, 0, 5) * bit(i, 1, 5);
        return (((bit(i, 2, 5) + bit(i, 3, 5) + bit(i, 4, 5)) * e) % 2) ? -1.0 : 1.0;
    });
    EXPECT_LT(err, 1e-12);
    EXPECT_LT(sim.leakage, 1e-12);
    EXPECT_LT(sim.phonon_residual, 1e-12);
}

TEST(iontrap, OddTargetCountKeepsSecondHalfUndaggered) {
    PulseSequence cz = compile_cphase({0}, {1});
    EXPECT_EQ(kinds(cz), (std::vector<P>{P::WPhon, P::VPulse, P::WPhon}));
    EXPECT_LT(phase_aligned_max_deviation(simulate_pulse_sequence(cz, 2).unitary, gates::CZ().matrix()), 1e-12);
    EXPECT_LT(diagonal_error(simulate_pulse_sequence(cz, 2).unitary, [](std::size_t i) { return i == 3 ? -1.0 : 1.0; }),
              1e-12);

    // Daggering the second half with a single target flips |10> instead of |11>.
    PulseSequence wrong{{Pulse::make(P::WPhon, 0), Pulse::make(P::VPulse, 1), Pulse::make(P::WPhonDag, 0)}};
    PulseSimulation sim = simulate_pulse_sequence(wrong, 2);
    EXPECT_LT(diagonal_error(sim.unitary, [](std::size_t i) { return i == 2 ? -1.0 : 1.0; }), 1e-12);
    EXPECT_GT(phase_aligned_max_deviation(sim.unitary, gates::CZ().matrix()), 0.5);
}

TEST(iontrap, CostLaw) {
    EXPECT_EQ(compile_cphase({0}, {1, 2}).cost(), 4u);
    EXPECT_EQ(compile_cphase({0, 1, 2}, {3, 4}).cost(), 8u);
    EXPECT_EQ(compile_cphase({0, 1}, {2, 3, 4}).cost(), 7u);
    for (std::size_t c = 1; c <= 3; ++c) {
        for (std::size_t k = 1; k + c <= 5; ++k) {
            std::vector<std::size_t> controls, targets;
            for (std::size_t i = 0; i < c; ++i) controls.push_back(i);
            for (std::size_t i = 0; i < k; ++i) targets.push_back(c + i);
            PulseSequence seq = compile_cphase(controls, targets);
            EXPECT_EQ(seq.cost(), 2 * c + k);
            Circuit circ(c + k, {GateOp::cphase(controls, targets)});
            EXPECT_TRUE(verify_compilation(circ, seq).ok) << c << "," << k;
            EXPECT_EQ(pulse_cost(circ), seq.cost());
        }
    }
    EXPECT_THROW(compile_cphase({0}, {0}), ValidationError);
    EXPECT_THROW(compile_cphase({}, {1}), ValidationError);
}

TEST(iontrap, FusionBeatsSeparateGates) {
    Circuit fused(3, {GateOp::cphase({0}, {1, 2})});
    Circuit separate(3, {GateOp::cphase({0}, {1}), GateOp::cphase({0}, {2})});
    EXPECT_EQ(compile_circuit(fused).cost(), 4u);
    EXPECT_EQ(compile_circuit(separate).cost(), 6u);
    EXPECT_LT(phase_aligned_max_deviation(circuit_to_unitary(fused), circuit_to_unitary(separate)), 1e-12);
}

TEST(iontrap, CircuitLevelCosts) {
    EXPECT_EQ(compile_circuit(Circuit(1, {GateOp::single(GateKind::U, 0)})).cost(), 1u);
    EXPECT_EQ(compile_circuit(Circuit(2, {GateOp::cphase({0}, {1})})).cost(), 3u);
    Circuit cnot(2, {GateOp::cnot(0, 1)});
    EXPECT_EQ(compile_circuit(cnot).cost(), 5u);
    EXPECT_TRUE(verify_compilation(cnot, compile_circuit(cnot)).ok);
    EXPECT_EQ(compile_circuit(Circuit(2)).cost(), 0u);
    EXPECT_EQ(pulse_breakdown(five_qubit_encoder()).size(), five_qubit_encoder().size());
}

TEST(iontrap, EmptySequenceIsIdentity) {
    PulseSimulation sim = simulate_pulse_sequence(PulseSequence{}, 3);
    EXPECT_LT((sim.unitary - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_EQ(sim.leakage, 0.0);
    EXPECT_TRUE(verify_compilation(Circuit(3), PulseSequence{}).ok);
}

TEST(iontrap, RandomCircuitsCompileCorrectly) {
    Rng rng(31);
    for (int trial = 0; trial < 25; ++trial) {
        Circuit c = qecc_test::random_circuit(4, 8, rng);
        VerificationReport r = verify_compilation(c, compile_circuit(c));
        EXPECT_TRUE(r.ok) << c.size();
        EXPECT_LT(r.leakage, 1e-12);
        EXPECT_LT(r.phonon_residual, 1e-12);
    }
}

TEST(iontrap, DeletedPulseFailsVerification) {
    Circuit c(3, {GateOp::single(GateKind::U, 0), GateOp::cphase({0}, {1, 2}), GateOp::cnot(2, 0)});
    PulseSequence seq = compile_circuit(c);
    for (std::size_t i = 0; i < seq.pulses.size(); ++i) {
        if (seq.pulses[i].kind != P::VPulse) {
            continue;
        }
        PulseSequence broken = seq;
        broken.pulses.erase(broken.pulses.begin() + static_cast<std::ptrdiff_t>(i));
        EXPECT_FALSE(verify_compilation(c, broken).ok);
    }
    PulseSequence no_return = seq;
    no_return.pulses.erase(no_return.pulses.begin() + 4);  // closing WPhonDag of the CPHASE
    VerificationReport r = verify_compilation(c, no_return);
    EXPECT_FALSE(r.ok);
    EXPECT_GT(r.phonon_residual + r.leakage, 0.1);
}

TEST(iontrap, EncoderEndToEndAtPulseLevel) {
    Circuit enc = five_qubit_encoder();
    PulseSimulation sim = simulate_pulse_sequence(compile_circuit(enc), 5);
    auto [zero, one] = five_qubit_codewords();
    Matrix produced(32, 2), expected(32, 2);
    produced.col(0) = sim.unitary.col(0);
    produced.col(1) = sim.unitary.col(16);
    expected.col(0) = zero.amplitudes();
    expected.col(1) = one.amplitudes();
    EXPECT_LT(phase_aligned_max_deviation(produced, expected), 1e-10);
    EXPECT_LT(sim.leakage, 1e-12);
    EXPECT_EQ(pulse_cost(enc), 31u);
}

TEST(iontrap, PulseJsonRoundTrip) {
    Circuit c(5, {GateOp::single(GateKind::Vdag, 4), GateOp::cphase({0, 1, 2}, {3, 4}), GateOp::cnot(1, 0)});
    PulseSequence seq = compile_circuit(c);
    EXPECT_EQ(pulses_from_json(pulses_to_json(seq)), seq);
    auto j = pulse_to_json(Pulse::make(P::WPhonDag, 2));
    EXPECT_EQ(j["kind"], "WPhon");
    EXPECT_EQ(j["dag"], true);
    EXPECT_THROW(pulses_from_json(nlohmann::json::parse(R"([{"kind":"Q","ion":0}])")), ValidationError);
}
