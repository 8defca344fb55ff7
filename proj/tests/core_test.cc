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


#include "qecc/core.hpp"

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace qecc;

namespace {

const double s = 1.0 / std::sqrt(2.0);

// Full 2^n matrix of a gate on `qubits`, built independently of embed_gate by
// reading off matrix elements bit by bit.
Matrix padded(std::size_t n, const Matrix &g, const std::vector<Qubit> &qubits) {
    std::size_t dim = std::size_t{1} << n;
    Matrix out = Matrix::Zero(dim, dim);
    auto sub = [&](std::size_t idx) {
        std::size_t r = 0;
        for (Qubit q : qubits) {
            r = (r << 1) | ((idx >> (n - 1 - q)) & 1);
        }
        return r;
    };
    auto rest = [&](std::size_t idx) {
        for (Qubit q : qubits) {
            idx &= ~(std::size_t{1} << (n - 1 - q));
        }
        return idx;
    };
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if (rest(r) == rest(c)) {
                out(r, c) = g(sub(r), sub(c));
            }
        }
    }
    return out;
}

}  // namespace

TEST(core, UOnZeroGivesPlus) {
    PureState out = apply_gate(PureState::basis(1, 0), gates::U(), {0});
    EXPECT_NEAR(std::abs(out[0] - s), 0, 1e-12);
    EXPECT_NEAR(std::abs(out[1] - s), 0, 1e-12);
}

TEST(core, ZOnZeroIsIdentity) {
    PureState out = apply_gate(PureState::basis(1, 0), gates::Z(), {0});
    EXPECT_EQ(out, PureState::basis(1, 0));
}

TEST(core, VOnZero) {
    PureState out = apply_gate(PureState::basis(1, 0), gates::V(), {0});
    EXPECT_NEAR(std::abs(out[0] - s), 0, 1e-12);
    EXPECT_NEAR(std::abs(out[1] - cplx(0, -s)), 0, 1e-12);
}

TEST(core, BasisOrderingQubitZeroIsMostSignificant) {
    PureState a = PureState::from_bits("01");
    EXPECT_EQ(a[1], cplx(1.0));
    PureState flipped = apply_gate(PureState::basis(2, 0), gates::X(), {0});
    EXPECT_EQ(flipped[2], cplx(1.0));
}

TEST(core, ApplyGateRejectsBadQubitLists) {
    PureState psi = PureState::basis(2, 0);
    EXPECT_THROW(apply_gate(psi, gates::CZ(), {0, 0}), ValidationError);
    EXPECT_THROW(apply_gate(psi, gates::U(), {2}), ValidationError);
    EXPECT_THROW(apply_gate(psi, gates::CZ(), {0}), ValidationError);
}

TEST(core, GateMatrixRejectsNonUnitary) {
    EXPECT_THROW(GateMatrix(gates::mat2(1, 1, 0, 1)), ValidationError);
    EXPECT_THROW(GateMatrix(Matrix::Identity(3, 3)), ValidationError);
}

TEST(core, StateInvariantsAreChecked) {
    Vector v(2);
    v << 1, 1;
    EXPECT_THROW(PureState(1, v), ValidationError);
    EXPECT_THROW(PureState(2, Vector::Zero(2)), ValidationError);
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.5;
    m(1, 1) = -0.5;
    EXPECT_THROW(DensityMatrix(1, m), ValidationError);
}

TEST(core, ControlledPhaseExamples) {
    std::vector<Qubit> c{0}, t{1}, t12{1, 2};
    PureState out = apply_controlled_phase(PureState::from_bits("11"), c, t);
    EXPECT_EQ(out[3], cplx(-1.0));
    out = apply_controlled_phase(PureState::from_bits("00"), c, t);
    EXPECT_EQ(out[0], cplx(1.0));
    out = apply_controlled_phase(PureState::from_bits("111"), c, t12);
    EXPECT_EQ(out[7], cplx(1.0));
    out = apply_controlled_phase(PureState::from_bits("110"), c, t12);
    EXPECT_EQ(out[6], cplx(-1.0));
}

TEST(core, ControlledPhaseRejectsOverlap) {
    std::vector<Qubit> c{0}, t{0, 1};
    EXPECT_THROW(apply_controlled_phase(PureState::basis(2, 0), c, t), ValidationError);
}

TEST(core, CnotExamples) {
    EXPECT_EQ(apply_cnot(PureState::from_bits("10"), 0, 1), PureState::from_bits("11"));
    EXPECT_EQ(apply_cnot(PureState::from_bits("00"), 0, 1), PureState::from_bits("00"));
    EXPECT_THROW(apply_cnot(PureState::basis(2, 0), 1, 1), ValidationError);
}

TEST(core, CnotEqualsDecomposition) {
    Matrix cz = Matrix::Identity(4, 4);
    cz(3, 3) = -1;
    Matrix iu = padded(2, gates::U().matrix(), {1});
    Matrix iudag = padded(2, gates::Udag().matrix(), {1});
    Matrix cnot = Matrix::Zero(4, 4);
    cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1;
    EXPECT_LT((iu * cz * iudag - cnot).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((gates::CNOT().matrix() - cnot).cwiseAbs().maxCoeff(), 1e-12);
    for (std::size_t b = 0; b < 4; ++b) {
        PureState direct = apply_cnot(PureState::basis(2, b), 0, 1);
        PureState route = apply_gate(PureState::basis(2, b), gates::Udag(), {1});
        std::vector<Qubit> c{0}, t{1};
        route = apply_gate(apply_controlled_phase(route, c, t), gates::U(), {1});
        EXPECT_LT((direct.amplitudes() - route.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(core, WIsVTimesUdagger) {
    Matrix w = gates::V().matrix() * gates::U().matrix().adjoint();
    EXPECT_LT((gates::W().matrix() - w).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(core, ApplyGateMatchesPaddedMatrix) {
    Rng rng(11);
    const std::vector<std::pair<GateMatrix, std::vector<Qubit>>> cases = {
        {gates::U(), {2}},
        {gates::V(), {0}},
        {gates::CNOT(), {3, 1}},
        {gates::CZ(), {0, 2}},
        {GateMatrix(padded(3, gates::W().matrix(), {0}) * padded(3, gates::CNOT().matrix(), {1, 2})), {1, 3, 0}},
    };
    for (int trial = 0; trial < 20; ++trial) {
        PureState psi = qecc_test::random_state(4, rng);
        for (const auto &[g, qs] : cases) {
            PureState out = apply_gate(psi, g, qs);
            Vector ref = padded(4, g.matrix(), qs) * psi.amplitudes();
            EXPECT_LT((out.amplitudes() - ref).cwiseAbs().maxCoeff(), 1e-12);
            EXPECT_LT(std::abs(out.amplitudes().norm() - 1.0), 1e-12);
            EXPECT_LT((embed_gate(4, g, qs) - padded(4, g.matrix(), qs)).cwiseAbs().maxCoeff(), 1e-12);
        }
    }
}

TEST(core, MeasureDeterministicAndSampled) {
    std::vector<Qubit> q0{0};
    PureState psi = PureState::basis(1, 0).tensor(PureState::qubit(0.6, 0.8));
    auto m = measure_qubits(psi, q0, "0");
    EXPECT_NEAR(m.probability, 1.0, 1e-12);
    EXPECT_THROW(measure_qubits(psi, q0, "1"), ValidationError);

    PureState plus = PureState::qubit(1, 1);
    auto probs = outcome_probabilities(plus, q0);
    EXPECT_NEAR(probs[0], 0.5, 1e-12);
    EXPECT_NEAR(probs[1], 0.5, 1e-12);
    auto one = measure_qubits(plus, q0, "1");
    EXPECT_EQ(one.collapsed, PureState::basis(1, 1));

    Rng rng(3);
    int ones = 0;
    for (int i = 0; i < 4000; ++i) {
        ones += measure_qubits(plus, q0, rng).outcome == "1";
    }
    EXPECT_NEAR(ones / 4000.0, 0.5, 0.03);
}

TEST(core, PartialTraceExamples) {
    DensityMatrix r = partial_trace(DensityMatrix::from_pure(PureState::basis(2, 0)), {0});
    EXPECT_NEAR(std::abs(r(0, 0) - 1.0), 0, 1e-12);
    PureState bell = PureState::normalized(2, (Vector(4) << 1, 0, 0, 1).finished());
    for (Qubit keep : {Qubit{0}, Qubit{1}}) {
        DensityMatrix red = partial_trace(DensityMatrix::from_pure(bell), {keep});
        EXPECT_LT((red.entries() - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_THROW(partial_trace(DensityMatrix::from_pure(bell), std::span<const Qubit>{}), ValidationError);
}

TEST(core, PartialTraceOfRandomMixedStates) {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Matrix rho = Matrix::Zero(8, 8);
        for (int k = 0; k < 3; ++k) {
            Vector v = qecc_test::random_state(3, rng).amplitudes();
            rho += v * v.adjoint() / 3.0;
        }
        DensityMatrix d(3, rho);
        EXPECT_NEAR(partial_trace(d, {0, 2}).entries().trace().real(), 1.0, 1e-12);
        EXPECT_NEAR(partial_trace(d, {1}).entries().trace().real(), 1.0, 1e-12);
        EXPECT_LT((partial_trace(d, {0, 1, 2}).entries() - rho).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(core, FidelityExamples) {
    Rng rng(9);
    PureState psi = qecc_test::random_state(2, rng);
    EXPECT_NEAR(fidelity(psi, psi), 1.0, 1e-12);
    EXPECT_NEAR(fidelity(PureState::basis(1, 0), PureState::basis(1, 1)), 0.0, 1e-12);
    PureState rotated(2, std::polar(1.0, 0.7) * psi.amplitudes());
    EXPECT_NEAR(fidelity(psi, rotated), 1.0, 1e-12);
    EXPECT_NEAR(phase_aligned_distance(psi, rotated), 0.0, 1e-12);
    EXPECT_THROW(fidelity(psi, PureState::basis(1, 0)), ValidationError);
}
