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

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qecc/core.hpp"

namespace qecc {

enum class GateKind { U, Udag, V, Vdag, W, Wdag, X, Z, CNOT, CPHASE };

inline constexpr std::array<GateKind, 10> kAllGateKinds = {
    GateKind::U, GateKind::Udag, GateKind::V, GateKind::Vdag, GateKind::W,
    GateKind::Wdag, GateKind::X, GateKind::Z, GateKind::CNOT, GateKind::CPHASE};

inline std::string_view kind_name(GateKind k) {
    switch (k) {
        case GateKind::U:
            return "U";
        case GateKind::Udag:
            return "Udag";
        case GateKind::V:
            return "V";
        case GateKind::Vdag:
            return "Vdag";
        case GateKind::W:
            return "W";
        case GateKind::Wdag:
            return "Wdag";
        case GateKind::X:
            return "X";
        case GateKind::Z:
            return "Z";
        case GateKind::CNOT:
            return "CNOT";
        case GateKind::CPHASE:
            return "CPHASE";
    }
    return "?";
}

inline std::optional<GateKind> kind_from_name(std::string_view name) {
    for (GateKind k : kAllGateKinds) {
        if (kind_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

inline bool is_single_qubit(GateKind k) { return k != GateKind::CNOT && k != GateKind::CPHASE; }

inline GateKind inverse_kind(GateKind k) {
    switch (k) {
        case GateKind::U:
            return GateKind::Udag;
        case GateKind::Udag:
            return GateKind::U;
        case GateKind::V:
            return GateKind::Vdag;
        case GateKind::Vdag:
            return GateKind::V;
        case GateKind::W:
            return GateKind::Wdag;
        case GateKind::Wdag:
            return GateKind::W;
        default:
            return k;
    }
}

inline GateMatrix single_qubit_matrix(GateKind k) {
    switch (k) {
        case GateKind::U:
            return gates::U();
        case GateKind::Udag:
            return gates::Udag();
        case GateKind::V:
            return gates::V();
        case GateKind::Vdag:
            return gates::Vdag();
        case GateKind::W:
            return gates::W();
        case GateKind::Wdag:
            return gates::Wdag();
        case GateKind::X:
            return gates::X();
        case GateKind::Z:
            return gates::Z();
        default:
            throw ValidationError("single_qubit_matrix: " + std::string(kind_name(k)) + " is not a one-qubit gate");
    }
}

/// One gate application. Single-qubit kinds use `targets[0]`; CNOT uses one
/// control and one target; CPHASE may fan out to several controls and targets.
struct GateOp {
    GateKind kind;
    std::vector<Qubit> controls;
    std::vector<Qubit> targets;

    static GateOp single(GateKind k, Qubit q) { return GateOp{k, {}, {q}}; }
    static GateOp cnot(Qubit control, Qubit target) { return GateOp{GateKind::CNOT, {control}, {target}}; }
    static GateOp cphase(std::vector<Qubit> controls, std::vector<Qubit> targets) {
        return GateOp{GateKind::CPHASE, std::move(controls), std::move(targets)};
    }

    bool operator==(const GateOp &) const = default;
    auto operator<=>(const GateOp &) const = default;
};

/// Throws ValidationError naming the op position on any structural problem.
inline void validate_op(const GateOp &op, std::size_t n_qubits, std::size_t position) {
    auto fail = [&](const std::string &why) {
        throw ValidationError(why + " at op " + std::to_string(position));
    };
    if (is_single_qubit(op.kind)) {
        if (op.targets.size() != 1 || !op.controls.empty()) {
            fail(std::string(kind_name(op.kind)) + " needs exactly one target and no controls");
        }
    } else if (op.kind == GateKind::CNOT) {
        if (op.controls.size() != 1 || op.targets.size() != 1) {
            fail("CNOT needs exactly one control and one target");
        }
    } else if (op.controls.empty() || op.targets.empty()) {
        fail("CPHASE needs at least one control and one target");
    }
    std::vector<Qubit> seen;
    for (const auto *list : {&op.controls, &op.targets}) {
        for (Qubit q : *list) {
            if (q >= n_qubits) {
                fail("qubit index " + std::to_string(q) + " out of range");
            }
        }
    }
    for (Qubit c : op.controls) {
        if (std::find(op.targets.begin(), op.targets.end(), c) != op.targets.end()) {
            fail("overlapping control/target");
        }
    }
    for (const auto *list : {&op.controls, &op.targets}) {
        for (Qubit q : *list) {
            if (std::find(seen.begin(), seen.end(), q) != seen.end()) {
                fail("duplicate qubit " + std::to_string(q));
            }
            seen.push_back(q);
        }
    }
}

class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits, std::vector<GateOp> ops = {}) : n_(n_qubits), ops_(std::move(ops)) {
        if (n_ == 0 || n_ > kMaxQubits) {
            throw ValidationError("Circuit: qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
        }
        for (std::size_t i = 0; i < ops_.size(); ++i) {
            validate_op(ops_[i], n_, i);
        }
    }

    std::size_t n_qubits() const { return n_; }
    const std::vector<GateOp> &ops() const { return ops_; }
    std::size_t size() const { return ops_.size(); }
    bool empty() const { return ops_.empty(); }

    Circuit appended(GateOp op) const {
        std::vector<GateOp> ops = ops_;
        ops.push_back(std::move(op));
        return Circuit(n_, std::move(ops));
    }

    bool operator==(const Circuit &) const = default;

  private:
    std::size_t n_;
    std::vector<GateOp> ops_;
};

inline PureState apply_op(const PureState &state, const GateOp &op) {
    switch (op.kind) {
        case GateKind::CNOT:
            return apply_cnot(state, op.controls[0], op.targets[0]);
        case GateKind::CPHASE:
            return apply_controlled_phase(state, op.controls, op.targets);
        default:
            return apply_gate(state, single_qubit_matrix(op.kind), op.targets);
    }
}

inline PureState apply_circuit(const PureState &state, const Circuit &c) {
    if (state.n_qubits() != c.n_qubits()) {
        throw ValidationError("apply_circuit: state has " + std::to_string(state.n_qubits()) +
                              " qubits, circuit has " + std::to_string(c.n_qubits()));
    }
    PureState s = state;
    for (const GateOp &op : c.ops()) {
        s = apply_op(s, op);
    }
    return s;
}

/// Product of the op matrices in application order.
inline Matrix circuit_to_unitary(const Circuit &c) {
    const auto dim = static_cast<Eigen::Index>(detail::dimension_of(c.n_qubits()));
    Matrix u(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        u.col(col) = apply_circuit(PureState::basis(c.n_qubits(), static_cast<std::size_t>(col)), c).amplitudes();
    }
    return u;
}

/// Reversed op order, each op replaced by its inverse.
inline Circuit invert_circuit(const Circuit &c) {
    std::vector<GateOp> ops;
    ops.reserve(c.size());
    for (auto it = c.ops().rbegin(); it != c.ops().rend(); ++it) {
        GateOp op = *it;
        op.kind = inverse_kind(op.kind);
        ops.push_back(std::move(op));
    }
    return Circuit(c.n_qubits(), std::move(ops));
}

}  // namespace qecc
