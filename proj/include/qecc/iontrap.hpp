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

/**
 * @file
 * Cirac-Zoller pulse primitives on 3-level ions sharing one phonon mode, a
 * circuit-to-pulse compiler and an exact pulse-level simulator.
 *
 * Ion levels are g, e (the qubit, g = |0>, e = |1>) and an auxiliary e'.
 * The centre-of-mass phonon mode is truncated to {0, 1}: no primitive maps
 * a state inside that space out of it.
 */

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qecc/circuit.hpp"

namespace qecc {

enum class Level { g = 0, e = 1, ep = 2 };

/// Amplitudes over (3 levels)^n_ions (x) {|0>_cm, |1>_cm}. Ion 0 is the most
/// significant base-3 digit; the phonon number is the least significant.
class TrapState {
  public:
    TrapState(std::size_t n_ions, Vector amplitudes) : n_(n_ions), amps_(std::move(amplitudes)) {
        if (n_ == 0 || n_ > 6) {
            throw ValidationError("TrapState: ion count must be in [1, 6]");
        }
        if (static_cast<std::size_t>(amps_.size()) != dimension_for(n_)) {
            throw ValidationError("TrapState: amplitude vector has the wrong length");
        }
        if (std::abs(amps_.squaredNorm() - 1.0) > kExactTol) {
            throw ValidationError("TrapState: squared norm is not 1");
        }
    }

    static std::size_t dimension_for(std::size_t n_ions) {
        std::size_t d = 2;
        for (std::size_t i = 0; i < n_ions; ++i) {
            d *= 3;
        }
        return d;
    }

    static std::size_t index_of(const std::vector<Level> &levels, int phonon) {
        std::size_t ions = 0;
        for (Level l : levels) {
            ions = ions * 3 + static_cast<std::size_t>(l);
        }
        return ions * 2 + static_cast<std::size_t>(phonon);
    }

    static TrapState basis(const std::vector<Level> &levels, int phonon) {
        if (phonon != 0 && phonon != 1) {
            throw ValidationError("TrapState: phonon number must be 0 or 1");
        }
        Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension_for(levels.size())));
        v(static_cast<Eigen::Index>(index_of(levels, phonon))) = 1.0;
        return TrapState(levels.size(), std::move(v));
    }

    /// Qubit basis state |bits> (bit 1 = e) with the phonon in |0>_cm.
    static TrapState from_qubit_basis(std::size_t n_ions, std::size_t bits) {
        std::vector<Level> levels(n_ions);
        for (std::size_t i = 0; i < n_ions; ++i) {
            levels[i] = detail::get_bit(bits, i, n_ions) ? Level::e : Level::g;
        }
        return basis(levels, 0);
    }

    /// Index of the qubit basis state |bits> with phonon 0.
    static std::size_t qubit_index(std::size_t n_ions, std::size_t bits) {
        std::size_t ions = 0;
        for (std::size_t i = 0; i < n_ions; ++i) {
            ions = ions * 3 + static_cast<std::size_t>(detail::get_bit(bits, i, n_ions));
        }
        return ions * 2;
    }

    std::size_t n_ions() const { return n_; }
    const Vector &amplitudes() const { return amps_; }
    cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

    /// Level of `ion` and phonon number encoded in basis index `index`.
    std::pair<Level, int> decode(std::size_t index, std::size_t ion) const {
        int phonon = static_cast<int>(index % 2);
        std::size_t ions = index / 2;
        for (std::size_t k = n_ - 1; k > ion; --k) {
            ions /= 3;
        }
        return {static_cast<Level>(ions % 3), phonon};
    }

    /// Total population with the phonon excited.
    double phonon_population() const {
        double p = 0;
        for (Eigen::Index i = 1; i < amps_.size(); i += 2) {
            p += std::norm(amps_(i));
        }
        return p;
    }

  private:
    std::size_t n_;
    Vector amps_;
};

enum class PulseKind { WPhon, WPhonDag, VPulse, VPhon, VPhonDag, OneQubit };

struct Pulse {
    PulseKind kind;
    std::size_t ion;
    /// Gate label for OneQubit pulses; ignored otherwise.
    GateKind gate = GateKind::U;

    static Pulse make(PulseKind k, std::size_t ion) { return Pulse{k, ion, GateKind::U}; }
    static Pulse one_qubit(GateKind g, std::size_t ion) { return Pulse{PulseKind::OneQubit, ion, g}; }

    bool operator==(const Pulse &o) const {
        return kind == o.kind && ion == o.ion && (kind != PulseKind::OneQubit || gate == o.gate);
    }
};

struct PulseSequence {
    std::vector<Pulse> pulses;

    /// One unit per laser pulse.
    std::size_t cost() const { return pulses.size(); }

    void append(const PulseSequence &other) { pulses.insert(pulses.end(), other.pulses.begin(), other.pulses.end()); }
    bool operator==(const PulseSequence &) const = default;
};

namespace detail {

/// 6x6 map on (level, phonon) of the addressed ion, local index level*2+phonon.
inline Matrix pulse_local_matrix(const Pulse &p) {
    Matrix m = Matrix::Identity(6, 6);
    constexpr Eigen::Index g1 = 1, e0 = 2, ep0 = 4;
    auto swap_pair = [&](Eigen::Index a, Eigen::Index b, cplx phase) {
        m(a, a) = 0;
        m(b, b) = 0;
        m(b, a) = phase;
        m(a, b) = phase;
    };
    switch (p.kind) {
        case PulseKind::WPhon:
            swap_pair(g1, e0, -kI);
            break;
        case PulseKind::WPhonDag:
            swap_pair(g1, e0, kI);
            break;
        case PulseKind::VPulse:
            m(g1, g1) = -1;
            break;
        case PulseKind::VPhon:
            swap_pair(g1, ep0, -kI);
            break;
        case PulseKind::VPhonDag:
            swap_pair(g1, ep0, kI);
            break;
        case PulseKind::OneQubit: {
            const Matrix r = single_qubit_matrix(p.gate).matrix();
            for (Eigen::Index ph = 0; ph < 2; ++ph) {
                for (Eigen::Index a = 0; a < 2; ++a) {
                    for (Eigen::Index b = 0; b < 2; ++b) {
                        m(a * 2 + ph, b * 2 + ph) = r(a, b);
                    }
                }
            }
            break;
        }
    }
    return m;
}

}  // namespace detail

inline TrapState apply_pulse(const TrapState &s, const Pulse &p) {
    if (p.ion >= s.n_ions()) {
        throw ValidationError("apply_pulse: ion " + std::to_string(p.ion) + " out of range");
    }
    const Matrix m = detail::pulse_local_matrix(p);
    std::size_t stride = 2;  // base-3 place value of the addressed ion, times 2 for the phonon
    for (std::size_t k = s.n_ions() - 1; k > p.ion; --k) {
        stride *= 3;
    }
    Vector out = Vector::Zero(s.amplitudes().size());
    const auto dim = static_cast<std::size_t>(s.amplitudes().size());
    for (std::size_t i = 0; i < dim; ++i) {
        cplx a = s[i];
        if (a == cplx{0.0}) {
            continue;
        }
        auto [level, phonon] = s.decode(i, p.ion);
        const auto col = static_cast<Eigen::Index>(static_cast<std::size_t>(level) * 2 + phonon);
        const std::size_t base = i - static_cast<std::size_t>(level) * stride - static_cast<std::size_t>(phonon);
        for (Eigen::Index row = 0; row < 6; ++row) {
            cplx f = m(row, col);
            if (f != cplx{0.0}) {
                std::size_t j = base + static_cast<std::size_t>(row / 2) * stride + static_cast<std::size_t>(row % 2);
                out(static_cast<Eigen::Index>(j)) += f * a;
            }
        }
    }
    return TrapState(s.n_ions(), std::move(out));
}

/// Fused multi-controlled multi-target phase: W_phon on the first control,
/// V_phon on the remaining controls, V on every target, then the control
/// pulses in reverse order. The second half is daggered iff the number of
/// targets is even, which cancels the (-i) phases picked up on the way in.
/// Cost is 2*controls + targets.
inline PulseSequence compile_cphase(const std::vector<std::size_t> &controls, const std::vector<std::size_t> &targets) {
    if (controls.empty() || targets.empty()) {
        throw ValidationError("compile_cphase: need at least one control and one target");
    }
    GateOp check = GateOp::cphase(controls, targets);
    std::size_t n = 0;
    for (const auto *list : {&controls, &targets}) {
        for (std::size_t q : *list) {
            n = std::max(n, q + 1);
        }
    }
    validate_op(check, n, 0);

    const bool dagger = targets.size() % 2 == 0;
    PulseSequence seq;
    seq.pulses.push_back(Pulse::make(PulseKind::WPhon, controls[0]));
    for (std::size_t i = 1; i < controls.size(); ++i) {
        seq.pulses.push_back(Pulse::make(PulseKind::VPhon, controls[i]));
    }
    for (std::size_t t : targets) {
        seq.pulses.push_back(Pulse::make(PulseKind::VPulse, t));
    }
    for (std::size_t i = controls.size(); i-- > 1;) {
        seq.pulses.push_back(Pulse::make(dagger ? PulseKind::VPhonDag : PulseKind::VPhon, controls[i]));
    }
    seq.pulses.push_back(Pulse::make(dagger ? PulseKind::WPhonDag : PulseKind::WPhon, controls[0]));
    return seq;
}

/// One-qubit gate: 1 pulse. CNOT: Udag, controlled phase, U = 5 pulses.
/// CPHASE: the fused 2c+k lowering.
inline PulseSequence compile_op(const GateOp &op) {
    PulseSequence seq;
    switch (op.kind) {
        case GateKind::CNOT:
            seq.pulses.push_back(Pulse::one_qubit(GateKind::Udag, op.targets[0]));
            seq.append(compile_cphase(op.controls, op.targets));
            seq.pulses.push_back(Pulse::one_qubit(GateKind::U, op.targets[0]));
            break;
        case GateKind::CPHASE:
            seq = compile_cphase(op.controls, op.targets);
            break;
        default:
            seq.pulses.push_back(Pulse::one_qubit(op.kind, op.targets[0]));
            break;
    }
    return seq;
}

inline PulseSequence compile_circuit(const Circuit &c) {
    PulseSequence seq;
    for (const GateOp &op : c.ops()) {
        seq.append(compile_op(op));
    }
    return seq;
}

/// Pulse count per op of `c`, in op order.
inline std::vector<std::size_t> pulse_breakdown(const Circuit &c) {
    std::vector<std::size_t> out;
    out.reserve(c.size());
    for (const GateOp &op : c.ops()) {
        out.push_back(compile_op(op).cost());
    }
    return out;
}

/// Cost without building the pulse list.
inline std::size_t pulse_cost(const GateOp &op) {
    switch (op.kind) {
        case GateKind::CNOT:
            return 5;
        case GateKind::CPHASE:
            return 2 * op.controls.size() + op.targets.size();
        default:
            return 1;
    }
}

inline std::size_t pulse_cost(const Circuit &c) {
    std::size_t total = 0;
    for (const GateOp &op : c.ops()) {
        total += pulse_cost(op);
    }
    return total;
}

struct PulseSimulation {
    Matrix unitary;          // operator induced on {g,e}^n (x) |0>_cm
    double leakage;          // max population left outside that subspace
    double phonon_residual;  // max population left with the phonon excited
};

/// Runs every qubit-subspace basis state (phonon in |0>_cm) through the
/// sequence and projects back; residuals are maxima over inputs.
inline PulseSimulation simulate_pulse_sequence(const PulseSequence &seq, std::size_t n_ions) {
    const std::size_t dim = detail::dimension_of(n_ions);
    PulseSimulation out{Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)), 0.0, 0.0};
    for (std::size_t col = 0; col < dim; ++col) {
        TrapState s = TrapState::from_qubit_basis(n_ions, col);
        for (const Pulse &p : seq.pulses) {
            s = apply_pulse(s, p);
        }
        double inside = 0;
        for (std::size_t row = 0; row < dim; ++row) {
            cplx a = s[TrapState::qubit_index(n_ions, row)];
            out.unitary(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = a;
            inside += std::norm(a);
        }
        out.leakage = std::max(out.leakage, std::max(0.0, 1.0 - inside));
        out.phonon_residual = std::max(out.phonon_residual, s.phonon_population());
    }
    return out;
}

inline constexpr double kCompileTol = 1e-10;
inline constexpr double kLeakageTol = 1e-12;

struct VerificationReport {
    bool ok;
    double deviation;  // phase-aligned max entry deviation from the circuit unitary
    double leakage;
    double phonon_residual;
};

inline VerificationReport verify_compilation(const Circuit &c, const PulseSequence &seq) {
    for (const Pulse &p : seq.pulses) {
        if (p.ion >= c.n_qubits()) {
            throw ValidationError("verify_compilation: pulse addresses ion " + std::to_string(p.ion) +
                                  " but the circuit has " + std::to_string(c.n_qubits()) + " qubits");
        }
    }
    PulseSimulation sim = simulate_pulse_sequence(seq, c.n_qubits());
    double dev = phase_aligned_max_deviation(sim.unitary, circuit_to_unitary(c));
    bool ok = dev <= kCompileTol && sim.leakage < kLeakageTol && sim.phonon_residual < kLeakageTol;
    return VerificationReport{ok, dev, sim.leakage, sim.phonon_residual};
}

// Pulse JSON: [{"kind": "WPhon", "ion": 0, "dag": false}, ...]. Kinds are
// WPhon, V, VPhon and OneQubit; OneQubit adds "gate" (U, V, W, X or Z) and
// uses "dag" for the inverse rotation.

inline nlohmann::json pulse_to_json(const Pulse &p) {
    nlohmann::json j;
    switch (p.kind) {
        case PulseKind::WPhon:
        case PulseKind::WPhonDag:
            j = {{"kind", "WPhon"}, {"ion", p.ion}, {"dag", p.kind == PulseKind::WPhonDag}};
            break;
        case PulseKind::VPulse:
            j = {{"kind", "V"}, {"ion", p.ion}, {"dag", false}};
            break;
        case PulseKind::VPhon:
        case PulseKind::VPhonDag:
            j = {{"kind", "VPhon"}, {"ion", p.ion}, {"dag", p.kind == PulseKind::VPhonDag}};
            break;
        case PulseKind::OneQubit: {
            bool dag = p.gate == GateKind::Udag || p.gate == GateKind::Vdag || p.gate == GateKind::Wdag;
            GateKind base = dag ? inverse_kind(p.gate) : p.gate;
            j = {{"kind", "OneQubit"}, {"ion", p.ion}, {"dag", dag}, {"gate", std::string(kind_name(base))}};
            break;
        }
    }
    return j;
}

inline nlohmann::json pulses_to_json(const PulseSequence &seq) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Pulse &p : seq.pulses) {
        arr.push_back(pulse_to_json(p));
    }
    return arr;
}

inline PulseSequence pulses_from_json(const nlohmann::json &arr) {
    if (!arr.is_array()) {
        throw ValidationError("pulse sequence must be a JSON array");
    }
    PulseSequence seq;
    std::size_t position = 0;
    for (const auto &j : arr) {
        auto where = " at pulse " + std::to_string(position++);
        if (!j.is_object() || !j.contains("kind") || !j.contains("ion") || !j["ion"].is_number_integer() ||
            j["ion"].get<long long>() < 0) {
            throw ValidationError("pulse needs \"kind\" and a non-negative \"ion\"" + where);
        }
        std::string kind = j["kind"].get<std::string>();
        bool dag = j.value("dag", false);
        auto ion = j["ion"].get<std::size_t>();
        if (kind == "WPhon") {
            seq.pulses.push_back(Pulse::make(dag ? PulseKind::WPhonDag : PulseKind::WPhon, ion));
        } else if (kind == "V") {
            // The 2pi pulse is its own inverse.
            seq.pulses.push_back(Pulse::make(PulseKind::VPulse, ion));
        } else if (kind == "VPhon") {
            seq.pulses.push_back(Pulse::make(dag ? PulseKind::VPhonDag : PulseKind::VPhon, ion));
        } else if (kind == "OneQubit") {
            auto g = kind_from_name(j.value("gate", std::string("U")));
            if (!g || !is_single_qubit(*g)) {
                throw ValidationError("OneQubit pulse has an unknown gate" + where);
            }
            seq.pulses.push_back(Pulse::one_qubit(dag ? inverse_kind(*g) : *g, ion));
        } else {
            throw ValidationError("unknown pulse kind '" + kind + "'" + where);
        }
    }
    return seq;
}

}  // namespace qecc
