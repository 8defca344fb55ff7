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
 * Small quantum codes: the perfect 5-qubit code, the 3-qubit phase code and
 * the 2-qubit Zeno detection code.
 *
 * Every code encodes the data qubit 0 with ancillas 1..n-1 prepared in |0>.
 * Decoding runs the encoder backwards, reads the ancillas as a syndrome and
 * applies a Pauli correction on qubit 0 looked up from a table that is built
 * by brute force from the encoder itself.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qecc/circuit.hpp"

namespace qecc {

enum class Pauli { I, X, Y, Z };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline GateMatrix pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::I:
            return gates::I();
        case Pauli::X:
            return gates::X();
        case Pauli::Y:
            return gates::Y();
        case Pauli::Z:
            return gates::Z();
    }
    return gates::I();
}

/// A single-qubit Pauli error. The identity carries no qubit.
struct ErrorOp {
    Pauli kind = Pauli::I;
    std::optional<Qubit> qubit;

    static ErrorOp identity() { return {}; }
    static ErrorOp on(Pauli p, Qubit q) {
        if (p == Pauli::I) {
            return {};
        }
        return ErrorOp{p, q};
    }

    std::string name() const {
        if (kind == Pauli::I) {
            return "I";
        }
        return std::string(1, pauli_char(kind)) + std::to_string(*qubit);
    }

    bool operator==(const ErrorOp &) const = default;
};

/// I followed by X, Y, Z on each qubit in turn.
inline std::vector<ErrorOp> single_qubit_paulis(std::size_t n) {
    std::vector<ErrorOp> out{ErrorOp::identity()};
    for (Qubit q = 0; q < n; ++q) {
        for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
            out.push_back(ErrorOp::on(p, q));
        }
    }
    return out;
}

/// I followed by P on each qubit.
inline std::vector<ErrorOp> single_qubit_errors_of(Pauli p, std::size_t n) {
    std::vector<ErrorOp> out{ErrorOp::identity()};
    for (Qubit q = 0; q < n; ++q) {
        out.push_back(ErrorOp::on(p, q));
    }
    return out;
}

/// Pauli applied as a single matrix; Y = iXZ.
inline PureState apply_error(const PureState &state, const ErrorOp &e) {
    if (e.kind == Pauli::I) {
        return state;
    }
    if (!e.qubit || *e.qubit >= state.n_qubits()) {
        throw ValidationError("apply_error: bad qubit for " + e.name());
    }
    return apply_gate(state, pauli_matrix(e.kind), {*e.qubit});
}

enum class DecoderKind { Correcting, DetectionOnly };

struct CodeSpec {
    std::string name;
    std::size_t n_physical;
    PureState logical_zero;
    PureState logical_one;
    std::optional<Circuit> encoder;
    DecoderKind decoder = DecoderKind::Correcting;
    /// Error set the syndrome table is built over.
    std::vector<ErrorOp> correctable;
};

enum class Correction { I, X, Z, XZ };

inline std::string_view correction_name(Correction c) {
    switch (c) {
        case Correction::I:
            return "I";
        case Correction::X:
            return "X";
        case Correction::Z:
            return "Z";
        case Correction::XZ:
            return "XZ";
    }
    return "?";
}

/// X Z as one matrix (Z acts first).
inline Matrix correction_matrix(Correction c) {
    switch (c) {
        case Correction::I:
            return gates::I().matrix();
        case Correction::X:
            return gates::X().matrix();
        case Correction::Z:
            return gates::Z().matrix();
        case Correction::XZ:
            return gates::X().matrix() * gates::Z().matrix();
    }
    return gates::I().matrix();
}

struct SyndromeEntry {
    Correction correction;
    std::vector<ErrorOp> errors;  // error classes that produce this syndrome
};

struct SyndromeTable {
    std::size_t n_ancilla = 0;
    std::map<std::string, SyndromeEntry> entries;

    const SyndromeEntry *find(const std::string &syndrome) const {
        auto it = entries.find(syndrome);
        return it == entries.end() ? nullptr : &it->second;
    }
};

namespace detail {

inline std::vector<Qubit> ancilla_qubits(std::size_t n) {
    std::vector<Qubit> out;
    for (Qubit q = 1; q < n; ++q) {
        out.push_back(q);
    }
    return out;
}

/// psi (x) |0...0>.
inline PureState with_ancillas(const PureState &psi, std::size_t n_physical) {
    if (psi.n_qubits() != 1) {
        throw ValidationError("encode: input must be a single qubit");
    }
    return psi.tensor(PureState::basis(n_physical - 1, 0));
}

/// Amplitudes of data qubit 0 with the ancillas fixed to `syndrome`.
inline Vector data_amplitudes(const PureState &state, std::size_t syndrome) {
    const std::size_t n_anc = state.n_qubits() - 1;
    Vector v(2);
    v(0) = state[syndrome];
    v(1) = state[(std::size_t{1} << n_anc) | syndrome];
    return v;
}

}  // namespace detail

/// The two 5-qubit codewords as explicit +-1/sqrt8 superpositions.
inline std::pair<PureState, PureState> five_qubit_codewords() {
    static const std::pair<const char *, int> zero[] = {
        {"00000", 1}, {"00110", 1}, {"01001", 1}, {"01111", -1},
        {"10011", 1}, {"10101", 1}, {"11010", 1}, {"11100", -1}};
    static const std::pair<const char *, int> one[] = {
        {"00011", 1},  {"00101", -1}, {"01010", -1}, {"01100", -1},
        {"10000", -1}, {"10110", 1},  {"11001", 1},  {"11111", 1}};
    auto build = [](const auto &terms) {
        Vector v = Vector::Zero(32);
        const double a = 1.0 / std::sqrt(8.0);
        for (const auto &[label, sign] : terms) {
            v(static_cast<Eigen::Index>(detail::outcome_index(label))) = sign * a;
        }
        return PureState(5, std::move(v));
    };
    return {build(zero), build(one)};
}

/// Gate-level encoder for five_qubit_codewords(); reproduces both codewords
/// exactly, with no global phase.
///
/// The supports of both codewords are cosets of the linear code spanned by
/// 01001, 00110 and 10011, offset by 10000 for |1_L>. Ancillas 1, 2 and 3
/// carry the three coset coordinates; a CNOT network writes them onto the
/// register; the sign pattern is the quadratic form
/// q0 + q2 + q0q1 + q0q3 + q1q3 + q2q3, realized by Z and CPHASE gates.
inline Circuit five_qubit_encoder() {
    using K = GateKind;
    return Circuit(5, {
                          GateOp::single(K::U, 1),
                          GateOp::single(K::U, 2),
                          GateOp::single(K::U, 3),
                          // CNOT(3->0) and CNOT(3->4) fused around one double-target phase.
                          GateOp::single(K::Udag, 0),
                          GateOp::single(K::Udag, 4),
                          GateOp::cphase({3}, {0, 4}),
                          GateOp::single(K::U, 0),
                          GateOp::single(K::U, 4),
                          GateOp::cnot(1, 4),
                          GateOp::cnot(2, 3),
                          GateOp::single(K::Z, 0),
                          GateOp::single(K::Z, 2),
                          GateOp::cphase({3}, {0, 1, 2}),
                          GateOp::cphase({0}, {1}),
                      });
}

inline CodeSpec five_qubit_code() {
    auto [zero, one] = five_qubit_codewords();
    return CodeSpec{"five-qubit", 5, zero, one, five_qubit_encoder(), DecoderKind::Correcting,
                    single_qubit_paulis(5)};
}

/// Phase code over |+++> and U(x)U(x)U|111> = -|--->.
inline CodeSpec three_qubit_phase_code() {
    using K = GateKind;
    Circuit enc(3, {GateOp::cnot(0, 1), GateOp::cnot(0, 2), GateOp::single(K::U, 0), GateOp::single(K::U, 1),
                    GateOp::single(K::U, 2)});
    PureState zero = apply_circuit(PureState::basis(3, 0), enc);
    PureState one = apply_circuit(PureState::basis(3, 0b100), enc);
    return CodeSpec{"phase3", 3, zero, one, enc, DecoderKind::Correcting, single_qubit_errors_of(Pauli::Z, 3)};
}

/// Zeno detection code over (|00>+|11>)/sqrt2 and (|01>+|10>)/sqrt2. No
/// corrections; decoding only reads the ancilla.
inline CodeSpec two_qubit_zeno_code() {
    Circuit enc(2, {GateOp::single(GateKind::U, 1), GateOp::cnot(1, 0)});
    const double a = gates::kInvSqrt2;
    Vector zero(4), one(4);
    zero << a, 0, 0, a;
    one << 0, a, a, 0;
    return CodeSpec{"zeno2", 2, PureState(2, zero), PureState(2, one), enc, DecoderKind::DetectionOnly, {}};
}

/// alpha|0_L> + beta|1_L>.
inline PureState encode(const CodeSpec &code, const PureState &psi) {
    if (psi.n_qubits() != 1) {
        throw ValidationError("encode: input must be a single qubit");
    }
    Vector v = psi[0] * code.logical_zero.amplitudes() + psi[1] * code.logical_one.amplitudes();
    return PureState(code.n_physical, std::move(v));
}

/// Gate-level route: the encoder circuit applied to psi (x) |0...0>.
inline PureState encode_with_circuit(const CodeSpec &code, const PureState &psi) {
    if (!code.encoder) {
        throw ValidationError("encode_with_circuit: code " + code.name + " has no encoder circuit");
    }
    return apply_circuit(detail::with_ancillas(psi, code.n_physical), *code.encoder);
}

struct EncoderCheck {
    double orthonormality_error;  // max |<i|j> - delta_ij|
    double encoder_deviation;     // max entry deviation after one common global phase; 0 without encoder
    bool ok;
};

/// Codeword orthonormality plus encoder/codeword agreement.
inline EncoderCheck check_code(const CodeSpec &code, double tol = kExactTol) {
    const Vector &z = code.logical_zero.amplitudes();
    const Vector &o = code.logical_one.amplitudes();
    double ortho = std::max({std::abs(z.dot(z) - 1.0), std::abs(o.dot(o) - 1.0), std::abs(z.dot(o))});
    double dev = 0.0;
    if (code.encoder) {
        const auto dim = static_cast<Eigen::Index>(detail::dimension_of(code.n_physical));
        Matrix produced(dim, 2), expected(dim, 2);
        produced.col(0) = encode_with_circuit(code, PureState::basis(1, 0)).amplitudes();
        produced.col(1) = encode_with_circuit(code, PureState::basis(1, 1)).amplitudes();
        expected.col(0) = z;
        expected.col(1) = o;
        dev = phase_aligned_max_deviation(produced, expected);
    }
    return EncoderCheck{ortho, dev, ortho <= tol && dev <= tol};
}

inline constexpr double kCorrectionTol = 1e-10;

/// Brute-force syndrome table: each error is applied to both encoded basis
/// states, the encoder is run backwards, the ancilla pattern is read and the
/// Pauli on qubit 0 that undoes the residual data-qubit map is recorded.
/// Throws if an error yields a nondeterministic syndrome, needs a non-Pauli
/// correction, or collides with a different correction.
inline SyndromeTable build_syndrome_table(const CodeSpec &code) {
    if (!code.encoder) {
        throw ValidationError("build_syndrome_table: code " + code.name + " has no encoder circuit");
    }
    if (code.decoder == DecoderKind::DetectionOnly) {
        throw ValidationError("build_syndrome_table: code " + code.name + " is detection-only");
    }
    const std::size_t n = code.n_physical;
    const Circuit decoder = invert_circuit(*code.encoder);
    const std::vector<Qubit> anc = detail::ancilla_qubits(n);

    SyndromeTable table;
    table.n_ancilla = anc.size();
    for (const ErrorOp &e : code.correctable) {
        Matrix residual(2, 2);
        std::optional<std::size_t> syndrome;
        for (std::size_t j = 0; j < 2; ++j) {
            PureState s = encode_with_circuit(code, PureState::basis(1, j));
            s = apply_circuit(apply_error(s, e), decoder);
            auto probs = outcome_probabilities(s, anc);
            auto it = std::max_element(probs.begin(), probs.end());
            auto o = static_cast<std::size_t>(it - probs.begin());
            if (*it < 1.0 - kCorrectionTol || (syndrome && *syndrome != o)) {
                throw ValidationError("build_syndrome_table: error " + e.name() +
                                      " does not produce a deterministic syndrome");
            }
            syndrome = o;
            residual.col(static_cast<Eigen::Index>(j)) = detail::data_amplitudes(s, o);
        }
        std::optional<Correction> fix;
        for (Correction c : {Correction::I, Correction::X, Correction::Z, Correction::XZ}) {
            Matrix m = correction_matrix(c) * residual;
            if (phase_aligned_max_deviation(m, Matrix::Identity(2, 2)) <= kCorrectionTol) {
                fix = c;
                break;
            }
        }
        if (!fix) {
            throw ValidationError("build_syndrome_table: error " + e.name() +
                                  " is not undone by any Pauli on the data qubit");
        }
        std::string label = detail::outcome_label(*syndrome, anc.size());
        auto [it, inserted] = table.entries.try_emplace(label, SyndromeEntry{*fix, {}});
        if (!inserted && it->second.correction != *fix) {
            throw ValidationError("build_syndrome_table: syndrome " + label + " is shared by " + e.name() + " and " +
                                  it->second.errors.front().name() + " with different corrections");
        }
        it->second.errors.push_back(e);
    }
    return table;
}

struct DecodeResult {
    PureState psi;
    std::string syndrome;
    double probability;
};

/// Runs the encoder backwards, measures the ancillas and applies the table's
/// correction to qubit 0. With `rng` the outcome is sampled; without it the
/// most probable outcome is taken.
inline DecodeResult decode_and_correct(const CodeSpec &code, const SyndromeTable &table, const PureState &state,
                                       Rng *rng = nullptr) {
    if (!code.encoder) {
        throw ValidationError("decode_and_correct: code " + code.name + " has no encoder circuit");
    }
    if (state.n_qubits() != code.n_physical) {
        throw ValidationError("decode_and_correct: expected a " + std::to_string(code.n_physical) + "-qubit state");
    }
    const std::vector<Qubit> anc = detail::ancilla_qubits(code.n_physical);
    PureState s = apply_circuit(state, invert_circuit(*code.encoder));
    std::size_t outcome;
    double p;
    if (rng) {
        auto m = measure_qubits(s, anc, *rng);
        outcome = detail::outcome_index(m.outcome);
        p = m.probability;
    } else {
        auto probs = outcome_probabilities(s, anc);
        auto it = std::max_element(probs.begin(), probs.end());
        outcome = static_cast<std::size_t>(it - probs.begin());
        p = *it;
    }
    std::string label = detail::outcome_label(outcome, anc.size());
    Correction fix = Correction::I;
    if (code.decoder == DecoderKind::Correcting) {
        const SyndromeEntry *entry = table.find(label);
        if (!entry) {
            throw ValidationError("decode_and_correct: syndrome " + label + " not in table");
        }
        fix = entry->correction;
    }
    Vector data = correction_matrix(fix) * detail::data_amplitudes(s, outcome);
    return DecodeResult{PureState::normalized(1, std::move(data)), label, p};
}

/// Decoding as a channel on a full density matrix: inverse encoder, every
/// syndrome branch projected, corrected and kept, ancillas traced out.
/// Syndromes missing from the table (and every branch of a detection-only
/// code) pass without correction.
inline DensityMatrix decode_channel(const CodeSpec &code, const SyndromeTable &table, const DensityMatrix &rho) {
    if (!code.encoder) {
        throw ValidationError("decode_channel: code " + code.name + " has no encoder circuit");
    }
    const Matrix dec = circuit_to_unitary(invert_circuit(*code.encoder));
    const Matrix r = dec * rho.entries() * dec.adjoint();
    const std::size_t n_syn = std::size_t{1} << (code.n_physical - 1);
    Matrix out = Matrix::Zero(2, 2);
    for (std::size_t s = 0; s < n_syn; ++s) {
        Matrix block(2, 2);
        for (std::size_t a = 0; a < 2; ++a) {
            for (std::size_t b = 0; b < 2; ++b) {
                block(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                    r(static_cast<Eigen::Index>(a * n_syn + s), static_cast<Eigen::Index>(b * n_syn + s));
            }
        }
        Correction fix = Correction::I;
        if (code.decoder == DecoderKind::Correcting) {
            if (const SyndromeEntry *entry = table.find(detail::outcome_label(s, code.n_physical - 1))) {
                fix = entry->correction;
            }
        }
        Matrix c = correction_matrix(fix);
        out += c * block * c.adjoint();
    }
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(1, std::move(out));
}

struct KnillLaflammeReport {
    bool ok;
    Matrix witness;  // c_ab = <0_L| E_a^dag E_b |0_L>
    double worst_violation;
    double squared_violation;  // sum of squared violations over all pairs
    std::string worst_pair;    // "E_a,E_b" of the worst violation, empty when ok
};

inline constexpr double kKnillLaflammeTol = 1e-10;

/// Checks <i_L| E_a^dag E_b |j_L> = c_ab delta_ij over all pairs of `errors`.
inline KnillLaflammeReport check_knill_laflamme(const CodeSpec &code, const std::vector<ErrorOp> &errors,
                                                double tol = kKnillLaflammeTol) {
    const std::size_t m = errors.size();
    std::vector<Vector> e0, e1;
    e0.reserve(m);
    e1.reserve(m);
    for (const ErrorOp &e : errors) {
        e0.push_back(apply_error(code.logical_zero, e).amplitudes());
        e1.push_back(apply_error(code.logical_one, e).amplitudes());
    }
    KnillLaflammeReport report{true, Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)), 0.0,
                               0.0, ""};
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            cplx c00 = e0[a].dot(e0[b]);
            cplx c11 = e1[a].dot(e1[b]);
            cplx c01 = e0[a].dot(e1[b]);
            cplx c10 = e1[a].dot(e0[b]);
            report.witness(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = c00;
            double v = std::max({std::abs(c00 - c11), std::abs(c01), std::abs(c10)});
            report.squared_violation += std::norm(c00 - c11) + std::norm(c01) + std::norm(c10);
            if (v > report.worst_violation) {
                report.worst_violation = v;
                report.worst_pair = errors[a].name() + "," + errors[b].name();
            }
        }
    }
    report.ok = report.worst_violation <= tol;
    if (report.ok) {
        report.worst_pair.clear();
    }
    return report;
}

/// Error-detection condition <i_L|E|j_L> = c_E delta_ij for each E; returns
/// the worst violation.
inline double detection_violation(const CodeSpec &code, const std::vector<ErrorOp> &errors) {
    double worst = 0.0;
    for (const ErrorOp &e : errors) {
        Vector z = apply_error(code.logical_zero, e).amplitudes();
        Vector o = apply_error(code.logical_one, e).amplitudes();
        cplx c00 = code.logical_zero.amplitudes().dot(z);
        cplx c11 = code.logical_one.amplitudes().dot(o);
        cplx c01 = code.logical_zero.amplitudes().dot(o);
        cplx c10 = code.logical_one.amplitudes().dot(z);
        worst = std::max({worst, std::abs(c00 - c11), std::abs(c01), std::abs(c10)});
    }
    return worst;
}

}  // namespace qecc
