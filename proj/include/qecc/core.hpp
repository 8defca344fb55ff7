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
 * Dense pure-state and density-matrix simulation over a handful of qubits.
 *
 * Basis convention: qubit 0 is the leftmost label of a ket and the most
 * significant bit of the amplitude index, so |01> has index 1 and |10> has
 * index 2. Every module in the library shares this ordering.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qecc {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Qubit = std::size_t;
using Rng = std::mt19937_64;

/// Raised for malformed inputs: bad indices, dimension mismatches, broken
/// invariants. The CLI maps it to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kExactTol = 1e-12;
inline constexpr double kEigenFloor = -1e-10;
inline constexpr std::size_t kMaxQubits = 10;

inline constexpr cplx kI{0.0, 1.0};

// splitmix64 finalizer.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace detail {

inline std::size_t dimension_of(std::size_t n_qubits) { return std::size_t{1} << n_qubits; }

inline std::size_t bit_of(Qubit q, std::size_t n_qubits) { return n_qubits - 1 - q; }

inline bool get_bit(std::size_t index, Qubit q, std::size_t n_qubits) {
    return (index >> bit_of(q, n_qubits)) & 1U;
}

inline void check_qubits(std::span<const Qubit> qubits, std::size_t n_qubits, const char *what) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] >= n_qubits) {
            throw ValidationError(std::string(what) + ": qubit index " + std::to_string(qubits[i]) +
                                  " out of range for " + std::to_string(n_qubits) + " qubits");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits[i] == qubits[j]) {
                throw ValidationError(std::string(what) + ": duplicate qubit index " +
                                      std::to_string(qubits[i]));
            }
        }
    }
}

inline bool is_unitary(const Matrix &m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

/// Complex amplitude vector over n qubits, normalized to 1.
class PureState {
  public:
    PureState(std::size_t n_qubits, Vector amplitudes) : n_(n_qubits), amps_(std::move(amplitudes)) {
        if (n_ > kMaxQubits) {
            throw ValidationError("PureState: too many qubits (" + std::to_string(n_) + ")");
        }
        if (static_cast<std::size_t>(amps_.size()) != detail::dimension_of(n_)) {
            throw ValidationError("PureState: amplitude vector length " + std::to_string(amps_.size()) +
                                  " does not match 2^" + std::to_string(n_));
        }
        if (std::abs(amps_.squaredNorm() - 1.0) > kExactTol) {
            throw ValidationError("PureState: squared norm " + std::to_string(amps_.squaredNorm()) + " is not 1");
        }
    }

    static PureState basis(std::size_t n_qubits, std::size_t index) {
        Vector v = Vector::Zero(static_cast<Eigen::Index>(detail::dimension_of(n_qubits)));
        if (index >= detail::dimension_of(n_qubits)) {
            throw ValidationError("PureState::basis: index out of range");
        }
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return PureState(n_qubits, std::move(v));
    }

    /// Basis state from a ket label such as "01001" (leftmost character is qubit 0).
    static PureState from_bits(const std::string &bits) {
        std::size_t index = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') {
                throw ValidationError("PureState::from_bits: bad label '" + bits + "'");
            }
            index = (index << 1) | static_cast<std::size_t>(c == '1');
        }
        return basis(bits.size(), index);
    }

    /// alpha|0> + beta|1>, normalized.
    static PureState qubit(cplx alpha, cplx beta) {
        double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
        if (norm == 0.0) {
            throw ValidationError("PureState::qubit: zero vector");
        }
        Vector v(2);
        v << alpha / norm, beta / norm;
        return PureState(1, std::move(v));
    }

    /// Renormalizes before construction; rejects the zero vector.
    static PureState normalized(std::size_t n_qubits, Vector amplitudes) {
        double norm = amplitudes.norm();
        if (norm == 0.0) {
            throw ValidationError("PureState::normalized: zero vector");
        }
        return PureState(n_qubits, amplitudes / norm);
    }

    std::size_t n_qubits() const { return n_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector &amplitudes() const { return amps_; }
    cplx operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

    /// |this> (x) |other>, with this state's qubits first.
    PureState tensor(const PureState &other) const {
        Vector v(static_cast<Eigen::Index>(dimension() * other.dimension()));
        for (std::size_t i = 0; i < dimension(); ++i) {
            v.segment(static_cast<Eigen::Index>(i * other.dimension()), static_cast<Eigen::Index>(other.dimension())) =
                amps_(static_cast<Eigen::Index>(i)) * other.amps_;
        }
        return PureState::normalized(n_ + other.n_, std::move(v));
    }

    bool operator==(const PureState &other) const { return n_ == other.n_ && amps_ == other.amps_; }

  private:
    std::size_t n_;
    Vector amps_;
};

/// Hermitian, unit-trace, positive semidefinite matrix over n qubits.
class DensityMatrix {
  public:
    DensityMatrix(std::size_t n_qubits, Matrix entries) : n_(n_qubits), rho_(std::move(entries)) {
        auto dim = static_cast<Eigen::Index>(detail::dimension_of(n_));
        if (rho_.rows() != dim || rho_.cols() != dim) {
            throw ValidationError("DensityMatrix: shape does not match 2^" + std::to_string(n_));
        }
        if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kExactTol) {
            throw ValidationError("DensityMatrix: not Hermitian");
        }
        if (std::abs(rho_.trace() - cplx{1.0}) > kExactTol) {
            throw ValidationError("DensityMatrix: trace is not 1");
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(rho_, Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < kEigenFloor) {
            throw ValidationError("DensityMatrix: negative eigenvalue " +
                                  std::to_string(solver.eigenvalues().minCoeff()));
        }
    }

    static DensityMatrix from_pure(const PureState &psi) {
        return DensityMatrix(psi.n_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
    }

    std::size_t n_qubits() const { return n_; }
    std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }
    const Matrix &entries() const { return rho_; }
    cplx operator()(std::size_t row, std::size_t col) const {
        return rho_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }

  private:
    std::size_t n_;
    Matrix rho_;
};

/// Unitary acting on 1, 2 or 3 qubits. Row/column order follows the basis
/// convention above, with the first listed qubit most significant.
class GateMatrix {
  public:
    explicit GateMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || (m_.rows() != 2 && m_.rows() != 4 && m_.rows() != 8)) {
            throw ValidationError("GateMatrix: dimension must be 2, 4 or 8");
        }
        if (!detail::is_unitary(m_, kExactTol)) {
            throw ValidationError("GateMatrix: matrix is not unitary");
        }
    }

    std::size_t arity() const {
        switch (m_.rows()) {
            case 2:
                return 1;
            case 4:
                return 2;
            default:
                return 3;
        }
    }
    const Matrix &matrix() const { return m_; }
    GateMatrix adjoint() const { return GateMatrix(m_.adjoint()); }

  private:
    Matrix m_;
};

namespace gates {

inline Matrix mat2(cplx a, cplx b, cplx c, cplx d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

inline const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

inline GateMatrix I() { return GateMatrix(Matrix::Identity(2, 2)); }
inline GateMatrix X() { return GateMatrix(mat2(0, 1, 1, 0)); }
/// Y = iXZ.
inline GateMatrix Y() { return GateMatrix(kI * X().matrix() * mat2(1, 0, 0, -1)); }
inline GateMatrix Z() { return GateMatrix(mat2(1, 0, 0, -1)); }
/// The real rotation (1/sqrt2)[[1,-1],[1,1]]; maps |0> to (|0>+|1>)/sqrt2.
inline GateMatrix U() { return GateMatrix(kInvSqrt2 * mat2(1, -1, 1, 1)); }
inline GateMatrix Udag() { return U().adjoint(); }
/// (1/sqrt2)[[1,-i],[-i,1]].
inline GateMatrix V() { return GateMatrix(kInvSqrt2 * mat2(1, -kI, -kI, 1)); }
inline GateMatrix Vdag() { return V().adjoint(); }
/// W = V U^dagger.
inline GateMatrix W() { return GateMatrix(V().matrix() * Udag().matrix()); }
inline GateMatrix Wdag() { return W().adjoint(); }

/// diag(1,1,1,-1) on (control, target).
inline GateMatrix CZ() {
    Matrix m = Matrix::Identity(4, 4);
    m(3, 3) = -1;
    return GateMatrix(std::move(m));
}

/// |a,b> -> |a, a xor b> on (control, target).
inline GateMatrix CNOT() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
    return GateMatrix(std::move(m));
}

}  // namespace gates

/// Applies `gate` to the listed qubits (first listed = most significant
/// local index bit), identity elsewhere.
inline PureState apply_gate(const PureState &state, const GateMatrix &gate, std::span<const Qubit> qubits) {
    const std::size_t n = state.n_qubits();
    const std::size_t k = gate.arity();
    if (qubits.size() != k) {
        throw ValidationError("apply_gate: gate acts on " + std::to_string(k) + " qubits but " +
                              std::to_string(qubits.size()) + " were given");
    }
    detail::check_qubits(qubits, n, "apply_gate");

    const std::size_t local_dim = std::size_t{1} << k;
    std::vector<std::size_t> offsets(local_dim, 0);
    std::size_t mask = 0;
    for (std::size_t local = 0; local < local_dim; ++local) {
        for (std::size_t j = 0; j < k; ++j) {
            if ((local >> (k - 1 - j)) & 1U) {
                offsets[local] |= std::size_t{1} << detail::bit_of(qubits[j], n);
            }
        }
    }
    for (Qubit q : qubits) {
        mask |= std::size_t{1} << detail::bit_of(q, n);
    }

    const Matrix &m = gate.matrix();
    Vector out = state.amplitudes();
    std::vector<cplx> gathered(local_dim);
    for (std::size_t base = 0; base < state.dimension(); ++base) {
        if (base & mask) {
            continue;
        }
        for (std::size_t a = 0; a < local_dim; ++a) {
            gathered[a] = state[base | offsets[a]];
        }
        for (std::size_t r = 0; r < local_dim; ++r) {
            cplx acc = 0;
            for (std::size_t c = 0; c < local_dim; ++c) {
                acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * gathered[c];
            }
            out(static_cast<Eigen::Index>(base | offsets[r])) = acc;
        }
    }
    return PureState::normalized(n, std::move(out));
}

inline PureState apply_gate(const PureState &state, const GateMatrix &gate, std::initializer_list<Qubit> qubits) {
    return apply_gate(state, gate, std::span<const Qubit>(qubits.begin(), qubits.size()));
}

/// Multiplies each basis amplitude by (-1)^(number of targets set) when all
/// controls are set.
inline PureState apply_controlled_phase(const PureState &state, std::span<const Qubit> controls,
                                        std::span<const Qubit> targets) {
    const std::size_t n = state.n_qubits();
    std::vector<Qubit> all(controls.begin(), controls.end());
    all.insert(all.end(), targets.begin(), targets.end());
    for (Qubit c : controls) {
        if (std::find(targets.begin(), targets.end(), c) != targets.end()) {
            throw ValidationError("apply_controlled_phase: qubit " + std::to_string(c) +
                                  " is both control and target");
        }
    }
    detail::check_qubits(all, n, "apply_controlled_phase");

    Vector out = state.amplitudes();
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        bool active = std::all_of(controls.begin(), controls.end(),
                                  [&](Qubit c) { return detail::get_bit(i, c, n); });
        if (!active) {
            continue;
        }
        std::size_t flips = 0;
        for (Qubit t : targets) {
            flips += detail::get_bit(i, t, n);
        }
        if (flips % 2 == 1) {
            out(static_cast<Eigen::Index>(i)) = -out(static_cast<Eigen::Index>(i));
        }
    }
    return PureState(n, std::move(out));
}

/// Flips `target` in every basis state where `control` is set.
inline PureState apply_cnot(const PureState &state, Qubit control, Qubit target) {
    if (control == target) {
        throw ValidationError("apply_cnot: control and target are both qubit " + std::to_string(control));
    }
    const std::size_t n = state.n_qubits();
    const Qubit both[2] = {control, target};
    detail::check_qubits(both, n, "apply_cnot");
    Vector out(state.amplitudes().size());
    const std::size_t flip = std::size_t{1} << detail::bit_of(target, n);
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        std::size_t j = detail::get_bit(i, control, n) ? (i ^ flip) : i;
        out(static_cast<Eigen::Index>(j)) = state[i];
    }
    return PureState(n, std::move(out));
}

/// Full 2^n operator of `gate` acting on `qubits`.
inline Matrix embed_gate(std::size_t n_qubits, const GateMatrix &gate, std::span<const Qubit> qubits) {
    const auto dim = static_cast<Eigen::Index>(detail::dimension_of(n_qubits));
    Matrix full(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        PureState e = PureState::basis(n_qubits, static_cast<std::size_t>(col));
        full.col(col) = apply_gate(e, gate, qubits).amplitudes();
    }
    return full;
}

/// Evolve a density matrix by a full-space unitary.
inline DensityMatrix conjugate(const DensityMatrix &rho, const Matrix &unitary) {
    Matrix out = unitary * rho.entries() * unitary.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityMatrix(rho.n_qubits(), std::move(out));
}

/// Born probabilities of every outcome on `qubits`, indexed by the outcome
/// read as a binary number (first listed qubit most significant).
inline std::vector<double> outcome_probabilities(const PureState &state, std::span<const Qubit> qubits) {
    const std::size_t n = state.n_qubits();
    detail::check_qubits(qubits, n, "measure_qubits");
    std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        std::size_t outcome = 0;
        for (Qubit q : qubits) {
            outcome = (outcome << 1) | static_cast<std::size_t>(detail::get_bit(i, q, n));
        }
        probs[outcome] += std::norm(state[i]);
    }
    return probs;
}

struct MeasurementResult {
    std::string outcome;  // one character per measured qubit, in the order given
    PureState collapsed;
    double probability;
};

namespace detail {

inline std::string outcome_label(std::size_t outcome, std::size_t width) {
    std::string s(width, '0');
    for (std::size_t j = 0; j < width; ++j) {
        if ((outcome >> (width - 1 - j)) & 1U) {
            s[j] = '1';
        }
    }
    return s;
}

inline std::size_t outcome_index(const std::string &label) {
    std::size_t v = 0;
    for (char c : label) {
        if (c != '0' && c != '1') {
            throw ValidationError("measure_qubits: bad outcome label '" + label + "'");
        }
        v = (v << 1) | static_cast<std::size_t>(c == '1');
    }
    return v;
}

inline MeasurementResult collapse(const PureState &state, std::span<const Qubit> qubits, std::size_t outcome,
                                  double probability) {
    const std::size_t n = state.n_qubits();
    Vector out = Vector::Zero(state.amplitudes().size());
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        std::size_t o = 0;
        for (Qubit q : qubits) {
            o = (o << 1) | static_cast<std::size_t>(get_bit(i, q, n));
        }
        if (o == outcome) {
            out(static_cast<Eigen::Index>(i)) = state[i];
        }
    }
    return MeasurementResult{outcome_label(outcome, qubits.size()), PureState::normalized(n, std::move(out)),
                             probability};
}

}  // namespace detail

/// Projects onto a requested outcome (exhaustive/deterministic mode).
/// Throws when the requested branch has zero probability.
inline MeasurementResult measure_qubits(const PureState &state, std::span<const Qubit> qubits,
                                        const std::string &outcome) {
    if (outcome.size() != qubits.size()) {
        throw ValidationError("measure_qubits: outcome label length does not match qubit count");
    }
    auto probs = outcome_probabilities(state, qubits);
    std::size_t o = detail::outcome_index(outcome);
    if (probs[o] <= kExactTol * kExactTol) {
        throw ValidationError("measure_qubits: outcome " + outcome + " has zero probability");
    }
    return detail::collapse(state, qubits, o, probs[o]);
}

/// Samples an outcome with Born probabilities.
inline MeasurementResult measure_qubits(const PureState &state, std::span<const Qubit> qubits, Rng &rng) {
    auto probs = outcome_probabilities(state, qubits);
    std::discrete_distribution<std::size_t> pick(probs.begin(), probs.end());
    std::size_t chosen = pick(rng);
    return detail::collapse(state, qubits, chosen, probs[chosen]);
}

/// Reduced density matrix on `keep` (kept qubits retain their relative order).
inline DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const Qubit> keep) {
    const std::size_t n = rho.n_qubits();
    if (keep.empty()) {
        throw ValidationError("partial_trace: keep set is empty");
    }
    detail::check_qubits(keep, n, "partial_trace");
    std::vector<Qubit> kept(keep.begin(), keep.end());
    std::sort(kept.begin(), kept.end());
    std::vector<Qubit> traced;
    for (Qubit q = 0; q < n; ++q) {
        if (std::find(kept.begin(), kept.end(), q) == kept.end()) {
            traced.push_back(q);
        }
    }
    const std::size_t m = kept.size();
    const auto out_dim = static_cast<Eigen::Index>(detail::dimension_of(m));
    Matrix out = Matrix::Zero(out_dim, out_dim);

    auto compose = [&](std::size_t kept_bits, std::size_t traced_bits) {
        std::size_t index = 0;
        for (std::size_t j = 0; j < m; ++j) {
            if ((kept_bits >> (m - 1 - j)) & 1U) {
                index |= std::size_t{1} << detail::bit_of(kept[j], n);
            }
        }
        for (std::size_t j = 0; j < traced.size(); ++j) {
            if ((traced_bits >> (traced.size() - 1 - j)) & 1U) {
                index |= std::size_t{1} << detail::bit_of(traced[j], n);
            }
        }
        return index;
    };

    const std::size_t env_dim = detail::dimension_of(traced.size());
    for (Eigen::Index r = 0; r < out_dim; ++r) {
        for (Eigen::Index c = 0; c < out_dim; ++c) {
            cplx acc = 0;
            for (std::size_t e = 0; e < env_dim; ++e) {
                acc += rho(compose(static_cast<std::size_t>(r), e), compose(static_cast<std::size_t>(c), e));
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix(m, std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix &rho, std::initializer_list<Qubit> keep) {
    return partial_trace(rho, std::span<const Qubit>(keep.begin(), keep.size()));
}

/// |<a|b>|^2, clamped to [0, 1].
inline double fidelity(const PureState &a, const PureState &b) {
    if (a.dimension() != b.dimension()) {
        throw ValidationError("fidelity: dimension mismatch");
    }
    double f = std::norm(a.amplitudes().dot(b.amplitudes()));
    return std::clamp(f, 0.0, 1.0);
}

/// min over theta of ||a - e^{i theta} b||.
inline double phase_aligned_distance(const Vector &a, const Vector &b) {
    if (a.size() != b.size()) {
        throw ValidationError("phase_aligned_distance: dimension mismatch");
    }
    cplx overlap = b.dot(a);
    cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
    return (a - phase * b).norm();
}

inline double phase_aligned_distance(const PureState &a, const PureState &b) {
    return phase_aligned_distance(a.amplitudes(), b.amplitudes());
}

/// Largest entrywise deviation of `a` from `b` after removing the best
/// single global phase; works for operators as well as vectors.
inline double phase_aligned_max_deviation(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ValidationError("phase_aligned_max_deviation: shape mismatch");
    }
    cplx overlap = (b.adjoint() * a).trace();
    cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
    return (a - phase * b).cwiseAbs().maxCoeff();
}

}  // namespace qecc
