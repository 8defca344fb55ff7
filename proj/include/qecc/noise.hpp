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
 * Phase-diffusion noise and the protection schemes run against it.
 *
 * Each physical qubit's relative phase performs an independent Wiener walk
 * with <<dphi dphi'>> = 2 delta(t-t') dt, so phi(t) ~ N(0, 2t) and the
 * averaged map multiplies that qubit's coherences by <e^{i phi}> = e^{-t}.
 * Time is measured in these noise units throughout.
 *
 * A scheme round is: encode (ancillas in |0>), dephase every physical qubit
 * for t/n, decode and correct, keep qubit 0. `n` rounds are chained.
 */

#pragma once

#include <algorithm>
#include <atomic>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "qecc/codes.hpp"

namespace qecc {

enum class SchemeKind { Uncoded, Zeno2, Phase3 };

inline std::string_view scheme_name(SchemeKind k) {
    switch (k) {
        case SchemeKind::Uncoded:
            return "uncoded";
        case SchemeKind::Zeno2:
            return "zeno2";
        case SchemeKind::Phase3:
            return "phase3";
    }
    return "?";
}

inline std::optional<SchemeKind> scheme_from_name(std::string_view name) {
    for (SchemeKind k : {SchemeKind::Uncoded, SchemeKind::Zeno2, SchemeKind::Phase3}) {
        if (scheme_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

struct Scheme {
    SchemeKind kind = SchemeKind::Uncoded;
    std::size_t repetitions = 1;
};

inline void check_time(double t, const char *what) {
    if (!(t >= 0.0)) {
        throw ValidationError(std::string(what) + ": time must be non-negative");
    }
}

/// Exact Gaussian-averaged dephasing of one qubit for time t.
inline DensityMatrix dephase_channel(const DensityMatrix &rho, Qubit qubit, double t) {
    check_time(t, "dephase_channel");
    const std::size_t n = rho.n_qubits();
    if (qubit >= n) {
        throw ValidationError("dephase_channel: qubit out of range");
    }
    const double decay = std::exp(-t);
    Matrix out = rho.entries();
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
        for (Eigen::Index c = 0; c < out.cols(); ++c) {
            if (detail::get_bit(static_cast<std::size_t>(r), qubit, n) !=
                detail::get_bit(static_cast<std::size_t>(c), qubit, n)) {
                out(r, c) *= decay;
            }
        }
    }
    return DensityMatrix(n, std::move(out));
}

/// Kraus pair {sqrt(p) I, sqrt(1-p) Z}, p = (1 + e^{-t})/2, equivalent to
/// dephase_channel.
inline std::pair<Matrix, Matrix> dephasing_kraus(double t) {
    check_time(t, "dephasing_kraus");
    const double p = 0.5 * (1.0 + std::exp(-t));
    return {std::sqrt(p) * gates::I().matrix(), std::sqrt(1.0 - p) * gates::Z().matrix()};
}

/// Independent generator for trajectory `index` under `seed`; results do not
/// depend on the order trajectories are run in.
inline Rng trajectory_rng(std::uint64_t seed, std::uint64_t index) { return Rng(mix_seed(seed, index)); }

/// End-point phases phi(t) ~ N(0, 2t), one per qubit.
inline std::vector<double> sample_trajectory_phases(std::size_t n_qubits, double t, Rng &rng) {
    check_time(t, "sample_trajectory_phases");
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sigma = std::sqrt(2.0 * t);
    std::vector<double> phases(n_qubits);
    for (double &phi : phases) {
        phi = sigma * normal(rng);
    }
    return phases;
}

inline std::vector<double> sample_trajectory_phases(std::size_t n_qubits, double t, std::uint64_t seed) {
    Rng rng = trajectory_rng(seed, 0);
    return sample_trajectory_phases(n_qubits, t, rng);
}

/// alpha|0> + beta|1> -> alpha|0> + beta e^{i phi}|1> on every qubit.
inline PureState apply_phases(const PureState &state, const std::vector<double> &phases) {
    const std::size_t n = state.n_qubits();
    if (phases.size() != n) {
        throw ValidationError("apply_phases: need one phase per qubit");
    }
    Vector out = state.amplitudes();
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        double total = 0;
        for (Qubit q = 0; q < n; ++q) {
            if (detail::get_bit(i, q, n)) {
                total += phases[q];
            }
        }
        out(static_cast<Eigen::Index>(i)) *= std::polar(1.0, total);
    }
    return PureState(n, std::move(out));
}

/// Code and decoding table behind a scheme; Uncoded has no code.
struct SchemeSetup {
    SchemeKind kind;
    std::optional<CodeSpec> code;
    SyndromeTable table;
};

inline SchemeSetup make_setup(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Uncoded:
            return SchemeSetup{kind, std::nullopt, {}};
        case SchemeKind::Zeno2:
            return SchemeSetup{kind, two_qubit_zeno_code(), {}};
        case SchemeKind::Phase3: {
            CodeSpec code = three_qubit_phase_code();
            SyndromeTable table = build_syndrome_table(code);
            return SchemeSetup{kind, std::move(code), std::move(table)};
        }
    }
    throw ValidationError("make_setup: unknown scheme");
}

/// One exact round on the data qubit's density matrix.
inline DensityMatrix exact_round(const SchemeSetup &setup, const DensityMatrix &rho, double dt) {
    if (!setup.code) {
        return dephase_channel(rho, 0, dt);
    }
    const CodeSpec &code = *setup.code;
    const std::size_t n_syn = std::size_t{1} << (code.n_physical - 1);
    const auto dim = static_cast<Eigen::Index>(2 * n_syn);
    Matrix full = Matrix::Zero(dim, dim);
    for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index b = 0; b < 2; ++b) {
            full(a * static_cast<Eigen::Index>(n_syn), b * static_cast<Eigen::Index>(n_syn)) = rho.entries()(a, b);
        }
    }
    DensityMatrix state = conjugate(DensityMatrix(code.n_physical, std::move(full)), circuit_to_unitary(*code.encoder));
    for (Qubit q = 0; q < code.n_physical; ++q) {
        state = dephase_channel(state, q, dt);
    }
    return decode_channel(code, setup.table, state);
}

/// Density-matrix propagation through `scheme.repetitions` rounds of t/n.
inline DensityMatrix run_scheme_exact(const Scheme &scheme, const PureState &psi, double t) {
    check_time(t, "run_scheme");
    if (scheme.repetitions < 1) {
        throw ValidationError("run_scheme: repetitions must be >= 1");
    }
    if (psi.n_qubits() != 1) {
        throw ValidationError("run_scheme: input must be a single qubit");
    }
    const SchemeSetup setup = make_setup(scheme.kind);
    const double dt = t / static_cast<double>(scheme.repetitions);
    DensityMatrix rho = DensityMatrix::from_pure(psi);
    for (std::size_t r = 0; r < scheme.repetitions; ++r) {
        rho = exact_round(setup, rho, dt);
    }
    return rho;
}

/// One sampled trajectory; returns the final data-qubit state.
inline PureState run_trajectory(const SchemeSetup &setup, std::size_t repetitions, const PureState &psi, double t,
                                Rng &rng) {
    const double dt = t / static_cast<double>(repetitions);
    PureState state = psi;
    for (std::size_t r = 0; r < repetitions; ++r) {
        if (!setup.code) {
            state = apply_phases(state, sample_trajectory_phases(1, dt, rng));
            continue;
        }
        const CodeSpec &code = *setup.code;
        PureState encoded = encode_with_circuit(code, state);
        encoded = apply_phases(encoded, sample_trajectory_phases(code.n_physical, dt, rng));
        state = decode_and_correct(code, setup.table, encoded, &rng).psi;
    }
    return state;
}

struct MonteCarloResult {
    DensityMatrix rho;  // trajectory average
    cplx offdiag;       // <1|rho|0>
    double offdiag_stderr;
    std::size_t shots;
};

namespace detail {

struct TrajectorySums {
    Matrix rho = Matrix::Zero(2, 2);
    double re = 0, im = 0, re2 = 0, im2 = 0;
};

inline constexpr std::size_t kTrajectoryBlock = 2048;

}  // namespace detail

/// Averages `shots` trajectories. Trajectory i draws from trajectory_rng(seed, i);
/// blocks are reduced in index order, so the result is independent of
/// `threads`.
inline MonteCarloResult run_scheme_monte_carlo(const Scheme &scheme, const PureState &psi, double t,
                                               std::size_t shots, std::uint64_t seed, unsigned threads = 0) {
    check_time(t, "run_scheme");
    if (shots == 0) {
        throw ValidationError("run_scheme: Monte-Carlo mode needs shots > 0");
    }
    if (scheme.repetitions < 1) {
        throw ValidationError("run_scheme: repetitions must be >= 1");
    }
    if (psi.n_qubits() != 1) {
        throw ValidationError("run_scheme: input must be a single qubit");
    }
    const SchemeSetup setup = make_setup(scheme.kind);
    const std::size_t n_blocks = (shots + detail::kTrajectoryBlock - 1) / detail::kTrajectoryBlock;
    std::vector<detail::TrajectorySums> blocks(n_blocks);

    auto run_block = [&](std::size_t b) {
        detail::TrajectorySums &s = blocks[b];
        const std::size_t lo = b * detail::kTrajectoryBlock;
        const std::size_t hi = std::min(shots, lo + detail::kTrajectoryBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            Rng rng = trajectory_rng(seed, i);
            PureState out = run_trajectory(setup, scheme.repetitions, psi, t, rng);
            const Vector &v = out.amplitudes();
            s.rho += v * v.adjoint();
            cplx z = v(1) * std::conj(v(0));
            s.re += z.real();
            s.im += z.imag();
            s.re2 += z.real() * z.real();
            s.im2 += z.imag() * z.imag();
        }
    };

    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.push_back(std::async(std::launch::async, [&] {
            for (std::size_t b = next++; b < n_blocks; b = next++) {
                run_block(b);
            }
        }));
    }
    for (auto &f : workers) {
        f.get();
    }

    detail::TrajectorySums total;
    for (const auto &s : blocks) {
        total.rho += s.rho;
        total.re += s.re;
        total.im += s.im;
        total.re2 += s.re2;
        total.im2 += s.im2;
    }
    const auto n = static_cast<double>(shots);
    Matrix rho = total.rho / n;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    rho /= rho.trace().real();
    const cplx mean{total.re / n, total.im / n};
    // Sample variances of the real and imaginary parts, propagated to |mean|.
    const double var_re = shots > 1 ? std::max(0.0, (total.re2 - n * mean.real() * mean.real()) / (n - 1)) : 0.0;
    const double var_im = shots > 1 ? std::max(0.0, (total.im2 - n * mean.imag() * mean.imag()) / (n - 1)) : 0.0;
    const double abs_mean = std::abs(mean);
    double se = 0.0;
    if (abs_mean > 0) {
        se = std::sqrt(mean.real() * mean.real() * var_re / n + mean.imag() * mean.imag() * var_im / n) / abs_mean;
    } else {
        se = std::sqrt((var_re + var_im) / n);
    }
    return MonteCarloResult{DensityMatrix(1, std::move(rho)), mean, se, shots};
}

/// |<1|rho|0> / <1|rho0|0>|.
inline double coherence(const DensityMatrix &rho, const DensityMatrix &rho0) {
    if (rho.n_qubits() != 1 || rho0.n_qubits() != 1) {
        throw ValidationError("coherence: expects single-qubit density matrices");
    }
    const cplx ref = rho0(1, 0);
    if (std::abs(ref) < kExactTol) {
        throw ValidationError("coherence: initial state has no off-diagonal coherence (basis state?)");
    }
    return std::abs(rho(1, 0) / ref);
}

struct CoherenceEstimate {
    double value;
    double std_error;
};

inline CoherenceEstimate coherence(const MonteCarloResult &mc, const DensityMatrix &rho0) {
    const cplx ref = rho0(1, 0);
    if (std::abs(ref) < kExactTol) {
        throw ValidationError("coherence: initial state has no off-diagonal coherence (basis state?)");
    }
    return CoherenceEstimate{std::abs(mc.offdiag / ref), mc.offdiag_stderr / std::abs(ref)};
}

/// (|0> + i|1>)/sqrt2: the phase code's worst-case input.
inline PureState psi_iplus() { return PureState::qubit(1.0, kI); }
/// (|0> + |1>)/sqrt2.
inline PureState psi_plus() { return PureState::qubit(1.0, 1.0); }

/// Coherence after n evenly spaced rounds within total time t (exact mode).
inline double n_shot_coherence(SchemeKind kind, double t, std::size_t n, const PureState &psi = psi_iplus()) {
    if (n < 1) {
        throw ValidationError("n_shot_coherence: n must be >= 1");
    }
    return coherence(run_scheme_exact(Scheme{kind, n}, psi, t), DensityMatrix::from_pure(psi));
}

struct CoherenceSample {
    double t;
    double c_exact;
    std::optional<double> c_mc;
    std::optional<double> mc_stderr;
};

struct CoherenceCurve {
    Scheme scheme;
    std::vector<CoherenceSample> samples;
};

/// Uncoded, Zeno2, Phase3 and ten-round Phase3 on a uniform grid
/// t = 0, t_max/steps, ..., t_max, evaluated for the worst-case input.
/// With shots > 0 each point also gets a Monte-Carlo estimate seeded from
/// (seed, curve, step).
inline std::vector<CoherenceCurve> figure5_data(double t_max, std::size_t steps, std::size_t shots = 0,
                                                std::uint64_t seed = 0,
                                                std::vector<Scheme> schemes = {{SchemeKind::Uncoded, 1},
                                                                              {SchemeKind::Zeno2, 1},
                                                                              {SchemeKind::Phase3, 1},
                                                                              {SchemeKind::Phase3, 10}}) {
    if (steps < 2) {
        throw ValidationError("figure5_data: steps must be >= 2");
    }
    check_time(t_max, "figure5_data");
    const PureState psi = psi_iplus();
    const DensityMatrix rho0 = DensityMatrix::from_pure(psi);
    std::vector<CoherenceCurve> curves;
    for (std::size_t c = 0; c < schemes.size(); ++c) {
        CoherenceCurve curve{schemes[c], {}};
        for (std::size_t k = 0; k <= steps; ++k) {
            const double t = t_max * static_cast<double>(k) / static_cast<double>(steps);
            CoherenceSample s{t, coherence(run_scheme_exact(schemes[c], psi, t), rho0), std::nullopt, std::nullopt};
            if (shots > 0) {
                auto mc = run_scheme_monte_carlo(schemes[c], psi, t, shots, mix_seed(mix_seed(seed, c), k));
                auto est = coherence(mc, rho0);
                s.c_mc = est.value;
                s.mc_stderr = est.std_error;
            }
            curve.samples.push_back(s);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

inline constexpr std::string_view kCoherenceCsvHeader = "t,scheme,n,C_exact,C_mc,mc_stderr";

inline std::string format_number(double v) {
    std::ostringstream ss;
    ss << std::setprecision(12) << v;
    return ss.str();
}

/// One row; Monte-Carlo columns are left empty when absent.
inline std::string coherence_csv_row(const Scheme &scheme, const CoherenceSample &s) {
    std::ostringstream ss;
    ss << format_number(s.t) << ',' << scheme_name(scheme.kind) << ',' << scheme.repetitions << ','
       << format_number(s.c_exact) << ',' << (s.c_mc ? format_number(*s.c_mc) : "") << ','
       << (s.mc_stderr ? format_number(*s.mc_stderr) : "");
    return ss.str();
}

/// Header plus rows ordered by curve, then t.
inline void write_coherence_csv(std::ostream &out, const std::vector<CoherenceCurve> &curves) {
    out << kCoherenceCsvHeader << '\n';
    for (const auto &curve : curves) {
        for (const auto &s : curve.samples) {
            out << coherence_csv_row(curve.scheme, s) << '\n';
        }
    }
}

}  // namespace qecc
