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
 * Hill-climbing search with random restarts for cheap encoder circuits,
 * scored by ion-trap pulse count.
 *
 * Candidates are ranked by a total order: valid before invalid, then (for
 * invalid ones) smaller constraint violation, then fewer pulses, fewer ops,
 * and finally the lexicographic op list.
 */

#pragma once

#include <functional>
#include <future>
#include <tuple>

#include "qecc/codes.hpp"
#include "qecc/iontrap.hpp"

namespace qecc {

/// How a circuit's code relates to the reference 5-qubit code.
enum class ValidityMode {
    Invalid,
    Exact,          // both codewords match up to one global phase
    PauliFrame,     // match after a layer of single-qubit Paulis
    KnillLaflamme,  // some other code correcting every single-qubit Pauli
};

inline std::string_view validity_mode_name(ValidityMode m) {
    switch (m) {
        case ValidityMode::Invalid:
            return "invalid";
        case ValidityMode::Exact:
            return "exact";
        case ValidityMode::PauliFrame:
            return "pauli-frame";
        case ValidityMode::KnillLaflamme:
            return "kl-only";
    }
    return "?";
}

/// Validity verdict plus a continuous violation that guides the climb out
/// of invalid regions.
struct Score {
    bool valid;
    double violation;
};

struct Validity {
    bool valid;
    ValidityMode mode;
    double worst_violation;
};

inline CodeSpec code_from_encoder(const Circuit &c, std::string name = "candidate") {
    if (c.n_qubits() < 2) {
        throw ValidationError("code_from_encoder: need at least 2 qubits");
    }
    const std::size_t n = c.n_qubits();
    PureState zero = apply_circuit(PureState::basis(n, 0), c);
    PureState one = apply_circuit(PureState::basis(n, std::size_t{1} << (n - 1)), c);
    return CodeSpec{std::move(name), n, zero, one, c, DecoderKind::Correcting, single_qubit_paulis(n)};
}

/// Fast search-time score: KL conditions over all weight-<=1 Paulis.
inline Score perfect_code_score(const Circuit &c) {
    if (c.n_qubits() != 5) {
        throw ValidationError("perfect_code_score: circuit must act on 5 qubits");
    }
    CodeSpec code = code_from_encoder(c);
    auto kl = check_knill_laflamme(code, code.correctable);
    return Score{kl.ok, kl.ok ? 0.0 : kl.squared_violation};
}

namespace detail {

inline Matrix codeword_columns(const PureState &zero, const PureState &one) {
    Matrix m(static_cast<Eigen::Index>(zero.dimension()), 2);
    m.col(0) = zero.amplitudes();
    m.col(1) = one.amplitudes();
    return m;
}

inline std::optional<ValidityMode> reference_match(const Matrix &produced) {
    constexpr double tol = 1e-10;
    auto [z, o] = five_qubit_codewords();
    const Matrix reference = codeword_columns(z, o);
    if (phase_aligned_max_deviation(produced, reference) <= tol) {
        return ValidityMode::Exact;
    }
    // 4^5 Pauli strings applied to both columns.
    const Pauli kinds[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
    for (std::size_t code = 1; code < 1024; ++code) {
        PureState a = PureState(5, produced.col(0));
        PureState b = PureState(5, produced.col(1));
        std::size_t rest = code;
        for (Qubit q = 0; q < 5; ++q, rest /= 4) {
            ErrorOp e = ErrorOp::on(kinds[rest % 4], q);
            a = apply_error(a, e);
            b = apply_error(b, e);
        }
        if (phase_aligned_max_deviation(codeword_columns(a, b), reference) <= tol) {
            return ValidityMode::PauliFrame;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Full verdict: compares the generated codewords with the reference code
/// (exactly, then up to a Pauli frame) and otherwise runs the KL check.
inline Validity is_valid_perfect_code(const Circuit &c) {
    if (c.n_qubits() != 5) {
        throw ValidationError("is_valid_perfect_code: circuit must act on 5 qubits");
    }
    CodeSpec code = code_from_encoder(c);
    auto kl = check_knill_laflamme(code, code.correctable);
    if (auto m = detail::reference_match(detail::codeword_columns(code.logical_zero, code.logical_one))) {
        return Validity{true, *m, kl.worst_violation};
    }
    return Validity{kl.ok, kl.ok ? ValidityMode::KnillLaflamme : ValidityMode::Invalid, kl.worst_violation};
}

/// Scores a circuit by how well it maps |j>|0...0> onto the given target
/// columns up to a common global phase.
inline std::function<Score(const Circuit &)> isometry_score(Matrix target) {
    return [target = std::move(target)](const Circuit &c) {
        const std::size_t n = c.n_qubits();
        Matrix produced(target.rows(), target.cols());
        for (Eigen::Index j = 0; j < target.cols(); ++j) {
            produced.col(j) =
                apply_circuit(PureState::basis(n, static_cast<std::size_t>(j) << (n - 1)), c).amplitudes();
        }
        cplx overlap = (target.adjoint() * produced).trace();
        cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
        double dev = (produced - phase * target).cwiseAbs().maxCoeff();
        double infidelity = 1.0 - std::abs(overlap) / static_cast<double>(target.cols());
        return Score{dev <= 1e-10, dev <= 1e-10 ? 0.0 : std::max(infidelity, 1e-12)};
    };
}

struct SearchConfig {
    std::size_t n_qubits = 5;
    std::vector<GateKind> alphabet{kAllGateKinds.begin(), kAllGateKinds.end()};
    std::size_t max_ops = 24;
    std::size_t max_cphase_controls = 1;
    std::size_t max_cphase_targets = 3;
    std::uint64_t seed = 0;
    std::size_t iterations = 2000;  // per restart
    std::size_t restarts = 4;
    /// Random moves applied to the starting circuit of every restart after the first.
    std::size_t perturbation = 3;
    /// Starting temperature for accepting worse moves while no valid circuit
    /// is held; decays linearly to zero over the restart. Zero disables it.
    double temperature = 0.05;
    std::optional<Circuit> initial;

    void validate() const {
        if (alphabet.empty()) {
            throw ValidationError("SearchConfig: gate alphabet is empty");
        }
        if (iterations < 1 || restarts < 1) {
            throw ValidationError("SearchConfig: iteration budget and restarts must be >= 1");
        }
        if (max_ops < 1) {
            throw ValidationError("SearchConfig: max_ops must be >= 1");
        }
        if (max_cphase_controls < 1 || max_cphase_targets < 1) {
            throw ValidationError("SearchConfig: CPHASE arity limits must be >= 1");
        }
        if (initial && initial->n_qubits() != n_qubits) {
            throw ValidationError("SearchConfig: initial circuit has the wrong qubit count");
        }
        if (!(temperature >= 0.0)) {
            throw ValidationError("SearchConfig: temperature must be non-negative");
        }
        bool needs_pair = std::any_of(alphabet.begin(), alphabet.end(), [](GateKind k) { return !is_single_qubit(k); });
        if (needs_pair && n_qubits < 2) {
            throw ValidationError("SearchConfig: two-qubit gates need at least 2 qubits");
        }
    }
};

struct Candidate {
    Circuit circuit;
    std::size_t cost;
    bool valid;
    double violation;
    ValidityMode mode = ValidityMode::Invalid;  // filled for 5-qubit results
};

/// Strict total order: true when `a` ranks ahead of `b`.
inline bool better(const Candidate &a, const Candidate &b) {
    auto key = [](const Candidate &c) {
        return std::make_tuple(c.valid ? 0 : 1, c.valid ? 0.0 : c.violation, c.cost, c.circuit.size());
    };
    auto ka = key(a), kb = key(b);
    if (ka != kb) {
        return ka < kb;
    }
    return a.circuit.ops() < b.circuit.ops();
}

struct SearchLogEntry {
    std::size_t restart;
    std::size_t iteration;
    std::size_t current_cost;
    bool current_valid;
    std::optional<std::size_t> best_valid_cost;  // global best so far
};

struct SearchResult {
    Candidate best;
    bool found_valid;
    std::vector<SearchLogEntry> history;
    std::size_t evaluations;
    std::uint64_t seed;
    std::string diagnostic;  // set when no valid candidate was found
};

/// Pulse-count milestones of the reference constructions.
inline constexpr std::size_t kMilestoneFusedCircuit = 26;
inline constexpr std::size_t kMilestoneBestKnown = 24;

namespace detail {

template <typename T>
const T &pick(const std::vector<T> &v, Rng &rng) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline std::vector<Qubit> distinct_qubits(std::size_t count, std::size_t n, Rng &rng) {
    std::vector<Qubit> all(n);
    for (Qubit q = 0; q < n; ++q) {
        all[q] = q;
    }
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    return all;
}

inline GateOp random_op(const SearchConfig &cfg, Rng &rng) {
    const std::size_t n = cfg.n_qubits;
    GateKind kind = pick(cfg.alphabet, rng);
    if (is_single_qubit(kind)) {
        return GateOp::single(kind, std::uniform_int_distribution<Qubit>(0, n - 1)(rng));
    }
    if (kind == GateKind::CNOT) {
        auto q = distinct_qubits(2, n, rng);
        return GateOp::cnot(q[0], q[1]);
    }
    std::size_t nc = std::uniform_int_distribution<std::size_t>(1, std::min(cfg.max_cphase_controls, n - 1))(rng);
    std::size_t nt = std::uniform_int_distribution<std::size_t>(1, std::min(cfg.max_cphase_targets, n - nc))(rng);
    auto q = distinct_qubits(nc + nt, n, rng);
    std::vector<Qubit> controls(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(nc));
    std::vector<Qubit> targets(q.begin() + static_cast<std::ptrdiff_t>(nc), q.end());
    std::sort(controls.begin(), controls.end());
    std::sort(targets.begin(), targets.end());
    return GateOp::cphase(std::move(controls), std::move(targets));
}

/// Insert, delete, replace or swap-adjacent; returns nullopt when the drawn
/// move does not apply.
inline std::optional<Circuit> mutate(const Circuit &c, const SearchConfig &cfg, Rng &rng) {
    std::vector<GateOp> ops = c.ops();
    auto pos = [&](std::size_t size) { return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng); };
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0:
            if (ops.size() >= cfg.max_ops) {
                return std::nullopt;
            }
            ops.insert(ops.begin() + static_cast<std::ptrdiff_t>(pos(ops.size() + 1)), random_op(cfg, rng));
            break;
        case 1:
            if (ops.empty()) {
                return std::nullopt;
            }
            ops.erase(ops.begin() + static_cast<std::ptrdiff_t>(pos(ops.size())));
            break;
        case 2:
            if (ops.empty()) {
                return std::nullopt;
            }
            ops[pos(ops.size())] = random_op(cfg, rng);
            break;
        default: {
            if (ops.size() < 2) {
                return std::nullopt;
            }
            std::size_t i = pos(ops.size() - 1);
            if (ops[i] == ops[i + 1]) {
                return std::nullopt;
            }
            std::swap(ops[i], ops[i + 1]);
            break;
        }
    }
    return Circuit(c.n_qubits(), std::move(ops));
}

template <typename ScoreFn>
Candidate evaluate(const Circuit &c, ScoreFn &score) {
    Score s = score(c);
    return Candidate{c, pulse_cost(c), s.valid, s.violation, ValidityMode::Invalid};
}

struct RestartOutcome {
    Candidate best;  // best under the total order, valid or not
    std::optional<Candidate> best_valid;
    std::vector<SearchLogEntry> log;
    std::size_t evaluations = 0;
};

template <typename ScoreFn>
RestartOutcome climb(const SearchConfig &cfg, std::size_t restart, ScoreFn score) {
    Rng rng(mix_seed(cfg.seed, restart));
    Circuit start = cfg.initial ? *cfg.initial : Circuit(cfg.n_qubits);
    if (!cfg.initial || restart > 0) {
        std::size_t moves = cfg.initial ? cfg.perturbation : cfg.max_ops / 2;
        for (std::size_t m = 0; m < moves; ++m) {
            if (auto next = mutate(start, cfg, rng)) {
                start = std::move(*next);
            }
        }
        if (!cfg.initial) {
            while (start.size() < cfg.max_ops / 2) {
                start = start.appended(random_op(cfg, rng));
            }
        }
    }

    RestartOutcome out{evaluate(start, score), std::nullopt, {}, 1};
    Candidate current = out.best;
    if (current.valid) {
        out.best_valid = current;
    }
    auto log = [&](std::size_t iteration) {
        out.log.push_back(SearchLogEntry{restart, iteration, current.cost, current.valid,
                                         out.best_valid ? std::optional(out.best_valid->cost) : std::nullopt});
    };
    log(0);

    for (std::size_t it = 1; it <= cfg.iterations; ++it) {
        // One or two mutations per step, so two-op barriers can be crossed.
        std::optional<Circuit> next = mutate(current.circuit, cfg, rng);
        if (next && std::uniform_int_distribution<int>(0, 1)(rng) == 1) {
            if (auto second = mutate(*next, cfg, rng)) {
                next = std::move(second);
            }
        }
        if (!next) {
            continue;
        }
        Candidate cand = evaluate(*next, score);
        ++out.evaluations;
        // Moves that keep (validity, violation, cost) from getting worse are always
        // taken; worse invalid moves pass the annealing test below.
        auto rank = [](const Candidate &c) {
            return std::make_tuple(c.valid ? 0 : 1, c.valid ? 0.0 : c.violation, c.cost);
        };
        bool accept = rank(cand) <= rank(current);
        if (!accept && !cand.valid && !current.valid && cfg.temperature > 0) {
            double t = cfg.temperature * (1.0 - static_cast<double>(it) / static_cast<double>(cfg.iterations));
            double delta = cand.violation - current.violation;
            accept = t > 0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < std::exp(-delta / t);
        }
        if (accept) {
            current = std::move(cand);
            bool improved = false;
            if (better(current, out.best)) {
                out.best = current;
                improved = true;
            }
            if (current.valid && (!out.best_valid || better(current, *out.best_valid))) {
                out.best_valid = current;
                improved = true;
            }
            if (improved) {
                log(it);
            }
        }
    }
    log(cfg.iterations);
    return out;
}

}  // namespace detail

/// Restarts run concurrently, each seeded from (seed, restart index); the
/// merge is by the total order, so the result depends only on the config.
template <typename ScoreFn>
SearchResult search(const SearchConfig &cfg, ScoreFn score) {
    cfg.validate();
    std::vector<std::future<detail::RestartOutcome>> jobs;
    for (std::size_t r = 0; r < cfg.restarts; ++r) {
        jobs.push_back(std::async(std::launch::async, [&cfg, r, score] { return detail::climb(cfg, r, score); }));
    }
    std::vector<detail::RestartOutcome> outcomes;
    for (auto &j : jobs) {
        outcomes.push_back(j.get());
    }

    std::optional<Candidate> best;
    std::optional<std::size_t> running_valid;
    SearchResult result{outcomes.front().best, false, {}, 0, cfg.seed, ""};
    for (auto &o : outcomes) {
        result.evaluations += o.evaluations;
        const Candidate &local = o.best_valid ? *o.best_valid : o.best;
        if (!best || better(local, *best)) {
            best = local;
        }
        for (SearchLogEntry e : o.log) {
            if (e.best_valid_cost && (!running_valid || *e.best_valid_cost < *running_valid)) {
                running_valid = e.best_valid_cost;
            }
            e.best_valid_cost = running_valid;
            result.history.push_back(e);
        }
    }
    result.best = *best;
    result.found_valid = result.best.valid;
    if (!result.found_valid) {
        result.diagnostic = "budget exhausted without a valid candidate; best violation " +
                            std::to_string(result.best.violation);
    }
    return result;
}

/// Searches for cheap perfect 5-qubit encoders; the reported best carries
/// its full validity mode.
inline SearchResult search(const SearchConfig &cfg) {
    if (cfg.n_qubits != 5) {
        throw ValidationError("search: the perfect-code objective needs 5 qubits");
    }
    SearchResult r = search(cfg, perfect_code_score);
    r.best.mode = is_valid_perfect_code(r.best.circuit).mode;
    return r;
}

/// Every op the config's alphabet can produce, in a fixed order.
inline std::vector<GateOp> enumerate_ops(const SearchConfig &cfg) {
    const std::size_t n = cfg.n_qubits;
    std::vector<GateOp> ops;
    for (GateKind k : cfg.alphabet) {
        if (is_single_qubit(k)) {
            for (Qubit q = 0; q < n; ++q) {
                ops.push_back(GateOp::single(k, q));
            }
        } else if (k == GateKind::CNOT) {
            for (Qubit c = 0; c < n; ++c) {
                for (Qubit t = 0; t < n; ++t) {
                    if (c != t) {
                        ops.push_back(GateOp::cnot(c, t));
                    }
                }
            }
        } else {
            // Each qubit is a control, a target, or unused: 3^n assignments.
            std::size_t total = 1;
            for (std::size_t i = 0; i < n; ++i) {
                total *= 3;
            }
            for (std::size_t a = 0; a < total; ++a) {
                std::vector<Qubit> controls, targets;
                std::size_t rest = a;
                for (Qubit q = 0; q < n; ++q, rest /= 3) {
                    if (rest % 3 == 1) {
                        controls.push_back(q);
                    } else if (rest % 3 == 2) {
                        targets.push_back(q);
                    }
                }
                if (!controls.empty() && !targets.empty() && controls.size() <= cfg.max_cphase_controls &&
                    targets.size() <= cfg.max_cphase_targets) {
                    ops.push_back(GateOp::cphase(std::move(controls), std::move(targets)));
                }
            }
        }
    }
    return ops;
}

/// Brute force over all circuits of at most `cfg.max_ops` (<= 4) ops; the
/// oracle the hill climber is checked against on small targets.
template <typename ScoreFn>
std::optional<Candidate> exhaustive_search(const SearchConfig &cfg, ScoreFn score) {
    cfg.validate();
    if (cfg.max_ops > 4) {
        throw ValidationError("exhaustive_search: limited to circuits of at most 4 ops");
    }
    const std::vector<GateOp> ops = enumerate_ops(cfg);
    std::optional<Candidate> best;
    std::vector<std::size_t> idx;
    std::function<void()> rec = [&] {
        std::vector<GateOp> seq;
        for (std::size_t i : idx) {
            seq.push_back(ops[i]);
        }
        Candidate c = detail::evaluate(Circuit(cfg.n_qubits, std::move(seq)), score);
        if (c.valid && (!best || better(c, *best))) {
            best = c;
        }
        if (idx.size() == cfg.max_ops) {
            return;
        }
        for (std::size_t i = 0; i < ops.size(); ++i) {
            idx.push_back(i);
            rec();
            idx.pop_back();
        }
    };
    rec();
    return best;
}

inline nlohmann::json search_report_json(const SearchConfig &cfg, const SearchResult &r) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto &e : r.history) {
        trace.push_back({{"restart", e.restart},
                         {"iteration", e.iteration},
                         {"current_cost", e.current_cost},
                         {"current_valid", e.current_valid},
                         {"best_valid_cost", e.best_valid_cost ? nlohmann::json(*e.best_valid_cost) : nlohmann::json()}});
    }
    return nlohmann::json{
        {"seed", r.seed},
        {"budget", {{"iterations_per_restart", cfg.iterations}, {"restarts", cfg.restarts}, {"max_ops", cfg.max_ops}, {"temperature", cfg.temperature}}},
        {"evaluations", r.evaluations},
        {"found_valid", r.found_valid},
        {"best_cost", r.best.cost},
        {"best_ops", r.best.circuit.size()},
        {"validity_mode", std::string(validity_mode_name(r.best.mode))},
        {"milestones",
         {{"26", r.found_valid && r.best.cost <= kMilestoneFusedCircuit},
          {"24", r.found_valid && r.best.cost <= kMilestoneBestKnown}}},
        {"diagnostic", r.diagnostic},
        {"cost_trace", std::move(trace)},
    };
}

}  // namespace qecc
