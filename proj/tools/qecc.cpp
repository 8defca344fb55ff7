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


// qecc: command-line front end.
//
//   qecc verify-code --code five-qubit [--encoder enc.qc.json]
//   qecc compile --circuit c.qc.json --report full
//   qecc simulate-pulses --pulses p.json --ions 3 [--circuit c.qc.json]
//   qecc noise --scheme phase3 --t 1 --n 10 --psi iplus
//   qecc figure5 --tmax 3 --steps 60 --out fig5.csv [--shots N]
//   qecc search --seed 1 --out best.qc.json --report search.json
//
// Exit codes: 0 success, 2 validation failure, 3 I/O error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qecc/circuit_json.hpp"
#include "qecc/codes.hpp"
#include "qecc/iontrap.hpp"
#include "qecc/noise.hpp"
#include "qecc/search.hpp"

namespace {

using namespace qecc;
using nlohmann::json;

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

// Raised when a command ran but its subject failed the check; the report
// has already been printed.
struct CheckFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    if (const char *env = std::getenv("QECC_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception &) {
            throw ValidationError(std::string("QECC_SEED is not an unsigned integer: ") + env);
        }
    }
    return 0;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Matrix &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(complex_json(m(r, c)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit(const json &j) { std::cout << j.dump(2) << "\n"; }

cplx parse_complex(const std::string &text) {
    std::stringstream ss(text);
    double re = 0, im = 0;
    char comma = 0;
    if (!(ss >> re)) {
        throw ValidationError("bad complex number '" + text + "' (expected re or re,im)");
    }
    if (ss >> comma) {
        if (comma != ',' || !(ss >> im)) {
            throw ValidationError("bad complex number '" + text + "' (expected re or re,im)");
        }
    }
    return {re, im};
}

// ---- verify-code ------------------------------------------------------------

struct VerifyOptions {
    std::string code = "five-qubit";
    std::string encoder_path;
    std::uint64_t seed = 0;
    std::size_t trials = 20;
};

json syndrome_table_json(const SyndromeTable &table) {
    json out = json::object();
    for (const auto &[syndrome, entry] : table.entries) {
        json errors = json::array();
        for (const ErrorOp &e : entry.errors) {
            errors.push_back(e.name());
        }
        out[syndrome] = {{"correction", std::string(correction_name(entry.correction))}, {"errors", errors}};
    }
    return out;
}

void run_verify(const VerifyOptions &opt) {
    CodeSpec code = opt.code == "five-qubit" ? five_qubit_code()
                    : opt.code == "phase3"   ? three_qubit_phase_code()
                                             : two_qubit_zeno_code();
    json report{{"code", code.name}, {"n_physical", code.n_physical}};
    bool ok = true;

    if (!opt.encoder_path.empty()) {
        Circuit enc = load_circuit(opt.encoder_path);
        if (enc.n_qubits() != code.n_physical) {
            throw ValidationError("encoder acts on " + std::to_string(enc.n_qubits()) + " qubits, code needs " +
                                  std::to_string(code.n_physical));
        }
        report["encoder"] = opt.encoder_path;
        if (opt.code == "five-qubit") {
            // Any circuit generating a perfect code is checked on its own codewords.
            Validity v = is_valid_perfect_code(enc);
            report["reference_match"] = std::string(validity_mode_name(v.mode));
            code = code_from_encoder(enc, code.name);
        } else {
            code.encoder = enc;
        }
    }

    EncoderCheck check = check_code(code);
    report["codewords"] = {{"orthonormality_error", check.orthonormality_error},
                           {"encoder_deviation", check.encoder_deviation},
                           {"ok", check.ok}};
    ok = ok && check.ok;
    if (opt.code == "five-qubit") {
        auto [z, o] = five_qubit_codewords();
        double dz = (code.logical_zero.amplitudes() - z.amplitudes()).cwiseAbs().maxCoeff();
        double dOne = (code.logical_one.amplitudes() - o.amplitudes()).cwiseAbs().maxCoeff();
        report["codewords"]["reference_deviation"] = std::max(dz, dOne);
    }

    if (code.decoder == DecoderKind::DetectionOnly) {
        std::vector<ErrorOp> detectable = single_qubit_errors_of(Pauli::Z, code.n_physical);
        double dv = detection_violation(code, detectable);
        json names = json::array();
        for (const ErrorOp &e : detectable) {
            names.push_back(e.name());
        }
        report["notice"] = "detection-only code: errors are flagged by the ancilla, never corrected; no syndrome table";
        report["detection"] = {{"errors", names}, {"worst_violation", dv}, {"ok", dv <= kKnillLaflammeTol}};
        ok = ok && dv <= kKnillLaflammeTol;
        report["ok"] = ok;
        emit(report);
        if (!ok) {
            throw CheckFailed("code check failed");
        }
        return;
    }

    KnillLaflammeReport kl = check_knill_laflamme(code, code.correctable);
    json names = json::array();
    for (const ErrorOp &e : code.correctable) {
        names.push_back(e.name());
    }
    report["knill_laflamme"] = {{"ok", kl.ok},
                                {"worst_violation", kl.worst_violation},
                                {"worst_pair", kl.worst_pair},
                                {"errors", names},
                                {"witness", matrix_json(kl.witness)}};
    ok = ok && kl.ok;

    try {
        SyndromeTable table = build_syndrome_table(code);
        report["syndrome_table"] = syndrome_table_json(table);
        Rng rng(opt.seed);
        std::normal_distribution<double> normal;
        std::vector<PureState> inputs;
        for (std::size_t i = 0; i < opt.trials; ++i) {
            inputs.push_back(PureState::qubit({normal(rng), normal(rng)}, {normal(rng), normal(rng)}));
        }
        json fids = json::object();
        double worst = 1.0;
        for (const ErrorOp &e : code.correctable) {
            double f = 1.0;
            for (const PureState &psi : inputs) {
                DecodeResult r = decode_and_correct(code, table, apply_error(encode_with_circuit(code, psi), e));
                f = std::min(f, fidelity(r.psi, psi));
            }
            fids[e.name()] = f;
            worst = std::min(worst, f);
        }
        report["fidelities"] = {{"seed", opt.seed}, {"trials", opt.trials}, {"min_per_error", fids}, {"min", worst}};
        ok = ok && worst >= 1 - kCorrectionTol;
    } catch (const ValidationError &e) {
        report["syndrome_table"] = nullptr;
        report["syndrome_error"] = e.what();
        ok = false;
    }
    report["ok"] = ok;
    emit(report);
    if (!ok) {
        throw CheckFailed("code check failed");
    }
}

// ---- compile / simulate-pulses ----------------------------------------------

constexpr std::size_t kMaxSimulatedIons = 6;

json verification_json(const VerificationReport &r) {
    return {{"ok", r.ok}, {"deviation", r.deviation}, {"leakage", r.leakage}, {"phonon_residual", r.phonon_residual}};
}

void run_compile(const std::string &path, const std::string &mode) {
    Circuit c = load_circuit(path);
    PulseSequence seq = compile_circuit(c);
    json report{{"n_qubits", c.n_qubits()}, {"pulses", pulses_to_json(seq)}, {"count", seq.cost()}};
    bool ok = true;
    if (mode == "full") {
        json breakdown = json::array();
        std::vector<std::size_t> costs = pulse_breakdown(c);
        for (std::size_t i = 0; i < c.size(); ++i) {
            breakdown.push_back({{"op", i}, {"kind", std::string(kind_name(c.ops()[i].kind))}, {"pulses", costs[i]}});
        }
        report["breakdown"] = breakdown;
        if (c.n_qubits() <= kMaxSimulatedIons) {
            VerificationReport v = verify_compilation(c, seq);
            report["verification"] = verification_json(v);
            ok = v.ok;
        } else {
            report["verification"] = {{"skipped", "more than 6 ions"}};
        }
    }
    emit(report);
    if (!ok) {
        throw CheckFailed("compiled sequence does not reproduce the circuit");
    }
}

void run_simulate(const std::string &pulses_path, std::size_t ions, const std::string &circuit_path) {
    if (ions == 0 || ions > kMaxSimulatedIons) {
        throw ValidationError("--ions must be between 1 and 6");
    }
    json doc;
    try {
        doc = json::parse(read_text_file(pulses_path));
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("pulse JSON parse error: ") + e.what());
    }
    PulseSequence seq = pulses_from_json(doc.is_object() && doc.contains("pulses") ? doc["pulses"] : doc);
    for (const Pulse &p : seq.pulses) {
        if (p.ion >= ions) {
            throw ValidationError("pulse addresses ion " + std::to_string(p.ion) + " but only " +
                                  std::to_string(ions) + " ions exist");
        }
    }
    PulseSimulation sim = simulate_pulse_sequence(seq, ions);
    json report{{"ions", ions},
                {"count", seq.cost()},
                {"leakage", sim.leakage},
                {"phonon_residual", sim.phonon_residual},
                {"unitary", matrix_json(sim.unitary)}};
    bool ok = true;
    if (!circuit_path.empty()) {
        Circuit c = load_circuit(circuit_path);
        if (c.n_qubits() != ions) {
            throw ValidationError("circuit qubit count does not match --ions");
        }
        VerificationReport v = verify_compilation(c, seq);
        report["verification"] = verification_json(v);
        ok = v.ok;
    }
    emit(report);
    if (!ok) {
        throw CheckFailed("pulse sequence does not reproduce the circuit");
    }
}

// ---- noise / figure5 --------------------------------------------------------

struct NoiseOptions {
    std::string scheme = "zeno2";
    double t = 1.0;
    std::size_t n = 1;
    std::string mode = "exact";
    std::size_t shots = 100000;
    std::uint64_t seed = 0;
    std::string psi = "iplus";
    std::string alpha = "1";
    std::string beta = "0,1";
};

void run_noise(const NoiseOptions &opt) {
    auto kind = scheme_from_name(opt.scheme);
    if (!kind) {
        throw ValidationError("unknown scheme '" + opt.scheme + "'");
    }
    PureState psi = opt.psi == "plus"    ? psi_plus()
                    : opt.psi == "iplus" ? psi_iplus()
                                         : PureState::qubit(parse_complex(opt.alpha), parse_complex(opt.beta));
    DensityMatrix rho0 = DensityMatrix::from_pure(psi);
    if (std::abs(rho0(1, 0)) < kExactTol) {
        throw ValidationError("input state has no coherence to track (basis state)");
    }
    Scheme scheme{*kind, opt.n};
    CoherenceSample s{opt.t, 0.0, std::nullopt, std::nullopt};
    if (opt.mode != "mc") {
        s.c_exact = coherence(run_scheme_exact(scheme, psi, opt.t), rho0);
    }
    if (opt.mode != "exact") {
        auto est = coherence(run_scheme_monte_carlo(scheme, psi, opt.t, opt.shots, opt.seed), rho0);
        s.c_mc = est.value;
        s.mc_stderr = est.std_error;
    }
    std::cout << kCoherenceCsvHeader << "\n";
    if (opt.mode == "mc") {
        // No exact column in this mode.
        std::cout << format_number(s.t) << ',' << opt.scheme << ',' << opt.n << ",," << format_number(*s.c_mc) << ','
                  << format_number(*s.mc_stderr) << "\n";
    } else {
        std::cout << coherence_csv_row(scheme, s) << "\n";
    }
}

void run_figure5(double t_max, std::size_t steps, const std::string &out, std::size_t shots, std::uint64_t seed) {
    auto curves = figure5_data(t_max, steps, shots, seed);
    std::ostringstream csv;
    write_coherence_csv(csv, curves);
    if (out.empty() || out == "-") {
        std::cout << csv.str();
    } else {
        write_text_file(out, csv.str());
        std::cerr << "wrote " << curves.size() * (steps + 1) << " rows to " << out << "\n";
    }
}

// ---- search -----------------------------------------------------------------

struct SearchOptions {
    SearchConfig cfg;
    std::string alphabet;
    std::string initial;
    std::string out;
    std::string report;
};

void run_search(SearchOptions opt) {
    if (!opt.alphabet.empty()) {
        opt.cfg.alphabet.clear();
        std::stringstream ss(opt.alphabet);
        std::string name;
        while (std::getline(ss, name, ',')) {
            auto k = kind_from_name(name);
            if (!k) {
                throw ValidationError("unknown gate kind '" + name + "' in --alphabet");
            }
            opt.cfg.alphabet.push_back(*k);
        }
    }
    if (!opt.initial.empty()) {
        opt.cfg.initial = load_circuit(opt.initial);
    }
    SearchResult r = search(opt.cfg);
    json report = search_report_json(opt.cfg, r);
    if (!opt.out.empty()) {
        save_circuit(opt.out, r.best.circuit);
    }
    if (!opt.report.empty()) {
        write_text_file(opt.report, report.dump(2) + "\n");
    }
    report.erase("cost_trace");
    report["circuit"] = circuit_to_json(r.best.circuit);
    emit(report);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"qecc: five-qubit code, ion-trap pulse compiler and phase-noise lab"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_set = false;
    auto add_seed = [&](CLI::App *cmd) {
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { seed = s, seed_set = true; }, "RNG seed (default: $QECC_SEED or 0)");
    };

    VerifyOptions verify;
    auto *cmd_verify = app.add_subcommand("verify-code", "check codewords, KL conditions and syndrome decoding");
    cmd_verify->add_option("--code", verify.code)->check(CLI::IsMember({"five-qubit", "phase3", "zeno2"}));
    cmd_verify->add_option("--encoder", verify.encoder_path, "encoder circuit (.qc.json)");
    cmd_verify->add_option("--trials", verify.trials, "random inputs per error class")->check(CLI::PositiveNumber);
    add_seed(cmd_verify);

    std::string circuit_path, report_mode = "count";
    auto *cmd_compile = app.add_subcommand("compile", "lower a circuit to ion-trap pulses");
    cmd_compile->add_option("--circuit", circuit_path)->required();
    cmd_compile->add_option("--report", report_mode)->check(CLI::IsMember({"count", "full"}));

    std::string pulses_path, sim_circuit;
    std::size_t ions = 0;
    auto *cmd_sim = app.add_subcommand("simulate-pulses", "simulate a pulse sequence on the trap model");
    cmd_sim->add_option("--pulses", pulses_path, "pulse JSON array (or compile output)")->required();
    cmd_sim->add_option("--ions", ions)->required();
    cmd_sim->add_option("--circuit", sim_circuit, "circuit to compare against");

    NoiseOptions noise;
    auto *cmd_noise = app.add_subcommand("noise", "coherence of one scheme at one time");
    cmd_noise->add_option("--scheme", noise.scheme)->check(CLI::IsMember({"uncoded", "zeno2", "phase3"}));
    cmd_noise->add_option("--t", noise.t)->check(CLI::NonNegativeNumber);
    cmd_noise->add_option("--n", noise.n, "evenly spaced repetitions")->check(CLI::PositiveNumber);
    cmd_noise->add_option("--mode", noise.mode)->check(CLI::IsMember({"exact", "mc", "both"}));
    cmd_noise->add_option("--shots", noise.shots)->check(CLI::PositiveNumber);
    cmd_noise->add_option("--psi", noise.psi)->check(CLI::IsMember({"plus", "iplus", "custom"}));
    cmd_noise->add_option("--alpha", noise.alpha, "custom amplitude of |0>, as re or re,im");
    cmd_noise->add_option("--beta", noise.beta, "custom amplitude of |1>, as re or re,im");
    add_seed(cmd_noise);

    double t_max = 3.0;
    std::size_t steps = 60, fig_shots = 0;
    std::string fig_out;
    auto *cmd_fig = app.add_subcommand("figure5", "coherence curves of all four schemes as CSV");
    cmd_fig->add_option("--tmax", t_max)->check(CLI::NonNegativeNumber);
    cmd_fig->add_option("--steps", steps)->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    cmd_fig->add_option("--out", fig_out, "output CSV path (stdout when omitted)");
    cmd_fig->add_option("--shots", fig_shots, "Monte-Carlo trajectories per point (0 = exact only)");
    add_seed(cmd_fig);

    SearchOptions so;
    auto *cmd_search = app.add_subcommand("search", "hill-climb for cheap five-qubit encoders");
    cmd_search->add_option("--iterations", so.cfg.iterations)->check(CLI::PositiveNumber);
    cmd_search->add_option("--restarts", so.cfg.restarts)->check(CLI::PositiveNumber);
    cmd_search->add_option("--max-ops", so.cfg.max_ops)->check(CLI::PositiveNumber);
    cmd_search->add_option("--max-controls", so.cfg.max_cphase_controls)->check(CLI::PositiveNumber);
    cmd_search->add_option("--max-targets", so.cfg.max_cphase_targets)->check(CLI::PositiveNumber);
    cmd_search->add_option("--temperature", so.cfg.temperature, "annealing start temperature (0 = strict climb)")
        ->check(CLI::NonNegativeNumber);
    cmd_search->add_option("--alphabet", so.alphabet, "comma-separated gate kinds");
    cmd_search->add_option("--initial", so.initial, "starting circuit (.qc.json)");
    cmd_search->add_option("--out", so.out, "best circuit (.qc.json)");
    cmd_search->add_option("--report", so.report, "search report (JSON)");
    add_seed(cmd_search);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (!seed_set) {
            seed = default_seed();
        }
        if (cmd_verify->parsed()) {
            verify.seed = seed;
            run_verify(verify);
        } else if (cmd_compile->parsed()) {
            run_compile(circuit_path, report_mode);
        } else if (cmd_sim->parsed()) {
            run_simulate(pulses_path, ions, sim_circuit);
        } else if (cmd_noise->parsed()) {
            noise.seed = seed;
            run_noise(noise);
        } else if (cmd_fig->parsed()) {
            run_figure5(t_max, steps, fig_out, fig_shots, seed);
        } else if (cmd_search->parsed()) {
            so.cfg.seed = seed;
            run_search(so);
        }
    } catch (const CheckFailed &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const IoError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
