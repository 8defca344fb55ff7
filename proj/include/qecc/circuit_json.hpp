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

// Reading and writing circuits as .qc.json documents:
//
//   {"n": 2, "ops": [{"kind": "CNOT", "controls": [0], "targets": [1]}]}
//
// "controls" is left out for one-qubit kinds.

#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qecc/circuit.hpp"

namespace qecc {

inline nlohmann::json circuit_to_json(const Circuit &c) {
    nlohmann::json ops = nlohmann::json::array();
    for (const GateOp &op : c.ops()) {
        nlohmann::json j;
        j["kind"] = std::string(kind_name(op.kind));
        if (!is_single_qubit(op.kind)) {
            j["controls"] = op.controls;
        }
        j["targets"] = op.targets;
        ops.push_back(std::move(j));
    }
    return nlohmann::json{{"n", c.n_qubits()}, {"ops", std::move(ops)}};
}

inline Circuit circuit_from_json(const nlohmann::json &doc) {
    if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_integer()) {
        throw ValidationError("circuit document needs an integer \"n\"");
    }
    long long n = doc["n"].get<long long>();
    if (n <= 0 || n > static_cast<long long>(kMaxQubits)) {
        throw ValidationError("circuit document has invalid qubit count " + std::to_string(n));
    }
    std::vector<GateOp> ops;
    if (doc.contains("ops")) {
        if (!doc["ops"].is_array()) {
            throw ValidationError("circuit document \"ops\" must be an array");
        }
        std::size_t position = 0;
        for (const auto &j : doc["ops"]) {
            auto where = " at op " + std::to_string(position);
            if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
                throw ValidationError("missing gate kind" + where);
            }
            auto kind = kind_from_name(j["kind"].get<std::string>());
            if (!kind) {
                throw ValidationError("unknown gate kind '" + j["kind"].get<std::string>() + "'" + where);
            }
            auto read_list = [&](const char *key) {
                std::vector<Qubit> out;
                if (!j.contains(key) || j[key].is_null()) {
                    return out;
                }
                if (!j[key].is_array()) {
                    throw ValidationError(std::string("\"") + key + "\" must be an array" + where);
                }
                for (const auto &v : j[key]) {
                    if (!v.is_number_integer() || v.get<long long>() < 0) {
                        throw ValidationError(std::string("bad qubit index in \"") + key + "\"" + where);
                    }
                    out.push_back(v.get<Qubit>());
                }
                return out;
            };
            GateOp op{*kind, read_list("controls"), read_list("targets")};
            validate_op(op, static_cast<std::size_t>(n), position);
            ops.push_back(std::move(op));
            ++position;
        }
    }
    return Circuit(static_cast<std::size_t>(n), std::move(ops));
}

inline std::string serialize_circuit(const Circuit &c) { return circuit_to_json(c).dump(); }

inline Circuit parse_circuit(const std::string &text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(std::string("circuit JSON parse error: ") + e.what());
    }
    return circuit_from_json(doc);
}

/// Raised when a file can't be opened or written. The CLI maps it to exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << text;
    if (!out) {
        throw IoError("write failed for " + path);
    }
}

inline Circuit load_circuit(const std::string &path) { return parse_circuit(read_text_file(path)); }

inline void save_circuit(const std::string &path, const Circuit &c) {
    write_text_file(path, circuit_to_json(c).dump(2) + "\n");
}

}  // namespace qecc
