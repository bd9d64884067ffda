#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace cartanlab {

struct Verdict {
    std::string name;
    std::string status;  ///< PASS, FAIL, FLAT or NOT-FLAT
    std::string witness;
};

struct InputRecord {
    std::string path;
    std::string sha256;
};

/// Outcome of one CLI command. The JSON form omits wall time so it is byte-stable.
struct Report {
    std::string command;
    std::vector<InputRecord> inputs;
    std::vector<Verdict> verdicts;
    std::vector<std::pair<std::string, double>> maxima;
    std::uint64_t seed = 0;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
    double wall_seconds = 0;

    void verdict(std::string name, bool ok, std::string witness = {});
    void flatness(std::string name, bool flat, std::string witness = {});
    void maximum(std::string name, double value);

    bool failed() const;
    std::string to_json() const;
    std::string to_human() const;
};

/// Shortest round-trip decimal form.
std::string format_double(double x);
nlohmann::ordered_json point_json(const std::vector<double>& p);

}  // namespace cartanlab
