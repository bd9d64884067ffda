#include "cartanlab/report.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>

namespace cartanlab {

void Report::verdict(std::string name, bool ok, std::string witness) {
    verdicts.push_back({std::move(name), ok ? "PASS" : "FAIL", std::move(witness)});
}

void Report::flatness(std::string name, bool flat, std::string witness) {
    verdicts.push_back({std::move(name), flat ? "FLAT" : "NOT-FLAT", std::move(witness)});
}

void Report::maximum(std::string name, double value) { maxima.emplace_back(std::move(name), value); }

bool Report::failed() const {
    for (const auto& v : verdicts)
        if (v.status == "FAIL" || v.status == "NOT-FLAT") return true;
    return false;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json point_json(const std::vector<double>& p) {
    auto a = nlohmann::ordered_json::array();
    for (double x : p) a.push_back(x);
    return a;
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    auto in = nlohmann::ordered_json::array();
    for (const auto& r : inputs) in.push_back({{"path", r.path}, {"sha256", r.sha256}});
    j["inputs"] = in;
    auto vs = nlohmann::ordered_json::array();
    for (const auto& v : verdicts) vs.push_back({{"name", v.name}, {"status", v.status}, {"witness", v.witness}});
    j["verdicts"] = vs;
    auto mx = nlohmann::ordered_json::object();
    for (const auto& [k, v] : maxima) mx[k] = v;
    j["maxima"] = mx;
    j["seed"] = seed;
    j["details"] = details;
    j["ok"] = !failed();
    return j.dump(2) + "\n";
}

std::string Report::to_human() const {
    std::ostringstream os;
    os << command << "\n";
    for (const auto& r : inputs) os << "  input  " << r.path << "  sha256:" << r.sha256.substr(0, 16) << "\n";
    for (const auto& v : verdicts) {
        os << "  " << std::left << std::setw(9) << v.status << v.name;
        if (!v.witness.empty()) os << "  (" << v.witness << ")";
        os << "\n";
    }
    for (const auto& [k, v] : maxima) os << "  " << k << " = " << format_double(v) << "\n";
    if (!details.empty()) {
        for (const auto& [k, v] : details.items()) {
            std::string s = v.is_string() ? v.get<std::string>() : v.dump();
            os << "  " << k << ": " << s << "\n";
        }
    }
    os << "  seed " << seed << ", " << std::fixed << std::setprecision(3) << wall_seconds << " s\n";
    return os.str();
}

}  // namespace cartanlab
