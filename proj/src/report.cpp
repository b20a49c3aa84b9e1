#include "qsc/report.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

namespace qsc {

using nlohmann::json;

int ResidualReport::matched() const {
    int n = 0;
    for (const auto& e : entries) n += e.verdict == "MATCH";
    return n;
}
int ResidualReport::mismatched() const {
    int n = 0;
    for (const auto& e : entries) n += e.verdict == "MISMATCH";
    return n;
}
int ResidualReport::not_stated() const {
    int n = 0;
    for (const auto& e : entries) n += e.verdict == "NOT_STATED";
    return n;
}

std::string ResidualReport::to_json() const {
    json j;
    j["metadata"] = {{"seed", meta.seed},
                     {"tol_match", meta.tol_match},
                     {"task", meta.task},
                     {"version", meta.version}};
    j["summary"] = {{"checked", checked()},
                    {"matched", matched()},
                    {"mismatched", mismatched()},
                    {"not_stated", not_stated()}};
    j["entries"] = json::array();
    for (const auto& e : entries)
        j["entries"].push_back({{"formula_id", e.formula_id},
                                {"where", e.where},
                                {"residual", e.residual},
                                {"verdict", e.verdict},
                                {"note", e.note}});
    return j.dump(2);
}

std::string ResidualReport::to_csv() const {
    std::string out = "formula_id,where,residual,verdict,note\n";
    char buf[64];
    for (const auto& e : entries) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.residual);
        out += "\"" + e.formula_id + "\",\"" + e.where + "\"," + buf + "," + e.verdict + ",\"" +
               e.note + "\"\n";
    }
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

} // namespace qsc
