#include "ribetor/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace ribetor {

using ordered_json = nlohmann::ordered_json;

std::string render_report_json(const Report& report) {
    ordered_json doc;
    doc["config"] = ordered_json::parse(report.config_json.empty() ? "{}" : report.config_json);
    ordered_json cases = ordered_json::array();
    std::vector<const CaseRecord*> sorted;
    sorted.reserve(report.cases.size());
    for (const auto& c : report.cases) sorted.push_back(&c);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const CaseRecord* a, const CaseRecord* b) { return a->id < b->id; });
    size_t passed = 0;
    for (const auto* c : sorted) {
        ordered_json jc;
        jc["id"] = c->id;
        jc["kind"] = c->kind;
        jc["inputs"] = ordered_json::parse(c->inputs.empty() ? "{}" : c->inputs);
        jc["outputs"] = ordered_json::parse(c->outputs.empty() ? "{}" : c->outputs);
        jc["pass"] = c->pass;
        jc["detail"] = c->detail;
        cases.push_back(std::move(jc));
        if (c->pass) ++passed;
    }
    doc["cases"] = std::move(cases);
    doc["summary"] = {{"total", report.cases.size()},
                      {"passed", passed},
                      {"failed", report.cases.size() - passed}};
    doc["version"] = version_string();
    return doc.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(errc::config_error, "cannot open " + tmp + " for writing");
        out << content;
        if (!out.good()) raise(errc::config_error, "short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        raise(errc::config_error, "cannot rename " + tmp + " to " + path);
}

std::string json_field_element(const Fq& a) {
    ordered_json j;
    j["p"] = a.ctx()->p();
    j["k"] = a.ctx()->k();
    j["coeffs"] = a.coeffs();
    return j.dump();
}

std::string json_point(const Point& P) {
    ordered_json j;
    if (P.is_infinity()) {
        j["infinity"] = true;
    } else {
        j["infinity"] = false;
        j["x"] = ordered_json::parse(json_field_element(P.x()));
        j["y"] = ordered_json::parse(json_field_element(P.y()));
    }
    return j.dump();
}

std::string json_rational(const Rat& r) {
    ordered_json j;
    j["num"] = r.num();
    j["den"] = r.den();
    return j.dump();
}

std::string json_complex(std::complex<double> z) {
    ordered_json j;
    j["re"] = z.real();
    j["im"] = z.imag();
    return j.dump();
}

std::string json_escape(const std::string& s) { return ordered_json(s).dump(); }

} // namespace ribetor
