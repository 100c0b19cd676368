#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ribetor/elliptic.hpp"
#include "ribetor/rational.hpp"

namespace ribetor {

inline const char* version_string() { return "ribetor 0.1.0"; }

/// One verification record. `inputs` and `outputs` hold serialized JSON values so the
/// public surface stays free of the JSON library.
struct CaseRecord {
    std::string id;
    std::string kind;
    std::string inputs;  // JSON text
    std::string outputs; // JSON text
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string config_json; // echo of the run configuration
    std::vector<CaseRecord> cases;
};

/// Deterministic rendering: cases sorted by id, summary appended, stable key order.
/// Identical configs and seeds produce byte-identical output.
std::string render_report_json(const Report& report);

/// Temp-file-plus-rename write in the target directory.
void write_file_atomic(const std::string& path, const std::string& content);

// JSON fragments for the domain values (stable field order).
std::string json_field_element(const Fq& a);
std::string json_point(const Point& P);
std::string json_rational(const Rat& r);
std::string json_complex(std::complex<double> z);
std::string json_escape(const std::string& s);

} // namespace ribetor
