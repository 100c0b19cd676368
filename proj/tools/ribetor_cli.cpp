// Command-line driver: curve / endomorphism / torsion selection, verification suites,
// machine-readable reports. Exit codes: 0 all checks pass, 1 check failure (report still
// written), 2 configuration or hypothesis error.

#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ribetor/suites.hpp"

using namespace ribetor;
using ordered_json = nlohmann::ordered_json;

namespace {

Endo parse_endo(const std::string& spec, const CurvePtr& E) {
    // accepted forms: "m", "g", "k*g", "m+k*g", "m-k*g" with g in {pi, omega, i}
    auto make_gen = [&](const std::string& name) {
        if (name == "pi") return Generator::make(GenKind::frobenius, E);
        if (name == "omega") return Generator::make(GenKind::omega, E);
        if (name == "i") return Generator::make(GenKind::i_unit, E);
        raise(errc::config_error, "unknown generator '" + name + "'");
    };
    std::string s;
    for (char c : spec)
        if (!isspace((unsigned char)c)) s += c;
    if (s.empty()) raise(errc::config_error, "empty endomorphism spec");

    // split at the last '+' or '-' that is not the leading sign
    size_t split = std::string::npos;
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] == '+' || s[i] == '-') split = i;
    auto parse_term = [&](const std::string& term, int64_t& m, int64_t& k, std::string& gen) {
        size_t star = term.find('*');
        if (star != std::string::npos) {
            k = std::stoll(term.substr(0, star));
            gen = term.substr(star + 1);
        } else if (term == "pi" || term == "omega" || term == "i") {
            k = 1;
            gen = term;
        } else if (term == "-pi" || term == "-omega" || term == "-i") {
            k = -1;
            gen = term.substr(1);
        } else {
            m = std::stoll(term);
        }
    };
    int64_t m = 0, k = 0;
    std::string gen;
    try {
        if (split == std::string::npos) {
            parse_term(s, m, k, gen);
        } else {
            std::string first = s.substr(0, split);
            std::string second = s.substr(split); // keeps the sign
            parse_term(first, m, k, gen);
            int64_t m2 = 0, k2 = 0;
            std::string gen2;
            parse_term(second, m2, k2, gen2);
            m += m2;
            k += k2;
            if (!gen2.empty()) gen = gen2;
        }
    } catch (const std::exception&) {
        raise(errc::config_error, "cannot parse endomorphism '" + spec + "'");
    }
    if (gen.empty()) {
        if (k != 0) raise(errc::config_error, "generator missing in '" + spec + "'");
        gen = "pi"; // integer endomorphisms default to the Frobenius ring
    }
    return endo_make(m, k, make_gen(gen));
}

std::vector<uint64_t> parse_n_list(const std::string& s) {
    std::vector<uint64_t> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoull(cur));
            cur.clear();
        } else if (!isspace((unsigned char)c)) {
            cur += c;
        }
    }
    return out;
}

std::vector<long long> parse_ll_list(const std::string& s) {
    std::vector<long long> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) out.push_back(std::stoll(cur));
            cur.clear();
        } else if (!isspace((unsigned char)c)) {
            cur += c;
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ribetor: Ribet sections of Poincare torsors, verified two ways\n"
                 "  algebraic: generalized Jacobians of nodal curves over finite fields\n"
                 "  analytic:  the mixed-period uniformization of the universal torsor\n"
                 "Reports are deterministic JSON; identical configs and seeds give\n"
                 "byte-identical files. CSV is emitted only by pairing-table\n"
                 "(columns n,i,j,value,order; value = e_n(P, iP+jQ) over a torsion\n"
                 "basis, as a coefficient vector) and orbit-sample (columns\n"
                 "m,fiber,base0..base{2d-1}: coordinates of m*r_f(x) reduced to [0,1)).\n"
                 "Exit codes: 0 all checks pass, 1 check failure (report still\n"
                 "written), 2 configuration or hypothesis error."};

    std::string mode;
    app.add_option("--mode", mode, "verify-ribet-algebraic | verify-ribet-analytic | "
                                   "pairing-table | search-order-n2 | orbit-sample | selftest")
        ->required();
    uint64_t p = 0, a4 = 0, a6 = 0;
    app.add_option("--p", p, "prime p > 3 of the base field");
    app.add_option("--a4", a4, "curve coefficient a4 (y^2 = x^3 + a4 x + a6)");
    app.add_option("--a6", a6, "curve coefficient a6");
    std::string preset;
    app.add_option("--preset", preset, "curve preset: j0 (needs p = 1 mod 3) or j1728 (p = 1 mod 4)");
    std::string endo_spec;
    app.add_option("--endo", endo_spec, "endomorphism, e.g. 'pi', '1+2*omega', '-1+1*i'");
    std::string n_spec = "3,5,7";
    app.add_option("--n", n_spec, "comma-separated torsion orders (orbit-sample: sample count)");
    int d = 1;
    app.add_option("--d", d, "dimension of the analytic model (1..3)");
    std::string fz_spec;
    app.add_option("--fz", fz_spec, "integer entries of f_Z, row-major, length (2d)^2");
    uint64_t seed = 0x5EED;
    app.add_option("--seed", seed, "deterministic seed (env RIBETOR_SEED overrides)");
    double tol_action = 1e-9;
    app.add_option("--tol-action", tol_action, "tolerance for composed analytic actions");
    std::string out_path;
    app.add_option("--out", out_path, "output path (default ribetor_report.json / .csv)");
    std::string format = "json";
    app.add_option("--format", format, "json | csv (csv only for pairing-table / orbit-sample)");

    CLI11_PARSE(app, argc, argv);

    if (const char* env = std::getenv("RIBETOR_SEED")) seed = std::strtoull(env, nullptr, 0);

    try {
        auto ns = parse_n_list(n_spec);

        ordered_json config{{"mode", mode},          {"p", p},
                            {"a4", a4},              {"a6", a6},
                            {"preset", preset},      {"endo", endo_spec},
                            {"n", ns},               {"d", d},
                            {"fz", fz_spec},         {"seed", seed},
                            {"tol_action", tol_action}, {"format", format}};

        auto resolve_curve = [&]() -> CurvePtr {
            if (p == 0) raise(errc::config_error, "--p is required for this mode");
            if (preset == "j0") return Curve::preset_j0(p, a6 ? a6 : 1);
            if (preset == "j1728") return Curve::preset_j1728(p, a4 ? a4 : 1);
            if (!preset.empty()) raise(errc::config_error, "unknown preset '" + preset + "'");
            return Curve::create(p, a4, a6);
        };
        auto resolve_fz = [&]() -> IntBlockMatrix {
            auto vals = parse_ll_list(fz_spec);
            if ((int)vals.size() != 4 * d * d)
                raise(errc::config_error, "--fz needs (2d)^2 integers");
            MatI fz(2 * d, 2 * d);
            for (int i = 0; i < 2 * d; ++i)
                for (int j = 0; j < 2 * d; ++j) fz(i, j) = vals[i * 2 * d + j];
            return IntBlockMatrix::make(fz);
        };

        Report report;
        report.config_json = config.dump();
        std::string csv;
        bool csv_mode = false;

        if (mode == "selftest") {
            report.cases = suite_selftest(seed);
        } else if (mode == "verify-ribet-algebraic") {
            auto E = resolve_curve();
            if (endo_spec.empty()) raise(errc::config_error, "--endo is required");
            Endo phi = parse_endo(endo_spec, E);
            report.cases = suite_ribet_algebraic(E, phi, ns, seed);
            auto more = suite_biextension(E, seed);
            report.cases.insert(report.cases.end(), more.begin(), more.end());
            auto rec = suite_reciprocity(E, seed);
            report.cases.insert(report.cases.end(), rec.begin(), rec.end());
        } else if (mode == "search-order-n2") {
            auto E = resolve_curve();
            if (endo_spec.empty()) raise(errc::config_error, "--endo is required");
            Endo phi = parse_endo(endo_spec, E);
            // hypothesis violations are configuration errors in this mode
            for (uint64_t n : ns) {
                SeededRng rng(seed);
                auto res = search_order_n2(E, phi, n, rng.fork(n));
                ordered_json outputs{{"n", n},
                                     {"degree", res.degree},
                                     {"order", res.order},
                                     {"x", ordered_json::parse(json_point(res.x))}};
                report.cases.push_back(CaseRecord{"searchn2/n=" + std::to_string(n),
                                                  "order-n2-witness", config.dump(),
                                                  outputs.dump(), res.order == n * n,
                                                  "witness with ord(t^J) = n^2"});
            }
        } else if (mode == "verify-ribet-analytic") {
            std::vector<int> dims;
            for (int dd = 1; dd <= d; ++dd) dims.push_back(dd);
            report.cases = suite_analytic_actions(dims, seed, 10000, tol_action);
            auto dual = suite_duality(seed);
            report.cases.insert(report.cases.end(), dual.begin(), dual.end());
            auto stab = suite_stabilizer(seed);
            report.cases.insert(report.cases.end(), stab.begin(), stab.end());
            auto tors = suite_torsion_exact();
            report.cases.insert(report.cases.end(), tors.begin(), tors.end());
            if (!fz_spec.empty()) {
                auto f = resolve_fz();
                SeededRng rng(seed ^ 0xF2u);
                for (long long n = 1; n <= 6; ++n) {
                    bool ok = true;
                    for (int t = 0; t < 32; ++t) {
                        std::vector<Rat> x;
                        for (int c = 0; c < 2 * d; ++c) x.push_back(Rat((long long)rng.below(n), n));
                        auto tv = ribet_torsion_verify(f, x);
                        if (((__int128)tv.n * tv.n) % tv.order != 0) ok = false;
                    }
                    report.cases.push_back(CaseRecord{
                        "torsion/fz/n=" + std::to_string(n), "order-divides-n2", config.dump(),
                        "{}", ok, "given f_Z, sampled x with denominator dividing n"});
                }
            }
        } else if (mode == "pairing-table") {
            auto E = resolve_curve();
            csv = pairing_table_csv(E, ns, seed);
            csv_mode = true;
        } else if (mode == "orbit-sample") {
            auto f = resolve_fz();
            SeededRng rng(seed);
            Eigen::RowVectorXd x(2 * d);
            for (int i = 0; i < 2 * d; ++i) x(i) = (double)rng.below(1000000) / 1000000.0;
            int count = ns.empty() ? 100 : (int)ns[0];
            csv = orbit_sample_csv(f, x, count);
            csv_mode = true;
        } else {
            raise(errc::config_error, "unknown mode '" + mode + "'");
        }

        if (format != "csv" && format != "json")
            raise(errc::config_error, "unknown format '" + format + "'");
        if (csv_mode) {
            std::string path = out_path.empty() ? "ribetor_table.csv" : out_path;
            write_file_atomic(path, csv);
            std::cout << "wrote " << path << "\n";
            return 0;
        }
        if (format == "csv")
            raise(errc::config_error,
                  "csv output exists only for pairing-table and orbit-sample");

        std::string rendered = render_report_json(report);
        std::string path = out_path.empty() ? "ribetor_report.json" : out_path;
        write_file_atomic(path, rendered);
        size_t passed = 0;
        for (const auto& c : report.cases)
            if (c.pass) ++passed;
        std::cout << "cases: " << report.cases.size() << ", passed: " << passed
                  << ", report: " << path << "\n";
        return all_pass(report.cases) ? 0 : 1;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == errc::config_error || e.code() == errc::hypothesis_violated) return 2;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
