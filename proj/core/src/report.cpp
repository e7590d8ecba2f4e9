#include "bmlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bmlab/errors.hpp"
#include "bmlab/lattice.hpp"

namespace bmlab::report {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string verdicts_json(const std::string& run_id, std::uint64_t seed,
                          const std::string& title,
                          const std::vector<stats::Verdict>& verdicts,
                          const std::vector<std::pair<std::string, double>>& extras) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"run_id\": \"" << run_id << "\",\n";
    out << "  \"seed\": " << seed << ",\n";
    out << "  \"title\": \"" << title << "\",\n";
    bool all_pass = true;
    for (const auto& v : verdicts) all_pass = all_pass && v.pass;
    out << "  \"all_pass\": " << (all_pass ? "true" : "false") << ",\n";
    if (!extras.empty()) {
        out << "  \"values\": {";
        for (std::size_t i = 0; i < extras.size(); ++i) {
            if (i) out << ", ";
            out << "\"" << extras[i].first << "\": " << format_double(extras[i].second);
        }
        out << "},\n";
    }
    out << "  \"verdicts\": [\n";
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const auto& v = verdicts[i];
        out << "    {\"name\": \"" << v.name << "\", \"observed\": "
            << format_double(v.observed) << ", \"predicted\": "
            << format_double(v.predicted) << ", \"rule\": \"" << v.rule
            << "\", \"tolerance\": " << format_double(v.tolerance)
            << ", \"se\": " << format_double(v.se) << ", \"pass\": "
            << (v.pass ? "true" : "false") << "}";
        out << (i + 1 < verdicts.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

std::string verdicts_csv(const std::vector<stats::Verdict>& verdicts) {
    std::ostringstream out;
    out << "name,observed,predicted,rule,tolerance,se,pass\n";
    for (const auto& v : verdicts)
        out << v.name << "," << format_double(v.observed) << ","
            << format_double(v.predicted) << "," << v.rule << ","
            << format_double(v.tolerance) << "," << format_double(v.se) << ","
            << (v.pass ? 1 : 0) << "\n";
    return out.str();
}

std::string stats_csv(const stats::RunResult& run) {
    std::ostringstream out;
    out << "replica_index,N,f,q,normalization,value\n";
    const auto& cfg = run.config;
    for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
        for (std::size_t fi = 0; fi < cfg.test_functions.size(); ++fi) {
            const auto label = cfg.build_test_function(fi).label();
            const auto& series = run.series[ni][fi];
            for (std::size_t r = 0; r < series.raw.size(); ++r) {
                out << r << "," << cfg.N_list[ni] << "," << label << ",all,raw,"
                    << format_double(series.raw[r]) << "\n";
                for (std::size_t qi = 0; qi < run.active_q.size(); ++qi)
                    out << r << "," << cfg.N_list[ni] << "," << label << ","
                        << run.active_q[qi] << ",s_nq,"
                        << format_double(series.s_q[qi][r]) << "\n";
            }
        }
    }
    return out.str();
}

std::string sobolev_csv(const stats::RunResult& run) {
    std::ostringstream out;
    out << "N,k,lambda,mean_coeff,mean_weighted_summand\n";
    if (run.sobolev.empty()) return out.str();
    const auto& cfg = run.config;
    const int d = cfg.dimension;
    const int K = cfg.sobolev_kmax;
    for (std::size_t ni = 0; ni < cfg.N_list.size(); ++ni) {
        const auto& sob = run.sobolev[ni];
        const std::size_t n_modes = lat::cube_size(d, K);
        std::vector<double> sum_c(n_modes, 0.0), sum_w(n_modes, 0.0);
        for (const auto& coeffs : sob.coeffs) {
            std::vector<int> k(static_cast<std::size_t>(d), 0);
            std::size_t idx = 0;
            do {
                double s = 0.0;
                for (int i = 0; i < d; ++i) {
                    const double ki = k[static_cast<std::size_t>(i)] + 1;
                    s += ki * ki;
                }
                const double w = std::pow(1.0 + M_PI * M_PI * s, -cfg.alpha);
                sum_c[idx] += coeffs[idx];
                sum_w[idx] += w * coeffs[idx] * coeffs[idx];
                ++idx;
            } while (lat::advance(k, K));
        }
        const double R = std::max<std::size_t>(sob.coeffs.size(), 1);
        std::vector<int> k(static_cast<std::size_t>(d), 0);
        std::size_t idx = 0;
        do {
            double s = 0.0;
            std::string klabel;
            for (int i = 0; i < d; ++i) {
                const int ki = k[static_cast<std::size_t>(i)] + 1;
                s += static_cast<double>(ki) * ki;
                if (i) klabel += "|";
                klabel += std::to_string(ki);
            }
            out << cfg.N_list[ni] << "," << klabel << ","
                << format_double(M_PI * M_PI * s) << ","
                << format_double(sum_c[idx] / R) << ","
                << format_double(sum_w[idx] / R) << "\n";
            ++idx;
        } while (lat::advance(k, K));
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numerical_error("write_file: cannot open " + path);
    out << content;
}

}  // namespace bmlab::report
