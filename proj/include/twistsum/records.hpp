// ============================================================================
// records.hpp
//
// Result-record plumbing shared by the CLI and tests: a uniform row type for
// verification runs, CSV ("#schema=1" headed) and JSON serializers, and the
// frozen-constants calibration file.
//
// Calibration constants are fit once by the `calibrate` command and checked
// in; every other entry point reads them and never refits.  All floating
// numbers are emitted with %.17g so a fixed seed reproduces output
// byte-for-byte.
// ============================================================================
#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "common.hpp"

namespace twistsum {

inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

struct ResultRecord {
    std::string op;
    std::vector<std::pair<std::string, std::string>> inputs;  // ordered key/value
    double value_re = 0, value_im = 0;
    double bound = 0, ratio = 0, tolerance = 0;
    bool pass = true;

    void set_value(cplx z) { value_re = z.real(); value_im = z.imag(); }
};

inline std::string records_to_csv(const std::vector<ResultRecord>& rows) {
    std::ostringstream out;
    out << "#schema=1\n";
    out << "op,inputs,value_re,value_im,bound,ratio,tolerance,pass\n";
    for (const auto& r : rows) {
        std::string inp;
        for (const auto& [k, v] : r.inputs) {
            if (!inp.empty()) inp += ';';
            inp += k + "=" + v;
        }
        out << r.op << ',' << inp << ',' << fmt_g17(r.value_re) << ',' << fmt_g17(r.value_im)
            << ',' << fmt_g17(r.bound) << ',' << fmt_g17(r.ratio) << ','
            << fmt_g17(r.tolerance) << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return out.str();
}

inline std::string records_to_json(const std::vector<ResultRecord>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["op"] = r.op;
        nlohmann::ordered_json inp;
        for (const auto& [k, v] : r.inputs) inp[k] = v;
        o["inputs"] = inp;
        o["value_re"] = fmt_g17(r.value_re);
        o["value_im"] = fmt_g17(r.value_im);
        o["bound"] = fmt_g17(r.bound);
        o["ratio"] = fmt_g17(r.ratio);
        o["tolerance"] = fmt_g17(r.tolerance);
        o["pass"] = r.pass;
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

// --------------------------------------------------------------------------
// Frozen calibration constants.
//
//   x_min[k]        smallest argument at which the V_k profile is trusted
//                   (fit: where |I_k(x)| sqrt(x) first exceeds 30% of its
//                   large-x limit).
//   diag_C          frozen constant for the diagonal-asymptotic residual
//                   |I_k(a,a;X) - main term| <= diag_C * X/(a^2 X)^{3/4}.
//   eta_g           Atkin-Lehner pseudo-eigenvalue per built-in form
//                   (level 1: exactly i^k = 1 for 4 | k).
//   jl_C            frozen constant for the J/L integral shape bounds.
//   decomp_*        the frozen tiny-instance configuration used by the
//                   decomposition identity check.
// --------------------------------------------------------------------------
struct CalibrationData {
    std::map<int, double> x_min;  // keyed by weight k
    double diag_C = 0;
    double jl_C = 10.0;
    double decomp_K = 0, decomp_Q = 0;
    double smoothing_C = 0;  // sharp-vs-smoothed residual constant

    double x_min_for(int k) const {
        auto it = x_min.find(k);
        if (it == x_min.end())
            throw std::runtime_error("calibration: no x_min for weight " + std::to_string(k));
        return it->second;
    }

    static CalibrationData load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("calibration file not found: " + path);
        nlohmann::json j;
        in >> j;
        CalibrationData c;
        for (auto& [key, val] : j.at("x_min").items()) c.x_min[std::stoi(key)] = val;
        c.diag_C = j.at("diag_C");
        c.jl_C = j.at("jl_C");
        c.decomp_K = j.at("decomp_K");
        c.decomp_Q = j.at("decomp_Q");
        c.smoothing_C = j.at("smoothing_C");
        return c;
    }

    void save(const std::string& path) const {
        nlohmann::ordered_json j;
        nlohmann::ordered_json xm;
        for (auto& [k, v] : x_min) xm[std::to_string(k)] = v;
        j["x_min"] = xm;
        j["diag_C"] = diag_C;
        j["jl_C"] = jl_C;
        j["decomp_K"] = decomp_K;
        j["decomp_Q"] = decomp_Q;
        j["smoothing_C"] = smoothing_C;
        std::ofstream out(path);
        out << j.dump(2) << "\n";
    }
};

inline std::string default_data_dir() {
#ifdef TWISTSUM_DATA_DIR
    return TWISTSUM_DATA_DIR;
#else
    return "data";
#endif
}

}  // namespace twistsum
