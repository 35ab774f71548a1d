#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "rotirs/experiment.hpp"

namespace rotirs {

namespace {

std::string real(double x) {
    if (std::isnan(x)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

std::string angle(double rad) { return std::isnan(rad) ? "" : real(rad_to_deg(rad)); }

}  // namespace

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
    out << kCsvHeader << '\n';
    for (const ResultRow& r : rows) {
        out << r.scheme << ',' << r.sweep_axis << ',' << real(r.sweep_value) << ',' << real(r.snr_db_mean) << ','
            << real(r.snr_db_std) << ',' << r.trials << ',' << r.seed << ',' << real(r.gain1) << ',' << real(r.gain2)
            << ',' << angle(r.theta1) << ',' << angle(r.phi1) << ',' << angle(r.theta2) << ',' << angle(r.phi2) << ','
            << real(r.dist_product) << '\n';
    }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    emit_csv(rows, out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace rotirs
