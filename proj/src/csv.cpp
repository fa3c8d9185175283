#include "hjs/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "hjs/errors.hpp"

namespace hjs::csv {

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    // snprintf follows the "C" locale unless setlocale() is called, which this
    // program never does.
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::string>& series_header() {
    static const std::vector<std::string> h = {
        "t",        "mean_q",        "mean_p",        "var_q",           "var_p_op",
        "var_p_hj", "amp_grad",      "uncertainty_product", "norm",     "oracle_mean_q",
        "oracle_var_q", "oracle_mean_p", "oracle_var_p_op", "oracle_var_p_hj", "oracle_amp_grad",
        "oracle_uncertainty_product"};
    return h;
}

namespace {

std::ofstream open(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

// RFC 4180 quoting, only for cells that need it (numbers never do).
void write_cell(std::ofstream& out, const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) {
        out << cell;
        return;
    }
    out << '"';
    for (char ch : cell) {
        if (ch == '"') out << '"';
        out << ch;
    }
    out << '"';
}

void write_row(std::ofstream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        write_cell(out, cells[i]);
    }
    out << '\n';
}

}  // namespace

void write_series(const std::filesystem::path& path, const std::vector<double>& times,
                  const std::vector<MomentSet>& sim, const std::vector<MomentSet>* oracle) {
    std::ofstream out = open(path);
    write_row(out, series_header());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const MomentSet& s = sim[i];
        std::vector<std::string> row = {format(times[i]),   format(s.mean_q),   format(s.mean_p),
                                        format(s.var_q),    format(s.var_p_op), format(s.var_p_hj),
                                        format(s.amp_grad), format(s.uncertainty_product), format(s.norm)};
        if (oracle != nullptr) {
            const MomentSet& o = (*oracle)[i];
            for (double v : {o.mean_q, o.var_q, o.mean_p, o.var_p_op, o.var_p_hj, o.amp_grad, o.uncertainty_product}) {
                row.push_back(format(v));
            }
        } else {
            row.resize(series_header().size());
        }
        write_row(out, row);
    }
}

void write_fields(const std::filesystem::path& path, const Grid& grid, const ComplexField& psi,
                  const std::optional<RealField>& R, const std::optional<RealField>& S, const RealField& born) {
    std::ofstream out = open(path);
    write_row(out, {"q", "R", "S", "re_psi", "im_psi", "born_density"});
    for (std::size_t j = 0; j < grid.N; ++j) {
        write_row(out, {format(grid.q[j]), R ? format((*R)[j]) : "", S ? format((*S)[j]) : "",
                        format(psi[j].real()), format(psi[j].imag()), format(born[j])});
    }
}

void write_table(const std::filesystem::path& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out = open(path);
    write_row(out, header);
    for (const auto& r : rows) write_row(out, r);
}

}  // namespace hjs::csv
