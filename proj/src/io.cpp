#include "gmhd/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gmhd/errors.hpp"

namespace gmhd {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoFault("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoFault("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IoFault("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoFault("cannot rename onto " + path.string());
    }
}

std::string series_csv(const RunRecord& rec) {
    std::ostringstream os;
    os << "# t: time, energy: |u_x|^2+|b_x|^2, I: nonlocal term, omega_min/omega_max/omega_sup: extrema of u_x, "
          "bx_sup: max|b_x|, mean: integral of u_x, energy_drift: (E-E0)/E0, i_bound_excess: I(t) bound violation\n";
    os << "t,energy,I,omega_min,omega_max,omega_sup,bx_sup,mean,energy_drift,i_bound_excess\n";
    for (const Sample& s : rec.series) {
        const double cols[] = {s.t,         s.energy, s.I,    s.omega_min,    s.omega_max,
                               s.omega_sup, s.bx_sup, s.mean, s.energy_drift, s.i_bound_excess};
        bool first = true;
        for (double c : cols) {
            if (!first) os << ',';
            os << format_double(c);
            first = false;
        }
        os << '\n';
    }
    return os.str();
}

std::string trajectories_csv(const TrackedRun& run) {
    std::size_t orders = 0;
    for (const auto& snap : run.snapshots) {
        for (const auto& tr : snap.traces) orders = std::max(orders, tr.size());
    }
    std::ostringstream os;
    os << "# t: time, alpha: label, gamma: trajectory position (unwrapped), logjac: log of the Jacobian, "
          "omega: u_x at gamma, b_dk: k-th x-derivative of b at gamma\n";
    os << "t,alpha,gamma,logjac,omega";
    for (std::size_t k = 0; k < orders; ++k) os << ",b_d" << k;
    os << '\n';
    for (const auto& snap : run.snapshots) {
        for (std::size_t i = 0; i < snap.gamma.size(); ++i) {
            os << format_double(snap.t) << ',' << format_double(run.final.alphas[i]) << ','
               << format_double(snap.gamma[i]) << ',' << format_double(snap.logjac[i]) << ','
               << format_double(i < snap.omega.size() ? snap.omega[i] : std::nan(""));
            for (std::size_t k = 0; k < orders; ++k) {
                const bool have = i < snap.traces.size() && k < snap.traces[i].size();
                os << ',' << format_double(have ? snap.traces[i][k] : std::nan(""));
            }
            os << '\n';
        }
    }
    return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "# lambda, kappa, status: scenario status, run_verdict: solver verdict, t_blowup_estimate: "
          "extrapolated blowup time (nan if none), t_end: final time, detail: message\n";
    os << "lambda,kappa,status,run_verdict,t_blowup_estimate,t_end,detail\n";
    for (const SweepRow& r : rows) {
        std::string detail = r.detail;
        for (char& c : detail) {
            if (c == '"') c = '\'';
            if (c == '\n') c = ' ';
        }
        os << format_double(r.lambda) << ',' << format_double(r.kappa) << ',' << r.status << ','
           << r.run_verdict << ',' << format_double(r.t_blowup_estimate.value_or(std::nan(""))) << ','
           << format_double(r.t_end) << ",\"" << detail << "\"\n";
    }
    return os.str();
}

}  // namespace gmhd
