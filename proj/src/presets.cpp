#include "gmhd/presets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "gmhd/errors.hpp"

namespace gmhd {

namespace {

using Poly = std::vector<double>;

Poly multiply(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

Poly power(const Poly& p, int m) {
    Poly out{1.0};
    for (int i = 0; i < m; ++i) out = multiply(out, p);
    return out;
}

double parse_number(const std::string& text, const std::string& spec) {
    std::string t = text;
    t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
            t.end());
    if (!t.empty() && t.front() == '+') t.erase(t.begin());
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ConfigFault("malformed number '" + text + "' in preset '" + spec + "'");
    }
    return v;
}

std::vector<double> parse_list(const std::string& body, const std::string& spec) {
    std::vector<double> out;
    if (body.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = body.find(',', start);
        out.push_back(parse_number(body.substr(start, comma - start), spec));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// Bump factor q(x) of the bump presets.
Poly bump_partner(double x0, int m) {
    if (x0 == 0.0) return power({1.0, -1.0}, m);
    if (x0 == 1.0) return power({0.0, 1.0}, m);
    return {0.0, 1.0, -1.0};
}

}  // namespace

Preset Preset::zero() {
    Preset p;
    p.spec_ = "zero";
    return p;
}

Preset Preset::polynomial(std::vector<double> coeffs, std::string spec) {
    Preset p;
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    p.poly_ = std::move(coeffs);
    if (spec.empty()) {
        spec = "poly:[";
        for (std::size_t i = 0; i < p.poly_.size(); ++i) {
            if (i) spec += ",";
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, p.poly_[i]);
            spec.append(buf, res.ptr);
        }
        spec += "]";
    }
    p.spec_ = std::move(spec);
    return p;
}

Preset Preset::parse(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);

    if (head == "zero" && body.empty()) return zero();
    if (head == "quadratic" && body.empty()) return polynomial({0.0, 1.0, -1.0}, spec);

    if (head == "poly") {
        if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
            throw ConfigFault("poly preset needs a bracketed coefficient list: '" + spec + "'");
        }
        auto coeffs = parse_list(body.substr(1, body.size() - 2), spec);
        if (coeffs.empty()) throw ConfigFault("poly preset with no coefficients: '" + spec + "'");
        return polynomial(std::move(coeffs), spec);
    }

    const auto args = parse_list(body, spec);
    auto integer_arg = [&](double v, const char* what) {
        if (v != std::floor(v) || v < 0.0 || v > 64.0) {
            throw ConfigFault(std::string(what) + " must be a small nonnegative integer in '" +
                              spec + "'");
        }
        return static_cast<int>(v);
    };

    if (head == "sine" || head == "cos") {
        const std::size_t max_args = head == "sine" ? 2 : 3;
        if (args.empty() || args.size() > max_args) {
            throw ConfigFault("wrong argument count in preset '" + spec + "'");
        }
        const int k = integer_arg(args[0], "wavenumber");
        Preset p;
        p.spec_ = spec;
        const double amp = args.size() > 1 ? args[1] : 1.0;
        if (amp != 0.0 && k != 0) p.trig_.push_back({amp, k * std::numbers::pi, head == "cos"});
        if (head == "cos" && k == 0) p.poly_.push_back(amp);
        if (args.size() > 2) {
            if (p.poly_.empty()) p.poly_.push_back(0.0);
            p.poly_[0] += args[2];
        }
        while (!p.poly_.empty() && p.poly_.back() == 0.0) p.poly_.pop_back();
        return p;
    }

    if (head == "bump2" || head == "bump_m") {
        const bool general = head == "bump_m";
        const std::size_t min_args = general ? 2 : 1;
        if (args.size() < min_args || args.size() > min_args + 1) {
            throw ConfigFault("wrong argument count in preset '" + spec + "'");
        }
        const double x0 = args[0];
        if (x0 < 0.0 || x0 > 1.0) throw ConfigFault("bump center outside [0,1] in '" + spec + "'");
        const int m = general ? integer_arg(args[1], "order") : 2;
        if (m < 1 || m > kMaxOrder - 1) throw ConfigFault("bump order out of range in '" + spec + "'");
        const double amp = args.size() > min_args ? args[min_args] : 1.0;
        Poly p = multiply(power({-x0, 1.0}, m), bump_partner(x0, m));
        for (double& c : p) c *= amp;
        return polynomial(std::move(p), spec);
    }

    throw ConfigFault("unknown preset '" + spec + "'");
}

double Preset::derivative(double x, int k) const {
    if (k < 0 || k > kMaxOrder) throw DomainFault("preset derivative order out of range");
    double acc = 0.0;
    // Horner on the k-th derivative coefficients.
    for (std::size_t i = poly_.size(); i-- > static_cast<std::size_t>(k);) {
        double falling = 1.0;
        for (int j = 0; j < k; ++j) falling *= static_cast<double>(i - j);
        acc = acc * x + poly_[i] * falling;
    }
    for (const Trig& t : trig_) {
        // d^k/dx^k of sin(wx) is w^k sin(wx + k pi/2); cos is sin shifted by pi/2
        const int q = (k + (t.cosine ? 1 : 0)) % 4;
        double s;
        const double wx = t.freq * x;
        switch (q) {
            case 0: s = std::sin(wx); break;
            case 1: s = std::cos(wx); break;
            case 2: s = -std::sin(wx); break;
            default: s = -std::cos(wx); break;
        }
        acc += t.amp * std::pow(t.freq, k) * s;
    }
    return acc;
}

bool Preset::is_zero() const noexcept { return poly_.empty() && trig_.empty(); }

Extremum Preset::slope_max() const { return slope_extremum(true); }
Extremum Preset::slope_min() const { return slope_extremum(false); }

Extremum Preset::slope_extremum(bool maximize) const {
    std::vector<double> candidates{0.0, 1.0};
    auto better = [&](double a, double b) { return maximize ? a > b : a < b; };

    const bool simple_poly = trig_.empty() && poly_.size() <= 3;
    const bool single_trig = trig_.size() == 1 && poly_.size() <= 1;
    if (single_trig) {
        // critical points of the slope: w x = j pi (sine) or pi/2 + j pi (cos)
        const Trig& t = trig_[0];
        const double offset = t.cosine ? 0.5 : 0.0;
        for (int j = 0; (j + offset) * std::numbers::pi <= t.freq * (1.0 + 1e-15); ++j) {
            candidates.push_back(std::min(1.0, (j + offset) * std::numbers::pi / t.freq));
        }
    } else if (!simple_poly) {
        constexpr int kSamples = 4096;
        int best = 0;
        double best_val = derivative(0.0, 1);
        for (int i = 1; i <= kSamples; ++i) {
            const double v = derivative(static_cast<double>(i) / kSamples, 1);
            if (better(v, best_val)) {
                best_val = v;
                best = i;
            }
        }
        if (best > 0 && best < kSamples) {
            double lo = static_cast<double>(best - 1) / kSamples;
            double hi = static_cast<double>(best + 1) / kSamples;
            double x = static_cast<double>(best) / kSamples;
            for (int it = 0; it < 60; ++it) {
                const double f2 = derivative(x, 2);
                const double f3 = derivative(x, 3);
                double next = f3 != 0.0 ? x - f2 / f3 : 0.5 * (lo + hi);
                if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
                // keep a bracket on the sign change of f''
                if ((derivative(lo, 2) > 0.0) == (derivative(next, 2) > 0.0)) lo = next;
                else hi = next;
                if (std::abs(next - x) <= 1e-15) {
                    x = next;
                    break;
                }
                x = next;
                if (hi - lo <= 1e-13) break;
            }
            candidates.push_back(x);
        }
    }

    Extremum best{candidates[0], derivative(candidates[0], 1)};
    for (double c : candidates) {
        const double v = derivative(c, 1);
        if (better(v, best.value) || (v == best.value && c < best.alpha)) best = {c, v};
    }
    return best;
}

double Preset::max_abs() const {
    constexpr int kSamples = 8192;
    double m = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
        m = std::max(m, std::abs((*this)(static_cast<double>(i) / kSamples)));
    }
    return m;
}

void Preset::validate(BoundaryCondition bc, const std::string& name) const {
    const double tol = 1e-12 * std::max(1.0, max_abs());
    if (bc == BoundaryCondition::Dirichlet) {
        if (std::abs((*this)(0.0)) > tol || std::abs((*this)(1.0)) > tol) {
            throw ConfigFault(name + " preset '" + spec_ +
                              "' does not vanish at x=0 and x=1 (Dirichlet)");
        }
        return;
    }
    const double slope_tol = 1e-12 * std::max(1.0, std::abs(derivative(0.0, 1)));
    if (std::abs((*this)(0.0) - (*this)(1.0)) > tol ||
        std::abs(derivative(0.0, 1) - derivative(1.0, 1)) > slope_tol) {
        throw ConfigFault(name + " preset '" + spec_ + "' is not periodic on [0,1]");
    }
}

int Preset::zero_order(double x0) const {
    for (int k = 0; k <= kMaxOrder; ++k) {
        const double v = std::abs(derivative(x0, k));
        if (v >= 1e-6) return k;
        if (v > 1e-10) return -1;
    }
    return -1;
}

Field Preset::on(const GridSpec& grid) const {
    return Field::from_function(grid, [this](double x) { return (*this)(x); });
}

}  // namespace gmhd
