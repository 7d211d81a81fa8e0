#include "alie/detrend.hpp"

#include <cmath>
#include <stdexcept>

namespace alie {

bool trend_adjusted(DetrendMode mode) {
    return mode == DetrendMode::ols_detrend || mode == DetrendMode::fd_detrend ||
           mode == DetrendMode::qd_detrend;
}

int schwert_pmax(int T) {
    if (T < 4) throw std::invalid_argument("schwert_pmax: T must be >= 4");
    const int p = static_cast<int>(std::floor(12.0 * std::pow(T / 100.0, 0.25)));
    if (p >= T - 2) throw std::invalid_argument("schwert_pmax: rule exceeds sample size");
    return p;
}

namespace {

TimeSeries qd_adjust(const TimeSeries& y, double cbar, bool with_trend) {
    const int T = y.size();
    const double abar = 1.0 + cbar / T;
    // quasi-differenced data and regressors, first observation kept in levels
    std::vector<double> ya(T), z1(T), z2(T);
    ya[0] = y.values[0];
    z1[0] = 1.0;
    z2[0] = 1.0;
    for (int t = 1; t < T; ++t) {
        ya[t] = y.values[t] - abar * y.values[t - 1];
        z1[t] = 1.0 - abar;
        z2[t] = (t + 1) - abar * t;
    }
    // GLS coefficients by 2x2 (or 1x1) normal equations on the quasi-differenced system
    double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
    for (int t = 0; t < T; ++t) {
        s11 += z1[t] * z1[t];
        s1y += z1[t] * ya[t];
        if (with_trend) {
            s12 += z1[t] * z2[t];
            s22 += z2[t] * z2[t];
            s2y += z2[t] * ya[t];
        }
    }
    double mu = 0, tau = 0;
    if (with_trend) {
        const double det = s11 * s22 - s12 * s12;
        if (std::abs(det) < 1e-12) throw std::runtime_error("detrend: singular QD system");
        mu = (s22 * s1y - s12 * s2y) / det;
        tau = (s11 * s2y - s12 * s1y) / det;
    } else {
        if (s11 < 1e-12) throw std::runtime_error("detrend: singular QD system");
        mu = s1y / s11;
    }
    TimeSeries out = y;
    for (int t = 0; t < T; ++t) out.values[t] = y.values[t] - mu - tau * (t + 1);
    return out;
}

}  // namespace

TimeSeries detrend(const TimeSeries& y, DetrendMode mode, std::optional<double> qd_cbar) {
    const int T = y.size();
    if (T < 1) throw std::invalid_argument("detrend: empty series");
    const bool needs_trend =
        mode == DetrendMode::ols_detrend || mode == DetrendMode::fd_detrend ||
        mode == DetrendMode::qd_detrend;
    if (needs_trend && T < 3) throw std::invalid_argument("detrend: T must be >= 3 for trend modes");

    switch (mode) {
        case DetrendMode::none:
            return y;
        case DetrendMode::ols_demean: {
            double mean = 0;
            for (double v : y.values) mean += v;
            mean /= T;
            TimeSeries out = y;
            for (double& v : out.values) v -= mean;
            return out;
        }
        case DetrendMode::ols_detrend: {
            // regression of y on (1, t) via centered normal equations
            const double tbar = (T + 1) / 2.0;
            double ybar = 0;
            for (double v : y.values) ybar += v;
            ybar /= T;
            double stt = 0, sty = 0;
            for (int t = 0; t < T; ++t) {
                const double tc = (t + 1) - tbar;
                stt += tc * tc;
                sty += tc * (y.values[t] - ybar);
            }
            const double slope = sty / stt;
            TimeSeries out = y;
            for (int t = 0; t < T; ++t)
                out.values[t] = y.values[t] - ybar - slope * ((t + 1) - tbar);
            return out;
        }
        case DetrendMode::fd_demean: {
            TimeSeries out = y;
            const double y1 = y.values[0];
            for (double& v : out.values) v -= y1;
            return out;
        }
        case DetrendMode::fd_detrend: {
            const double y1 = y.values[0];
            const double slope = (y.values[T - 1] - y1) / (T - 1);  // mean of Δy
            TimeSeries out = y;
            for (int t = 0; t < T; ++t) out.values[t] = y.values[t] - y1 - slope * t;
            return out;
        }
        case DetrendMode::qd_demean:
            if (!qd_cbar) throw std::invalid_argument("detrend: qd_demean requires qd_cbar");
            return qd_adjust(y, *qd_cbar, false);
        case DetrendMode::qd_detrend:
            if (!qd_cbar) throw std::invalid_argument("detrend: qd_detrend requires qd_cbar");
            return qd_adjust(y, *qd_cbar, true);
    }
    throw std::logic_error("detrend: unknown mode");
}

DetrendMode detrend_mode_from_string(const std::string& name) {
    if (name == "none") return DetrendMode::none;
    if (name == "const" || name == "ols-demean") return DetrendMode::ols_demean;
    if (name == "trend" || name == "ols-detrend") return DetrendMode::ols_detrend;
    if (name == "fd-demean") return DetrendMode::fd_demean;
    if (name == "fd-detrend") return DetrendMode::fd_detrend;
    if (name == "qd-demean") return DetrendMode::qd_demean;
    if (name == "qd-detrend") return DetrendMode::qd_detrend;
    throw std::invalid_argument("unknown detrend mode: " + name);
}

std::string to_string(DetrendMode mode) {
    switch (mode) {
        case DetrendMode::none: return "none";
        case DetrendMode::ols_demean: return "ols-demean";
        case DetrendMode::ols_detrend: return "ols-detrend";
        case DetrendMode::fd_demean: return "fd-demean";
        case DetrendMode::fd_detrend: return "fd-detrend";
        case DetrendMode::qd_demean: return "qd-demean";
        case DetrendMode::qd_detrend: return "qd-detrend";
    }
    return "?";
}

}  // namespace alie
