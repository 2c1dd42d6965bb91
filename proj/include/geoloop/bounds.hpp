#pragma once

// Ball-volume formulas, the pigeonhole lower bound on loop counts, and
// growth-rate (volume entropy) estimators.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace geoloop {

inline constexpr double kBoundTol = 1e-9;

// Volume of the Euclidean n-ball of radius r: pi^(n/2) r^n / Gamma(n/2 + 1).
inline double euclidean_ball_volume(int n, double r) {
    if (r < 0.0) return 0.0;
    const double half = 0.5 * static_cast<double>(n);
    return std::pow(std::numbers::pi, half) * std::pow(r, n) / std::tgamma(half + 1.0);
}

// Area of the hyperbolic disk of radius r (curvature -1): 2*pi*(cosh r - 1).
inline double hyperbolic_disk_area(double r) {
    if (r < 0.0) return 0.0;
    return 2.0 * std::numbers::pi * (std::cosh(r) - 1.0);
}

// Lower bound on the number of nontrivial loop classes at the best base
// point: vol(B_{t/2}) / vol(M) - 2. Negative values are vacuous but kept.
inline double blichfeldt_lower_bound(double vol_ball, double vol_m) {
    return vol_ball / vol_m - 2.0;
}

enum class Geometry { Euclidean, Hyperbolic };

enum class SeriesKind { Loops, PrimitiveGeodesics };

struct CountSample {
    double t = 0.0;
    std::size_t count = 0;
};

// Monotone (t, count) samples for P_q(t) or v(t).
struct CountSeries {
    SeriesKind kind = SeriesKind::Loops;
    Geometry geometry = Geometry::Euclidean;
    int dimension = 2;
    std::string model_name;
    std::vector<CountSample> samples;

    void append(double t, std::size_t count) {
        if (!samples.empty()) {
            if (!(t > samples.back().t))
                throw Error("CountSeries: t values must be strictly increasing");
            if (count < samples.back().count)
                throw Error("CountSeries: counts must be nondecreasing");
        }
        samples.push_back({t, count});
    }
};

struct BoundRow {
    double t = 0.0;
    std::size_t count = 0;
    double bound = 0.0;
    bool satisfied = false;
};

struct BoundReport {
    std::string bound_kind;
    std::vector<BoundRow> rows;
};

// Per-sample comparison of a loop-count series against the pigeonhole
// lower bound. For inhomogeneous models the caller must supply the
// max-over-sampled-base-points series; the bound is existential in q.
inline BoundReport check_blichfeldt(const CountSeries& series, double vol_m, Geometry geometry) {
    if (series.kind != SeriesKind::Loops)
        throw Error("check_blichfeldt: series must be a loop-count series");
    if (series.geometry != geometry)
        throw GeometryMismatch("check_blichfeldt: series geometry disagrees with requested geometry");
    if (!(vol_m > 0.0))
        throw Error("check_blichfeldt: vol(M) must be positive");

    BoundReport report;
    report.bound_kind = geometry == Geometry::Euclidean ? "pigeonhole-euclidean" : "pigeonhole-hyperbolic";
    report.rows.reserve(series.samples.size());
    for (const auto& s : series.samples) {
        const double vol_ball = geometry == Geometry::Euclidean
                                    ? euclidean_ball_volume(series.dimension, 0.5 * s.t)
                                    : hyperbolic_disk_area(0.5 * s.t);
        const double bound = blichfeldt_lower_bound(vol_ball, vol_m);
        const bool ok = static_cast<double>(s.count) >= bound - kBoundTol;
        report.rows.push_back({s.t, s.count, bound, ok});
    }
    return report;
}

struct EntropyRow {
    double t = 0.0;
    double estimate = 0.0;
};

// Rows of log(value)/t plus optional context about the model.
struct EntropyReport {
    std::vector<EntropyRow> rows;
    std::optional<double> limit_claim;
    double curvature_lower = 0.0; // K1
    double curvature_upper = 0.0; // K2
    int dimension = 2;
};

inline std::vector<EntropyRow> entropy_estimate(const std::vector<std::pair<double, double>>& values) {
    std::vector<EntropyRow> rows;
    rows.reserve(values.size());
    for (const auto& [t, value] : values) {
        if (!(t > 0.0))
            throw Error("entropy_estimate: t must be positive");
        if (!(value > 0.0))
            throw NonpositiveValue("entropy_estimate: values must be positive");
        rows.push_back({t, std::log(value) / t});
    }
    return rows;
}

// (n-1)*K1 <= h <= (n-1)*K2, with 1e-9 slack on both ends.
inline bool sandwich_check(int n, double k1, double k2, double h) {
    if (k1 > k2) throw BadCurvatureOrder("sandwich_check: K1 > K2");
    if (k1 < 0.0) throw Error("sandwich_check: curvature bounds must be nonnegative");
    const double lo = (n - 1) * k1;
    const double hi = (n - 1) * k2;
    return lo - kBoundTol <= h && h <= hi + kBoundTol;
}

struct KnieperReport {
    std::vector<EntropyRow> loop_rows;
    std::vector<EntropyRow> geodesic_rows;
    std::vector<std::string> notices; // zero-count samples skipped in log ratios
    double h_vol = 0.0;
    double half_h_vol = 0.0;
};

// log(count)/t trend rows against the h_vol and h_vol/2 reference lines.
// Report-only: the compared limits are asymptotic and desk-scale t is small.
inline KnieperReport knieper_report(const CountSeries& loops,
                                    const CountSeries* geodesics,
                                    double h_vol) {
    KnieperReport report;
    report.h_vol = h_vol;
    report.half_h_vol = 0.5 * h_vol;
    auto fill = [&report](const CountSeries& series, const char* label,
                          std::vector<EntropyRow>& out) {
        for (const auto& s : series.samples) {
            if (!(s.t > 0.0)) throw Error("knieper_report: t must be positive");
            if (s.count == 0) {
                report.notices.push_back(std::string("skipped log of zero ") + label +
                                         " count at t=" + std::to_string(s.t));
                continue;
            }
            out.push_back({s.t, std::log(static_cast<double>(s.count)) / s.t});
        }
    };
    fill(loops, "loop", report.loop_rows);
    if (geodesics != nullptr) fill(*geodesics, "geodesic", report.geodesic_rows);
    return report;
}

} // namespace geoloop
