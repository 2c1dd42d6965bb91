#pragma once

// Upper-half-plane model of the hyperbolic plane and PSL(2,R) matrix
// machinery: distance, Mobius action, trace classification, translation
// lengths, and preset Fuchsian groups presenting finite-area surfaces.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace geoloop {

inline constexpr double kMatrixTol = 1e-9;
inline constexpr double kSignTol = 1e-12;

struct UhpPoint {
    double re = 0.0;
    double im = 1.0;

    UhpPoint() = default;
    UhpPoint(double re_, double im_) : re(re_), im(im_) {
        if (!(im > 0.0)) throw Error("UhpPoint: im must be positive");
    }
};

// d(z,w) = arccosh(1 + |z-w|^2 / (2 im(z) im(w))). Evaluated in extended
// precision: double intermediates lose ~1e-8 on images of long group
// words, which would swamp the 1e-9 isometry-invariance tolerance.
inline double hyp_distance(const UhpPoint& z, const UhpPoint& w) {
    const long double dr = static_cast<long double>(z.re) - w.re;
    const long double di = static_cast<long double>(z.im) - w.im;
    const long double arg = 1.0L + (dr * dr + di * di) / (2.0L * z.im * w.im);
    return static_cast<double>(std::acosh(std::max(arg, 1.0L)));
}

// Unit-determinant 2x2 matrix, sign-canonicalized as a PSL(2,R)
// representative: the first entry of (a,b,c,d) with magnitude above
// kSignTol is positive.
struct GroupMatrix {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    GroupMatrix() = default;
    GroupMatrix(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
        canonicalize();
    }

    static GroupMatrix identity() { return {}; }

    // Validating factory for externally supplied entries.
    static GroupMatrix checked(double a_, double b_, double c_, double d_) {
        const double det = a_ * d_ - b_ * c_;
        if (std::abs(det - 1.0) > kMatrixTol) {
            std::ostringstream msg;
            msg << "matrix determinant " << det << " is not 1 within " << kMatrixTol;
            throw ParseError(msg.str());
        }
        return {a_, b_, c_, d_};
    }

    void canonicalize() {
        for (double v : {a, b, c, d}) {
            if (std::abs(v) > kSignTol) {
                if (v < 0.0) {
                    a = -a;
                    b = -b;
                    c = -c;
                    d = -d;
                }
                return;
            }
        }
    }

    double trace() const { return a + d; }

    GroupMatrix inverse() const { return {d, -b, -c, a}; }

    friend GroupMatrix operator*(const GroupMatrix& x, const GroupMatrix& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
};

inline UhpPoint mobius_apply(const GroupMatrix& g, const UhpPoint& z) {
    const std::complex<long double> zc(z.re, z.im);
    const std::complex<long double> num =
        static_cast<long double>(g.a) * zc + static_cast<long double>(g.b);
    const std::complex<long double> den =
        static_cast<long double>(g.c) * zc + static_cast<long double>(g.d);
    const std::complex<long double> w = num / den;
    return {static_cast<double>(w.real()), static_cast<double>(w.imag())};
}

inline double displacement(const GroupMatrix& g, const UhpPoint& z) {
    return hyp_distance(z, mobius_apply(g, z));
}

enum class ElementClass { Identity, Elliptic, Parabolic, Hyperbolic };

inline const char* element_class_name(ElementClass cls) {
    switch (cls) {
        case ElementClass::Identity: return "identity";
        case ElementClass::Elliptic: return "elliptic";
        case ElementClass::Parabolic: return "parabolic";
        case ElementClass::Hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

inline ElementClass classify_element(const GroupMatrix& g) {
    const double tr = std::abs(g.trace());
    if (tr > 2.0 + kMatrixTol) return ElementClass::Hyperbolic;
    if (tr < 2.0 - kMatrixTol) return ElementClass::Elliptic;
    // |tr| = 2: identity iff off-diagonals vanish (sign already canonical)
    if (std::abs(g.b) <= kMatrixTol && std::abs(g.c) <= kMatrixTol &&
        std::abs(g.a - 1.0) <= kMatrixTol && std::abs(g.d - 1.0) <= kMatrixTol)
        return ElementClass::Identity;
    return ElementClass::Parabolic;
}

// Length of the closed geodesic in g's free homotopy class, or 0 with the
// classification attached when g is not hyperbolic.
struct TranslationLength {
    ElementClass cls = ElementClass::Identity;
    double value = 0.0;

    bool is_hyperbolic() const { return cls == ElementClass::Hyperbolic; }
};

inline TranslationLength translation_length(const GroupMatrix& g) {
    const ElementClass cls = classify_element(g);
    if (cls != ElementClass::Hyperbolic) return {cls, 0.0};
    return {cls, 2.0 * std::acosh(0.5 * std::abs(g.trace()))};
}

struct LabeledGenerator {
    std::string label;
    GroupMatrix matrix;
};

// Rectangle of base points used when sampling the existential base point
// of the counting bound.
struct SampleBox {
    double re_min = -1.0, re_max = 1.0;
    double im_min = 0.5, im_max = 2.0;
};

struct FuchsianModel {
    std::string name;
    std::vector<LabeledGenerator> generators;
    double area = 0.0;        // vol(M), supplied analytically (Gauss-Bonnet)
    UhpPoint base_point;
    double slack = 6.0;       // BFS pruning margin
    bool is_free = false;     // word problem trivially solvable
    SampleBox sample_box;
};

// Once-punctured torus of curvature -1 and area 2*pi (Gauss-Bonnet,
// chi = -1). The commutator of the generators is parabolic (the cusp).
inline FuchsianModel preset_punctured_torus() {
    FuchsianModel model;
    model.name = "punctured-torus";
    model.generators = {{"a", GroupMatrix(1.0, 1.0, 1.0, 2.0)},
                        {"b", GroupMatrix(1.0, -1.0, -1.0, 2.0)}};
    model.area = 2.0 * std::numbers::pi;
    model.base_point = UhpPoint(0.0, 1.0);
    model.slack = 6.0;
    model.is_free = true;
    model.sample_box = {-0.5, 0.5, 0.6, 1.7};
    return model;
}

// Genus-2 surface from the regular hyperbolic octagon: four generators
// conjugate to g0 = [[1+sqrt2, s],[s, 1+sqrt2]], s = sqrt(2+2*sqrt2), by
// rotations about i through k*pi/4. Area 4*pi (Gauss-Bonnet, genus 2).
inline FuchsianModel preset_genus2_octagon() {
    const double sqrt2 = std::sqrt(2.0);
    const double s = std::sqrt(2.0 + 2.0 * sqrt2);
    const GroupMatrix g0(1.0 + sqrt2, s, s, 1.0 + sqrt2);

    FuchsianModel model;
    model.name = "genus2-octagon";
    for (int k = 0; k < 4; ++k) {
        const double half = 0.5 * (k * std::numbers::pi / 4.0);
        const GroupMatrix rot(std::cos(half), std::sin(half), -std::sin(half), std::cos(half));
        model.generators.push_back({"g" + std::to_string(k), rot * g0 * rot.inverse()});
    }
    model.area = 4.0 * std::numbers::pi;
    model.base_point = UhpPoint(0.0, 1.0);
    model.slack = 6.0; // ~ 2x the fundamental-octagon diameter
    model.is_free = false;
    model.sample_box = {-0.6, 0.6, 0.5, 1.8};
    return model;
}

inline std::vector<std::string> preset_names() {
    return {"punctured-torus", "genus2-octagon"};
}

inline FuchsianModel preset_by_name(const std::string& name) {
    if (name == "punctured-torus") return preset_punctured_torus();
    if (name == "genus2-octagon") return preset_genus2_octagon();
    std::ostringstream msg;
    msg << "unknown preset '" << name << "'; available:";
    for (const auto& p : preset_names()) msg << " " << p;
    throw ParseError(msg.str());
}

} // namespace geoloop
