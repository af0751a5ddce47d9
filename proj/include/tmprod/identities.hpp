#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tmprod/product.hpp"

namespace tmprod {

// Closed-form identities for Thue-Morse weighted products.  Every known
// target is a rational multiple of a power of sqrt(2), so targets are kept
// in exact form and rendered to binary64 only at comparison time.

struct ClosedForm {
    double coeff = 1.0; // exact rational rendered to binary64
    int sqrt2_exp = 0;  // value = coeff * 2^(sqrt2_exp / 2)
};

inline double closed_form_value(const ClosedForm& cf) {
    // Split the exponent so at most one multiplication by sqrt(2) rounds.
    int q = cf.sqrt2_exp / 2;
    int r = cf.sqrt2_exp % 2;
    if (r < 0) { r += 2; q -= 1; }
    const double base = std::ldexp(cf.coeff, q);
    return r ? base * std::sqrt(2.0) : base;
}

struct Identity {
    std::string name;
    RationalProductSpec spec;
    ClosedForm target;
    std::string citation;
};

/// The known closed-form products.  The first three are the classical
/// Woods-Robbins value and its f-form restatements; the rest follow from the
/// functional equation of h at half-integer arguments.
inline std::vector<Identity> builtin_catalog() {
    std::vector<Identity> cat;
    cat.push_back({"woods-robbins",
                   {0, {0.5}, {1.0}},
                   {1.0, -1},
                   "Woods (1978), Robbins (1979): prod ((2n+1)/(2n+2))^u_n = 1/sqrt(2)"});
    cat.push_back({"f-half-one",
                   {1, {0.5}, {1.0}},
                   {1.0, 1},
                   "Woods-Robbins restated as f(1/2, 1) = sqrt(2)"});
    cat.push_back({"f-quarter-three-quarters",
                   {1, {0.25}, {0.75}},
                   {1.5, 0},
                   "f(1/4, 3/4) = 3/2, equivalent to h(1/2) = 3/2"});
    cat.push_back({"h-half",
                   {0, {0.75}, {0.25}},
                   {2.0, 0},
                   "h(1/2) = 3/2 in product form: prod ((4n+3)/(4n+1))^u_n = 2"});
    cat.push_back({"h-minus-half",
                   {1, {-0.25, 0.5}, {0.25, -0.5}},
                   {0.5, 0},
                   "functional equation of h at x = -1/2: h(-1/2) = f(-1/2, 1/2) / 2"});
    cat.push_back({"h-three-halves-two",
                   {0, {0.75, 1.0}, {1.25, 1.5}},
                   {1.0, -1},
                   "functional equation of h at x = 1: h(3/2) h(2) = 5 sqrt(2) / 4"});
    cat.push_back({"h-two-two-three",
                   {0, {1.0, 1.0}, {1.5, 2.0}},
                   {1.0, -1},
                   "functional equation of h at x = 3/2: h(2)^2 h(3) = 3 / sqrt(2)"});
    return cat;
}

namespace detail {

inline void require_no_pole(double x, const char* who) {
    if (!std::isfinite(x) || (is_integer(x) && x <= -1.0))
        throw std::domain_error(std::string(who) + ": argument hits a pole in {-1, -2, -3, ...}");
}

} // namespace detail

/// The six-factor splitting identity, from
/// f(b,c) f(c/2, b/2) f((b+1)/2, (c+1)/2) = (c+1)/(b+1):
///
///   prod_{n>=1} [ (n+b)(n+(b+1)/2)(n+c/2) / ((n+c)(n+(c+1)/2)(n+b/2)) ]^{u_n}
///     = (c+1)/(b+1).
inline Identity make_splitting_identity(double b, double c) {
    detail::require_no_pole(b, "make_splitting_identity");
    detail::require_no_pole(c, "make_splitting_identity");
    Identity id;
    id.name = "splitting(b=" + std::to_string(b) + ",c=" + std::to_string(c) + ")";
    id.spec = {1, {b, (b + 1.0) / 2.0, c / 2.0}, {c, (c + 1.0) / 2.0, b / 2.0}};
    id.target = {(c + 1.0) / (b + 1.0), 0};
    id.citation = "splitting identity for f, start n = 1";
    return id;
}

/// Same six factors started at n = 0; the n = 0 factor contributes exactly
/// (b+1)/(c+1), so the product collapses to 1.  Needs b, c outside
/// {0, -1, -2, ...} so the extra factor neither vanishes nor blows up.
inline Identity make_splitting_identity_from0(double b, double c) {
    const auto excluded = [](double x) {
        return !std::isfinite(x) || (detail::is_integer(x) && x <= 0.0);
    };
    if (excluded(b) || excluded(c))
        throw std::domain_error("make_splitting_identity_from0: arguments must avoid {0, -1, -2, ...}");
    Identity id;
    id.name = "splitting0(b=" + std::to_string(b) + ",c=" + std::to_string(c) + ")";
    id.spec = {0, {b, (b + 1.0) / 2.0, c / 2.0}, {c, (c + 1.0) / 2.0, b / 2.0}};
    id.target = {1.0, 0};
    id.citation = "splitting identity for f, start n = 0";
    return id;
}

struct VerifyReport {
    std::string name;
    ValueWithError computed;
    double target_value = 0.0;
    double deviation = 0.0;
    bool pass = false;
    std::string reason; // set when evaluation itself failed
};

/// Evaluate an identity and compare against its closed form.
/// pass requires deviation <= computed.abs_error + eps.
inline VerifyReport verify_identity(const Identity& id, double eps = 1e-8) {
    VerifyReport rep;
    rep.name = id.name;
    rep.target_value = closed_form_value(id.target);
    EvalConfig cfg;
    cfg.target_eps = std::min(1e-12, eps / 10.0);
    try {
        rep.computed = eval_product(id.spec, cfg);
    } catch (const std::exception& e) {
        rep.pass = false;
        rep.reason = e.what();
        return rep;
    }
    rep.deviation = std::abs(rep.computed.value - rep.target_value);
    rep.pass = rep.deviation <= rep.computed.abs_error + eps;
    return rep;
}

} // namespace tmprod
