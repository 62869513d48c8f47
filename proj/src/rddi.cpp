#include "rddisim/rddi.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rddisim {

namespace {

// Below this distance the G brackets are summed from their Taylor series;
// the closed forms lose ~2*log10(1/phi) digits to cancellation there.
constexpr double series_threshold = 1.0;

void require_positive_distance(double phi)
{
    if (!(phi > 0) || !std::isfinite(phi)) {
        throw std::invalid_argument("interatomic distance phi must be positive and finite, got "
                                    + std::to_string(phi));
    }
}

// sin/phi + cos/phi^2 - sin/phi^3
//   = sum_n (-1)^n [1/(2n+1)! - 1/(2n+2)! + 1/(2n+3)!] phi^(2n)
double g_transverse_bracket(double phi)
{
    if (phi >= series_threshold) {
        const double s = std::sin(phi);
        const double c = std::cos(phi);
        return s/phi + c/(phi*phi) - s/(phi*phi*phi);
    }
    const double x = phi*phi;
    double sum = 0;
    double power = 1;    // x^n
    double inv_fact = 1; // 1/(2n+1)!
    for (int n = 0; n < 30; ++n) {
        const double f1 = inv_fact;
        const double f2 = f1/(2*n + 2);
        const double f3 = f2/(2*n + 3);
        const double term = power*(f1 - f2 + f3);
        sum += (n % 2 == 0) ? term : -term;
        if (std::abs(term) < 1e-20*std::abs(sum)) {
            break;
        }
        power *= x;
        inv_fact = f3;
    }
    return sum;
}

// sin/phi^3 - cos/phi^2 = sum_n (-1)^n [1/(2n+2)! - 1/(2n+3)!] phi^(2n)
double g_longitudinal_bracket(double phi)
{
    if (phi >= series_threshold) {
        const double s = std::sin(phi);
        const double c = std::cos(phi);
        return s/(phi*phi*phi) - c/(phi*phi);
    }
    const double x = phi*phi;
    double sum = 0;
    double power = 1;
    double inv_fact = 0.5; // 1/(2n+2)!
    for (int n = 0; n < 30; ++n) {
        const double f2 = inv_fact;
        const double f3 = f2/(2*n + 3);
        const double term = power*(f2 - f3);
        sum += (n % 2 == 0) ? term : -term;
        if (std::abs(term) < 1e-20*std::abs(sum)) {
            break;
        }
        power *= x;
        inv_fact = f3/(2*n + 4);
    }
    return sum;
}

} // unnamed namespace

GeometryConfig GeometryConfig::perpendicular()
{
    return GeometryConfig{};
}

double GeometryConfig::transverse_factor() const
{
    return e1.dot(e2) - e1.dot(eR)*e2.dot(eR);
}

double GeometryConfig::longitudinal_factor() const
{
    return e1.dot(eR)*e2.dot(eR);
}

void GeometryConfig::validate() const
{
    const auto check = [](const Eigen::Vector3d &v, const char *name) {
        if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-12) {
            throw std::invalid_argument(std::string("geometry vector ") + name
                                        + " must have unit norm");
        }
    };
    check(e1, "e1");
    check(e2, "e2");
    check(eR, "eR");
}

void SystemConfig::validate() const
{
    if (!(gamma13 > 0) || !std::isfinite(gamma13)) {
        throw std::invalid_argument("gamma13 must be positive");
    }
    if (!(gamma23 >= 0) || !std::isfinite(gamma23)) {
        throw std::invalid_argument("gamma23 must be non-negative");
    }
    if (!(phi13 > 0) || !std::isfinite(phi13)) {
        throw std::invalid_argument("phi13 must be positive");
    }
    if (!(freq_ratio > 0) || !std::isfinite(freq_ratio)) {
        throw std::invalid_argument("freq_ratio must be positive");
    }
    geometry.validate();
}

double coupling_f(double phi, const GeometryConfig &geometry)
{
    require_positive_distance(phi);
    const double s = std::sin(phi);
    const double c = std::cos(phi);
    const double p2 = phi*phi;
    const double p3 = p2*phi;
    const double transverse = c/p3 + s/p2 - c/phi;
    const double longitudinal = c/p3 + s/p2;
    return 1.5*transverse*geometry.transverse_factor()
        - 3.0*longitudinal*geometry.longitudinal_factor();
}

double coupling_g(double phi, const GeometryConfig &geometry)
{
    require_positive_distance(phi);
    return 1.5*g_transverse_bracket(phi)*geometry.transverse_factor()
        + 3.0*g_longitudinal_bracket(phi)*geometry.longitudinal_factor();
}

RDDICouplings couplings_for_pair(const SystemConfig &config)
{
    config.validate();
    RDDICouplings c;
    c.f13 = coupling_f(config.phi13, config.geometry);
    c.g13 = coupling_g(config.phi13, config.geometry);
    c.f23 = coupling_f(config.phi23(), config.geometry);
    c.g23 = coupling_g(config.phi23(), config.geometry);
    c.chi13 = c.f13*config.gamma13;
    c.chi23 = c.f23*config.gamma23;
    c.gamma12_13 = c.g13*config.gamma13;
    c.gamma12_23 = c.g23*config.gamma23;
    return c;
}

double phi_for_coupling_f(double f, const GeometryConfig &geometry)
{
    if (!(f > 0) || !std::isfinite(f)) {
        throw std::invalid_argument("target coupling f must be positive");
    }
    geometry.validate();
    const double near_field = 1.5*geometry.transverse_factor() - 3.0*geometry.longitudinal_factor();
    if (!(near_field > 0)) {
        throw std::invalid_argument("geometry has no attractive near-field branch for F");
    }
    // F ~ near_field/phi^3 as phi -> 0; start well inside the branch.
    double lo = 0.25*std::cbrt(near_field/f);
    while (coupling_f(lo, geometry) <= f) {
        lo *= 0.5;
    }
    double hi = lo;
    while (coupling_f(hi, geometry) > f) {
        lo = hi;
        hi *= 1.01;
        if (hi > 1e3) {
            throw std::invalid_argument("coupling f not reachable on the near-field branch");
        }
    }
    for (int i = 0; i < 200 && hi - lo > 1e-15*hi; ++i) {
        const double mid = 0.5*(lo + hi);
        if (coupling_f(mid, geometry) > f) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5*(lo + hi);
}

} // namespace rddisim
