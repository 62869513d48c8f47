#ifndef RDDISIM_RDDI_H
#define RDDISIM_RDDI_H

#include <Eigen/Core>

namespace rddisim {

// Units: hbar = 1, rates in units of gamma13, times in 1/gamma13.

struct GeometryConfig
{
    Eigen::Vector3d e1 = Eigen::Vector3d::UnitX(); // dipole of atom 1
    Eigen::Vector3d e2 = Eigen::Vector3d::UnitX(); // dipole of atom 2
    Eigen::Vector3d eR = Eigen::Vector3d::UnitZ(); // interatomic axis

    // Collinear dipoles perpendicular to the interatomic axis.
    static GeometryConfig perpendicular();

    // e1.e2 - (e1.eR)(e2.eR)
    double transverse_factor() const;
    // (e1.eR)(e2.eR)
    double longitudinal_factor() const;

    // Throws std::invalid_argument unless every vector has unit norm.
    void validate() const;
};

struct SystemConfig
{
    double gamma13 = 1.0;
    double gamma23 = 1.0;
    double phi13 = 1.0;      // k13 * R
    double freq_ratio = 1.0; // omega23 / omega13
    GeometryConfig geometry;

    double phi23() const { return phi13*freq_ratio; }

    void validate() const;
};

struct RDDICouplings
{
    double f13 = 0, f23 = 0;
    double g13 = 0, g23 = 0;
    double chi13 = 0, chi23 = 0;
    double gamma12_13 = 0, gamma12_23 = 0;
};

// Dimensionless coherent dipole-dipole coupling chi/gamma at distance phi.
double coupling_f(double phi, const GeometryConfig &geometry);
// Dimensionless collective decay rate gamma^(12)/gamma at distance phi.
double coupling_g(double phi, const GeometryConfig &geometry);

RDDICouplings couplings_for_pair(const SystemConfig &config);

// Smallest phi at which coupling_f(phi) equals f, searched on the
// near-field branch where F falls monotonically from +infinity.
// Requires f > 0 and a geometry with a positive near-field coefficient.
double phi_for_coupling_f(double f, const GeometryConfig &geometry);

} // namespace rddisim

#endif // RDDISIM_RDDI_H
