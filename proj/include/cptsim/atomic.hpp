#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cptsim/constants.hpp"

namespace cpt {

enum class Manifold { ground, excited };

/// Spherical polarization index q of a dipole transition (m_e = m_g + q).
enum class Polarization : int { sigma_minus = -1, pi = 0, sigma_plus = 1 };

struct Sublevel {
    Manifold manifold = Manifold::ground;
    int F = 0;
    int mF = 0;
    /// rad/s, relative to the (2F+1)-weighted centroid of the manifold.
    double energy_offset = 0.0;
};

/// Overridable atom constants. Defaults describe the 87Rb D1 line.
struct AtomConstants {
    double gamma_sp = mhz(5.6);                ///< excited-state decay rate, rad/s
    double ground_hfs = ghz(6.834682);         ///< F=1 <-> F=2 ground splitting, rad/s
    double excited_hfs = mhz(817.0);           ///< F'=1 <-> F'=2 splitting, rad/s
    double nuclear_splitting_hz_per_ut = 28.0; ///< Lambda_a / Lambda_b two-photon offset, Hz/uT
    double electron_g = 2.00233113;            ///< g_J of 5S_1/2
    double mass = 86.909180527 * phys::amu;    ///< kg
    double wavelength = 794.978851e-9;         ///< m

    double optical_frequency() const { return two_pi * phys::c / wavelength; }
    double wavevector() const { return two_pi / wavelength; }
};

/// Dimensionless dipole coefficients c_ge (multiples of the reduced element),
/// indexed by ground and excited sublevel position in the owning AtomicSystem.
/// The polarization of a nonzero entry is fixed by q = m_e - m_g.
class DipoleTable {
public:
    DipoleTable() = default;
    DipoleTable(std::size_t n_ground, std::size_t n_excited);

    /// Coefficient for polarization q; zero unless q == m_e - m_g.
    double operator()(std::size_t g, std::size_t e, Polarization q) const;
    /// Coefficient ignoring q (the only allowed q for this pair).
    double coefficient(std::size_t g, std::size_t e) const { return c_[g * n_excited_ + e]; }
    int polarization(std::size_t g, std::size_t e) const { return q_[g * n_excited_ + e]; }

    void set(std::size_t g, std::size_t e, int q, double value);

    std::size_t ground_count() const { return n_ground_; }
    std::size_t excited_count() const { return n_excited_; }

private:
    std::size_t n_ground_ = 0;
    std::size_t n_excited_ = 0;
    std::vector<double> c_;
    std::vector<int> q_;
};

class AtomicSystem {
public:
    AtomicSystem(std::string name, std::vector<Sublevel> ground, std::vector<Sublevel> excited,
                 DipoleTable dipoles, AtomConstants constants);

    const std::string& name() const { return name_; }
    const std::vector<Sublevel>& ground() const { return ground_; }
    const std::vector<Sublevel>& excited() const { return excited_; }
    const DipoleTable& dipoles() const { return dipoles_; }
    const AtomConstants& constants() const { return constants_; }
    double gamma_sp() const { return constants_.gamma_sp; }
    double nuclear_splitting_coeff() const { return constants_.nuclear_splitting_hz_per_ut; }

    std::optional<std::size_t> find_ground(int F, int mF) const;
    std::optional<std::size_t> find_excited(int F, int mF) const;

    /// Optical frequency offset of the F_g -> F_e transition group relative to
    /// the F_g=1 -> F_e=1 reference (rad/s). Excited Zeeman shifts are ignored.
    double transition_offset(int Fg, int Fe) const;

private:
    std::string name_;
    std::vector<Sublevel> ground_;
    std::vector<Sublevel> excited_;
    DipoleTable dipoles_;
    AtomConstants constants_;
};

/// Full 87Rb D1 system: 8 ground + 8 excited sublevels.
AtomicSystem build_rb87_d1(const AtomConstants& constants = {});

/// Isolated 6-level subsystem: ground |1>=|1,+1>, |2>=|2,-1>;
/// excited |B>=|1',0>, |L>=|2',-2>, |T>=|2',0>, |R>=|2',+2>.
AtomicSystem reduced_six_level(const AtomConstants& constants = {});

/// Linear ground-state Zeeman shift in rad/s (zero for excited sublevels).
double zeeman_offset(const Sublevel& s, double field_ut, const AtomConstants& constants = {});

/// Two-photon resonance offsets (rad/s) of the Lambda_a (|1,+1>,|2,-1>) and
/// Lambda_b (|1,-1>,|2,+1>) dark states at the given field.
std::pair<double, double> lambda_resonance_offsets(double field_ut, const AtomConstants& constants = {});

}  // namespace cpt
