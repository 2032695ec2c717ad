#include "cptsim/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cptsim/errors.hpp"

namespace cpt {

std::complex<double> CoefficientSet::rabi(std::size_t g, std::size_t e, std::size_t component) const {
    for (const auto& d : drives)
        if (d.component == component && d.ground_F == ground_F[g]) return d.rabi(e, g);
    return 0.0;
}

void CoefficientSet::set_raman_detuning(double omega) {
    raman_detuning = omega;
    for (std::size_t g = 0; g < n_ground; ++g)
        theta(g) = zeeman[g] + (ground_F[g] == 1 ? raman_detuning + component_mismatch : 0.0);
}

void CoefficientSet::scale_components(const std::vector<std::complex<double>>& factors) {
    for (auto& d : drives) d.rabi *= factors.at(d.component);
    if (intra_K.size() != drives.size()) {
        assemble();
        return;
    }
    // K is bilinear in the Rabi frequencies.
    K.setZero();
    for (std::size_t d = 0; d < drives.size(); ++d) {
        const auto f = factors[drives[d].component];
        intra_K[d] *= std::norm(f);
        drive_K[d] = intra_K[d];
        if (cross_partner[d]) {
            cross_K[d] *= std::conj(f) * factors[drives[*cross_partner[d]].component];
            drive_K[d] += cross_K[d];
        }
        K += drive_K[d];
    }
}

void CoefficientSet::assemble() {
    theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_ground));
    set_raman_detuning(raman_detuning);

    auto weighted = [&](const Drive& row, const Drive& col) {
        Eigen::VectorXcd p(static_cast<Eigen::Index>(n_excited));
        for (std::size_t e = 0; e < n_excited; ++e) p(e) = col.profile[e];
        return Eigen::MatrixXcd(row.rabi.adjoint() * p.asDiagonal() * col.rabi / gprime);
    };

    const auto n = static_cast<Eigen::Index>(n_ground);
    K = Eigen::MatrixXcd::Zero(n, n);
    drive_K.assign(drives.size(), Eigen::MatrixXcd::Zero(n, n));
    intra_K.assign(drives.size(), Eigen::MatrixXcd::Zero(n, n));
    cross_K.assign(drives.size(), Eigen::MatrixXcd::Zero(n, n));
    cross_partner.assign(drives.size(), std::nullopt);
    const bool cross = assigned_f1 && assigned_f2 &&
                       drives[*assigned_f1].component != drives[*assigned_f2].component;
    for (std::size_t d = 0; d < drives.size(); ++d) {
        intra_K[d] = weighted(drives[d], drives[d]);
        drive_K[d] = intra_K[d];
        if (cross && (d == *assigned_f1 || d == *assigned_f2)) {
            const std::size_t other = d == *assigned_f1 ? *assigned_f2 : *assigned_f1;
            cross_partner[d] = other;
            cross_K[d] = weighted(drives[d], drives[other]);
            drive_K[d] += cross_K[d];
        }
        K += drive_K[d];
    }
}

double reduced_dipole(const AtomConstants& constants) {
    const double w = constants.optical_frequency();
    return std::sqrt(3.0 * pi * phys::epsilon0 * phys::hbar * std::pow(phys::c, 3) * constants.gamma_sp /
                     std::pow(w, 3));
}

CoefficientSet build_coefficients(const AtomicSystem& system, const LaserSpectrum& spectrum,
                                  const BroadeningConfig& broadening, double field_ut, double raman_detuning,
                                  const CoefficientOptions& options) {
    const auto& ground = system.ground();
    const auto& excited = system.excited();
    const auto& constants = system.constants();
    CoefficientSet cs;
    cs.n_ground = ground.size();
    cs.n_excited = excited.size();
    cs.gprime = gamma_prime(broadening);
    cs.gamma = constants.gamma_sp;
    cs.ground_relaxation = options.ground_relaxation;
    cs.raman_detuning = raman_detuning;
    cs.component_count = spectrum.components.size();
    for (const auto& s : ground) {
        cs.ground_F.push_back(s.F);
        cs.zeeman.push_back(zeeman_offset(s, field_ut, constants));
    }

    const auto dist = VelocityDistribution::from_doppler_fwhm(broadening.doppler_fwhm, constants.wavevector());
    const double d0 = reduced_dipole(constants) * options.dipole_scale;

    auto one_photon = [&](const LaserComponent& c, int Fg, int Fe) {
        return c.detuning - (system.transition_offset(Fg, Fe) + broadening.pressure_shift);
    };

    // Nearest-resonance assignment per ground manifold.
    std::optional<std::size_t> best[2];
    double best_det[2] = {0.0, 0.0};
    for (std::size_t j = 0; j < spectrum.components.size(); ++j) {
        for (int Fg = 1; Fg <= 2; ++Fg) {
            const double r = std::min(std::abs(one_photon(spectrum.components[j], Fg, 1)),
                                      std::abs(one_photon(spectrum.components[j], Fg, 2)));
            if (r <= options.assignment_cutoff && (!best[Fg - 1] || r < best_det[Fg - 1])) {
                best[Fg - 1] = j;
                best_det[Fg - 1] = r;
            }
        }
    }

    for (std::size_t j = 0; j < spectrum.components.size(); ++j) {
        const auto& comp = spectrum.components[j];
        const double s = d0 * comp.amplitude / (2.0 * phys::hbar);
        const std::complex<double> phase = std::polar(1.0, comp.phase);
        for (int Fg = 1; Fg <= 2; ++Fg) {
            const bool coherent = best[Fg - 1] && *best[Fg - 1] == j;
            if (!coherent && !options.off_resonant_pumping) continue;
            Drive d;
            d.component = j;
            d.ground_F = Fg;
            d.coherent = coherent;
            d.rabi = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(cs.n_excited),
                                            static_cast<Eigen::Index>(cs.n_ground));
            bool any = false;
            for (std::size_t g = 0; g < cs.n_ground; ++g) {
                if (ground[g].F != Fg) continue;
                for (std::size_t e = 0; e < cs.n_excited; ++e) {
                    const double c = system.dipoles().coefficient(g, e);
                    if (c == 0.0) continue;
                    const auto eps = comp.polarization[system.dipoles().polarization(g, e)];
                    if (eps == 0.0) continue;
                    d.rabi(e, g) = s * c * eps * phase;
                    any = true;
                }
            }
            if (!any) continue;
            std::map<int, std::complex<double>> by_fe;
            d.profile.resize(cs.n_excited);
            for (std::size_t e = 0; e < cs.n_excited; ++e) {
                if (options.profile_override) {
                    d.profile[e] = options.profile_override(j, excited[e]);
                    continue;
                }
                const int Fe = excited[e].F;
                auto it = by_fe.find(Fe);
                if (it == by_fe.end())
                    it = by_fe.emplace(Fe, gf_coefficients(one_photon(comp, Fg, Fe), cs.gprime, dist,
                                                           options.quadrature)).first;
                d.profile[e] = it->second;
            }
            if (coherent) (Fg == 1 ? cs.assigned_f1 : cs.assigned_f2) = cs.drives.size();
            cs.drives.push_back(std::move(d));
        }
    }
    if (cs.assigned_f1 && cs.assigned_f2) {
        const double nu1 = spectrum.components[cs.drives[*cs.assigned_f1].component].detuning;
        const double nu2 = spectrum.components[cs.drives[*cs.assigned_f2].component].detuning;
        cs.component_mismatch = (nu1 - nu2) - constants.ground_hfs;
    }
    cs.assemble();
    return cs;
}

Eigen::MatrixXcd ground_rhs(const Eigen::MatrixXcd& rho, const CoefficientSet& coeffs) {
    const auto n = static_cast<Eigen::Index>(coeffs.n_ground);
    const std::complex<double> I(0.0, 1.0);
    const Eigen::MatrixXcd theta = coeffs.theta.cast<std::complex<double>>().asDiagonal();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd krho = coeffs.K * rho;
    const Eigen::MatrixXcd rhok = rho * coeffs.K.adjoint();
    const std::complex<double> pumped = krho.trace() + rhok.trace();
    return -I * (theta * rho - rho * theta) - krho - rhok + id * (pumped / double(n)) +
           coeffs.ground_relaxation * (id / double(n) - rho);
}

Eigen::MatrixXcd liouvillian(const CoefficientSet& coeffs) {
    const std::size_t n = coeffs.n_ground;
    const auto& K = coeffs.K;
    const std::complex<double> I(0.0, 1.0);
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n * n), static_cast<Eigen::Index>(n * n));
    auto idx = [n](std::size_t a, std::size_t b) { return static_cast<Eigen::Index>(a * n + b); };
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t gp = 0; gp < n; ++gp) {
            const auto p = idx(g, gp);
            M(p, p) += -I * (coeffs.theta(g) - coeffs.theta(gp)) - coeffs.ground_relaxation;
            for (std::size_t a = 0; a < n; ++a) {
                M(p, idx(a, gp)) -= K(g, a);             // (K rho)_{g g'}
                M(p, idx(g, a)) -= std::conj(K(gp, a));  // (rho K^dagger)_{g g'}
            }
            if (g == gp) {
                for (std::size_t a = 0; a < n; ++a)
                    for (std::size_t b = 0; b < n; ++b)
                        M(p, idx(a, b)) += (K(b, a) + std::conj(K(a, b))) / double(n);
            }
        }
    }
    return M;
}

GroundDM steady_state(const CoefficientSet& coeffs, const SteadyStateOptions& options) {
    const std::size_t n = coeffs.n_ground;
    const Eigen::MatrixXcd M = liouvillian(coeffs);
    const std::size_t n2 = n * n;

    // Matrix elements connected to the populations; the rest decay to zero.
    std::vector<char> reach(n2, 0);
    std::vector<std::size_t> queue;
    for (std::size_t g = 0; g < n; ++g) {
        reach[g * n + g] = 1;
        queue.push_back(g * n + g);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t p = queue[head];
        for (std::size_t q = 0; q < n2; ++q) {
            if (reach[q]) continue;
            const auto pi_ = static_cast<Eigen::Index>(p), qi = static_cast<Eigen::Index>(q);
            if (M(pi_, qi) != 0.0 || M(qi, pi_) != 0.0) {
                reach[q] = 1;
                queue.push_back(q);
            }
        }
    }

    // Real unknowns: x_g for populations, (x, y) for each reachable g < g'.
    struct Unknown {
        std::size_t g, gp;
        bool imag;
    };
    std::vector<Unknown> unknowns;
    std::vector<long> re_index(n2, -1), im_index(n2, -1);
    for (std::size_t g = 0; g < n; ++g) {
        re_index[g * n + g] = static_cast<long>(unknowns.size());
        unknowns.push_back({g, g, false});
    }
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t gp = g + 1; gp < n; ++gp) {
            if (!reach[g * n + gp]) continue;
            re_index[g * n + gp] = static_cast<long>(unknowns.size());
            unknowns.push_back({g, gp, false});
            im_index[g * n + gp] = static_cast<long>(unknowns.size());
            unknowns.push_back({g, gp, true});
        }
    }
    const auto m = static_cast<Eigen::Index>(unknowns.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);

    const std::complex<double> I(0.0, 1.0);
    for (Eigen::Index row = 0; row < m; ++row) {
        const auto& u = unknowns[static_cast<std::size_t>(row)];
        const auto p = static_cast<Eigen::Index>(u.g * n + u.gp);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                const std::complex<double> mc = M(p, static_cast<Eigen::Index>(a * n + b));
                if (mc == 0.0) continue;
                // rho_ab in terms of the real unknowns
                std::complex<double> cx, cy;
                std::size_t key;
                if (a == b) {
                    key = a * n + a;
                    cx = mc;
                    cy = 0.0;
                } else if (a < b) {
                    key = a * n + b;
                    cx = mc;
                    cy = mc * I;
                } else {
                    key = b * n + a;
                    cx = mc;
                    cy = -mc * I;
                }
                if (re_index[key] < 0) continue;
                const double fx = u.imag ? cx.imag() : cx.real();
                A(row, re_index[key]) += fx;
                if (a != b) A(row, im_index[key]) += u.imag ? cy.imag() : cy.real();
            }
        }
        if (u.g == u.gp) rhs(row) = -coeffs.ground_relaxation / double(n);
    }

    const auto norm_row = static_cast<Eigen::Index>(std::min(options.normalization_row, n - 1));
    A.row(norm_row).setZero();
    for (std::size_t g = 0; g < n; ++g) A(norm_row, static_cast<Eigen::Index>(g)) = 1.0;
    rhs(norm_row) = 1.0;

    for (Eigen::Index r = 0; r < m; ++r) {
        const double s = A.row(r).cwiseAbs().maxCoeff();
        if (s == 0.0) throw SolverError("steady state: empty equation row", INFINITY);
        A.row(r) /= s;
        rhs(r) /= s;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rcond = lu.rcond();
    if (!(rcond * options.max_condition >= 1.0)) {
        std::ostringstream os;
        os << "steady state: ill-conditioned system (condition ~ " << 1.0 / rcond << ")";
        throw SolverError(os.str(), 1.0 / rcond);
    }
    const Eigen::VectorXd x = lu.solve(rhs);

    GroundDM dm;
    dm.rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < unknowns.size(); ++k) {
        const auto& u = unknowns[k];
        const auto g = static_cast<Eigen::Index>(u.g), gp = static_cast<Eigen::Index>(u.gp);
        if (u.g == u.gp) {
            dm.rho(g, g) = x(static_cast<Eigen::Index>(k));
        } else if (!u.imag) {
            dm.rho(g, gp) += x(static_cast<Eigen::Index>(k));
            dm.rho(gp, g) += x(static_cast<Eigen::Index>(k));
        } else {
            dm.rho(g, gp) += I * x(static_cast<Eigen::Index>(k));
            dm.rho(gp, g) -= I * x(static_cast<Eigen::Index>(k));
        }
    }
    return dm;
}

double excited_population(const GroundDM& dm, const CoefficientSet& coeffs) {
    // gamma rho_exc = (1/gamma') sum_e sum conj(V_eg) V_eg'' [P''_e + conj(P_e)] rho_g''g
    // over linked drive pairs (same drive, or the two coherent drives).
    std::complex<double> total = 0.0;
    double magnitude = 0.0;
    const bool cross = coeffs.assigned_f1 && coeffs.assigned_f2 &&
                       coeffs.drives[*coeffs.assigned_f1].component != coeffs.drives[*coeffs.assigned_f2].component;
    auto add_pair = [&](const Drive& d, const Drive& dd) {
        for (std::size_t e = 0; e < coeffs.n_excited; ++e) {
            const auto ei = static_cast<Eigen::Index>(e);
            const std::complex<double> w = dd.profile[e] + std::conj(d.profile[e]);
            for (std::size_t g = 0; g < coeffs.n_ground; ++g) {
                const std::complex<double> vg = d.rabi(ei, static_cast<Eigen::Index>(g));
                if (vg == 0.0) continue;
                for (std::size_t gg = 0; gg < coeffs.n_ground; ++gg) {
                    const std::complex<double> vgg = dd.rabi(ei, static_cast<Eigen::Index>(gg));
                    if (vgg == 0.0) continue;
                    const std::complex<double> term =
                        std::conj(vg) * vgg * w * dm.rho(static_cast<Eigen::Index>(gg), static_cast<Eigen::Index>(g));
                    total += term;
                    magnitude += std::abs(term);
                }
            }
        }
    };
    for (const auto& d : coeffs.drives) add_pair(d, d);
    if (cross) {
        add_pair(coeffs.drives[*coeffs.assigned_f1], coeffs.drives[*coeffs.assigned_f2]);
        add_pair(coeffs.drives[*coeffs.assigned_f2], coeffs.drives[*coeffs.assigned_f1]);
    }
    if (std::abs(total.imag()) > 1e-10 * std::max(magnitude, 1e-300)) {
        std::ostringstream os;
        os << "excited population has imaginary residue " << total.imag() << " (scale " << magnitude << ")";
        throw InconsistencyError(os.str());
    }
    return total.real() / (coeffs.gprime * coeffs.gamma);
}

std::vector<std::complex<double>> component_rates(const GroundDM& dm, const CoefficientSet& coeffs) {
    std::vector<std::complex<double>> rates(coeffs.component_count, 0.0);
    for (std::size_t d = 0; d < coeffs.drives.size(); ++d)
        rates[coeffs.drives[d].component] += 2.0 * (coeffs.drive_K[d] * dm.rho).trace();
    return rates;
}

double absorbed_power(double rho_exc, double omega_opt, double gamma, double atom_count) {
    return rho_exc * phys::hbar * omega_opt * gamma * atom_count;
}

}  // namespace cpt
