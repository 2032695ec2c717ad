#include "cptsim/atomic.hpp"

#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

namespace cpt {

namespace {

// Coupled angular-momentum states |J M> expanded in the uncoupled basis
// |j1 m1> (x) |j2 m2>, built by Gram-Schmidt on the stretched states and
// repeated application of J- = J1- + J2-. The Condon-Shortley phase follows
// from keeping <j1 j1; j2 J-j1 | J J> positive. All quantum numbers doubled.
class CoupledBasis {
public:
    CoupledBasis(int tj1, int tj2) : tj1_(tj1), tj2_(tj2) {
        const std::size_t dim = static_cast<std::size_t>((tj1 + 1) * (tj2 + 1));
        for (int tJ = tj1 + tj2; tJ >= std::abs(tj1 - tj2); tJ -= 2) {
            std::vector<double> top(dim, 0.0);
            top[index(tj1, tJ - tj1)] = 1.0;
            for (const auto& [key, v] : states_) {
                if (key.second != tJ) continue;
                double overlap = 0.0;
                for (std::size_t i = 0; i < dim; ++i) overlap += v[i] * top[i];
                for (std::size_t i = 0; i < dim; ++i) top[i] -= overlap * v[i];
            }
            normalize(top);
            states_[{tJ, tJ}] = top;
            std::vector<double> cur = top;
            for (int tM = tJ; tM > -tJ; tM -= 2) {
                cur = lower(cur);
                normalize(cur);
                states_[{tJ, tM - 2}] = cur;
            }
        }
    }

    /// <j1 m1; j2 m2 | J M>, doubled arguments.
    double cg(int tm1, int tm2, int tJ, int tM) const {
        if (tm1 + tm2 != tM) return 0.0;
        if (std::abs(tm1) > tj1_ || std::abs(tm2) > tj2_) return 0.0;
        auto it = states_.find({tJ, tM});
        if (it == states_.end()) return 0.0;
        return it->second[index(tm1, tm2)];
    }

    const std::vector<double>& state(int tJ, int tM) const { return states_.at({tJ, tM}); }
    std::size_t index(int tm1, int tm2) const {
        return static_cast<std::size_t>(((tj1_ - tm1) / 2) * (tj2_ + 1) + (tj2_ - tm2) / 2);
    }

private:
    static double ladder(int tj, int tm) {
        // <j, m-1 | J- | j, m> = sqrt((j+m)(j-m+1))
        const double j = 0.5 * tj, m = 0.5 * tm;
        return std::sqrt((j + m) * (j - m + 1.0));
    }

    std::vector<double> lower(const std::vector<double>& v) const {
        std::vector<double> out(v.size(), 0.0);
        for (int tm1 = tj1_; tm1 >= -tj1_; tm1 -= 2) {
            for (int tm2 = tj2_; tm2 >= -tj2_; tm2 -= 2) {
                const double a = v[index(tm1, tm2)];
                if (a == 0.0) continue;
                if (tm1 > -tj1_) out[index(tm1 - 2, tm2)] += a * ladder(tj1_, tm1);
                if (tm2 > -tj2_) out[index(tm1, tm2 - 2)] += a * ladder(tj2_, tm2);
            }
        }
        return out;
    }

    static void normalize(std::vector<double>& v) {
        double n = 0.0;
        for (double x : v) n += x * x;
        n = std::sqrt(n);
        assert(n > 0.0);
        for (double& x : v) x /= n;
    }

    int tj1_, tj2_;
    std::map<std::pair<int, int>, std::vector<double>> states_;
};

constexpr int kTwoJ = 1;  // J = 1/2 for both 5S_1/2 and 5P_1/2
constexpr int kTwoI = 3;  // I = 3/2 for 87Rb

double centroid_offset(int F, double splitting) {
    // two hyperfine levels F=1 (3 states) and F=2 (5 states)
    return F == 1 ? -5.0 / 8.0 * splitting : 3.0 / 8.0 * splitting;
}

// Dipole coefficient <F_e m_e| d_q |F_g m_g> in units of the reduced electronic
// element, computed in the uncoupled |m_J, m_I> basis.
double hyperfine_dipole(const CoupledBasis& hfs, const CoupledBasis& electronic, int Fg, int mg,
                        int Fe, int me) {
    const int q = me - mg;
    if (std::abs(q) > 1) return 0.0;
    const auto& ground = hfs.state(2 * Fg, 2 * mg);
    const auto& excited = hfs.state(2 * Fe, 2 * me);
    double sum = 0.0;
    for (int tmj = kTwoJ; tmj >= -kTwoJ; tmj -= 2) {
        for (int tmi = kTwoI; tmi >= -kTwoI; tmi -= 2) {
            const double a = ground[hfs.index(tmj, tmi)];
            if (a == 0.0) continue;
            const int tmj_e = tmj + 2 * q;
            if (std::abs(tmj_e) > kTwoJ) continue;
            const double b = excited[hfs.index(tmj_e, tmi)];
            sum += b * electronic.cg(tmj, 2 * q, kTwoJ, tmj_e) * a;
        }
    }
    return sum;
}

std::vector<Sublevel> manifold_levels(Manifold manifold, double splitting) {
    std::vector<Sublevel> levels;
    for (int F = 1; F <= 2; ++F)
        for (int m = -F; m <= F; ++m) levels.push_back({manifold, F, m, centroid_offset(F, splitting)});
    return levels;
}

DipoleTable dipole_table(const std::vector<Sublevel>& ground, const std::vector<Sublevel>& excited) {
    static const CoupledBasis hfs(kTwoJ, kTwoI);
    static const CoupledBasis electronic(kTwoJ, 2);
    DipoleTable table(ground.size(), excited.size());
    for (std::size_t g = 0; g < ground.size(); ++g) {
        for (std::size_t e = 0; e < excited.size(); ++e) {
            const int q = excited[e].mF - ground[g].mF;
            if (std::abs(q) > 1) continue;
            double c = hyperfine_dipole(hfs, electronic, ground[g].F, ground[g].mF, excited[e].F,
                                        excited[e].mF);
            // Ground-manifold gauge: F_g=2 states carry a factor -1 so that
            // c_1B c_B2 = -1/(4 sqrt 3) on the 6-level subsystem.
            if (ground[g].F == 2) c = -c;
            if (std::abs(c) < 1e-14) c = 0.0;
            table.set(g, e, q, c);
        }
    }
    return table;
}

}  // namespace

DipoleTable::DipoleTable(std::size_t n_ground, std::size_t n_excited)
    : n_ground_(n_ground), n_excited_(n_excited), c_(n_ground * n_excited, 0.0),
      q_(n_ground * n_excited, 0) {}

double DipoleTable::operator()(std::size_t g, std::size_t e, Polarization q) const {
    const std::size_t k = g * n_excited_ + e;
    return q_[k] == static_cast<int>(q) ? c_[k] : 0.0;
}

void DipoleTable::set(std::size_t g, std::size_t e, int q, double value) {
    c_[g * n_excited_ + e] = value;
    q_[g * n_excited_ + e] = q;
}

AtomicSystem::AtomicSystem(std::string name, std::vector<Sublevel> ground, std::vector<Sublevel> excited,
                           DipoleTable dipoles, AtomConstants constants)
    : name_(std::move(name)), ground_(std::move(ground)), excited_(std::move(excited)),
      dipoles_(std::move(dipoles)), constants_(constants) {
    if (dipoles_.ground_count() != ground_.size() || dipoles_.excited_count() != excited_.size())
        throw std::invalid_argument("dipole table does not match the sublevel catalog");
}

std::optional<std::size_t> AtomicSystem::find_ground(int F, int mF) const {
    for (std::size_t i = 0; i < ground_.size(); ++i)
        if (ground_[i].F == F && ground_[i].mF == mF) return i;
    return std::nullopt;
}

std::optional<std::size_t> AtomicSystem::find_excited(int F, int mF) const {
    for (std::size_t i = 0; i < excited_.size(); ++i)
        if (excited_[i].F == F && excited_[i].mF == mF) return i;
    return std::nullopt;
}

double AtomicSystem::transition_offset(int Fg, int Fe) const {
    const double ref = centroid_offset(1, constants_.excited_hfs) - centroid_offset(1, constants_.ground_hfs);
    return centroid_offset(Fe, constants_.excited_hfs) - centroid_offset(Fg, constants_.ground_hfs) - ref;
}

AtomicSystem build_rb87_d1(const AtomConstants& constants) {
    auto ground = manifold_levels(Manifold::ground, constants.ground_hfs);
    auto excited = manifold_levels(Manifold::excited, constants.excited_hfs);
    auto table = dipole_table(ground, excited);
    return AtomicSystem("rb87-d1", std::move(ground), std::move(excited), std::move(table), constants);
}

AtomicSystem reduced_six_level(const AtomConstants& constants) {
    const double gs = constants.ground_hfs, es = constants.excited_hfs;
    std::vector<Sublevel> ground{
        {Manifold::ground, 1, +1, centroid_offset(1, gs)},
        {Manifold::ground, 2, -1, centroid_offset(2, gs)},
    };
    std::vector<Sublevel> excited{
        {Manifold::excited, 1, 0, centroid_offset(1, es)},   // B
        {Manifold::excited, 2, -2, centroid_offset(2, es)},  // L
        {Manifold::excited, 2, 0, centroid_offset(2, es)},   // T
        {Manifold::excited, 2, +2, centroid_offset(2, es)},  // R
    };
    auto table = dipole_table(ground, excited);
    return AtomicSystem("six-level", std::move(ground), std::move(excited), std::move(table), constants);
}

double zeeman_offset(const Sublevel& s, double field_ut, const AtomConstants& constants) {
    if (s.manifold == Manifold::excited || s.mF == 0) return 0.0;
    // g_F mu_B / h in Hz/uT, split into electronic and nuclear parts. The
    // nuclear part is pinned so that g_F(1) + g_F(2) reproduces the
    // configured Lambda_a/Lambda_b splitting coefficient.
    const double electronic = constants.electron_g * phys::bohr_magneton_hz_per_ut / 4.0;
    const double nuclear = -0.5 * constants.nuclear_splitting_hz_per_ut;  // g_I mu_B / h
    const double gf = s.F == 1 ? -electronic + 1.25 * nuclear : electronic + 0.75 * nuclear;
    return hz(gf * s.mF * field_ut);
}

std::pair<double, double> lambda_resonance_offsets(double field_ut, const AtomConstants& constants) {
    auto z = [&](int F, int m) { return zeeman_offset({Manifold::ground, F, m, 0.0}, field_ut, constants); };
    return {z(2, -1) - z(1, +1), z(2, +1) - z(1, -1)};
}

}  // namespace cpt
