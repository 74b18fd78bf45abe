#pragma once
#include <algorithm>
#include <array>
#include <atomic>
#include <complex>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "evolve.hpp"

namespace adsdyn {

using cplx = std::complex<double>;

struct ModeSpec {
    std::array<double, 3> xi{0, 0, 0};
    cplx amplitude{1, 0};
    VCoords f, g;  // initial radial data, on the common grid
    double weight = 1.0;  // quadrature weight in xi

    double m() const { return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]); }
};

struct XGrid {
    std::array<double, 3> lo{0, 0, 0}, hi{0, 0, 0};
    std::array<int, 3> n{1, 1, 1};

    std::vector<std::array<double, 3>> points() const {
        std::vector<std::array<double, 3>> p;
        for (int d = 0; d < 3; ++d)
            if (n[d] < 1) throw usage_error("XGrid: counts must be >= 1");
        auto coord = [&](int d, int k) { return n[d] == 1 ? lo[d] : lo[d] + (hi[d] - lo[d]) * k / (n[d] - 1); };
        for (int i = 0; i < n[0]; ++i)
            for (int j = 0; j < n[1]; ++j)
                for (int k = 0; k < n[2]; ++k) p.push_back({coord(0, i), coord(1, j), coord(2, k)});
        return p;
    }
};

struct PlaneWaveSpec {
    std::vector<ModeSpec> modes;
    XGrid x;
    double L = 24.0;
    int n = 2000;
    int z_stride = 20;  // radial subsampling of assembled output
    double z_max = -1;  // <= 0: L/2
};

struct ModeRun {
    double m = 0;
    Trajectory traj;
};

// worker count: hardware concurrency capped by ADSDYN_THREADS
inline unsigned worker_count(size_t tasks) {
    unsigned w = std::max(1u, std::thread::hardware_concurrency());
    if (const char* e = std::getenv("ADSDYN_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(e, &end, 10);
        if (end != e && v >= 1) w = std::min<unsigned>(w, (unsigned)v);
    }
    return (unsigned)std::min<size_t>(w, std::max<size_t>(tasks, 1));
}

// evolve every mode; each mode is owned by one worker, results land in input order
inline std::vector<ModeRun> run_modes(const PlaneWaveSpec& spec, const BoundaryTriple& a, const ExtensionParams& p,
                                      double T, double dt, EvolveOptions o) {
    o.L = spec.L;
    o.n = spec.n;
    std::vector<ModeRun> out(spec.modes.size());
    std::vector<std::exception_ptr> errs(spec.modes.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t k = next++; k < spec.modes.size(); k = next++) {
            try {
                const ModeSpec& ms = spec.modes[k];
                Evolver ev(a, p, ms.m(), o);
                out[k].m = ms.m();
                out[k].traj = ev.run(ev.initial(ms.f, ms.g), T, dt);
            } catch (...) {
                errs[k] = std::current_exception();
            }
        }
    };
    unsigned nw = worker_count(spec.modes.size());
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < nw; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

struct AssembledPoint {
    double x1, x2, x3, z;
    cplx value;
};

inline size_t sample_index(const Trajectory& tr, double t) {
    for (size_t k = 0; k < tr.samples.size(); ++k) {
        double tol = 1e-9 * std::max(1.0, std::abs(t));
        if (std::abs(tr.samples[k].t - t) <= tol) return k;
    }
    throw usage_error("assemble: no sample at the requested time");
}

// Phi(t,x,z) = (2 pi)^-3/2 sum_k c_k e^{i x.xi_k} psi_k(t,z)
inline std::vector<AssembledPoint> assemble(const PlaneWaveSpec& spec, const std::vector<ModeRun>& runs, double t) {
    if (runs.size() != spec.modes.size()) throw usage_error("assemble: missing mode trajectory");
    const double norm = std::pow(2 * kPi, -1.5);
    std::vector<const Vec*> psi(runs.size());
    for (size_t k = 0; k < runs.size(); ++k) {
        const auto& s = runs[k].traj.samples[sample_index(runs[k].traj, t)];
        if (s.psi.empty()) throw usage_error("assemble: trajectory has no snapshots");
        psi[k] = &s.psi;
    }
    const double h = spec.L / spec.n;
    const double zmax = spec.z_max > 0 ? spec.z_max : spec.L / 2;
    std::vector<AssembledPoint> out;
    for (const auto& x : spec.x.points()) {
        std::vector<cplx> ph(runs.size());
        for (size_t k = 0; k < runs.size(); ++k) {
            const auto& xi = spec.modes[k].xi;
            ph[k] = norm * spec.modes[k].amplitude * std::exp(cplx(0, x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2]));
        }
        for (int i = 0; i < spec.n; i += std::max(1, spec.z_stride)) {
            double z = (i + 0.5) * h;
            if (z > zmax) break;
            cplx v = 0;
            for (size_t k = 0; k < runs.size(); ++k) v += ph[k] * (*psi[k])[i];
            out.push_back({x[0], x[1], x[2], z, v});
        }
    }
    return out;
}

struct GravitonSplit {
    std::vector<double> t, closed_form, projected, residual;
};

// graviton amplitude: closed form vs projection of the evolved state on z^-3/2
inline GravitonSplit graviton_split(const Trajectory& tr, const BoundaryTriple& a, const ExtensionParams& p, double m,
                                    const VCoords& f, const VCoords& g) {
    if (is_admissible(a).positivity != Positivity::graviton_only)
        throw usage_error("graviton_split: alpha must lie in the graviton window");
    VCoords g0 = static_profile(0.0, f.psi_r.L, f.psi_r.n);
    double nn = inner_h0(g0, g0, p);
    double cf = inner_h0(f, g0, p) / nn, cg = inner_h0(g, g0, p) / nn;
    GravitonSplit s;
    for (const auto& x : tr.samples) {
        double sm = m > 0 ? std::sin(m * x.t) / m : x.t;
        double c = std::cos(m * x.t) * cf + sm * cg;
        s.t.push_back(x.t);
        s.closed_form.push_back(c);
        s.projected.push_back(x.graviton_proj);
        s.residual.push_back(x.c.v2 - c);
    }
    return s;
}

// phi2(t) - psi^0(t); observed only
inline std::vector<std::pair<double, double>> scattering_diagnostic(const GravitonSplit& s) {
    std::vector<std::pair<double, double>> r;
    for (size_t k = 0; k < s.t.size(); ++k) r.emplace_back(s.t[k], s.residual[k]);
    return r;
}

// mode sum of energies: sum_k w_k |c_k|^2 E_k(t)
inline double ads_energy(const PlaneWaveSpec& spec, const std::vector<ModeRun>& runs, size_t sample) {
    if (runs.size() != spec.modes.size()) throw usage_error("ads_energy: missing mode trajectory");
    double e = 0;
    for (size_t k = 0; k < runs.size(); ++k) {
        if (sample >= runs[k].traj.samples.size()) throw usage_error("ads_energy: sample index out of range");
        e += spec.modes[k].weight * std::norm(spec.modes[k].amplitude) * runs[k].traj.samples[sample].energy.total;
    }
    return e;
}

// ||z^-3/2||_0^2 sum_k w_k |c_k|^2 (|a_k'|^2 + m_k^2 |a_k|^2) for graviton mode data a_k z^-3/2
inline double graviton_energy_closed_form(const PlaneWaveSpec& spec, const ExtensionParams& p) {
    VCoords g0 = static_profile(0.0, spec.L, spec.n);
    double nn = inner_h0(g0, g0, p);
    double e = 0;
    for (const auto& ms : spec.modes) {
        double a = ms.f.v2, ad = ms.g.v2, m = ms.m();
        e += ms.weight * std::norm(ms.amplitude) * (ad * ad + m * m * a * a);
    }
    return nn * e;
}

// smallest |xi| on [0, m_hi] above which 'trials' random states all have nonnegative energy
struct ThresholdScan {
    double M = 0;
    int evaluations = 0;
    bool found = true;
};

inline ThresholdScan kappa_zero_threshold(const ExtensionParams& p, double m_hi, int trials = 200,
                                          std::uint64_t seed = 1, double L = 24.0, int n = 1200, int iters = 30) {
    ThresholdScan r;
    auto ok = [&](double m) {
        ++r.evaluations;
        return positivity_sample(p, m, trials, seed, L, n).all_nonnegative;
    };
    if (ok(0.0)) return r;
    if (!ok(m_hi)) {
        r.found = false;
        r.M = m_hi;
        return r;
    }
    double lo = 0, hi = m_hi;
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    r.M = hi;
    return r;
}

}  // namespace adsdyn
