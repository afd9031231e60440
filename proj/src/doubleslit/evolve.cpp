#include "qmeas/doubleslit/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qmeas/doubleslit/kernels.hpp"
#include "qmeas/errors.hpp"

namespace qmeas::doubleslit {

namespace {

// Precomputed coefficients for one propagation direction (forward or adjoint).
class Stepper {
public:
    Stepper(const Potential2D& pot, double dt, bool adjoint, const EvolveOptions& opt)
        : pot_(pot), opt_(opt), adjoint_(adjoint) {
        const auto& g = pot.grid();
        const double kinetic = pot.hbar() / (2.0 * pot.mass());
        const double sign = adjoint ? -1.0 : 1.0;
        half_x_ = kernels::CayleyLine::make(sign * 0.5 * dt, kinetic, g.hx());
        full_y_ = kernels::CayleyLine::make(sign * dt, kinetic, g.hy());
        if (opt.backend == Backend::omp) {
            runs_ = kernels::RunIndex::build(g, pot.blocked());
            table_x_ = kernels::ThomasTable::build(half_x_, g.nx());
            table_y_ = kernels::ThomasTable::build(full_y_, g.ny());
        }
        if (opt.sponge) sponge_ = kernels::sponge_factors(g, opt.sponge->width, opt.sponge->strength, dt);
    }

    // Forward: sponge(Cx Cy Cx psi). Adjoint: Cx* Cy* Cx* (sponge psi).
    double step(std::span<Complex> psi) const {
        double removed = 0.0;
        if (adjoint_) removed += damp(psi);
        directional(psi);
        if (!adjoint_) removed += damp(psi);
        return removed;
    }

    double norm2(std::span<const Complex> psi) const {
        const auto& g = pot_.grid();
        return opt_.backend == Backend::omp ? kernels::omp::norm2(psi, g) : kernels::serial::norm2(psi, g.cell_area());
    }

private:
    void directional(std::span<Complex> psi) const {
        const auto& g = pot_.grid();
        const auto mask = std::span<const std::uint8_t>(pot_.blocked());
        if (opt_.backend == Backend::omp) {
            kernels::omp::cayley_x(psi, g, mask, runs_, half_x_, table_x_);
            kernels::omp::cayley_y(psi, g, mask, runs_, full_y_, table_y_);
            kernels::omp::cayley_x(psi, g, mask, runs_, half_x_, table_x_);
        } else {
            kernels::serial::cayley_x(psi, g, mask, half_x_);
            kernels::serial::cayley_y(psi, g, mask, full_y_);
            kernels::serial::cayley_x(psi, g, mask, half_x_);
        }
    }

    double damp(std::span<Complex> psi) const {
        if (sponge_.empty()) return 0.0;
        const auto& g = pot_.grid();
        return opt_.backend == Backend::omp ? kernels::omp::sponge(psi, g, sponge_)
                                            : kernels::serial::sponge(psi, sponge_, g.cell_area());
    }

    const Potential2D& pot_;
    EvolveOptions opt_;
    bool adjoint_;
    kernels::CayleyLine half_x_{};
    kernels::CayleyLine full_y_{};
    kernels::RunIndex runs_;
    kernels::ThomasTable table_x_;
    kernels::ThomasTable table_y_;
    std::vector<double> sponge_;
};

void check_inputs(const WavePacket2D& packet, const Potential2D& pot, double dt) {
    if (!(packet.grid == pot.grid())) throw ValidationError("evolve: packet and potential grids differ");
    if (packet.psi.size() != packet.grid.size()) throw ValidationError("evolve: amplitude count does not match grid");
    const double limit = max_stable_dt(pot.grid(), pot.hbar(), pot.mass());
    if (!(std::isfinite(dt) && dt > 0.0 && dt <= limit))
        throw StabilityViolation("evolve: dt " + std::to_string(dt) + " outside (0, " + std::to_string(limit) + "]");
}

void check_finite(std::span<const Complex> psi) {
    for (const auto& v : psi)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw StabilityViolation("evolve: amplitudes became non-finite");
}

WavePacket2D run(const WavePacket2D& packet, const Potential2D& pot, double dt, std::size_t steps,
                 const EvolveOptions& opt, bool adjoint) {
    check_inputs(packet, pot, dt);
    WavePacket2D out = packet;
    apply_mask(out, pot);
    if (steps == 0) return out;
    const Stepper stepper(pot, dt, adjoint, opt);
    for (std::size_t s = 0; s < steps; ++s) out.absorbed += stepper.step(out.psi);
    check_finite(out.psi);
    return out;
}

}  // namespace

double max_stable_dt(const Grid2D& grid, double hbar, double mass) {
    const double h = std::min(grid.hx(), grid.hy());
    const double kmax = std::numbers::pi / (2.0 * h);
    return 1.0 / ((hbar / (2.0 * mass)) * kmax * kmax);
}

WavePacket2D evolve(const WavePacket2D& packet, const Potential2D& potential, double dt, std::size_t steps,
                    const EvolveOptions& options) {
    return run(packet, potential, dt, steps, options, false);
}

WavePacket2D evolve_adjoint(const WavePacket2D& packet, const Potential2D& potential, double dt, std::size_t steps,
                            const EvolveOptions& options) {
    return run(packet, potential, dt, steps, options, true);
}

double mass_beyond(const WavePacket2D& packet, double screen_x) {
    const auto& g = packet.grid;
    double s = 0.0;
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            if (g.x(i) >= screen_x) s += std::norm(packet.psi[g.index(i, j)]);
    return s * g.cell_area();
}

EvolutionRun evolve_until(const WavePacket2D& packet, const Potential2D& potential, double dt, const StopRule& rule,
                          const EvolveOptions& options) {
    check_inputs(packet, potential, dt);
    if (!(rule.fraction > 0.0 && rule.fraction <= 1.0)) throw ValidationError("evolve_until: fraction must be in (0, 1]");

    EvolutionRun r{packet, 0, false, 0.0};
    apply_mask(r.packet, potential);
    const Stepper stepper(potential, dt, false, options);
    r.fraction_beyond = mass_beyond(r.packet, rule.screen_x);
    while (r.fraction_beyond < rule.fraction && r.steps < rule.max_steps) {
        r.packet.absorbed += stepper.step(r.packet.psi);
        ++r.steps;
        r.fraction_beyond = mass_beyond(r.packet, rule.screen_x);
    }
    r.reached_fraction = r.fraction_beyond >= rule.fraction;
    check_finite(r.packet.psi);
    return r;
}

}  // namespace qmeas::doubleslit
