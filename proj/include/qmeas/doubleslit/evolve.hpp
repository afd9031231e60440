#pragma once

#include <cstddef>
#include <optional>

#include "qmeas/doubleslit/grid.hpp"
#include "qmeas/doubleslit/potential.hpp"

namespace qmeas::doubleslit {

enum class Backend { serial, omp };

/// Absorbing layer of `width` cells on every box edge with damping rate strength * s^2,
/// s in (0, 1] the normalized depth.
struct Sponge {
    std::size_t width = 32;
    double strength = 0.05;
};

struct EvolveOptions {
    Backend backend = Backend::omp;
    std::optional<Sponge> sponge;
};

/// Largest accepted time step: dt * (hbar/2m) * (pi/(2h))^2 <= 1, i.e. the Crank-Nicolson
/// phase per step stays below one radian across the band init_packet allows.
double max_stable_dt(const Grid2D& grid, double hbar, double mass);

/// Advances the packet `steps` times by
///     psi <- mask * sponge * Cx(dt/2) Cy(dt) Cx(dt/2) psi.
/// The input is masked first. Sponge losses are added to `absorbed`.
/// Throws StabilityViolation when dt is not in (0, max_stable_dt] or amplitudes stop being finite.
WavePacket2D evolve(const WavePacket2D& packet, const Potential2D& potential, double dt, std::size_t steps,
                    const EvolveOptions& options = {});

/// Applies the adjoint of the same `steps`-step propagator. Without a sponge this is the inverse.
WavePacket2D evolve_adjoint(const WavePacket2D& packet, const Potential2D& potential, double dt, std::size_t steps,
                            const EvolveOptions& options = {});

/// Operational "sufficiently long" evolution: stop once the probability with x >= screen_x
/// reaches `fraction`, or after max_steps.
struct StopRule {
    double screen_x = 0.0;
    double fraction = 0.9;
    std::size_t max_steps = 4000;
};

struct EvolutionRun {
    WavePacket2D packet;
    std::size_t steps = 0;
    bool reached_fraction = false;
    double fraction_beyond = 0.0;
};

EvolutionRun evolve_until(const WavePacket2D& packet, const Potential2D& potential, double dt, const StopRule& rule,
                          const EvolveOptions& options = {});

/// Probability with x >= screen_x.
double mass_beyond(const WavePacket2D& packet, double screen_x);

}  // namespace qmeas::doubleslit
