#pragma once

#include <cstdint>
#include <utility>

#include "qmeas/doubleslit/grid.hpp"
#include "qmeas/measurement.hpp"

namespace qmeas::doubleslit {

/// Screen bins: D_0 = {x < b}; for n >= 1, D_n = {x >= b, (n-1) delta < y <= n delta};
/// for n <= -1, D_n = {x >= b, n delta < y <= (n+1) delta}.
class DetectorBinning {
public:
    DetectorBinning(double b, double delta);

    double b() const noexcept { return b_; }
    double delta() const noexcept { return delta_; }

    std::int64_t bin_of(double x, double y) const;
    /// Smallest and largest bin index that contains at least one grid node.
    std::pair<std::int64_t, std::int64_t> bin_range(const Grid2D& grid) const;

private:
    double b_;
    double delta_;
};

/// Bin probabilities sum |psi|^2 * cell area over D_n, outcomes in ascending n (bin 0 included).
/// Mass lost to the sponge shows up as no_detection.
Pmf detector_pmf(const WavePacket2D& packet, const DetectorBinning& binning);

/// chi_{D_n} applied to a packet (the bin effect as a multiplication operator).
WavePacket2D apply_bin_indicator(const WavePacket2D& packet, const DetectorBinning& binning, std::int64_t n);

/// (max - min) / (max + min) over bins [first, last] after a centered moving average of
/// half-width `smoothing` (0 = none). Throws EmptyWindow if the window is empty or contains bin 0.
double fringe_visibility(const Pmf& pmf, std::int64_t first, std::int64_t last, std::size_t smoothing = 0);

struct WhichWay {
    double upper = 0.0;      // sum over n > 0
    double lower = 0.0;      // sum over n < 0
    double remainder = 0.0;  // bin 0
};
WhichWay which_way_mass(const WavePacket2D& packet, const DetectorBinning& binning);
WhichWay which_way_mass(const Pmf& pmf);

}  // namespace qmeas::doubleslit
