#include "qmeas/doubleslit/detector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "qmeas/errors.hpp"

namespace qmeas::doubleslit {

namespace {

// Snap ratios that are within roundoff of an integer, so grid rows on a bin edge land consistently.
double snapped_ratio(double y, double delta) {
    const double q = y / delta;
    const double r = std::round(q);
    return std::abs(q - r) < 1e-9 ? r : q;
}

std::int64_t bin_index(const Outcome& o) {
    if (o.parts().size() != 1) throw ValidationError("detector bins are single integers, got " + o.str());
    return o.parts().front();
}

}  // namespace

DetectorBinning::DetectorBinning(double b, double delta) : b_(b), delta_(delta) {
    if (!std::isfinite(b_)) throw ValidationError("DetectorBinning: b must be finite");
    if (!(std::isfinite(delta_) && delta_ > 0.0)) throw ValidationError("DetectorBinning: delta must be > 0");
}

std::int64_t DetectorBinning::bin_of(double x, double y) const {
    if (x < b_) return 0;
    const double q = snapped_ratio(y, delta_);
    if (q > 0.0) return static_cast<std::int64_t>(std::ceil(q));
    return static_cast<std::int64_t>(std::ceil(q)) - 1;
}

std::pair<std::int64_t, std::int64_t> DetectorBinning::bin_range(const Grid2D& g) const {
    if (g.x_max() < b_) return {0, 0};
    const auto lo = std::min<std::int64_t>(0, bin_of(b_, g.y_min()));
    const auto hi = std::max<std::int64_t>(0, bin_of(b_, g.y_max()));
    return {lo, hi};
}

Pmf detector_pmf(const WavePacket2D& packet, const DetectorBinning& binning) {
    const auto& g = packet.grid;
    const auto [lo, hi] = binning.bin_range(g);
    std::vector<double> mass(static_cast<std::size_t>(hi - lo + 1), 0.0);

    std::vector<std::int64_t> row_bin(g.ny());
    for (std::size_t j = 0; j < g.ny(); ++j) row_bin[j] = binning.bin_of(binning.b(), g.y(j));

    for (std::size_t j = 0; j < g.ny(); ++j) {
        double inside = 0.0;
        double before = 0.0;
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double w = std::norm(packet.psi[g.index(i, j)]);
            if (g.x(i) >= binning.b())
                inside += w;
            else
                before += w;
        }
        mass[static_cast<std::size_t>(row_bin[j] - lo)] += inside;
        mass[static_cast<std::size_t>(-lo)] += before;
    }

    std::vector<Outcome> outcomes;
    std::vector<double> p;
    for (std::int64_t n = lo; n <= hi; ++n) {
        outcomes.emplace_back(n);
        p.push_back(mass[static_cast<std::size_t>(n - lo)] * g.cell_area());
    }
    // Discretization leaves the norm within ~1e-12 of its exact value; allow that in validation.
    return Pmf::from_probabilities(std::move(outcomes), std::move(p), 1e-9);
}

WavePacket2D apply_bin_indicator(const WavePacket2D& packet, const DetectorBinning& binning, std::int64_t n) {
    WavePacket2D out = packet;
    const auto& g = packet.grid;
    for (std::size_t j = 0; j < g.ny(); ++j)
        for (std::size_t i = 0; i < g.nx(); ++i)
            if (binning.bin_of(g.x(i), g.y(j)) != n) out.psi[g.index(i, j)] = 0.0;
    return out;
}

double fringe_visibility(const Pmf& pmf, std::int64_t first, std::int64_t last, std::size_t smoothing) {
    if (first > last) throw EmptyWindow("fringe_visibility: empty window");
    if (first <= 0 && last >= 0) throw EmptyWindow("fringe_visibility: window contains bin 0");

    std::map<std::int64_t, double> by_bin;
    for (std::size_t k = 0; k < pmf.size(); ++k) by_bin[bin_index(pmf.outcomes()[k])] = pmf.probabilities()[k];
    auto value = [&](std::int64_t n) {
        const auto it = by_bin.find(n);
        return it == by_bin.end() ? 0.0 : it->second;
    };

    const auto half = static_cast<std::int64_t>(smoothing);
    double hi = 0.0;
    double lo = 0.0;
    bool any = false;
    for (std::int64_t n = first; n <= last; ++n) {
        double s = 0.0;
        std::int64_t count = 0;
        for (std::int64_t m = n - half; m <= n + half; ++m) {
            if (m < first || m > last) continue;
            s += value(m);
            ++count;
        }
        const double v = s / static_cast<double>(count);
        if (!any) {
            hi = lo = v;
            any = true;
        }
        hi = std::max(hi, v);
        lo = std::min(lo, v);
    }
    if (hi + lo <= 0.0) return 0.0;
    return (hi - lo) / (hi + lo);
}

WhichWay which_way_mass(const Pmf& pmf) {
    WhichWay w;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        const auto n = bin_index(pmf.outcomes()[k]);
        const double p = pmf.probabilities()[k];
        if (n > 0)
            w.upper += p;
        else if (n < 0)
            w.lower += p;
        else
            w.remainder += p;
    }
    return w;
}

WhichWay which_way_mass(const WavePacket2D& packet, const DetectorBinning& binning) {
    return which_way_mass(detector_pmf(packet, binning));
}

}  // namespace qmeas::doubleslit
