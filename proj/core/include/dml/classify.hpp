#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dml/integrate.hpp"

namespace dml {

// Spike extraction from a post-transient series of x values.
//
// Thresholds are range-relative: with r = max - min, the spike level is
// upper = min + 0.6 r and the hysteresis re-arm level lower = min + 0.4 r.
// A spike is a local maximum above the spike level; neighbouring maxima
// merge unless the signal drops by at least 0.02 r between them. The
// classic hysteresis event count (rise through upper after a visit below
// lower) and the count of maximal segments above upper are kept as
// diagnostics; in strongly bursting regimes they undercount, because the
// intra-burst dips do not reach the lower threshold.
struct SpikeTrain {
    std::vector<double> spike_times;   // time of maximum of each spike
    std::vector<double> spike_values;  // x at the spike
    std::vector<double> gap_minima;    // min of x between adjacent spikes
    double upper = 0, lower = 0;       // thresholds actually used
    double x_min = 0, x_max = 0;       // series range
    std::size_t n_excursions = 0;        // maximal segments above upper
    std::size_t n_hysteresis_events = 0; // upper-rise after below-lower visit
    std::size_t n_subthreshold_maxima = 0;  // prominent maxima below upper

    double range() const { return x_max - x_min; }
};

// Series with range < 0.2 yields an empty train (range still recorded).
// Throws std::invalid_argument for series shorter than 10 samples.
SpikeTrain detect_spikes(const TimeSeries& ts);

// Successive differences of spike times; requires >= 2 spikes.
std::vector<double> interspike_intervals(const SpikeTrain& st);

// Groups spikes into bursts. An inter-spike interval is a burst boundary
// iff it exceeds boundary_factor times the minimum interval of the train
// and, when the train carries gap minima, the signal visited the lower
// threshold inside the gap (bursts end in quiescence, not in a slow
// suprathreshold oscillation).
std::vector<std::vector<std::size_t>> partition_bursts(
    const SpikeTrain& st, double boundary_factor = 4.0);

enum class Regime {
    rest,
    subthreshold_oscillation,
    regular_spiking,
    bursting,
    mixed_mode,
    irregular,
};
const char* to_string(Regime r);

struct RegimeLabel {
    Regime kind = Regime::rest;
    std::optional<int> n_per_burst;
    // diagnostics
    std::size_t spike_count = 0;
    double series_range = 0;
    double isi_cv = 0;             // over all intervals
    int strobe_period = 0;         // 0 = no repetition found (up to 8)
    std::size_t n_bursts = 0;
    std::size_t n_excursions_per_burst = 0;  // dual diagnostic, 0.6-level
    double subthreshold_per_spike = 0;
    std::string note;
};

struct ClassifySettings {
    double rest_range = 0.05;        // rest vs subthreshold oscillation cut
    double burst_boundary_factor = 4.0;
    double regular_cv = 0.05;
    double mixed_ratio = 0.2;   // subthreshold maxima per spike for MMO
    int burst_cap = 20;         // larger groups read as sustained trains
    double strobe_tol = 1e-3;
};

// Decision tree over the post-transient series:
//   empty train: range < 0.05 -> rest, else subthreshold_oscillation;
//   subthreshold maxima >= mixed_ratio per spike -> mixed_mode;
//   single group with ISI CV < 0.05 -> regular_spiking;
//   constant spikes-per-group n in [2, burst_cap] with a stroboscopic
//     repeat -> bursting(n);
//   constant n > burst_cap -> regular_spiking (sustained trains separated
//     by quiescent phases);
//   otherwise irregular.
// forcing_period is the drive period 2 pi / omega; the series must cover
// at least 8 of them.
RegimeLabel classify_activity(const TimeSeries& ts, double forcing_period,
                              const ClassifySettings& cs = {});

}  // namespace dml
