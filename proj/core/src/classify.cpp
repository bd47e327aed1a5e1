#include "dml/classify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dml {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::rest: return "rest";
        case Regime::subthreshold_oscillation: return "subthreshold_oscillation";
        case Regime::regular_spiking: return "regular_spiking";
        case Regime::bursting: return "bursting";
        case Regime::mixed_mode: return "mixed_mode";
        case Regime::irregular: return "irregular";
    }
    return "?";
}

namespace {

struct Extremum {
    std::size_t idx;
    bool is_max;
};

// Strict alternating extrema of the sampled series (plateaus collapse to
// their first sample).
std::vector<Extremum> extrema_of(const std::vector<double>& x) {
    std::vector<Extremum> out;
    const std::size_t n = x.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (x[i] > x[i - 1] && x[i] >= x[i + 1]) {
            out.push_back({i, true});
            while (i + 1 < n && x[i] == x[i + 1]) ++i;
        } else if (x[i] < x[i - 1] && x[i] <= x[i + 1]) {
            out.push_back({i, false});
            while (i + 1 < n && x[i] == x[i + 1]) ++i;
        }
        ++i;
    }
    return out;
}

}  // namespace

SpikeTrain detect_spikes(const TimeSeries& ts) {
    if (ts.size() < 10)
        throw std::invalid_argument("series shorter than 10 samples");
    const std::vector<double> x = ts.x();

    SpikeTrain st;
    st.x_min = *std::min_element(x.begin(), x.end());
    st.x_max = *std::max_element(x.begin(), x.end());
    const double r = st.x_max - st.x_min;
    st.upper = st.x_min + 0.6 * r;
    st.lower = st.x_min + 0.4 * r;
    if (r < 0.2) return st;  // no spiking excursions

    const auto ext = extrema_of(x);

    // candidate spike maxima above the spike level; merge a pair when the
    // drop between them is below 0.01 r (keeps the taller one)
    const double min_drop = 0.01 * r;
    std::vector<std::size_t> peaks;
    std::vector<double> valleys;      // min between accepted peaks
    double valley_after_last = -1.0;  // min since last accepted peak
    for (const auto& e : ext) {
        if (e.is_max) {
            if (x[e.idx] <= st.upper) continue;
            if (peaks.empty()) {
                peaks.push_back(e.idx);
                valley_after_last = x[e.idx];
                continue;
            }
            const double prev = x[peaks.back()];
            const double drop =
                std::min(prev, x[e.idx]) - valley_after_last;
            if (drop >= min_drop) {
                peaks.push_back(e.idx);
                valleys.push_back(valley_after_last);
                valley_after_last = x[e.idx];
            } else if (x[e.idx] > prev) {
                peaks.back() = e.idx;  // same spike, higher sample
                valley_after_last = x[e.idx];
            }
        } else {
            if (!peaks.empty())
                valley_after_last = std::min(valley_after_last, x[e.idx]);
        }
    }
    for (std::size_t i : peaks) {
        st.spike_times.push_back(ts.t[i]);
        st.spike_values.push_back(x[i]);
    }
    st.gap_minima = valleys;

    // prominent subthreshold maxima (below the spike level)
    const double min_prom = 0.02 * r;
    for (std::size_t k = 0; k < ext.size(); ++k) {
        if (!ext[k].is_max || x[ext[k].idx] > st.upper) continue;
        double left = st.x_min, right = st.x_min;
        // nearest bounding minima
        if (k > 0 && !ext[k - 1].is_max) left = x[ext[k - 1].idx];
        if (k + 1 < ext.size() && !ext[k + 1].is_max) right = x[ext[k + 1].idx];
        const double prom = x[ext[k].idx] - std::max(left, right);
        if (prom >= min_prom) st.n_subthreshold_maxima++;
    }

    // diagnostics: segments above upper, and spec-style hysteresis events
    bool above = x[0] > st.upper;
    bool armed = x[0] < st.lower;
    if (above) st.n_excursions = 1;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!above && x[i] > st.upper) {
            above = true;
            st.n_excursions++;
            if (armed) {
                st.n_hysteresis_events++;
                armed = false;
            }
        } else if (above && x[i] <= st.upper) {
            above = false;
        }
        if (x[i] < st.lower) armed = true;
    }
    return st;
}

std::vector<double> interspike_intervals(const SpikeTrain& st) {
    if (st.spike_times.size() < 2)
        throw std::invalid_argument("need at least 2 spikes");
    std::vector<double> out(st.spike_times.size() - 1);
    for (std::size_t i = 0; i + 1 < st.spike_times.size(); ++i)
        out[i] = st.spike_times[i + 1] - st.spike_times[i];
    return out;
}

std::vector<std::vector<std::size_t>> partition_bursts(const SpikeTrain& st,
                                                       double boundary_factor) {
    const auto isi = interspike_intervals(st);
    const double min_isi = *std::min_element(isi.begin(), isi.end());
    const bool have_gaps = st.gap_minima.size() == isi.size();
    std::vector<std::vector<std::size_t>> bursts(1);
    bursts.back().push_back(0);
    for (std::size_t i = 0; i < isi.size(); ++i) {
        bool boundary = isi[i] > boundary_factor * min_isi;
        if (boundary && have_gaps) boundary = st.gap_minima[i] < st.lower;
        if (boundary) bursts.emplace_back();
        bursts.back().push_back(i + 1);
    }
    return bursts;
}

namespace {

double interp_x(const TimeSeries& ts, double t) {
    const auto& tv = ts.t;
    if (t <= tv.front()) return ts.states.front()[0];
    if (t >= tv.back()) return ts.states.back()[0];
    const auto it = std::lower_bound(tv.begin(), tv.end(), t);
    const std::size_t j = it - tv.begin();
    const double t1 = tv[j - 1], t2 = tv[j];
    const double w = (t - t1) / (t2 - t1);
    return (1.0 - w) * ts.states[j - 1][0] + w * ts.states[j][0];
}

// smallest p in 1..8 with stroboscopic samples repeating to tol
int strobe_period(const TimeSeries& ts, double T, double tol) {
    const double t0 = ts.t.front();
    const int n_strobe = static_cast<int>((ts.t.back() - t0) / T);
    if (n_strobe < 3) return 0;
    std::vector<double> sv(n_strobe + 1);
    for (int k = 0; k <= n_strobe; ++k) sv[k] = interp_x(ts, t0 + k * T);
    for (int p = 1; p <= 8; ++p) {
        if (n_strobe + 1 <= 2 * p) break;
        double worst = 0;
        for (int k = 0; k + p <= n_strobe; ++k)
            worst = std::max(worst, std::abs(sv[k] - sv[k + p]));
        if (worst < tol) return p;
    }
    return 0;
}

}  // namespace

RegimeLabel classify_activity(const TimeSeries& ts, double forcing_period,
                              const ClassifySettings& cs) {
    if (!(forcing_period > 0))
        throw std::invalid_argument("forcing period must be > 0");
    if (ts.size() < 10)
        throw std::invalid_argument("series shorter than 10 samples");
    if (ts.t.back() - ts.t.front() < 8.0 * forcing_period)
        throw std::invalid_argument(
            "series must cover at least 8 forcing periods");

    const SpikeTrain st = detect_spikes(ts);
    RegimeLabel lab;
    lab.series_range = st.range();
    lab.spike_count = st.spike_times.size();
    lab.strobe_period = strobe_period(ts, forcing_period, cs.strobe_tol);

    if (st.spike_times.empty()) {
        lab.kind = lab.series_range < cs.rest_range
                       ? Regime::rest
                       : Regime::subthreshold_oscillation;
        return lab;
    }
    lab.subthreshold_per_spike =
        double(st.n_subthreshold_maxima) / double(lab.spike_count);

    if (lab.spike_count < 2) {
        lab.kind = lab.subthreshold_per_spike >= cs.mixed_ratio
                       ? Regime::mixed_mode
                       : Regime::irregular;
        lab.note = "single spike in window";
        return lab;
    }

    const auto isi = interspike_intervals(st);
    double mean = 0;
    for (double v : isi) mean += v;
    mean /= isi.size();
    double var = 0;
    for (double v : isi) var += (v - mean) * (v - mean);
    lab.isi_cv = mean > 0 ? std::sqrt(var / isi.size()) / mean : 0.0;

    const auto bursts = partition_bursts(st, cs.burst_boundary_factor);
    lab.n_bursts = bursts.size();
    // first and last group may be clipped by the window; interior groups
    // must agree exactly
    bool constant_n = true;
    std::size_t n_interior;
    if (bursts.size() >= 3) {
        n_interior = bursts[1].size();
        for (std::size_t b = 1; b + 1 < bursts.size(); ++b)
            constant_n = constant_n && bursts[b].size() == n_interior;
    } else {
        n_interior = std::max(bursts.front().size(), bursts.back().size());
    }

    // excursion diagnostic normalized per burst
    if (lab.n_bursts > 0)
        lab.n_excursions_per_burst = st.n_excursions / lab.n_bursts;

    // mixed-mode: a substantial share of prominent subthreshold maxima
    if (lab.subthreshold_per_spike >= cs.mixed_ratio) {
        lab.kind = Regime::mixed_mode;
        return lab;
    }

    if (bursts.size() == 1) {
        lab.kind = lab.isi_cv < cs.regular_cv ? Regime::regular_spiking
                                              : Regime::irregular;
        return lab;
    }

    if (constant_n) {
        const int n = static_cast<int>(n_interior);
        if (n == 1) {
            lab.kind = Regime::irregular;
            lab.note = "isolated spikes at non-uniform gaps";
        } else if (n <= cs.burst_cap) {
            if (lab.strobe_period > 0) {
                lab.kind = Regime::bursting;
                lab.n_per_burst = n;
            } else {
                lab.kind = Regime::irregular;
                lab.note = "constant group size but no stroboscopic repeat";
            }
        } else {
            // long trains separated by quiescent phases: periodic spiking
            lab.kind = Regime::regular_spiking;
            lab.note = "sustained spike trains (group size above burst cap)";
        }
        return lab;
    }
    lab.kind = Regime::irregular;
    return lab;
}

}  // namespace dml
