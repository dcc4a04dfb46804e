#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "stylecast/error.hpp"

namespace stylecast {

enum class SignalKind { audio_amplitude, light_intensity, highlight };

struct SignalSample {
    double t = 0.0;
    double value = 0.0;
};

// Time series of normalized amplitude/luminance samples, or a computed
// highlight-score track. Input kinds are expected in [0,1]; highlight scores
// are derivative magnitudes and carry no range bound.
struct SignalSeries {
    std::vector<SignalSample> samples;
    SignalKind kind = SignalKind::audio_amplitude;
    double sample_rate_hz = 0.0;

    bool empty() const { return samples.empty(); }
    double start_s() const { return samples.front().t; }
    double end_s() const { return samples.back().t; }
};

struct Threshold {
    enum class Kind { absolute, percentile };
    Kind kind = Kind::percentile;
    double value = 90.0;

    static Threshold absolute(double v) { return {Kind::absolute, v}; }
    static Threshold percentile(double p) { return {Kind::percentile, p}; }
};

struct HighlightParams {
    double omega_audio = 0.5;
    double omega_light = 0.5;
    Threshold threshold = Threshold::percentile(90.0);
    double smooth_window_s = 0.25;
    double min_window_s = 0.5;
    double merge_gap_s = 1.0;
    double resample_hz = 20.0;
};

struct HighlightWindow {
    double start_s = 0.0;
    double end_s = 0.0;
    double peak_score = 0.0;
};

struct FrameSegment {
    double start_s = 0.0;
    double end_s = 0.0;
    double rate_fps = 0.0;
};

// Piecewise sampling plan tiling [0, duration] plus the derived frame grid.
struct FrameSchedule {
    std::vector<FrameSegment> segments;
    std::vector<double> frame_timestamps;
    double duration_s = 0.0;

    std::size_t frame_count() const { return frame_timestamps.size(); }
};

constexpr double kHighlightRateFps = 10.0;
constexpr double kNormalRateFps = 0.5;

namespace detail {

constexpr double kTimeEps = 1e-9;

inline void validate_params(const HighlightParams& p) {
    if (std::abs(p.omega_audio + p.omega_light - 1.0) > 1e-9)
        throw Error("highlight weights must sum to 1");
    if (p.omega_audio < 0.0 || p.omega_light < 0.0) throw Error("highlight weights must be >= 0");
    if (p.smooth_window_s < 0.0 || p.min_window_s < 0.0 || p.merge_gap_s < 0.0)
        throw Error("window parameters must be >= 0");
    if (p.resample_hz <= 0.0) throw Error("resample rate must be positive");
}

inline void validate_input_series(const SignalSeries& s) {
    if (s.empty()) throw Error("empty signal");
    if (s.sample_rate_hz <= 0.0) throw Error("sample rate must be positive");
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
        if (i > 0 && s.samples[i].t <= s.samples[i - 1].t)
            throw Error("timestamps must be strictly increasing");
        double v = s.samples[i].value;
        if (v < -1e-9 || v > 1.0 + 1e-9) throw Error("signal not normalized to [0,1]");
    }
}

inline double interpolate_at(const SignalSeries& s, double t) {
    const auto& v = s.samples;
    if (t <= v.front().t) return v.front().value;
    if (t >= v.back().t) return v.back().value;
    auto it = std::lower_bound(v.begin(), v.end(), t,
                               [](const SignalSample& a, double tt) { return a.t < tt; });
    std::size_t hi = static_cast<std::size_t>(it - v.begin());
    std::size_t lo = hi - 1;
    double frac = (t - v[lo].t) / (v[hi].t - v[lo].t);
    return v[lo].value + frac * (v[hi].value - v[lo].value);
}

inline std::vector<double> moving_average(const std::vector<double>& x, std::size_t half_width) {
    if (half_width == 0) return x;
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::size_t lo = i >= half_width ? i - half_width : 0;
        std::size_t hi = std::min(x.size() - 1, i + half_width);
        double sum = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) sum += x[k];
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

// Central difference with one-sided endpoints.
inline std::vector<double> differentiate(const std::vector<double>& x, double dt) {
    std::vector<double> out(x.size(), 0.0);
    if (x.size() < 2) return out;
    out.front() = (x[1] - x[0]) / dt;
    out.back() = (x[x.size() - 1] - x[x.size() - 2]) / dt;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) out[i] = (x[i + 1] - x[i - 1]) / (2.0 * dt);
    return out;
}

}  // namespace detail

// Linear-interpolation percentile of the sample values, p in [0, 100].
inline double percentile(std::vector<double> values, double p) {
    if (values.empty()) throw Error("empty signal");
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values.front();
    double rank = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(rank);
    if (lo + 1 >= values.size()) return values.back();
    double frac = rank - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

// Min-max normalization onto [0,1]; constant signals flatten to all zeros.
inline SignalSeries normalize_min_max(SignalSeries s) {
    if (s.empty()) return s;
    auto [mn, mx] = std::minmax_element(
        s.samples.begin(), s.samples.end(),
        [](const SignalSample& a, const SignalSample& b) { return a.value < b.value; });
    double lo = mn->value, hi = mx->value;
    for (auto& sample : s.samples)
        sample.value = hi > lo ? (sample.value - lo) / (hi - lo) : 0.0;
    return s;
}

// H(t) = w_a*|dA/dt| + w_l*|dL/dt| on a common uniform grid. Both inputs are
// resampled to params.resample_hz over their overlap, smoothed with a centered
// moving average, then differentiated by central difference.
inline SignalSeries highlight_score(const SignalSeries& audio, const SignalSeries& light,
                                    const HighlightParams& params = {}) {
    detail::validate_params(params);
    detail::validate_input_series(audio);
    detail::validate_input_series(light);

    double max_period = std::max(1.0 / audio.sample_rate_hz, 1.0 / light.sample_rate_hz);
    if (std::abs(audio.start_s() - light.start_s()) > max_period + detail::kTimeEps ||
        std::abs(audio.end_s() - light.end_s()) > max_period + detail::kTimeEps)
        throw Error("span mismatch");

    double t0 = std::max(audio.start_s(), light.start_s());
    double t1 = std::min(audio.end_s(), light.end_s());
    double dt = 1.0 / params.resample_hz;
    auto n = static_cast<std::size_t>(std::floor((t1 - t0) / dt + detail::kTimeEps)) + 1;
    if (n < 3) throw Error("signal too short");

    std::vector<double> a(n), l(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = t0 + static_cast<double>(i) * dt;
        a[i] = detail::interpolate_at(audio, t);
        l[i] = detail::interpolate_at(light, t);
    }

    auto window = static_cast<std::size_t>(
        std::max(1.0, std::round(params.smooth_window_s * params.resample_hz)));
    std::size_t half = window / 2;
    auto da = detail::differentiate(detail::moving_average(a, half), dt);
    auto dl = detail::differentiate(detail::moving_average(l, half), dt);

    SignalSeries out;
    out.kind = SignalKind::highlight;
    out.sample_rate_hz = params.resample_hz;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.samples[i].t = t0 + static_cast<double>(i) * dt;
        out.samples[i].value =
            params.omega_audio * std::abs(da[i]) + params.omega_light * std::abs(dl[i]);
    }
    return out;
}

inline double resolve_threshold(const SignalSeries& score, const Threshold& th) {
    if (th.kind == Threshold::Kind::absolute) return th.value;
    std::vector<double> values;
    values.reserve(score.samples.size());
    for (const auto& s : score.samples) values.push_back(s.value);
    return percentile(std::move(values), th.value);
}

// Contiguous runs with score > threshold become windows; near windows merge,
// short windows drop. Output is disjoint and sorted.
inline std::vector<HighlightWindow> detect_highlights(const SignalSeries& score,
                                                      const HighlightParams& params = {}) {
    detail::validate_params(params);
    if (score.empty()) throw Error("empty signal");
    double theta = resolve_threshold(score, params.threshold);
    double period = score.sample_rate_hz > 0.0 ? 1.0 / score.sample_rate_hz : 0.0;

    std::vector<HighlightWindow> runs;
    const auto& v = score.samples;
    std::size_t i = 0;
    while (i < v.size()) {
        if (v[i].value > theta) {
            std::size_t j = i;
            double peak = v[i].value;
            while (j + 1 < v.size() && v[j + 1].value > theta) {
                ++j;
                peak = std::max(peak, v[j].value);
            }
            double start = v[i].t;
            double end = j > i ? v[j].t : v[i].t + period;  // single sample spans one period
            runs.push_back({start, end, peak});
            i = j + 1;
        } else {
            ++i;
        }
    }

    std::vector<HighlightWindow> merged;
    for (const auto& run : runs) {
        if (!merged.empty() && run.start_s - merged.back().end_s < params.merge_gap_s) {
            merged.back().end_s = run.end_s;
            merged.back().peak_score = std::max(merged.back().peak_score, run.peak_score);
        } else {
            merged.push_back(run);
        }
    }

    std::vector<HighlightWindow> kept;
    for (const auto& w : merged)
        if (w.end_s - w.start_s >= params.min_window_s) kept.push_back(w);
    return kept;
}

namespace detail {

inline void append_frames(FrameSchedule& schedule, const FrameSegment& seg) {
    if (seg.end_s - seg.start_s <= kTimeEps) return;
    schedule.segments.push_back(seg);
    double step = 1.0 / seg.rate_fps;
    for (std::size_t k = 0;; ++k) {
        double t = seg.start_s + static_cast<double>(k) * step;
        if (t >= seg.end_s - kTimeEps) break;
        schedule.frame_timestamps.push_back(t);
    }
}

}  // namespace detail

// Highlight intervals sample at 10 fps, the remainder at 0.5 fps. Frames sit
// on the left-closed grid of each segment: at the segment start, then every
// 1/rate seconds, excluding the segment end.
inline FrameSchedule build_frame_schedule(double duration_s,
                                          const std::vector<HighlightWindow>& highlights) {
    if (duration_s <= 0.0) throw Error("duration must be positive");
    std::vector<HighlightWindow> sorted = highlights;
    std::sort(sorted.begin(), sorted.end(),
              [](const HighlightWindow& a, const HighlightWindow& b) { return a.start_s < b.start_s; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        auto& w = sorted[i];
        if (w.start_s < -detail::kTimeEps || w.end_s > duration_s + detail::kTimeEps)
            throw Error("highlight outside duration");
        if (w.end_s <= w.start_s) throw Error("highlight window must have positive length");
        if (i > 0 && w.start_s < sorted[i - 1].end_s - detail::kTimeEps)
            throw Error("highlight windows overlap");
        w.start_s = std::max(0.0, w.start_s);
        w.end_s = std::min(duration_s, w.end_s);
    }

    FrameSchedule schedule;
    schedule.duration_s = duration_s;
    double cursor = 0.0;
    for (const auto& w : sorted) {
        detail::append_frames(schedule, {cursor, w.start_s, kNormalRateFps});
        detail::append_frames(schedule, {w.start_s, w.end_s, kHighlightRateFps});
        cursor = w.end_s;
    }
    detail::append_frames(schedule, {cursor, duration_s, kNormalRateFps});
    return schedule;
}

}  // namespace stylecast
