#include "dml/integrate.hpp"

#include <algorithm>
#include <cmath>

namespace dml {

namespace {

// Dormand-Prince 5(4) tableau (Hairer, Norsett & Wanner, DOPRI5).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output coefficients
constexpr double d1 = -12715105075.0 / 11282082432.0,
                 d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0,
                 d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0,
                 d7 = 69997945.0 / 29380423.0;

template <int N>
using Vec = std::array<double, N>;

template <int N, class F>
struct Dopri5 {
    const F& f;    // void(double t, const Vec&, Vec&)
    double rtol, atol;

    Vec<N> k1, k2, k3, k4, k5, k6, k7;
    Vec<N> y, ytmp, ynew, yerr;
    // dense-output polynomial for the last accepted step
    Vec<N> r1, r2, r3, r4, r5;
    double t_step = 0, h_step = 0;

    Dopri5(const F& rhs, double rt, double at) : f(rhs), rtol(rt), atol(at) {}

    // One trial step from (t, y) with step h; fills ynew/yerr and the dense
    // coefficients. k1 must hold f(t, y) on entry (FSAL).
    void step(double t, double h) {
        for (int i = 0; i < N; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                  a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (int i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (int i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        f(t + h, ynew, k7);
        for (int i = 0; i < N; ++i)
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                           e6 * k6[i] + e7 * k7[i]);
    }

    double error_norm() const {
        double s = 0;
        for (int i = 0; i < N; ++i) {
            const double sc =
                atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            const double q = yerr[i] / sc;
            s += q * q;
        }
        return std::sqrt(s / N);
    }

    void make_dense(double t, double h) {
        t_step = t;
        h_step = h;
        for (int i = 0; i < N; ++i) {
            const double dy = ynew[i] - y[i];
            r1[i] = y[i];
            r2[i] = dy;
            r3[i] = h * k1[i] - dy;
            r4[i] = dy - h * k7[i] - r3[i];
            r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                         d6 * k6[i] + d7 * k7[i]);
        }
    }

    Vec<N> eval_dense(double t) const {
        const double th = (t - t_step) / h_step;
        const double th1 = 1.0 - th;
        Vec<N> out;
        for (int i = 0; i < N; ++i)
            out[i] = r1[i] +
                     th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
        return out;
    }
};

template <int N, class F>
TimeSeries run_adaptive(const F& rhs, const Vec<N>& s0, double t0, double t1,
                        double sample_dt, const SolverSettings& st,
                        bool sample) {
    if (!(t1 > t0)) throw std::invalid_argument("t_span must satisfy t1 > t0");
    if (!(st.rtol >= 1e-12 && st.rtol <= 1e-3))
        throw std::invalid_argument("rtol must lie in [1e-12, 1e-3]");
    if (!(st.atol > 0)) throw std::invalid_argument("atol must be > 0");
    if (sample && !(sample_dt > 0))
        throw std::invalid_argument("sample_dt must be > 0");

    Dopri5<N, F> s(rhs, st.rtol, st.atol);
    s.y = s0;
    rhs(t0, s.y, s.k1);

    TimeSeries ts;
    ts.dim = N;
    ts.meta.rtol = st.rtol;
    ts.meta.atol = st.atol;
    for (int i = 0; i < N; ++i) ts.meta.initial[i] = s0[i];
    ts.meta.t0 = t0;
    ts.meta.t1 = t1;
    ts.meta.sample_dt = sample_dt;

    auto emit = [&](double t, const Vec<N>& v) {
        ts.t.push_back(t);
        std::array<double, 3> row{0, 0, 0};
        for (int i = 0; i < N; ++i) row[i] = v[i];
        ts.states.push_back(row);
    };

    std::size_t next_sample = 0;
    if (sample) {
        emit(t0, s0);
        next_sample = 1;
    }

    double t = t0;
    double h = std::min(st.h0, t1 - t0);
    std::size_t nsteps = 0;
    while (t < t1) {
        if (++nsteps > st.max_steps)
            throw IntegrationError("step budget exhausted", t,
                                   {s.y[0], s.y[1], N > 2 ? s.y[2] : 0.0}, N);
        if (h < st.h_underflow * std::max(1.0, std::abs(t)))
            throw IntegrationError("step size underflow (stiffness/blow-up)",
                                   t, {s.y[0], s.y[1], N > 2 ? s.y[2] : 0.0},
                                   N);
        const bool last = t + h >= t1;
        if (last) h = t1 - t;

        s.step(t, h);
        bool finite = true;
        for (int i = 0; i < N; ++i) finite = finite && std::isfinite(s.ynew[i]);
        const double err = finite ? s.error_norm() : 2.0;
        if (!finite)
            throw IntegrationError("non-finite state", t,
                                   {s.y[0], s.y[1], N > 2 ? s.y[2] : 0.0}, N);

        if (err <= 1.0) {
            s.make_dense(t, h);
            const double t_new = last ? t1 : t + h;
            if (sample) {
                // emit every grid point covered by this step
                while (true) {
                    const double ts_next = t0 + next_sample * sample_dt;
                    if (ts_next > t1 + 1e-12 * std::max(1.0, std::abs(t1)))
                        break;
                    if (ts_next > t_new + 1e-14 * std::max(1.0, std::abs(t_new)))
                        break;
                    emit(ts_next, s.eval_dense(std::min(ts_next, t_new)));
                    ++next_sample;
                }
            }
            ts.meta.steps_accepted++;
            ts.meta.err_sum += err * st.rtol;
            t = t_new;
            s.y = s.ynew;
            s.k1 = s.k7;  // FSAL
        } else {
            ts.meta.steps_rejected++;
        }
        // proportional controller, safety 0.9, growth clamped to [0.2, 10]
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::clamp(fac, 0.2, 10.0);
        h *= fac;
    }
    if (!sample) emit(t, s.y);
    return ts;
}

template <int N, class F>
Vec<N> run_fixed(const F& rhs, const Vec<N>& s0, double t0, double t1,
                 double h) {
    if (!(h > 0)) throw std::invalid_argument("h must be > 0");
    Dopri5<N, F> s(rhs, 1e-9, 1e-12);
    s.y = s0;
    const std::size_t n =
        static_cast<std::size_t>(std::ceil((t1 - t0) / h - 1e-12));
    const double hs = (t1 - t0) / static_cast<double>(n);
    double t = t0;
    for (std::size_t i = 0; i < n; ++i) {
        rhs(t, s.y, s.k1);
        s.step(t, hs);
        s.y = s.ynew;
        t = t0 + (i + 1) * hs;
    }
    return s.y;
}

struct Wrap2 {
    const Rhs2& f;
    void operator()(double t, const Vec<2>& v, Vec<2>& out) const {
        const State2 d = f(t, {v[0], v[1]});
        out[0] = d.x;
        out[1] = d.y;
    }
};

struct Wrap3 {
    const Rhs3& f;
    void operator()(double t, const Vec<3>& v, Vec<3>& out) const {
        const State3 d = f(t, {v[0], v[1], v[2]});
        out[0] = d.x;
        out[1] = d.y;
        out[2] = d.phi;
    }
};

}  // namespace

TimeSeries TimeSeries::tail_from(double t_from) const {
    TimeSeries out;
    out.dim = dim;
    out.meta = meta;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t_from) {
            out.t.push_back(t[i]);
            out.states.push_back(states[i]);
        }
    }
    return out;
}

TimeSeries integrate_adaptive(const Rhs2& rhs, const State2& s0, double t0,
                              double t1, double sample_dt,
                              const SolverSettings& st) {
    return run_adaptive<2>(Wrap2{rhs}, Vec<2>{s0.x, s0.y}, t0, t1, sample_dt,
                           st, true);
}

TimeSeries integrate_adaptive(const Rhs3& rhs, const State3& s0, double t0,
                              double t1, double sample_dt,
                              const SolverSettings& st) {
    return run_adaptive<3>(Wrap3{rhs}, Vec<3>{s0.x, s0.y, s0.phi}, t0, t1,
                           sample_dt, st, true);
}

State2 integrate_fixed(const Rhs2& rhs, const State2& s0, double t0, double t1,
                       double h) {
    const auto v = run_fixed<2>(Wrap2{rhs}, Vec<2>{s0.x, s0.y}, t0, t1, h);
    return {v[0], v[1]};
}

State2 integrate_to(const Rhs2& rhs, const State2& s0, double t0, double t1,
                    const SolverSettings& st) {
    const auto ts =
        run_adaptive<2>(Wrap2{rhs}, Vec<2>{s0.x, s0.y}, t0, t1, 0.0, st, false);
    return {ts.states.back()[0], ts.states.back()[1]};
}

State3 integrate_to(const Rhs3& rhs, const State3& s0, double t0, double t1,
                    const SolverSettings& st) {
    const auto ts = run_adaptive<3>(Wrap3{rhs}, Vec<3>{s0.x, s0.y, s0.phi}, t0,
                                    t1, 0.0, st, false);
    return {ts.states.back()[0], ts.states.back()[1], ts.states.back()[2]};
}

}  // namespace dml
