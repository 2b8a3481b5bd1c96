// ============================================================================
// quadrature.hpp
//
// Panel-adaptive Gauss-Legendre quadrature tuned for oscillatory integrands
//
//     I = int_a^b  A(x) e(phi(x)) dx ,     e(t) = exp(2 pi i t).
//
// Strategy:
//   * Initial panels are sized from the local frequency of the phase:
//     a panel spanning one period of the dominant oscillation is resolved
//     to ~1e-16 by a 20-point Gauss-Legendre rule, so we cut [a,b] into
//     panels each carrying at most a few periods, the panel count driven by
//     an estimate of |phi'| (supplied by the caller or differenced
//     numerically) plus any extra oscillation the amplitude carries (e.g. a
//     Bessel kernel), reported through extra_freq.
//   * Each panel is evaluated with nested 20- and 40-point rules; the
//     difference is the error estimate.  Panels failing the tolerance split
//     in two until the panel budget is exhausted.
//
// Gauss-Legendre nodes are generated at first use by Newton iteration on
// P_n (stable for the small n used here) and cached.
// ============================================================================
#pragma once

#include <functional>
#include <queue>

#include "common.hpp"

namespace twistsum {

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& m) : std::runtime_error(m) {}
};

// Gauss-Legendre rule on [-1,1]: nodes and weights by Newton iteration on
// the degree-n Legendre polynomial (three-term recurrence for value and
// derivative).
struct GaussLegendre {
    std::vector<double> x, w;
    explicit GaussLegendre(int n) : x(n), w(n) {
        for (int i = 0; i < n; ++i) {
            // Chebyshev-like initial guess
            double t = std::cos(PI * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-15) break;
            }
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[static_cast<size_t>(i)] = t;
            w[static_cast<size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

inline const GaussLegendre& gl20() {
    static const GaussLegendre g(20);
    return g;
}
inline const GaussLegendre& gl40() {
    static const GaussLegendre g(40);
    return g;
}

struct QuadResult {
    cplx value;
    double error_estimate = 0.0;
    int panels_used = 0;
};

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_panels = 20000;
    // Additional oscillation frequency (cycles per unit x) carried by the
    // amplitude on top of the explicit phase, e.g. a Bessel kernel's own
    // oscillation.  Constant over the interval; callers with x-dependent
    // kernel frequency pass the maximum.
    double extra_freq = 0.0;
};

// Integrate f(x) = A(x) e(phi(x)) over [a,b] where f is supplied already
// assembled (complex-valued) and freq(x) >= |phi'(x)| estimates the local
// cycle count per unit length.  freq may be null: a flat one-panel start is
// used and adaptivity does the rest.
inline QuadResult integrate_oscillatory(const std::function<cplx(double)>& f, double a, double b,
                                        const std::function<double(double)>& freq,
                                        const QuadOptions& opt = {}) {
    QuadResult out;
    if (!(b > a)) return out;

    const auto& g20 = gl20();
    const auto& g40 = gl40();
    auto panel_eval = [&](double lo, double hi, cplx& coarse, cplx& fine) {
        const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
        KahanSum s20, s40;
        for (int i = 0; i < 20; ++i)
            s20.add(g20.w[static_cast<size_t>(i)] * f(c + h * g20.x[static_cast<size_t>(i)]));
        for (int i = 0; i < 40; ++i)
            s40.add(g40.w[static_cast<size_t>(i)] * f(c + h * g40.x[static_cast<size_t>(i)]));
        coarse = h * s20.value();
        fine = h * s40.value();
    };

    // Initial partition: at most ~3 cycles per panel.
    std::vector<double> cuts{a};
    if (freq) {
        double x = a;
        while (x < b) {
            double fr = std::abs(freq(x)) + opt.extra_freq + 1.0;
            double step = std::min(3.0 / fr, b - x);
            x += step;
            if (b - x < 1e-12 * (b - a)) x = b;
            cuts.push_back(x);
        }
        if (static_cast<int>(cuts.size()) > opt.max_panels)
            throw BudgetExceeded("integrate_oscillatory: initial partition needs " +
                                 std::to_string(cuts.size()) + " panels, budget " +
                                 std::to_string(opt.max_panels));
    } else {
        cuts.push_back(b);
    }

    struct Panel {
        double lo, hi, err;
        cplx fine;
        bool operator<(const Panel& o) const { return err < o.err; }
    };
    std::priority_queue<Panel> heap;
    KahanSum total;
    double total_err = 0.0;
    int used = 0;
    auto push_panel = [&](double lo, double hi) {
        cplx c, fptr;
        panel_eval(lo, hi, c, fptr);
        heap.push({lo, hi, std::abs(fptr - c), fptr});
        ++used;
    };
    for (size_t i = 0; i + 1 < cuts.size(); ++i) push_panel(cuts[i], cuts[i + 1]);

    // Refine until the summed error estimate meets tolerance.
    while (true) {
        // current totals
        total = KahanSum();
        total_err = 0.0;
        std::vector<Panel> snapshot;
        snapshot.reserve(heap.size());
        while (!heap.empty()) {
            snapshot.push_back(heap.top());
            heap.pop();
        }
        for (const auto& p : snapshot) {
            total.add(p.fine);
            total_err += p.err;
        }
        double target = std::max(opt.abs_tol, opt.rel_tol * std::abs(total.value()));
        if (total_err <= target || snapshot.empty()) {
            out.value = total.value();
            out.error_estimate = total_err;
            out.panels_used = used;
            return out;
        }
        for (auto& p : snapshot) heap.push(p);
        if (used + 2 > opt.max_panels)
            throw BudgetExceeded("integrate_oscillatory: error " + std::to_string(total_err) +
                                 " above target " + std::to_string(target) + " at panel budget " +
                                 std::to_string(opt.max_panels));
        // Split a batch of the worst panels before re-checking totals.
        int batch = std::max<int>(1, static_cast<int>(heap.size() / 8));
        for (int i = 0; i < batch && used + 2 <= opt.max_panels && !heap.empty(); ++i) {
            Panel worst = heap.top();
            heap.pop();
            --used;  // replaced by two children
            double mid = 0.5 * (worst.lo + worst.hi);
            push_panel(worst.lo, mid);
            push_panel(mid, worst.hi);
        }
    }
}

// Convenience wrapper: amplitude and real phase given separately, so the
// engine can size the initial panels from a numerical derivative of the
// phase.
inline QuadResult integrate_amp_phase(const std::function<cplx(double)>& amp,
                                      const std::function<double(double)>& phase, double a,
                                      double b, const QuadOptions& opt = {}) {
    auto f = [&](double x) { return amp(x) * e_of(phase(x)); };
    auto freq = [&](double x) {
        double h = 1e-5 * (b - a);
        double lo = std::max(a, x - h), hi = std::min(b, x + h);
        return std::abs(phase(hi) - phase(lo)) / (hi - lo);
    };
    return integrate_oscillatory(f, a, b, freq, opt);
}

}  // namespace twistsum
