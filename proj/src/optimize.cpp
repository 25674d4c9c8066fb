#include "dekohere/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>

#include "dekohere/metrics.hpp"

namespace dekohere {

namespace {

using Point = std::vector<double>;

constexpr double kPenalty = 1e6;

class Search {
public:
    Search(const OptimizationProblem& problem, const OptimizerOptions& options, double h,
           OptimizationResult& out)
        : problem_(problem), options_(options), h_(h), out_(out) {}

    bool exhausted() const { return used_ >= options_.budget; }

    Point project(Point x) const {
        for (double& c : x) c = std::clamp(c, -problem_.c_max, problem_.c_max);
        return x;
    }

    // Evaluates as many of `points` as the budget allows; the returned vector
    // may be shorter than the input. Points already evaluated (projection onto
    // the box repeats vertices often) are answered from the cache for free.
    std::vector<double> batch(const std::vector<Point>& points) {
        std::vector<Point> fresh;
        for (const auto& p : points) {
            if (!cache_.count(p) && std::find(fresh.begin(), fresh.end(), p) == fresh.end()) fresh.push_back(p);
        }
        const std::size_t room = static_cast<std::size_t>(std::max(0, options_.budget - used_));
        if (fresh.size() > room) {
            fresh.resize(room);
            out_.budget_exhausted = true;
        }
        std::vector<std::optional<double>> raw(fresh.size());
        if (options_.parallel && fresh.size() > 1) {
            std::vector<std::future<std::optional<double>>> jobs;
            jobs.reserve(fresh.size());
            for (std::size_t i = 0; i < fresh.size(); ++i) {
                jobs.push_back(std::async(std::launch::async, [this, &fresh, i] { return evaluate(fresh[i]); }));
            }
            for (std::size_t i = 0; i < fresh.size(); ++i) raw[i] = jobs[i].get();
        } else {
            for (std::size_t i = 0; i < fresh.size(); ++i) raw[i] = evaluate(fresh[i]);
        }
        // Logging happens here, in submission order, so the log does not depend
        // on thread scheduling.
        for (std::size_t i = 0; i < fresh.size(); ++i) {
            ++used_;
            if (!raw[i]) {
                ++out_.rejected;
                cache_[fresh[i]] = kPenalty;
                continue;
            }
            const double v = *raw[i];
            cache_[fresh[i]] = v;
            if (out_.log.empty() || v < out_.search_objective) {
                out_.search_objective = v;
                out_.best_coeffs = fresh[i];
            }
            out_.log.push_back(Evaluation{used_ - 1, fresh[i], v, out_.search_objective});
        }
        std::vector<double> values;
        for (const auto& p : points) {
            const auto it = cache_.find(p);
            if (it == cache_.end()) break;
            values.push_back(it->second);
        }
        return values;
    }

    std::optional<double> one(const Point& p) {
        const auto v = batch({p});
        if (v.empty()) return std::nullopt;
        return v.front();
    }

private:
    std::optional<double> evaluate(const Point& coeffs) const {
        try {
            return envelope_objective(problem_, coeffs, h_);
        } catch (const ParameterError&) {
            return std::nullopt;
        } catch (const EnvelopeError&) {
            return std::nullopt;
        } catch (const NumericalError&) {
            return std::nullopt;
        }
    }

    const OptimizationProblem& problem_;
    const OptimizerOptions& options_;
    double h_;
    OptimizationResult& out_;
    int used_ = 0;
    std::map<Point, double> cache_;
};

double choose_search_h(const OptimizationProblem& p, int density) {
    if (density <= 0) return p.h;
    const double coarse = p.period / density;
    if (coarse <= p.h) return p.h;
    if (!commensurate_steps(p.t_final, coarse) || !commensurate_steps(0.5 * p.period, coarse)) return p.h;
    return coarse;
}

Point centroid(const std::vector<Point>& simplex, std::size_t skip) {
    Point c(simplex.front().size(), 0.0);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        if (i == skip) continue;
        for (std::size_t d = 0; d < c.size(); ++d) c[d] += simplex[i][d];
    }
    for (double& v : c) v /= static_cast<double>(simplex.size() - 1);
    return c;
}

Point affine(const Point& a, const Point& b, double t) {
    // a + t (b - a)
    Point r(a.size());
    for (std::size_t d = 0; d < a.size(); ++d) r[d] = a[d] + t * (b[d] - a[d]);
    return r;
}

double diameter(const std::vector<Point>& simplex) {
    double worst = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i) {
        double s = 0.0;
        for (std::size_t d = 0; d < simplex[i].size(); ++d) s = std::max(s, std::abs(simplex[i][d] - simplex[0][d]));
        worst = std::max(worst, s);
    }
    return worst;
}

} // namespace

void OptimizationProblem::validate() const {
    if (dimension < 1) throw ParameterError("optimize.dimension must be >= 1");
    if (!(c_max > 0.0) || !std::isfinite(c_max)) throw ParameterError("optimize.c_max must be finite and > 0");
    if (!(period > 0.0) || !std::isfinite(period)) throw ParameterError("control.t_c must be finite and > 0");
    if (!commensurate_steps(t_final, h)) throw ParameterError("grid.h must divide grid.t_final");
    if (!commensurate_steps(0.5 * period, h)) throw ParameterError("grid.h must divide control.t_c/2");
}

double envelope_objective(const OptimizationProblem& problem, const std::vector<double>& coeffs, double h) {
    const PulseProgram pulse = PulseProgram::continuous(Envelope::parametric(problem.period, coeffs));
    const Trajectory traj = integrate(problem.model, pulse, problem.coupling, problem.initial, h, problem.t_final);
    return residual_decoherence(traj);
}

OptimizationResult optimize_envelope(const OptimizationProblem& problem, const OptimizerOptions& options) {
    problem.validate();
    if (options.budget < 1) throw ParameterError("optimize budget must be >= 1");

    OptimizationResult out;
    out.search_h = choose_search_h(problem, options.search_density);
    Search search(problem, options, out.search_h, out);
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const std::size_t n = static_cast<std::size_t>(problem.dimension);
    const Point baseline(n, 0.0);

    // The baseline is the first vertex, so the best result can never be worse
    // than the linear ramp at the search grid.
    std::vector<Point> simplex{baseline};
    for (std::size_t d = 0; d < n; ++d) {
        Point v = baseline;
        v[d] = 0.5 * problem.c_max;
        simplex.push_back(v);
    }
    std::vector<double> values = search.batch(simplex);

    bool converged_for_good = false;
    while (values.size() == simplex.size() && !search.exhausted()) {
        std::vector<std::size_t> order(simplex.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
        std::vector<Point> s2;
        std::vector<double> v2;
        for (auto i : order) {
            s2.push_back(simplex[i]);
            v2.push_back(values[i]);
        }
        simplex.swap(s2);
        values.swap(v2);

        const std::size_t worst = simplex.size() - 1;
        const bool flat = std::abs(values[worst] - values[0]) <= 1e-12 * (1.0 + std::abs(values[0]));
        if (flat || diameter(simplex) <= 1e-7 * problem.c_max) {
            if (out.restarts >= options.max_restarts) {
                converged_for_good = true;
                break;
            }
            ++out.restarts;
            std::vector<Point> fresh;
            for (std::size_t d = 0; d < n; ++d) {
                Point v = simplex[0];
                const double size = (0.1 + 0.4 * unit(rng)) * problem.c_max;
                v[d] += unit(rng) < 0.5 ? -size : size;
                fresh.push_back(search.project(v));
            }
            const auto fv = search.batch(fresh);
            if (fv.size() < fresh.size()) break;
            for (std::size_t d = 0; d < n; ++d) {
                simplex[d + 1] = fresh[d];
                values[d + 1] = fv[d];
            }
            continue;
        }

        const Point c = centroid(simplex, worst);
        const Point xr = search.project(affine(c, simplex[worst], -1.0));
        const auto fr = search.one(xr);
        if (!fr) break;

        if (*fr < values[0]) {
            const Point xe = search.project(affine(c, simplex[worst], -2.0));
            const auto fe = search.one(xe);
            if (!fe) break;
            if (*fe < *fr) {
                simplex[worst] = xe;
                values[worst] = *fe;
            } else {
                simplex[worst] = xr;
                values[worst] = *fr;
            }
            continue;
        }
        if (*fr < values[worst - 1]) {
            simplex[worst] = xr;
            values[worst] = *fr;
            continue;
        }
        const bool outside = *fr < values[worst];
        const Point xc = outside ? affine(c, xr, 0.5) : affine(c, simplex[worst], 0.5);
        const auto fc = search.one(xc);
        if (!fc) break;
        if (*fc < std::min(*fr, values[worst])) {
            simplex[worst] = xc;
            values[worst] = *fc;
            continue;
        }
        std::vector<Point> shrunk;
        for (std::size_t i = 1; i < simplex.size(); ++i) shrunk.push_back(affine(simplex[0], simplex[i], 0.5));
        const auto fs = search.batch(shrunk);
        if (fs.size() < shrunk.size()) break;
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            simplex[i] = shrunk[i - 1];
            values[i] = fs[i - 1];
        }
    }
    if (!converged_for_good && search.exhausted()) out.budget_exhausted = true;

    // Re-validate at the full grid. The coarse search can misrank nearly equal
    // candidates, so keep the baseline if it wins there.
    out.baseline_objective = envelope_objective(problem, baseline, problem.h);
    if (out.log.empty()) {
        out.best_coeffs = baseline;
        out.best_objective = out.baseline_objective;
        out.fell_back_to_baseline = true;
        return out;
    }
    const bool is_baseline = std::all_of(out.best_coeffs.begin(), out.best_coeffs.end(), [](double c) { return c == 0.0; });
    const double full = is_baseline ? out.baseline_objective : envelope_objective(problem, out.best_coeffs, problem.h);
    if (full > out.baseline_objective) {
        out.best_coeffs = baseline;
        out.best_objective = out.baseline_objective;
        out.fell_back_to_baseline = true;
    } else {
        out.best_objective = full;
    }
    return out;
}

} // namespace dekohere
