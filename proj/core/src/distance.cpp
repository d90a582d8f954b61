#include "scenagg/distance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "scenagg/parallel.hpp"

namespace scenagg {

void DistanceSpec::validate() const {
    switch (kind) {
        case Kind::minkowski:
            if (!(p >= 1.0)) fail("BadSpec", "Minkowski order must be >= 1");
            break;
        case Kind::dtw:
            if (window && *window < 0) fail("BadSpec", "DTW window must be nonnegative");
            break;
        case Kind::mjc:
            if (phi && !(*phi >= 0.0)) fail("BadSpec", "MJC phi must be nonnegative");
            break;
        case Kind::sbd: break;
    }
}

std::string DistanceSpec::describe() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::minkowski:
            if (std::isinf(p)) out << "minkowski(inf)";
            else out << "minkowski(" << p << ")";
            break;
        case Kind::dtw:
            out << "dtw(";
            if (window) out << *window;
            out << ")";
            break;
        case Kind::mjc:
            out << "mjc(";
            if (phi) out << *phi;
            else out << "auto";
            out << ")";
            break;
        case Kind::sbd: out << "sbd"; break;
    }
    return out.str();
}

DistanceSpec distance_spec_from_string(const std::string& name) {
    if (name == "euclidean" || name == "minkowski2") return DistanceSpec::euclidean();
    if (name == "manhattan" || name == "minkowski1") return DistanceSpec::minkowski(1.0);
    if (name == "chebyshev") return DistanceSpec::chebyshev();
    if (name == "dtw") return DistanceSpec::dtw();
    if (name == "mjc") return DistanceSpec::mjc();
    if (name == "sbd") return DistanceSpec::sbd();
    fail("BadSpec", "unknown distance '" + name + "'");
}

double minkowski_distance(std::span<const double> x, std::span<const double> y, double p) {
    if (x.size() != y.size()) fail("LengthMismatch", "vectors must have equal length");
    if (!(p >= 1.0)) fail("BadSpec", "Minkowski order must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
        return m;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = x[i] - y[i];
            s += d * d;
        }
        return std::sqrt(s);
    }
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
        return s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i] - y[i]), p);
    return std::pow(s, 1.0 / p);
}

double dtw_distance(std::span<const double> x, std::span<const double> y,
                    std::optional<int> window) {
    const std::size_t n = x.size(), m = y.size();
    if (n == 0 || m == 0) fail("EmptyInput", "DTW requires nonempty series");
    const std::size_t gap = n > m ? n - m : m - n;
    if (window && static_cast<std::size_t>(*window) < gap)
        fail("InfeasibleWindow", "window is narrower than the length difference");

    const double inf = std::numeric_limits<double>::infinity();
    // Two-row dynamic program over the cumulative squared-difference cost.
    std::vector<double> prev(m, inf), cur(m, inf);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t jlo = 0, jhi = m - 1;
        if (window) {
            const long w = *window;
            const long lo = static_cast<long>(i) - w;
            const long hi = static_cast<long>(i) + w;
            jlo = lo > 0 ? static_cast<std::size_t>(lo) : 0;
            jhi = hi < static_cast<long>(m - 1) ? static_cast<std::size_t>(hi) : m - 1;
        }
        std::fill(cur.begin(), cur.end(), inf);
        for (std::size_t j = jlo; j <= jhi; ++j) {
            const double d = x[i] - y[j];
            double best;
            if (i == 0 && j == 0) best = 0.0;
            else if (i == 0) best = cur[j - 1];
            else if (j == 0) best = prev[j];
            else best = std::min({prev[j - 1], prev[j], cur[j - 1]});
            cur[j] = d * d + best;
        }
        prev.swap(cur);
    }
    return std::sqrt(prev[m - 1]);
}

namespace {

// One directed MJC pass: alternately jump between the series, always from
// the next unvisited point, accumulating the cheapest timing+amplitude
// jump cost until either series is exhausted.
double mjc_directed(std::span<const double> x, std::span<const double> y, double phi) {
    std::size_t tx = 0, ty = 0;
    const std::span<const double>* from = &x;
    const std::span<const double>* to = &y;
    std::size_t* tfrom = &tx;
    std::size_t* tto = &ty;
    double cost = 0.0;
    while (tx < x.size() && ty < y.size()) {
        const double a = (*from)[*tfrom];
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_step = 0;
        for (std::size_t step = 0; *tto + step < to->size(); ++step) {
            const double tpen = phi * static_cast<double>(step);
            const double tpen2 = tpen * tpen;
            if (tpen2 >= best) break;  // timing penalty alone already worse
            const double dv = a - (*to)[*tto + step];
            const double c = tpen2 + dv * dv;
            if (c < best) {
                best = c;
                best_step = step;
            }
        }
        cost += best;
        *tto += best_step + 1;
        *tfrom += 1;
        std::swap(from, to);
        std::swap(tfrom, tto);
    }
    return cost;
}

double mjc_default_phi(std::span<const double> x, std::span<const double> y) {
    double mean = 0.0;
    const std::size_t n = x.size() + y.size();
    for (double v : x) mean += v;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const std::size_t len = std::max(x.size(), y.size());
    return 4.0 * std::sqrt(var) / static_cast<double>(len);
}

}  // namespace

double mjc_distance(std::span<const double> x, std::span<const double> y,
                    std::optional<double> phi) {
    if (x.empty() || y.empty()) fail("EmptyInput", "MJC requires nonempty series");
    if (phi && !(*phi >= 0.0)) fail("BadSpec", "MJC phi must be nonnegative");
    const double penalty = phi ? *phi : mjc_default_phi(x, y);
    return std::min(mjc_directed(x, y, penalty), mjc_directed(y, x, penalty));
}

double sbd_distance(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) fail("EmptyInput", "SBD requires nonempty series");
    double nx = 0.0, ny = 0.0;
    for (double v : x) nx += v * v;
    for (double v : y) ny += v * v;
    if (nx <= 0.0 || ny <= 0.0) fail("ZeroNorm", "SBD requires vectors with positive norm");
    const double denom = std::sqrt(nx) * std::sqrt(ny);

    const long n = static_cast<long>(x.size());
    const long m = static_cast<long>(y.size());
    double best = -std::numeric_limits<double>::infinity();
    // Full cross-correlation with zero padding over shifts -(m-1)..(n-1).
    for (long s = -(m - 1); s <= n - 1; ++s) {
        double cc = 0.0;
        const long jlo = std::max(0L, -s);
        const long jhi = std::min(m - 1, n - 1 - s);
        for (long j = jlo; j <= jhi; ++j) cc += x[static_cast<std::size_t>(j + s)] * y[static_cast<std::size_t>(j)];
        best = std::max(best, cc / denom);
    }
    return 1.0 - best;
}

double distance(const DistanceSpec& spec, std::span<const double> x, std::span<const double> y) {
    spec.validate();
    switch (spec.kind) {
        case DistanceSpec::Kind::minkowski: return minkowski_distance(x, y, spec.p);
        case DistanceSpec::Kind::dtw: return dtw_distance(x, y, spec.window);
        case DistanceSpec::Kind::mjc: return mjc_distance(x, y, spec.phi);
        case DistanceSpec::Kind::sbd: return sbd_distance(x, y);
    }
    fail("BadSpec", "unknown distance kind");
}

Matrix distance_matrix(const ScenarioSet& s, const DistanceSpec& spec, int workers) {
    const std::size_t n = s.size();
    Matrix d(n, n, 0.0);
    parallel_for(n, workers, [&](std::size_t i) {
        const Scenario& a = s.scenario(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            d(i, j) = distance(spec, a.features, s.scenario(j).features);
        }
    });
    // Mirror the upper triangle; symmetry is then exact by construction.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) d(i, j) = d(j, i);
    return d;
}

}  // namespace scenagg
