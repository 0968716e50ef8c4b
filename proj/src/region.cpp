#include "pgcubic/region.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace pgcubic {

RegionVerdict in_local_region(const LambdaPoint& x) {
    RegionVerdict v;
    if (!(x.x3 > 0.0 && x.x3 < 1.0 / 3.0)) {
        v.member = false;
        v.margin = -std::numeric_limits<double>::infinity();
        return v;
    }
    const double dplus = 1.0 + 3.0 * x.x3;
    const double dminus = 1.0 - 3.0 * x.x3;
    const double lhs = (x.x1 * x.x1) / (dplus * dplus) + (x.x2 * x.x2) / (dminus * dminus);
    v.margin = 0.25 - lhs;
    v.member = v.margin > 0.0;
    v.inconclusive = std::abs(v.margin) <= kBoundaryBand;
    return v;
}

std::array<Complex, 2> critical_points(const CubicMap& f) {
    if (!(f.a3 > 0.0)) throw std::domain_error("critical_points: requires a3 > 0");
    // 3 a3 z^2 + 2 a2 z + a1 = 0, solved in the cancellation-free form.
    const double a = 3.0 * f.a3;
    const Complex b = 2.0 * f.a2;
    const double c = f.a1;
    Complex s = std::sqrt(b * b - 4.0 * a * c);
    if (std::real(std::conj(b) * s) < 0.0) s = -s;
    const Complex q = -0.5 * (b + s);
    std::array<Complex, 2> roots{q / a, c / q};
    if (std::abs(roots[1]) < std::abs(roots[0])) std::swap(roots[0], roots[1]);
    return roots;
}

RegionVerdict local_univalence_oracle(const CubicMap& f) {
    const auto roots = critical_points(f);
    RegionVerdict v;
    v.margin = std::abs(roots[0]) - 1.0;
    v.member = v.margin > 0.0;
    v.inconclusive = std::abs(v.margin) <= kBoundaryBand;
    if (!v.member) v.witness = roots[0];
    return v;
}

namespace {

struct Pt {
    double x, y;
};

double orient(const Pt& a, const Pt& b, const Pt& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double dist2_point_segment(const Pt& p, const Pt& a, const Pt& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double vv = vx * vx + vy * vy;
    double t = vv > 0.0 ? (wx * vx + wy * vy) / vv : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = wx - t * vx, dy = wy - t * vy;
    return dx * dx + dy * dy;
}

double segment_distance(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
    const double d2 = std::min(std::min(dist2_point_segment(c, a, b), dist2_point_segment(d, a, b)),
                               std::min(dist2_point_segment(a, c, d), dist2_point_segment(b, c, d)));
    return std::sqrt(d2);
}

enum class ChordRelation { kDisjoint, kCrossing, kSuspect };

ChordRelation classify_chords(const Pt& a, const Pt& b, const Pt& c, const Pt& d, double band) {
    const double o1 = orient(a, b, c);
    const double o2 = orient(a, b, d);
    const double o3 = orient(c, d, a);
    const double o4 = orient(c, d, b);
    // Rounding error of orient() is a few ulps of (coordinate magnitude) x
    // (difference magnitude), so the degeneracy band scales with M * L.
    double mag = 0.0;
    for (const Pt* p : {&a, &b, &c, &d})
        mag = std::max(mag, std::max(std::abs(p->x), std::abs(p->y)));
    const double len = std::max({std::hypot(b.x - a.x, b.y - a.y),
                                 std::hypot(d.x - c.x, d.y - c.y),
                                 std::hypot(c.x - a.x, c.y - a.y)});
    const double eps = band * std::max(mag * len, 1e-300);
    if (std::min(std::min(std::abs(o1), std::abs(o2)), std::min(std::abs(o3), std::abs(o4))) <= eps)
        return ChordRelation::kSuspect;
    if ((o1 > 0.0) != (o2 > 0.0) && (o3 > 0.0) != (o4 > 0.0)) return ChordRelation::kCrossing;
    return ChordRelation::kDisjoint;
}

Pt chord_intersection(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
    const double o1 = orient(a, b, c);
    const double o2 = orient(a, b, d);
    const double t = o1 / (o1 - o2);  // position of the crossing along c->d
    return Pt{c.x + t * (d.x - c.x), c.y + t * (d.y - c.y)};
}

// One boundary arc theta in [lo, hi] with its endpoint images.
struct Arc {
    double lo, hi;
    Pt a, b;
};

Pt eval_pt(const CubicMap& f, double theta) {
    const Complex z = f.value(std::polar(1.0, theta));
    return Pt{z.real(), z.imag()};
}

bool boxes_disjoint(const Arc& u, const Arc& v, double pad) {
    const double ulx = std::min(u.a.x, u.b.x) - pad, uhx = std::max(u.a.x, u.b.x) + pad;
    const double uly = std::min(u.a.y, u.b.y) - pad, uhy = std::max(u.a.y, u.b.y) + pad;
    const double vlx = std::min(v.a.x, v.b.x), vhx = std::max(v.a.x, v.b.x);
    const double vly = std::min(v.a.y, v.b.y), vhy = std::max(v.a.y, v.b.y);
    return uhx < vlx || vhx < ulx || uhy < vly || vhy < uly;
}

enum class PairOutcome { kDisjoint, kCrossing, kInconclusive };

struct PairResult {
    PairOutcome outcome = PairOutcome::kDisjoint;
    Pt where{0.0, 0.0};
};

// Tests a pair of boundary arcs for a curve crossing by recursive chord
// bisection.  curvature_bound majorizes |d^2/dtheta^2 f(e^{i theta})|, so a
// chord deviates from its arc by at most curvature_bound * dtheta^2 / 8.
PairResult test_arc_pair(const CubicMap& f, Arc u, Arc v, int depth, int max_depth,
                         double curvature_bound, double band) {
    const double du = u.hi - u.lo, dv = v.hi - v.lo;
    const double sagitta =
        curvature_bound * std::max(du * du, dv * dv) / 8.0;
    if (boxes_disjoint(u, v, 2.0 * sagitta)) return {PairOutcome::kDisjoint, {}};

    const ChordRelation rel = classify_chords(u.a, u.b, v.a, v.b, band);
    if (rel == ChordRelation::kDisjoint &&
        segment_distance(u.a, u.b, v.a, v.b) > 2.0 * sagitta)
        return {PairOutcome::kDisjoint, {}};

    if (depth >= max_depth) {
        if (rel == ChordRelation::kCrossing)
            return {PairOutcome::kCrossing, chord_intersection(u.a, u.b, v.a, v.b)};
        return {PairOutcome::kInconclusive, {}};
    }

    const double um = 0.5 * (u.lo + u.hi), vm = 0.5 * (v.lo + v.hi);
    const Pt pu = eval_pt(f, um), pv = eval_pt(f, vm);
    const Arc u1{u.lo, um, u.a, pu}, u2{um, u.hi, pu, u.b};
    const Arc v1{v.lo, vm, v.a, pv}, v2{vm, v.hi, pv, v.b};

    bool saw_inconclusive = false;
    for (const Arc* su : {&u1, &u2}) {
        for (const Arc* sv : {&v1, &v2}) {
            const PairResult r =
                test_arc_pair(f, *su, *sv, depth + 1, max_depth, curvature_bound, band);
            if (r.outcome == PairOutcome::kCrossing) return r;
            if (r.outcome == PairOutcome::kInconclusive) saw_inconclusive = true;
        }
    }
    return {saw_inconclusive ? PairOutcome::kInconclusive : PairOutcome::kDisjoint, {}};
}

}  // namespace

RegionVerdict univalence_oracle(const CubicMap& f, const UnivalenceOptions& opts) {
    if (opts.n_samples < 256)
        throw std::invalid_argument("univalence_oracle: n_samples must be >= 256");
    if (!(f.a3 > 0.0)) throw std::domain_error("univalence_oracle: requires a3 > 0");

    RegionVerdict v = local_univalence_oracle(f);
    if (!v.member || v.inconclusive) return v;  // root in/near the closed disk decides

    const int n = opts.n_samples;
    const double curvature_bound = f.a1 + 4.0 * std::abs(f.a2) + 9.0 * f.a3;

    std::vector<Pt> pts(static_cast<size_t>(n));
    double lox = std::numeric_limits<double>::infinity(), loy = lox;
    double hix = -lox, hiy = -lox;
    for (int k = 0; k < n; ++k) {
        pts[static_cast<size_t>(k)] = eval_pt(f, 2.0 * M_PI * k / n);
        lox = std::min(lox, pts[static_cast<size_t>(k)].x);
        loy = std::min(loy, pts[static_cast<size_t>(k)].y);
        hix = std::max(hix, pts[static_cast<size_t>(k)].x);
        hiy = std::max(hiy, pts[static_cast<size_t>(k)].y);
    }

    // Bucket segment bounding boxes on a uniform grid to prune the O(n^2)
    // pair test; the pad accounts for curve bulge beyond the chord.
    const double dtheta = 2.0 * M_PI / n;
    const double pad = curvature_bound * dtheta * dtheta / 8.0 + 1e-9;
    const int g = std::max(8, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
    const double spanx = std::max(hix - lox, 1e-300), spany = std::max(hiy - loy, 1e-300);
    std::vector<std::vector<int32_t>> cells(static_cast<size_t>(g) * static_cast<size_t>(g));
    auto cell_range = [&](double lo, double span, double v0, double v1) {
        int c0 = static_cast<int>(std::floor((std::min(v0, v1) - pad - lo) / span * g));
        int c1 = static_cast<int>(std::floor((std::max(v0, v1) + pad - lo) / span * g));
        return std::pair<int, int>{std::clamp(c0, 0, g - 1), std::clamp(c1, 0, g - 1)};
    };
    for (int i = 0; i < n; ++i) {
        const Pt& a = pts[static_cast<size_t>(i)];
        const Pt& b = pts[static_cast<size_t>((i + 1) % n)];
        const auto [cx0, cx1] = cell_range(lox, spanx, a.x, b.x);
        const auto [cy0, cy1] = cell_range(loy, spany, a.y, b.y);
        for (int cx = cx0; cx <= cx1; ++cx)
            for (int cy = cy0; cy <= cy1; ++cy)
                cells[static_cast<size_t>(cx) * g + cy].push_back(i);
    }

    std::vector<uint64_t> pairs;
    for (const auto& cell : cells) {
        for (size_t s = 0; s < cell.size(); ++s) {
            for (size_t t = s + 1; t < cell.size(); ++t) {
                int i = cell[s], j = cell[t];
                if (i > j) std::swap(i, j);
                const int gap = std::min(j - i, n - (j - i));
                if (gap <= 1) continue;  // adjacent segments share an endpoint
                pairs.push_back((static_cast<uint64_t>(i) << 32) | static_cast<uint32_t>(j));
            }
        }
    }
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    bool inconclusive = false;
    for (const uint64_t key : pairs) {
        const int i = static_cast<int>(key >> 32);
        const int j = static_cast<int>(key & 0xffffffffu);
        const Arc u{2.0 * M_PI * i / n, 2.0 * M_PI * (i + 1) / n, pts[static_cast<size_t>(i)],
                    pts[static_cast<size_t>((i + 1) % n)]};
        const Arc w{2.0 * M_PI * j / n, 2.0 * M_PI * (j + 1) / n, pts[static_cast<size_t>(j)],
                    pts[static_cast<size_t>((j + 1) % n)]};
        const PairResult r =
            test_arc_pair(f, u, w, 0, opts.max_refinements, curvature_bound, opts.orientation_band);
        if (r.outcome == PairOutcome::kCrossing) {
            v.member = false;
            v.margin = -1.0;
            v.witness = Complex(r.where.x, r.where.y);
            v.inconclusive = false;
            return v;
        }
        if (r.outcome == PairOutcome::kInconclusive) inconclusive = true;
    }
    if (inconclusive) v.inconclusive = true;
    return v;
}

RegionVerdict univalence_oracle(const CubicMap& f, int n_samples) {
    UnivalenceOptions opts;
    opts.n_samples = n_samples;
    return univalence_oracle(f, opts);
}

}  // namespace pgcubic
