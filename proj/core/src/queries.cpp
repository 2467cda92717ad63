#include "skycat/queries.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <utility>

#include "skycat/errors.hpp"
#include "skycat/region.hpp"

namespace skycat {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Time quota, polled every few thousand rows to keep the check off the
// per-row path.
class Deadline {
public:
    explicit Deadline(double max_seconds) : enabled_(max_seconds > 0) {
        if (enabled_) {
            end_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(max_seconds));
        }
    }

    bool poll(std::size_t counter) {
        return enabled_ && (counter & 0xFFF) == 0 && Clock::now() >= end_;
    }

private:
    bool enabled_;
    Clock::time_point end_{};
};

bool hit_order(const NearbyHit& a, const NearbyHit& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.objID < b.objID;
}

// Shared cap scan: cover -> spans -> exact closed arc test -> extra
// predicate -> sort by (distance, objID) -> row quota.
template <class Keep>
QueryResult<NearbyHit> cap_scan(const Catalog& cat, double ra, double dec,
                                double r_arcmin, const Limits& limits, Keep keep) {
    const Cap cap = make_cap({ra, dec}, r_arcmin);
    const HtmRangeSet rs = cover(cap, cat.index_depth());
    const PhotoColumns& p = cat.photo();

    QueryResult<NearbyHit> out;
    Deadline deadline(limits.max_seconds);
    std::size_t seen = 0;
    for (const auto& [begin, end] : cat.range_query_spans(rs)) {
        for (std::size_t i = begin; i < end; ++i) {
            if (deadline.poll(++seen)) {
                out.truncated = true;
                goto scanned;
            }
            const double d = arc_angle_arcmin(cap.axis, {p.cx[i], p.cy[i], p.cz[i]});
            if (d <= r_arcmin && keep(i)) out.rows.push_back({p.objID[i], d});
        }
    }
scanned:
    std::sort(out.rows.begin(), out.rows.end(), hit_order);
    if (limits.max_rows > 0 && out.rows.size() > limits.max_rows) {
        out.rows.resize(limits.max_rows);
        out.truncated = true;
    }
    return out;
}

}  // namespace

QueryResult<NearbyHit> nearby_eq(const Catalog& cat, double ra, double dec,
                                 double r_arcmin, const Limits& limits) {
    return cap_scan(cat, ra, dec, r_arcmin, limits, [](std::size_t) { return true; });
}

std::optional<NearbyHit> nearest_eq(const Catalog& cat, double ra, double dec,
                                    double r_arcmin) {
    auto res = nearby_eq(cat, ra, dec, r_arcmin, Limits::none());
    if (res.rows.empty()) return std::nullopt;
    return res.rows.front();
}

std::size_t build_neighbors(Loader& loader, double radius_arcmin) {
    if (!(radius_arcmin > 0) || radius_arcmin > kNeighborRadiusArcmin) {
        throw GeometryError("neighbors radius must be in (0, 0.5] arcmin");
    }
    const Catalog& cat = loader.catalog();
    const PhotoColumns& p = cat.photo();
    const std::size_t n = p.size();

    std::vector<NeighborRow> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const UnitVector c{p.cx[i], p.cy[i], p.cz[i]};
        const Cap cap{c, radius_arcmin};
        const HtmRangeSet rs = cover(cap, cat.index_depth());
        for (const auto& [begin, end] : cat.range_query_spans(rs)) {
            for (std::size_t j = begin; j < end; ++j) {
                if (j == i) continue;
                const double d = arc_angle_arcmin(c, {p.cx[j], p.cy[j], p.cz[j]});
                if (d <= radius_arcmin) rows.push_back({p.objID[i], p.objID[j], d, 0});
            }
        }
    }
    const std::size_t count = rows.size();
    loader.insert_neighbors(std::move(rows));
    return count;
}

QueryResult<NearbyHit> q1_unsaturated_galaxies(const Catalog& cat, double ra, double dec,
                                               double r_arcmin, const Limits& limits) {
    const std::uint64_t saturated = cat.flag_mask("saturated");
    const PhotoColumns& p = cat.photo();
    return cap_scan(cat, ra, dec, r_arcmin, limits, [&](std::size_t i) {
        return cat.view_pass(View::galaxy, i) && (p.flags[i] & saturated) == 0;
    });
}

QueryResult<AsteroidHit> q15_asteroids(const Catalog& cat, const Limits& limits) {
    const PhotoColumns& p = cat.photo();
    QueryResult<AsteroidHit> out;
    Deadline deadline(limits.max_seconds);
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (deadline.poll(i + 1)) {
            out.truncated = true;
            break;
        }
        const double v2 = p.rowv[i] * p.rowv[i] + p.colv[i] * p.colv[i];
        // Negative velocity components flag processing problems, not motion.
        if (v2 >= 50.0 && v2 <= 1000.0 && p.rowv[i] >= 0.0 && p.colv[i] >= 0.0) {
            if (limits.max_rows > 0 && out.rows.size() == limits.max_rows) {
                out.truncated = true;
                break;
            }
            out.rows.push_back({p.objID[i], std::sqrt(v2)});
        }
    }
    return out;
}

namespace {

// One detection passing the single-band streak tests in band b: elongated
// (q^2 + u^2 > 0.111111), fiberMag in [6, 22] and strictly the faintest of
// the five bands, top-level (parentID = 0), isoA/isoB > 1.5, isoA > 2.0.
bool streak_candidate(const PhotoColumns& p, std::size_t i, int b) {
    if (p.parentID[i] != 0) return false;
    const double fm = p.fiberMag[b][i];
    if (!(fm >= 6.0 && fm <= 22.0)) return false;
    for (int o = 0; o < kBandCount; ++o) {
        if (o != b && !(fm < p.fiberMag[o][i])) return false;
    }
    if (!(p.q[b][i] * p.q[b][i] + p.u[b][i] * p.u[b][i] > 0.111111)) return false;
    if (!(p.isoA[b][i] > 1.5 * p.isoB[b][i])) return false;
    return p.isoA[b][i] > 2.0;
}

}  // namespace

QueryResult<MoverPair> fast_movers(const Catalog& cat, const Limits& limits) {
    const PhotoColumns& p = cat.photo();
    constexpr int R = kBandR;
    constexpr int G = kBandG;

    // Group candidates by (run, camcol); greens sorted by field for the
    // adjacent-field probe.
    struct Group {
        std::vector<std::size_t> red, green;
    };
    std::map<std::pair<std::int32_t, std::int32_t>, Group> groups;
    Deadline deadline(limits.max_seconds);
    QueryResult<MoverPair> out;
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (deadline.poll(i + 1)) {
            out.truncated = true;
            return out;
        }
        const bool red = streak_candidate(p, i, R);
        const bool green = streak_candidate(p, i, G);
        if (!red && !green) continue;
        Group& g = groups[{p.run[i], p.camcol[i]}];
        if (red) g.red.push_back(i);
        if (green) g.green.push_back(i);
    }

    std::size_t steps = 0;
    for (auto& [key, g] : groups) {
        auto by_field = [&](std::size_t a, std::size_t b) { return p.field[a] < p.field[b]; };
        std::sort(g.green.begin(), g.green.end(), by_field);
        for (std::size_t ri : g.red) {
            // Greens within one field of the red detection.
            auto lo = std::lower_bound(g.green.begin(), g.green.end(), p.field[ri] - 1,
                                       [&](std::size_t a, std::int32_t f) { return p.field[a] < f; });
            for (auto it = lo; it != g.green.end() && p.field[*it] <= p.field[ri] + 1; ++it) {
                const std::size_t gi = *it;
                if (deadline.poll(++steps)) {
                    out.truncated = true;
                    goto paired;
                }
                const double dx = p.cx[ri] - p.cx[gi];
                const double dy = p.cy[ri] - p.cy[gi];
                const double dz = p.cz[ri] - p.cz[gi];
                if (!(std::sqrt(dx * dx + dy * dy + dz * dz) * kArcminPerRad < 4.0)) continue;
                if (!(std::fabs(p.fiberMag[R][ri] - p.fiberMag[G][gi]) < 2.0)) continue;
                out.rows.push_back({p.objID[ri], p.objID[gi]});
            }
        }
    }
paired:
    std::sort(out.rows.begin(), out.rows.end(), [](const MoverPair& a, const MoverPair& b) {
        if (a.rId != b.rId) return a.rId < b.rId;
        return a.gId < b.gId;
    });
    if (limits.max_rows > 0 && out.rows.size() > limits.max_rows) {
        out.rows.resize(limits.max_rows);
        out.truncated = true;
    }
    return out;
}

ColorCountResult color_count(const Catalog& cat, double threshold) {
    const PhotoColumns& p = cat.photo();
    constexpr int R = kBandR;
    constexpr int G = kBandG;
    const double* mr = p.modelMag[R].data();
    const double* mg = p.modelMag[G].data();
    const std::size_t n = p.size();

    const auto t0 = Clock::now();
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        count += (mr[i] - mg[i] > threshold) ? 1 : 0;
    }
    ColorCountResult res;
    res.count = count;
    res.rowsScanned = n;
    res.bytesScanned = static_cast<std::uint64_t>(n) * 2 * sizeof(double);
    res.elapsedSeconds = seconds_since(t0);
    return res;
}

}  // namespace skycat
