#pragma once
// Spatial access functions and the named mining queries. Spatial queries go
// cover -> range spans -> exact angular filter, so results equal a full
// scan while touching only the rows under the cover. Everything is
// deterministic: fixed orderings, documented tie-breaks.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skycat/catalog.hpp"
#include "skycat/loader.hpp"

namespace skycat {

// Row/time quotas. Truncation is always reported, never silent.
struct Limits {
    std::size_t max_rows = 0;  // 0 = unlimited
    double max_seconds = 0.0;  // <= 0 = unlimited

    static Limits none() { return {}; }
    static Limits standard() { return {1000, 30.0}; }
};

template <class T>
struct QueryResult {
    std::vector<T> rows;
    bool truncated = false;
};

struct NearbyHit {
    std::uint64_t objID = 0;
    double distance = 0;  // arcmin
};

struct AsteroidHit {
    std::uint64_t objID = 0;
    double velocity = 0;  // sqrt(rowv^2 + colv^2)
};

struct MoverPair {
    std::uint64_t rId = 0;
    std::uint64_t gId = 0;
};

struct ColorCountResult {
    std::uint64_t count = 0;
    std::uint64_t rowsScanned = 0;
    std::uint64_t bytesScanned = 0;
    double elapsedSeconds = 0;
};

// All objects within r arcmin of (ra, dec), closed comparison, sorted by
// (distance, objID). Throws GeometryError when r <= 0.
QueryResult<NearbyHit> nearby_eq(const Catalog& cat, double ra, double dec,
                                 double r_arcmin, const Limits& limits = Limits::none());

// First hit of nearby_eq, or nothing.
std::optional<NearbyHit> nearest_eq(const Catalog& cat, double ra, double dec,
                                    double r_arcmin);

// Materializes every ordered pair (a, b), a != b, within radius, via
// per-object cap covers; journals the build through the loader. Returns the
// pair count. Symmetric closure holds by construction. Radius outside
// (0, kNeighborRadiusArcmin] throws GeometryError.
std::size_t build_neighbors(Loader& loader, double radius_arcmin = kNeighborRadiusArcmin);

// Unsaturated primary galaxies within r arcmin, sorted by distance.
QueryResult<NearbyHit> q1_unsaturated_galaxies(const Catalog& cat, double ra, double dec,
                                               double r_arcmin,
                                               const Limits& limits = Limits::none());

// Moving objects: rowv^2 + colv^2 in [50, 1000], both components >= 0
// (negative velocity components signal processing errors). Storage order.
QueryResult<AsteroidHit> q15_asteroids(const Catalog& cat,
                                       const Limits& limits = Limits::none());

// Streak pairs: red and green detections in the same run/camcol, adjacent
// fields, elongated (q^2 + u^2 > 0.111111 in own band), fiberMag in [6, 22]
// and faintest in own band, parentID = 0, isoA/isoB > 1.5, isoA > 2.0, pair
// chord separation < 4 arcmin, |fiberMag_r - fiberMag_g| < 2. Sorted by
// (rId, gId).
QueryResult<MoverPair> fast_movers(const Catalog& cat,
                                   const Limits& limits = Limits::none());

// Full-scan count of modelMag_r - modelMag_g > threshold, with throughput.
ColorCountResult color_count(const Catalog& cat, double threshold = 1.0);

}  // namespace skycat
