#include "skycat/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "skycat/errors.hpp"
#include "skycat/htm.hpp"

namespace skycat {

namespace {

// mt19937_64 is bit-identical across implementations; the distribution
// helpers are hand-rolled because the standard library's distributions are
// not specified to produce the same stream everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * u01(); }
    bool chance(double p) { return u01() < p; }

    std::size_t index(std::size_t n) {
        const auto i = static_cast<std::size_t>(u01() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    double normal(double mean = 0.0, double sd = 1.0) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sd * spare_;
        }
        double u1 = u01();
        while (u1 <= 0.0) u1 = u01();
        const double u2 = u01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return mean + sd * r * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Right-handed orthonormal frame with e3 = c.
struct Frame {
    UnitVector e1, e2, e3;
};

Frame frame_at(const UnitVector& c) {
    const UnitVector helper = std::fabs(c.z) < 0.9 ? UnitVector{0, 0, 1} : UnitVector{1, 0, 0};
    const UnitVector e1 = normalized(cross(helper, c));
    return {e1, cross(c, e1), c};
}

UnitVector uniform_on_sphere(Rng& rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

// Area-correct sample within the cap: z uniform in [cos r, 1] about the
// axis, azimuth uniform.
UnitVector uniform_in_cap(Rng& rng, const Frame& f, double radius_arcmin) {
    const double cz = std::cos(radius_arcmin / kArcminPerRad);
    const double z = rng.uniform(cz, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * kPi);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double lx = s * std::cos(phi), ly = s * std::sin(phi);
    return {lx * f.e1.x + ly * f.e2.x + z * f.e3.x,
            lx * f.e1.y + ly * f.e2.y + z * f.e3.y,
            lx * f.e1.z + ly * f.e2.z + z * f.e3.z};
}

UnitVector gaussian_blob(Rng& rng, const Frame& f, double sigma_rad) {
    const double dx = rng.normal(0.0, sigma_rad);
    const double dy = rng.normal(0.0, sigma_rad);
    return normalized({f.e3.x + dx * f.e1.x + dy * f.e2.x,
                       f.e3.y + dx * f.e1.y + dy * f.e2.y,
                       f.e3.z + dx * f.e1.z + dy * f.e2.z});
}

constexpr std::array<double, kBandCount> kMagMeans{21.0, 20.2, 19.8, 19.6, 19.4};

struct FieldScheme {
    std::size_t count = 0;

    FieldRow row(std::size_t idx) const {
        FieldRow f;
        f.run = static_cast<std::int32_t>(752 + idx / 72);
        f.camcol = static_cast<std::int32_t>(1 + (idx / 12) % 6);
        f.field = static_cast<std::int32_t>(11 + idx % 12);
        f.fieldID = (static_cast<std::uint64_t>(f.run) << 20) |
                    (static_cast<std::uint64_t>(f.camcol) << 16) |
                    static_cast<std::uint64_t>(f.field);
        return f;
    }
};

}  // namespace

DensityProfile density_from_name(std::string_view name) {
    if (name == "uniform") return DensityProfile::uniform;
    if (name == "clustered") return DensityProfile::clustered;
    if (name == "patch") return DensityProfile::patch;
    throw ParseError("unknown density profile: " + std::string(name));
}

std::string_view density_name(DensityProfile d) {
    switch (d) {
        case DensityProfile::uniform: return "uniform";
        case DensityProfile::clustered: return "clustered";
        case DensityProfile::patch: return "patch";
    }
    return "uniform";
}

SynthSky generate_sky(const SynthProfile& profile) {
    if (profile.index_depth < 0 || profile.index_depth > kMaxHtmDepth) {
        throw DepthLimitError("synth index depth out of range");
    }
    Rng rng(profile.seed);
    SynthSky sky;

    FieldScheme scheme;
    const std::size_t per_field = std::max<std::size_t>(1, profile.objects_per_field);
    scheme.count = profile.n == 0 ? 0 : (profile.n + per_field - 1) / per_field;
    sky.fields.reserve(scheme.count);
    for (std::size_t i = 0; i < scheme.count; ++i) sky.fields.push_back(scheme.row(i));

    std::vector<Frame> clusters;
    if (profile.density == DensityProfile::clustered) {
        clusters.reserve(static_cast<std::size_t>(profile.cluster_count));
        for (int i = 0; i < profile.cluster_count; ++i) {
            clusters.push_back(frame_at(uniform_on_sphere(rng)));
        }
    }
    const Frame patch = frame_at(eq_to_vec(profile.patch_center));
    const double sigma_rad = profile.cluster_sigma_deg / kDegPerRad;
    const double p_fresh_primary =
        profile.secondary_fraction < 1.0
            ? profile.primary_fraction / (1.0 - profile.secondary_fraction)
            : 0.0;

    sky.photo.reserve(profile.n);
    std::vector<std::size_t> bases;  // rows whose positions secondaries may reuse

    for (std::uint64_t i = 0; i < profile.n; ++i) {
        PhotoObj o;
        o.objID = i + 1;

        const bool secondary =
            !bases.empty() && rng.chance(profile.secondary_fraction);
        if (secondary) {
            const PhotoObj& base = sky.photo[bases[rng.index(bases.size())]];
            o.ra = base.ra;
            o.dec = base.dec;
        } else {
            UnitVector v{};
            switch (profile.density) {
                case DensityProfile::uniform: v = uniform_on_sphere(rng); break;
                case DensityProfile::clustered:
                    v = gaussian_blob(rng, clusters[rng.index(clusters.size())], sigma_rad);
                    break;
                case DensityProfile::patch:
                    v = uniform_in_cap(rng, patch, profile.patch_radius_arcmin);
                    break;
            }
            const EquatorialCoord eq = vec_to_eq(v);
            o.ra = eq.ra;
            o.dec = eq.dec;
        }
        // Derived columns from the stored (ra, dec) so validate() agrees
        // bit for bit.
        const UnitVector unit = eq_to_vec(o.ra, o.dec);
        o.cx = unit.x;
        o.cy = unit.y;
        o.cz = unit.z;
        o.htmID = lookup_id(unit, profile.index_depth).value();

        const FieldRow f = scheme.row(rng.index(scheme.count));
        o.fieldID = f.fieldID;
        o.run = f.run;
        o.camcol = f.camcol;
        o.field = f.field;

        std::uint64_t flags = 0;
        if (!secondary && rng.chance(p_fresh_primary)) flags |= 1ull << 0;  // primary
        if (rng.chance(profile.ok_run_fraction)) flags |= 1ull << 1;        // ok_run
        if (rng.chance(profile.saturated_fraction)) flags |= 1ull << 2;     // saturated
        if (rng.chance(profile.bright_fraction)) flags |= 1ull << 3;        // bright
        if (rng.chance(profile.blended_fraction)) flags |= 1ull << 4;       // blended

        if (i > 0 && rng.chance(profile.child_fraction)) {
            o.parentID = sky.photo[rng.index(sky.photo.size())].objID;
            flags |= 1ull << 5;  // child
        }
        o.flags = flags;

        const double tdraw = rng.u01();
        o.type = tdraw < 0.45   ? ObjType::star
                 : tdraw < 0.90 ? ObjType::galaxy
                 : tdraw < 0.95 ? ObjType::trail
                                : ObjType::defect;

        for (int b = 0; b < kBandCount; ++b) {
            o.modelMag[b] = rng.normal(kMagMeans[b], 1.2);
            o.modelMagErr[b] = std::fabs(rng.normal(0.05, 0.02)) + 0.005;
            o.fiberMag[b] = o.modelMag[b] + rng.normal(0.35, 0.12);
        }
        const double shape_sd = o.type == ObjType::trail ? 0.45 : 0.08;
        for (int b = 0; b < kBandCount; ++b) {
            o.q[b] = rng.normal(0.0, shape_sd);
            o.u[b] = rng.normal(0.0, shape_sd);
        }
        for (int b = 0; b < kBandCount; ++b) {
            o.isoB[b] = std::fabs(rng.normal(1.6, 0.6)) + 0.2;
            o.isoA[b] = o.isoB[b] * (1.0 + std::fabs(rng.normal(0.0, 0.9)));
        }

        if (rng.chance(profile.mover_fraction)) {
            o.rowv = rng.uniform(5.0, 40.0) * (rng.chance(0.5) ? 1.0 : -1.0);
            o.colv = rng.uniform(5.0, 40.0) * (rng.chance(0.5) ? 1.0 : -1.0);
        } else {
            o.rowv = rng.normal(0.0, 0.05);
            o.colv = rng.normal(0.0, 0.05);
        }

        if (rng.chance(profile.spectro_fraction)) {
            SpecObjRow s;
            s.specObjID = sky.spec_objs.size() + 1;
            s.plateID = sky.spec_objs.size() / profile.spectra_per_plate + 1;
            s.bestObjID = o.objID;
            s.z = std::fabs(rng.normal(0.1, 0.08));
            sky.spec_objs.push_back(s);
            const std::size_t lines = 5 + static_cast<std::size_t>(rng.u01() * 16.0);
            for (std::size_t k = 0; k < lines; ++k) {
                SpecLineRow l;
                l.lineID = sky.spec_lines.size() + 1;
                l.specObjID = s.specObjID;
                l.wavelength = rng.uniform(3800.0, 9200.0);
                l.ew = rng.normal(5.0, 2.0);
                sky.spec_lines.push_back(l);
            }
        }

        if (!secondary) bases.push_back(sky.photo.size());
        sky.photo.push_back(o);
    }

    const std::size_t plate_count = sky.spec_objs.empty()
                                        ? 0
                                        : (sky.spec_objs.size() + profile.spectra_per_plate - 1) /
                                              profile.spectra_per_plate;
    sky.plates.reserve(plate_count);
    for (std::size_t i = 0; i < plate_count; ++i) sky.plates.push_back({i + 1, 0});

    return sky;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& dir, const char* name, TableId t) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / name).string());
    const auto cols = Catalog::csv_columns(t);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    return out;
}

}  // namespace

void write_csv(const SynthSky& sky, const std::string& dir) {
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root);

    {
        auto out = open_csv(root, "photo.csv", TableId::photo);
        for (const PhotoObj& o : sky.photo) {
            out << o.objID << ',' << o.fieldID << ',' << o.run << ',' << o.camcol << ','
                << o.field << ',' << double_to_string(o.ra) << ',' << double_to_string(o.dec)
                << ',' << obj_type_name(o.type) << ',' << o.flags << ',' << o.parentID << ','
                << double_to_string(o.rowv) << ',' << double_to_string(o.colv);
            for (const auto* fam :
                 {&o.modelMag, &o.modelMagErr, &o.fiberMag, &o.q, &o.u, &o.isoA, &o.isoB}) {
                for (double v : *fam) out << ',' << double_to_string(v);
            }
            out << '\n';
        }
    }
    {
        auto out = open_csv(root, "field.csv", TableId::field);
        for (const FieldRow& f : sky.fields) {
            out << f.fieldID << ',' << f.run << ',' << f.camcol << ',' << f.field << '\n';
        }
    }
    {
        auto out = open_csv(root, "plate.csv", TableId::plate);
        for (const PlateRow& p : sky.plates) out << p.plateID << '\n';
    }
    {
        auto out = open_csv(root, "specObj.csv", TableId::spec_obj);
        for (const SpecObjRow& s : sky.spec_objs) {
            out << s.specObjID << ',' << s.plateID << ',' << s.bestObjID << ','
                << double_to_string(s.z) << '\n';
        }
    }
    {
        auto out = open_csv(root, "specLine.csv", TableId::spec_line);
        for (const SpecLineRow& l : sky.spec_lines) {
            out << l.lineID << ',' << l.specObjID << ',' << double_to_string(l.wavelength)
                << ',' << double_to_string(l.ew) << '\n';
        }
    }
}

void populate(Catalog& cat, const SynthSky& sky) {
    std::uint64_t stamp = 1;
    auto stamped = [&stamp](auto rows) {
        for (auto& r : rows) r.loadStamp = stamp++;
        return rows;
    };
    cat.append_fields(stamped(sky.fields));
    {
        std::vector<PhotoObj> rows = sky.photo;
        for (auto& r : rows) {
            // Re-derive at the catalog's own depth; the profile's depth may
            // differ from the target catalog's.
            r.htmID = lookup_id({r.cx, r.cy, r.cz}, cat.index_depth()).value();
            r.loadStamp = stamp++;
        }
        cat.append_photo(rows);
    }
    cat.append_plates(stamped(sky.plates));
    cat.append_spec_objs(stamped(sky.spec_objs));
    cat.append_spec_lines(stamped(sky.spec_lines));
}

}  // namespace skycat
