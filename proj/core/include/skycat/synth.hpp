#pragma once
// Seeded synthetic sky generator. Produces photo/field/plate/specObj/
// specLine row sets with documented distributions, either in memory or as
// loader-ready CSV files. Output is a pure function of the profile, so
// fixtures and golden files are reproducible byte for byte.

#include <cstdint>
#include <string>
#include <vector>

#include "skycat/catalog.hpp"

namespace skycat {

enum class DensityProfile {
    uniform,    // area-correct over the whole sphere
    clustered,  // Gaussian blobs around uniform cluster centers
    patch,      // uniform within one cap (survey-like surface density)
};

DensityProfile density_from_name(std::string_view name);  // throws ParseError
std::string_view density_name(DensityProfile d);

// Distributions, in sampling order per object:
//  - position: per the density profile (patch: area-correct within the cap)
//  - secondary_fraction of rows re-observe an earlier row's position under a
//    fresh field; they are never primary. Fresh rows are primary with
//    probability primary_fraction / (1 - secondary_fraction), so the overall
//    primary rate lands on primary_fraction.
//  - flags: ok_run / saturated / bright / blended drawn independently;
//    child set iff a parent was assigned (child_fraction of rows pick a
//    random earlier object as parentID)
//  - type: star .45 / galaxy .45 / trail .05 / defect .05
//  - modelMag: normal per band around (21.0, 20.2, 19.8, 19.6, 19.4), sd 1.2;
//    modelMagErr |normal(0.05, 0.02)| + 0.005; fiberMag = modelMag +
//    normal(0.35, 0.12)
//  - shape: q, u normal(0, 0.08) except trails normal(0, 0.45);
//    isoB |normal(1.6, 0.6)| + 0.2, isoA = isoB * (1 + |normal(0, 0.9)|)
//  - velocities: mover_fraction of rows get rowv, colv = uniform(5, 40) with
//    random signs; the rest normal(0, 0.05) pixel jitter
//  - spectro_fraction of rows get a SpecObj (bestObjID set, z |normal(.1,.08)|),
//    packed spectra_per_plate to a plate, 5..20 lines per spectrum
struct SynthProfile {
    std::uint64_t n = 0;
    std::uint64_t seed = 1;
    DensityProfile density = DensityProfile::uniform;

    std::size_t objects_per_field = 200;
    double secondary_fraction = 0.11;
    double primary_fraction = 0.80;
    double ok_run_fraction = 0.97;
    double saturated_fraction = 0.05;
    double bright_fraction = 0.10;
    double blended_fraction = 0.08;
    double child_fraction = 0.05;
    double mover_fraction = 0.02;
    double spectro_fraction = 0.01;
    std::size_t spectra_per_plate = 600;

    int cluster_count = 64;            // clustered
    double cluster_sigma_deg = 2.0;    // clustered
    EquatorialCoord patch_center{185.0, -0.5};  // patch
    double patch_radius_arcmin = 25.0;          // patch

    int index_depth = kDefaultIndexDepth;  // for derived htmID
};

struct SynthSky {
    std::vector<FieldRow> fields;
    std::vector<PhotoObj> photo;
    std::vector<PlateRow> plates;
    std::vector<SpecObjRow> spec_objs;
    std::vector<SpecLineRow> spec_lines;
};

SynthSky generate_sky(const SynthProfile& profile);

// Writes photo.csv, field.csv, plate.csv, specObj.csv, specLine.csv under
// dir (created if missing), headers matching the loader's expectations.
// n = 0 yields header-only files.
void write_csv(const SynthSky& sky, const std::string& dir);

// Appends the sky straight into a catalog (bypassing the loader) with
// stamps 1..N in table order: fields, photo, plates, specObjs, specLines.
void populate(Catalog& cat, const SynthSky& sky);

}  // namespace skycat
