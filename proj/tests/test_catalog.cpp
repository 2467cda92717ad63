#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "skycat/catalog.hpp"
#include "skycat/errors.hpp"
#include "skycat/region.hpp"
#include "skycat/synth.hpp"

using namespace skycat;

namespace {

// Scratch file that cleans up after itself.
struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const char* stem) {
        path = std::filesystem::temp_directory_path() /
               (std::string(stem) + "-" + std::to_string(::getpid()) + ".scat");
    }
    ~TempFile() { std::filesystem::remove(path); }
};

std::vector<char> slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::vector<char>(std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>());
}

void spit(const std::filesystem::path& p, const std::vector<char>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Catalog synth_catalog(std::uint64_t n, std::uint64_t seed, int depth = 8) {
    SynthProfile prof;
    prof.n = n;
    prof.seed = seed;
    prof.index_depth = depth;
    Catalog cat(depth);
    populate(cat, generate_sky(prof));
    return cat;
}

}  // namespace

TEST_CASE("flag dictionary: shipped bits and composition") {
    const FlagDictionary d = FlagDictionary::standard();
    CHECK(d.mask("primary") == 1ull << 0);
    CHECK(d.mask("ok_run") == 1ull << 1);
    CHECK(d.mask("saturated") == 1ull << 2);
    CHECK(d.mask("bright") == 1ull << 3);
    CHECK(d.mask("blended") == 1ull << 4);
    CHECK(d.mask("child") == 1ull << 5);
    CHECK((d.mask("primary") | d.mask("ok_run")) == 3);
    CHECK(d.has("saturated"));
    CHECK(!d.has("banana"));
}

TEST_CASE("flag dictionary: unknown name lists known names") {
    const FlagDictionary d = FlagDictionary::standard();
    try {
        (void)d.mask("banana");
        FAIL("expected LookupError");
    } catch (const LookupError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("banana") != std::string::npos);
        CHECK(msg.find("primary") != std::string::npos);
        CHECK(msg.find("saturated") != std::string::npos);
    }
}

TEST_CASE("flag dictionary: define rejects clashes, entries sorted by bit") {
    FlagDictionary d = FlagDictionary::standard();
    d.define("streaked", 9);
    CHECK(d.mask("streaked") == 1ull << 9);
    CHECK_THROWS_AS(d.define("streaked", 10), ConfigError);  // name taken
    CHECK_THROWS_AS(d.define("other", 9), ConfigError);      // bit taken
    CHECK_THROWS_AS(d.define("big", 64), ConfigError);       // out of range
    const auto entries = d.entries();
    REQUIRE(entries.size() == 7);
    for (std::size_t i = 1; i < entries.size(); ++i) {
        CHECK(entries[i - 1].second < entries[i].second);
    }
    CHECK(entries.back().first == "streaked");
}

TEST_CASE("object type names round trip") {
    for (ObjType t : {ObjType::star, ObjType::galaxy, ObjType::trail, ObjType::defect}) {
        CHECK(obj_type_from_name(obj_type_name(t)) == t);
    }
    CHECK_THROWS_AS(obj_type_from_name("quasar"), ParseError);
}

TEST_CASE("catalog construction validates depth and required flags") {
    CHECK_NOTHROW(Catalog(0));
    CHECK_NOTHROW(Catalog(20));
    CHECK_THROWS_AS(Catalog(-1), DepthLimitError);
    CHECK_THROWS_AS(Catalog(21), DepthLimitError);

    FlagDictionary missing;  // no primary/ok_run/saturated
    missing.define("whatever", 0);
    CHECK_THROWS_AS(Catalog(8, missing), ConfigError);
}

TEST_CASE("view semantics") {
    const Catalog cat(8);
    const std::uint64_t pri = cat.flag_mask("primary");
    const std::uint64_t ok = cat.flag_mask("ok_run");

    CHECK(cat.view_pass(View::all, 0, ObjType::defect));
    CHECK(cat.view_pass(View::photoPrimary, pri | ok, ObjType::defect));
    CHECK(!cat.view_pass(View::photoPrimary, ok, ObjType::galaxy));
    CHECK(!cat.view_pass(View::photoPrimary, pri, ObjType::galaxy));
    CHECK(cat.view_pass(View::galaxy, pri | ok, ObjType::galaxy));
    CHECK(!cat.view_pass(View::star, pri | ok, ObjType::galaxy));
    CHECK(cat.view_pass(View::star, pri | ok, ObjType::star));
    CHECK(!cat.view_pass(View::galaxy, ok, ObjType::galaxy));

    CHECK(view_from_name("photoPrimary") == View::photoPrimary);
    CHECK(view_name(View::galaxy) == "galaxy");
    CHECK_THROWS_AS(view_from_name("quasars"), ParseError);
}

TEST_CASE("view counts partition on a synthetic catalog") {
    const Catalog cat = synth_catalog(5000, 42);
    std::size_t primary = 0, stars = 0, galaxies = 0;
    for (std::size_t i = 0; i < cat.photo().size(); ++i) {
        primary += cat.view_pass(View::photoPrimary, i);
        stars += cat.view_pass(View::star, i);
        galaxies += cat.view_pass(View::galaxy, i);
    }
    CHECK(primary > 0);
    CHECK(stars + galaxies <= primary);
}

TEST_CASE("photo storage is sorted by (htmID, objID)") {
    const Catalog cat = synth_catalog(4000, 7);
    const PhotoColumns& p = cat.photo();
    REQUIRE(p.size() == 4000);
    for (std::size_t i = 1; i < p.size(); ++i) {
        const bool ordered = p.htmID[i - 1] < p.htmID[i] ||
                             (p.htmID[i - 1] == p.htmID[i] && p.objID[i - 1] < p.objID[i]);
        REQUIRE(ordered);
    }
}

TEST_CASE("append order does not change bytes: one batch vs two") {
    SynthProfile prof;
    prof.n = 1000;
    prof.seed = 11;
    prof.index_depth = 8;
    const SynthSky sky = generate_sky(prof);

    Catalog whole(8);
    populate(whole, sky);

    Catalog split(8);
    {
        std::vector<PhotoObj> rows = sky.photo;
        std::uint64_t stamp = 1;
        for (auto& r : rows) {
            r.htmID = lookup_id({r.cx, r.cy, r.cz}, 8).value();
            r.loadStamp = stamp++;
        }
        // Interleave: odds first, then evens; same content, different order.
        std::vector<PhotoObj> odd, even;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            (i % 2 ? odd : even).push_back(rows[i]);
        }
        split.append_photo(odd);
        split.append_photo(even);
    }
    // Photo content identical although fields/plates/spectra differ; compare
    // the photo column directly.
    REQUIRE(split.photo().size() == whole.photo().size());
    for (std::size_t i = 0; i < whole.photo().size(); ++i) {
        CHECK(split.photo().objID[i] == whole.photo().objID[i]);
        CHECK(split.photo().htmID[i] == whole.photo().htmID[i]);
    }
}

TEST_CASE("range query: empty and full range sets") {
    const Catalog cat = synth_catalog(2000, 3);

    HtmRangeSet empty;
    empty.index_depth = cat.index_depth();
    CHECK(cat.range_query(empty).empty());
    CHECK(cat.range_query_spans(empty).empty());

    HtmRangeSet full;
    full.index_depth = cat.index_depth();
    full.ranges = {{first_id_at_depth(cat.index_depth()), last_id_at_depth(cat.index_depth())}};
    CHECK(cat.range_query(full).size() == cat.photo().size());
}

TEST_CASE("range query rejects depth mismatch") {
    const Catalog cat = synth_catalog(100, 5);
    HtmRangeSet rs;
    rs.index_depth = cat.index_depth() + 1;
    rs.ranges = {{first_id_at_depth(rs.index_depth), last_id_at_depth(rs.index_depth)}};
    CHECK_THROWS_AS(cat.range_query_spans(rs), ConfigError);
}

TEST_CASE("range query equals brute force after arc filtering") {
    const int depth = 10;
    const Catalog cat = synth_catalog(10000, 99, depth);
    const PhotoColumns& p = cat.photo();
    std::mt19937_64 gen(2024);
    auto u01 = [&] { return (gen() >> 11) * 0x1.0p-53; };

    for (int trial = 0; trial < 30; ++trial) {
        const double ra = u01() * 360.0;
        const double dec = std::asin(2.0 * u01() - 1.0) * kDegPerRad;
        const double radius = 10.0 + u01() * 200.0;
        const UnitVector probe = eq_to_vec(ra, dec);

        const HtmRangeSet rs = cover(make_cap({ra, dec}, radius), depth);
        std::vector<std::uint64_t> via_index;
        for (const auto& [b, e] : cat.range_query_spans(rs)) {
            for (std::size_t i = b; i < e; ++i) {
                if (arc_angle_arcmin(probe, {p.cx[i], p.cy[i], p.cz[i]}) <= radius) {
                    via_index.push_back(p.objID[i]);
                }
            }
        }
        std::vector<std::uint64_t> brute;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (arc_angle_arcmin(probe, {p.cx[i], p.cy[i], p.cz[i]}) <= radius) {
                brute.push_back(p.objID[i]);
            }
        }
        std::sort(via_index.begin(), via_index.end());
        std::sort(brute.begin(), brute.end());
        REQUIRE(via_index == brute);

        // And the raw span rows are a superset of the cap members.
        std::size_t span_rows = 0;
        for (const auto& [b, e] : cat.range_query_spans(rs)) span_rows += e - b;
        REQUIRE(span_rows >= brute.size());
    }
}

TEST_CASE("photo_row_of finds rows and throws on absent keys") {
    const Catalog cat = synth_catalog(500, 21);
    const PhotoColumns& p = cat.photo();
    for (std::size_t i = 0; i < p.size(); i += 47) {
        CHECK(cat.photo_row_of(p.objID[i]) == i);
    }
    CHECK_THROWS_AS(cat.photo_row_of(999999999), LookupError);
    CHECK(cat.has_photo(p.objID[0]));
    CHECK(!cat.has_photo(999999999));
}

TEST_CASE("row_count per table") {
    const Catalog cat = synth_catalog(3000, 17);
    CHECK(cat.row_count(TableId::photo) == cat.photo().size());
    CHECK(cat.row_count(TableId::field) == cat.fields().size());
    CHECK(cat.row_count(TableId::plate) == cat.plates().size());
    CHECK(cat.row_count(TableId::spec_obj) == cat.spec_objs().size());
    CHECK(cat.row_count(TableId::spec_line) == cat.spec_lines().size());
    CHECK(cat.row_count(TableId::neighbors) == 0);
    CHECK(cat.spec_objs().size() > 0);
}

TEST_CASE("save/open round trip preserves everything") {
    TempFile f("roundtrip");
    Catalog cat = synth_catalog(2500, 31, 12);
    const std::uint64_t digest = cat.content_digest();
    cat.save(f.path.string());

    const Catalog back = Catalog::open(f.path.string());
    CHECK(back.content_digest() == digest);
    CHECK(back.index_depth() == 12);
    CHECK(back.photo().size() == cat.photo().size());
    CHECK(back.fields().size() == cat.fields().size());
    CHECK(back.spec_objs().size() == cat.spec_objs().size());
    CHECK(back.spec_lines().size() == cat.spec_lines().size());
    CHECK(back.plates().size() == cat.plates().size());
    CHECK(back.flags().entries() == cat.flags().entries());

    // Spot-check column content, including doubles, bit for bit.
    const auto& a = cat.photo();
    const auto& b = back.photo();
    for (std::size_t i = 0; i < a.size(); i += 97) {
        CHECK(a.objID[i] == b.objID[i]);
        CHECK(a.ra[i] == b.ra[i]);
        CHECK(a.modelMag[kBandR][i] == b.modelMag[kBandR][i]);
        CHECK(a.loadStamp[i] == b.loadStamp[i]);
    }

    // Saving the reopened catalog reproduces the identical byte image.
    TempFile f2("roundtrip2");
    back.save(f2.path.string());
    CHECK(slurp(f.path) == slurp(f2.path));
}

TEST_CASE("empty catalog round trips") {
    TempFile f("empty");
    Catalog cat(20);
    cat.save(f.path.string());
    const Catalog back = Catalog::open(f.path.string());
    CHECK(back.photo().size() == 0);
    CHECK(back.row_count(TableId::neighbors) == 0);
    CHECK(back.index_depth() == 20);
    CHECK(back.content_digest() == cat.content_digest());
}

TEST_CASE("custom flag dictionary survives the file") {
    TempFile f("flags");
    FlagDictionary d = FlagDictionary::standard();
    d.define("streaked", 12);
    Catalog cat(6, d);
    cat.save(f.path.string());
    const Catalog back = Catalog::open(f.path.string());
    CHECK(back.flag_mask("streaked") == 1ull << 12);
}

TEST_CASE("open distinguishes version, truncation, digest, and parse errors") {
    TempFile f("corrupt");
    Catalog cat = synth_catalog(300, 77, 10);
    cat.save(f.path.string());
    const std::vector<char> good = slurp(f.path);
    REQUIRE(good.size() > 64);

    SUBCASE("wrong magic is a parse error") {
        auto bytes = good;
        bytes[0] = 'X';
        spit(f.path, bytes);
        CHECK_THROWS_AS(Catalog::open(f.path.string()), ParseError);
    }
    SUBCASE("future version is a version mismatch") {
        auto bytes = good;
        bytes[4] = 9;
        spit(f.path, bytes);
        CHECK_THROWS_AS(Catalog::open(f.path.string()), VersionMismatchError);
    }
    SUBCASE("dropping the tail is a truncation error") {
        auto bytes = good;
        bytes.pop_back();
        spit(f.path, bytes);
        CHECK_THROWS_AS(Catalog::open(f.path.string()), TruncatedFileError);
    }
    SUBCASE("dropping half the file is a truncation error") {
        auto bytes = good;
        bytes.resize(bytes.size() / 2);
        spit(f.path, bytes);
        CHECK_THROWS_AS(Catalog::open(f.path.string()), TruncatedFileError);
    }
    SUBCASE("flipping a payload byte is a digest mismatch") {
        auto bytes = good;
        bytes[bytes.size() / 2] = static_cast<char>(bytes[bytes.size() / 2] ^ 0x5A);
        spit(f.path, bytes);
        CHECK_THROWS_AS(Catalog::open(f.path.string()), DigestMismatchError);
    }
    SUBCASE("trailing garbage is a parse error") {
        auto bytes = good;
        bytes.push_back('\0');
        spit(f.path, bytes);
        CHECK_THROWS_AS(Catalog::open(f.path.string()), ParseError);
    }
    SUBCASE("pristine bytes still open") {
        spit(f.path, good);
        CHECK_NOTHROW(Catalog::open(f.path.string()));
    }
}

TEST_CASE("digest tracks content") {
    Catalog a(8);
    Catalog b(8);
    CHECK(a.content_digest() == b.content_digest());

    PhotoObj o;
    o.objID = 1;
    o.ra = 10;
    o.dec = 5;
    const UnitVector v = eq_to_vec(o.ra, o.dec);
    o.cx = v.x;
    o.cy = v.y;
    o.cz = v.z;
    o.htmID = lookup_id(v, 8).value();
    a.append_photo({o});
    CHECK(a.content_digest() != b.content_digest());

    Catalog c(10);  // depth participates
    CHECK(c.content_digest() != b.content_digest());
}

TEST_CASE("csv export matches the import schema") {
    Catalog cat = synth_catalog(5, 123, 8);
    std::ostringstream out;
    cat.export_csv(TableId::photo, out);
    std::istringstream in(out.str());
    std::string header;
    REQUIRE(std::getline(in, header));

    const auto cols = Catalog::csv_columns(TableId::photo);
    CHECK(cols.size() == 47);
    std::string expect;
    for (std::size_t i = 0; i < cols.size(); ++i) expect += (i ? "," : "") + cols[i];
    CHECK(header == expect);

    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 46);
    }
    CHECK(rows == cat.photo().size());

    std::ostringstream nout;
    cat.export_csv(TableId::neighbors, nout);
    CHECK(nout.str() == "objID,neighborObjID,distance\n");
}

TEST_CASE("double_to_string round trips shortest forms") {
    CHECK(double_to_string(0.1) == "0.1");
    CHECK(double_to_string(-0.5) == "-0.5");
    CHECK(double_to_string(185.0) == "185");
    std::mt19937_64 gen(5);
    for (int i = 0; i < 1000; ++i) {
        const double x = ((gen() >> 11) * 0x1.0p-53 - 0.5) * 720.0;
        CHECK(std::stod(double_to_string(x)) == x);
    }
}
