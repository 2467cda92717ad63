#include "skycat/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skycat/catalog.hpp"
#include "skycat/errors.hpp"
#include "skycat/htm.hpp"
#include "skycat/loader.hpp"
#include "skycat/queries.hpp"
#include "skycat/region.hpp"
#include "skycat/scan_bench.hpp"
#include "skycat/sphere.hpp"
#include "skycat/synth.hpp"

namespace skycat {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Shared command state

struct Ctx {
    std::string catalog_path;    // --catalog, falls back to $SKYCAT_CATALOG
    std::string format = "csv";  // csv | json
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;

    bool is_json() const { return format == "json"; }
};

std::string require_catalog_path(const Ctx& ctx) {
    if (ctx.catalog_path.empty()) {
        throw CLI::RequiredError("--catalog (or SKYCAT_CATALOG)");
    }
    return ctx.catalog_path;
}

Catalog open_catalog(const Ctx& ctx) {
    return Catalog::open(require_catalog_path(ctx));
}

// Journal and traces live beside the catalog file.
std::string journal_path_for(const std::string& catalog_path) {
    return catalog_path + ".journal";
}
std::string trace_dir_for(const std::string& catalog_path) {
    return catalog_path + ".traces";
}

// Save via a temp file so an interrupted write never truncates the catalog.
void save_catalog(const Catalog& cat, const std::string& path) {
    const std::string tmp = path + ".tmp";
    cat.save(tmp);
    std::filesystem::rename(tmp, path);
}

// ---------------------------------------------------------------------------
// Output helpers

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    q += '"';
    return q;
}

void emit_json(const Ctx& ctx, const json& j) { *ctx.out << j.dump(2) << "\n"; }

void note_truncated(const Ctx& ctx, bool truncated) {
    if (truncated) *ctx.err << "note: result truncated by --limit/--timeout\n";
}

json event_json(const LoadEvent& ev) {
    return json{{"eventID", ev.eventID},       {"table", ev.table},
                {"startStamp", ev.startStamp}, {"stopStamp", ev.stopStamp},
                {"sourceRows", ev.sourceRows}, {"insertedRows", ev.insertedRows},
                {"status", ev.status},         {"tracePath", ev.tracePath}};
}

void print_events(const Ctx& ctx, const std::vector<LoadEvent>& evs) {
    if (ctx.is_json()) {
        json j = json::array();
        for (const auto& ev : evs) j.push_back(event_json(ev));
        emit_json(ctx, j);
        return;
    }
    *ctx.out << "eventID,table,startStamp,stopStamp,sourceRows,insertedRows,"
                "status,tracePath\n";
    for (const auto& ev : evs) {
        *ctx.out << ev.eventID << ',' << ev.table << ',' << ev.startStamp << ','
                 << ev.stopStamp << ',' << ev.sourceRows << ',' << ev.insertedRows
                 << ',' << ev.status << ',' << csv_field(ev.tracePath) << "\n";
    }
}

void print_hits(const Ctx& ctx, const QueryResult<NearbyHit>& r) {
    if (ctx.is_json()) {
        json rows = json::array();
        for (const auto& h : r.rows) {
            rows.push_back({{"objID", h.objID}, {"distance", h.distance}});
        }
        emit_json(ctx, json{{"rows", rows}, {"truncated", r.truncated}});
        return;
    }
    *ctx.out << "objID,distance\n";
    for (const auto& h : r.rows) {
        *ctx.out << h.objID << ',' << double_to_string(h.distance) << "\n";
    }
    note_truncated(ctx, r.truncated);
}

// ---------------------------------------------------------------------------
// Per-command option bags

struct CreateOpts {
    int depth = kDefaultIndexDepth;
};

struct LoadOpts {
    std::string table;
    std::string csv_path;
};

struct UndoOpts {
    std::uint64_t event_id = 0;
};

struct CoverOpts {
    std::vector<double> cap;      // ra dec radius_arcmin
    std::string polygon;          // ra1,dec1,ra2,dec2,...
    int depth = kDefaultIndexDepth;
    std::size_t budget = kDefaultCoverBudget;
};

struct ProbeOpts {
    double ra = 0, dec = 0, r = 0;
    std::size_t limit = 1000;  // 0 = unlimited
    double timeout = 30.0;     // <= 0 = unlimited
    Limits limits() const { return Limits{limit, timeout}; }
};

struct NeighborOpts {
    double radius = kNeighborRadiusArcmin;
};

struct MiningOpts {
    std::size_t limit = 1000;
    double timeout = 30.0;
    Limits limits() const { return Limits{limit, timeout}; }
};

struct ColorOpts {
    double threshold = 1.0;
};

struct BenchOpts {
    std::string predicate = "count_all";
    std::string variant = "both";  // warm | cold | both
    int runs = 5;
};

struct GenOpts {
    std::uint64_t n = 0;
    std::uint64_t seed = 1;
    std::string density = "uniform";
    std::string out_dir;
    std::size_t objects_per_field = 200;
    int index_depth = kDefaultIndexDepth;
};

struct HtmLookupOpts {
    double ra = 0, dec = 0;
    int depth = kDefaultIndexDepth;
};

struct HtmNameOpts {
    std::uint64_t id = 0;
};

struct HtmIdOpts {
    std::string name;
};

struct HtmEdgeOpts {
    int depth = 20;
    int beam = 512;
};

struct ExportOpts {
    std::string table;
};

// ---------------------------------------------------------------------------
// Command bodies

void cmd_create(const Ctx& ctx, const CreateOpts& o) {
    const std::string path = require_catalog_path(ctx);
    if (std::filesystem::exists(path)) {
        throw ConfigError("refusing to overwrite existing catalog " + path);
    }
    Catalog cat(o.depth);
    save_catalog(cat, path);
    *ctx.err << "created " << path << " (index depth " << o.depth << ")\n";
}

void cmd_load(const Ctx& ctx, const LoadOpts& o, int& exit_code) {
    const std::string path = require_catalog_path(ctx);
    Catalog cat = Catalog::open(path);
    Loader loader(cat, journal_path_for(path), trace_dir_for(path));
    LoadEvent ev = loader.load_csv(table_from_name(o.table), o.csv_path);
    save_catalog(cat, path);
    print_events(ctx, {ev});
    if (ev.status == "failed") {
        *ctx.err << "error: load failed, see " << ev.tracePath << "\n";
        exit_code = 1;
    } else if (ev.insertedRows < ev.sourceRows) {
        *ctx.err << "note: " << (ev.sourceRows - ev.insertedRows)
                 << " row(s) rejected, see " << ev.tracePath << "\n";
    }
}

void cmd_undo(const Ctx& ctx, const UndoOpts& o) {
    const std::string path = require_catalog_path(ctx);
    Catalog cat = Catalog::open(path);
    Loader loader(cat, journal_path_for(path), trace_dir_for(path));
    std::size_t removed = loader.undo(o.event_id);
    save_catalog(cat, path);
    if (ctx.is_json()) {
        emit_json(ctx, json{{"eventID", o.event_id}, {"removedRows", removed}});
    } else {
        *ctx.out << "removedRows\n" << removed << "\n";
    }
}

void cmd_events(const Ctx& ctx) {
    const std::string path = require_catalog_path(ctx);
    Catalog cat = Catalog::open(path);
    Loader loader(cat, journal_path_for(path), trace_dir_for(path));
    print_events(ctx, loader.events());
}

void cmd_validate(const Ctx& ctx) {
    Catalog cat = open_catalog(ctx);
    std::vector<Violation> vs = validate(cat);
    if (ctx.is_json()) {
        json j = json::array();
        for (const auto& v : vs) {
            j.push_back({{"table", v.table},
                         {"row", v.row},
                         {"constraint", v.constraint},
                         {"detail", v.detail}});
        }
        emit_json(ctx, j);
    } else {
        *ctx.out << "table,row,constraint,detail\n";
        for (const auto& v : vs) {
            *ctx.out << v.table << ',' << v.row << ',' << v.constraint << ','
                     << csv_field(v.detail) << "\n";
        }
    }
    if (!vs.empty()) {
        *ctx.err << "note: " << vs.size() << " integrity violation(s)\n";
    }
}

Region cover_region(const CoverOpts& o) {
    const bool has_cap = !o.cap.empty();
    const bool has_poly = !o.polygon.empty();
    if (has_cap == has_poly) {
        throw CLI::ValidationError("cover", "give exactly one of --cap / --polygon");
    }
    if (has_cap) {
        return make_cap(EquatorialCoord{o.cap[0], o.cap[1]}, o.cap[2]);
    }
    std::vector<double> vals;
    std::stringstream ss(o.polygon);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            vals.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--polygon", "bad number '" + item + "'");
        }
    }
    if (vals.size() < 6 || vals.size() % 2 != 0) {
        throw CLI::ValidationError(
            "--polygon", "need an even list of at least 3 ra,dec pairs");
    }
    std::vector<EquatorialCoord> pts;
    for (std::size_t i = 0; i < vals.size(); i += 2) {
        pts.push_back({vals[i], vals[i + 1]});
    }
    return polygon_region(pts);
}

void cmd_cover(const Ctx& ctx, const CoverOpts& o) {
    HtmRangeSet rs = cover(cover_region(o), o.depth, o.budget);
    if (ctx.is_json()) {
        json ranges = json::array();
        for (const auto& [lo, hi] : rs.ranges) ranges.push_back({lo, hi});
        emit_json(ctx, json{{"indexDepth", rs.index_depth},
                            {"trixelCount", rs.trixel_count()},
                            {"solidAngleSr", rs.solid_angle_sr()},
                            {"ranges", ranges}});
        return;
    }
    for (const auto& [lo, hi] : rs.ranges) *ctx.out << lo << ' ' << hi << "\n";
}

void cmd_nearby(const Ctx& ctx, const ProbeOpts& o) {
    Catalog cat = open_catalog(ctx);
    print_hits(ctx, nearby_eq(cat, o.ra, o.dec, o.r, o.limits()));
}

void cmd_nearest(const Ctx& ctx, const ProbeOpts& o) {
    Catalog cat = open_catalog(ctx);
    std::optional<NearbyHit> hit = nearest_eq(cat, o.ra, o.dec, o.r);
    QueryResult<NearbyHit> r;
    if (hit) r.rows.push_back(*hit);
    print_hits(ctx, r);
}

void cmd_neighbors_build(const Ctx& ctx, const NeighborOpts& o) {
    const std::string path = require_catalog_path(ctx);
    Catalog cat = Catalog::open(path);
    Loader loader(cat, journal_path_for(path), trace_dir_for(path));
    std::size_t pairs = build_neighbors(loader, o.radius);
    save_catalog(cat, path);
    if (ctx.is_json()) {
        emit_json(ctx, json{{"pairs", pairs}});
    } else {
        *ctx.out << "pairs\n" << pairs << "\n";
    }
}

void cmd_q1(const Ctx& ctx, const ProbeOpts& o) {
    Catalog cat = open_catalog(ctx);
    print_hits(ctx, q1_unsaturated_galaxies(cat, o.ra, o.dec, o.r, o.limits()));
}

void cmd_q15(const Ctx& ctx, const MiningOpts& o) {
    Catalog cat = open_catalog(ctx);
    QueryResult<AsteroidHit> r = q15_asteroids(cat, o.limits());
    if (ctx.is_json()) {
        json rows = json::array();
        for (const auto& h : r.rows) {
            rows.push_back({{"objID", h.objID}, {"velocity", h.velocity}});
        }
        emit_json(ctx, json{{"rows", rows}, {"truncated", r.truncated}});
        return;
    }
    *ctx.out << "objID,velocity\n";
    for (const auto& h : r.rows) {
        *ctx.out << h.objID << ',' << double_to_string(h.velocity) << "\n";
    }
    note_truncated(ctx, r.truncated);
}

void cmd_fastmovers(const Ctx& ctx, const MiningOpts& o) {
    Catalog cat = open_catalog(ctx);
    QueryResult<MoverPair> r = fast_movers(cat, o.limits());
    if (ctx.is_json()) {
        json rows = json::array();
        for (const auto& p : r.rows) {
            rows.push_back({{"rId", p.rId}, {"gId", p.gId}});
        }
        emit_json(ctx, json{{"rows", rows}, {"truncated", r.truncated}});
        return;
    }
    *ctx.out << "rId,gId\n";
    for (const auto& p : r.rows) *ctx.out << p.rId << ',' << p.gId << "\n";
    note_truncated(ctx, r.truncated);
}

void cmd_colorcount(const Ctx& ctx, const ColorOpts& o) {
    Catalog cat = open_catalog(ctx);
    ColorCountResult r = color_count(cat, o.threshold);
    if (ctx.is_json()) {
        emit_json(ctx, json{{"count", r.count},
                            {"rowsScanned", r.rowsScanned},
                            {"bytesScanned", r.bytesScanned},
                            {"elapsedSeconds", r.elapsedSeconds}});
        return;
    }
    *ctx.out << "count,rowsScanned,bytesScanned,elapsedSeconds\n"
             << r.count << ',' << r.rowsScanned << ',' << r.bytesScanned << ','
             << double_to_string(r.elapsedSeconds) << "\n";
}

json bench_json(const BenchReport& r) {
    return json{{"predicate", r.predicate},
                {"variant", r.variant},
                {"rowsScanned", r.rowsScanned},
                {"bytesScanned", r.bytesScanned},
                {"matches", r.matches},
                {"elapsedSeconds", r.elapsedSeconds},
                {"rowsPerSec", r.rowsPerSec},
                {"bytesPerSec", r.bytesPerSec}};
}

void cmd_bench_scan(const Ctx& ctx, const BenchOpts& o) {
    if (o.variant != "warm" && o.variant != "cold" && o.variant != "both") {
        throw CLI::ValidationError("--variant", "expected warm, cold, or both");
    }
    const std::string path = require_catalog_path(ctx);
    json reports = json::array();
    if (o.variant == "warm" || o.variant == "both") {
        Catalog cat = Catalog::open(path);
        reports.push_back(bench_json(bench_scan_warm(cat, o.predicate, o.runs)));
    }
    if (o.variant == "cold" || o.variant == "both") {
        reports.push_back(bench_json(bench_scan_cold(path, o.predicate, o.runs)));
    }
    emit_json(ctx, reports.size() == 1 ? reports[0] : reports);
}

void cmd_gen(const Ctx& ctx, const GenOpts& o) {
    SynthProfile profile;
    profile.n = o.n;
    profile.seed = o.seed;
    profile.density = density_from_name(o.density);
    profile.objects_per_field = o.objects_per_field;
    profile.index_depth = o.index_depth;
    SynthSky sky = generate_sky(profile);
    write_csv(sky, o.out_dir);
    // Listed in FK-safe load order.
    const std::pair<const char*, std::size_t> files[] = {
        {"field.csv", sky.fields.size()},   {"photo.csv", sky.photo.size()},
        {"plate.csv", sky.plates.size()},   {"specObj.csv", sky.spec_objs.size()},
        {"specLine.csv", sky.spec_lines.size()}};
    if (ctx.is_json()) {
        json j = json::array();
        for (const auto& [name, rows] : files) {
            j.push_back({{"file", name}, {"rows", rows}});
        }
        emit_json(ctx, j);
        return;
    }
    *ctx.out << "file,rows\n";
    for (const auto& [name, rows] : files) {
        *ctx.out << name << ',' << rows << "\n";
    }
}

void cmd_htm_lookup(const Ctx& ctx, const HtmLookupOpts& o) {
    TrixelId id = lookup_id(eq_to_vec(o.ra, o.dec), o.depth);
    if (ctx.is_json()) {
        emit_json(ctx, json{{"htmID", id.value()}, {"name", id_to_name(id)}});
    } else {
        *ctx.out << "htmID,name\n"
                 << id.value() << ',' << id_to_name(id) << "\n";
    }
}

void cmd_htm_name(const Ctx& ctx, const HtmNameOpts& o) {
    const std::string name = id_to_name(TrixelId(o.id));
    if (ctx.is_json()) {
        emit_json(ctx, json{{"name", name}});
    } else {
        *ctx.out << name << "\n";
    }
}

void cmd_htm_id(const Ctx& ctx, const HtmIdOpts& o) {
    if (ctx.is_json()) {
        emit_json(ctx, json{{"htmID", name_to_id(o.name).value()}});
    } else {
        *ctx.out << name_to_id(o.name).value() << "\n";
    }
}

void cmd_htm_edge(const Ctx& ctx, const HtmEdgeOpts& o) {
    double arcmin = max_edge_arcmin_at_depth(o.depth, o.beam);
    if (ctx.is_json()) {
        emit_json(ctx, json{{"depth", o.depth},
                            {"maxEdgeArcmin", arcmin},
                            {"maxEdgeArcsec", arcmin * 60.0}});
        return;
    }
    *ctx.out << "depth,maxEdgeArcmin,maxEdgeArcsec\n"
             << o.depth << ',' << double_to_string(arcmin) << ','
             << double_to_string(arcmin * 60.0) << "\n";
}

void cmd_export(const Ctx& ctx, const ExportOpts& o) {
    Catalog cat = open_catalog(ctx);
    cat.export_csv(table_from_name(o.table), *ctx.out);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    Ctx ctx;
    ctx.out = &out;
    ctx.err = &err;
    int exit_code = 0;

    CLI::App app{"skycat: HTM-indexed sky-catalog engine", "skycat"};
    app.require_subcommand(1);
    app.add_option("--catalog", ctx.catalog_path, "Catalog file path")
        ->envname("SKYCAT_CATALOG");
    app.add_option("--format", ctx.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    CreateOpts create_o;
    auto* c_create = app.add_subcommand("create", "Create an empty catalog");
    c_create->add_option("--depth", create_o.depth, "HTM index depth [0, 20]")
        ->capture_default_str();
    c_create->callback([&] { cmd_create(ctx, create_o); });

    LoadOpts load_o;
    auto* c_load = app.add_subcommand("load", "Bulk-load one CSV table");
    c_load
        ->add_option("table", load_o.table,
                     "photo|field|plate|specObj|specLine|neighbors")
        ->required();
    c_load->add_option("csv", load_o.csv_path, "CSV file path")->required();
    c_load->callback([&] { cmd_load(ctx, load_o, exit_code); });

    UndoOpts undo_o;
    auto* c_undo = app.add_subcommand("undo", "Undo one load event");
    c_undo->add_option("event", undo_o.event_id, "Event id")->required();
    c_undo->callback([&] { cmd_undo(ctx, undo_o); });

    auto* c_events = app.add_subcommand("events", "List the load-event journal");
    c_events->callback([&] { cmd_events(ctx); });

    auto* c_validate =
        app.add_subcommand("validate", "Run the full integrity sweep");
    c_validate->callback([&] { cmd_validate(ctx); });

    CoverOpts cover_o;
    auto* c_cover = app.add_subcommand("cover", "Trixel cover of a sky region");
    c_cover
        ->add_option("--cap", cover_o.cap, "Cap: ra dec radius_arcmin")
        ->expected(3);
    c_cover->add_option("--polygon", cover_o.polygon,
                        "Convex polygon: ra1,dec1,ra2,dec2,...");
    c_cover->add_option("--depth", cover_o.depth, "Index depth [0, 20]")
        ->required();
    c_cover->add_option("--budget", cover_o.budget, "Pre-merge range budget")
        ->capture_default_str();
    c_cover->callback([&] { cmd_cover(ctx, cover_o); });

    ProbeOpts nearby_o;
    auto* c_nearby =
        app.add_subcommand("nearby", "Objects within r arcmin of (ra, dec)");
    c_nearby->add_option("--ra", nearby_o.ra, "Right ascension, degrees")
        ->required();
    c_nearby->add_option("--dec", nearby_o.dec, "Declination, degrees")
        ->required();
    c_nearby->add_option("--r", nearby_o.r, "Radius, arcmin")->required();
    c_nearby->add_option("--limit", nearby_o.limit, "Row quota, 0 = unlimited")
        ->capture_default_str();
    c_nearby
        ->add_option("--timeout", nearby_o.timeout, "Seconds, 0 = unlimited")
        ->capture_default_str();
    c_nearby->callback([&] { cmd_nearby(ctx, nearby_o); });

    ProbeOpts nearest_o;
    auto* c_nearest =
        app.add_subcommand("nearest", "Closest object within r arcmin");
    c_nearest->add_option("--ra", nearest_o.ra, "Right ascension, degrees")
        ->required();
    c_nearest->add_option("--dec", nearest_o.dec, "Declination, degrees")
        ->required();
    c_nearest->add_option("--r", nearest_o.r, "Radius, arcmin")->required();
    c_nearest->callback([&] { cmd_nearest(ctx, nearest_o); });

    NeighborOpts nb_o;
    auto* c_neighbors =
        app.add_subcommand("neighbors", "Materialized neighbor pairs");
    c_neighbors->require_subcommand(1);
    auto* c_nb_build =
        c_neighbors->add_subcommand("build", "Build all pairs within radius");
    c_nb_build
        ->add_option("--radius", nb_o.radius, "Pair radius, arcmin (0, 0.5]")
        ->capture_default_str();
    c_nb_build->callback([&] { cmd_neighbors_build(ctx, nb_o); });

    auto* c_query = app.add_subcommand("query", "Named mining queries");
    c_query->require_subcommand(1);

    ProbeOpts q1_o;
    auto* c_q1 = c_query->add_subcommand(
        "q1", "Unsaturated primary galaxies near (ra, dec)");
    c_q1->add_option("--ra", q1_o.ra, "Right ascension, degrees")->required();
    c_q1->add_option("--dec", q1_o.dec, "Declination, degrees")->required();
    c_q1->add_option("--r", q1_o.r, "Radius, arcmin")->required();
    c_q1->add_option("--limit", q1_o.limit, "Row quota, 0 = unlimited")
        ->capture_default_str();
    c_q1->add_option("--timeout", q1_o.timeout, "Seconds, 0 = unlimited")
        ->capture_default_str();
    c_q1->callback([&] { cmd_q1(ctx, q1_o); });

    MiningOpts q15_o;
    auto* c_q15 = c_query->add_subcommand("q15", "Moving objects (asteroids)");
    c_q15->add_option("--limit", q15_o.limit, "Row quota, 0 = unlimited")
        ->capture_default_str();
    c_q15->add_option("--timeout", q15_o.timeout, "Seconds, 0 = unlimited")
        ->capture_default_str();
    c_q15->callback([&] { cmd_q15(ctx, q15_o); });

    MiningOpts fm_o;
    auto* c_fm = c_query->add_subcommand(
        "fastmovers", "Red/green streak pairs (fast-moving objects)");
    c_fm->add_option("--limit", fm_o.limit, "Row quota, 0 = unlimited")
        ->capture_default_str();
    c_fm->add_option("--timeout", fm_o.timeout, "Seconds, 0 = unlimited")
        ->capture_default_str();
    c_fm->callback([&] { cmd_fastmovers(ctx, fm_o); });

    ColorOpts cc_o;
    auto* c_cc = c_query->add_subcommand(
        "colorcount", "Full-scan count of modelMag_r - modelMag_g > threshold");
    c_cc->add_option("--threshold", cc_o.threshold, "Color threshold")
        ->capture_default_str();
    c_cc->callback([&] { cmd_colorcount(ctx, cc_o); });

    auto* c_bench = app.add_subcommand("bench", "Benchmarks");
    c_bench->require_subcommand(1);
    BenchOpts bench_o;
    auto* c_bench_scan =
        c_bench->add_subcommand("scan", "Timed full photo-table scan (JSON)");
    c_bench_scan
        ->add_option("--predicate", bench_o.predicate, "count_all|colorcut")
        ->capture_default_str();
    c_bench_scan->add_option("--variant", bench_o.variant, "warm|cold|both")
        ->capture_default_str();
    c_bench_scan->add_option("--runs", bench_o.runs, "Runs per median")
        ->capture_default_str();
    c_bench_scan->callback([&] { cmd_bench_scan(ctx, bench_o); });

    GenOpts gen_o;
    auto* c_gen = app.add_subcommand("gen", "Generate a synthetic sky as CSVs");
    c_gen->add_option("--n", gen_o.n, "Photo object count")->required();
    c_gen->add_option("--seed", gen_o.seed, "RNG seed")->capture_default_str();
    c_gen->add_option("--density", gen_o.density, "uniform|clustered|patch")
        ->capture_default_str();
    c_gen->add_option("--out", gen_o.out_dir, "Output directory")->required();
    c_gen
        ->add_option("--objects-per-field", gen_o.objects_per_field,
                     "Objects per synthetic field")
        ->capture_default_str();
    c_gen->add_option("--index-depth", gen_o.index_depth, "htmID index depth")
        ->capture_default_str();
    c_gen->callback([&] { cmd_gen(ctx, gen_o); });

    auto* c_htm = app.add_subcommand("htm", "Trixel diagnostics");
    c_htm->require_subcommand(1);

    HtmLookupOpts hl_o;
    auto* c_hl = c_htm->add_subcommand("lookup", "Trixel id of a sky point");
    c_hl->add_option("--ra", hl_o.ra, "Right ascension, degrees")->required();
    c_hl->add_option("--dec", hl_o.dec, "Declination, degrees")->required();
    c_hl->add_option("--depth", hl_o.depth, "Depth [0, 20]")
        ->capture_default_str();
    c_hl->callback([&] { cmd_htm_lookup(ctx, hl_o); });

    HtmNameOpts hn_o;
    auto* c_hn = c_htm->add_subcommand("name", "Name of a trixel id");
    c_hn->add_option("id", hn_o.id, "Trixel id")->required();
    c_hn->callback([&] { cmd_htm_name(ctx, hn_o); });

    HtmIdOpts hi_o;
    auto* c_hi = c_htm->add_subcommand("id", "Trixel id of a name");
    c_hi->add_option("name", hi_o.name, "Trixel name, e.g. N012")->required();
    c_hi->callback([&] { cmd_htm_id(ctx, hi_o); });

    HtmEdgeOpts he_o;
    auto* c_he =
        c_htm->add_subcommand("edge", "Measured maximum trixel edge length");
    c_he->add_option("--depth", he_o.depth, "Depth [0, 20]")
        ->capture_default_str();
    c_he->add_option("--beam", he_o.beam, "Search beam width")
        ->capture_default_str();
    c_he->callback([&] { cmd_htm_edge(ctx, he_o); });

    ExportOpts export_o;
    auto* c_export = app.add_subcommand("export", "Dump one table as CSV");
    c_export
        ->add_option("table", export_o.table,
                     "photo|field|plate|specObj|specLine|neighbors")
        ->required();
    c_export->callback([&] { cmd_export(ctx, export_o); });

    // Let --catalog / --format appear after any subcommand.
    for (CLI::App* a :
         {&app, c_create, c_load, c_undo, c_events, c_validate, c_cover,
          c_nearby, c_nearest, c_neighbors, c_nb_build, c_query, c_q1, c_q15,
          c_fm, c_cc, c_bench, c_bench_scan, c_gen, c_htm, c_hl, c_hn, c_hi,
          c_he, c_export}) {
        a->fallthrough();
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp&) {
        const CLI::App* a = &app;
        while (!a->get_subcommands().empty()) a = a->get_subcommands().front();
        out << a->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

}  // namespace skycat
