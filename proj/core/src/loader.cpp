#include "skycat/loader.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "skycat/errors.hpp"

namespace skycat {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(start));
            break;
        }
        cells.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return cells;
}

std::string join_csv(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    return out;
}

// Per-row parse context: the first failed check rejects the row and records
// one trace line; later checks are skipped via the rejected flag.
struct RowCtx {
    const std::vector<std::string>& cells;
    const std::vector<std::string>& columns;
    std::uint64_t row_number;
    std::vector<std::string>& trace;
    bool rejected = false;

    void reject(const std::string& constraint, const std::string& detail) {
        if (rejected) return;
        rejected = true;
        trace.push_back(std::to_string(row_number) + "," + constraint + "," + detail);
    }

    std::optional<std::string_view> raw(std::size_t i) {
        if (rejected) return std::nullopt;
        std::string_view v = cells[i];
        if (v.empty()) {
            reject("null_" + columns[i], "empty field");
            return std::nullopt;
        }
        return v;
    }

    std::optional<std::uint64_t> u64(std::size_t i) {
        auto v = raw(i);
        if (!v) return std::nullopt;
        std::uint64_t out = 0;
        auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || p != v->data() + v->size()) {
            reject("parse_" + columns[i], "not an unsigned integer: " + std::string(*v));
            return std::nullopt;
        }
        return out;
    }

    std::optional<std::int32_t> i32(std::size_t i) {
        auto v = raw(i);
        if (!v) return std::nullopt;
        std::int32_t out = 0;
        auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || p != v->data() + v->size()) {
            reject("parse_" + columns[i], "not an integer: " + std::string(*v));
            return std::nullopt;
        }
        return out;
    }

    std::optional<double> f64(std::size_t i) {
        auto v = raw(i);
        if (!v) return std::nullopt;
        double out = 0;
        auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
        if (ec != std::errc{} || p != v->data() + v->size()) {
            reject("parse_" + columns[i], "not a number: " + std::string(*v));
            return std::nullopt;
        }
        if (!std::isfinite(out)) {
            reject("null_" + columns[i], "non-finite value");
            return std::nullopt;
        }
        return out;
    }
};

struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::string> rows;  // raw data lines, blank lines dropped
};

std::optional<CsvFile> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    CsvFile f;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            f.header = split_csv(line);
            first = false;
            continue;
        }
        if (line.empty()) continue;
        f.rows.push_back(line);
    }
    if (first) return std::nullopt;  // no header at all
    return f;
}

struct PairHash {
    std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& p) const {
        return std::hash<std::uint64_t>{}(p.first * 1099511628211ULL ^ p.second);
    }
};

}  // namespace

std::vector<Violation> validate(const Catalog& cat) {
    std::vector<Violation> out;
    auto add = [&](std::string_view table, std::uint64_t row, std::string constraint,
                   std::string detail) {
        out.push_back({std::string(table), row, std::move(constraint), std::move(detail)});
    };

    const PhotoColumns& p = cat.photo();
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::uint64_t row = i + 1;
        bool nulls = false;
        auto check_null = [&](double v, const char* col) {
            if (!std::isfinite(v)) {
                add("photo", row, std::string("null_") + col, "non-finite value");
                nulls = true;
            }
        };
        check_null(p.ra[i], "ra");
        check_null(p.dec[i], "dec");
        check_null(p.rowv[i], "rowv");
        check_null(p.colv[i], "colv");
        for (int b = 0; b < kBandCount; ++b) {
            std::string suffix = std::string("_") + std::string(kBandNames[b]);
            if (!std::isfinite(p.modelMag[b][i]))
                add("photo", row, "null_modelMag" + suffix, "non-finite value");
            if (!std::isfinite(p.modelMagErr[b][i]))
                add("photo", row, "null_modelMagErr" + suffix, "non-finite value");
            if (!std::isfinite(p.fiberMag[b][i]))
                add("photo", row, "null_fiberMag" + suffix, "non-finite value");
            if (!std::isfinite(p.q[b][i]))
                add("photo", row, "null_q" + suffix, "non-finite value");
            if (!std::isfinite(p.u[b][i]))
                add("photo", row, "null_u" + suffix, "non-finite value");
            if (!std::isfinite(p.isoA[b][i]))
                add("photo", row, "null_isoA" + suffix, "non-finite value");
            if (!std::isfinite(p.isoB[b][i]))
                add("photo", row, "null_isoB" + suffix, "non-finite value");
        }
        if (!cat.has_field(p.fieldID[i])) {
            add("photo", row, "fk_fieldID",
                "fieldID " + std::to_string(p.fieldID[i]) + " not in field table");
        }
        if (p.type[i] > 3) {
            add("photo", row, "range_type", "type byte " + std::to_string(p.type[i]));
        }
        if (nulls) continue;
        if (!(p.dec[i] >= -90.0 && p.dec[i] <= 90.0)) {
            add("photo", row, "range_dec", double_to_string(p.dec[i]));
            continue;
        }
        UnitVector v = eq_to_vec(p.ra[i], p.dec[i]);
        if (std::abs(v.x - p.cx[i]) > 1e-9 || std::abs(v.y - p.cy[i]) > 1e-9 ||
            std::abs(v.z - p.cz[i]) > 1e-9) {
            add("photo", row, "derived_cxyz", "stored unit vector != eq_to_vec(ra, dec)");
        }
        std::uint64_t want = lookup_id(v, cat.index_depth()).value();
        if (p.htmID[i] != want) {
            add("photo", row, "derived_htmID",
                "stored " + std::to_string(p.htmID[i]) + ", recomputed " +
                    std::to_string(want));
        }
    }

    const auto& spec_objs = cat.spec_objs();
    for (std::size_t i = 0; i < spec_objs.size(); ++i) {
        const auto& r = spec_objs[i];
        std::uint64_t row = i + 1;
        if (!std::isfinite(r.z)) add("specObj", row, "null_z", "non-finite value");
        if (!cat.has_plate(r.plateID)) {
            add("specObj", row, "fk_plateID",
                "plateID " + std::to_string(r.plateID) + " not in plate table");
        }
        if (r.bestObjID != 0 && !cat.has_photo(r.bestObjID)) {
            add("specObj", row, "fk_bestObjID",
                "bestObjID " + std::to_string(r.bestObjID) + " not in photo table");
        }
    }

    const auto& spec_lines = cat.spec_lines();
    for (std::size_t i = 0; i < spec_lines.size(); ++i) {
        const auto& r = spec_lines[i];
        std::uint64_t row = i + 1;
        if (!std::isfinite(r.wavelength))
            add("specLine", row, "null_wavelength", "non-finite value");
        if (!std::isfinite(r.ew)) add("specLine", row, "null_ew", "non-finite value");
        if (!cat.has_spec_obj(r.specObjID)) {
            add("specLine", row, "fk_specObjID",
                "specObjID " + std::to_string(r.specObjID) + " not in specObj table");
        }
    }

    const auto& neighbors = cat.neighbors();
    std::unordered_set<std::pair<std::uint64_t, std::uint64_t>, PairHash> pairs;
    pairs.reserve(neighbors.size());
    for (const auto& r : neighbors) pairs.insert({r.objID, r.neighborObjID});
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
        const auto& r = neighbors[i];
        std::uint64_t row = i + 1;
        if (!std::isfinite(r.distance) || r.distance < 0 ||
            r.distance > kNeighborRadiusArcmin) {
            add("neighbors", row, "range_distance", double_to_string(r.distance));
        }
        if (r.objID == r.neighborObjID) {
            add("neighbors", row, "self_pair", std::to_string(r.objID));
        }
        if (!cat.has_photo(r.objID)) {
            add("neighbors", row, "fk_objID",
                "objID " + std::to_string(r.objID) + " not in photo table");
        }
        if (!cat.has_photo(r.neighborObjID)) {
            add("neighbors", row, "fk_neighborObjID",
                "neighborObjID " + std::to_string(r.neighborObjID) +
                    " not in photo table");
        }
        if (!pairs.count({r.neighborObjID, r.objID})) {
            add("neighbors", row, "symmetry",
                "missing reverse pair (" + std::to_string(r.neighborObjID) + ", " +
                    std::to_string(r.objID) + ")");
        }
    }

    return out;
}

Loader::Loader(Catalog& cat, std::string journal_path, std::string trace_dir)
    : cat_(cat), journal_path_(std::move(journal_path)), trace_dir_(std::move(trace_dir)) {
    if (!trace_dir_.empty()) {
        std::filesystem::create_directories(trace_dir_);
    }
    std::ifstream in(journal_path_);
    if (!in) return;  // fresh journal
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ParseError("journal line " + std::to_string(line_no) +
                             " is not valid JSON: " + journal_path_);
        }
        std::string kind = j.value("kind", "");
        if (kind == "load") {
            LoadEvent ev;
            ev.eventID = j.at("eventID").get<std::uint64_t>();
            ev.table = j.at("table").get<std::string>();
            ev.startStamp = j.at("startStamp").get<std::uint64_t>();
            ev.stopStamp = j.at("stopStamp").get<std::uint64_t>();
            ev.sourceRows = j.at("sourceRows").get<std::uint64_t>();
            ev.insertedRows = j.at("insertedRows").get<std::uint64_t>();
            ev.status = j.at("status").get<std::string>();
            ev.tracePath = j.value("tracePath", "");
            events_.push_back(std::move(ev));
            next_event_id_ = std::max(next_event_id_, events_.back().eventID + 1);
            next_stamp_ = std::max(next_stamp_, events_.back().stopStamp + 1);
        } else if (kind == "undo") {
            std::uint64_t target = j.at("target").get<std::uint64_t>();
            std::uint64_t id = j.at("eventID").get<std::uint64_t>();
            next_event_id_ = std::max(next_event_id_, id + 1);
            for (auto& ev : events_) {
                if (ev.eventID == target) ev.status = "undone";
            }
        } else {
            throw ParseError("journal line " + std::to_string(line_no) +
                             " has unknown kind '" + kind + "'");
        }
    }
}

std::string Loader::trace_path_for(std::uint64_t event_id) const {
    std::filesystem::path p(trace_dir_.empty() ? "." : trace_dir_);
    return (p / ("event_" + std::to_string(event_id) + ".trace")).string();
}

void Loader::journal_load(const LoadEvent& ev) {
    json j{{"kind", "load"},
           {"eventID", ev.eventID},
           {"table", ev.table},
           {"startStamp", ev.startStamp},
           {"stopStamp", ev.stopStamp},
           {"sourceRows", ev.sourceRows},
           {"insertedRows", ev.insertedRows},
           {"status", ev.status},
           {"tracePath", ev.tracePath}};
    std::ofstream out(journal_path_, std::ios::app);
    if (!out) throw Error("cannot append to journal: " + journal_path_);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw Error("journal write failed: " + journal_path_);
}

void Loader::journal_undo(std::uint64_t target, std::size_t removed) {
    json j{{"kind", "undo"},
           {"eventID", next_event_id_++},
           {"target", target},
           {"removedRows", removed}};
    std::ofstream out(journal_path_, std::ios::app);
    if (!out) throw Error("cannot append to journal: " + journal_path_);
    out << j.dump() << '\n';
    out.flush();
    if (!out) throw Error("journal write failed: " + journal_path_);
}

LoadEvent Loader::load_csv(TableId table, const std::string& csv_path) {
    LoadEvent ev;
    ev.eventID = next_event_id_++;
    ev.table = std::string(table_name(table));
    ev.tracePath = trace_path_for(ev.eventID);
    ev.startStamp = next_stamp_;

    std::vector<std::string> trace;
    std::vector<std::string> expected = Catalog::csv_columns(table);

    auto fail = [&](const std::string& why) {
        trace.push_back("0,file," + why);
        ev.stopStamp = ev.startStamp;
        next_stamp_ = ev.stopStamp + 1;
        ev.status = "failed";
        ev.insertedRows = 0;
        std::ofstream tf(ev.tracePath, std::ios::trunc);
        for (const auto& l : trace) tf << l << '\n';
        journal_load(ev);
        events_.push_back(ev);
        return ev;
    };

    auto file = read_csv(csv_path);
    if (!file) return fail("cannot read " + csv_path);
    ev.sourceRows = file->rows.size();
    if (file->header != expected) {
        return fail("header mismatch: expected '" + join_csv(expected) + "', got '" +
                    join_csv(file->header) + "'");
    }

    // Row-level acceptance: good rows go in, bad rows go to the trace.
    std::vector<PhotoObj> photo_rows;
    std::vector<FieldRow> field_rows;
    std::vector<PlateRow> plate_rows;
    std::vector<SpecObjRow> spec_obj_rows;
    std::vector<SpecLineRow> spec_line_rows;
    std::vector<NeighborRow> neighbor_rows;
    std::unordered_set<std::uint64_t> batch_keys;

    std::uint64_t row_number = 0;
    for (const std::string& line : file->rows) {
        ++row_number;
        std::vector<std::string> cells = split_csv(line);
        if (cells.size() != expected.size()) {
            trace.push_back(std::to_string(row_number) + ",column_count,got " +
                            std::to_string(cells.size()) + ", want " +
                            std::to_string(expected.size()));
            continue;
        }
        RowCtx ctx{cells, expected, row_number, trace};
        switch (table) {
            case TableId::photo: {
                PhotoObj o;
                auto objID = ctx.u64(0);
                auto fieldID = ctx.u64(1);
                auto run = ctx.i32(2);
                auto camcol = ctx.i32(3);
                auto field = ctx.i32(4);
                auto ra = ctx.f64(5);
                auto dec = ctx.f64(6);
                ObjType type = ObjType::star;
                if (auto t = ctx.raw(7)) {
                    try {
                        type = obj_type_from_name(*t);
                    } catch (const ParseError& e) {
                        ctx.reject("parse_type", e.what());
                    }
                }
                auto flags = ctx.u64(8);
                auto parentID = ctx.u64(9);
                auto rowv = ctx.f64(10);
                auto colv = ctx.f64(11);
                std::size_t c = 12;
                std::array<std::array<double, kBandCount>*, 7> fams{
                    &o.modelMag, &o.modelMagErr, &o.fiberMag, &o.q,
                    &o.u,        &o.isoA,        &o.isoB};
                for (auto* fam : fams) {
                    for (int b = 0; b < kBandCount; ++b) {
                        if (auto v = ctx.f64(c++)) (*fam)[b] = *v;
                    }
                }
                if (ctx.rejected) break;
                if (!(*dec >= -90.0 && *dec <= 90.0)) {
                    ctx.reject("range_dec", double_to_string(*dec));
                    break;
                }
                if (cat_.has_photo(*objID) || batch_keys.count(*objID)) {
                    ctx.reject("duplicate_objID", std::to_string(*objID));
                    break;
                }
                if (!cat_.has_field(*fieldID)) {
                    ctx.reject("fk_fieldID", "fieldID " + std::to_string(*fieldID) +
                                                 " not in field table");
                    break;
                }
                o.objID = *objID;
                o.fieldID = *fieldID;
                o.run = *run;
                o.camcol = *camcol;
                o.field = *field;
                o.ra = normalize_ra(*ra);
                o.dec = *dec;
                UnitVector v = eq_to_vec(o.ra, o.dec);
                o.cx = v.x;
                o.cy = v.y;
                o.cz = v.z;
                o.htmID = lookup_id(v, cat_.index_depth()).value();
                o.type = type;
                o.flags = *flags;
                o.parentID = *parentID;
                o.rowv = *rowv;
                o.colv = *colv;
                batch_keys.insert(o.objID);
                photo_rows.push_back(o);
                break;
            }
            case TableId::field: {
                auto fieldID = ctx.u64(0);
                auto run = ctx.i32(1);
                auto camcol = ctx.i32(2);
                auto field = ctx.i32(3);
                if (ctx.rejected) break;
                if (cat_.has_field(*fieldID) || batch_keys.count(*fieldID)) {
                    ctx.reject("duplicate_fieldID", std::to_string(*fieldID));
                    break;
                }
                batch_keys.insert(*fieldID);
                field_rows.push_back({*fieldID, *run, *camcol, *field, 0});
                break;
            }
            case TableId::plate: {
                auto plateID = ctx.u64(0);
                if (ctx.rejected) break;
                if (cat_.has_plate(*plateID) || batch_keys.count(*plateID)) {
                    ctx.reject("duplicate_plateID", std::to_string(*plateID));
                    break;
                }
                batch_keys.insert(*plateID);
                plate_rows.push_back({*plateID, 0});
                break;
            }
            case TableId::spec_obj: {
                auto specObjID = ctx.u64(0);
                auto plateID = ctx.u64(1);
                auto bestObjID = ctx.u64(2);
                auto z = ctx.f64(3);
                if (ctx.rejected) break;
                if (cat_.has_spec_obj(*specObjID) || batch_keys.count(*specObjID)) {
                    ctx.reject("duplicate_specObjID", std::to_string(*specObjID));
                    break;
                }
                if (!cat_.has_plate(*plateID)) {
                    ctx.reject("fk_plateID", "plateID " + std::to_string(*plateID) +
                                                 " not in plate table");
                    break;
                }
                if (*bestObjID != 0 && !cat_.has_photo(*bestObjID)) {
                    ctx.reject("fk_bestObjID", "bestObjID " + std::to_string(*bestObjID) +
                                                   " not in photo table");
                    break;
                }
                batch_keys.insert(*specObjID);
                spec_obj_rows.push_back({*specObjID, *plateID, *bestObjID, *z, 0});
                break;
            }
            case TableId::spec_line: {
                auto lineID = ctx.u64(0);
                auto specObjID = ctx.u64(1);
                auto wavelength = ctx.f64(2);
                auto ew = ctx.f64(3);
                if (ctx.rejected) break;
                if (!cat_.has_spec_obj(*specObjID)) {
                    ctx.reject("fk_specObjID", "specObjID " + std::to_string(*specObjID) +
                                                   " not in specObj table");
                    break;
                }
                spec_line_rows.push_back({*lineID, *specObjID, *wavelength, *ew, 0});
                break;
            }
            case TableId::neighbors: {
                auto objID = ctx.u64(0);
                auto neighborObjID = ctx.u64(1);
                auto distance = ctx.f64(2);
                if (ctx.rejected) break;
                if (*objID == *neighborObjID) {
                    ctx.reject("self_pair", std::to_string(*objID));
                    break;
                }
                if (*distance < 0 || *distance > kNeighborRadiusArcmin) {
                    ctx.reject("range_distance", double_to_string(*distance));
                    break;
                }
                if (!cat_.has_photo(*objID)) {
                    ctx.reject("fk_objID", "objID " + std::to_string(*objID) +
                                               " not in photo table");
                    break;
                }
                if (!cat_.has_photo(*neighborObjID)) {
                    ctx.reject("fk_neighborObjID",
                               "neighborObjID " + std::to_string(*neighborObjID) +
                                   " not in photo table");
                    break;
                }
                neighbor_rows.push_back({*objID, *neighborObjID, *distance, 0});
                break;
            }
        }
    }

    // Stamp accepted rows in file order and commit in one batch.
    std::uint64_t stamp = ev.startStamp;
    auto stamp_rows = [&](auto& rows) {
        for (auto& r : rows) r.loadStamp = stamp++;
    };
    stamp_rows(photo_rows);
    stamp_rows(field_rows);
    stamp_rows(plate_rows);
    stamp_rows(spec_obj_rows);
    stamp_rows(spec_line_rows);
    stamp_rows(neighbor_rows);

    switch (table) {
        case TableId::photo: cat_.append_photo(photo_rows); ev.insertedRows = photo_rows.size(); break;
        case TableId::field: cat_.append_fields(field_rows); ev.insertedRows = field_rows.size(); break;
        case TableId::plate: cat_.append_plates(plate_rows); ev.insertedRows = plate_rows.size(); break;
        case TableId::spec_obj: cat_.append_spec_objs(spec_obj_rows); ev.insertedRows = spec_obj_rows.size(); break;
        case TableId::spec_line: cat_.append_spec_lines(spec_line_rows); ev.insertedRows = spec_line_rows.size(); break;
        case TableId::neighbors: cat_.append_neighbors(neighbor_rows); ev.insertedRows = neighbor_rows.size(); break;
    }

    ev.stopStamp = ev.insertedRows ? ev.startStamp + ev.insertedRows - 1 : ev.startStamp;
    next_stamp_ = ev.stopStamp + 1;
    ev.status = "ok";

    std::ofstream tf(ev.tracePath, std::ios::trunc);
    for (const auto& l : trace) tf << l << '\n';

    journal_load(ev);
    events_.push_back(ev);
    return ev;
}

LoadEvent Loader::insert_neighbors(std::vector<NeighborRow> rows) {
    if (!cat_.neighbors().empty()) {
        throw ConfigError("neighbors table is not empty; undo the previous build first");
    }
    LoadEvent ev;
    ev.eventID = next_event_id_++;
    ev.table = std::string(table_name(TableId::neighbors));
    ev.startStamp = next_stamp_;
    std::uint64_t stamp = ev.startStamp;
    for (auto& r : rows) r.loadStamp = stamp++;
    cat_.append_neighbors(rows);
    ev.sourceRows = rows.size();
    ev.insertedRows = rows.size();
    ev.stopStamp = rows.empty() ? ev.startStamp : ev.startStamp + rows.size() - 1;
    next_stamp_ = ev.stopStamp + 1;
    ev.status = "ok";
    journal_load(ev);
    events_.push_back(ev);
    return ev;
}

std::size_t Loader::undo(std::uint64_t event_id) {
    LoadEvent* ev = nullptr;
    for (auto& e : events_) {
        if (e.eventID == event_id) ev = &e;
    }
    if (!ev) {
        throw UnknownEventError("no load event with id " + std::to_string(event_id));
    }
    if (ev->status == "undone") {
        throw AlreadyUndoneError("event " + std::to_string(event_id) +
                                 " is already undone");
    }

    TableId table = table_from_name(ev->table);
    std::uint64_t lo = ev->startStamp, hi = ev->stopStamp;

    // Collect the keys about to vanish and refuse if anything still points
    // at them (dependents must be undone first).
    auto conflict = [&](std::size_t n, const std::string& what) {
        if (n) {
            throw UndoConflictError("cannot undo event " + std::to_string(event_id) +
                                    ": " + std::to_string(n) + " " + what);
        }
    };
    switch (table) {
        case TableId::field: {
            std::unordered_set<std::uint64_t> gone;
            for (const auto& r : cat_.fields()) {
                if (r.loadStamp >= lo && r.loadStamp <= hi) gone.insert(r.fieldID);
            }
            std::size_t n = 0;
            for (auto id : cat_.photo().fieldID) n += gone.count(id);
            conflict(n, "photo rows still reference its fields");
            break;
        }
        case TableId::plate: {
            std::unordered_set<std::uint64_t> gone;
            for (const auto& r : cat_.plates()) {
                if (r.loadStamp >= lo && r.loadStamp <= hi) gone.insert(r.plateID);
            }
            std::size_t n = 0;
            for (const auto& r : cat_.spec_objs()) n += gone.count(r.plateID);
            conflict(n, "specObj rows still reference its plates");
            break;
        }
        case TableId::spec_obj: {
            std::unordered_set<std::uint64_t> gone;
            for (const auto& r : cat_.spec_objs()) {
                if (r.loadStamp >= lo && r.loadStamp <= hi) gone.insert(r.specObjID);
            }
            std::size_t n = 0;
            for (const auto& r : cat_.spec_lines()) n += gone.count(r.specObjID);
            conflict(n, "specLine rows still reference its spectra");
            break;
        }
        case TableId::photo: {
            std::unordered_set<std::uint64_t> gone;
            const auto& p = cat_.photo();
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (p.loadStamp[i] >= lo && p.loadStamp[i] <= hi) {
                    gone.insert(p.objID[i]);
                }
            }
            std::size_t n = 0;
            for (const auto& r : cat_.neighbors()) {
                n += gone.count(r.objID) + gone.count(r.neighborObjID);
            }
            conflict(n, "neighbor pairs still reference its objects");
            n = 0;
            for (const auto& r : cat_.spec_objs()) {
                if (r.bestObjID != 0) n += gone.count(r.bestObjID);
            }
            conflict(n, "specObj rows still reference its objects");
            break;
        }
        case TableId::spec_line:
        case TableId::neighbors: break;  // nothing references these
    }

    std::size_t removed = cat_.remove_stamp_window(table, lo, hi);
    journal_undo(event_id, removed);
    ev->status = "undone";
    return removed;
}

}  // namespace skycat
