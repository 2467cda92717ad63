#include "skycat/catalog.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "skycat/errors.hpp"

namespace skycat {

namespace {

constexpr std::uint32_t kMagic = 0x54414353;  // "SCAT"
constexpr std::uint32_t kFormatVersion = 1;

constexpr std::uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

struct FnvSink {
    std::uint64_t h = kFnvOffset;
    void put_bytes(const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= kFnvPrime;
        }
    }
};

struct FileSink {
    std::ostream& out;
    void put_bytes(const void* p, std::size_t n) {
        out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    }
};

// All scalars cross the sink in little-endian fixed width.
template <class Sink>
void put_u64(Sink& s, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    s.put_bytes(b, 8);
}

template <class Sink>
void put_u32(Sink& s, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    s.put_bytes(b, 4);
}

template <class Sink>
void put_i32(Sink& s, std::int32_t v) {
    put_u32(s, static_cast<std::uint32_t>(v));
}

template <class Sink>
void put_f64(Sink& s, double v) {
    put_u64(s, std::bit_cast<std::uint64_t>(v));
}

template <class Sink>
void put_u8(Sink& s, std::uint8_t v) {
    s.put_bytes(&v, 1);
}

template <class Sink>
void put_string(Sink& s, const std::string& v) {
    put_u32(s, static_cast<std::uint32_t>(v.size()));
    s.put_bytes(v.data(), v.size());
}

template <class Sink>
void put_column(Sink& s, const std::vector<std::uint64_t>& c) {
    for (auto v : c) put_u64(s, v);
}
template <class Sink>
void put_column(Sink& s, const std::vector<std::int32_t>& c) {
    for (auto v : c) put_i32(s, v);
}
template <class Sink>
void put_column(Sink& s, const std::vector<double>& c) {
    for (auto v : c) put_f64(s, v);
}
template <class Sink>
void put_column(Sink& s, const std::vector<std::uint8_t>& c) {
    if (!c.empty()) s.put_bytes(c.data(), c.size());
}

struct Reader {
    std::istream& in;
    void get_bytes(void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in.gcount()) != n) {
            throw TruncatedFileError("catalog file ends mid-record");
        }
    }
    std::uint64_t get_u64() {
        unsigned char b[8];
        get_bytes(b, 8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    std::uint32_t get_u32() {
        unsigned char b[4];
        get_bytes(b, 4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    std::int32_t get_i32() { return static_cast<std::int32_t>(get_u32()); }
    double get_f64() { return std::bit_cast<double>(get_u64()); }
    std::uint8_t get_u8() {
        std::uint8_t v;
        get_bytes(&v, 1);
        return v;
    }
    std::string get_string() {
        std::uint32_t n = get_u32();
        if (n > (1u << 20)) throw ParseError("unreasonable string length in catalog file");
        std::string s(n, '\0');
        get_bytes(s.data(), n);
        return s;
    }
    void get_column(std::vector<std::uint64_t>& c, std::size_t n) {
        c.resize(n);
        for (auto& v : c) v = get_u64();
    }
    void get_column(std::vector<std::int32_t>& c, std::size_t n) {
        c.resize(n);
        for (auto& v : c) v = get_i32();
    }
    void get_column(std::vector<double>& c, std::size_t n) {
        c.resize(n);
        for (auto& v : c) v = get_f64();
    }
    void get_column(std::vector<std::uint8_t>& c, std::size_t n) {
        c.resize(n);
        if (n) get_bytes(c.data(), n);
    }
};

// Visits every photo column in canonical order; the single place that order
// is defined for serialization, digesting, permutation, and compaction.
template <class Cols, class F>
void visit_photo_columns(Cols& p, F&& f) {
    f(p.objID);
    f(p.fieldID);
    f(p.run);
    f(p.camcol);
    f(p.field);
    f(p.ra);
    f(p.dec);
    f(p.cx);
    f(p.cy);
    f(p.cz);
    f(p.htmID);
    f(p.type);
    f(p.flags);
    f(p.parentID);
    f(p.rowv);
    f(p.colv);
    for (auto& c : p.modelMag) f(c);
    for (auto& c : p.modelMagErr) f(c);
    for (auto& c : p.fiberMag) f(c);
    for (auto& c : p.q) f(c);
    for (auto& c : p.u) f(c);
    for (auto& c : p.isoA) f(c);
    for (auto& c : p.isoB) f(c);
    f(p.loadStamp);
}

template <class T>
void apply_permutation(std::vector<T>& col, const std::vector<std::size_t>& perm) {
    std::vector<T> next(col.size());
    for (std::size_t i = 0; i < perm.size(); ++i) next[i] = col[perm[i]];
    col = std::move(next);
}

template <class T>
void compact(std::vector<T>& col, const std::vector<char>& keep) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < col.size(); ++i) {
        if (keep[i]) col[w++] = col[i];
    }
    col.resize(w);
}

template <class Row>
std::size_t erase_window(std::vector<Row>& rows, std::uint64_t lo, std::uint64_t hi) {
    std::size_t before = rows.size();
    std::erase_if(rows, [&](const Row& r) {
        return r.loadStamp >= lo && r.loadStamp <= hi;
    });
    return before - rows.size();
}

void csv_header(std::ostream& out, const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out << ',';
        out << names[i];
    }
    out << '\n';
}

}  // namespace

std::vector<std::string> Catalog::csv_columns(TableId t) {
    switch (t) {
        case TableId::photo: {
            std::vector<std::string> names{"objID", "fieldID", "run",      "camcol",
                                           "field", "ra",      "dec",      "type",
                                           "flags", "parentID", "rowv",    "colv"};
            for (const char* fam : {"modelMag", "modelMagErr", "fiberMag", "q", "u",
                                    "isoA", "isoB"}) {
                for (auto band : kBandNames) {
                    names.push_back(std::string(fam) + "_" + std::string(band));
                }
            }
            return names;
        }
        case TableId::field: return {"fieldID", "run", "camcol", "field"};
        case TableId::plate: return {"plateID"};
        case TableId::spec_obj: return {"specObjID", "plateID", "bestObjID", "z"};
        case TableId::spec_line: return {"lineID", "specObjID", "wavelength", "ew"};
        case TableId::neighbors: return {"objID", "neighborObjID", "distance"};
    }
    return {};
}

std::string double_to_string(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string_view obj_type_name(ObjType t) {
    switch (t) {
        case ObjType::star: return "star";
        case ObjType::galaxy: return "galaxy";
        case ObjType::trail: return "trail";
        case ObjType::defect: return "defect";
    }
    return "star";
}

ObjType obj_type_from_name(std::string_view name) {
    if (name == "star") return ObjType::star;
    if (name == "galaxy") return ObjType::galaxy;
    if (name == "trail") return ObjType::trail;
    if (name == "defect") return ObjType::defect;
    throw ParseError("unknown object type '" + std::string(name) +
                     "' (star, galaxy, trail, defect)");
}

FlagDictionary FlagDictionary::standard() {
    FlagDictionary d;
    d.define("primary", 0);
    d.define("ok_run", 1);
    d.define("saturated", 2);
    d.define("bright", 3);
    d.define("blended", 4);
    d.define("child", 5);
    return d;
}

void FlagDictionary::define(const std::string& name, int bit) {
    if (bit < 0 || bit > 63) throw ConfigError("flag bit out of [0, 63]");
    for (const auto& [n, b] : bits_) {
        if (b == bit && n != name) {
            throw ConfigError("flag bit " + std::to_string(bit) + " already taken by '" +
                              n + "'");
        }
    }
    auto it = bits_.find(name);
    if (it != bits_.end() && it->second != bit) {
        throw ConfigError("flag '" + name + "' already bound to bit " +
                          std::to_string(it->second));
    }
    bits_[name] = bit;
}

std::uint64_t FlagDictionary::mask(std::string_view name) const {
    auto it = bits_.find(std::string(name));
    if (it == bits_.end()) {
        std::string known;
        for (const auto& [n, b] : entries()) {
            (void)b;
            if (!known.empty()) known += ", ";
            known += n;
        }
        throw LookupError("unknown flag '" + std::string(name) + "' (known: " + known +
                          ")");
    }
    return std::uint64_t{1} << it->second;
}

bool FlagDictionary::has(std::string_view name) const {
    return bits_.count(std::string(name)) != 0;
}

std::vector<std::pair<std::string, int>> FlagDictionary::entries() const {
    std::vector<std::pair<std::string, int>> e(bits_.begin(), bits_.end());
    std::sort(e.begin(), e.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return e;
}

PhotoObj PhotoColumns::row(std::size_t i) const {
    PhotoObj o;
    o.objID = objID[i];
    o.fieldID = fieldID[i];
    o.run = run[i];
    o.camcol = camcol[i];
    o.field = field[i];
    o.ra = ra[i];
    o.dec = dec[i];
    o.cx = cx[i];
    o.cy = cy[i];
    o.cz = cz[i];
    o.htmID = htmID[i];
    o.type = static_cast<ObjType>(type[i]);
    o.flags = flags[i];
    o.parentID = parentID[i];
    o.rowv = rowv[i];
    o.colv = colv[i];
    for (int b = 0; b < kBandCount; ++b) {
        o.modelMag[b] = modelMag[b][i];
        o.modelMagErr[b] = modelMagErr[b][i];
        o.fiberMag[b] = fiberMag[b][i];
        o.q[b] = q[b][i];
        o.u[b] = u[b][i];
        o.isoA[b] = isoA[b][i];
        o.isoB[b] = isoB[b][i];
    }
    o.loadStamp = loadStamp[i];
    return o;
}

void PhotoColumns::push_back(const PhotoObj& o) {
    objID.push_back(o.objID);
    fieldID.push_back(o.fieldID);
    run.push_back(o.run);
    camcol.push_back(o.camcol);
    field.push_back(o.field);
    ra.push_back(o.ra);
    dec.push_back(o.dec);
    cx.push_back(o.cx);
    cy.push_back(o.cy);
    cz.push_back(o.cz);
    htmID.push_back(o.htmID);
    type.push_back(static_cast<std::uint8_t>(o.type));
    flags.push_back(o.flags);
    parentID.push_back(o.parentID);
    rowv.push_back(o.rowv);
    colv.push_back(o.colv);
    for (int b = 0; b < kBandCount; ++b) {
        modelMag[b].push_back(o.modelMag[b]);
        modelMagErr[b].push_back(o.modelMagErr[b]);
        fiberMag[b].push_back(o.fiberMag[b]);
        q[b].push_back(o.q[b]);
        u[b].push_back(o.u[b]);
        isoA[b].push_back(o.isoA[b]);
        isoB[b].push_back(o.isoB[b]);
    }
    loadStamp.push_back(o.loadStamp);
}

std::size_t PhotoColumns::row_bytes() {
    // 8B: objID fieldID htmID flags parentID loadStamp + 40 doubles
    // 4B: run camcol field ; 1B: type
    return 6 * 8 + (7 + 7 * kBandCount) * 8 + 3 * 4 + 1;
}

View view_from_name(std::string_view name) {
    if (name == "all") return View::all;
    if (name == "photoPrimary" || name == "photoprimary") return View::photoPrimary;
    if (name == "star") return View::star;
    if (name == "galaxy") return View::galaxy;
    throw ParseError("unknown view '" + std::string(name) +
                     "' (all, photoPrimary, star, galaxy)");
}

std::string_view view_name(View v) {
    switch (v) {
        case View::all: return "all";
        case View::photoPrimary: return "photoPrimary";
        case View::star: return "star";
        case View::galaxy: return "galaxy";
    }
    return "all";
}

TableId table_from_name(std::string_view name) {
    if (name == "photo" || name == "photoObj" || name == "photoobj") return TableId::photo;
    if (name == "field") return TableId::field;
    if (name == "plate") return TableId::plate;
    if (name == "specObj" || name == "specobj") return TableId::spec_obj;
    if (name == "specLine" || name == "specline") return TableId::spec_line;
    if (name == "neighbors") return TableId::neighbors;
    throw ParseError("unknown table '" + std::string(name) +
                     "' (photo, field, plate, specObj, specLine, neighbors)");
}

std::string_view table_name(TableId t) {
    switch (t) {
        case TableId::photo: return "photo";
        case TableId::field: return "field";
        case TableId::plate: return "plate";
        case TableId::spec_obj: return "specObj";
        case TableId::spec_line: return "specLine";
        case TableId::neighbors: return "neighbors";
    }
    return "photo";
}

Catalog::Catalog(int index_depth, FlagDictionary dict)
    : index_depth_(index_depth), dict_(std::move(dict)) {
    if (index_depth < 0 || index_depth > kMaxHtmDepth) {
        throw DepthLimitError("catalog index depth out of [0, 20]");
    }
    for (const char* required : {"primary", "ok_run", "saturated"}) {
        if (!dict_.has(required)) {
            throw ConfigError(std::string("flag dictionary missing required '") +
                              required + "'");
        }
    }
}

std::size_t Catalog::row_count(TableId t) const {
    switch (t) {
        case TableId::photo: return photo_.size();
        case TableId::field: return fields_.size();
        case TableId::plate: return plates_.size();
        case TableId::spec_obj: return spec_objs_.size();
        case TableId::spec_line: return spec_lines_.size();
        case TableId::neighbors: return neighbors_.size();
    }
    return 0;
}

std::size_t Catalog::photo_row_of(std::uint64_t objID) const {
    auto it = photo_index_.find(objID);
    if (it == photo_index_.end()) {
        throw LookupError("no photo object with objID " + std::to_string(objID));
    }
    return it->second;
}

bool Catalog::view_pass(View v, std::uint64_t flags, ObjType type) const {
    if (v == View::all) return true;
    std::uint64_t pmask = dict_.mask("primary") | dict_.mask("ok_run");
    bool prim = (flags & pmask) == pmask;
    switch (v) {
        case View::photoPrimary: return prim;
        case View::star: return prim && type == ObjType::star;
        case View::galaxy: return prim && type == ObjType::galaxy;
        default: return true;
    }
}

bool Catalog::view_pass(View v, std::size_t photo_row) const {
    return view_pass(v, photo_.flags[photo_row],
                     static_cast<ObjType>(photo_.type[photo_row]));
}

std::vector<std::pair<std::size_t, std::size_t>> Catalog::range_query_spans(
    const HtmRangeSet& rs) const {
    if (rs.index_depth != index_depth_) {
        throw ConfigError("range set depth " + std::to_string(rs.index_depth) +
                          " != catalog index depth " + std::to_string(index_depth_));
    }
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    const auto& ids = photo_.htmID;
    for (const auto& [lo, hi] : rs.ranges) {
        auto b = std::lower_bound(ids.begin(), ids.end(), lo);
        auto e = std::upper_bound(b, ids.end(), hi);
        if (b != e) {
            spans.emplace_back(static_cast<std::size_t>(b - ids.begin()),
                               static_cast<std::size_t>(e - ids.begin()));
        }
    }
    return spans;
}

std::vector<PhotoObj> Catalog::range_query(const HtmRangeSet& rs) const {
    std::vector<PhotoObj> out;
    for (const auto& [b, e] : range_query_spans(rs)) {
        for (std::size_t i = b; i < e; ++i) out.push_back(photo_.row(i));
    }
    return out;
}

void Catalog::append_photo(const std::vector<PhotoObj>& rows) {
    for (const auto& r : rows) photo_.push_back(r);
    // Re-sort by (htmID, objID): a total order (objID unique), so any
    // insert/remove sequence reaching the same row set yields the same bytes.
    std::vector<std::size_t> perm(photo_.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
        if (photo_.htmID[a] != photo_.htmID[b]) return photo_.htmID[a] < photo_.htmID[b];
        return photo_.objID[a] < photo_.objID[b];
    });
    bool identity = true;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] != i) {
            identity = false;
            break;
        }
    }
    if (!identity) {
        visit_photo_columns(photo_, [&](auto& col) { apply_permutation(col, perm); });
    }
    rebuild_photo_index();
}

void Catalog::append_fields(const std::vector<FieldRow>& rows) {
    for (const auto& r : rows) {
        fields_.push_back(r);
        field_keys_.insert(r.fieldID);
    }
}

void Catalog::append_plates(const std::vector<PlateRow>& rows) {
    for (const auto& r : rows) {
        plates_.push_back(r);
        plate_keys_.insert(r.plateID);
    }
}

void Catalog::append_spec_objs(const std::vector<SpecObjRow>& rows) {
    for (const auto& r : rows) {
        spec_objs_.push_back(r);
        spec_obj_keys_.insert(r.specObjID);
    }
}

void Catalog::append_spec_lines(const std::vector<SpecLineRow>& rows) {
    spec_lines_.insert(spec_lines_.end(), rows.begin(), rows.end());
}

void Catalog::append_neighbors(const std::vector<NeighborRow>& rows) {
    neighbors_.insert(neighbors_.end(), rows.begin(), rows.end());
}

std::size_t Catalog::remove_stamp_window(TableId t, std::uint64_t lo, std::uint64_t hi) {
    switch (t) {
        case TableId::photo: {
            std::vector<char> keep(photo_.size());
            std::size_t removed = 0;
            for (std::size_t i = 0; i < photo_.size(); ++i) {
                bool in = photo_.loadStamp[i] >= lo && photo_.loadStamp[i] <= hi;
                keep[i] = !in;
                removed += in;
            }
            if (removed) {
                visit_photo_columns(photo_, [&](auto& col) { compact(col, keep); });
                rebuild_photo_index();
            }
            return removed;
        }
        case TableId::field: {
            std::size_t n = erase_window(fields_, lo, hi);
            if (n) {
                field_keys_.clear();
                for (const auto& r : fields_) field_keys_.insert(r.fieldID);
            }
            return n;
        }
        case TableId::plate: {
            std::size_t n = erase_window(plates_, lo, hi);
            if (n) {
                plate_keys_.clear();
                for (const auto& r : plates_) plate_keys_.insert(r.plateID);
            }
            return n;
        }
        case TableId::spec_obj: {
            std::size_t n = erase_window(spec_objs_, lo, hi);
            if (n) {
                spec_obj_keys_.clear();
                for (const auto& r : spec_objs_) spec_obj_keys_.insert(r.specObjID);
            }
            return n;
        }
        case TableId::spec_line: return erase_window(spec_lines_, lo, hi);
        case TableId::neighbors: return erase_window(neighbors_, lo, hi);
    }
    return 0;
}

void Catalog::rebuild_photo_index() {
    photo_index_.clear();
    photo_index_.reserve(photo_.size());
    for (std::size_t i = 0; i < photo_.size(); ++i) {
        photo_index_[photo_.objID[i]] = i;
    }
}

namespace {

// Everything that defines catalog content, in one canonical stream shared by
// save() and content_digest().
template <class Sink>
void serialize_content(const Catalog& cat, const PhotoColumns& photo,
                       const std::vector<FieldRow>& fields,
                       const std::vector<PlateRow>& plates,
                       const std::vector<SpecObjRow>& spec_objs,
                       const std::vector<SpecLineRow>& spec_lines,
                       const std::vector<NeighborRow>& neighbors, Sink& sink) {
    put_u32(sink, static_cast<std::uint32_t>(cat.index_depth()));
    auto entries = cat.flags().entries();
    put_u32(sink, static_cast<std::uint32_t>(entries.size()));
    for (const auto& [name, bit] : entries) {
        put_string(sink, name);
        put_u32(sink, static_cast<std::uint32_t>(bit));
    }
    put_u64(sink, photo.size());
    put_u64(sink, fields.size());
    put_u64(sink, plates.size());
    put_u64(sink, spec_objs.size());
    put_u64(sink, spec_lines.size());
    put_u64(sink, neighbors.size());

    visit_photo_columns(photo, [&](const auto& col) { put_column(sink, col); });

    for (const auto& r : fields) put_u64(sink, r.fieldID);
    for (const auto& r : fields) put_i32(sink, r.run);
    for (const auto& r : fields) put_i32(sink, r.camcol);
    for (const auto& r : fields) put_i32(sink, r.field);
    for (const auto& r : fields) put_u64(sink, r.loadStamp);

    for (const auto& r : plates) put_u64(sink, r.plateID);
    for (const auto& r : plates) put_u64(sink, r.loadStamp);

    for (const auto& r : spec_objs) put_u64(sink, r.specObjID);
    for (const auto& r : spec_objs) put_u64(sink, r.plateID);
    for (const auto& r : spec_objs) put_u64(sink, r.bestObjID);
    for (const auto& r : spec_objs) put_f64(sink, r.z);
    for (const auto& r : spec_objs) put_u64(sink, r.loadStamp);

    for (const auto& r : spec_lines) put_u64(sink, r.lineID);
    for (const auto& r : spec_lines) put_u64(sink, r.specObjID);
    for (const auto& r : spec_lines) put_f64(sink, r.wavelength);
    for (const auto& r : spec_lines) put_f64(sink, r.ew);
    for (const auto& r : spec_lines) put_u64(sink, r.loadStamp);

    for (const auto& r : neighbors) put_u64(sink, r.objID);
    for (const auto& r : neighbors) put_u64(sink, r.neighborObjID);
    for (const auto& r : neighbors) put_f64(sink, r.distance);
    for (const auto& r : neighbors) put_u64(sink, r.loadStamp);
}

}  // namespace

std::uint64_t Catalog::content_digest() const {
    FnvSink sink;
    serialize_content(*this, photo_, fields_, plates_, spec_objs_, spec_lines_,
                      neighbors_, sink);
    return sink.h;
}

void Catalog::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write catalog file: " + path);
    FileSink sink{out};
    put_u32(sink, kMagic);
    put_u32(sink, kFormatVersion);
    serialize_content(*this, photo_, fields_, plates_, spec_objs_, spec_lines_,
                      neighbors_, sink);
    put_u64(sink, content_digest());
    out.flush();
    if (!out) throw Error("write failed: " + path);
}

Catalog Catalog::open(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open catalog file: " + path);
    Reader r{in};

    if (r.get_u32() != kMagic) throw ParseError("not a catalog file: " + path);
    std::uint32_t version = r.get_u32();
    if (version != kFormatVersion) {
        throw VersionMismatchError("catalog file version " + std::to_string(version) +
                                   ", this build reads version " +
                                   std::to_string(kFormatVersion));
    }

    std::uint32_t depth = r.get_u32();
    if (depth > static_cast<std::uint32_t>(kMaxHtmDepth)) {
        throw ParseError("catalog index depth out of range");
    }
    std::uint32_t nflags = r.get_u32();
    if (nflags > 64) throw ParseError("too many flag entries");
    FlagDictionary dict;
    for (std::uint32_t i = 0; i < nflags; ++i) {
        std::string name = r.get_string();
        std::uint32_t bit = r.get_u32();
        dict.define(name, static_cast<int>(bit));
    }

    Catalog cat(static_cast<int>(depth), std::move(dict));

    std::uint64_t nphoto = r.get_u64();
    std::uint64_t nfields = r.get_u64();
    std::uint64_t nplates = r.get_u64();
    std::uint64_t nspec = r.get_u64();
    std::uint64_t nlines = r.get_u64();
    std::uint64_t nneigh = r.get_u64();

    visit_photo_columns(cat.photo_, [&](auto& col) {
        r.get_column(col, static_cast<std::size_t>(nphoto));
    });

    cat.fields_.resize(nfields);
    for (auto& row : cat.fields_) row.fieldID = r.get_u64();
    for (auto& row : cat.fields_) row.run = r.get_i32();
    for (auto& row : cat.fields_) row.camcol = r.get_i32();
    for (auto& row : cat.fields_) row.field = r.get_i32();
    for (auto& row : cat.fields_) row.loadStamp = r.get_u64();

    cat.plates_.resize(nplates);
    for (auto& row : cat.plates_) row.plateID = r.get_u64();
    for (auto& row : cat.plates_) row.loadStamp = r.get_u64();

    cat.spec_objs_.resize(nspec);
    for (auto& row : cat.spec_objs_) row.specObjID = r.get_u64();
    for (auto& row : cat.spec_objs_) row.plateID = r.get_u64();
    for (auto& row : cat.spec_objs_) row.bestObjID = r.get_u64();
    for (auto& row : cat.spec_objs_) row.z = r.get_f64();
    for (auto& row : cat.spec_objs_) row.loadStamp = r.get_u64();

    cat.spec_lines_.resize(nlines);
    for (auto& row : cat.spec_lines_) row.lineID = r.get_u64();
    for (auto& row : cat.spec_lines_) row.specObjID = r.get_u64();
    for (auto& row : cat.spec_lines_) row.wavelength = r.get_f64();
    for (auto& row : cat.spec_lines_) row.ew = r.get_f64();
    for (auto& row : cat.spec_lines_) row.loadStamp = r.get_u64();

    cat.neighbors_.resize(nneigh);
    for (auto& row : cat.neighbors_) row.objID = r.get_u64();
    for (auto& row : cat.neighbors_) row.neighborObjID = r.get_u64();
    for (auto& row : cat.neighbors_) row.distance = r.get_f64();
    for (auto& row : cat.neighbors_) row.loadStamp = r.get_u64();

    std::uint64_t stored_digest = r.get_u64();
    if (in.peek() != std::ifstream::traits_type::eof()) {
        throw ParseError("trailing bytes after catalog footer");
    }

    for (const auto& r2 : cat.fields_) cat.field_keys_.insert(r2.fieldID);
    for (const auto& r2 : cat.plates_) cat.plate_keys_.insert(r2.plateID);
    for (const auto& r2 : cat.spec_objs_) cat.spec_obj_keys_.insert(r2.specObjID);
    cat.rebuild_photo_index();

    if (cat.content_digest() != stored_digest) {
        throw DigestMismatchError("catalog content digest mismatch (corrupt file?)");
    }
    return cat;
}

void Catalog::export_csv(TableId t, std::ostream& out) const {
    switch (t) {
        case TableId::photo: {
            csv_header(out, csv_columns(t));
            for (std::size_t i = 0; i < photo_.size(); ++i) {
                out << photo_.objID[i] << ',' << photo_.fieldID[i] << ','
                    << photo_.run[i] << ',' << photo_.camcol[i] << ','
                    << photo_.field[i] << ',' << double_to_string(photo_.ra[i]) << ','
                    << double_to_string(photo_.dec[i]) << ','
                    << obj_type_name(static_cast<ObjType>(photo_.type[i])) << ','
                    << photo_.flags[i] << ',' << photo_.parentID[i] << ','
                    << double_to_string(photo_.rowv[i]) << ','
                    << double_to_string(photo_.colv[i]);
                for (const auto* fam :
                     {&photo_.modelMag, &photo_.modelMagErr, &photo_.fiberMag,
                      &photo_.q, &photo_.u, &photo_.isoA, &photo_.isoB}) {
                    for (int b = 0; b < kBandCount; ++b) {
                        out << ',' << double_to_string((*fam)[b][i]);
                    }
                }
                out << '\n';
            }
            break;
        }
        case TableId::field: {
            csv_header(out, csv_columns(t));
            for (const auto& r : fields_) {
                out << r.fieldID << ',' << r.run << ',' << r.camcol << ',' << r.field
                    << '\n';
            }
            break;
        }
        case TableId::plate: {
            csv_header(out, csv_columns(t));
            for (const auto& r : plates_) out << r.plateID << '\n';
            break;
        }
        case TableId::spec_obj: {
            csv_header(out, csv_columns(t));
            for (const auto& r : spec_objs_) {
                out << r.specObjID << ',' << r.plateID << ',' << r.bestObjID << ','
                    << double_to_string(r.z) << '\n';
            }
            break;
        }
        case TableId::spec_line: {
            csv_header(out, csv_columns(t));
            for (const auto& r : spec_lines_) {
                out << r.lineID << ',' << r.specObjID << ','
                    << double_to_string(r.wavelength) << ',' << double_to_string(r.ew)
                    << '\n';
            }
            break;
        }
        case TableId::neighbors: {
            csv_header(out, csv_columns(t));
            for (const auto& r : neighbors_) {
                out << r.objID << ',' << r.neighborObjID << ','
                    << double_to_string(r.distance) << '\n';
            }
            break;
        }
    }
}

}  // namespace skycat
