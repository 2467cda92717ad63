#pragma once
// The catalog store. The photo table is columnar (one vector per attribute)
// and kept sorted by (htmID, objID), so a cover's id ranges map to row spans
// by binary search and full scans stream cache-friendly fixed-width columns.
// Dimension tables (field, plate, specObj, specLine, neighbors) are small
// row vectors. The flag dictionary travels inside the catalog file so masks
// mean the same thing wherever the data goes.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "skycat/htm.hpp"
#include "skycat/region.hpp"
#include "skycat/sphere.hpp"

namespace skycat {

inline constexpr int kDefaultIndexDepth = 20;
inline constexpr int kBandCount = 5;
inline constexpr std::array<std::string_view, kBandCount> kBandNames{"u", "g",
                                                                     "r", "i",
                                                                     "z"};
enum Band : int { kBandU = 0, kBandG = 1, kBandR = 2, kBandI = 3, kBandZ = 4 };

enum class ObjType : std::uint8_t { star = 0, galaxy = 1, trail = 2, defect = 3 };

std::string_view obj_type_name(ObjType t);
ObjType obj_type_from_name(std::string_view name);  // throws ParseError

// Bit positions are a catalog-level convention, persisted in the header.
class FlagDictionary {
public:
    // Shipped defaults: primary=0, ok_run=1, saturated=2, bright=3,
    // blended=4, child=5.
    static FlagDictionary standard();

    void define(const std::string& name, int bit);  // throws ConfigError on clash
    std::uint64_t mask(std::string_view name) const;  // throws LookupError
    bool has(std::string_view name) const;

    // Entries sorted by bit; the canonical serialization order.
    std::vector<std::pair<std::string, int>> entries() const;

private:
    std::unordered_map<std::string, int> bits_;
};

// One materialized photo row; the storage itself is columnar.
struct PhotoObj {
    std::uint64_t objID = 0;
    std::uint64_t fieldID = 0;
    std::int32_t run = 0, camcol = 0, field = 0;
    double ra = 0, dec = 0;
    double cx = 0, cy = 0, cz = 0;       // derived: eq_to_vec(ra, dec)
    std::uint64_t htmID = 0;             // derived: lookup at index depth
    ObjType type = ObjType::star;
    std::uint64_t flags = 0;
    std::uint64_t parentID = 0;          // 0 = no parent
    double rowv = 0, colv = 0;           // pixels per unit time
    std::array<double, kBandCount> modelMag{}, modelMagErr{}, fiberMag{};
    std::array<double, kBandCount> q{}, u{};          // ellipticity components
    std::array<double, kBandCount> isoA{}, isoB{};    // isophotal axes, arcsec
    std::uint64_t loadStamp = 0;
};

struct PhotoColumns {
    std::vector<std::uint64_t> objID, fieldID;
    std::vector<std::int32_t> run, camcol, field;
    std::vector<double> ra, dec, cx, cy, cz;
    std::vector<std::uint64_t> htmID;
    std::vector<std::uint8_t> type;
    std::vector<std::uint64_t> flags, parentID;
    std::vector<double> rowv, colv;
    std::array<std::vector<double>, kBandCount> modelMag, modelMagErr, fiberMag;
    std::array<std::vector<double>, kBandCount> q, u, isoA, isoB;
    std::vector<std::uint64_t> loadStamp;

    std::size_t size() const { return objID.size(); }
    PhotoObj row(std::size_t i) const;
    void push_back(const PhotoObj& o);
    // Bytes per row across all fixed-width columns.
    static std::size_t row_bytes();
};

struct FieldRow {
    std::uint64_t fieldID = 0;
    std::int32_t run = 0, camcol = 0, field = 0;
    std::uint64_t loadStamp = 0;
};

struct PlateRow {
    std::uint64_t plateID = 0;
    std::uint64_t loadStamp = 0;
};

struct SpecObjRow {
    std::uint64_t specObjID = 0;
    std::uint64_t plateID = 0;
    std::uint64_t bestObjID = 0;  // 0 = no photo counterpart
    double z = 0;                 // redshift
    std::uint64_t loadStamp = 0;
};

struct SpecLineRow {
    std::uint64_t lineID = 0;
    std::uint64_t specObjID = 0;
    double wavelength = 0;  // Angstrom
    double ew = 0;          // equivalent width
    std::uint64_t loadStamp = 0;
};

// Materialized-neighbors contract radius: pairs farther apart than this are
// integrity violations.
inline constexpr double kNeighborRadiusArcmin = 0.5;

struct NeighborRow {
    std::uint64_t objID = 0;
    std::uint64_t neighborObjID = 0;
    double distance = 0;  // arcmin, <= kNeighborRadiusArcmin
    std::uint64_t loadStamp = 0;
};

enum class View { all, photoPrimary, star, galaxy };

View view_from_name(std::string_view name);  // throws ParseError
std::string_view view_name(View v);

enum class TableId { photo, field, plate, spec_obj, spec_line, neighbors };

TableId table_from_name(std::string_view name);  // throws ParseError
std::string_view table_name(TableId t);

class Catalog {
public:
    explicit Catalog(int index_depth = kDefaultIndexDepth,
                     FlagDictionary dict = FlagDictionary::standard());

    int index_depth() const { return index_depth_; }
    const FlagDictionary& flags() const { return dict_; }
    std::uint64_t flag_mask(std::string_view name) const { return dict_.mask(name); }

    const PhotoColumns& photo() const { return photo_; }
    const std::vector<FieldRow>& fields() const { return fields_; }
    const std::vector<PlateRow>& plates() const { return plates_; }
    const std::vector<SpecObjRow>& spec_objs() const { return spec_objs_; }
    const std::vector<SpecLineRow>& spec_lines() const { return spec_lines_; }
    const std::vector<NeighborRow>& neighbors() const { return neighbors_; }

    std::size_t row_count(TableId t) const;

    // Key lookups backing FK checks.
    bool has_photo(std::uint64_t objID) const { return photo_index_.count(objID) != 0; }
    bool has_field(std::uint64_t fieldID) const { return field_keys_.count(fieldID) != 0; }
    bool has_plate(std::uint64_t plateID) const { return plate_keys_.count(plateID) != 0; }
    bool has_spec_obj(std::uint64_t specObjID) const {
        return spec_obj_keys_.count(specObjID) != 0;
    }
    // Photo row index by objID; throws LookupError when absent.
    std::size_t photo_row_of(std::uint64_t objID) const;

    bool view_pass(View v, std::uint64_t flags, ObjType type) const;
    bool view_pass(View v, std::size_t photo_row) const;

    // Row spans [begin, end) of the htmID-sorted photo table touched by the
    // range set; binary search only, no scan outside ranges. Throws
    // ConfigError when rs.index_depth differs from the catalog's.
    std::vector<std::pair<std::size_t, std::size_t>> range_query_spans(
        const HtmRangeSet& rs) const;
    std::vector<PhotoObj> range_query(const HtmRangeSet& rs) const;

    // Bulk mutation (loader-facing). Photo inserts re-sort by (htmID, objID);
    // stamp-window removal keeps the survivors' order, so a load followed by
    // its undo restores the exact byte image.
    void append_photo(const std::vector<PhotoObj>& rows);
    void append_fields(const std::vector<FieldRow>& rows);
    void append_plates(const std::vector<PlateRow>& rows);
    void append_spec_objs(const std::vector<SpecObjRow>& rows);
    void append_spec_lines(const std::vector<SpecLineRow>& rows);
    void append_neighbors(const std::vector<NeighborRow>& rows);
    std::size_t remove_stamp_window(TableId t, std::uint64_t lo, std::uint64_t hi);

    // FNV-1a over index depth, dictionary, row counts, and every column.
    std::uint64_t content_digest() const;

    // Versioned binary image with the digest as footer. open() distinguishes
    // VersionMismatchError / TruncatedFileError / DigestMismatchError.
    void save(const std::string& path) const;
    static Catalog open(const std::string& path);

    // CSV in the loader's import schema (derived photo columns omitted).
    void export_csv(TableId t, std::ostream& out) const;

    // The import/export column names, in order.
    static std::vector<std::string> csv_columns(TableId t);

private:
    void rebuild_photo_index();

    int index_depth_;
    FlagDictionary dict_;
    PhotoColumns photo_;
    std::vector<FieldRow> fields_;
    std::vector<PlateRow> plates_;
    std::vector<SpecObjRow> spec_objs_;
    std::vector<SpecLineRow> spec_lines_;
    std::vector<NeighborRow> neighbors_;

    std::unordered_map<std::uint64_t, std::size_t> photo_index_;  // objID -> row
    std::unordered_set<std::uint64_t> field_keys_, plate_keys_, spec_obj_keys_;
};

// Shortest round-trip decimal form of a double (to_chars), used everywhere a
// double becomes text so output is reproducible.
std::string double_to_string(double v);

}  // namespace skycat
