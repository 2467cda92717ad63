#pragma once
// Bulk CSV ingestion with row-level acceptance, a journaled event history,
// and stamp-window undo. Every load step writes one journal record and a
// per-row trace of rejects; inserted rows carry logical sequence stamps
// (monotone counters, not wall clock) so an undo window identifies exactly
// the rows of one step. The journal is append-only JSON lines: undo writes a
// new record rather than editing history.

#include <cstdint>
#include <string>
#include <vector>

#include "skycat/catalog.hpp"

namespace skycat {

struct LoadEvent {
    std::uint64_t eventID = 0;
    std::string table;
    std::uint64_t startStamp = 0;
    std::uint64_t stopStamp = 0;
    std::uint64_t sourceRows = 0;
    std::uint64_t insertedRows = 0;
    std::string status;  // ok | failed | undone
    std::string tracePath;
};

struct Violation {
    std::string table;
    std::uint64_t row = 0;  // 1-based row within the table
    std::string constraint;
    std::string detail;
};

// Full integrity sweep: foreign keys (photo.fieldID -> field,
// specObj.plateID -> plate, specObj.bestObjID -> photo, specLine.specObjID
// -> specObj, neighbors.* -> photo), null checks (NaN in any numeric
// column), derived-column recomputation (cx,cy,cz and htmID from ra,dec),
// and neighbor symmetry. Reports, never throws.
std::vector<Violation> validate(const Catalog& cat);

class Loader {
public:
    // Replays an existing journal to restore event history and counters;
    // catalog rows themselves come from the catalog file, not the journal.
    Loader(Catalog& cat, std::string journal_path, std::string trace_dir);

    // One load step. Rows that parse and pass null/FK/duplicate-key checks
    // are inserted with fresh stamps and derived columns; the rest go to the
    // trace file as "rowNumber,constraint,detail" lines. File-level problems
    // (unreadable, header mismatch) journal a failed event with zero inserts.
    // Never throws for data problems.
    LoadEvent load_csv(TableId table, const std::string& csv_path);

    // Inserts externally built neighbor pairs as a journaled event (the
    // materialization step). Refused when the table is non-empty: undo the
    // previous build first.
    LoadEvent insert_neighbors(std::vector<NeighborRow> rows);

    // Removes the rows of the event's stamp window and journals the undo.
    // Throws UnknownEventError / AlreadyUndoneError; throws UndoConflictError
    // when rows loaded by other events still reference the window's keys
    // (no cascading deletes -- dependents must be undone first).
    std::size_t undo(std::uint64_t event_id);

    // Event history with effective status (undone steps marked).
    const std::vector<LoadEvent>& events() const { return events_; }

    Catalog& catalog() { return cat_; }
    const Catalog& catalog() const { return cat_; }

    std::uint64_t next_stamp() const { return next_stamp_; }
    const std::string& journal_path() const { return journal_path_; }

private:
    LoadEvent& append_event(LoadEvent ev);
    void journal_load(const LoadEvent& ev);
    void journal_undo(std::uint64_t target, std::size_t removed);
    std::string trace_path_for(std::uint64_t event_id) const;

    Catalog& cat_;
    std::string journal_path_;
    std::string trace_dir_;
    std::vector<LoadEvent> events_;
    std::uint64_t next_event_id_ = 1;
    std::uint64_t next_stamp_ = 1;
};

}  // namespace skycat
