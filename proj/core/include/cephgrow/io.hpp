#pragma once

#include "cephgrow/types.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace cephgrow {

// One rejection covers one or more data rows; every input row ends up either
// incorporated into the cohort or listed in exactly one entry.
struct RejectEntry {
    std::vector<std::size_t> lines; // 1-based file line numbers of the covered rows
    std::string reason;
};

struct IngestReport {
    std::vector<RejectEntry> rejects;    // malformed rows, unknown/duplicate/missing landmarks
    std::vector<RejectEntry> exclusions; // series dropped for a missing mandatory stage
    std::vector<std::string> warnings;   // age-window checks (non-fatal by default)
    std::size_t data_rows = 0;
    std::size_t incorporated_rows = 0;

    std::size_t rejected_rows() const;
    bool clean() const { return rejects.empty() && exclusions.empty(); }
};

struct IngestOptions {
    bool strict_age_windows = false; // when true, out-of-window ages reject the record
    std::array<StageAgeModel, 4> age_windows = default_stage_age_models();
};

struct IngestResult {
    Cohort cohort;
    IngestReport report;
};

// Landmark CSV contract: UTF-8, header `patient_id,study,stage,age_years,landmark,x,y`,
// stage in {9,12,15,18}, one landmark per row, '#' lines are metadata comments.
IngestResult ingest_landmarks(const std::filesystem::path& path, const LandmarkSchema& schema,
                              const IngestOptions& options = {});
IngestResult ingest_landmarks_text(std::string_view csv_text, const LandmarkSchema& schema,
                                   const IngestOptions& options = {});

// Writes the same CSV format; numeric fields use shortest round-trip
// formatting so ingest(write(cohort)) == cohort exactly.
void write_landmarks_csv(std::ostream& os, const Cohort& cohort,
                         const std::vector<std::string>& metadata_comments = {});
void write_landmarks_csv(const std::filesystem::path& path, const Cohort& cohort,
                         const std::vector<std::string>& metadata_comments = {});

std::string render_report(const IngestReport& report);

// Shortest round-trip decimal formatting used by every CSV writer.
std::string format_double(double v);

} // namespace cephgrow
