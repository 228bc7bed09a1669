#include "cephgrow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cephgrow {

std::size_t IngestReport::rejected_rows() const {
    std::size_t n = 0;
    for (const auto& r : rejects) n += r.lines.size();
    for (const auto& e : exclusions) n += e.lines.size();
    return n;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

bool parse_double(std::string_view tok, double& out) {
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

struct RawRow {
    std::size_t line = 0;
    std::string patient_id;
    std::string study;
    Stage stage = Stage::S9;
    double age_years = 0.0;
    std::size_t landmark_index = 0;
    Point2 point;
};

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

constexpr std::string_view kHeader = "patient_id,study,stage,age_years,landmark,x,y";

} // namespace

IngestResult ingest_landmarks_text(std::string_view csv_text, const LandmarkSchema& schema,
                                   const IngestOptions& options) {
    IngestResult result;
    result.cohort.schema = schema;
    IngestReport& report = result.report;

    // Pass 1: row-level parsing and validation.
    std::vector<RawRow> rows;
    std::istringstream in{std::string(csv_text)};
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != kHeader)
                throw std::invalid_argument("landmark CSV: bad header at line " + std::to_string(line_no) +
                                            " (expected '" + std::string(kHeader) + "')");
            header_seen = true;
            continue;
        }
        ++report.data_rows;
        const auto fields = split_fields(line);
        if (fields.size() != 7) {
            report.rejects.push_back({{line_no}, "malformed row: expected 7 columns, got " +
                                                     std::to_string(fields.size())});
            continue;
        }
        RawRow row;
        row.line = line_no;
        row.patient_id = std::string(fields[0]);
        row.study = std::string(fields[1]);
        if (row.patient_id.empty()) {
            report.rejects.push_back({{line_no}, "malformed row: empty patient_id"});
            continue;
        }
        const auto stage = parse_stage(fields[2]);
        if (!stage) {
            report.rejects.push_back({{line_no}, "malformed row: stage '" + std::string(fields[2]) +
                                                     "' not in {9,12,15,18}"});
            continue;
        }
        row.stage = *stage;
        if (!parse_double(fields[3], row.age_years) || row.age_years <= 0.0) {
            report.rejects.push_back({{line_no}, "malformed row: age_years '" + std::string(fields[3]) +
                                                     "' is not a positive real"});
            continue;
        }
        const auto lm = schema.index_of(fields[4]);
        if (!lm) {
            report.rejects.push_back({{line_no}, "unknown landmark name '" + std::string(fields[4]) + "'"});
            continue;
        }
        row.landmark_index = *lm;
        if (!parse_double(fields[5], row.point.x) || !parse_double(fields[6], row.point.y)) {
            report.rejects.push_back({{line_no}, "malformed row: non-finite or non-numeric coordinate"});
            continue;
        }
        rows.push_back(std::move(row));
    }
    if (!header_seen && report.data_rows == 0 && rows.empty() && line_no == 0)
        throw std::invalid_argument("landmark CSV: empty input");

    // Pass 2: group rows into (patient, stage) records, rejecting duplicates
    // and intra-record metadata conflicts row by row.
    struct Record {
        Cephalogram ceph;
        std::vector<bool> present;
        std::vector<std::size_t> lines;
    };
    std::map<std::pair<std::string, Stage>, Record> records;
    for (auto& row : rows) {
        auto key = std::make_pair(row.patient_id, row.stage);
        auto it = records.find(key);
        if (it == records.end()) {
            Record rec;
            rec.ceph.patient_id = row.patient_id;
            rec.ceph.study = row.study;
            rec.ceph.stage = row.stage;
            rec.ceph.age_years = row.age_years;
            rec.ceph.landmarks.assign(schema.size(), Point2{});
            rec.present.assign(schema.size(), false);
            it = records.emplace(std::move(key), std::move(rec)).first;
        }
        Record& rec = it->second;
        if (rec.present[row.landmark_index]) {
            report.rejects.push_back({{row.line}, "duplicate (patient,stage,landmark) row for " +
                                                      row.patient_id + "/" + std::string(stage_token(row.stage)) +
                                                      "/" + schema.name(row.landmark_index)});
            continue;
        }
        if (row.age_years != rec.ceph.age_years || row.study != rec.ceph.study) {
            report.rejects.push_back({{row.line}, "inconsistent age/study within record " + row.patient_id +
                                                      "/" + std::string(stage_token(row.stage))});
            continue;
        }
        rec.present[row.landmark_index] = true;
        rec.ceph.landmarks[row.landmark_index] = row.point;
        rec.lines.push_back(row.line);
    }

    // Pass 3: record-level validation (landmark completeness, age windows).
    std::map<std::string, PatientSeries> by_patient;
    std::map<std::string, std::vector<std::size_t>> patient_lines;
    for (auto& [key, rec] : records) {
        std::vector<std::string> missing;
        for (std::size_t i = 0; i < schema.size(); ++i)
            if (!rec.present[i]) missing.push_back(schema.name(i));
        if (!missing.empty()) {
            std::string reason = "missing required landmark";
            if (missing.size() > 1) reason = "missing required landmarks";
            reason += " (" + key.first + "/" + std::string(stage_token(key.second)) + ":";
            for (const auto& m : missing) reason += " " + m;
            reason += ")";
            report.rejects.push_back({rec.lines, std::move(reason)});
            continue;
        }
        const auto& window = options.age_windows[stage_index(key.second)];
        if (rec.ceph.age_years < window.min || rec.ceph.age_years > window.max) {
            std::string msg = "age " + format_double(rec.ceph.age_years) + " outside window [" +
                              format_double(window.min) + "," + format_double(window.max) + "] for " +
                              key.first + "/" + std::string(stage_token(key.second));
            if (options.strict_age_windows) {
                report.rejects.push_back({rec.lines, "rejected: " + msg});
                continue;
            }
            report.warnings.push_back(msg);
        }
        auto& series = by_patient[key.first];
        series.patient_id = key.first;
        series.by_stage[stage_index(key.second)] = std::move(rec.ceph);
        auto& pl = patient_lines[key.first];
        pl.insert(pl.end(), rec.lines.begin(), rec.lines.end());
    }

    // Pass 4: series-level validation (mandatory stages present).
    for (auto& [pid, series] : by_patient) {
        if (!series.has_mandatory_stages()) {
            std::string reason = "patient " + pid + " missing mandatory stage(s):";
            for (Stage s : kMandatoryStages)
                if (!series.has(s)) reason += " " + std::string(stage_token(s));
            report.exclusions.push_back({patient_lines[pid], std::move(reason)});
            continue;
        }
        report.incorporated_rows += patient_lines[pid].size();
        result.cohort.series.push_back(std::move(series));
    }
    // std::map iteration already yields patient_id order.
    return result;
}

IngestResult ingest_landmarks(const std::filesystem::path& path, const LandmarkSchema& schema,
                              const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open landmark file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return ingest_landmarks_text(buf.str(), schema, options);
}

void write_landmarks_csv(std::ostream& os, const Cohort& cohort,
                         const std::vector<std::string>& metadata_comments) {
    for (const auto& c : metadata_comments) os << "# " << c << "\n";
    os << kHeader << "\n";
    for (const auto& series : cohort.series) {
        for (Stage st : kAllStages) {
            if (!series.has(st)) continue;
            const Cephalogram& ceph = series.at(st);
            for (std::size_t i = 0; i < cohort.schema.size(); ++i) {
                os << ceph.patient_id << ',' << ceph.study << ',' << stage_token(st) << ','
                   << format_double(ceph.age_years) << ',' << cohort.schema.name(i) << ','
                   << format_double(ceph.landmarks[i].x) << ',' << format_double(ceph.landmarks[i].y)
                   << '\n';
            }
        }
    }
}

void write_landmarks_csv(const std::filesystem::path& path, const Cohort& cohort,
                         const std::vector<std::string>& metadata_comments) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path.string());
    write_landmarks_csv(os, cohort, metadata_comments);
}

std::string render_report(const IngestReport& report) {
    std::ostringstream os;
    for (const auto& r : report.rejects) {
        os << "reject";
        if (!r.lines.empty()) {
            os << " line " << r.lines.front();
            if (r.lines.size() > 1) os << " (+" << r.lines.size() - 1 << " rows)";
        }
        os << ": " << r.reason << "\n";
    }
    for (const auto& e : report.exclusions) {
        os << "exclude";
        if (!e.lines.empty()) os << " (" << e.lines.size() << " rows)";
        os << ": " << e.reason << "\n";
    }
    for (const auto& w : report.warnings) os << "warning: " << w << "\n";
    return os.str();
}

} // namespace cephgrow
