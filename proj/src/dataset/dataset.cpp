#include "dataset/dataset.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/error.hpp"
#include "core/fingerprint.hpp"
#include "core/io.hpp"

namespace mqsum::dataset {

using nlohmann::json;

namespace {

std::string require_string(const json& obj, const char* field, int line) {
    auto it = obj.find(field);
    if (it == obj.end())
        throw Error(Errc::schema,
                    "line " + std::to_string(line) + ": missing field '" +
                        field + "'",
                    line, field);
    if (!it->is_string())
        throw Error(Errc::schema,
                    "line " + std::to_string(line) + ": field '" + field +
                        "' is not a string",
                    line, field);
    return it->get<std::string>();
}

} // namespace

std::vector<SingleQueryRecord> load_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path);

    std::vector<SingleQueryRecord> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object())
            throw Error(Errc::schema,
                        "line " + std::to_string(line_no) +
                            ": not a JSON object",
                        line_no, "");
        SingleQueryRecord rec;
        rec.transcript_id = require_string(obj, "transcript_id", line_no);
        rec.transcript_text = require_string(obj, "transcript_text", line_no);
        rec.query_text = require_string(obj, "query_text", line_no);
        if (obj.contains("reference_summary"))
            rec.reference_summary =
                require_string(obj, "reference_summary", line_no);
        records.push_back(std::move(rec));
    }
    return records;
}

DatasetSplit convert(const std::vector<SingleQueryRecord>& records,
                     std::string split_name) {
    DatasetSplit split;
    split.name = std::move(split_name);

    std::map<std::string, size_t> job_of_id;
    std::map<std::string, std::string> id_of_fp;

    for (const auto& rec : records) {
        if (normalize_ws(rec.transcript_id).empty())
            throw Error(Errc::empty_record_field, "empty transcript_id");
        if (normalize_ws(rec.transcript_text).empty())
            throw Error(Errc::empty_record_field,
                        "empty transcript_text for id " + rec.transcript_id);
        if (normalize_ws(rec.query_text).empty())
            throw Error(Errc::empty_record_field,
                        "empty query_text for id " + rec.transcript_id);

        auto [it, inserted] =
            job_of_id.try_emplace(rec.transcript_id, split.jobs.size());
        if (inserted) {
            auto fp = fingerprint(rec.transcript_text).hex();
            auto [fp_it, fp_new] = id_of_fp.try_emplace(fp, rec.transcript_id);
            if (!fp_new)
                throw Error(Errc::conflicting_transcript,
                            "ids " + fp_it->second + " and " +
                                rec.transcript_id +
                                " share one transcript text");
            MultiQueryJob job;
            job.transcript =
                Transcript::make(rec.transcript_id, rec.transcript_text);
            split.jobs.push_back(std::move(job));
        }
        MultiQueryJob& job = split.jobs[it->second];
        if (job.transcript.text != rec.transcript_text)
            throw Error(Errc::conflicting_transcript,
                        "id " + rec.transcript_id +
                            " appears with two different texts");
        job.queries.push_back(
            {static_cast<int>(job.queries.size()) + 1, rec.query_text});
        if (!job.references) job.references.emplace();
        job.references->push_back(rec.reference_summary);
    }

    // References are optional as a whole: a fully unlabeled group drops the
    // list, a partially labeled one is a data error.
    for (auto& job : split.jobs) {
        if (!job.references) continue;
        size_t empty = 0;
        for (const auto& r : *job.references)
            if (normalize_ws(r).empty()) ++empty;
        if (empty == job.references->size())
            job.references.reset();
        else if (empty > 0)
            throw Error(Errc::empty_record_field,
                        "id " + job.transcript.id +
                            " mixes labeled and unlabeled records");
    }
    return split;
}

std::vector<SingleQueryRecord> expand(const DatasetSplit& split) {
    std::vector<SingleQueryRecord> records;
    for (const auto& job : split.jobs) {
        for (size_t i = 0; i < job.queries.size(); ++i) {
            SingleQueryRecord rec;
            rec.transcript_id = job.transcript.id;
            rec.transcript_text = job.transcript.text;
            rec.query_text = job.queries[i].text;
            if (job.references) rec.reference_summary = (*job.references)[i];
            records.push_back(std::move(rec));
        }
    }
    return records;
}

json job_to_json(const MultiQueryJob& job) {
    json obj;
    obj["transcript"] = {{"id", job.transcript.id},
                         {"text", job.transcript.text}};
    auto& queries = obj["queries"] = json::array();
    for (const auto& q : job.queries) queries.push_back(q.text);
    if (job.references) obj["references"] = *job.references;
    obj["output_format"] = format_name(job.output_format);
    return obj;
}

void save_jobs(const DatasetSplit& split, const std::string& path) {
    std::ostringstream out;
    for (const auto& job : split.jobs) out << job_to_json(job).dump() << '\n';
    atomic_write(path, out.str());
}

MultiQueryJob job_from_json(const json& obj, int line_no) {
    if (!obj.is_object())
        throw Error(Errc::schema,
                    "line " + std::to_string(line_no) + ": not a JSON object",
                    line_no, "");
    if (!obj.contains("transcript") || !obj["transcript"].is_object())
        throw Error(Errc::schema,
                    "line " + std::to_string(line_no) +
                        ": missing transcript object",
                    line_no, "transcript");
    MultiQueryJob job;
    job.transcript = Transcript::make(
        require_string(obj["transcript"], "id", line_no),
        require_string(obj["transcript"], "text", line_no));
    auto queries = obj.find("queries");
    if (queries == obj.end() || !queries->is_array())
        throw Error(Errc::schema,
                    "line " + std::to_string(line_no) +
                        ": missing queries array",
                    line_no, "queries");
    for (const auto& q : *queries) {
        if (!q.is_string())
            throw Error(Errc::schema,
                        "line " + std::to_string(line_no) +
                            ": query is not a string",
                        line_no, "queries");
        job.queries.push_back(
            {static_cast<int>(job.queries.size()) + 1, q.get<std::string>()});
    }
    if (obj.contains("references")) {
        std::vector<std::string> refs;
        for (const auto& r : obj["references"]) {
            if (!r.is_string())
                throw Error(Errc::schema,
                            "line " + std::to_string(line_no) +
                                ": reference is not a string",
                            line_no, "references");
            refs.push_back(r.get<std::string>());
        }
        job.references = std::move(refs);
    }
    if (obj.contains("output_format")) {
        if (!obj["output_format"].is_string())
            throw Error(Errc::schema,
                        "line " + std::to_string(line_no) +
                            ": output_format is not a string",
                        line_no, "output_format");
        job.output_format =
            format_from_name(obj["output_format"].get<std::string>());
    }
    job.validate();
    return job;
}

DatasetSplit load_jobs(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io, "cannot open " + path);

    DatasetSplit split;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded())
            throw Error(Errc::schema,
                        "line " + std::to_string(line_no) +
                            ": not a JSON object",
                        line_no, "");
        split.jobs.push_back(job_from_json(obj, line_no));
    }
    return split;
}

} // namespace mqsum::dataset
