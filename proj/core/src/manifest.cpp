#include "coughdet/manifest.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "coughdet/errors.hpp"

namespace coughdet {

std::string to_string(Label l) { return l == Label::cough ? "cough" : "non-cough"; }
std::string to_string(Split s) { return s == Split::train ? "train" : "test"; }

SplitSummary DatasetManifest::split_summary() const {
    SplitSummary s;
    for (const auto& e : entries) (e.split == Split::train ? s.train : s.test)++;
    return s;
}

std::vector<ManifestEntry> DatasetManifest::split(Split s) const {
    std::vector<ManifestEntry> out;
    for (const auto& e : entries)
        if (e.split == s) out.push_back(e);
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

DatasetManifest parse_manifest(const std::string& csv_text, const std::string& origin) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw MissingColumn(origin + ": empty manifest");
    const auto header = split_csv_line(strip_cr(line));
    if (header.size() < 3 || header[0] != "path" || header[1] != "label" || header[2] != "split")
        throw MissingColumn(origin + ": expected header 'path,label,split'");

    DatasetManifest manifest;
    std::unordered_set<std::string> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const auto where = origin + ":" + std::to_string(lineno);
        if (fields.size() < 3) throw MissingColumn(where + ": expected 3 fields");

        ManifestEntry e;
        e.path = fields[0];
        if (fields[1] == "cough") e.label = Label::cough;
        else if (fields[1] == "non-cough") e.label = Label::non_cough;
        else throw UnknownLabel(where + ": '" + fields[1] + "'");
        if (fields[2] == "train") e.split = Split::train;
        else if (fields[2] == "test") e.split = Split::test;
        else throw UnknownSplit(where + ": '" + fields[2] + "'");

        if (!seen.insert(e.path).second) throw DuplicatePath(where + ": '" + e.path + "'");
        manifest.entries.push_back(std::move(e));
    }
    return manifest;
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str(), path);
}

}  // namespace coughdet
