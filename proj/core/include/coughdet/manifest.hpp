#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace coughdet {

enum class Label { cough, non_cough };
enum class Split { train, test };

std::string to_string(Label l);
std::string to_string(Split s);

struct ManifestEntry {
    std::string path;
    Label label = Label::cough;
    Split split = Split::train;
};

struct SplitSummary {
    std::size_t train = 0;
    std::size_t test = 0;
};

/// Ordered dataset catalog, parsed from `path,label,split` CSV.
/// Entry order is preserved exactly as in the file.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    SplitSummary split_summary() const;
    std::vector<ManifestEntry> split(Split s) const;
};

DatasetManifest load_manifest(const std::string& path);
DatasetManifest parse_manifest(const std::string& csv_text, const std::string& origin = "<memory>");

}  // namespace coughdet
