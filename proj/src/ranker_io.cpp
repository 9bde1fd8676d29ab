#include "faqrank/ranker.hpp"
#include "faqrank/util.hpp"

namespace faqrank {

void save_ranker(const Ranker& ranker, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["format_version"] = kArtifactFormatVersion;
    j["kind"] = ranker.kind();
    j["model"] = ranker.to_json();
    atomic_write_file(path, j.dump() + "\n");
}

std::unique_ptr<Ranker> load_ranker(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
        throw Error("ranker artifact " + path.string() + ": not a JSON object");
    }
    const int version = j.value("format_version", -1);
    if (version != kArtifactFormatVersion) {
        throw Error("ranker artifact " + path.string() + ": incompatible format_version " +
                    std::to_string(version) + " (expected " +
                    std::to_string(kArtifactFormatVersion) + ")");
    }
    const std::string kind = j.value("kind", "");
    if (kind == "count") {
        return std::make_unique<CountRanker>(CountRanker::from_json(j.at("model")));
    }
    if (kind == "embedding") {
        return std::make_unique<EmbeddingRanker>(EmbeddingRanker::from_json(j.at("model")));
    }
    throw Error("ranker artifact " + path.string() + ": unknown kind '" + kind + "'");
}

}  // namespace faqrank
