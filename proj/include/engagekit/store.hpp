#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace engagekit {

enum class ArtifactKind {
    RawTranscript,
    Assessment,
    Report,          // report/v1 engagement metrics document
    RenderedReport,  // student-facing feedback HTML
    ClassReport,
    DeadLetter,
};

enum class Acl { StudentOnly, InstructorOnly, Both };

std::string_view to_string(ArtifactKind kind);
std::optional<ArtifactKind> artifact_kind_from_string(std::string_view name);
std::string_view to_string(Acl acl);
std::optional<Acl> acl_from_string(std::string_view name);

struct StoredArtifact {
    std::string key;  // sha256(content), lowercase hex
    ArtifactKind kind = ArtifactKind::RawTranscript;
    std::size_t bytes_len = 0;
    std::int64_t created_at = 0;
    Acl acl = Acl::Both;
};

// Content-addressed, append-only artifact store over a local directory,
// standing in for access-controlled cloud buckets. Keys are content hashes,
// so identical content is stored once and nothing is ever overwritten.
// Writes go through a temp-file rename; an in-process mutex serializes
// metadata updates.
class ArtifactStore {
  public:
    explicit ArtifactStore(std::filesystem::path root);

    // Returns the key. Re-putting existing content is a no-op returning the
    // same key (idempotent write).
    std::string put(std::string_view content, ArtifactKind kind, Acl acl,
                    std::int64_t created_at);

    bool exists(const std::string& key) const;
    std::string get(const std::string& key) const;  // throws StoreError on missing key
    std::optional<StoredArtifact> meta(const std::string& key) const;

    // All artifacts, optionally filtered by kind, ordered by key.
    std::vector<StoredArtifact> list(std::optional<ArtifactKind> kind = std::nullopt) const;
    std::size_t object_count() const;

    const std::filesystem::path& root() const { return root_; }

  private:
    std::filesystem::path object_path(const std::string& key) const;
    std::filesystem::path meta_path(const std::string& key) const;

    std::filesystem::path root_;
    mutable std::mutex mutex_;
};

}  // namespace engagekit
