#include "engagekit/store.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

#include "engagekit/errors.hpp"
#include "engagekit/sha256.hpp"

namespace engagekit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kKindNames[] = {"raw-transcript", "assessment", "report",
                            "rendered-report", "class-report", "dead-letter"};
const char* kAclNames[] = {"student-only", "instructor-only", "both"};

void write_file(const fs::path& path, std::string_view content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw StoreError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw StoreError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw StoreError("cannot read " + path.string());
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return content;
}

}  // namespace

std::string_view to_string(ArtifactKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<ArtifactKind> artifact_kind_from_string(std::string_view name) {
    for (int i = 0; i < 6; ++i)
        if (name == kKindNames[i]) return static_cast<ArtifactKind>(i);
    return std::nullopt;
}

std::string_view to_string(Acl acl) { return kAclNames[static_cast<int>(acl)]; }

std::optional<Acl> acl_from_string(std::string_view name) {
    for (int i = 0; i < 3; ++i)
        if (name == kAclNames[i]) return static_cast<Acl>(i);
    return std::nullopt;
}

ArtifactStore::ArtifactStore(fs::path root) : root_(std::move(root)) {
    fs::create_directories(root_ / "objects");
    fs::create_directories(root_ / "meta");
}

fs::path ArtifactStore::object_path(const std::string& key) const {
    return root_ / "objects" / key;
}

fs::path ArtifactStore::meta_path(const std::string& key) const {
    return root_ / "meta" / (key + ".json");
}

std::string ArtifactStore::put(std::string_view content, ArtifactKind kind, Acl acl,
                               std::int64_t created_at) {
    std::string key = sha256_hex(content);
    std::lock_guard lock(mutex_);
    if (fs::exists(object_path(key))) return key;  // append-only: never overwrite

    write_file(object_path(key), content);
    json m;
    m["key"] = key;
    m["kind"] = std::string(to_string(kind));
    m["bytes_len"] = content.size();
    m["created_at"] = created_at;
    m["acl"] = std::string(to_string(acl));
    write_file(meta_path(key), m.dump(2) + "\n");
    return key;
}

bool ArtifactStore::exists(const std::string& key) const {
    std::lock_guard lock(mutex_);
    return fs::exists(object_path(key));
}

std::string ArtifactStore::get(const std::string& key) const {
    std::lock_guard lock(mutex_);
    if (!fs::exists(object_path(key))) throw StoreError("no artifact with key " + key);
    return read_file(object_path(key));
}

std::optional<StoredArtifact> ArtifactStore::meta(const std::string& key) const {
    std::lock_guard lock(mutex_);
    if (!fs::exists(meta_path(key))) return std::nullopt;
    json m = json::parse(read_file(meta_path(key)));
    StoredArtifact a;
    a.key = m.at("key").get<std::string>();
    a.kind = artifact_kind_from_string(m.at("kind").get<std::string>()).value();
    a.bytes_len = m.at("bytes_len").get<std::size_t>();
    a.created_at = m.at("created_at").get<std::int64_t>();
    a.acl = acl_from_string(m.at("acl").get<std::string>()).value();
    return a;
}

std::vector<StoredArtifact> ArtifactStore::list(std::optional<ArtifactKind> kind) const {
    std::vector<std::string> keys;
    {
        std::lock_guard lock(mutex_);
        for (const auto& entry : fs::directory_iterator(root_ / "meta")) {
            if (entry.path().extension() != ".json") continue;
            keys.push_back(entry.path().stem().string());
        }
    }
    std::sort(keys.begin(), keys.end());
    std::vector<StoredArtifact> out;
    for (const auto& key : keys) {
        auto m = meta(key);
        if (!m) continue;
        if (kind && m->kind != *kind) continue;
        out.push_back(*m);
    }
    return out;
}

std::size_t ArtifactStore::object_count() const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& entry : fs::directory_iterator(root_ / "objects")) {
        (void)entry;
        ++n;
    }
    return n;
}

}  // namespace engagekit
