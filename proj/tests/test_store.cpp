#include <doctest.h>

#include "engagekit/errors.hpp"
#include "engagekit/sha256.hpp"
#include "engagekit/store.hpp"
#include "test_util.hpp"

using namespace engagekit;

TEST_SUITE("store") {

TEST_CASE("put keys by content hash and is idempotent") {
    testutil::TempDir dir;
    ArtifactStore store(dir.path);
    std::string key = store.put("hello", ArtifactKind::Report, Acl::Both, 10);
    CHECK(key == sha256_hex("hello"));
    CHECK(store.exists(key));
    CHECK(store.get(key) == "hello");
    CHECK(store.object_count() == 1);

    // identical content: same key, no growth, no overwrite of metadata
    std::string again = store.put("hello", ArtifactKind::Report, Acl::StudentOnly, 99);
    CHECK(again == key);
    CHECK(store.object_count() == 1);
    auto meta = store.meta(key);
    REQUIRE(meta);
    CHECK(meta->acl == Acl::Both);
    CHECK(meta->created_at == 10);
    CHECK(meta->bytes_len == 5);
}

TEST_CASE("distinct content gets distinct keys") {
    testutil::TempDir dir;
    ArtifactStore store(dir.path);
    std::string a = store.put("a", ArtifactKind::Assessment, Acl::InstructorOnly, 0);
    std::string b = store.put("b", ArtifactKind::Assessment, Acl::InstructorOnly, 0);
    CHECK(a != b);
    CHECK(store.object_count() == 2);
}

TEST_CASE("get of a missing key throws") {
    testutil::TempDir dir;
    ArtifactStore store(dir.path);
    CHECK_THROWS_AS(store.get(std::string(64, '0')), StoreError);
    CHECK(!store.meta(std::string(64, '0')));
}

TEST_CASE("list filters by kind") {
    testutil::TempDir dir;
    ArtifactStore store(dir.path);
    store.put("r1", ArtifactKind::Report, Acl::Both, 0);
    store.put("r2", ArtifactKind::Report, Acl::Both, 0);
    store.put("x", ArtifactKind::DeadLetter, Acl::InstructorOnly, 0);
    CHECK(store.list().size() == 3);
    CHECK(store.list(ArtifactKind::Report).size() == 2);
    CHECK(store.list(ArtifactKind::DeadLetter).size() == 1);
    CHECK(store.list(ArtifactKind::ClassReport).empty());
}

TEST_CASE("kind and acl names round-trip") {
    for (auto kind : {ArtifactKind::RawTranscript, ArtifactKind::Assessment, ArtifactKind::Report,
                      ArtifactKind::RenderedReport, ArtifactKind::ClassReport,
                      ArtifactKind::DeadLetter})
        CHECK(artifact_kind_from_string(to_string(kind)) == kind);
    for (auto acl : {Acl::StudentOnly, Acl::InstructorOnly, Acl::Both})
        CHECK(acl_from_string(to_string(acl)) == acl);
}

}  // TEST_SUITE
