#include "engagekit/assessment.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

#include "engagekit/errors.hpp"

namespace engagekit {

using nlohmann::json;

std::string_view to_string(Backend backend) {
    return backend == Backend::Heuristic ? "heuristic" : "remote";
}

std::optional<Backend> backend_from_string(std::string_view name) {
    if (name == "heuristic") return Backend::Heuristic;
    if (name == "remote") return Backend::Remote;
    return std::nullopt;
}

std::string_view depth_label(int depth) {
    switch (depth) {
        case 0: return "Briefly mentioned";
        case 1: return "Basic question asked";
        case 2: return "Explored with follow-ups or comparisons";
        case 3: return "Examined in depth through reasoning or clarification";
        default: return "?";
    }
}

int AssessmentSet::engaged_count() const {
    int n = 0;
    for (const auto& [id, entry] : entries)
        if (entry.depth >= 1) ++n;
    return n;
}

std::string serialize_assessment(const AssessmentSet& a) {
    json root;
    root["schema"] = std::string(kAssessmentSchema);
    root["week_id"] = a.week_id;
    root["submission_id"] = a.submission_id;
    root["backend"] = std::string(to_string(a.backend));
    root["entries"] = json::array();
    for (const auto& [id, entry] : a.entries) {
        json je;
        je["subtopic_id"] = entry.subtopic_id;
        je["depth"] = entry.depth;
        je["attributed_student_turns"] = entry.attributed_student_turns;
        je["evidence"] = entry.evidence;
        root["entries"].push_back(std::move(je));
    }
    root["unattributed_student_turns"] = a.unattributed_student_turns;
    return root.dump(2) + "\n";
}

std::vector<std::string> validate_assessment_json(const std::string& document,
                                                  const Transcript& t,
                                                  const std::vector<Subtopic>& subtopics) {
    std::vector<std::string> violations;
    auto add = [&](std::string msg) { violations.push_back(std::move(msg)); };

    json root = json::parse(document, nullptr, /*allow_exceptions=*/false);
    if (root.is_discarded()) {
        add("response is not valid JSON");
        return violations;
    }
    if (!root.is_object()) {
        add("response must be exactly one JSON object");
        return violations;
    }

    for (const char* key :
         {"schema", "week_id", "submission_id", "backend", "entries",
          "unattributed_student_turns"}) {
        if (!root.contains(key)) add(std::string("missing field \"") + key + "\"");
    }
    if (!violations.empty()) return violations;

    if (!root["schema"].is_string() || root["schema"].get<std::string>() != kAssessmentSchema)
        add("schema must be \"assessment/v1\"");

    if (!root["week_id"].is_string() || root["week_id"].get<std::string>() != t.week_id)
        add("week_id does not match the transcript");
    if (!root["submission_id"].is_string() ||
        root["submission_id"].get<std::string>() != t.submission_id)
        add("submission_id does not match the transcript");
    if (!root["backend"].is_string() ||
        !backend_from_string(root["backend"].get<std::string>()))
        add("backend must be \"heuristic\" or \"remote\"");
    if (!root["entries"].is_array()) {
        add("entries must be an array");
        return violations;
    }
    if (!root["unattributed_student_turns"].is_array()) {
        add("unattributed_student_turns must be an array");
        return violations;
    }

    std::set<std::string> week_subtopics;
    for (const auto& s : subtopics) week_subtopics.insert(s.subtopic_id);

    std::set<int> student_indices;
    for (const auto& turn : t.turns)
        if (turn.role == Role::Student) student_indices.insert(turn.index);

    std::set<int> seen_indices;
    std::set<std::string> seen_subtopics;
    auto check_index = [&](const json& v, const std::string& where) {
        if (!v.is_number_integer()) {
            add(where + ": turn index must be an integer");
            return;
        }
        int idx = v.get<int>();
        if (!student_indices.count(idx)) {
            add(where + ": index " + std::to_string(idx) + " is not a student turn");
            return;
        }
        if (!seen_indices.insert(idx).second)
            add(where + ": student turn " + std::to_string(idx) +
                " attributed more than once (partition violation)");
    };

    for (std::size_t i = 0; i < root["entries"].size(); ++i) {
        const json& je = root["entries"][i];
        std::string where = "entries[" + std::to_string(i) + "]";
        if (!je.is_object()) {
            add(where + " must be an object");
            continue;
        }
        for (const char* key : {"subtopic_id", "depth", "attributed_student_turns", "evidence"})
            if (!je.contains(key)) add(where + ": missing field \"" + key + "\"");
        if (!je.contains("subtopic_id") || !je.contains("depth") ||
            !je.contains("attributed_student_turns") || !je.contains("evidence"))
            continue;
        if (!je["subtopic_id"].is_string()) {
            add(where + ".subtopic_id must be a string");
            continue;
        }
        std::string sid = je["subtopic_id"].get<std::string>();
        if (!week_subtopics.count(sid))
            add(where + ": \"" + sid + "\" is not a subtopic of week " + t.week_id);
        if (!seen_subtopics.insert(sid).second)
            add(where + ": duplicate entry for subtopic \"" + sid + "\"");
        if (!je["depth"].is_number_integer() || je["depth"].is_number_float())
            add(where + ".depth must be an integer");
        else {
            int depth = je["depth"].get<int>();
            if (depth < kMinDepth || depth > kMaxDepth)
                add(where + ".depth " + std::to_string(depth) + " outside [0,3]");
        }
        if (!je["attributed_student_turns"].is_array())
            add(where + ".attributed_student_turns must be an array");
        else
            for (const auto& v : je["attributed_student_turns"])
                check_index(v, where + ".attributed_student_turns");
        if (!je["evidence"].is_array())
            add(where + ".evidence must be an array");
        else {
            for (const auto& q : je["evidence"]) {
                if (!q.is_string()) {
                    add(where + ".evidence entries must be strings");
                    continue;
                }
                std::string quote = q.get<std::string>();
                bool found = false;
                for (const auto& turn : t.turns)
                    if (turn.text.find(quote) != std::string::npos) {
                        found = true;
                        break;
                    }
                if (!found)
                    add(where + ".evidence: quote is not a verbatim substring of the transcript");
            }
        }
    }

    for (const auto& v : root["unattributed_student_turns"])
        check_index(v, "unattributed_student_turns");

    // Partition: every student turn accounted for exactly once.
    if (seen_indices != student_indices) {
        for (int idx : student_indices)
            if (!seen_indices.count(idx))
                add("student turn " + std::to_string(idx) +
                    " missing from attribution partition");
    }
    return violations;
}

AssessmentSet parse_assessment(const std::string& document) {
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SyntaxError(e.what(), e.byte > 0 ? e.byte - 1 : 0);
    }
    AssessmentSet a;
    a.week_id = root.at("week_id").get<std::string>();
    a.submission_id = root.at("submission_id").get<std::string>();
    auto backend = backend_from_string(root.at("backend").get<std::string>());
    if (!backend) throw SchemaError("unknown backend", "$.backend");
    a.backend = *backend;
    for (const auto& je : root.at("entries")) {
        SubtopicAssessment entry;
        entry.subtopic_id = je.at("subtopic_id").get<std::string>();
        entry.depth = je.at("depth").get<int>();
        entry.attributed_student_turns = je.at("attributed_student_turns").get<std::vector<int>>();
        entry.evidence = je.at("evidence").get<std::vector<std::string>>();
        a.entries[entry.subtopic_id] = std::move(entry);
    }
    a.unattributed_student_turns =
        root.at("unattributed_student_turns").get<std::vector<int>>();
    return a;
}

}  // namespace engagekit
