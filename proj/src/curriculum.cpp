#include "engagekit/curriculum.hpp"

#include <json.hpp>

#include <set>
#include <unordered_set>

#include "engagekit/errors.hpp"
#include "engagekit/text.hpp"

namespace engagekit {

using nlohmann::json;

namespace {

constexpr int kMaxWeeksPerModule = 4;

const char* kBloomNames[] = {"Remember", "Understand", "Apply", "Analyze", "Evaluate", "Create"};

json require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(std::string("missing field \"") + key + "\"", path);
    return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& path) {
    json v = require(obj, key, path);
    if (!v.is_string())
        throw SchemaError(std::string("field \"") + key + "\" must be a string", path + "." + key);
    return v.get<std::string>();
}

json require_array(const json& obj, const char* key, const std::string& path) {
    json v = require(obj, key, path);
    if (!v.is_array())
        throw SchemaError(std::string("field \"") + key + "\" must be an array", path + "." + key);
    return v;
}

Subtopic parse_subtopic(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError("subtopic must be an object", path);
    Subtopic s;
    s.subtopic_id = require_string(j, "subtopic_id", path);
    s.title = require_string(j, "title", path);
    for (const auto& kw : require_array(j, "keywords", path)) {
        if (!kw.is_string()) throw SchemaError("keyword must be a string", path + ".keywords");
        s.keywords.push_back(kw.get<std::string>());
    }
    s.learning_outcome = require_string(j, "learning_outcome", path);
    std::string bloom = require_string(j, "bloom_level", path);
    auto level = bloom_from_string(bloom);
    if (!level)
        throw SchemaError("unknown bloom_level \"" + bloom + "\"", path + ".bloom_level");
    s.bloom_level = *level;
    s.tutorial_only = j.value("tutorial_only", false);
    return s;
}

WeekSpec parse_week(const json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError("week must be an object", path);
    WeekSpec w;
    w.week_id = require_string(j, "week_id", path);
    w.topic_title = require_string(j, "topic_title", path);
    for (const auto& p : require_array(j, "starter_prompts", path))
        w.starter_prompts.push_back(p.get<std::string>());
    if (j.contains("prev_week_id")) w.prev_week_id = j["prev_week_id"].get<std::string>();
    if (j.contains("next_week_id")) w.next_week_id = j["next_week_id"].get<std::string>();
    json subs = require_array(j, "subtopics", path);
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        std::string spath = path + ".subtopics[" + std::to_string(i) + "]";
        Subtopic s = parse_subtopic(subs[i], spath);
        if (!seen.insert(s.subtopic_id).second)
            throw SchemaError("duplicate subtopic_id \"" + s.subtopic_id + "\"", spath);
        w.subtopics.push_back(std::move(s));
    }
    return w;
}

json subtopic_to_json(const Subtopic& s) {
    json j;
    j["subtopic_id"] = s.subtopic_id;
    j["title"] = s.title;
    j["keywords"] = s.keywords;
    j["learning_outcome"] = s.learning_outcome;
    j["bloom_level"] = std::string(to_string(s.bloom_level));
    j["tutorial_only"] = s.tutorial_only;
    return j;
}

}  // namespace

std::string_view to_string(BloomLevel level) {
    return kBloomNames[static_cast<int>(level)];
}

std::optional<BloomLevel> bloom_from_string(std::string_view name) {
    for (int i = 0; i < 6; ++i)
        if (name == kBloomNames[i]) return static_cast<BloomLevel>(i);
    return std::nullopt;
}

const WeekSpec* Curriculum::find_week(std::string_view week_id) const {
    for (const auto& m : modules)
        for (const auto& w : m.weeks)
            if (w.week_id == week_id) return &w;
    return nullptr;
}

Curriculum parse_curriculum(std::string_view document) {
    if (auto bad = utf8_invalid_at(document))
        throw SyntaxError("invalid UTF-8 byte", *bad);
    json root;
    try {
        root = json::parse(document);
    } catch (const json::parse_error& e) {
        // nlohmann reports 1-based byte positions.
        std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
        throw SyntaxError(e.what(), offset);
    }
    if (!root.is_object()) throw SchemaError("top level must be an object", "$");

    Curriculum c;
    c.course_id = require_string(root, "course_id", "$");
    c.title = require_string(root, "title", "$");
    json modules = require_array(root, "modules", "$");
    std::unordered_set<std::string> module_ids;
    std::unordered_set<std::string> week_ids;
    for (std::size_t mi = 0; mi < modules.size(); ++mi) {
        std::string mpath = "modules[" + std::to_string(mi) + "]";
        const json& jm = modules[mi];
        if (!jm.is_object()) throw SchemaError("module must be an object", mpath);
        ModuleSpec m;
        m.module_id = require_string(jm, "module_id", mpath);
        if (!module_ids.insert(m.module_id).second)
            throw SchemaError("duplicate module_id \"" + m.module_id + "\"", mpath);
        m.title = require_string(jm, "title", mpath);
        json weeks = require_array(jm, "weeks", mpath);
        for (std::size_t wi = 0; wi < weeks.size(); ++wi) {
            std::string wpath = mpath + ".weeks[" + std::to_string(wi) + "]";
            WeekSpec w = parse_week(weeks[wi], wpath);
            // Week ids must be unique across the whole course so that lookup
            // by week_id is unambiguous.
            if (!week_ids.insert(w.week_id).second)
                throw SchemaError("duplicate week_id \"" + w.week_id + "\"", wpath);
            m.weeks.push_back(std::move(w));
        }
        c.modules.push_back(std::move(m));
    }

    ValidationReport report = validate_curriculum(c);
    if (!report.empty())
        throw SchemaError(report.front().message, report.front().path);
    return c;
}

std::string serialize_curriculum(const Curriculum& c) {
    json root;
    root["course_id"] = c.course_id;
    root["title"] = c.title;
    root["modules"] = json::array();
    for (const auto& m : c.modules) {
        json jm;
        jm["module_id"] = m.module_id;
        jm["title"] = m.title;
        jm["weeks"] = json::array();
        for (const auto& w : m.weeks) {
            json jw;
            jw["week_id"] = w.week_id;
            jw["topic_title"] = w.topic_title;
            jw["starter_prompts"] = w.starter_prompts;
            if (w.prev_week_id) jw["prev_week_id"] = *w.prev_week_id;
            if (w.next_week_id) jw["next_week_id"] = *w.next_week_id;
            jw["subtopics"] = json::array();
            for (const auto& s : w.subtopics) jw["subtopics"].push_back(subtopic_to_json(s));
            jm["weeks"].push_back(std::move(jw));
        }
        root["modules"].push_back(std::move(jm));
    }
    return root.dump(2) + "\n";
}

ValidationReport validate_curriculum(const Curriculum& c) {
    ValidationReport report;
    auto add = [&](std::string path, std::string message) {
        report.push_back({std::move(path), std::move(message)});
    };

    if (c.course_id.empty()) add("$.course_id", "course_id must be nonempty");
    if (c.modules.empty()) add("$.modules", "curriculum must have at least one module");

    std::set<std::string> module_ids;
    std::set<std::string> all_week_ids;
    for (const auto& m : c.modules)
        for (const auto& w : m.weeks) all_week_ids.insert(w.week_id);

    for (std::size_t mi = 0; mi < c.modules.size(); ++mi) {
        const auto& m = c.modules[mi];
        std::string mpath = "modules[" + std::to_string(mi) + "]";
        if (!module_ids.insert(m.module_id).second)
            add(mpath, "duplicate module_id \"" + m.module_id + "\"");
        if (m.weeks.empty() || m.weeks.size() > kMaxWeeksPerModule)
            add(mpath + ".weeks", "module must have 1-" + std::to_string(kMaxWeeksPerModule) +
                                      " weeks, has " + std::to_string(m.weeks.size()));
        std::set<std::string> week_ids;
        for (std::size_t wi = 0; wi < m.weeks.size(); ++wi) {
            const auto& w = m.weeks[wi];
            std::string wpath = mpath + ".weeks[" + std::to_string(wi) + "]";
            if (!week_ids.insert(w.week_id).second)
                add(wpath, "duplicate week_id \"" + w.week_id + "\"");
            if (w.subtopics.empty()) add(wpath + ".subtopics", "week must have subtopics");
            if (w.prev_week_id && !all_week_ids.count(*w.prev_week_id))
                add(wpath + ".prev_week_id",
                    "dangling prev_week_id \"" + *w.prev_week_id + "\"");
            if (w.next_week_id && !all_week_ids.count(*w.next_week_id))
                add(wpath + ".next_week_id",
                    "dangling next_week_id \"" + *w.next_week_id + "\"");
            std::set<std::string> subtopic_ids;
            for (std::size_t si = 0; si < w.subtopics.size(); ++si) {
                const auto& s = w.subtopics[si];
                std::string spath = wpath + ".subtopics[" + std::to_string(si) + "]";
                if (!subtopic_ids.insert(s.subtopic_id).second)
                    add(spath, "duplicate subtopic_id \"" + s.subtopic_id + "\"");
                if (s.keywords.empty()) add(spath + ".keywords", "keywords must be nonempty");
                for (std::size_t ki = 0; ki < s.keywords.size(); ++ki) {
                    const auto& kw = s.keywords[ki];
                    if (kw.empty() || kw != to_lower(kw))
                        add(spath + ".keywords[" + std::to_string(ki) + "]",
                            "keyword \"" + kw + "\" must be nonempty lowercase");
                }
            }
        }
    }
    return report;
}

const std::vector<Subtopic>& subtopics_for_week(const Curriculum& c, std::string_view week_id) {
    const WeekSpec* w = c.find_week(week_id);
    if (!w) throw UnknownWeekError(std::string(week_id));
    return w->subtopics;
}

}  // namespace engagekit
