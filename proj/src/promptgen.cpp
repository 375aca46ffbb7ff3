#include "engagekit/promptgen.hpp"

#include <algorithm>

#include "engagekit/errors.hpp"
#include "engagekit/text.hpp"

namespace engagekit {

const std::string kDefaultPersonaTemplate =
    "You are the Instructor Agent for the course \"{course_title}\". You act as the primary\n"
    "in-class tutor: help each student reach the week's learning outcomes through a guided,\n"
    "inquiry-driven conversation, at the student's own pace.\n"
    "\n"
    "Respond in a clear, encouraging and academically precise style. Break concepts into\n"
    "steps, check understanding before moving on, and offer short practice quizzes when the\n"
    "student asks for them.\n"
    "\n"
    "Guardrails: stay within the scope of this course and this week's topics.\n"
    "Do not deviate from the goals of instructional support, and do not drift into\n"
    "tangential subjects.\n"
    "Be critical and accurate, prioritizing truth and facts over agreement with the student.\n"
    "If you are unsure of a fact, say so rather than guessing.";

const std::string kDefaultPedagogyTemplate =
    "Pedagogical alignment (inquiry-based, scaffolded learning):\n"
    "- Link every teaching action to the kind of knowledge it builds: declarative (facts and\n"
    "  definitions, supported by memory), procedural (skills and steps, supported by\n"
    "  induction and practice), or conceptual (models and relationships, supported by\n"
    "  sense-making).\n"
    "- Give practical examples and real-world use-cases for every major concept you\n"
    "  introduce.\n"
    "- Regularly encourage the student to reflect on their understanding of the topics\n"
    "  before moving on.";

namespace {

constexpr std::string_view kSectionPersona = "[PERSONA]";
constexpr std::string_view kSectionPedagogy = "[PEDAGOGY]";
constexpr std::string_view kSectionKnowledge = "[KNOWLEDGE-BASE]";
constexpr std::string_view kSectionStarters = "[STARTER-PROMPTS]";

std::string rstrip(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ' ||
                          s.back() == '\t'))
        s.pop_back();
    return s;
}

bool is_section_header(std::string_view line) {
    return line == kSectionPersona || line == kSectionPedagogy || line == kSectionKnowledge ||
           line == kSectionStarters;
}

void check_no_header_lines(const std::string& layer, const char* which) {
    std::size_t start = 0;
    while (start <= layer.size()) {
        std::size_t nl = layer.find('\n', start);
        std::string_view line(layer.data() + start,
                              (nl == std::string::npos ? layer.size() : nl) - start);
        if (is_section_header(line))
            throw Error(std::string(which) + " layer contains a reserved section header line");
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
}

}  // namespace

std::string build_persona_layer(const Curriculum& course, const std::string& tmpl) {
    if (trim(tmpl).empty()) throw Error("persona template is empty");
    const std::string placeholder = "{course_title}";
    std::size_t pos = tmpl.find(placeholder);
    if (pos == std::string::npos)
        throw Error("persona template is missing the {course_title} placeholder");
    std::string out = tmpl;
    while ((pos = out.find(placeholder)) != std::string::npos)
        out.replace(pos, placeholder.size(), course.title);
    if (out.find(kGuardrailScopeClause) == std::string::npos)
        throw Error("persona layer is missing the scope guardrail clause");
    if (out.find(kGuardrailAccuracyClause) == std::string::npos)
        throw Error("persona layer is missing the accuracy guardrail clause");
    return rstrip(out);
}

std::string build_pedagogy_layer(const std::string& tmpl) {
    if (trim(tmpl).empty()) throw Error("pedagogy template is empty");
    return rstrip(tmpl);
}

std::string build_knowledge_layer(const Curriculum& c, const std::string& week_id) {
    const WeekSpec* week = c.find_week(week_id);
    if (!week) throw UnknownWeekError(week_id);

    std::string out;
    out += "Topic knowledge base for week " + week->week_id + ": " + week->topic_title + "\n\n";
    out += "Subtopics for this week (with learning outcomes):\n";
    int i = 1;
    for (const auto& s : week->subtopics) {
        out += std::to_string(i++) + ". " + s.title + " [Bloom: " +
               std::string(to_string(s.bloom_level)) + "]";
        if (s.tutorial_only) out += " (covered in the hands-on tutorial session)";
        out += "\n   Outcome: " + s.learning_outcome + "\n";
    }
    if (week->prev_week_id) {
        const WeekSpec* prev = c.find_week(*week->prev_week_id);
        out += "\nPreceding topic (already covered): " +
               (prev ? prev->topic_title : *week->prev_week_id) + "\n";
    }
    if (week->next_week_id) {
        const WeekSpec* next = c.find_week(*week->next_week_id);
        out += (week->prev_week_id ? "" : "\n");
        out += "Succeeding topic (do not cover yet): " +
               (next ? next->topic_title : *week->next_week_id) + "\n";
    }
    out += "\nKeep the conversation within these subtopics; refer to the preceding and\n"
           "succeeding topics only to preserve curricular continuity.";
    return rstrip(out);
}

AgentConfig assemble_agent_config(const Curriculum& c, const std::string& week_id,
                                  const std::string& persona_template,
                                  const std::string& pedagogy_template) {
    const WeekSpec* week = c.find_week(week_id);
    if (!week) throw UnknownWeekError(week_id);

    AgentConfig cfg;
    cfg.week_id = week_id;
    cfg.persona_layer = build_persona_layer(c, persona_template);
    cfg.pedagogy_layer = build_pedagogy_layer(pedagogy_template);
    cfg.knowledge_layer = build_knowledge_layer(c, week_id);
    cfg.starter_prompts = week->starter_prompts;
    cfg.starter_prompts.push_back(std::string(kStarterPromptProgress));
    cfg.starter_prompts.push_back(std::string(kStarterPromptQuiz));

    check_no_header_lines(cfg.persona_layer, "persona");
    check_no_header_lines(cfg.pedagogy_layer, "pedagogy");
    check_no_header_lines(cfg.knowledge_layer, "knowledge");
    for (const auto& p : cfg.starter_prompts)
        if (p.empty() || p.find('\n') != std::string::npos)
            throw Error("starter prompts must be nonempty single lines");

    cfg.assembled = serialize_agent_config(cfg);
    return cfg;
}

std::string serialize_agent_config(const AgentConfig& cfg) {
    std::string out;
    out += "# agent-config/v1 week=" + cfg.week_id + "\n";
    out += std::string(kSectionPersona) + "\n" + cfg.persona_layer + "\n";
    out += std::string(kSectionPedagogy) + "\n" + cfg.pedagogy_layer + "\n";
    out += std::string(kSectionKnowledge) + "\n" + cfg.knowledge_layer + "\n";
    out += std::string(kSectionStarters) + "\n";
    for (const auto& p : cfg.starter_prompts) out += "- " + p + "\n";
    return out;
}

AgentConfig parse_agent_config(const std::string& document) {
    AgentConfig cfg;
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= document.size()) {
        std::size_t nl = document.find('\n', start);
        if (nl == std::string::npos) {
            if (start < document.size()) lines.push_back(document.substr(start));
            break;
        }
        lines.push_back(document.substr(start, nl - start));
        start = nl + 1;
    }

    const std::string header_prefix = "# agent-config/v1 week=";
    if (lines.empty() || lines.front().rfind(header_prefix, 0) != 0)
        throw SchemaError("missing agent-config/v1 header line", "line 1");
    cfg.week_id = lines.front().substr(header_prefix.size());

    std::string* current = nullptr;
    bool in_starters = false;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& line = lines[i];
        if (line == kSectionPersona) {
            current = &cfg.persona_layer;
            in_starters = false;
        } else if (line == kSectionPedagogy) {
            current = &cfg.pedagogy_layer;
            in_starters = false;
        } else if (line == kSectionKnowledge) {
            current = &cfg.knowledge_layer;
            in_starters = false;
        } else if (line == kSectionStarters) {
            current = nullptr;
            in_starters = true;
        } else if (in_starters) {
            if (line.rfind("- ", 0) != 0)
                throw SchemaError("starter prompt lines must begin with \"- \"",
                                  "line " + std::to_string(i + 1));
            cfg.starter_prompts.push_back(line.substr(2));
        } else if (current) {
            if (!current->empty()) *current += "\n";
            *current += line;
        } else {
            throw SchemaError("content before the first section header",
                              "line " + std::to_string(i + 1));
        }
    }
    cfg.persona_layer = rstrip(cfg.persona_layer);
    cfg.pedagogy_layer = rstrip(cfg.pedagogy_layer);
    cfg.knowledge_layer = rstrip(cfg.knowledge_layer);
    cfg.assembled = serialize_agent_config(cfg);
    return cfg;
}

}  // namespace engagekit
