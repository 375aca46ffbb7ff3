#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "engagekit/curriculum.hpp"

namespace engagekit {

// Guardrail clauses every persona layer must carry, verbatim.
inline constexpr std::string_view kGuardrailScopeClause =
    "not deviate from the goals of instructional support";
inline constexpr std::string_view kGuardrailAccuracyClause =
    "prioritizing truth and facts over agreement with the student";

// Generic starter prompts appended to every week's configuration, verbatim.
inline constexpr std::string_view kStarterPromptProgress =
    "List topics for this week and my progress";
inline constexpr std::string_view kStarterPromptQuiz =
    "Give a quiz on the topics we have discussed";

// Default layer templates. The persona template must contain the
// {course_title} placeholder and both guardrail clauses.
extern const std::string kDefaultPersonaTemplate;
extern const std::string kDefaultPedagogyTemplate;

// Weekly Instructor-Agent configuration: three prompt layers plus starter
// prompts. `assembled` is the full config document with labeled sections in
// the order persona -> pedagogy -> knowledge -> starter prompts.
struct AgentConfig {
    std::string week_id;
    std::string persona_layer;
    std::string pedagogy_layer;
    std::string knowledge_layer;
    std::vector<std::string> starter_prompts;
    std::string assembled;
};

// Course-wide persona and guardrails. Substitutes {course_title}; throws
// Error when the placeholder or either guardrail clause is missing, or the
// template is blank.
std::string build_persona_layer(const Curriculum& course, const std::string& tmpl);

// Course-wide pedagogical alignment block (knowledge types, worked examples,
// reflection). A custom template is returned verbatim; blank is an error.
std::string build_pedagogy_layer(const std::string& tmpl);

// Week-specific topic knowledge base: subtopics with outcomes and Bloom
// levels, tutorial markers, and adjacent-week references. Throws
// UnknownWeekError.
std::string build_knowledge_layer(const Curriculum& c, const std::string& week_id);

AgentConfig assemble_agent_config(const Curriculum& c, const std::string& week_id,
                                  const std::string& persona_template = kDefaultPersonaTemplate,
                                  const std::string& pedagogy_template = kDefaultPedagogyTemplate);

// Lossless file form of an AgentConfig: sections labeled [PERSONA],
// [PEDAGOGY], [KNOWLEDGE-BASE], [STARTER-PROMPTS].
std::string serialize_agent_config(const AgentConfig& cfg);
AgentConfig parse_agent_config(const std::string& document);

}  // namespace engagekit
