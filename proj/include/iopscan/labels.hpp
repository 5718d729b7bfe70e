#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace iopscan {

enum class ClassLabel { NonRogue, Rogue };
enum class TopicLabel { Relevant, Irrelevant, NeedsInvestigation };

inline constexpr std::array<std::string_view, 2> kClassLabelNames = {"NonRogue", "Rogue"};
inline constexpr std::array<std::string_view, 3> kTopicLabelNames = {"Relevant", "Irrelevant",
                                                                     "NeedsInvestigation"};

constexpr std::string_view to_string(ClassLabel l) {
  return kClassLabelNames[static_cast<std::size_t>(l)];
}
constexpr std::string_view to_string(TopicLabel l) {
  return kTopicLabelNames[static_cast<std::size_t>(l)];
}

inline std::optional<ClassLabel> parse_class_label(std::string_view s) {
  if (s == "Rogue") return ClassLabel::Rogue;
  if (s == "NonRogue") return ClassLabel::NonRogue;
  return std::nullopt;
}

inline std::optional<TopicLabel> parse_topic_label(std::string_view s) {
  for (std::size_t i = 0; i < kTopicLabelNames.size(); ++i) {
    if (s == kTopicLabelNames[i]) return static_cast<TopicLabel>(i);
  }
  return std::nullopt;
}

}  // namespace iopscan
