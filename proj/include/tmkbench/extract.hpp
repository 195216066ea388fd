#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tmkbench/prompts.hpp"
#include "tmkbench/vocabulary.hpp"

namespace tmkbench::extract {

struct RawResponse {
  std::string text;
  std::string model;
  int prompt_tokens = 0;
  int completion_tokens = 0;
};

struct DroppedLine {
  std::size_t line_no = 0;  // zero-based within the plan block
  std::string line;
  std::string reason;
};

struct ExtractedPlan {
  std::vector<core::Action> actions;
  std::vector<DroppedLine> dropped;
  std::size_t span_begin = 0;  // character range of the plan block in the response
  std::size_t span_end = 0;

  bool empty() const { return actions.empty(); }
};

/// Locates the answer block: the content after the last [PLAN] tag, up to its
/// [PLAN END] if one follows, else to end of text. Without any tag the whole
/// text is the block. Tags match case-insensitively and tolerate -/_ joiners.
std::pair<std::size_t, std::size_t> extract_block(std::string_view response_text);

struct Skip {
  std::string reason;
};

using LineResult = std::variant<core::Action, Skip>;

/// Turns one response line into a canonical action, tolerating the
/// decorations models add: list markers, "-"/"_"/"*" symbols, "obj"/"o" for
/// "object", and a stray English gloss next to the variant's action word.
/// Lines without exactly one action keyword, or with the wrong number of
/// block mentions, are skipped with a reason.
LineResult normalize_line(const vocab::Vocabulary& v, const std::vector<core::BlockId>& blocks,
                          std::string_view line);

/// extract_block + normalize_line over each line, preserving order. Never
/// reorders or deduplicates. An empty result is the EmptyPlan outcome and is
/// scored as incorrect downstream.
ExtractedPlan extract_plan(const vocab::Vocabulary& v, const prompts::Instance& instance,
                           const RawResponse& response);

}  // namespace tmkbench::extract
