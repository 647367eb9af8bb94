#include "wntags/error.hpp"

namespace wntags {

std::string_view code_name(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_line: return "malformed_line";
    case Errc::dangling_pointer: return "dangling_pointer";
    case Errc::duplicate_offset: return "duplicate_offset";
    case Errc::unknown_synset: return "unknown_synset";
    case Errc::score_out_of_range: return "score_out_of_range";
    case Errc::emotion_out_of_range: return "emotion_out_of_range";
    case Errc::unknown_image: return "unknown_image";
    case Errc::unknown_sense: return "unknown_sense";
    case Errc::weight_out_of_range: return "weight_out_of_range";
    case Errc::empty_ratings: return "empty_ratings";
    case Errc::too_few_senses: return "too_few_senses";
    case Errc::uncommitted_image: return "uncommitted_image";
    case Errc::insufficient_raters: return "insufficient_raters";
    case Errc::malformed_record: return "malformed_record";
    case Errc::empty_query: return "empty_query";
    case Errc::invalid_range: return "invalid_range";
    case Errc::invalid_k: return "invalid_k";
    case Errc::empty_judgment: return "empty_judgment";
    case Errc::invalid_spec: return "invalid_spec";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io_error: return "io_error";
  }
  return "internal";
}

bool is_input_error(Errc code) noexcept {
  switch (code) {
    case Errc::malformed_line:
    case Errc::dangling_pointer:
    case Errc::duplicate_offset:
    case Errc::malformed_record:
    case Errc::io_error:
      return true;
    default:
      return false;
  }
}

}  // namespace wntags
