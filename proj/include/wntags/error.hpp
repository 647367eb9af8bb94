#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wntags {

// Every failure raised by the library carries one of these codes. The
// service layer maps them to HTTP statuses and the CLI to exit codes.
enum class Errc {
  malformed_line,
  dangling_pointer,
  duplicate_offset,
  unknown_synset,
  score_out_of_range,
  emotion_out_of_range,
  unknown_image,
  unknown_sense,
  weight_out_of_range,
  empty_ratings,
  too_few_senses,
  uncommitted_image,
  insufficient_raters,
  malformed_record,
  empty_query,
  invalid_range,
  invalid_k,
  empty_judgment,
  invalid_spec,
  invalid_argument,
  io_error,
};

std::string_view code_name(Errc code) noexcept;

// True for failures caused by unreadable or malformed input files, as
// opposed to domain rule violations.
bool is_input_error(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

  // 1-based line number for parse failures.
  const std::optional<std::size_t>& line() const noexcept { return line_; }
  Error& with_line(std::size_t line) {
    line_ = line;
    return *this;
  }

  // Offending count for too_few_senses and insufficient_raters.
  const std::optional<std::size_t>& count() const noexcept { return count_; }
  Error& with_count(std::size_t count) {
    count_ = count;
    return *this;
  }

 private:
  Errc code_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> count_;
};

}  // namespace wntags
