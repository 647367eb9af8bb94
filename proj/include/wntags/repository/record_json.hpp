#pragma once

#include "json.hpp"
#include "wntags/repository/records.hpp"

namespace wntags::repository {

// The persistence line layout of one record.
nlohmann::ordered_json record_to_json(const ImageRecord& record);

// Inverse of record_to_json. Throws nlohmann::json::exception on missing
// or mistyped fields and malformed_record on a bad pos letter. Field
// ranges are not checked; Repository::insert does that.
ImageRecord record_from_json(const nlohmann::json& j);

}  // namespace wntags::repository
