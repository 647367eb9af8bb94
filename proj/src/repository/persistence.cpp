#include "wntags/repository/persistence.hpp"

#include <fstream>
#include <string>

#include "json.hpp"
#include "wntags/repository/record_json.hpp"
#include "wntags/error.hpp"

namespace wntags::repository {

using ordered_json = nlohmann::ordered_json;

ordered_json record_to_json(const ImageRecord& record) {
  ordered_json j;
  j["id"] = to_integer(record.id);
  j["uri"] = record.uri;
  j["keyword"] = record.keyword ? ordered_json(*record.keyword) : ordered_json(nullptr);
  if (record.emotion) {
    j["emotion"] = {{"val", record.emotion->valence},
                    {"ar", record.emotion->arousal},
                    {"dom", record.emotion->dominance}};
  } else {
    j["emotion"] = nullptr;
  }
  auto tags = ordered_json::array();
  for (const auto& tag : record.annotations) {
    ordered_json t;
    t["lemma"] = tag.sense.lemma;
    t["pos"] = std::string(1, ontology::pos_letter(tag.sense.synset.pos));
    t["offset"] = tag.sense.synset.offset;
    auto ratings = ordered_json::array();
    for (const auto& r : tag.ratings) {
      ratings.push_back({{"annotator", r.annotator},
                         {"weight", r.weight},
                         {"at", r.recorded_at.time_since_epoch().count()}});
    }
    t["ratings"] = std::move(ratings);
    tags.push_back(std::move(t));
  }
  j["tags"] = std::move(tags);
  j["committed"] = record.committed;
  return j;
}

ImageRecord record_from_json(const nlohmann::json& j) {
  ImageRecord record;
  record.id = ImageId{j.at("id").get<std::uint64_t>()};
  record.uri = j.at("uri").get<std::string>();
  if (!j.at("keyword").is_null()) record.keyword = j.at("keyword").get<std::string>();
  if (const auto& e = j.at("emotion"); !e.is_null()) {
    record.emotion = EmotionTuple{e.at("val").get<double>(), e.at("ar").get<double>(), e.at("dom").get<double>()};
  }
  for (const auto& t : j.at("tags")) {
    AnnotatedSense tag;
    tag.sense.lemma = t.at("lemma").get<std::string>();
    const auto pos = t.at("pos").get<std::string>();
    const auto parsed = pos.size() == 1 ? ontology::pos_from_letter(pos[0]) : std::nullopt;
    if (!parsed) throw Error(Errc::malformed_record, "bad pos '" + pos + "'");
    tag.sense.synset = {*parsed, t.at("offset").get<std::uint32_t>()};
    for (const auto& r : t.at("ratings")) {
      tag.ratings.push_back({r.at("annotator").get<std::string>(), r.at("weight").get<double>(),
                             Timestamp{std::chrono::milliseconds{r.at("at").get<std::int64_t>()}}});
    }
    record.annotations.push_back(std::move(tag));
  }
  record.committed = j.at("committed").get<bool>();
  return record;
}

namespace {

Error at_line(Errc code, std::size_t line_no, const std::string& what) {
  Error err(code, "repository line " + std::to_string(line_no) + ": " + what);
  err.with_line(line_no);
  return err;
}

}  // namespace

void save(const Repository& repo, std::ostream& out) {
  for (const auto& [id, record] : repo.images()) {
    out << record_to_json(record).dump() << '\n';
  }
  if (!out) throw Error(Errc::io_error, "failed writing repository");
}

Repository load(std::istream& in, std::shared_ptr<const ontology::OntologyGraph> graph) {
  Repository repo(std::move(graph));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ImageRecord record;
    try {
      record = record_from_json(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw at_line(Errc::malformed_record, line_no, e.what());
    } catch (const Error& e) {
      throw at_line(Errc::malformed_record, line_no, e.what());
    }
    try {
      repo.insert(std::move(record));
    } catch (const Error& e) {
      throw at_line(e.code() == Errc::unknown_sense ? Errc::unknown_sense : Errc::malformed_record, line_no,
                    e.what());
    }
  }
  return repo;
}

void save_file(const Repository& repo, const std::filesystem::path& file) {
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_error, "cannot write " + tmp.string());
    save(repo, out);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw Error(Errc::io_error, "cannot replace " + file.string() + ": " + ec.message());
}

Repository load_file(const std::filesystem::path& file, std::shared_ptr<const ontology::OntologyGraph> graph) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + file.string());
  return load(in, std::move(graph));
}

}  // namespace wntags::repository
