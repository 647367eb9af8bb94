#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "wntags/error.hpp"
#include "wntags/ontology/similarity.hpp"
#include "wntags/repository/repository.hpp"

namespace wntags::service {

struct Request {
  std::string method;  // "GET" or "POST"
  std::string path;
  std::map<std::string, std::string> params;
  std::string body;
  std::string content_type;
};

struct Response {
  int status = 200;
  std::string body;  // JSON
  std::map<std::string, std::string> headers;
};

// HTTP status for a module error code.
int http_status(Errc code) noexcept;

struct ApiOptions {
  std::uint32_t max_distance = 10;  // search default when maxd is absent
  // Saved after every successful mutation when set.
  std::optional<std::filesystem::path> repo_file;
};

// JSON request handling over one repository. Thread safe: reads share a
// lock, mutations take it exclusively and flush before releasing it.
class Api {
 public:
  Api(repository::Repository repo, std::shared_ptr<const ontology::SimilarityTable> table, ApiOptions options = {});

  Response handle(const Request& request);

  repository::Repository snapshot() const;
  // Writes the repository to options.repo_file if set. Throws io_error.
  void flush();

 private:
  Response dispatch(const Request& request);

  Response list_images(const Request& r) const;
  Response get_image(std::string_view id) const;
  Response create_image(const Request& r);
  Response annotate(std::string_view id, const Request& r);
  Response commit(std::string_view id);
  Response search(const Request& r) const;
  Response senses(const Request& r) const;
  Response synset(std::string_view id) const;
  Response stats() const;
  Response agreement(const Request& r) const;
  Response evaluate(const Request& r) const;

  void flush_locked();

  mutable std::shared_mutex mutex_;
  repository::Repository repo_;
  std::shared_ptr<const ontology::SimilarityTable> table_;
  ApiOptions options_;
};

}  // namespace wntags::service
