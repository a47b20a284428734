#include <string>

#include "httplib.h"

#include "hairflow/service.hpp"

namespace hairflow::service {

void mount(Service& service, httplib::Server& server,
           const std::optional<std::filesystem::path>& static_dir) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const Response r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    if (!r.body.empty() || r.status != 204) res.set_content(r.body, r.content_type);
  };
  const std::string pattern = R"(/sessions(/.*)?)";
  server.Get(pattern, forward);
  server.Post(pattern, forward);
  server.Put(pattern, forward);
  server.Delete(pattern, forward);
  server.Patch(pattern, forward);
  if (static_dir) server.set_mount_point("/", static_dir->string());
}

}  // namespace hairflow::service
