#include "promptaug/protocol.h"

#include <httplib.h>

#include <json.hpp>

#include "promptaug/image_io.h"

namespace promptaug {

using nlohmann::json;

std::string make_segment_request(const GrayImage2D& image, const BoundingBox& box) {
  json body;
  body["image_png_b64"] = base64_encode(encode_png_gray(image));
  body["box"] = {box.xmin, box.ymin, box.xmax, box.ymax};
  return body.dump();
}

SegmentRequest parse_segment_request(const std::string& body) {
  json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw InvalidArgument("request body is not a JSON object");
  }
  if (!parsed.contains("image_png_b64") || !parsed["image_png_b64"].is_string()) {
    throw InvalidArgument("missing image_png_b64");
  }
  const json& box = parsed.value("box", json());
  if (!box.is_array() || box.size() != 4) {
    throw InvalidArgument("box must be [xmin, ymin, xmax, ymax]");
  }
  for (const auto& v : box) {
    if (!v.is_number_integer()) throw InvalidArgument("box entries must be integers");
  }
  SegmentRequest req;
  try {
    req.image = decode_png_gray(
        base64_decode(parsed["image_png_b64"].get_ref<const std::string&>()));
  } catch (const IoError& e) {
    throw InvalidArgument(std::string("bad image: ") + e.what());
  }
  req.box = {box[0].get<int>(), box[1].get<int>(), box[2].get<int>(),
             box[3].get<int>()};
  return req;
}

std::string make_segment_response(const BinaryMask2D& mask) {
  json body;
  body["mask_png_b64"] = base64_encode(encode_png_gray(mask_to_gray(mask)));
  return body.dump();
}

BinaryMask2D parse_segment_response(const std::string& body, int expected_width,
                                    int expected_height) {
  json parsed = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object() ||
      !parsed.contains("mask_png_b64") || !parsed["mask_png_b64"].is_string()) {
    throw BackendError(BackendErrorKind::kMalformedResponse,
                       "response lacks mask_png_b64");
  }
  GrayImage2D gray;
  try {
    gray = decode_png_gray(
        base64_decode(parsed["mask_png_b64"].get_ref<const std::string&>()));
  } catch (const IoError& e) {
    throw BackendError(BackendErrorKind::kMalformedResponse,
                       std::string("undecodable mask: ") + e.what());
  }
  if (gray.width() != expected_width || gray.height() != expected_height) {
    throw BackendError(BackendErrorKind::kDimensionMismatch,
                       "mask is " + std::to_string(gray.width()) + "x" +
                           std::to_string(gray.height()) + ", image is " +
                           std::to_string(expected_width) + "x" +
                           std::to_string(expected_height));
  }
  return gray_to_mask(gray);
}

namespace {

void split_endpoint(const std::string& endpoint, std::string& host,
                    std::string& prefix) {
  const auto scheme = endpoint.find("://");
  const auto path_start =
      endpoint.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path_start == std::string::npos) {
    host = endpoint;
    prefix.clear();
  } else {
    host = endpoint.substr(0, path_start);
    prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  }
}

httplib::Client make_client(const std::string& host,
                            std::chrono::milliseconds timeout) {
  httplib::Client client(host);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

[[noreturn]] void throw_transport(httplib::Error err, const std::string& what,
                                  std::chrono::steady_clock::duration elapsed,
                                  std::chrono::milliseconds timeout) {
  BackendErrorKind kind = BackendErrorKind::kUnavailable;
  if (err == httplib::Error::ConnectionTimeout ||
      (err == httplib::Error::Read && elapsed >= timeout)) {
    kind = BackendErrorKind::kTimeout;
  }
  throw BackendError(kind, what + ": " + httplib::to_string(err));
}

}  // namespace

RemoteSegmenter::RemoteSegmenter(std::string endpoint,
                                 std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {
  if (endpoint_.empty()) throw InvalidArgument("empty endpoint");
  split_endpoint(endpoint_, host_, prefix_);
}

BinaryMask2D RemoteSegmenter::segment(const GrayImage2D& image,
                                      const BoundingBox& box) const {
  auto client = make_client(host_, timeout_);
  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(prefix_ + "/segment", make_segment_request(image, box),
                         "application/json");
  if (!res) {
    throw_transport(res.error(), "POST " + endpoint_ + "/segment",
                    std::chrono::steady_clock::now() - start, timeout_);
  }
  if (res->status != 200) {
    throw BackendError(BackendErrorKind::kBadStatus,
                       "segment returned HTTP " + std::to_string(res->status) +
                           ": " + res->body,
                       res->status);
  }
  return parse_segment_response(res->body, image.width(), image.height());
}

std::string RemoteSegmenter::health() const {
  auto client = make_client(host_, timeout_);
  const auto start = std::chrono::steady_clock::now();
  auto res = client.Get(prefix_ + "/health");
  if (!res) {
    throw_transport(res.error(), "GET " + endpoint_ + "/health",
                    std::chrono::steady_clock::now() - start, timeout_);
  }
  if (res->status != 200) {
    throw BackendError(BackendErrorKind::kBadStatus,
                       "health returned HTTP " + std::to_string(res->status),
                       res->status);
  }
  json parsed = json::parse(res->body, nullptr, false);
  if (parsed.is_discarded() || parsed.value("status", "") != "ok") {
    throw BackendError(BackendErrorKind::kMalformedResponse,
                       "unexpected health body: " + res->body);
  }
  return parsed.value("model", "");
}

BinaryMask2D remote_segment(const std::string& endpoint, const GrayImage2D& image,
                            const BoundingBox& box,
                            std::chrono::milliseconds timeout) {
  return RemoteSegmenter(endpoint, timeout).segment(image, box);
}

ProtocolServer::ProtocolServer(const SegmenterBackend& backend,
                               std::string model_name)
    : backend_(backend),
      model_name_(std::move(model_name)),
      server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ProtocolServer::~ProtocolServer() { stop(); }

void ProtocolServer::install_routes() {
  auto error_body = [](const std::string& message) {
    return json{{"error", message}}.dump();
  };
  server_->Get("/health", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"status", "ok"}, {"model", model_name_}}.dump(),
                    "application/json");
  });
  server_->Post("/segment", [this, error_body](const httplib::Request& req,
                                               httplib::Response& res) {
    SegmentRequest parsed;
    try {
      parsed = parse_segment_request(req.body);
    } catch (const Error& e) {
      res.status = 400;
      res.set_content(error_body(e.what()), "application/json");
      return;
    }
    if (!parsed.box.fits_within(parsed.image.width(), parsed.image.height())) {
      res.status = 422;
      res.set_content(error_body("box out of bounds"), "application/json");
      return;
    }
    try {
      const BinaryMask2D mask = backend_.segment(parsed.image, parsed.box);
      res.set_content(make_segment_response(mask), "application/json");
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(error_body(e.what()), "application/json");
    }
  });
}

int ProtocolServer::start(const std::string& host, int port) {
  host_ = host;
  port_ = port == 0 ? server_->bind_to_any_port(host)
                    : (server_->bind_to_port(host, port) ? port : -1);
  if (port_ < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void ProtocolServer::listen(const std::string& host, int port) {
  host_ = host;
  port_ = port;
  if (!server_->listen(host, port)) {
    throw Error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void ProtocolServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string ProtocolServer::endpoint() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

}  // namespace promptaug
