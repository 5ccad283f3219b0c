#ifndef PROMPTAUG_PROTOCOL_H_
#define PROMPTAUG_PROTOCOL_H_

// HTTP wire protocol between the pipeline and a model adapter.
//
//   POST {endpoint}/segment
//     {"image_png_b64": <8-bit gray PNG>, "box": [xmin, ymin, xmax, ymax]}
//     Box coordinates are half-open pixels, origin top-left.
//   200 {"mask_png_b64": <8-bit gray PNG, values 0/255, image dims>}
//   400 malformed body, 422 box out of bounds, 500 model failure.
//
//   GET {endpoint}/health -> 200 {"status": "ok", "model": <name>}

#include <atomic>
#include <chrono>
#include <memory>
#include <string>
#include <thread>

#include "promptaug/core.h"
#include "promptaug/segmenter.h"

namespace httplib {
class Server;
}

namespace promptaug {

struct SegmentRequest {
  GrayImage2D image;
  BoundingBox box;
};

std::string make_segment_request(const GrayImage2D& image, const BoundingBox& box);
// Throws InvalidArgument on a malformed body.
SegmentRequest parse_segment_request(const std::string& body);

std::string make_segment_response(const BinaryMask2D& mask);
// Decodes and binarizes (nonzero -> 1). Throws BackendError with
// kMalformedResponse or kDimensionMismatch.
BinaryMask2D parse_segment_response(const std::string& body, int expected_width,
                                    int expected_height);

class RemoteSegmenter final : public SegmenterBackend {
 public:
  // `endpoint` is "http://host:port" optionally followed by a path prefix.
  explicit RemoteSegmenter(std::string endpoint,
                           std::chrono::milliseconds timeout = std::chrono::seconds(30));

  BackendInfo info() const override { return {"remote:" + endpoint_, false}; }
  BinaryMask2D segment(const GrayImage2D& image,
                       const BoundingBox& box) const override;

  // GET /health; returns the reported model name.
  std::string health() const;

 private:
  std::string endpoint_;
  std::string host_;  // scheme://host:port
  std::string prefix_;
  std::chrono::milliseconds timeout_;
};

BinaryMask2D remote_segment(const std::string& endpoint, const GrayImage2D& image,
                            const BoundingBox& box,
                            std::chrono::milliseconds timeout);

// Serves the protocol on top of any backend. Used as the local conformance
// stub (with the mock oracle) and by the `serve-mock` CLI command.
class ProtocolServer {
 public:
  ProtocolServer(const SegmenterBackend& backend, std::string model_name);
  ~ProtocolServer();
  ProtocolServer(const ProtocolServer&) = delete;
  ProtocolServer& operator=(const ProtocolServer&) = delete;

  // Binds to host:port (port 0 picks a free port) and serves on a background
  // thread. Returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  // Blocks serving on the calling thread.
  void listen(const std::string& host, int port);
  void stop();

  std::string endpoint() const;
  int port() const { return port_; }

 private:
  void install_routes();

  const SegmenterBackend& backend_;
  std::string model_name_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::string host_ = "127.0.0.1";
};

}  // namespace promptaug

#endif  // PROMPTAUG_PROTOCOL_H_
