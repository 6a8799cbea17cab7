#include "instfuse/wire.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "instfuse/errors.hpp"

namespace instfuse::wire {

namespace {

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) {
  out.push_back(v);
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
  }
}

void put_i32(std::vector<std::uint8_t>& out, std::int32_t v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint8_t u8() { return bytes_[pos_++]; }

  std::uint16_t u16() {
    const std::uint16_t v = static_cast<std::uint16_t>(
        bytes_[pos_] | (static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8));
    pos_ += 2;
    return v;
  }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
      v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += 4;
    return v;
  }

  std::int32_t i32() { return std::bit_cast<std::int32_t>(u32()); }
  float f32() { return std::bit_cast<float>(u32()); }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

bool AgentMessage::operator==(const AgentMessage& other) const {
  return header.protocol_version == other.header.protocol_version &&
         header.sender_id == other.header.sender_id &&
         header.frame_id == other.header.frame_id &&
         header.feature_dim == other.header.feature_dim &&
         header.instance_count == other.header.instance_count &&
         records == other.records;
}

std::vector<std::uint8_t> encode(const AgentMessage& msg) {
  std::vector<std::uint8_t> out;
  out.reserve(msg.total_bytes());
  put_u8(out, msg.header.protocol_version);
  put_u32(out, msg.header.sender_id);
  put_u32(out, msg.header.frame_id);
  put_u16(out, msg.header.feature_dim);
  put_u16(out, msg.header.instance_count);
  for (const InstanceRecord& rec : msg.records) {
    for (float f : rec.feature) put_f32(out, f);
    put_i32(out, rec.grid_x);
    put_i32(out, rec.grid_y);
    put_f32(out, rec.score);
  }
  return out;
}

AgentMessage decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw CodecError(CodecErrorKind::MalformedHeader,
                     "need " + std::to_string(kHeaderBytes) + " bytes, got " +
                         std::to_string(bytes.size()));
  }
  Reader r(bytes);
  AgentMessage msg;
  msg.header.protocol_version = r.u8();
  if (msg.header.protocol_version != kProtocolVersion) {
    throw CodecError(CodecErrorKind::VersionUnsupported,
                     "version " + std::to_string(msg.header.protocol_version));
  }
  msg.header.sender_id = r.u32();
  msg.header.frame_id = r.u32();
  msg.header.feature_dim = r.u16();
  msg.header.instance_count = r.u16();

  const std::uint64_t expected =
      static_cast<std::uint64_t>(msg.header.instance_count) *
      (4ull * msg.header.feature_dim + kRecordOverheadBytes);
  if (r.remaining() != expected) {
    throw CodecError(CodecErrorKind::LengthMismatch,
                     "payload has " + std::to_string(r.remaining()) +
                         " bytes, expected " + std::to_string(expected));
  }

  msg.records.resize(msg.header.instance_count);
  for (InstanceRecord& rec : msg.records) {
    rec.feature.resize(msg.header.feature_dim);
    for (float& f : rec.feature) f = r.f32();
    rec.grid_x = r.i32();
    rec.grid_y = r.i32();
    rec.score = r.f32();
  }
  return msg;
}

BandwidthReport bandwidth_from_frame_bytes(std::vector<std::uint64_t> per_frame,
                                           Accounting accounting) {
  if (per_frame.empty()) throw ConfigError("bandwidth needs >= 1 frame");
  BandwidthReport report;
  report.accounting = accounting;
  report.frame_count = per_frame.size();

  double sum = 0.0;
  report.min_bytes = per_frame.front();
  report.max_bytes = per_frame.front();
  for (std::uint64_t b : per_frame) {
    sum += static_cast<double>(b);
    report.min_bytes = std::min(report.min_bytes, b);
    report.max_bytes = std::max(report.max_bytes, b);
  }
  report.mean_bytes = sum / static_cast<double>(per_frame.size());

  double var = 0.0;
  for (std::uint64_t b : per_frame) {
    const double d = static_cast<double>(b) - report.mean_bytes;
    var += d * d;
  }
  report.variance_bytes = var / static_cast<double>(per_frame.size());

  std::sort(per_frame.begin(), per_frame.end());
  const std::size_t n = per_frame.size();
  report.median_bytes =
      n % 2 == 1 ? static_cast<double>(per_frame[n / 2])
                 : 0.5 * (static_cast<double>(per_frame[n / 2 - 1]) +
                          static_cast<double>(per_frame[n / 2]));

  report.log2_mean_bytes = report.mean_bytes > 0.0
                               ? std::log2(report.mean_bytes)
                               : -std::numeric_limits<double>::infinity();
  return report;
}

BandwidthReport bandwidth_log2(const std::vector<AgentMessage>& messages,
                               std::size_t frame_count, Accounting accounting) {
  if (frame_count == 0) throw ConfigError("bandwidth needs >= 1 frame");
  std::vector<std::uint64_t> per_frame(frame_count, 0);
  for (const AgentMessage& msg : messages) {
    if (msg.header.frame_id >= frame_count) {
      throw ConfigError("message frame_id out of range");
    }
    per_frame[msg.header.frame_id] += accounting == Accounting::FeatureOnly
                                          ? msg.feature_bytes()
                                          : msg.total_bytes();
  }
  return bandwidth_from_frame_bytes(std::move(per_frame), accounting);
}

std::uint64_t late_fusion_bytes(std::uint64_t box_count) {
  return box_count * 32ull;  // 7 box floats + 1 score, f32
}

void write_msgdump(const std::vector<AgentMessage>& messages,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  for (const AgentMessage& msg : messages) {
    const std::vector<std::uint8_t> bytes = encode(msg);
    std::vector<std::uint8_t> prefix;
    put_u32(prefix, static_cast<std::uint32_t>(bytes.size()));
    out.write(reinterpret_cast<const char*>(prefix.data()),
              static_cast<std::streamsize>(prefix.size()));
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
  }
  if (!out) throw ConfigError("write failed: " + path);
}

std::vector<AgentMessage> read_msgdump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open msgdump: " + path);
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  std::vector<AgentMessage> messages;
  std::size_t pos = 0;
  while (pos < data.size()) {
    if (data.size() - pos < 4) {
      throw CodecError(CodecErrorKind::LengthMismatch,
                       "truncated msgdump length prefix");
    }
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) {
      len |= static_cast<std::uint32_t>(data[pos + i]) << (8 * i);
    }
    pos += 4;
    if (data.size() - pos < len) {
      throw CodecError(CodecErrorKind::LengthMismatch,
                       "truncated msgdump record");
    }
    messages.push_back(decode({data.begin() + static_cast<std::ptrdiff_t>(pos),
                               data.begin() + static_cast<std::ptrdiff_t>(pos + len)}));
    pos += len;
  }
  return messages;
}

}  // namespace instfuse::wire
