#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace instfuse::wire {

inline constexpr std::uint8_t kProtocolVersion = 1;
inline constexpr std::size_t kHeaderBytes = 13;  // 1 + 4 + 4 + 2 + 2
inline constexpr std::size_t kRecordOverheadBytes = 12;  // 2 grid ints + score

struct MessageHeader {
  std::uint8_t protocol_version = kProtocolVersion;
  std::uint32_t sender_id = 0;
  std::uint32_t frame_id = 0;
  std::uint16_t feature_dim = 0;
  std::uint16_t instance_count = 0;
};

struct InstanceRecord {
  std::vector<float> feature;  // feature_dim values
  std::int32_t grid_x = 0;
  std::int32_t grid_y = 0;
  float score = 0.0f;

  bool operator==(const InstanceRecord&) const = default;
};

// The unit of transmission: filtered instance features plus their sparse
// position-map cells and scores.
struct AgentMessage {
  MessageHeader header;
  std::vector<InstanceRecord> records;

  bool operator==(const AgentMessage& other) const;

  std::size_t payload_bytes() const {
    return records.size() *
           (4ull * header.feature_dim + kRecordOverheadBytes);
  }
  std::size_t feature_bytes() const {
    return records.size() * 4ull * header.feature_dim;
  }
  std::size_t total_bytes() const { return kHeaderBytes + payload_bytes(); }
};

/// Canonical little-endian encoding: header, then per instance feature_dim
/// f32 values, grid_x/grid_y as i32, score as f32.
std::vector<std::uint8_t> encode(const AgentMessage& msg);

/// Exact inverse of encode. Throws CodecError with kind MalformedHeader,
/// VersionUnsupported or LengthMismatch.
AgentMessage decode(const std::vector<std::uint8_t>& bytes);

enum class Accounting { FeatureOnly, FullPayload };

struct BandwidthReport {
  Accounting accounting = Accounting::FeatureOnly;
  std::size_t frame_count = 0;
  double mean_bytes = 0.0;
  double median_bytes = 0.0;
  std::uint64_t min_bytes = 0;
  std::uint64_t max_bytes = 0;
  double variance_bytes = 0.0;
  // log2 of mean_bytes; -inf when the mean is zero (rendered "n/a").
  double log2_mean_bytes = 0.0;

  bool has_traffic() const { return mean_bytes > 0.0; }
};

BandwidthReport bandwidth_from_frame_bytes(std::vector<std::uint64_t> per_frame,
                                           Accounting accounting);

/// Per-frame byte statistics over a run. Messages are grouped by frame_id in
/// [0, frame_count); frames without any message contribute 0 bytes.
/// FeatureOnly counts instance_count * 4 * feature_dim per message (the
/// headline figure); FullPayload additionally counts headers, grid cells and
/// scores. Throws ConfigError when frame_count == 0.
BandwidthReport bandwidth_log2(const std::vector<AgentMessage>& messages,
                               std::size_t frame_count, Accounting accounting);

/// Bytes for the late-fusion baseline: 7 box floats + 1 score, 32-bit each.
std::uint64_t late_fusion_bytes(std::uint64_t box_count);

// .msgdump container: concatenated u32-LE length-prefixed encoded messages.
void write_msgdump(const std::vector<AgentMessage>& messages,
                   const std::string& path);
std::vector<AgentMessage> read_msgdump(const std::string& path);

}  // namespace instfuse::wire
