// Copyright 2026 The VVE Sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VVE__V2P_HPP_
#define VVE__V2P_HPP_

#include "vve/agents.hpp"
#include "vve/geometry.hpp"

#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace vve
{

// Pedestrian safety message (PSM) wire frame, 22 bytes, little-endian fields:
//
//   [0..1]   magic 0x50 0x53 ("PS")
//   [2]      version (1)
//   [3]      source_id
//   [4..7]   timestamp_ms  u32
//   [8..11]  x_cm          i32
//   [12..15] y_cm          i32
//   [16..17] speed_q       u16, 0.02 m/s per unit
//   [18..19] heading_q     u16, 0.0125 deg per unit, CCW from +x, < 28800
//   [20..21] CRC-16/CCITT-FALSE over bytes 0..19, big-endian

inline constexpr std::size_t kPsmFrameSize = 22;
inline constexpr std::uint8_t kPsmMagic0 = 0x50;
inline constexpr std::uint8_t kPsmMagic1 = 0x53;
inline constexpr std::uint8_t kPsmVersion = 0x01;
inline constexpr double kPsmSpeedQuantum = 0.02;       // m/s
inline constexpr double kPsmHeadingQuantumDeg = 0.0125;
inline constexpr std::uint16_t kPsmHeadingLimit = 28800;

using PsmFrame = std::array<std::uint8_t, kPsmFrameSize>;

struct PsmMessage
{
  std::uint8_t source_id{0};
  std::uint32_t timestamp_ms{0};
  std::int32_t x_cm{0};
  std::int32_t y_cm{0};
  std::uint16_t speed_q{0};
  std::uint16_t heading_q{0};

  bool operator==(const PsmMessage &) const = default;
};

// BadHeading flags a CRC-valid frame whose heading_q is outside [0, 28800).
enum class PsmError { BadLength, BadMagic, BadVersion, BadCrc, BadHeading };

const char * to_string(PsmError e);

class PsmDecodeError : public std::runtime_error
{
public:
  explicit PsmDecodeError(PsmError code);
  PsmError code() const noexcept { return code_; }

private:
  PsmError code_;
};

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final xor.
std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data);

/// Throws std::invalid_argument if heading_q >= 28800.
PsmFrame encode_psm(const PsmMessage & m);

/// Validates length, magic, version and CRC in that order; throws PsmDecodeError.
PsmMessage decode_psm(std::span<const std::uint8_t> frame);

/// Quantize a virtual-frame pose into a message. Throws std::out_of_range when a
/// field does not fit its wire width.
PsmMessage make_psm(std::uint8_t source_id, double t, const Pose2 & pose);

/// Physical pose carried by a message.
Pose2 psm_pose(const PsmMessage & m);

struct ChannelConfig
{
  double broadcast_period{0.1};
  double latency_mean{0.03};
  double latency_jitter{0.01};
  double drop_probability{0.0};
  std::uint64_t rng_seed{0};

  void validate() const;
};

struct InFlightMessage
{
  PsmFrame frame{};
  std::int64_t deliver_at_tick{0};
  std::int64_t sent_at_tick{0};
};

/**
 * Deterministic lossy broadcast link between pedestrian beacons and the vehicle.
 *
 * Every send consumes exactly two draws from a 64-bit Mersenne twister seeded with
 * `rng_seed`: the first decides the drop (dropped when u < drop_probability), the
 * second picks the latency uniformly in [mean - jitter, mean + jitter], clamped at 0.
 * Uniform variates are formed from the top 53 bits of each draw so the schedule is
 * identical across standard libraries. Delivery happens at least one tick after the
 * send, and a source's frames never overtake each other.
 */
class BroadcastChannel
{
public:
  explicit BroadcastChannel(const ChannelConfig & cfg);

  /// Returns true if the frame was scheduled, false if it was dropped.
  bool send(const PsmFrame & frame, std::int64_t now_tick, double dt);

  /// Frames due at or before `now_tick`, in send order. Removes them.
  std::vector<PsmFrame> poll(std::int64_t now_tick);

  const std::deque<InFlightMessage> & in_flight() const { return in_flight_; }
  std::uint64_t sent_count() const { return sent_; }
  std::uint64_t dropped_count() const { return dropped_; }
  const ChannelConfig & config() const { return cfg_; }

  /// Maps one raw 64-bit draw onto [0, 1).
  static double to_unit(std::uint64_t draw) { return static_cast<double>(draw >> 11) * 0x1.0p-53; }

private:
  ChannelConfig cfg_;
  std::mt19937_64 rng_;
  std::deque<InFlightMessage> in_flight_;
  std::map<std::uint8_t, std::int64_t> last_delivery_;
  std::uint64_t sent_{0};
  std::uint64_t dropped_{0};
};

/// Periodic PSM beacon for one pedestrian: emits on the first tick at or after each
/// multiple of the broadcast period.
class PsmBroadcaster
{
public:
  PsmBroadcaster(std::uint8_t source_id, double period);

  /// Returns true when a message was emitted (whether or not the channel dropped it).
  bool tick(
    const PedestrianState & p, double t, std::int64_t now_tick, double dt,
    BroadcastChannel & channel);

  std::uint64_t emissions() const { return emissions_; }

private:
  std::uint8_t source_id_;
  double period_;
  std::int64_t last_slot_{-1};
  std::uint64_t emissions_{0};
};

}  // namespace vve

#endif  // VVE__V2P_HPP_
