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

#include "vve/v2p.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

namespace vve
{

namespace
{

constexpr std::array<std::uint16_t, 256> make_crc_table()
{
  std::array<std::uint16_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint16_t crc = static_cast<std::uint16_t>(i << 8);
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
    table[i] = crc;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

template <typename T>
void put_le(PsmFrame & f, std::size_t offset, T value)
{
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    f[offset + i] = static_cast<std::uint8_t>(u >> (8 * i));
  }
}

template <typename T>
T get_le(std::span<const std::uint8_t> f, std::size_t offset)
{
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    u = static_cast<U>(u | (static_cast<U>(f[offset + i]) << (8 * i)));
  }
  return static_cast<T>(u);
}

template <typename T>
T checked_round(double value, const char * field)
{
  const double r = std::round(value);
  if (!std::isfinite(r) || r < static_cast<double>(std::numeric_limits<T>::min()) ||
      r > static_cast<double>(std::numeric_limits<T>::max())) {
    throw std::out_of_range(std::string("PSM field out of range: ") + field);
  }
  return static_cast<T>(r);
}

}  // namespace

const char * to_string(PsmError e)
{
  switch (e) {
    case PsmError::BadLength:
      return "BadLength";
    case PsmError::BadMagic:
      return "BadMagic";
    case PsmError::BadVersion:
      return "BadVersion";
    case PsmError::BadCrc:
      return "BadCrc";
    case PsmError::BadHeading:
      return "BadHeading";
  }
  return "Unknown";
}

PsmDecodeError::PsmDecodeError(PsmError code)
: std::runtime_error(std::string("PSM decode failed: ") + to_string(code)), code_(code)
{
}

std::uint16_t crc16_ccitt_false(std::span<const std::uint8_t> data)
{
  std::uint16_t crc = 0xFFFF;
  for (const auto byte : data) {
    crc = static_cast<std::uint16_t>((crc << 8) ^ kCrcTable[((crc >> 8) ^ byte) & 0xFF]);
  }
  return crc;
}

PsmFrame encode_psm(const PsmMessage & m)
{
  if (m.heading_q >= kPsmHeadingLimit) {
    throw std::invalid_argument("encode_psm: heading_q must be < 28800");
  }
  PsmFrame f{};
  f[0] = kPsmMagic0;
  f[1] = kPsmMagic1;
  f[2] = kPsmVersion;
  f[3] = m.source_id;
  put_le(f, 4, m.timestamp_ms);
  put_le(f, 8, m.x_cm);
  put_le(f, 12, m.y_cm);
  put_le(f, 16, m.speed_q);
  put_le(f, 18, m.heading_q);
  const auto crc = crc16_ccitt_false(std::span<const std::uint8_t>(f.data(), 20));
  f[20] = static_cast<std::uint8_t>(crc >> 8);
  f[21] = static_cast<std::uint8_t>(crc & 0xFF);
  return f;
}

PsmMessage decode_psm(std::span<const std::uint8_t> frame)
{
  if (frame.size() != kPsmFrameSize) {
    throw PsmDecodeError(PsmError::BadLength);
  }
  if (frame[0] != kPsmMagic0 || frame[1] != kPsmMagic1) {
    throw PsmDecodeError(PsmError::BadMagic);
  }
  if (frame[2] != kPsmVersion) {
    throw PsmDecodeError(PsmError::BadVersion);
  }
  const std::uint16_t stored = static_cast<std::uint16_t>((frame[20] << 8) | frame[21]);
  if (stored != crc16_ccitt_false(frame.first(20))) {
    throw PsmDecodeError(PsmError::BadCrc);
  }
  PsmMessage m;
  m.source_id = frame[3];
  m.timestamp_ms = get_le<std::uint32_t>(frame, 4);
  m.x_cm = get_le<std::int32_t>(frame, 8);
  m.y_cm = get_le<std::int32_t>(frame, 12);
  m.speed_q = get_le<std::uint16_t>(frame, 16);
  m.heading_q = get_le<std::uint16_t>(frame, 18);
  if (m.heading_q >= kPsmHeadingLimit) {
    throw PsmDecodeError(PsmError::BadHeading);
  }
  return m;
}

PsmMessage make_psm(std::uint8_t source_id, double t, const Pose2 & pose)
{
  PsmMessage m;
  m.source_id = source_id;
  m.timestamp_ms = checked_round<std::uint32_t>(t * 1000.0, "timestamp_ms");
  m.x_cm = checked_round<std::int32_t>(pose.position.x * 100.0, "x_cm");
  m.y_cm = checked_round<std::int32_t>(pose.position.y * 100.0, "y_cm");
  m.speed_q = checked_round<std::uint16_t>(pose.speed / kPsmSpeedQuantum, "speed_q");

  double deg = std::fmod(rad_to_deg(pose.heading), 360.0);
  if (deg < 0.0) {
    deg += 360.0;
  }
  const auto q = static_cast<std::uint32_t>(std::llround(deg / kPsmHeadingQuantumDeg));
  m.heading_q = static_cast<std::uint16_t>(q % kPsmHeadingLimit);
  return m;
}

Pose2 psm_pose(const PsmMessage & m)
{
  return Pose2{
    {m.x_cm / 100.0, m.y_cm / 100.0},
    deg_to_rad(m.heading_q * kPsmHeadingQuantumDeg),
    m.speed_q * kPsmSpeedQuantum};
}

void ChannelConfig::validate() const
{
  if (!(broadcast_period > 0.0) || !std::isfinite(broadcast_period)) {
    throw std::invalid_argument("channel.broadcast_period must be > 0");
  }
  if (!(latency_mean >= 0.0) || !std::isfinite(latency_mean)) {
    throw std::invalid_argument("channel.latency_mean must be >= 0");
  }
  if (!(latency_jitter >= 0.0) || !std::isfinite(latency_jitter)) {
    throw std::invalid_argument("channel.latency_jitter must be >= 0");
  }
  if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
    throw std::invalid_argument("channel.drop_probability must be in [0, 1]");
  }
}

BroadcastChannel::BroadcastChannel(const ChannelConfig & cfg) : cfg_(cfg), rng_(cfg.rng_seed)
{
  cfg_.validate();
}

bool BroadcastChannel::send(const PsmFrame & frame, std::int64_t now_tick, double dt)
{
  if (!(dt > 0.0)) {
    throw std::invalid_argument("BroadcastChannel::send: dt must be > 0");
  }
  const double u_drop = to_unit(rng_());
  const double u_latency = to_unit(rng_());
  ++sent_;
  if (u_drop < cfg_.drop_probability) {
    ++dropped_;
    return false;
  }
  const double latency =
    std::max(0.0, cfg_.latency_mean + cfg_.latency_jitter * (2.0 * u_latency - 1.0));
  const std::int64_t delay = std::max<std::int64_t>(1, std::llround(latency / dt));
  std::int64_t deliver = now_tick + delay;

  const std::uint8_t source = frame[3];
  if (auto it = last_delivery_.find(source); it != last_delivery_.end()) {
    deliver = std::max(deliver, it->second);
  }
  last_delivery_[source] = deliver;
  in_flight_.push_back(InFlightMessage{frame, deliver, now_tick});
  return true;
}

std::vector<PsmFrame> BroadcastChannel::poll(std::int64_t now_tick)
{
  std::vector<PsmFrame> out;
  auto keep = std::stable_partition(
    in_flight_.begin(), in_flight_.end(),
    [now_tick](const InFlightMessage & m) { return m.deliver_at_tick <= now_tick; });
  for (auto it = in_flight_.begin(); it != keep; ++it) {
    out.push_back(it->frame);
  }
  in_flight_.erase(in_flight_.begin(), keep);
  return out;
}

PsmBroadcaster::PsmBroadcaster(std::uint8_t source_id, double period)
: source_id_(source_id), period_(period)
{
  if (!(period > 0.0)) {
    throw std::invalid_argument("PsmBroadcaster: period must be > 0");
  }
}

bool PsmBroadcaster::tick(
  const PedestrianState & p, double t, std::int64_t now_tick, double dt, BroadcastChannel & channel)
{
  // small slack so t = k * period computed in floating point lands on slot k
  const auto slot = static_cast<std::int64_t>(std::floor(t / period_ + 1e-9));
  if (slot <= last_slot_) {
    return false;
  }
  last_slot_ = slot;
  ++emissions_;
  channel.send(encode_psm(make_psm(source_id_, t, p.pose)), now_tick, dt);
  return true;
}

}  // namespace vve
