#pragma once

#include <cstdint>
#include <deque>

namespace ntn {

struct Packet {
  int ue_id = 0;
  std::int64_t size_bits = 0;
  std::int64_t arrival_slot = 0;
  std::int64_t remaining_bits = 0;
};

// FIFO of packets for one UE. Bits are integers so that the conservation
// identity arrived = delivered + dropped + queued holds exactly.
struct PacketQueue {
  int ue_id = 0;
  std::deque<Packet> packets;
  std::int64_t arrived_bits = 0;
  std::int64_t delivered_bits = 0;
  std::int64_t dropped_bits = 0;

  std::int64_t queued_bits() const;
  bool empty() const { return packets.empty(); }
  // Age of the head-of-line packet at `current_slot`; 0 for an empty queue.
  std::int64_t head_age(std::int64_t current_slot) const;
  bool conserved() const { return arrived_bits == delivered_bits + dropped_bits + queued_bits(); }
};

void enqueue_packets(PacketQueue& queue, std::int64_t count, std::int64_t size_bits, std::int64_t slot);

// Removes every packet with current_slot - arrival_slot >= deadline_slots.
std::int64_t drop_expired(PacketQueue& queue, std::int64_t current_slot, std::int64_t deadline_slots = 10);

// Drains up to capacity_bits head-of-line first; partial packets keep their residual.
std::int64_t serve_bits(PacketQueue& queue, std::int64_t capacity_bits);

}  // namespace ntn
