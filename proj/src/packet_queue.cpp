#include "ntn/packet_queue.hpp"

#include <algorithm>

namespace ntn {

std::int64_t PacketQueue::queued_bits() const {
  std::int64_t total = 0;
  for (const auto& p : packets) total += p.remaining_bits;
  return total;
}

std::int64_t PacketQueue::head_age(std::int64_t current_slot) const {
  return packets.empty() ? 0 : current_slot - packets.front().arrival_slot;
}

void enqueue_packets(PacketQueue& queue, std::int64_t count, std::int64_t size_bits, std::int64_t slot) {
  if (size_bits <= 0) return;
  for (std::int64_t i = 0; i < count; ++i) {
    queue.packets.push_back(Packet{queue.ue_id, size_bits, slot, size_bits});
    queue.arrived_bits += size_bits;
  }
}

std::int64_t drop_expired(PacketQueue& queue, std::int64_t current_slot, std::int64_t deadline_slots) {
  std::int64_t dropped = 0;
  while (!queue.packets.empty() && current_slot - queue.packets.front().arrival_slot >= deadline_slots) {
    dropped += queue.packets.front().remaining_bits;
    queue.packets.pop_front();
  }
  queue.dropped_bits += dropped;
  return dropped;
}

std::int64_t serve_bits(PacketQueue& queue, std::int64_t capacity_bits) {
  std::int64_t delivered = 0;
  while (capacity_bits > 0 && !queue.packets.empty()) {
    Packet& head = queue.packets.front();
    const std::int64_t take = std::min(capacity_bits, head.remaining_bits);
    head.remaining_bits -= take;
    capacity_bits -= take;
    delivered += take;
    if (head.remaining_bits == 0) queue.packets.pop_front();
  }
  queue.delivered_bits += delivered;
  return delivered;
}

}  // namespace ntn
