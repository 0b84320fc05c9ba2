#include "wsn/transport/sequencing.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>

namespace wsn {

ReorderBuffer::ReorderBuffer(int capacity) : capacity_(capacity) {
    WSN_ASSERT(capacity_ >= 1, "reorder capacity must be positive");
}

ReorderBuffer::Result ReorderBuffer::accept(PacketPtr p) {
    WSN_ASSERT(p && p->connectionSeq > 0, "sequenced packet required");
    Result r;
    const std::uint64_t seq = p->connectionSeq;

    if (seq < nextExpected_) {
        r.action = Result::Action::Duplicate;
        return r;
    }
    if (seq == nextExpected_) {
        r.action = Result::Action::Delivered;
        r.released.push_back(std::move(p));
        ++nextExpected_;
        // Drain the now-contiguous prefix of holds.
        bool advanced = true;
        while (advanced) {
            advanced = false;
            for (auto it = held_.begin(); it != held_.end(); ++it) {
                if ((*it)->connectionSeq == nextExpected_) {
                    r.released.push_back(std::move(*it));
                    held_.erase(it);
                    ++nextExpected_;
                    advanced = true;
                    break;
                }
            }
        }
        return r;
    }

    for (const auto& h : held_) {
        if (h->connectionSeq == seq) {
            r.action = Result::Action::Duplicate;
            return r;
        }
    }
    held_.push_back(std::move(p));
    r.action = Result::Action::Held;
    if (held_.size() > static_cast<std::size_t>(capacity_)) {
        r.overflowDropped.push_back(std::move(held_.front()));
        held_.pop_front();
    }
    return r;
}

std::vector<PacketPtr> ReorderBuffer::heldPackets() const {
    return {held_.begin(), held_.end()};
}

} // namespace wsn
