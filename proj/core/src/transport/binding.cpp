#include "wsn/transport/binding.hpp"

#include "wsn/util/assert.hpp"

namespace wsn {

EntityBinding BindingDirectory::registerEntity(EntityId entity, NodeId node,
                                               const Location& loc, SimTime now) {
    auto& versions = history_[entity];
    EntityBinding b;
    b.entity = entity;
    b.node = node;
    b.location = loc;
    b.version = versions.empty() ? 1 : versions.back().version + 1;
    b.at = now;
    versions.push_back(b);
    return b;
}

EntityBinding BindingDirectory::migrate(EntityId entity, NodeId node, const Location& loc,
                                        SimTime now) {
    WSN_ASSERT(known(entity), "migrate of unregistered entity");
    return registerEntity(entity, node, loc, now);
}

bool BindingDirectory::known(EntityId entity) const {
    auto it = history_.find(entity);
    return it != history_.end() && !it->second.empty();
}

std::optional<EntityBinding> BindingDirectory::current(EntityId entity) const {
    auto it = history_.find(entity);
    if (it == history_.end() || it->second.empty())
        return std::nullopt;
    return it->second.back();
}

std::optional<EntityBinding> BindingDirectory::senderView(EntityId entity, SimTime now,
                                                          double senderLag) const {
    auto it = history_.find(entity);
    if (it == history_.end() || it->second.empty())
        return std::nullopt;
    const auto& versions = it->second;
    EntityBinding view = versions.front();
    for (const auto& v : versions)
        if (timeAtOrBefore(v.at + senderLag, now))
            view = v;
    return view;
}

const std::vector<EntityBinding>* BindingDirectory::history(EntityId entity) const {
    auto it = history_.find(entity);
    return it == history_.end() ? nullptr : &it->second;
}

} // namespace wsn
