// Copyright (C) 2026 The nnmig Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Channel-last <-> channel-first permutations and the channel-sensitive runs they wrap.

#include <map>
#include <string>
#include <vector>

#include "nnmig/pivot.hpp"

namespace nnmig {

/// (B, d1..dk, C) -> (B, C, d1..dk) for a tensor of the given rank.
inline Ints to_channel_first_order(size_t rank) {
    Ints order{0, static_cast<int64_t>(rank) - 1};
    for (size_t i = 1; i + 1 < rank; ++i) order.push_back(static_cast<int64_t>(i));
    return order;
}

/// Inverse of to_channel_first_order.
inline Ints to_channel_last_order(size_t rank) {
    Ints order{0};
    for (size_t i = 2; i < rank; ++i) order.push_back(static_cast<int64_t>(i));
    order.push_back(1);
    return order;
}

inline Ints compose_orders(const Ints& first, const Ints& second) {
    Ints out;
    for (int64_t i : second) out.push_back(first.at(static_cast<size_t>(i)));
    return out;
}

/// Indices [first, last] into nn.modules of one maximal run of consecutive channel-sensitive
/// layers of equal spatial rank where each member after the first reads only its predecessor
/// and the predecessor feeds nothing else.
struct ChannelRun {
    size_t first = 0;
    size_t last = 0;
    int spatial_rank = 0;
    size_t tensor_rank() const { return static_cast<size_t>(spatial_rank) + 2; }
};

inline bool is_channel_sensitive_module(const ModuleSpec& m) {
    return m.is_layer() && is_channel_sensitive(m.layer().kind);
}

inline std::vector<ChannelRun> channel_runs(const PivotNN& nn) {
    const auto readers = consumers_of(nn);
    auto reader_count = [&](const std::string& name) {
        auto it = readers.find(name);
        return it == readers.end() ? size_t{0} : it->second.size();
    };
    std::vector<ChannelRun> runs;
    size_t i = 0;
    while (i < nn.modules.size()) {
        if (!is_channel_sensitive_module(nn.modules[i])) {
            ++i;
            continue;
        }
        ChannelRun run{i, i, spatial_rank(nn.modules[i].layer().kind)};
        while (run.last + 1 < nn.modules.size()) {
            const ModuleSpec& prev = nn.modules[run.last];
            const ModuleSpec& next = nn.modules[run.last + 1];
            if (!is_channel_sensitive_module(next) || spatial_rank(next.layer().kind) != run.spatial_rank) break;
            if (next.inputs.size() != 1 || next.inputs.front() != prev.name) break;
            if (reader_count(prev.name) != 1) break;
            ++run.last;
        }
        runs.push_back(run);
        i = run.last + 1;
    }
    return runs;
}

}  // namespace nnmig
