#pragma once

#include <vector>

#include "mlsn/netcore.hpp"

namespace mlsn {

// Deterministic Louvain modularity clustering (resolution 1): nodes are
// scanned in index order and ties in the gain break toward the lower
// community id, so repeated runs agree exactly.
std::vector<int> louvain_communities(const Layer& g);

int community_count(const std::vector<int>& labels);

// max over layers of the Louvain community count; the default block count C.
int choose_block_count(const MultilayerNetwork& net);

}  // namespace mlsn
