#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cpdd/band.hpp"

namespace cpdd {

/** Symmetric adjacency between active nodes coupled by the Laplacian stencil. */
struct NodeGraph {
    std::int32_t n_nodes = 0;
    std::vector<std::int64_t> offsets;
    std::vector<std::int32_t> adjacency;

    std::span<const std::int32_t> neighbors(std::int32_t i) const {
        return {adjacency.data() + offsets[i], static_cast<std::size_t>(offsets[i + 1] - offsets[i])};
    }
    std::int64_t n_edges() const { return static_cast<std::int64_t>(adjacency.size()) / 2; }
};

NodeGraph build_graph(const Band& band);

struct DisjointPartition {
    std::int32_t n_subdomains = 1;
    std::vector<std::int32_t> labels;
    std::vector<std::string> warnings;

    std::vector<std::int32_t> part_sizes() const;
    double balance_ratio() const;
};

struct PartitionOptions {
    double balance_tolerance = 1.2;
    int max_refine_sweeps = 10;
};

/**
 * Deterministic seeded greedy graph growing followed by boundary refinement
 * sweeps that only accept edge-cut-reducing moves within the balance
 * tolerance. The seed permutes refinement visit order only.
 */
DisjointPartition partition_graph(const NodeGraph& graph, std::int32_t n_parts,
                                  std::uint64_t seed, const PartitionOptions& options = {});

std::int64_t edge_cut(const NodeGraph& graph, std::span<const std::int32_t> labels);

/** Number of connected components induced by each part. */
std::vector<std::int32_t> part_components(const NodeGraph& graph,
                                          std::span<const std::int32_t> labels,
                                          std::int32_t n_parts);

/**
 * Reads one integer label per line (line i = active node i in band order).
 * Balance violations are reported as warnings, not errors.
 */
DisjointPartition import_partition(const std::string& path, std::int32_t n_nodes,
                                   std::optional<std::int32_t> n_parts = std::nullopt);

void export_partition(const std::string& path, const DisjointPartition& partition);

}  // namespace cpdd
