#pragma once

#include <hgr/sparse.hpp>

#include <cstdint>
#include <memory>
#include <vector>

namespace hgr {

/// BIRCH clustering feature: point count, linear sum, sum of squared norms.
struct ClusteringFeature {
    std::size_t n = 0;
    std::vector<double> ls;
    double ss = 0.0;

    void add(const std::vector<double>& point);
    void merge(const ClusteringFeature& other);
    std::vector<double> centroid() const;
    /// sqrt(SS/n - ||LS/n||^2), clamped at 0 against rounding.
    double radius() const;
    double radiusSquaredIfAdded(const std::vector<double>& point) const;
};

struct Cluster {
    std::int64_t cluster_id = 0;
    std::vector<double> centroid;
    std::vector<std::int64_t> member_ids;  // ascending
};

/// CF-tree with radius threshold T and branching factor B. Insertion order is
/// the caller's responsibility; ascending id gives reproducible builds.
class CFTree {
public:
    CFTree(double threshold, std::int64_t branching);
    ~CFTree();
    CFTree(CFTree&&) noexcept;
    CFTree& operator=(CFTree&&) noexcept;

    void insert(const std::vector<double>& point, std::int64_t id);
    std::vector<Cluster> leafClusters() const;

    double threshold() const { return threshold_; }
    std::int64_t branching() const { return branching_; }

    struct Node;  // defined in clustering.cpp

private:
    double threshold_;
    std::int64_t branching_;
    std::unique_ptr<Node> root_;
};

/// Single scan over (id, vector) pairs. Zero vectors must be excluded by the
/// caller. Empty input yields a tree with no clusters.
CFTree birchFit(const std::vector<std::pair<std::int64_t, std::vector<double>>>& points,
                double threshold, std::int64_t branching);

/// Top-D ids by ascending distance to the centroid, ties by ascending id.
std::vector<std::int64_t> nearestMembers(const std::vector<double>& centroid,
                                         const std::vector<std::pair<std::int64_t, std::vector<double>>>& points,
                                         std::int64_t top_d);

/// |V| x K incidence with Gaussian kernel weights exp(-dist^2 / tau) on each
/// centroid's top-D nearest entities, zero elsewhere.
SparseMatrix buildSemanticIncidence(const std::vector<Cluster>& clusters,
                                    const std::vector<std::pair<std::int64_t, std::vector<double>>>& points,
                                    std::int64_t vocab_size, std::int64_t top_d, double tau);

} // namespace hgr
