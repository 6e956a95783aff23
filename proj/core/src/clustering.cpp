#include <hgr/clustering.hpp>

#include <hgr/embedding.hpp>
#include <hgr/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace hgr {

void ClusteringFeature::add(const std::vector<double>& point) {
    if (n == 0) ls.assign(point.size(), 0.0);
    if (ls.size() != point.size()) throw DimensionError("ClusteringFeature::add: dimension mismatch");
    ++n;
    double sq = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        ls[i] += point[i];
        sq += point[i] * point[i];
    }
    ss += sq;
}

void ClusteringFeature::merge(const ClusteringFeature& other) {
    if (other.n == 0) return;
    if (n == 0) {
        *this = other;
        return;
    }
    if (ls.size() != other.ls.size())
        throw DimensionError("ClusteringFeature::merge: dimension mismatch");
    n += other.n;
    for (std::size_t i = 0; i < ls.size(); ++i) ls[i] += other.ls[i];
    ss += other.ss;
}

std::vector<double> ClusteringFeature::centroid() const {
    std::vector<double> c(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) c[i] = ls[i] / static_cast<double>(n);
    return c;
}

double ClusteringFeature::radius() const {
    double mean_sq = ss / static_cast<double>(n);
    double cn = 0.0;
    for (double v : ls) cn += (v / static_cast<double>(n)) * (v / static_cast<double>(n));
    return std::sqrt(std::max(0.0, mean_sq - cn));
}

double ClusteringFeature::radiusSquaredIfAdded(const std::vector<double>& point) const {
    double sq = 0.0;
    for (double v : point) sq += v * v;
    double new_n = static_cast<double>(n + 1);
    double mean_sq = (ss + sq) / new_n;
    double cn = 0.0;
    for (std::size_t i = 0; i < ls.size(); ++i) {
        double m = (ls[i] + point[i]) / new_n;
        cn += m * m;
    }
    return std::max(0.0, mean_sq - cn);
}

struct CFTree::Node {
    bool leaf = true;
    std::vector<ClusteringFeature> cfs;
    std::vector<std::unique_ptr<Node>> children;        // internal nodes
    std::vector<std::vector<std::int64_t>> member_ids;  // leaf nodes
};

CFTree::CFTree(double threshold, std::int64_t branching)
    : threshold_(threshold), branching_(branching) {
    if (threshold <= 0.0) throw DimensionError("CFTree: threshold must be positive");
    if (branching < 2) throw DimensionError("CFTree: branching factor must be >= 2");
}

CFTree::~CFTree() = default;
CFTree::CFTree(CFTree&&) noexcept = default;
CFTree& CFTree::operator=(CFTree&&) noexcept = default;

namespace {

std::size_t closestEntry(const std::vector<ClusteringFeature>& cfs,
                         const std::vector<double>& point) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cfs.size(); ++i) {
        double d = squaredDistance(cfs[i].centroid(), point);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

ClusteringFeature sumEntries(const std::vector<ClusteringFeature>& cfs) {
    ClusteringFeature total;
    for (const auto& cf : cfs) total.merge(cf);
    return total;
}

// Farthest-pair seeding: returns the index sets staying in the node and
// moving to the new sibling. Ties are broken by index order.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> splitAssignment(
    const std::vector<ClusteringFeature>& cfs) {
    std::vector<std::vector<double>> centroids;
    centroids.reserve(cfs.size());
    for (const auto& cf : cfs) centroids.push_back(cf.centroid());

    std::size_t seed_a = 0, seed_b = 1;
    double best = -1.0;
    for (std::size_t i = 0; i < cfs.size(); ++i)
        for (std::size_t j = i + 1; j < cfs.size(); ++j) {
            double d = squaredDistance(centroids[i], centroids[j]);
            if (d > best) {
                best = d;
                seed_a = i;
                seed_b = j;
            }
        }

    std::vector<std::size_t> keep, move;
    for (std::size_t i = 0; i < cfs.size(); ++i) {
        double da = squaredDistance(centroids[i], centroids[seed_a]);
        double db = squaredDistance(centroids[i], centroids[seed_b]);
        if (da <= db)
            keep.push_back(i);
        else
            move.push_back(i);
    }
    return {keep, move};
}

} // namespace

namespace {

struct InsertContext {
    double threshold_sq;
    std::int64_t branching;
};

// Returns a new sibling when the node had to split.
std::unique_ptr<CFTree::Node> insertRec(CFTree::Node& node, const std::vector<double>& point,
                                        std::int64_t id, const InsertContext& ctx);

std::unique_ptr<CFTree::Node> splitNode(CFTree::Node& node) {
    auto [keep, move] = splitAssignment(node.cfs);
    auto sibling = std::make_unique<CFTree::Node>();
    sibling->leaf = node.leaf;

    CFTree::Node retained;
    retained.leaf = node.leaf;
    for (std::size_t i : keep) {
        retained.cfs.push_back(std::move(node.cfs[i]));
        if (node.leaf)
            retained.member_ids.push_back(std::move(node.member_ids[i]));
        else
            retained.children.push_back(std::move(node.children[i]));
    }
    for (std::size_t i : move) {
        sibling->cfs.push_back(std::move(node.cfs[i]));
        if (node.leaf)
            sibling->member_ids.push_back(std::move(node.member_ids[i]));
        else
            sibling->children.push_back(std::move(node.children[i]));
    }
    node = std::move(retained);
    return sibling;
}

std::unique_ptr<CFTree::Node> insertRec(CFTree::Node& node, const std::vector<double>& point,
                                        std::int64_t id, const InsertContext& ctx) {
    if (node.leaf) {
        bool merged = false;
        if (!node.cfs.empty()) {
            std::size_t best = closestEntry(node.cfs, point);
            if (node.cfs[best].radiusSquaredIfAdded(point) <= ctx.threshold_sq) {
                node.cfs[best].add(point);
                node.member_ids[best].push_back(id);
                merged = true;
            }
        }
        if (!merged) {
            ClusteringFeature cf;
            cf.add(point);
            node.cfs.push_back(std::move(cf));
            node.member_ids.push_back({id});
        }
    } else {
        std::size_t child_idx = closestEntry(node.cfs, point);
        auto split = insertRec(*node.children[child_idx], point, id, ctx);
        node.cfs[child_idx] = sumEntries(node.children[child_idx]->cfs);
        if (split) {
            node.cfs.insert(node.cfs.begin() + static_cast<std::ptrdiff_t>(child_idx) + 1,
                            sumEntries(split->cfs));
            node.children.insert(node.children.begin() + static_cast<std::ptrdiff_t>(child_idx) + 1,
                                 std::move(split));
        }
    }
    if (static_cast<std::int64_t>(node.cfs.size()) > ctx.branching) return splitNode(node);
    return nullptr;
}

} // namespace

void CFTree::insert(const std::vector<double>& point, std::int64_t id) {
    if (!root_) {
        root_ = std::make_unique<Node>();
        root_->leaf = true;
    }
    InsertContext ctx{threshold_ * threshold_, branching_};
    auto split = insertRec(*root_, point, id, ctx);
    if (split) {
        auto new_root = std::make_unique<Node>();
        new_root->leaf = false;
        new_root->cfs.push_back(sumEntries(root_->cfs));
        new_root->cfs.push_back(sumEntries(split->cfs));
        new_root->children.push_back(std::move(root_));
        new_root->children.push_back(std::move(split));
        root_ = std::move(new_root);
    }
}

namespace {

void collectLeaves(const CFTree::Node& node, std::vector<Cluster>& out) {
    if (node.leaf) {
        for (std::size_t i = 0; i < node.cfs.size(); ++i) {
            Cluster c;
            c.cluster_id = static_cast<std::int64_t>(out.size());
            c.centroid = node.cfs[i].centroid();
            c.member_ids = node.member_ids[i];
            std::sort(c.member_ids.begin(), c.member_ids.end());
            out.push_back(std::move(c));
        }
        return;
    }
    for (const auto& child : node.children) collectLeaves(*child, out);
}

} // namespace

std::vector<Cluster> CFTree::leafClusters() const {
    std::vector<Cluster> out;
    if (root_) collectLeaves(*root_, out);
    return out;
}

CFTree birchFit(const std::vector<std::pair<std::int64_t, std::vector<double>>>& points,
                double threshold, std::int64_t branching) {
    CFTree tree(threshold, branching);
    for (const auto& [id, vec] : points) tree.insert(vec, id);
    return tree;
}

std::vector<std::int64_t> nearestMembers(
    const std::vector<double>& centroid,
    const std::vector<std::pair<std::int64_t, std::vector<double>>>& points, std::int64_t top_d) {
    if (top_d < 1) throw DimensionError("nearestMembers: top_d must be >= 1");
    std::vector<std::pair<double, std::int64_t>> scored;
    scored.reserve(points.size());
    for (const auto& [id, vec] : points)
        scored.emplace_back(squaredDistance(vec, centroid), id);
    std::sort(scored.begin(), scored.end());
    std::size_t keep = std::min<std::size_t>(scored.size(), static_cast<std::size_t>(top_d));
    std::vector<std::int64_t> ids;
    ids.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) ids.push_back(scored[i].second);
    return ids;
}

SparseMatrix buildSemanticIncidence(
    const std::vector<Cluster>& clusters,
    const std::vector<std::pair<std::int64_t, std::vector<double>>>& points,
    std::int64_t vocab_size, std::int64_t top_d, double tau) {
    if (tau <= 0.0) throw DimensionError("buildSemanticIncidence: tau must be positive");
    std::vector<Triplet> triplets;
    // point lookup for distance evaluation
    std::vector<const std::vector<double>*> by_id(static_cast<std::size_t>(vocab_size), nullptr);
    for (const auto& [id, vec] : points) by_id[static_cast<std::size_t>(id)] = &vec;

    for (const auto& cluster : clusters) {
        for (std::int64_t ent : nearestMembers(cluster.centroid, points, top_d)) {
            double dist_sq = squaredDistance(*by_id[static_cast<std::size_t>(ent)],
                                             cluster.centroid);
            double weight = std::exp(-dist_sq / tau);
            if (weight > 0.0) triplets.push_back({ent, cluster.cluster_id, weight});
        }
    }
    return SparseMatrix(vocab_size, static_cast<std::int64_t>(clusters.size()),
                        std::move(triplets));
}

} // namespace hgr
