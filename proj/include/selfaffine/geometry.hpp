#pragma once

#include "selfaffine/params.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace selfaffine::geometry {

struct Point {
    Rat x, y;
    bool operator==(const Point&) const = default;
};

// max-norm
Rat point_distance(const Point& u, const Point& v);

struct Box {
    RationalInterval x, y;

    bool contains(const Point& pt) const { return x.contains(pt.x) && y.contains(pt.y); }
    Rat width_x() const { return x.width(); }
    Rat width_y() const { return y.width(); }
    bool operator==(const Box&) const = default;
};

// max-norm distance between two boxes; zero when they overlap
Rat box_distance(const Box& lhs, const Box& rhs);

/* Smallest axis-aligned box containing the attractor.  Each coordinate range
   is attained by extremal digit streams, so both marginals are exact:
     x: digits 0..m-1 in base p give [0, (m-1)/(p-1)]
     y: the shear sum a * sum i_k r_k plus the base-q digit sum, with the
        positive and negative parts of sum r_k evaluated in closed form
        (for q < 0 the signs split by parity of k). */
Box bounding_box(const AffinePair& pair);

// One contraction S_{i,j}(x,y) = A^{-1}((x,y) + (i,j)).
Point apply_piece_map(const AffinePair& pair, long long i, long long j, const Point& pt);

/* Max-norm radius such that the true piece and its depth-d cloud are mutual
   r-nets.  The linear part of any depth-d composition is A^{-d}, whose shear
   entry transfers horizontal extent into vertical error, so
     r(d) = max(p^{-d} W_x, |a| |r_d| W_x + |q|^{-d} W_y)
   with W_x, W_y the bounding box widths. */
Rat error_radius(const AffinePair& pair, long long depth);

inline constexpr long long default_point_budget = 1'000'000;
inline constexpr long long default_node_budget = 4'000'000;

struct PieceCloud {
    std::vector<Point> points;
    Rat error_radius;
    long long depth = 1;
    std::optional<std::pair<long long, long long>> piece; // nullopt: the whole attractor
};

/* Images of the seed (the fixed point of S_{0,0}, which is the origin) under
   every depth-length composition whose first map is S_{i,j}; (m n)^(depth-1)
   points in word order.  Throws budget_exceeded naming the budget when the
   cloud would not fit. */
PieceCloud piece_cloud(const AffinePair& pair, long long i, long long j, long long depth,
                       long long point_budget = default_point_budget);

// Same with a free first map: all (m n)^depth compositions.
PieceCloud attractor_cloud(const AffinePair& pair, long long depth,
                           long long point_budget = default_point_budget);

/* Decides whether the depth-d clouds of two pieces lie strictly more than
   2 * error_radius(depth) apart in max-norm, which proves the true pieces are
   disjoint.  Branch-and-bound over exact sub-piece boxes; equivalent to the
   full pairwise minimum without materializing the clouds.  Runs of the node
   budget conservatively report false (possible contact). */
bool certified_disjoint(const AffinePair& pair, std::pair<long long, long long> first,
                        std::pair<long long, long long> second, long long depth,
                        long long node_budget = default_node_budget);

enum class EdgeLabel { CertifiedDisjoint, Plausible };
std::string to_string(EdgeLabel label);

struct AdjacencyGraph {
    long long m = 1, n = 1;
    long long depth = 1;

    struct Edge {
        std::size_t u, v; // node indices, u < v
        EdgeLabel label = EdgeLabel::Plausible;
    };
    std::vector<Edge> edges;

    std::size_t node_count() const { return static_cast<std::size_t>(m * n); }
    std::size_t node_index(long long i, long long j) const {
        return static_cast<std::size_t>(i * n + j);
    }
};

/* Labels every candidate piece pair.  Pairs with column offset beyond
   floor((m-1)/(p-1)) have disjoint x-projections outright and are not
   materialized. */
AdjacencyGraph adjacency_graph(const AffinePair& pair, long long depth,
                               long long node_budget = default_node_budget);

enum class EdgePolicy { PlausibleOnly };

// Connectivity over the edges still labeled plausible.
bool graph_connected(const AdjacencyGraph& graph, EdgePolicy policy = EdgePolicy::PlausibleOnly);

enum class RenderFormat { PortableGraymap, ScalableVector };

/* Deterministic plot of the depth-d attractor cloud into the bounding box:
   origin at the lower-left corner, y axis up, one marker per point.  Graymap
   output is binary P5, white background, black marks; vector output is one
   unit rectangle per point on a fixed raster grid.  Byte-identical across
   runs for identical inputs. */
void render(const AffinePair& pair, long long depth, RenderFormat format,
            const std::string& out_path, long long raster_size = 512,
            long long point_budget = default_point_budget);

} // namespace selfaffine::geometry
