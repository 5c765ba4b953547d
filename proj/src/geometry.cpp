#include "selfaffine/geometry.hpp"

#include "selfaffine/disjoint_sets.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <tuple>

namespace selfaffine::geometry {

namespace {

void require_normalized(const AffinePair& pair, const char* op) {
    require_valid(pair);
    if (pair.p < 0) {
        throw invalid_input(std::string(op) +
                            " expects p >= 2; apply normalize_sign to the parameters first");
    }
}

void require_digit(long long value, long long count, const char* name) {
    if (value < 0 || value >= count) {
        throw invalid_input(std::string(name) + " digit out of range");
    }
}

RationalInterval scale_interval(const RationalInterval& iv, const Rat& s) {
    if (s >= 0) return {iv.lo * s, iv.hi * s};
    return {iv.hi * s, iv.lo * s};
}

// exact positive/negative parts of sum_{k>=1} r_k; for q < 0 the signs split by parity
std::pair<Rat, Rat> shear_sum_parts(long long p, long long q) {
    if (q > 0) {
        return {rat(1, (p - 1) * (q - 1)), Rat(0)};
    }
    const Rat s = Rat(q - p);
    const Rat even = (rat(1, p * p - 1) - rat(1, q * q - 1)) / s;
    const Rat odd = (rat(p, p * p - 1) - rat(q, q * q - 1)) / s;
    Rat positive = even > 0 ? even : Rat(0);
    Rat negative = odd + (even < 0 ? even : Rat(0));
    return {positive, negative};
}

struct LevelScales {
    std::vector<Rat> px;    // p^{-l}
    std::vector<Rat> qx;    // q^{-l}, signed
    std::vector<Rat> shear; // a * inverse_shear_coeff(p, q, l)

    LevelScales(const AffinePair& pair, long long max_level) {
        px.reserve(static_cast<size_t>(max_level) + 1);
        qx.reserve(static_cast<size_t>(max_level) + 1);
        shear.reserve(static_cast<size_t>(max_level) + 1);
        for (long long l = 0; l <= max_level; ++l) {
            px.push_back(rat_pow(rat(1, pair.p), l));
            qx.push_back(rat_pow(rat(1, pair.q), l));
            shear.push_back(pair.a * inverse_shear_coeff(pair.p, pair.q, l));
        }
    }
};

Int cloud_size(long long m, long long n, long long words) {
    return int_pow(Int(m * n), words);
}

void check_point_budget(const Int& count, long long budget) {
    if (count > budget) {
        throw budget_exceeded("cloud needs " + count.str() + " points; the point budget is " +
                              std::to_string(budget));
    }
}

// all words of the given length, point = image of the origin, word order
std::vector<Point> word_images(const AffinePair& pair, long long length) {
    std::vector<Point> current{Point{Rat(0), Rat(0)}};
    for (long long level = 0; level < length; ++level) {
        std::vector<Point> next;
        next.reserve(current.size() * static_cast<size_t>(pair.m * pair.n));
        for (long long i = 0; i < pair.m; ++i) {
            for (long long j = 0; j < pair.n; ++j) {
                for (const Point& pt : current) {
                    next.push_back(apply_piece_map(pair, i, j, pt));
                }
            }
        }
        current = std::move(next);
    }
    return current;
}

} // namespace

Rat point_distance(const Point& u, const Point& v) {
    return std::max(rat_abs(u.x - v.x), rat_abs(u.y - v.y));
}

Rat box_distance(const Box& lhs, const Box& rhs) {
    return std::max(interval_gap(lhs.x, rhs.x), interval_gap(lhs.y, rhs.y));
}

Box bounding_box(const AffinePair& pair) {
    require_normalized(pair, "bounding_box");
    Box box;
    box.x = RationalInterval(Rat(0), rat(pair.m - 1, pair.p - 1));
    const auto [pos, neg] = shear_sum_parts(pair.p, pair.q);
    RationalInterval shear_part =
        scale_interval(RationalInterval(neg, pos), pair.a * Rat(pair.m - 1));
    RationalInterval digit_part =
        pair.q > 0 ? RationalInterval(Rat(0), rat(pair.n - 1, pair.q - 1))
                   : RationalInterval(rat((pair.n - 1) * pair.q, pair.q * pair.q - 1),
                                      rat(pair.n - 1, pair.q * pair.q - 1));
    box.y = shear_part + digit_part;
    return box;
}

Point apply_piece_map(const AffinePair& pair, long long i, long long j, const Point& pt) {
    const Rat x_shifted = pt.x + Rat(i);
    Point out;
    out.x = x_shifted / Rat(pair.p);
    out.y = pair.a * x_shifted / Rat(pair.p * pair.q) + (pt.y + Rat(j)) / Rat(pair.q);
    return out;
}

Rat error_radius(const AffinePair& pair, long long depth) {
    if (depth < 1) throw invalid_input("error_radius needs depth >= 1");
    const Box box = bounding_box(pair);
    const Rat wx = box.width_x();
    const Rat wy = box.width_y();
    const Rat horizontal = rat_pow(rat(1, pair.p), depth) * wx;
    const Rat vertical = rat_abs(pair.a * inverse_shear_coeff(pair.p, pair.q, depth)) * wx +
                         rat_abs(rat_pow(rat(1, pair.q), depth)) * wy;
    return std::max(horizontal, vertical);
}

PieceCloud piece_cloud(const AffinePair& pair, long long i, long long j, long long depth,
                       long long point_budget) {
    require_normalized(pair, "piece_cloud");
    require_digit(i, pair.m, "column");
    require_digit(j, pair.n, "row");
    if (depth < 1) throw invalid_input("piece_cloud needs depth >= 1");
    check_point_budget(cloud_size(pair.m, pair.n, depth - 1), point_budget);
    PieceCloud cloud;
    cloud.depth = depth;
    cloud.piece = std::make_pair(i, j);
    cloud.error_radius = error_radius(pair, depth);
    cloud.points = word_images(pair, depth - 1);
    for (Point& pt : cloud.points) pt = apply_piece_map(pair, i, j, pt);
    return cloud;
}

PieceCloud attractor_cloud(const AffinePair& pair, long long depth, long long point_budget) {
    require_normalized(pair, "attractor_cloud");
    if (depth < 1) throw invalid_input("attractor_cloud needs depth >= 1");
    check_point_budget(cloud_size(pair.m, pair.n, depth), point_budget);
    PieceCloud cloud;
    cloud.depth = depth;
    cloud.error_radius = error_radius(pair, depth);
    cloud.points = word_images(pair, depth);
    return cloud;
}

namespace {

/* Prefix of a composition word: its length, the image of the origin under it,
   and a box containing every deeper cloud point below it. */
struct SubPiece {
    long long len = 0;
    Point t;
    Box box;
};

struct ContactSearch {
    const AffinePair& pair;
    const LevelScales scales;
    const Box root;
    const long long depth;
    const Rat threshold;
    long long budget;
    bool exhausted = false;
    // a pair of prefixes is determined up to translation by the lengths and
    // the offset between them, so refuted offsets never need a second visit
    using DiffKey = std::tuple<long long, long long, Rat, Rat>;
    std::set<DiffKey> refuted;

    ContactSearch(const AffinePair& p, long long d, Rat thr, long long node_budget)
        : pair(p), scales(p, d), root(bounding_box(p)), depth(d), threshold(std::move(thr)),
          budget(node_budget) {}

    Box box_at(long long len, const Point& t) const {
        Box box;
        box.x = scale_interval(root.x, scales.px[static_cast<size_t>(len)]);
        box.x.lo += t.x;
        box.x.hi += t.x;
        box.y = scale_interval(root.x, scales.shear[static_cast<size_t>(len)]) +
                scale_interval(root.y, scales.qx[static_cast<size_t>(len)]);
        box.y.lo += t.y;
        box.y.hi += t.y;
        return box;
    }

    SubPiece child(const SubPiece& parent, long long i, long long j) const {
        SubPiece sub;
        sub.len = parent.len + 1;
        const size_t l = static_cast<size_t>(sub.len);
        sub.t.x = parent.t.x + Rat(i) * scales.px[l];
        sub.t.y = parent.t.y + Rat(i) * scales.shear[l] + Rat(j) * scales.qx[l];
        sub.box = box_at(sub.len, sub.t);
        return sub;
    }

    DiffKey key_of(const SubPiece& u, const SubPiece& v) const {
        Rat dx = v.t.x - u.t.x;
        Rat dy = v.t.y - u.t.y;
        long long lu = u.len;
        long long lv = v.len;
        if (lu > lv || (lu == lv && (dx < 0 || (dx == 0 && dy < 0)))) {
            std::swap(lu, lv);
            dx = -dx;
            dy = -dy;
        }
        return {lu, lv, std::move(dx), std::move(dy)};
    }

    // true when some leaf pair is within the threshold (or the budget ran out)
    bool contact(const SubPiece& u, const SubPiece& v) {
        if (budget-- <= 0) {
            exhausted = true;
            return true;
        }
        if (box_distance(u.box, v.box) > threshold) return false;
        if (u.len == depth && v.len == depth) return point_distance(u.t, v.t) <= threshold;
        const DiffKey key = key_of(u, v);
        if (refuted.count(key) != 0) return false;
        const bool expand_u = u.len <= v.len && u.len < depth;
        const SubPiece& fixed = expand_u ? v : u;
        const SubPiece& split = expand_u ? u : v;
        std::vector<std::pair<Rat, SubPiece>> children;
        children.reserve(static_cast<size_t>(pair.m * pair.n));
        for (long long i = 0; i < pair.m; ++i) {
            for (long long j = 0; j < pair.n; ++j) {
                SubPiece sub = child(split, i, j);
                children.emplace_back(box_distance(sub.box, fixed.box), std::move(sub));
            }
        }
        std::stable_sort(children.begin(), children.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [dist, sub] : children) {
            if (dist > threshold) break;
            if (contact(sub, fixed)) return true;
        }
        refuted.insert(key);
        return false;
    }
};

} // namespace

bool certified_disjoint(const AffinePair& pair, std::pair<long long, long long> first,
                        std::pair<long long, long long> second, long long depth,
                        long long node_budget) {
    require_normalized(pair, "certified_disjoint");
    require_digit(first.first, pair.m, "column");
    require_digit(first.second, pair.n, "row");
    require_digit(second.first, pair.m, "column");
    require_digit(second.second, pair.n, "row");
    if (depth < 1) throw invalid_input("certified_disjoint needs depth >= 1");
    ContactSearch search(pair, depth, Rat(2) * error_radius(pair, depth), node_budget);
    SubPiece left;
    left.len = 1;
    left.t = apply_piece_map(pair, first.first, first.second, Point{Rat(0), Rat(0)});
    left.box = search.box_at(1, left.t);
    SubPiece right;
    right.len = 1;
    right.t = apply_piece_map(pair, second.first, second.second, Point{Rat(0), Rat(0)});
    right.box = search.box_at(1, right.t);
    return !search.contact(left, right);
}

std::string to_string(EdgeLabel label) {
    return label == EdgeLabel::CertifiedDisjoint ? "certified_disjoint" : "plausible";
}

AdjacencyGraph adjacency_graph(const AffinePair& pair, long long depth, long long node_budget) {
    require_normalized(pair, "adjacency_graph");
    if (depth < 1) throw invalid_input("adjacency_graph needs depth >= 1");
    AdjacencyGraph graph;
    graph.m = pair.m;
    graph.n = pair.n;
    graph.depth = depth;
    const long long column_gap = (pair.m - 1) / (pair.p - 1);
    for (long long i1 = 0; i1 < pair.m; ++i1) {
        for (long long j1 = 0; j1 < pair.n; ++j1) {
            for (long long i2 = i1; i2 < pair.m; ++i2) {
                if (i2 - i1 > column_gap) break;
                for (long long j2 = (i2 == i1 ? j1 + 1 : 0); j2 < pair.n; ++j2) {
                    AdjacencyGraph::Edge edge;
                    edge.u = graph.node_index(i1, j1);
                    edge.v = graph.node_index(i2, j2);
                    edge.label = certified_disjoint(pair, {i1, j1}, {i2, j2}, depth, node_budget)
                                     ? EdgeLabel::CertifiedDisjoint
                                     : EdgeLabel::Plausible;
                    graph.edges.push_back(edge);
                }
            }
        }
    }
    return graph;
}

bool graph_connected(const AdjacencyGraph& graph, EdgePolicy policy) {
    (void)policy; // a single policy today: edges still labeled plausible
    DisjointSets components(graph.node_count());
    for (const AdjacencyGraph::Edge& edge : graph.edges) {
        if (edge.label == EdgeLabel::Plausible) components.unite(edge.u, edge.v);
    }
    return components.component_count() == 1;
}

namespace {

long long pixel_of(const Rat& value, const RationalInterval& range, long long size) {
    if (range.width() == 0) return 0;
    Int cell = rat_floor((value - range.lo) * Rat(size) / range.width());
    if (cell < 0) cell = 0;
    if (cell > size - 1) cell = size - 1;
    return cell.convert_to<long long>();
}

} // namespace

void render(const AffinePair& pair, long long depth, RenderFormat format,
            const std::string& out_path, long long raster_size, long long point_budget) {
    if (raster_size < 1) throw invalid_input("raster size must be >= 1");
    const PieceCloud cloud = attractor_cloud(pair, depth, point_budget);
    const Box box = bounding_box(pair);
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw invalid_input("cannot write file: " + out_path);
    if (format == RenderFormat::PortableGraymap) {
        std::vector<unsigned char> image(
            static_cast<size_t>(raster_size) * static_cast<size_t>(raster_size), 255);
        for (const Point& pt : cloud.points) {
            const long long col = pixel_of(pt.x, box.x, raster_size);
            const long long row = raster_size - 1 - pixel_of(pt.y, box.y, raster_size);
            image[static_cast<size_t>(row * raster_size + col)] = 0;
        }
        file << "P5\n" << raster_size << ' ' << raster_size << "\n255\n";
        file.write(reinterpret_cast<const char*>(image.data()),
                   static_cast<std::streamsize>(image.size()));
    } else {
        file << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << raster_size
             << "\" height=\"" << raster_size << "\" viewBox=\"0 0 " << raster_size << ' '
             << raster_size << "\">\n";
        for (const Point& pt : cloud.points) {
            const long long col = pixel_of(pt.x, box.x, raster_size);
            const long long row = raster_size - 1 - pixel_of(pt.y, box.y, raster_size);
            file << "<rect x=\"" << col << "\" y=\"" << row << "\" width=\"1\" height=\"1\"/>\n";
        }
        file << "</svg>\n";
    }
    if (!file.good()) throw invalid_input("failed while writing file: " + out_path);
}

} // namespace selfaffine::geometry
