#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <vector>

#include "qfractal/ifs.hpp"
#include "qfractal/metrics.hpp"

using namespace qfractal;

namespace {

/// Nearest-neighbour lookup on a uniform bucket grid over [0,1]², exact
/// (searches rings until no closer bucket can exist). Used where the
/// brute-force Hausdorff loop would be quadratic in 10⁵ to 10⁶ points.
class BucketIndex {
public:
    BucketIndex(std::span<const Vec2> pts, int cells) : cells_(cells), pts_(pts.begin(), pts.end())
    {
        for (std::size_t i = 0; i < pts_.size(); ++i)
            buckets_[key(cell(pts_[i].x), cell(pts_[i].y))].push_back(i);
    }

    double nearest(const Vec2& p) const
    {
        const int cx = cell(p.x), cy = cell(p.y);
        double best = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring <= cells_; ++ring) {
            // Everything in ring r is at least (r − 1) cell widths away.
            if (ring > 0 && double(ring - 1) / cells_ > best)
                break;
            for (int dx = -ring; dx <= ring; ++dx)
                for (int dy = -ring; dy <= ring; ++dy) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring)
                        continue;
                    const auto it = buckets_.find(key(cx + dx, cy + dy));
                    if (it == buckets_.end())
                        continue;
                    for (std::size_t i : it->second)
                        best = std::min(best, norm(pts_[i] - p));
                }
        }
        return best;
    }

private:
    int cell(double v) const { return std::clamp(int(v * cells_), 0, cells_ - 1); }
    static long long key(int x, int y) { return (long long)(x + 4096) * 16384 + (y + 4096); }

    int cells_;
    std::vector<Vec2> pts_;
    std::unordered_map<long long, std::vector<std::size_t>> buckets_;
};

std::vector<Vec2> level(int depth)
{
    const AffineSystem s = sierpinski_system();
    return hutchinson_iterate(s.maps, {{0.0, 0.0}}, depth);
}

} // namespace

TEST(Sierpinski, HutchinsonResidualsHalveEachStep)
{
    std::vector<std::vector<Vec2>> y;
    for (int d = 0; d <= 9; ++d)
        y.push_back(level(d));
    std::vector<double> h;
    for (int n = 0; n < 9; ++n)
        h.push_back(hausdorff_distance(PointSet::planar(y[n + 1]), PointSet::planar(y[n])));
    // h(Y_1, Y_0) = |(0.25, 0.5)|.
    EXPECT_NEAR(h[0], std::hypot(0.25, 0.5), 1e-15);
    for (int n = 1; n < 9; ++n)
        EXPECT_LE(h[n] / h[n - 1], 0.5 + 1e-9) << "n = " << n;
}

TEST(Sierpinski, BucketIndexMatchesBruteForce)
{
    const auto y6 = level(6);
    const auto y7 = level(7);
    const BucketIndex idx(y6, 64);
    double directed = 0.0;
    for (const auto& p : y7)
        directed = std::max(directed, idx.nearest(p));
    EXPECT_EQ(directed, directed_distance(PointSet::planar(y7), PointSet::planar(y6)));
}

TEST(Sierpinski, DeepLevelIsNearlyInvariant)
{
    const AffineSystem s = sierpinski_system();
    const auto y12 = level(12);
    const auto fy = hutchinson_step(s.maps, y12);
    // Y_12 ⊆ F(Y_12), so h(F(Y), Y) is the directed distance from F(Y).
    const BucketIndex idx(y12, 512);
    double h = 0.0;
    for (const auto& p : fy)
        h = std::max(h, idx.nearest(p));
    const double diam = std::hypot(0.5, 1.0); // attractor triangle (0,0), (1,0), (0.5,1)
    EXPECT_LT(h, std::ldexp(diam, -12));
}

TEST(Sierpinski, ChaosGamePointsLieNearHutchinsonSet)
{
    const auto y8 = level(8);
    const BucketIndex idx(y8, 256);
    PlaneConfig cfg;
    cfg.n_points = 100000;
    cfg.burn_in = 50;
    double worst = 0.0;
    run_chaos_game(sierpinski_system(), cfg, [&](const Vec2& p) { worst = std::max(worst, idx.nearest(p)); });
    EXPECT_LE(worst, 0.01);
    EXPECT_LE(worst, std::ldexp(std::sqrt(2.0), -8));
}
