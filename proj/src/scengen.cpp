#include "staffdim/scengen.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>

namespace staffdim {

namespace {

constexpr double kMinPointSeparation = 6.0; // keeps rounded travel times nonzero and intra < inter satisfiable

struct SquareLayout {
    double big = 90.0;   // outer square side
    double small = 90.0; // inner square side (equal when there is only one square)
    int intra_lo = 5;
    int intra_hi = 15;
    bool two_squares = false;
};

SquareLayout layout_for(Sparsity sparsity) {
    switch (sparsity) {
        case Sparsity::rural: return {90.0, 90.0, 5, 15, false};
        case Sparsity::urban: return {60.0, 60.0, 5, 10, false};
        case Sparsity::semi_urban: return {90.0, 60.0, 5, 10, true};
    }
    throw std::logic_error("unreachable sparsity");
}

} // namespace

std::string to_string(Sparsity s) {
    switch (s) {
        case Sparsity::rural: return "rural";
        case Sparsity::urban: return "urban";
        case Sparsity::semi_urban: return "semi_urban";
    }
    throw std::logic_error("unreachable sparsity");
}

Sparsity sparsity_from_string(const std::string& s) {
    if (s == "rural") return Sparsity::rural;
    if (s == "urban") return Sparsity::urban;
    if (s == "semi_urban" || s == "semi-urban") return Sparsity::semi_urban;
    throw ValidationError("unknown sparsity: " + s);
}

std::string to_string(Series s) {
    switch (s) {
        case Series::s1_1: return "S1.1";
        case Series::s1_2: return "S1.2";
        case Series::s2_1: return "S2.1";
        case Series::s2_2: return "S2.2";
        case Series::s3: return "S3";
        case Series::s4: return "S4";
    }
    throw std::logic_error("unreachable series");
}

Series series_from_string(const std::string& s) {
    if (s == "S1.1") return Series::s1_1;
    if (s == "S1.2") return Series::s1_2;
    if (s == "S2.1") return Series::s2_1;
    if (s == "S2.2") return Series::s2_2;
    if (s == "S3") return Series::s3;
    if (s == "S4") return Series::s4;
    throw ValidationError("unknown series: " + s);
}

Territory generate_territory(const TerritorySpec& spec) {
    if (spec.divisions < 1) throw ValidationError("divisions must be >= 1");
    const SquareLayout layout = layout_for(spec.sparsity);
    Rng point_rng(derive_seed(spec.seed, 1));
    Rng intra_rng(derive_seed(spec.seed, 2));

    const double center = layout.big / 2.0;
    std::vector<std::array<double, 2>> points;
    points.push_back({center, center}); // depot

    const double inner_lo = center - layout.small / 2.0;
    for (int s = 0; s < spec.divisions; ++s) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 100000)
                throw std::runtime_error("territory generation failed to place separated points");
            double x, y;
            const bool inner = !layout.two_squares || point_rng.next_unit() < 0.5;
            if (layout.two_squares && inner) {
                x = inner_lo + point_rng.next_unit() * layout.small;
                y = inner_lo + point_rng.next_unit() * layout.small;
            } else {
                x = point_rng.next_unit() * layout.big;
                y = point_rng.next_unit() * layout.big;
            }
            bool ok = true;
            for (const auto& p : points) {
                const double dx = p[0] - x, dy = p[1] - y;
                if (std::sqrt(dx * dx + dy * dy) < kMinPointSeparation) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                points.push_back({x, y});
                break;
            }
        }
    }

    const int n = spec.divisions + 1;
    Territory t;
    t.sector_count = spec.divisions;
    t.points = points;
    t.inter.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double dx = points[i][0] - points[j][0];
            const double dy = points[i][1] - points[j][1];
            const int d = static_cast<int>(std::floor(std::sqrt(dx * dx + dy * dy) + 0.5));
            t.inter[i][j] = t.inter[j][i] = d;
        }
    // integer rounding can break the triangle inequality by one minute on
    // near-collinear triples; close the metric so downstream solvers can rely on it
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                t.inter[i][j] = std::min(t.inter[i][j], t.inter[i][k] + t.inter[k][j]);

    t.intra.assign(n, 0);
    for (int s = 1; s < n; ++s) {
        int closest = INT_MAX;
        for (int j = 0; j < n; ++j)
            if (j != s) closest = std::min(closest, t.inter[s][j]);
        const int drawn = intra_rng.uniform_int(layout.intra_lo, layout.intra_hi);
        t.intra[s] = std::min(drawn, closest - 1);
    }
    t.validate();
    return t;
}

namespace {

// distilled ATIH care mix: durations in minutes per profession and daily frequencies
struct CareSpec {
    const char* id;
    double frequency;
    int nurse, aid, physician;
};

constexpr CareSpec kCares[] = {
    {"palliative", 0.26, 60, 35, 10},
    {"complex_bandage", 0.23, 40, 15, 10},
    {"heavy_nursing", 0.10, 45, 50, 10},
    {"others", 0.41, 40, 25, 5},
};

std::vector<double> uniform_spatial(int sectors) {
    return std::vector<double>(sectors, 1.0 / sectors);
}

// contiguous index ranges, remainder spread over the first groups
std::vector<std::pair<int, int>> partition_sectors(int sectors, int groups) {
    std::vector<std::pair<int, int>> result;
    int start = 0;
    for (int g = 0; g < groups; ++g) {
        int len = sectors / groups + (g < sectors % groups ? 1 : 0);
        result.push_back({start, start + len});
        start += len;
    }
    return result;
}

std::vector<double> concentrated_spatial(int sectors, int group_index, int groups, double mass) {
    const auto parts = partition_sectors(sectors, groups);
    const auto [lo, hi] = parts[group_index % parts.size()];
    const int inside = hi - lo;
    const int outside = sectors - inside;
    if (inside == 0 || outside == 0) return uniform_spatial(sectors);
    std::vector<double> pi(sectors, 0.0);
    for (int s = 0; s < sectors; ++s) {
        if (s >= lo && s < hi)
            pi[s] = mass / inside;
        else
            pi[s] = (1.0 - mass) / outside;
    }
    return pi;
}

} // namespace

Instance generate_series(Series series, const Territory& territory, std::uint64_t seed) {
    Instance inst;
    inst.territory = territory;
    inst.professions = {{"nurse", 1200}, {"nurse_aid", 800}, {"physician", 2500}};
    for (const auto& spec : kCares) {
        Care c;
        c.id = spec.id;
        c.frequency = spec.frequency;
        c.duration = {spec.nurse, spec.aid, spec.physician};
        c.remote = {0, 0, 0};
        inst.cares.push_back(std::move(c));
    }
    inst.daily_limit = 480;

    const int s = territory.sector_count;
    DemandPattern& p = inst.pattern;
    p.epi = {0.26, 0.23, 0.10, 0.41};
    switch (series) {
        case Series::s1_1:
            p.kind = PatternKind::stable;
            p.total_lo = p.total_hi = 40;
            p.spatial = uniform_spatial(s);
            break;
        case Series::s1_2:
            p.kind = PatternKind::stable;
            p.total_lo = p.total_hi = 50;
            p.spatial = uniform_spatial(s);
            break;
        case Series::s2_1:
            p.kind = PatternKind::volume_variation;
            p.total_lo = 45;
            p.total_hi = 60;
            p.spatial = uniform_spatial(s);
            break;
        case Series::s2_2:
            p.kind = PatternKind::volume_variation;
            p.total_lo = 30;
            p.total_hi = 60;
            p.spatial = uniform_spatial(s);
            break;
        case Series::s3:
            p.kind = PatternKind::geo_variation;
            p.total_lo = 40;
            p.total_hi = 50;
            p.spatial = uniform_spatial(s);
            p.groups = std::min(5, s); // degenerate territories get coarser groups
            p.focus_mass = 0.8;
            break;
        case Series::s4: {
            p.kind = PatternKind::typical_days;
            const int totals[] = {45, 55, 65, 75};
            for (int i = 0; i < 4; ++i) {
                TypicalDay day;
                day.total = totals[i];
                day.spatial = concentrated_spatial(s, i, std::min(5, s), 0.6);
                p.typical.push_back(std::move(day));
            }
            break;
        }
    }
    inst.label = to_string(series) + "/seed" + std::to_string(seed);
    inst.validate();
    return inst;
}

Scenario sample_scenario(const Instance& instance, Rng& rng) {
    const int s = instance.sector_count();
    const int a = instance.care_count();
    const DemandPattern& p = instance.pattern;

    int total = 0;
    const std::vector<double>* spatial = &p.spatial;
    std::vector<double> day_spatial;
    switch (p.kind) {
        case PatternKind::stable:
            total = p.total_lo;
            break;
        case PatternKind::volume_variation:
            total = rng.uniform_int(p.total_lo, p.total_hi);
            break;
        case PatternKind::geo_variation: {
            total = rng.uniform_int(p.total_lo, p.total_hi);
            const int group = rng.uniform_int(0, p.groups - 1);
            day_spatial = concentrated_spatial(s, group, p.groups, p.focus_mass);
            spatial = &day_spatial;
            break;
        }
        case PatternKind::typical_days: {
            const int day = rng.uniform_int(0, static_cast<int>(p.typical.size()) - 1);
            total = p.typical[day].total;
            spatial = &p.typical[day].spatial;
            break;
        }
    }

    Scenario sc;
    sc.demand.assign(s + 1, std::vector<int>(a, 0));
    for (int unit = 0; unit < total; ++unit) {
        const int sector = static_cast<int>(rng.pick_weighted(*spatial)) + 1;
        const int care = static_cast<int>(rng.pick_weighted(p.epi));
        ++sc.demand[sector][care];
    }
    return sc;
}

std::vector<Scenario> sample_scenarios(const Instance& instance, int count, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 3));
    std::vector<Scenario> result;
    result.reserve(count);
    for (int i = 0; i < count; ++i) result.push_back(sample_scenario(instance, rng));
    return result;
}

} // namespace staffdim
