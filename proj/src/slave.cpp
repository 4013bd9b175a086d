#include "staffdim/slave.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cmath>
#include <numeric>

namespace staffdim {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    bool limited = false;
    Clock::time_point at{};

    bool expired() const { return limited && Clock::now() >= at; }
};

Deadline make_deadline(double seconds) {
    if (seconds <= 0.0 || !std::isfinite(seconds)) return {};
    Deadline d;
    d.limited = true;
    d.at = Clock::now() +
           std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
    return d;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

enum class Feas { no, yes, timeout };

// Dinic max-flow on the tiny sector -> resource bipartite graph; the
// fractional relaxation of the assignment check. Buffers are reused across
// calls: leaf checks run millions of times on hard cells.
class MaxFlow {
public:
    void reset(int nodes) {
        if (static_cast<int>(graph_.size()) < nodes) graph_.resize(nodes);
        for (int v = 0; v < nodes; ++v) graph_[v].clear();
        nodes_ = nodes;
    }

    void add(int from, int to, long long cap) {
        graph_[from].push_back({to, cap, static_cast<int>(graph_[to].size())});
        graph_[to].push_back({from, 0, static_cast<int>(graph_[from].size()) - 1});
    }

    long long run(int source, int sink) {
        long long flow = 0;
        while (bfs(source, sink)) {
            iter_.assign(nodes_, 0);
            while (long long pushed = dfs(source, sink, LLONG_MAX)) flow += pushed;
        }
        return flow;
    }

private:
    struct Edge {
        int to;
        long long cap;
        int rev;
    };

    bool bfs(int source, int sink) {
        level_.assign(nodes_, -1);
        queue_.clear();
        queue_.push_back(source);
        level_[source] = 0;
        for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
            const int v = queue_[qi];
            for (const Edge& e : graph_[v])
                if (e.cap > 0 && level_[e.to] < 0) {
                    level_[e.to] = level_[v] + 1;
                    queue_.push_back(e.to);
                }
        }
        return level_[sink] >= 0;
    }

    long long dfs(int v, int sink, long long limit) {
        if (v == sink) return limit;
        for (int& i = iter_[v]; i < static_cast<int>(graph_[v].size()); ++i) {
            Edge& e = graph_[v][i];
            if (e.cap <= 0 || level_[e.to] != level_[v] + 1) continue;
            const long long pushed = dfs(e.to, sink, std::min(limit, e.cap));
            if (pushed > 0) {
                e.cap -= pushed;
                graph_[e.to][e.rev].cap += pushed;
                return pushed;
            }
        }
        return 0;
    }

    int nodes_ = 0;
    std::vector<std::vector<Edge>> graph_;
    std::vector<int> level_;
    std::vector<int> iter_;
    std::vector<int> queue_;
};

// Catalog entry after scenario reduction: only demanded sectors matter, so
// routes collapse to (covered demand sectors, best slack among routes with
// that coverage).
struct CatRoute {
    SectorMask cover = 0; // compressed over demanded sectors
    int slack = 0;        // L - T_r of the cheapest route with this coverage
    SectorMask full_mask = 0;
    int duration = 0;
};

struct DemandCell {
    int sector = 0; // original index, 0 = remote row
    int care = 0;
    int units = 0;
    int size = 0; // minutes per unit: w + intra
};

class SlaveSearch {
public:
    SlaveSearch(const SlaveTask& task, const Deadline& deadline)
        : task_(task), deadline_(deadline) {
        const Instance& inst = *task.instance;
        const int S = inst.sector_count();
        const int A = inst.care_count();
        limit_ = inst.daily_limit;

        SectorMask demand_mask = 0;
        for (int s = 1; s <= S; ++s)
            for (int a = 0; a < A; ++a)
                if (task.demand.demand[s][a] > 0) demand_mask |= SectorMask{1} << (s - 1);

        bit_of_sector_.assign(S + 1, -1);
        for (int s = 1; s <= S; ++s)
            if ((demand_mask >> (s - 1)) & 1u) {
                bit_of_sector_[s] = k_;
                ++k_;
            }
        full_ = k_ == 0 ? 0 : (SectorMask{1} << k_) - 1;

        work_.assign(k_, 0);
        for (int s = 0; s <= S; ++s)
            for (int a = 0; a < A; ++a) {
                const int d = task.demand.demand[s][a];
                if (d == 0) continue;
                const int size =
                    inst.cares[a].duration[task.profession] + inst.territory.intra[s];
                cells_.push_back({s, a, d, size});
                if (s == 0)
                    work0_ += static_cast<long long>(d) * size;
                else
                    work_[bit_of_sector_[s]] += static_cast<long long>(d) * size;
            }
        total_work_ = work0_ + std::accumulate(work_.begin(), work_.end(), 0LL);

        build_catalog(demand_mask);
    }

    // Is there a multiset of `count` admissible routes with an integral
    // assignment serving every demand? Exact, up to the deadline.
    Feas feasible(int count, std::vector<ResourceUse>* assignment_out) {
        nodes_ = 0;
        timed_out_ = false;
        assignment_out_ = assignment_out;
        chosen_.clear();
        cap_.assign(k_, 0);
        slack_sum_ = 0;
        covered_ = 0;
        return cover_phase(count);
    }

private:
    void build_catalog(SectorMask demand_mask) {
        const std::size_t space = std::size_t{1} << k_;
        std::vector<int> best(space, -1);
        std::vector<int> rep(space, -1);
        const auto& routes = task_.routes->routes;
        for (std::size_t ri = 0; ri < routes.size(); ++ri) {
            const Route& r = routes[ri];
            SectorMask compressed = 0;
            SectorMask kept = r.sectors & demand_mask;
            while (kept) {
                const int bit = __builtin_ctz(kept);
                kept &= kept - 1;
                compressed |= SectorMask{1} << bit_of_sector_[bit + 1];
            }
            const int slack = limit_ - r.duration;
            int& slot = best[compressed];
            if (slack > slot ||
                (slack == slot && r.sectors < routes[rep[compressed]].sectors)) {
                slot = slack;
                rep[compressed] = static_cast<int>(ri);
            }
        }
        // a coverage superset with at least the same slack makes a route useless
        std::vector<int> sup(best);
        for (int b = 0; b < k_; ++b)
            for (std::size_t m = 0; m < space; ++m)
                if (!((m >> b) & 1)) sup[m] = std::max(sup[m], sup[m | (std::size_t{1} << b)]);
        for (std::size_t m = 0; m < space; ++m) {
            if (best[m] < 0) continue;
            int over = -1;
            for (int b = 0; b < k_; ++b)
                if (!((m >> b) & 1)) over = std::max(over, sup[m | (std::size_t{1} << b)]);
            if (over >= best[m]) continue;
            const Route& r = routes[rep[m]];
            cat_.push_back({static_cast<SectorMask>(m), best[m], r.sectors, r.duration});
        }
        std::sort(cat_.begin(), cat_.end(), [](const CatRoute& a, const CatRoute& b) {
            if (a.slack != b.slack) return a.slack > b.slack;
            return a.cover < b.cover;
        });

        covering_.assign(k_, {});
        best_slack_at_.assign(k_, 0);
        for (std::size_t i = 0; i < cat_.size(); ++i) {
            SectorMask c = cat_[i].cover;
            while (c) {
                const int bit = __builtin_ctz(c);
                c &= c - 1;
                covering_[bit].push_back(static_cast<int>(i));
                best_slack_at_[bit] = std::max(best_slack_at_[bit], cat_[i].slack);
            }
        }
        max_slack_ = cat_.empty() ? 0 : cat_.front().slack;

        suffix_best_.assign(cat_.size() + 1, std::vector<int>(k_, 0));
        for (int i = static_cast<int>(cat_.size()) - 1; i >= 0; --i) {
            suffix_best_[i] = suffix_best_[i + 1];
            SectorMask c = cat_[i].cover;
            while (c) {
                const int bit = __builtin_ctz(c);
                c &= c - 1;
                suffix_best_[i][bit] = std::max(suffix_best_[i][bit], cat_[i].slack);
            }
        }
    }

    bool tick() {
        if ((++nodes_ & 1023) == 0 && deadline_.expired()) timed_out_ = true;
        return timed_out_;
    }

    // Pick routes one by one while some demanded sector is uncovered; each
    // pick must cover the lowest uncovered sector. Any covering multiset can
    // be ordered that way, so nothing is lost.
    Feas cover_phase(int remaining) {
        if (tick()) return Feas::timeout;
        const SectorMask uncovered = full_ & ~covered_;
        if (uncovered == 0) return fill_phase(0, remaining);
        if (remaining == 0) return Feas::no;
        if (slack_sum_ + static_cast<long long>(remaining) * max_slack_ < total_work_)
            return Feas::no;
        for (int bit = 0; bit < k_; ++bit)
            if (cap_[bit] + static_cast<long long>(remaining) * best_slack_at_[bit] < work_[bit])
                return Feas::no;
        const int target = __builtin_ctz(uncovered);
        for (const int i : covering_[target]) {
            push(i);
            const Feas f = cover_phase(remaining - 1);
            pop(i);
            if (f != Feas::no) return f;
        }
        return Feas::no;
    }

    // Coverage complete: spend the remaining picks on extra capacity, in
    // canonical nondecreasing catalog order.
    Feas fill_phase(int index, int remaining) {
        if (tick()) return Feas::timeout;
        if (remaining == 0) {
            for (int bit = 0; bit < k_; ++bit)
                if (cap_[bit] < work_[bit]) return Feas::no;
            if (slack_sum_ < total_work_) return Feas::no;
            return assignment_check();
        }
        if (index == 0 && !virtual_flow_feasible(remaining)) return Feas::no;
        if (index >= static_cast<int>(cat_.size())) return Feas::no;
        if (slack_sum_ + static_cast<long long>(remaining) * cat_[index].slack < total_work_)
            return Feas::no;
        for (int bit = 0; bit < k_; ++bit)
            if (cap_[bit] + static_cast<long long>(remaining) * suffix_best_[index][bit] <
                work_[bit])
                return Feas::no;
        for (int m = remaining; m >= 0; --m) {
            for (int c = 0; c < m; ++c) push(index);
            const Feas f = fill_phase(index + 1, remaining - m);
            for (int c = 0; c < m; ++c) pop(index);
            if (f != Feas::no) return f;
        }
        return Feas::no;
    }

    void push(int i) {
        chosen_.push_back(i);
        slack_sum_ += cat_[i].slack;
        covered_ |= cat_[i].cover;
        SectorMask c = cat_[i].cover;
        while (c) {
            const int bit = __builtin_ctz(c);
            c &= c - 1;
            cap_[bit] += cat_[i].slack;
        }
    }

    void pop(int i) {
        chosen_.pop_back();
        slack_sum_ -= cat_[i].slack;
        SectorMask c = cat_[i].cover;
        while (c) {
            const int bit = __builtin_ctz(c);
            c &= c - 1;
            cap_[bit] -= cat_[i].slack;
        }
        covered_ = 0;
        for (const int j : chosen_) covered_ |= cat_[j].cover;
    }

    // Exact integral assignment of demand units to the chosen resources.
    Feas assignment_check() {
        const int n = static_cast<int>(chosen_.size());
        resid_.assign(n, 0);
        rmask_.assign(n, 0);
        for (int j = 0; j < n; ++j) {
            resid_[j] = cat_[chosen_[j]].slack;
            rmask_[j] = cat_[chosen_[j]].cover;
        }

        if (!flow_feasible()) return Feas::no;

        order_cells();
        const int cells = static_cast<int>(order_.size());
        assigned_.assign(cells, std::vector<int>(n, 0));
        if (best_fit()) {
            emit_assignment();
            return Feas::yes;
        }
        for (auto& row : assigned_) std::fill(row.begin(), row.end(), 0);

        rem_total_.assign(cells + 1, 0);
        rem_sector_.assign(cells + 1, std::vector<long long>(k_, 0));
        for (int ci = cells - 1; ci >= 0; --ci) {
            const DemandCell& cell = cell_at(ci);
            const long long w = static_cast<long long>(cell.units) * cell.size;
            rem_total_[ci] = rem_total_[ci + 1] + w;
            rem_sector_[ci] = rem_sector_[ci + 1];
            if (cell.sector > 0) rem_sector_[ci][bit_of_sector_[cell.sector]] += w;
        }
        snapshots_.assign(cells, {});

        const Feas f = place_cell(0);
        if (f == Feas::yes) emit_assignment();
        return f;
    }

    const DemandCell& cell_at(int ci) const { return cells_[order_[ci]]; }

    void order_cells() {
        order_.resize(cells_.size());
        std::iota(order_.begin(), order_.end(), 0);
        const int n = static_cast<int>(resid_.size());
        eligible_count_.assign(cells_.size(), 0);
        for (std::size_t c = 0; c < cells_.size(); ++c) {
            const DemandCell& cell = cells_[c];
            if (cell.sector == 0) {
                eligible_count_[c] = n;
            } else {
                const int bit = bit_of_sector_[cell.sector];
                for (int j = 0; j < n; ++j)
                    if ((rmask_[j] >> bit) & 1u) ++eligible_count_[c];
            }
        }
        std::sort(order_.begin(), order_.end(), [this](int a, int b) {
            const DemandCell& ca = cells_[a];
            const DemandCell& cb = cells_[b];
            const bool ra = ca.sector == 0, rb = cb.sector == 0;
            if (ra != rb) return rb; // remote cells last: they fit anywhere
            if (eligible_count_[a] != eligible_count_[b])
                return eligible_count_[a] < eligible_count_[b];
            if (ca.size != cb.size) return ca.size > cb.size;
            if (ca.sector != cb.sector) return ca.sector < cb.sector;
            return ca.care < cb.care;
        });
    }

    bool eligible(int resource, const DemandCell& cell) const {
        if (cell.sector == 0) return true;
        return (rmask_[resource] >> bit_of_sector_[cell.sector]) & 1u;
    }

    // Relaxation at the cover/fill boundary: the `rem` picks still to make are
    // modeled as one aggregate resource with the best per-sector and total
    // capacities any `rem` routes could jointly offer.
    bool virtual_flow_feasible(int rem) {
        const int n = static_cast<int>(chosen_.size());
        const int source = 0;
        const int remote = k_ + 1;
        const int rbase = k_ + 2;
        const int virt = rbase + n;
        const int sink = virt + 1;
        flow_.reset(sink + 1);
        for (int bit = 0; bit < k_; ++bit) flow_.add(source, 1 + bit, work_[bit]);
        if (work0_ > 0) flow_.add(source, remote, work0_);
        for (int j = 0; j < n; ++j) {
            const CatRoute& route = cat_[chosen_[j]];
            flow_.add(rbase + j, sink, route.slack);
            if (work0_ > 0) flow_.add(remote, rbase + j, LLONG_MAX / 4);
            SectorMask c = route.cover;
            while (c) {
                const int bit = __builtin_ctz(c);
                c &= c - 1;
                flow_.add(1 + bit, rbase + j, LLONG_MAX / 4);
            }
        }
        flow_.add(virt, sink, static_cast<long long>(rem) * max_slack_);
        if (work0_ > 0) flow_.add(remote, virt, LLONG_MAX / 4);
        for (int bit = 0; bit < k_; ++bit)
            flow_.add(1 + bit, virt, static_cast<long long>(rem) * best_slack_at_[bit]);
        return flow_.run(source, sink) >= total_work_;
    }

    bool flow_feasible() {
        const int n = static_cast<int>(resid_.size());
        // nodes: 0 source, 1..k sectors, k+1 remote row, resources, sink last
        const int source = 0;
        const int remote = k_ + 1;
        const int rbase = k_ + 2;
        const int sink = rbase + n;
        flow_.reset(sink + 1);
        for (int bit = 0; bit < k_; ++bit) flow_.add(source, 1 + bit, work_[bit]);
        if (work0_ > 0) flow_.add(source, remote, work0_);
        for (int j = 0; j < n; ++j) {
            flow_.add(rbase + j, sink, resid_[j]);
            if (work0_ > 0) flow_.add(remote, rbase + j, LLONG_MAX / 4);
            SectorMask c = rmask_[j];
            while (c) {
                const int bit = __builtin_ctz(c);
                c &= c - 1;
                flow_.add(1 + bit, rbase + j, LLONG_MAX / 4);
            }
        }
        return flow_.run(source, sink) >= total_work_;
    }

    // Best-fit decreasing: fast path that settles most feasible leaves.
    bool best_fit() {
        std::vector<long long> resid(resid_.begin(), resid_.end());
        struct Unit {
            int cell_pos;
            int size;
        };
        std::vector<Unit> units;
        for (int ci = 0; ci < static_cast<int>(order_.size()); ++ci) {
            const DemandCell& cell = cell_at(ci);
            for (int u = 0; u < cell.units; ++u) units.push_back({ci, cell.size});
        }
        std::stable_sort(units.begin(), units.end(),
                         [](const Unit& a, const Unit& b) { return a.size > b.size; });
        for (const Unit& unit : units) {
            int pick = -1;
            for (int j = 0; j < static_cast<int>(resid.size()); ++j) {
                if (!eligible(j, cell_at(unit.cell_pos)) || resid[j] < unit.size) continue;
                if (pick < 0 || resid[j] < resid[pick]) pick = j;
            }
            if (pick < 0) return false;
            resid[pick] -= unit.size;
            ++assigned_[unit.cell_pos][pick];
        }
        return true;
    }

    Feas place_cell(int ci) {
        if (tick()) return Feas::timeout;
        if (ci == static_cast<int>(order_.size())) return Feas::yes;
        snapshots_[ci].assign(resid_.begin(), resid_.end());
        return distribute(ci, 0, cell_at(ci).units);
    }

    Feas distribute(int ci, int j, int left) {
        const DemandCell& cell = cell_at(ci);
        const int n = static_cast<int>(resid_.size());
        if (left == 0) {
            for (int bit = 0; bit < k_; ++bit) {
                const long long need = rem_sector_[ci + 1][bit];
                if (need == 0) continue;
                long long cap = 0;
                for (int r = 0; r < n; ++r)
                    if ((rmask_[r] >> bit) & 1u) cap += resid_[r];
                if (cap < need) return Feas::no;
            }
            if (std::accumulate(resid_.begin(), resid_.end(), 0LL) < rem_total_[ci + 1])
                return Feas::no;
            return place_cell(ci + 1);
        }
        if (j == n) return Feas::no;
        if (tick()) return Feas::timeout;

        if (!eligible(j, cell)) {
            assigned_[ci][j] = 0;
            return distribute(ci, j + 1, left);
        }

        // what the rest of the eligible resources could still absorb
        long long tail = 0;
        for (int r = j + 1; r < n; ++r)
            if (eligible(r, cell)) tail += resid_[r] / cell.size;

        int max_units = static_cast<int>(std::min<long long>(left, resid_[j] / cell.size));
        // identical twins (same coverage, same capacity when this cell started)
        // receive non-increasing unit counts
        if (j > 0 && rmask_[j] == rmask_[j - 1] && snapshots_[ci][j] == snapshots_[ci][j - 1])
            max_units = std::min(max_units, assigned_[ci][j - 1]);
        for (int x = max_units; x >= 0; --x) {
            if (left - x > tail) break; // even the full tail cannot absorb the rest
            resid_[j] -= static_cast<long long>(x) * cell.size;
            assigned_[ci][j] = x;
            const Feas f = distribute(ci, j + 1, left - x);
            resid_[j] += static_cast<long long>(x) * cell.size;
            if (f != Feas::no) return f;
            assigned_[ci][j] = 0;
        }
        return Feas::no;
    }

    void emit_assignment() {
        if (!assignment_out_) return;
        const Instance& inst = *task_.instance;
        const int S = inst.sector_count();
        const int A = inst.care_count();
        assignment_out_->clear();
        for (std::size_t j = 0; j < chosen_.size(); ++j) {
            const CatRoute& route = cat_[chosen_[j]];
            ResourceUse use;
            use.route = route.full_mask;
            use.route_minutes = route.duration;
            use.served.assign(S + 1, std::vector<int>(A, 0));
            for (int ci = 0; ci < static_cast<int>(order_.size()); ++ci) {
                const DemandCell& cell = cell_at(ci);
                use.served[cell.sector][cell.care] += assigned_[ci][j];
            }
            assignment_out_->push_back(std::move(use));
        }
    }

    const SlaveTask& task_;
    Deadline deadline_;
    bool timed_out_ = false;
    long long nodes_ = 0;
    int limit_ = 0;

    std::vector<int> bit_of_sector_;
    int k_ = 0;
    SectorMask full_ = 0;
    std::vector<long long> work_;
    long long work0_ = 0;
    long long total_work_ = 0;
    std::vector<DemandCell> cells_;

    std::vector<CatRoute> cat_;
    std::vector<std::vector<int>> covering_;
    std::vector<int> best_slack_at_;
    int max_slack_ = 0;
    std::vector<std::vector<int>> suffix_best_;

    std::vector<int> chosen_;
    std::vector<long long> cap_;
    long long slack_sum_ = 0;
    SectorMask covered_ = 0;
    MaxFlow flow_;

    std::vector<long long> resid_;
    std::vector<SectorMask> rmask_;
    std::vector<std::vector<long long>> snapshots_;
    std::vector<int> order_;
    std::vector<int> eligible_count_;
    std::vector<std::vector<int>> assigned_;
    std::vector<long long> rem_total_;
    std::vector<std::vector<long long>> rem_sector_;

    std::vector<ResourceUse>* assignment_out_ = nullptr;
};

} // namespace

std::string to_string(SlaveStatus status) {
    switch (status) {
        case SlaveStatus::optimal: return "optimal";
        case SlaveStatus::feasible_timeout: return "feasible_timeout";
        case SlaveStatus::lb_shortcut: return "lb_shortcut";
    }
    throw std::logic_error("unreachable slave status");
}

SlaveStatus slave_status_from_string(const std::string& s) {
    if (s == "optimal") return SlaveStatus::optimal;
    if (s == "feasible_timeout") return SlaveStatus::feasible_timeout;
    if (s == "lb_shortcut") return SlaveStatus::lb_shortcut;
    throw ValidationError("unknown slave status: " + s);
}

SlaveTask make_slave_task(const Instance& instance, int profession_index, const Scenario& raw,
                          const RouteSet& routes, const CycleTable& cycles, int lb,
                          double time_limit) {
    if (profession_index < 0 || profession_index >= instance.profession_count())
        throw std::invalid_argument("profession index out of range");
    SlaveTask task;
    task.instance = &instance;
    task.profession = profession_index;
    task.routes = &routes;
    task.cycles = &cycles;
    task.lb = lb;
    task.time_limit = time_limit;

    const int S = instance.sector_count();
    const int A = instance.care_count();
    task.demand.demand.assign(S + 1, std::vector<int>(A, 0));
    for (int a = 0; a < A; ++a) {
        const Care& care = instance.cares[a];
        if (care.duration[profession_index] == 0) continue; // not this profession's care
        const bool remote = care.remote[profession_index] != 0;
        task.demand.demand[0][a] += raw.demand[0][a];
        for (int s = 1; s <= S; ++s) {
            const int d = raw.demand[s][a];
            if (d == 0) continue;
            if (remote)
                task.demand.demand[0][a] += d;
            else
                task.demand.demand[s][a] += d;
        }
    }
    return task;
}

int workload_lower_bound(const SlaveTask& task) {
    const Instance& inst = *task.instance;
    long long total = 0;
    for (int s = 0; s <= inst.sector_count(); ++s)
        for (int a = 0; a < inst.care_count(); ++a) {
            const int d = task.demand.demand[s][a];
            if (d == 0) continue;
            total += static_cast<long long>(d) *
                     (inst.cares[a].duration[task.profession] + inst.territory.intra[s]);
        }
    return static_cast<int>((total + inst.daily_limit - 1) / inst.daily_limit);
}

SlaveResult heuristic_upper_bound(const SlaveTask& task) {
    const auto t0 = Clock::now();
    const Instance& inst = *task.instance;
    const int S = inst.sector_count();
    const int A = inst.care_count();
    const int limit = inst.daily_limit;

    std::vector<ResourceUse> resources;
    bool open = false;
    SectorMask mask = 0;
    int service = 0;
    std::vector<std::vector<int>> served;

    auto close = [&]() {
        if (!open) return;
        resources.push_back({mask, task.cycles->duration(mask), served});
        open = false;
    };

    for (int s = 0; s <= S; ++s) {
        for (int a = 0; a < A; ++a) {
            const int d = task.demand.demand[s][a];
            if (d == 0) continue;
            const int unit = inst.cares[a].duration[task.profession] + inst.territory.intra[s];
            for (int u = 0; u < d; ++u) {
                if (open) {
                    const SectorMask grown = s == 0 ? mask : mask | (SectorMask{1} << (s - 1));
                    const int travel = task.cycles->duration(grown);
                    if (travel + service + unit <= limit) {
                        mask = grown;
                        service += unit;
                        ++served[s][a];
                        continue;
                    }
                    close();
                }
                const SectorMask fresh = s == 0 ? 0u : SectorMask{1} << (s - 1);
                if (task.cycles->duration(fresh) + unit > limit)
                    throw ValidationError(
                        "a single demand unit cannot be served within the daily limit");
                open = true;
                mask = fresh;
                service = unit;
                served.assign(S + 1, std::vector<int>(A, 0));
                served[s][a] = 1;
            }
        }
    }
    close();

    SlaveResult result;
    result.n = static_cast<int>(resources.size());
    result.lower_bound = workload_lower_bound(task);
    result.status = result.lower_bound == result.n ? SlaveStatus::optimal
                                                   : SlaveStatus::feasible_timeout;
    result.assignment = std::move(resources);
    result.elapsed = seconds_since(t0);
    return result;
}

SlaveResult solve_slave(const SlaveTask& task) {
    return solve_slave(task, heuristic_upper_bound(task));
}

SlaveResult solve_slave(const SlaveTask& task, const SlaveResult& heuristic) {
    const auto t0 = Clock::now();
    const Deadline deadline = make_deadline(task.time_limit);

    const int ub = heuristic.n;
    const int lb0 = std::max(task.lb, workload_lower_bound(task));

    SlaveResult result;
    result.assignment = heuristic.assignment;
    if (lb0 >= ub) {
        // the cut (or the workload bound) already pins the value
        result.n = lb0;
        result.lower_bound = lb0;
        result.status = SlaveStatus::optimal;
        result.elapsed = seconds_since(t0);
        return result;
    }

    SlaveSearch search(task, deadline);
    for (int count = lb0; count < ub; ++count) {
        std::vector<ResourceUse> assignment;
        const Feas f = search.feasible(count, &assignment);
        if (f == Feas::yes) {
            result.n = count;
            result.lower_bound = count;
            result.status = SlaveStatus::optimal;
            result.assignment = std::move(assignment);
            result.elapsed = seconds_since(t0);
            return result;
        }
        if (f == Feas::timeout) {
            result.n = ub;
            result.lower_bound = count;
            result.status = SlaveStatus::feasible_timeout;
            result.elapsed = seconds_since(t0);
            return result;
        }
    }
    result.n = ub;
    result.lower_bound = ub;
    result.status = SlaveStatus::optimal;
    result.elapsed = seconds_since(t0);
    return result;
}

bool verify_assignment(const SlaveTask& task, const std::vector<ResourceUse>& assignment,
                       std::string* why) {
    const Instance& inst = *task.instance;
    const int S = inst.sector_count();
    const int A = inst.care_count();
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };

    std::vector<std::vector<long long>> totals(S + 1, std::vector<long long>(A, 0));
    for (const ResourceUse& use : assignment) {
        if (use.route_minutes != task.cycles->duration(use.route))
            return fail("route duration is not the minimal cycle duration");
        long long load = use.route_minutes;
        for (int s = 0; s <= S; ++s)
            for (int a = 0; a < A; ++a) {
                const int q = use.served[s][a];
                if (q == 0) continue;
                if (q < 0) return fail("negative assignment");
                if (s > 0 && !((use.route >> (s - 1)) & 1u))
                    return fail("demand served at a sector the route does not visit");
                if (inst.cares[a].duration[task.profession] == 0)
                    return fail("demand served for a care the profession is not involved in");
                load += static_cast<long long>(q) *
                        (inst.cares[a].duration[task.profession] + inst.territory.intra[s]);
                totals[s][a] += q;
            }
        if (load > inst.daily_limit) return fail("resource exceeds the daily limit");
    }
    for (int s = 0; s <= S; ++s)
        for (int a = 0; a < A; ++a)
            if (totals[s][a] != task.demand.demand[s][a])
                return fail("served totals do not match the demand matrix");
    return true;
}

} // namespace staffdim
