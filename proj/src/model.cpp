#include "staffdim/model.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace staffdim {

using ordered_json = nlohmann::ordered_json;

namespace {

void check(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

} // namespace

std::string to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::stable: return "stable";
        case PatternKind::volume_variation: return "volume_variation";
        case PatternKind::geo_variation: return "geo_variation";
        case PatternKind::typical_days: return "typical_days";
    }
    throw std::logic_error("unreachable pattern kind");
}

PatternKind pattern_kind_from_string(const std::string& s) {
    if (s == "stable") return PatternKind::stable;
    if (s == "volume_variation") return PatternKind::volume_variation;
    if (s == "geo_variation") return PatternKind::geo_variation;
    if (s == "typical_days") return PatternKind::typical_days;
    throw ValidationError("unknown pattern kind: " + s);
}

void DemandPattern::validate(int sector_count, int care_count) const {
    check(total_lo >= 0 && total_hi >= total_lo, "pattern totals must satisfy 0 <= lo <= hi");
    check(static_cast<int>(epi.size()) == care_count, "pattern epi length must match care count");
    for (double r : epi) check(r >= 0.0, "pattern epi entries must be nonnegative");
    check(std::abs(sum(epi) - 1.0) <= 1e-9, "pattern epi must sum to 1");

    if (sector_count == 0) {
        // no sectors: demand can land nowhere, only the all-zero pattern makes sense
        check(total_hi == 0 && typical.empty(), "pattern with no sectors must have zero total");
        return;
    }

    if (kind == PatternKind::typical_days) {
        check(!typical.empty(), "typical_days pattern needs at least one typical day");
        for (const auto& day : typical) {
            check(day.total >= 0, "typical day total must be nonnegative");
            check(static_cast<int>(day.spatial.size()) == sector_count,
                  "typical day spatial length must match sector count");
            for (double p : day.spatial) check(p >= 0.0, "spatial entries must be nonnegative");
            check(std::abs(sum(day.spatial) - 1.0) <= 1e-9, "typical day spatial must sum to 1");
        }
        return;
    }

    check(static_cast<int>(spatial.size()) == sector_count,
          "pattern spatial length must match sector count");
    for (double p : spatial) check(p >= 0.0, "spatial entries must be nonnegative");
    check(std::abs(sum(spatial) - 1.0) <= 1e-9, "pattern spatial must sum to 1");
    if (kind == PatternKind::stable) {
        check(fixed_total(), "stable pattern must have a fixed total");
    }
    if (kind == PatternKind::geo_variation) {
        check(groups >= 1 && groups <= sector_count, "geo_variation groups must be in [1, S]");
        check(focus_mass >= 0.0 && focus_mass <= 1.0, "focus_mass must be in [0, 1]");
    }
}

void Territory::validate() const {
    const int n = static_cast<int>(inter.size());
    check(n >= 1, "inter matrix must include the depot row");
    check(sector_count == n - 1, "sector_count inconsistent with inter size");
    for (const auto& row : inter)
        check(static_cast<int>(row.size()) == n, "inter matrix must be square");
    for (int i = 0; i < n; ++i) {
        check(inter[i][i] == 0, "inter diagonal must be zero");
        for (int j = 0; j < n; ++j) {
            check(inter[i][j] >= 0, "inter entries must be nonnegative");
            check(inter[i][j] == inter[j][i], "inter not symmetric");
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                check(inter[i][k] <= inter[i][j] + inter[j][k],
                      "inter violates the triangle inequality");

    check(static_cast<int>(intra.size()) == n, "intra length must be sector_count + 1");
    check(intra[0] == 0, "depot intra time must be 0");
    for (int s = 1; s < n; ++s) {
        check(intra[s] >= 0, "intra entries must be nonnegative");
        int closest = INT_MAX;
        for (int t = 0; t < n; ++t)
            if (t != s) closest = std::min(closest, inter[s][t]);
        if (n > 1)
            check(intra[s] <= closest, "intra time exceeds the closest inter-sector distance");
    }
    if (!points.empty())
        check(static_cast<int>(points.size()) == n, "points length must be sector_count + 1");
}

int Instance::profession_index(const std::string& id) const {
    for (std::size_t i = 0; i < professions.size(); ++i)
        if (professions[i].id == id) return static_cast<int>(i);
    return -1;
}

int Instance::care_index(const std::string& id) const {
    for (std::size_t i = 0; i < cares.size(); ++i)
        if (cares[i].id == id) return static_cast<int>(i);
    return -1;
}

void Instance::validate() const {
    territory.validate();
    check(!professions.empty(), "instance needs at least one profession");
    for (const auto& p : professions) {
        check(!p.id.empty(), "profession id must be nonempty");
        check(p.monthly_cost > 0, "monthly_cost must be positive");
    }
    for (std::size_t i = 0; i < professions.size(); ++i)
        for (std::size_t j = i + 1; j < professions.size(); ++j)
            check(professions[i].id != professions[j].id, "duplicate profession id");

    check(!cares.empty(), "instance needs at least one care");
    const std::size_t np = professions.size();
    double freq_sum = 0.0;
    for (const auto& c : cares) {
        check(!c.id.empty(), "care id must be nonempty");
        check(c.frequency >= 0.0, "care frequency must be nonnegative");
        check(c.duration.size() == np && c.remote.size() == np,
              "care durations must cover every declared profession");
        for (int w : c.duration) check(w >= 0, "care duration must be nonnegative");
        freq_sum += c.frequency;
    }
    for (std::size_t i = 0; i < cares.size(); ++i)
        for (std::size_t j = i + 1; j < cares.size(); ++j)
            check(cares[i].id != cares[j].id, "duplicate care id");
    check(std::abs(freq_sum - 1.0) <= 1e-9, "care frequencies must sum to 1");

    check(daily_limit > 0, "daily_limit must be positive");
    // at least one demand must always be servable: the worst single unit plus a
    // worst-case out-and-back has to fit in a day
    int max_w = 0;
    for (const auto& c : cares)
        for (int w : c.duration) max_w = std::max(max_w, w);
    int max_intra = 0;
    int max_leg = 0;
    for (int s = 1; s <= territory.sector_count; ++s) {
        max_intra = std::max(max_intra, territory.intra[s]);
        max_leg = std::max(max_leg, territory.inter[0][s]);
    }
    check(daily_limit > max_w + max_intra + 2 * max_leg,
          "daily_limit too small: a single demand may not be servable");

    pattern.validate(territory.sector_count, care_count());
}

int Scenario::total() const {
    int t = 0;
    for (const auto& row : demand)
        for (int d : row) t += d;
    return t;
}

void Scenario::validate(const Instance& instance) const {
    const int rows = instance.sector_count() + 1;
    check(static_cast<int>(demand.size()) == rows, "scenario row count must be S + 1");
    for (const auto& row : demand) {
        check(static_cast<int>(row.size()) == instance.care_count(),
              "scenario column count must match care count");
        for (int d : row) check(d >= 0, "scenario demands must be nonnegative");
    }
    for (int d : demand[0])
        check(d == 0, "raw scenario must have an empty depot row");
}

int effective_service_minutes(const Instance& instance, const std::string& care_id,
                              const std::string& profession_id, int sector) {
    const int a = instance.care_index(care_id);
    const int p = instance.profession_index(profession_id);
    check(a >= 0, "unknown care id: " + care_id);
    check(p >= 0, "unknown profession id: " + profession_id);
    check(sector >= 0 && sector <= instance.sector_count(), "sector index out of range");
    if (sector == 0)
        check(instance.cares[a].remote[p] != 0,
              "sector 0 only serves cares marked remote for the profession");
    return instance.cares[a].duration[p] + instance.territory.intra[sector];
}

namespace {

ordered_json territory_to_json(const Territory& t) {
    ordered_json j;
    j["inter"] = t.inter;
    j["intra"] = t.intra;
    if (!t.points.empty()) {
        ordered_json pts = ordered_json::array();
        for (const auto& p : t.points) pts.push_back({p[0], p[1]});
        j["points"] = pts;
    }
    return j;
}

ordered_json pattern_to_json(const DemandPattern& p) {
    ordered_json j;
    j["kind"] = to_string(p.kind);
    if (p.kind == PatternKind::typical_days) {
        ordered_json days = ordered_json::array();
        for (const auto& day : p.typical) {
            ordered_json d;
            d["total"] = day.total;
            d["spatial"] = day.spatial;
            days.push_back(d);
        }
        j["typical"] = days;
    } else {
        if (p.fixed_total()) {
            j["total"] = p.total_lo;
        } else {
            j["total"] = ordered_json{{"lo", p.total_lo}, {"hi", p.total_hi}};
        }
        j["spatial"] = p.spatial;
        if (p.kind == PatternKind::geo_variation) {
            j["groups"] = p.groups;
            j["focus_mass"] = p.focus_mass;
        }
    }
    j["epi"] = p.epi;
    return j;
}

DemandPattern pattern_from_json(const ordered_json& j, int care_count,
                                const std::vector<double>& care_frequencies) {
    DemandPattern p;
    p.kind = pattern_kind_from_string(j.at("kind").get<std::string>());
    if (p.kind == PatternKind::typical_days) {
        for (const auto& d : j.at("typical")) {
            TypicalDay day;
            day.total = d.at("total").get<int>();
            day.spatial = d.at("spatial").get<std::vector<double>>();
            p.typical.push_back(std::move(day));
        }
        if (!p.typical.empty()) {
            p.total_lo = p.typical.front().total;
            p.total_hi = p.total_lo;
            for (const auto& d : p.typical) {
                p.total_lo = std::min(p.total_lo, d.total);
                p.total_hi = std::max(p.total_hi, d.total);
            }
        }
    } else {
        const auto& t = j.at("total");
        if (t.is_number_integer()) {
            p.total_lo = p.total_hi = t.get<int>();
        } else {
            p.total_lo = t.at("lo").get<int>();
            p.total_hi = t.at("hi").get<int>();
        }
        p.spatial = j.at("spatial").get<std::vector<double>>();
        if (p.kind == PatternKind::geo_variation) {
            if (j.contains("groups")) p.groups = j.at("groups").get<int>();
            if (j.contains("focus_mass")) p.focus_mass = j.at("focus_mass").get<double>();
        }
    }
    if (j.contains("epi")) {
        p.epi = j.at("epi").get<std::vector<double>>();
    } else {
        p.epi = care_frequencies; // cares carry the epidemiological law by default
    }
    if (static_cast<int>(p.epi.size()) != care_count)
        throw ValidationError("pattern epi length must match care count");
    return p;
}

} // namespace

std::string format_instance(const Instance& instance) {
    ordered_json j;
    j["territory"] = territory_to_json(instance.territory);
    ordered_json profs = ordered_json::array();
    for (const auto& p : instance.professions)
        profs.push_back(ordered_json{{"id", p.id}, {"monthly_cost", p.monthly_cost}});
    j["professions"] = profs;
    ordered_json cares = ordered_json::array();
    for (const auto& c : instance.cares) {
        ordered_json jc;
        jc["id"] = c.id;
        jc["frequency"] = c.frequency;
        ordered_json durations, remote;
        for (std::size_t p = 0; p < instance.professions.size(); ++p) {
            durations[instance.professions[p].id] = c.duration[p];
            remote[instance.professions[p].id] = static_cast<bool>(c.remote[p]);
        }
        jc["durations"] = durations;
        jc["remote"] = remote;
        cares.push_back(jc);
    }
    j["cares"] = cares;
    j["daily_limit"] = instance.daily_limit;
    j["pattern"] = pattern_to_json(instance.pattern);
    j["label"] = instance.label;
    return j.dump(2) + "\n";
}

Instance parse_instance(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance parse error: ") + e.what());
    }
    Instance inst;
    try {
        const auto& jt = j.at("territory");
        inst.territory.inter = jt.at("inter").get<std::vector<std::vector<int>>>();
        inst.territory.intra = jt.at("intra").get<std::vector<int>>();
        inst.territory.sector_count = static_cast<int>(inst.territory.inter.size()) - 1;
        if (jt.contains("points"))
            for (const auto& p : jt.at("points"))
                inst.territory.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});

        for (const auto& jp : j.at("professions")) {
            Profession p;
            p.id = jp.at("id").get<std::string>();
            p.monthly_cost = jp.at("monthly_cost").get<long long>();
            inst.professions.push_back(std::move(p));
        }
        std::vector<double> frequencies;
        for (const auto& jc : j.at("cares")) {
            Care c;
            c.id = jc.at("id").get<std::string>();
            c.frequency = jc.at("frequency").get<double>();
            c.duration.assign(inst.professions.size(), 0);
            c.remote.assign(inst.professions.size(), 0);
            for (const auto& [key, value] : jc.at("durations").items()) {
                int p = inst.profession_index(key);
                if (p < 0) throw ValidationError("care duration references unknown profession: " + key);
                c.duration[p] = value.get<int>();
            }
            if (jc.contains("remote")) {
                for (const auto& [key, value] : jc.at("remote").items()) {
                    int p = inst.profession_index(key);
                    if (p < 0) throw ValidationError("care remote flag references unknown profession: " + key);
                    c.remote[p] = value.get<bool>() ? 1 : 0;
                }
            }
            frequencies.push_back(c.frequency);
            inst.cares.push_back(std::move(c));
        }
        inst.daily_limit = j.at("daily_limit").get<int>();
        inst.pattern = pattern_from_json(j.at("pattern"), static_cast<int>(inst.cares.size()),
                                         frequencies);
        inst.label = j.value("label", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance parse error: ") + e.what());
    }
    inst.validate();
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_instance(buffer.str());
}

void save_instance(const Instance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write instance file: " + path);
    out << format_instance(instance);
}

namespace {

Scenario scenario_from_json(const ordered_json& j, const Instance& instance) {
    Scenario sc;
    auto rows = j.at("demands").get<std::vector<std::vector<int>>>();
    // files carry sectors 1..S; the depot row is implicit
    sc.demand.assign(instance.sector_count() + 1,
                     std::vector<int>(instance.care_count(), 0));
    if (static_cast<int>(rows.size()) != instance.sector_count())
        throw ValidationError("scenario row count must equal the sector count");
    for (int s = 0; s < instance.sector_count(); ++s) {
        if (static_cast<int>(rows[s].size()) != instance.care_count())
            throw ValidationError("scenario column count must match care count");
        sc.demand[s + 1] = rows[s];
    }
    sc.validate(instance);
    return sc;
}

ordered_json scenario_to_json(const Scenario& scenario, const Instance& instance) {
    ordered_json j;
    ordered_json rows = ordered_json::array();
    for (int s = 1; s <= instance.sector_count(); ++s) rows.push_back(scenario.demand[s]);
    j["demands"] = rows;
    return j;
}

} // namespace

Scenario parse_scenario(const std::string& text, const Instance& instance) {
    try {
        return scenario_from_json(ordered_json::parse(text), instance);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario parse error: ") + e.what());
    }
}

std::string format_scenario(const Scenario& scenario, const Instance& instance) {
    return scenario_to_json(scenario, instance).dump(2) + "\n";
}

std::vector<Scenario> load_scenarios(const std::string& path, const Instance& instance) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    ordered_json j;
    try {
        j = ordered_json::parse(buffer.str());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario parse error: ") + e.what());
    }
    std::vector<Scenario> result;
    try {
        if (j.contains("scenarios")) {
            for (const auto& js : j.at("scenarios")) result.push_back(scenario_from_json(js, instance));
        } else {
            result.push_back(scenario_from_json(j, instance));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scenario parse error: ") + e.what());
    }
    return result;
}

std::string format_scenarios(const std::vector<Scenario>& scenarios, const Instance& instance) {
    ordered_json j;
    ordered_json arr = ordered_json::array();
    for (const auto& sc : scenarios) arr.push_back(scenario_to_json(sc, instance));
    j["scenarios"] = arr;
    return j.dump(2) + "\n";
}

void save_scenarios(const std::vector<Scenario>& scenarios, const Instance& instance,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << format_scenarios(scenarios, instance);
}

} // namespace staffdim
