#include "pakmarket/io.hpp"

#include <json.hpp>

#include <algorithm>

namespace pakmarket {

using nlohmann::json;

namespace {

long long get_int(const json& j, const std::string& path) {
    if (j.is_number_float())
        throw ValidationError("expected an exact integer at " + path +
                              " (floats are rejected)");
    if (!j.is_number_integer())
        throw ValidationError("expected an integer at " + path);
    return j.get<long long>();
}

const json& require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end())
        throw ValidationError("missing field \"" + std::string(key) + "\" at " + path);
    return *it;
}

} // namespace

Package parse_package_name(const std::string& text,
                           const std::vector<std::string>& names) {
    if (text == "{}" || text.empty()) return Package();
    auto index_of = [&](const std::string& nm) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == nm) return static_cast<int>(i);
        return -1;
    };
    Package out;
    if (text.find('+') != std::string::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t pos = text.find('+', start);
            std::string part = text.substr(start, pos == std::string::npos
                                                      ? std::string::npos
                                                      : pos - start);
            int idx = index_of(part);
            if (idx < 0) throw ValidationError("unknown variety \"" + part + "\"");
            out = out | singleton(idx);
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        return out;
    }
    int whole = index_of(text);
    if (whole >= 0) return singleton(whole);
    for (char ch : text) {
        int idx = index_of(std::string(1, ch));
        if (idx < 0)
            throw ValidationError("cannot resolve package name \"" + text + "\"");
        out = out | singleton(idx);
    }
    return out;
}

namespace {

std::map<Package, long long> parse_table(const json& j,
                                         const std::vector<std::string>& names,
                                         const std::string& path) {
    if (!j.is_object()) throw ValidationError("expected an object at " + path);
    std::map<Package, long long> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        Package s = parse_package_name(it.key(), names);
        if (s.empty())
            throw ValidationError("empty package not allowed at " + path);
        out[s] = get_int(it.value(), path + "/" + it.key());
    }
    return out;
}

json table_to_json(const std::map<Package, long long>& tbl,
                   const std::vector<std::string>& names) {
    json out = json::object();
    for (const auto& [s, v] : tbl) out[package_name(s, names)] = v;
    return out;
}

} // namespace

MarketInstance parse_market(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("document root must be an object");

    MarketInstance inst;
    const json& vars = require(doc, "varieties", "/");
    if (!vars.is_array() || vars.empty())
        throw ValidationError("\"varieties\" must be a nonempty array");
    for (std::size_t i = 0; i < vars.size(); ++i) {
        std::string path = "/varieties/" + std::to_string(i);
        const json& v = vars[i];
        std::string name = require(v, "name", path).get<std::string>();
        if (std::find(inst.variety_names.begin(), inst.variety_names.end(), name) !=
            inst.variety_names.end())
            throw ValidationError("duplicate variety name at " + path);
        inst.variety_names.push_back(name);
        long long units = get_int(require(v, "units", path), path + "/units");
        if (units < 1) throw ValidationError("units must be >= 1 at " + path);
        inst.supply.units.push_back(static_cast<int>(units));
    }
    const auto& names = inst.variety_names;
    const int n = inst.supply.varieties();

    if (auto it = doc.find("packages"); it != doc.end()) {
        for (std::size_t i = 0; i < it->size(); ++i)
            inst.packages.push_back(
                parse_package_name((*it)[i].get<std::string>(), names));
        std::sort(inst.packages.begin(), inst.packages.end());
        inst.packages.erase(std::unique(inst.packages.begin(), inst.packages.end()),
                            inst.packages.end());
    }

    const json& seller = require(doc, "seller", "/");
    std::string model = require(seller, "model", "/seller").get<std::string>();
    if (model == "incremental_cfg") {
        const json& graph = require(doc, "graph", "/");
        std::vector<Package> nodes;
        std::vector<Arc> arcs;
        const json& steps_json = require(seller, "steps", "/seller");
        IncrementalCostSchedule schedule;
        for (auto it = steps_json.begin(); it != steps_json.end(); ++it) {
            Package s = parse_package_name(it.key(), names);
            std::vector<long long> lst;
            for (std::size_t r = 0; r < it.value().size(); ++r)
                lst.push_back(get_int(it.value()[r],
                                      "/seller/steps/" + it.key() + "/" +
                                          std::to_string(r)));
            // singleton schedules cannot exceed the supply of their variety
            if (s.size() == 1) {
                std::size_t cap = static_cast<std::size_t>(
                    inst.supply.units[members(s)[0]]);
                if (lst.size() > cap) lst.resize(cap);
            }
            for (std::size_t r = 1; r < lst.size(); ++r)
                if (lst[r - 1] > lst[r])
                    throw ValidationError("Assumption 1 violated at (" + it.key() +
                                          ", r=" + std::to_string(r + 1) + ")");
            schedule.steps[s] = std::move(lst);
            nodes.push_back(s);
        }
        if (graph.is_string() && graph.get<std::string>() == "complete") {
            inst.seller =
                IncrementalCfg{complete_graph(n), std::move(schedule)};
        } else if (graph.is_array()) {
            for (std::size_t i = 0; i < graph.size(); ++i) {
                const json& a = graph[i];
                if (!a.is_array() || a.size() != 2)
                    throw ValidationError("arc must be a [from, to] pair at /graph/" +
                                          std::to_string(i));
                Package from = parse_package_name(a[0].get<std::string>(), names);
                Package to = parse_package_name(a[1].get<std::string>(), names);
                arcs.push_back({from, to});
                nodes.push_back(from);
                nodes.push_back(to);
            }
            inst.seller = IncrementalCfg{CostFunctionGraph(nodes, arcs),
                                         std::move(schedule)};
        } else {
            throw ValidationError("\"graph\" must be \"complete\" or an arc list");
        }
    } else if (model == "additive_marginal") {
        inst.seller = AdditiveMarginal{
            parse_table(require(seller, "costs", "/seller"), names, "/seller/costs")};
    } else if (model == "set_union") {
        inst.seller = SetUnion{
            parse_table(require(seller, "costs", "/seller"), names, "/seller/costs")};
    } else if (model == "revenue_max") {
        inst.seller = RevenueMax{
            parse_table(require(seller, "values", "/seller"), names, "/seller/values")};
    } else {
        throw ValidationError("unknown seller model \"" + model + "\"");
    }

    if (auto it = doc.find("buyers"); it != doc.end()) {
        for (std::size_t l = 0; l < it->size(); ++l) {
            std::string path = "/buyers/" + std::to_string(l);
            const json& bj = (*it)[l];
            BuyerValuation b;
            b.name = require(bj, "name", path).get<std::string>();
            const json& agents = require(bj, "agents", path);
            if (!agents.is_array() || agents.empty())
                throw ValidationError("buyer needs at least one agent at " + path);
            for (std::size_t q = 0; q < agents.size(); ++q)
                b.unit_agents.push_back(parse_table(
                    agents[q], names, path + "/agents/" + std::to_string(q)));
            inst.buyers.push_back(std::move(b));
        }
    }

    if (inst.packages.empty()) inst.packages = referenced_packages(inst);
    validate_instance(inst);
    return inst;
}

std::string serialize_market(const MarketInstance& inst) {
    const auto& names = inst.variety_names;
    json doc;
    doc["schema_version"] = "1";
    doc["varieties"] = json::array();
    for (int j = 0; j < inst.supply.varieties(); ++j)
        doc["varieties"].push_back({{"name", names[j]}, {"units", inst.supply.units[j]}});
    doc["packages"] = json::array();
    for (Package s : inst.packages) doc["packages"].push_back(package_name(s, names));

    json seller;
    if (const auto* inc = std::get_if<IncrementalCfg>(&inst.seller)) {
        seller["model"] = "incremental_cfg";
        json steps = json::object();
        for (const auto& [s, lst] : inc->schedule.steps)
            steps[package_name(s, names)] = lst;
        seller["steps"] = std::move(steps);
        json graph = json::array();
        for (const Arc& a : inc->graph.arcs())
            graph.push_back(
                {package_name(a.from, names), package_name(a.to, names)});
        doc["graph"] = std::move(graph);
    } else if (const auto* add = std::get_if<AdditiveMarginal>(&inst.seller)) {
        seller["model"] = "additive_marginal";
        seller["costs"] = table_to_json(add->c0, names);
    } else if (const auto* su = std::get_if<SetUnion>(&inst.seller)) {
        seller["model"] = "set_union";
        seller["costs"] = table_to_json(su->c0, names);
    } else if (const auto* rm = std::get_if<RevenueMax>(&inst.seller)) {
        seller["model"] = "revenue_max";
        seller["values"] = table_to_json(rm->v0, names);
    }
    doc["seller"] = std::move(seller);

    doc["buyers"] = json::array();
    for (const auto& b : inst.buyers) {
        json agents = json::array();
        for (const auto& agent : b.unit_agents) agents.push_back(table_to_json(agent, names));
        doc["buyers"].push_back({{"name", b.name}, {"agents", std::move(agents)}});
    }
    return doc.dump(2);
}

namespace {

json rat_json(const Rat& r) {
    if (rat_is_integer(r)) return json(rat_num_i64(r));
    return json{{"num", rat_num_i64(r)}, {"den", rat_den_i64(r)}};
}

json multiset_json(const PackageMultiset& k, const std::vector<std::string>& names) {
    json out = json::array();
    for (const auto& [s, c] : k.counts())
        for (int i = 0; i < c; ++i) out.push_back(package_name(s, names));
    return out;
}

} // namespace

std::string certificate_to_json(const MarketInstance& instance,
                                const WelfareResult& result) {
    const auto& names = instance.variety_names;
    json doc;
    doc["swp"] = rat_json(result.swp_value);
    doc["swlp"] = rat_json(result.swlp_value);
    doc["integral"] = result.integral;
    if (result.has_certificate) {
        const auto& cert = result.certificate;
        json c;
        json prices = json::object();
        for (const auto& [s, p] : cert.prices) prices[package_name(s, names)] = rat_json(p);
        c["prices"] = std::move(prices);
        json alloc = json::object();
        for (std::size_t l = 0; l < cert.allocation.size(); ++l)
            alloc[instance.buyers[l].name] = multiset_json(cert.allocation[l], names);
        c["allocation"] = std::move(alloc);
        c["unsold"] = cert.unsold;
        json b = json::object();
        for (const auto& [lq, v] : cert.b)
            b[instance.buyers[lq.first].name + "/" + std::to_string(lq.second + 1)] =
                rat_json(v);
        c["b"] = std::move(b);
        json d = json::object();
        for (const auto& [sr, v] : cert.d)
            d[package_name(Package(sr.first), names) + "/" +
              std::to_string(sr.second)] = rat_json(v);
        c["d"] = std::move(d);
        c["welfare"] = rat_json(cert.welfare);
        doc["certificate"] = std::move(c);
    }
    return doc.dump(2);
}

std::string auction_to_json(const MarketInstance& instance, const AuctionOutcome& out,
                            bool include_trace) {
    const auto& names = instance.variety_names;
    json doc;
    json prices = json::object();
    for (const auto& [s, p] : out.prices) prices[package_name(s, names)] = p;
    doc["prices"] = std::move(prices);
    json alloc = json::object();
    for (std::size_t l = 0; l < out.allocation.size(); ++l)
        alloc[instance.buyers[l].name] = multiset_json(out.allocation[l], names);
    doc["allocation"] = std::move(alloc);
    doc["retained"] = multiset_json(out.retained, names);
    doc["rounds"] = out.rounds;
    doc["warnings"] = out.warnings;
    if (include_trace) {
        json trace = json::array();
        for (const auto& round : out.trace) {
            json row;
            row["t"] = round.t;
            json p = json::object();
            for (const auto& [s, v] : round.prices) p[package_name(s, names)] = v;
            row["prices"] = std::move(p);
            json demands = json::array();
            for (Package s : round.demands) demands.push_back(package_name(s, names));
            row["demands"] = std::move(demands);
            row["supply"] = multiset_json(round.supply, names);
            json over = json::array();
            for (Package s : round.overdemanded) over.push_back(package_name(s, names));
            row["overdemanded"] = std::move(over);
            trace.push_back(std::move(row));
        }
        doc["trace"] = std::move(trace);
    }
    return doc.dump(2);
}

PackagePrices parse_prices_json(const std::string& text,
                                const std::vector<std::string>& names) {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ValidationError("prices must be a JSON object");
    PackagePrices out;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        Package s = parse_package_name(it.key(), names);
        if (it.value().is_object()) {
            long long num = get_int(require(it.value(), "num", it.key()), it.key());
            long long den = get_int(require(it.value(), "den", it.key()), it.key());
            out[s] = make_rat(num, den);
        } else {
            out[s] = to_rat(get_int(it.value(), it.key()));
        }
    }
    return out;
}

std::vector<PackageMultiset> parse_allocation_json(const MarketInstance& instance,
                                                   const std::string& text) {
    json doc = json::parse(text);
    if (!doc.is_object()) throw ValidationError("allocation must be a JSON object");
    std::vector<PackageMultiset> out(instance.buyers.size());
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        int idx = -1;
        for (std::size_t l = 0; l < instance.buyers.size(); ++l)
            if (instance.buyers[l].name == it.key()) idx = static_cast<int>(l);
        if (idx < 0) throw ValidationError("unknown buyer \"" + it.key() + "\"");
        for (const auto& pkg : it.value())
            out[idx].add(parse_package_name(pkg.get<std::string>(),
                                            instance.variety_names));
    }
    return out;
}

} // namespace pakmarket
