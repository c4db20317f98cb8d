#include "matchmech/io.hpp"

#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <type_traits>
#include <variant>

namespace matchmech {

namespace {

void require_fields(const Json& obj, const char* what, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {}) {
    if (!obj.is_object()) {
        throw FormatError(std::string(what) + " must be an object");
    }
    for (const char* key : required) {
        if (!obj.contains(key)) {
            throw FormatError(std::string(what) + " is missing field '" + key + "'");
        }
    }
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* k : required) known = known || key == k;
        for (const char* k : optional) known = known || key == k;
        if (!known) {
            throw FormatError(std::string(what) + " has unknown field '" + key + "'");
        }
    }
}

std::string as_string(const Json& v, const char* what) {
    if (!v.is_string()) {
        throw FormatError(std::string(what) + " must be a string");
    }
    return v.get<std::string>();
}

std::vector<std::string> as_strings(const Json& v, const char* what) {
    if (!v.is_array()) {
        throw FormatError(std::string(what) + " must be an array of strings");
    }
    std::vector<std::string> out;
    out.reserve(v.size());
    for (const auto& item : v) {
        out.push_back(as_string(item, what));
    }
    return out;
}

std::pair<std::string, std::string> as_pair(const Json& v, const char* what) {
    if (!v.is_array() || v.size() != 2) {
        throw FormatError(std::string(what) + " entries must be two-element arrays");
    }
    return {as_string(v[0], what), as_string(v[1], what)};
}

const Json& as_array(const Json& v, const char* what) {
    if (!v.is_array()) {
        throw FormatError(std::string(what) + " must be an array");
    }
    return v;
}

Json pairs_json(const auto& pairs) {
    Json out = Json::array();
    for (const auto& [a, b] : pairs) {
        out.push_back(Json::array({a, b}));
    }
    return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const Json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot write '" + path.string() + "'");
    }
    out << doc.dump(2) << '\n';
}

ProblemInstance parse_instance(const Json& doc) {
    require_fields(doc, "instance", {"categories"});
    ProblemInstance out;
    for (const auto& c : as_array(doc["categories"], "categories")) {
        require_fields(c, "category", {"id", "doctors", "patients"});
        CategoryInstance cat;
        cat.id = as_string(c["id"], "category id");
        cat.doctors = as_strings(c["doctors"], "doctors");
        for (const auto& p : as_array(c["patients"], "patients")) {
            require_fields(p, "patient", {"id", "prefs"});
            cat.patients.push_back({as_string(p["id"], "patient id"), as_strings(p["prefs"], "prefs")});
        }
        out.categories.push_back(std::move(cat));
    }
    return out;
}

Json to_json(const ProblemInstance& instance) {
    Json cats = Json::array();
    for (const auto& cat : instance.categories) {
        Json patients = Json::array();
        for (const auto& p : cat.patients) {
            patients.push_back({{"id", p.id}, {"prefs", p.prefs}});
        }
        cats.push_back({{"id", cat.id}, {"doctors", cat.doctors}, {"patients", std::move(patients)}});
    }
    return {{"categories", std::move(cats)}};
}

Endowment parse_endowment(const Json& doc) {
    require_fields(doc, "endowment", {"categories"});
    Endowment out;
    for (const auto& c : as_array(doc["categories"], "endowment categories")) {
        require_fields(c, "endowment category", {"id", "owners"});
        CategoryEndowment ce;
        ce.category = as_string(c["id"], "category id");
        for (const auto& pair : as_array(c["owners"], "owners")) {
            ce.owners.push_back(as_pair(pair, "owners"));
        }
        out.categories.push_back(std::move(ce));
    }
    return out;
}

Json to_json(const Endowment& endowment) {
    Json cats = Json::array();
    for (const auto& c : endowment.categories) {
        cats.push_back({{"id", c.category}, {"owners", pairs_json(c.owners)}});
    }
    return {{"categories", std::move(cats)}};
}

AllocationDocument parse_allocation(const Json& doc) {
    require_fields(doc, "allocation", {"categories"}, {"endowment", "seed"});
    AllocationDocument out;
    for (const auto& c : as_array(doc["categories"], "allocation categories")) {
        require_fields(c, "allocation category", {"id", "pairs", "unmatched_patients", "unmatched_doctors"});
        CategoryAllocation ca;
        ca.category = as_string(c["id"], "category id");
        for (const auto& pair : as_array(c["pairs"], "pairs")) {
            ca.pairs.push_back(as_pair(pair, "pairs"));
        }
        ca.unmatched_patients = as_strings(c["unmatched_patients"], "unmatched_patients");
        ca.unmatched_doctors = as_strings(c["unmatched_doctors"], "unmatched_doctors");
        out.allocation.categories.push_back(std::move(ca));
    }
    if (doc.contains("endowment") && !doc["endowment"].is_null()) {
        out.endowment = parse_endowment(doc["endowment"]);
    }
    if (doc.contains("seed") && !doc["seed"].is_null()) {
        if (!doc["seed"].is_number_unsigned()) {
            throw FormatError("seed must be an unsigned integer");
        }
        out.seed = doc["seed"].get<std::uint64_t>();
    }
    return out;
}

Json to_json(const AllocationDocument& doc) {
    Json cats = Json::array();
    for (const auto& c : doc.allocation.categories) {
        cats.push_back({{"id", c.category},
                        {"pairs", pairs_json(c.pairs)},
                        {"unmatched_patients", c.unmatched_patients},
                        {"unmatched_doctors", c.unmatched_doctors}});
    }
    Json out = {{"categories", std::move(cats)}};
    out["endowment"] = doc.endowment ? to_json(*doc.endowment) : Json(nullptr);
    out["seed"] = doc.seed ? Json(*doc.seed) : Json(nullptr);
    return out;
}

Json to_json(const Coalition& coalition) {
    Json members = Json::array();
    for (std::size_t i = 0; i < coalition.members.size(); ++i) {
        members.push_back(Json::array({coalition.members[i], coalition.reallocation[i]}));
    }
    return {{"kind", "coalition"}, {"members", std::move(members)}};
}

Json to_json(const Misreport& m) {
    return {{"kind", "misreport"},
            {"patient", m.target},
            {"report", m.report},
            {"truthful_doctor", m.truthful ? Json(*m.truthful) : Json(nullptr)},
            {"obtained_doctor", m.obtained ? Json(*m.obtained) : Json(nullptr)}};
}

Json to_json(const ProbeReport& report) {
    Json witness = std::visit(
        [](const auto& w) -> Json {
            using W = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<W, std::monostate>) {
                return nullptr;
            } else if constexpr (std::is_same_v<W, CategoryAllocation>) {
                return {{"kind", "allocation"},
                        {"pairs", pairs_json(w.pairs)},
                        {"unmatched_patients", w.unmatched_patients},
                        {"unmatched_doctors", w.unmatched_doctors}};
            } else {
                return to_json(w);
            }
        },
        report.witness);
    return {{"property", report.property},
            {"category", report.category},
            {"verdict", report.holds ? "holds" : "violated"},
            {"witness", std::move(witness)},
            {"bound", report.bound}};
}

Json to_json(const MetricsReport& report) {
    Json cats = Json::array();
    for (const auto& c : report.categories) {
        Json patients = Json::array();
        for (const auto& p : c.patients) {
            patients.push_back({{"id", p.patient}, {"el", p.el}, {"best", p.best}});
        }
        cats.push_back({{"id", c.category},
                        {"tel", c.tel},
                        {"nba", c.nba},
                        {"unmatched", c.unmatched},
                        {"patients", std::move(patients)}});
    }
    return {{"tel", report.tel}, {"nba", report.nba}, {"categories", std::move(cats)}};
}

Json to_json(const std::vector<Violation>& violations) {
    Json out = Json::array();
    for (const auto& v : violations) {
        out.push_back({{"category", v.category}, {"kind", to_string(v.kind)}, {"id", v.offending_id}});
    }
    return out;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
    out << "scenario,row,mechanism,variation,trial,seed,tel,nba,runtime_us\n";
    for (const auto& r : result.rows) {
        out << r.scenario << ',' << r.row << ',' << to_string(r.mechanism) << ',' << to_string(r.variation) << ','
            << r.trial << ',' << r.seed << ',' << r.tel << ',' << r.nba << ',' << r.runtime_us << '\n';
    }
}

Json summary_json(const std::vector<ConfigSummary>& summary) {
    Json configs = Json::array();
    for (const auto& s : summary) {
        configs.push_back({{"scenario", s.scenario},
                           {"row", s.row},
                           {"mechanism", to_string(s.mechanism)},
                           {"variation", to_string(s.variation)},
                           {"trials", s.trials},
                           {"mean_tel", s.mean_tel},
                           {"sd_tel", s.sd_tel},
                           {"mean_nba", s.mean_nba},
                           {"sd_nba", s.sd_nba}});
    }
    return {{"configs", std::move(configs)}};
}

}  // namespace matchmech
