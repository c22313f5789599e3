#include "impactpath/io.hpp"

#include "impactpath/core.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace impactpath {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

std::string fmt(Scalar x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

[[noreturn]] void row_error(const fs::path& path, std::size_t row, const std::string& what) {
    throw DataError(path.string() + ":" + std::to_string(row) + ": " + what);
}

}  // namespace

std::string pair_stem(const std::string& variable, const std::string& region) {
    std::string stem = variable + "__" + region;
    std::replace(stem.begin(), stem.end(), ' ', '_');
    return stem;
}

std::vector<EnsemblePair> ingest_csv(const std::vector<fs::path>& paths) {
    // key: (variable, region) -> (member, scenario) -> date -> value
    using MemberKey = std::pair<int, Scenario>;
    std::map<std::pair<std::string, std::string>, std::map<MemberKey, std::map<Date, Scalar>>>
        grouped;

    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw DataError("cannot open " + path.string());
        std::string line;
        std::size_t row = 0;
        do {
            if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
            ++row;
        } while (!line.empty() && line[0] == '#');
        if (split_csv_line(line) !=
            std::vector<std::string>{"date", "variable", "region", "member", "scenario", "value"})
            row_error(path, row, "expected header date,variable,region,member,scenario,value");
        while (std::getline(in, line)) {
            ++row;
            if (line.empty() || line[0] == '#') continue;
            const auto f = split_csv_line(line);
            if (f.size() != 6) row_error(path, row, "expected 6 fields");
            try {
                const Date date = Date::parse(f[0]);
                const int member = std::stoi(f[3]);
                const Scenario scenario = scenario_from_string(f[4]);
                const Scalar value = std::stod(f[5]);
                if (!std::isfinite(value)) row_error(path, row, "non-finite value");
                auto& series = grouped[{f[1], f[2]}][{member, scenario}];
                if (!series.emplace(date, value).second)
                    row_error(path, row, "duplicate (date, member, scenario) sample");
            } catch (const DataError&) {
                throw;
            } catch (const std::exception& e) {
                row_error(path, row, e.what());
            }
        }
    }
    if (grouped.empty()) throw DataError("ingest: no data rows found");

    std::vector<EnsemblePair> pairs;
    for (const auto& [key, members] : grouped) {
        std::vector<RegionalSeries> forced, counterfactual;
        for (const auto& [mk, samples] : members) {
            RegionalSeries s;
            s.variable = key.first;
            s.region = key.second;
            s.member = mk.first;
            s.scenario = mk.second;
            s.start_date = samples.begin()->first;
            s.values = Series(static_cast<Index>(samples.size()));
            Index i = 0;
            Date expect = s.start_date;
            for (const auto& [date, value] : samples) {
                if (date != expect)
                    throw DataError(key.first + "/" + key.second + " member " +
                                    std::to_string(mk.first) + ": gap before " + date.to_string());
                s.values[i++] = value;
                expect = expect + 1;
            }
            (mk.second == Scenario::Forced ? forced : counterfactual).push_back(std::move(s));
        }
        pairs.push_back(align_pair(forced, counterfactual));
    }
    return pairs;
}

RegionMask read_mask_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    std::string line;
    std::size_t row = 0;
    if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
    ++row;
    const auto header = split_csv_line(line);
    const bool has_weight = header.size() == 3 && header[2] == "weight";
    if (!(header.size() >= 2 && header[0] == "column" && header[1] == "region") ||
        (header.size() == 3 && !has_weight) || header.size() > 3)
        row_error(path, row, "expected header column,region[,weight]");

    RegionMask mask;
    std::map<std::string, int> region_ids;
    std::map<long, std::pair<int, Scalar>> columns;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) row_error(path, row, "wrong field count");
        try {
            const long column = std::stol(f[0]);
            const auto [it, fresh] =
                region_ids.emplace(f[1], static_cast<int>(mask.regions.size()));
            if (fresh) mask.regions.push_back(f[1]);
            const Scalar weight = has_weight ? std::stod(f[2]) : 1.0;
            if (!columns.emplace(column, std::make_pair(it->second, weight)).second)
                row_error(path, row, "column assigned twice");
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            row_error(path, row, e.what());
        }
    }
    long expect = 0;
    for (const auto& [column, entry] : columns) {
        if (column != expect++)
            throw DataError(path.string() + ": columns must be the contiguous range 0..C-1");
        mask.assignment.push_back(entry.first);
        mask.weights.push_back(entry.second);
    }
    mask.validate();
    return mask;
}

void write_text_file(const fs::path& path, const std::string& text,
                     const std::string& config_hash) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    if (path.extension() != ".json") out << "# config_hash=" << config_hash << "\n";
    out << text;
}

void write_store(const fs::path& dir, const std::vector<EnsemblePair>& pairs,
                 const std::string& config_hash) {
    fs::create_directories(dir);
    json manifest;
    manifest["config_hash"] = config_hash;
    manifest["pairs"] = json::array();
    for (const auto& pair : pairs) {
        const std::string file = pair_stem(pair.variable, pair.region) + ".csv";
        manifest["pairs"].push_back({{"variable", pair.variable},
                                     {"region", pair.region},
                                     {"start_date", pair.start_date.to_string()},
                                     {"days", pair.length()},
                                     {"ensemble_size", pair.ensemble_size()},
                                     {"file", file}});
        std::ostringstream body;
        body << "date";
        for (int e = 1; e <= pair.ensemble_size(); ++e) body << ",forced_" << e;
        for (int e = 1; e <= pair.ensemble_size(); ++e) body << ",counterfactual_" << e;
        body << "\n";
        for (Index d = 0; d < pair.length(); ++d) {
            body << (pair.start_date + static_cast<std::int32_t>(d)).to_string();
            for (const auto& s : pair.forced) body << "," << fmt(s[d]);
            for (const auto& s : pair.counterfactual) body << "," << fmt(s[d]);
            body << "\n";
        }
        write_text_file(dir / file, body.str(), config_hash);
    }
    std::ofstream out(dir / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << "\n";
}

std::vector<EnsemblePair> read_store(const fs::path& dir) {
    std::ifstream min(dir / "manifest.json");
    if (!min) throw DataError("store manifest not found in " + dir.string());
    json manifest = json::parse(min);

    std::vector<EnsemblePair> pairs;
    for (const auto& entry : manifest.at("pairs")) {
        EnsemblePair pair;
        pair.variable = entry.at("variable").get<std::string>();
        pair.region = entry.at("region").get<std::string>();
        pair.start_date = Date::parse(entry.at("start_date").get<std::string>());
        const int ensemble = entry.at("ensemble_size").get<int>();
        const Index days = entry.at("days").get<Index>();
        pair.forced.assign(static_cast<std::size_t>(ensemble), Series(days));
        pair.counterfactual.assign(static_cast<std::size_t>(ensemble), Series(days));

        const fs::path file = dir / entry.at("file").get<std::string>();
        std::ifstream in(file);
        if (!in) throw DataError("cannot open " + file.string());
        std::string line;
        std::getline(in, line);  // config hash comment
        std::getline(in, line);  // header
        Index d = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto f = split_csv_line(line);
            if (static_cast<int>(f.size()) != 1 + 2 * ensemble || d >= days)
                throw DataError(file.string() + ": store file inconsistent with manifest");
            for (int e = 0; e < ensemble; ++e) {
                pair.forced[static_cast<std::size_t>(e)][d] = std::stod(f[1 + e]);
                pair.counterfactual[static_cast<std::size_t>(e)][d] =
                    std::stod(f[1 + ensemble + e]);
            }
            ++d;
        }
        if (d != days) throw DataError(file.string() + ": truncated store file");
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

void write_synth_csv(const fs::path& dir, const SynthDataset& dataset,
                     const std::string& config_hash) {
    fs::create_directories(dir);
    std::ostringstream body;
    body << "date,variable,region,member,scenario,value\n";
    for (const auto& pair : dataset.pairs) {
        for (int e = 0; e < pair.ensemble_size(); ++e) {
            for (Index d = 0; d < pair.length(); ++d) {
                const std::string date = (pair.start_date + static_cast<std::int32_t>(d)).to_string();
                body << date << "," << pair.variable << "," << pair.region << "," << (e + 1)
                     << ",forced," << fmt(pair.forced[static_cast<std::size_t>(e)][d]) << "\n";
                body << date << "," << pair.variable << "," << pair.region << "," << (e + 1)
                     << ",counterfactual,"
                     << fmt(pair.counterfactual[static_cast<std::size_t>(e)][d]) << "\n";
            }
        }
    }
    write_text_file(dir / "dataset.csv", body.str(), config_hash);

    json truth;
    truth["config_hash"] = config_hash;
    truth["start_date"] = dataset.start_date.to_string();
    truth["impacts"] = json::array();
    for (const auto& imp : dataset.truth.impacts)
        truth["impacts"].push_back({{"variable", imp.variable},
                                    {"region", imp.region},
                                    {"start_day", imp.start_day},
                                    {"end_day", imp.end_day},
                                    {"amplitude", imp.amplitude},
                                    {"ramp_days", imp.ramp_days}});
    std::ofstream tout(dir / "ground_truth.json", std::ios::binary);
    tout << truth.dump(2) << "\n";
}

std::string entropy_csv(const EntropySeries& entropy, Date start_date) {
    std::ostringstream out;
    out << "window,midpoint_date,entropy\n";
    for (Index i = 0; i < entropy.size(); ++i)
        out << (i + 1) << ","
            << (start_date +
                static_cast<std::int32_t>(entropy.window_midpoints[static_cast<std::size_t>(i)] -
                                          1))
                   .to_string()
            << "," << fmt(entropy.values[i]) << "\n";
    return out.str();
}

std::string changepoints_csv(const std::vector<int>& nu, const EntropyParams& params,
                             Date start_date) {
    std::ostringstream out;
    out << "nu_index,date\n";
    for (const int w : nu) {
        const Index t = params.midpoint(w);
        out << t << "," << (start_date + static_cast<std::int32_t>(t - 1)).to_string() << "\n";
    }
    return out.str();
}

std::string intervals_json(const std::vector<FeatureInterval>& intervals) {
    json arr = json::array();
    for (const auto& f : intervals)
        arr.push_back({{"start_date", f.start_date.to_string()},
                       {"end_date", f.end_date.to_string()}});
    return arr.dump(2) + "\n";
}

std::string impacts_csv(const std::vector<ImpactRecord>& impacts) {
    std::ostringstream out;
    out << "variable,region,start_date,end_date,mean_diff,ci_low,ci_high,score\n";
    for (const auto& r : impacts)
        out << r.variable << "," << r.region << "," << r.interval.start_date.to_string() << ","
            << r.interval.end_date.to_string() << "," << fmt(r.mean_diff) << "," << fmt(r.ci_low)
            << "," << fmt(r.ci_high) << "," << fmt(r.score) << "\n";
    return out.str();
}

std::string path_csv(const PathwayGraph& graph, const std::vector<int>& path) {
    std::vector<ImpactRecord> records;
    records.reserve(path.size());
    for (const int id : path) records.push_back(graph.nodes.at(static_cast<std::size_t>(id)));
    return impacts_csv(records);
}

}  // namespace impactpath
