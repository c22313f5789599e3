#include "impactpath/pipeline.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace impactpath {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void PipelineConfig::validate() const {
    entropy.validate();
    changepoint.validate();
    if (!(ci_level > 0.0 && ci_level < 1.0)) throw ConfigError("ci_level must lie in (0, 1)");
    constraints.validate();
    constraints.variable_rank(source_variable);
    constraints.region_index(source_region);
    constraints.variable_rank(final_impact.variable);
    constraints.region_index(final_impact.region);
    synth.validate();
}

namespace {

json constraints_to_json(const PathwayConstraints& c) {
    json deps = json::array();
    for (const auto& [a, b] : c.variable_deps) deps.push_back({a, b});
    json adj = json::array();
    for (const auto& [a, b] : c.region_adjacency)
        if (a < b) adj.push_back({a, b});
    return json{{"epsilon", c.epsilon},       {"slack_days", c.slack_days},
                {"variables", c.variables},   {"variable_deps", deps},
                {"regions", c.regions},       {"region_adjacency", adj}};
}

PathwayConstraints constraints_from_json(const json& j, PathwayConstraints base) {
    base.epsilon = j.value("epsilon", base.epsilon);
    base.slack_days = j.value("slack_days", base.slack_days);
    if (j.contains("variables")) base.variables = j["variables"].get<std::vector<std::string>>();
    if (j.contains("variable_deps")) {
        base.variable_deps.clear();
        for (const auto& d : j["variable_deps"])
            base.variable_deps.insert({d.at(0).get<std::string>(), d.at(1).get<std::string>()});
    }
    if (j.contains("regions")) {
        base.regions = j["regions"].get<std::vector<std::string>>();
        // Region list changes invalidate the default adjacency; rebuild
        // the chain unless an explicit relation follows.
        base.region_adjacency.clear();
        for (std::size_t i = 0; i + 1 < base.regions.size(); ++i) {
            base.region_adjacency.insert({base.regions[i], base.regions[i + 1]});
            base.region_adjacency.insert({base.regions[i + 1], base.regions[i]});
        }
    }
    if (j.contains("region_adjacency")) {
        base.region_adjacency.clear();
        for (const auto& d : j["region_adjacency"]) {
            base.region_adjacency.insert({d.at(0).get<std::string>(), d.at(1).get<std::string>()});
            base.region_adjacency.insert({d.at(1).get<std::string>(), d.at(0).get<std::string>()});
        }
    }
    return base;
}

json synth_to_json(const SynthConfig& s) {
    json backgrounds = json::object();
    for (const auto& [var, bg] : s.backgrounds)
        backgrounds[var] = {{"base", bg.base},
                            {"seasonal_amp", bg.seasonal_amp},
                            {"seasonal_phase", bg.seasonal_phase},
                            {"ar_coeff", bg.ar_coeff},
                            {"noise_sd", bg.noise_sd}};
    json impacts = json::array();
    for (const auto& imp : s.impacts)
        impacts.push_back({{"variable", imp.variable},
                           {"region", imp.region},
                           {"start_day", imp.start_day},
                           {"end_day", imp.end_day},
                           {"amplitude", imp.amplitude},
                           {"ramp_days", imp.ramp_days}});
    return json{{"seed", s.seed},
                {"ensemble_size", s.ensemble_size},
                {"days", s.days},
                {"start_date", s.start_date.to_string()},
                {"variables", s.variables},
                {"regions", s.regions},
                {"magnitude_scale", s.magnitude_scale},
                {"paired_noise", s.paired_noise},
                {"backgrounds", backgrounds},
                {"impacts", impacts}};
}

SynthConfig synth_from_json(const json& j, SynthConfig base) {
    base.seed = j.value("seed", base.seed);
    base.ensemble_size = j.value("ensemble_size", base.ensemble_size);
    base.days = j.value("days", base.days);
    if (j.contains("start_date")) base.start_date = Date::parse(j["start_date"].get<std::string>());
    if (j.contains("variables")) base.variables = j["variables"].get<std::vector<std::string>>();
    if (j.contains("regions")) base.regions = j["regions"].get<std::vector<std::string>>();
    base.magnitude_scale = j.value("magnitude_scale", base.magnitude_scale);
    base.paired_noise = j.value("paired_noise", base.paired_noise);
    if (j.contains("backgrounds")) {
        base.backgrounds.clear();
        for (const auto& [var, bj] : j["backgrounds"].items()) {
            Background bg;
            bg.base = bj.value("base", bg.base);
            bg.seasonal_amp = bj.value("seasonal_amp", bg.seasonal_amp);
            bg.seasonal_phase = bj.value("seasonal_phase", bg.seasonal_phase);
            bg.ar_coeff = bj.value("ar_coeff", bg.ar_coeff);
            bg.noise_sd = bj.value("noise_sd", bg.noise_sd);
            base.backgrounds[var] = bg;
        }
    }
    if (j.contains("impacts")) {
        base.impacts.clear();
        for (const auto& ij : j["impacts"]) {
            InjectedImpact imp;
            imp.variable = ij.at("variable").get<std::string>();
            imp.region = ij.at("region").get<std::string>();
            imp.start_day = ij.at("start_day").get<Index>();
            imp.end_day = ij.at("end_day").get<Index>();
            imp.amplitude = ij.at("amplitude").get<Scalar>();
            imp.ramp_days = ij.value("ramp_days", imp.ramp_days);
            base.impacts.push_back(imp);
        }
    }
    return base;
}

}  // namespace

std::string serialize_config(const PipelineConfig& cfg) {
    json inputs = json::array();
    for (const auto& p : cfg.inputs) inputs.push_back(p.string());
    json j{{"entropy",
            {{"n", cfg.entropy.n},
             {"p", cfg.entropy.p},
             {"m", cfg.entropy.m},
             {"r1", cfg.entropy.r1},
             {"r2", cfg.entropy.r2}}},
           {"changepoint",
            {{"alpha", cfg.changepoint.alpha},
             {"min_segment", cfg.changepoint.min_segment},
             {"max_changepoints", cfg.changepoint.max_changepoints}}},
           {"stats", {{"ci_level", cfg.ci_level}}},
           {"pathway", constraints_to_json(cfg.constraints)},
           {"source", {{"variable", cfg.source_variable}, {"region", cfg.source_region}}},
           {"final",
            {{"variable", cfg.final_impact.variable},
             {"region", cfg.final_impact.region},
             {"date", cfg.final_impact.date.to_string()}}},
           {"io",
            {{"inputs", inputs},
             {"store_dir", cfg.store_dir.string()},
             {"output_dir", cfg.output_dir.string()}}},
           {"synth", synth_to_json(cfg.synth)}};
    return j.dump(2) + "\n";
}

PipelineConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    PipelineConfig cfg;
    try {
        if (j.contains("entropy")) {
            const auto& e = j["entropy"];
            cfg.entropy.n = e.value("n", cfg.entropy.n);
            cfg.entropy.p = e.value("p", cfg.entropy.p);
            cfg.entropy.m = e.value("m", cfg.entropy.m);
            cfg.entropy.r1 = e.value("r1", cfg.entropy.r1);
            cfg.entropy.r2 = e.value("r2", cfg.entropy.r2);
        }
        if (j.contains("changepoint")) {
            const auto& c = j["changepoint"];
            cfg.changepoint.alpha = c.value("alpha", cfg.changepoint.alpha);
            cfg.changepoint.min_segment = c.value("min_segment", cfg.changepoint.min_segment);
            cfg.changepoint.max_changepoints =
                c.value("max_changepoints", cfg.changepoint.max_changepoints);
        }
        if (j.contains("stats")) cfg.ci_level = j["stats"].value("ci_level", cfg.ci_level);
        if (j.contains("pathway"))
            cfg.constraints = constraints_from_json(j["pathway"], cfg.constraints);
        if (j.contains("source")) {
            cfg.source_variable = j["source"].value("variable", cfg.source_variable);
            cfg.source_region = j["source"].value("region", cfg.source_region);
        }
        if (j.contains("final")) {
            cfg.final_impact.variable = j["final"].value("variable", cfg.final_impact.variable);
            cfg.final_impact.region = j["final"].value("region", cfg.final_impact.region);
            if (j["final"].contains("date"))
                cfg.final_impact.date = Date::parse(j["final"]["date"].get<std::string>());
        }
        if (j.contains("io")) {
            const auto& io = j["io"];
            if (io.contains("inputs")) {
                cfg.inputs.clear();
                for (const auto& p : io["inputs"]) cfg.inputs.emplace_back(p.get<std::string>());
            }
            cfg.store_dir = io.value("store_dir", cfg.store_dir.string());
            cfg.output_dir = io.value("output_dir", cfg.output_dir.string());
        }
        if (j.contains("synth")) cfg.synth = synth_from_json(j["synth"], cfg.synth);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

PipelineConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_hash(const PipelineConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

PipelineResult run_pipeline(const std::vector<EnsemblePair>& pairs, const PipelineConfig& cfg) {
    cfg.validate();
    PipelineResult result;

    for (const auto& pair : pairs) {
        const std::string tag = pair.variable + "/" + pair.region;
        PairResult pr;
        pr.variable = pair.variable;
        pr.region = pair.region;
        pr.start_date = pair.start_date;
        try {
            pr.entropy = entropy_series(pair, cfg.entropy);
        } catch (const std::exception& e) {
            throw DataError("entropy stage (" + tag + "): " + e.what());
        }
        try {
            pr.changepoints = detect_changepoints(pr.entropy, cfg.changepoint);
            pr.intervals =
                map_to_time(pr.changepoints, cfg.entropy, pair.length(), pair.start_date);
        } catch (const std::exception& e) {
            throw DataError("changepoint stage (" + tag + "): " + e.what());
        }
        try {
            pr.impacts = impacts_for_features(pair, pr.intervals, cfg.ci_level);
        } catch (const std::exception& e) {
            throw DataError("stats stage (" + tag + "): " + e.what());
        }
        result.all_impacts.insert(result.all_impacts.end(), pr.impacts.begin(),
                                  pr.impacts.end());
        result.per_pair.push_back(std::move(pr));
    }

    try {
        result.full_dag = build_full_dag(result.all_impacts, cfg.constraints);
    } catch (const std::exception& e) {
        throw DataError(std::string("pathway stage: ") + e.what());
    }

    result.impact_dag_graph.kind = GraphKind::Impact;
    result.impact_dag_graph.constraints = cfg.constraints;
    const auto final_in_full = find_node(result.full_dag, cfg.final_impact);
    if (!final_in_full) {
        result.path_message = "final impact node (" + cfg.final_impact.variable + ", " +
                              cfg.final_impact.region + ", " + cfg.final_impact.date.to_string() +
                              ") not present in the full DAG";
        return result;
    }
    result.impact_dag_graph = impact_dag(result.full_dag, *final_in_full);

    const auto source = find_source_node(result.impact_dag_graph, cfg.source_variable,
                                         cfg.source_region);
    const auto final_node = find_node(result.impact_dag_graph, cfg.final_impact);
    if (!source) {
        result.path_message = "no " + cfg.source_variable + " source node in region " +
                              cfg.source_region + " upstream of the final impact";
        return result;
    }
    try {
        result.path = source_impact_path(result.impact_dag_graph, *source, *final_node);
        result.path_found = true;
    } catch (const PathNotFoundError& e) {
        result.path_message = e.what();
    }
    return result;
}

void write_run_outputs(const fs::path& dir, const PipelineResult& result,
                       const PipelineConfig& cfg) {
    fs::create_directories(dir);
    const std::string hash = config_hash(cfg);

    for (const auto& pr : result.per_pair) {
        const std::string stem = pair_stem(pr.variable, pr.region);
        write_text_file(dir / (stem + ".entropy.csv"), entropy_csv(pr.entropy, pr.start_date),
                        hash);
        write_text_file(dir / (stem + ".changepoints.csv"),
                        changepoints_csv(pr.changepoints, cfg.entropy, pr.start_date), hash);
        json intervals = json::parse(intervals_json(pr.intervals));
        write_text_file(dir / (stem + ".intervals.json"),
                        json{{"config_hash", hash}, {"intervals", intervals}}.dump(2) + "\n",
                        hash);
        write_text_file(dir / (stem + ".impacts.csv"), impacts_csv(pr.impacts), hash);
    }
    write_text_file(dir / "impacts_all.csv", impacts_csv(result.all_impacts), hash);

    const auto write_graph = [&](const PathwayGraph& graph, const std::string& stem) {
        write_text_file(dir / (stem + ".dot"), export_dot(graph), hash);
        std::string body = export_json(graph);
        body.insert(body.find('\n') + 1, "  \"config_hash\": \"" + hash + "\",\n");
        write_text_file(dir / (stem + ".json"), body, hash);
    };
    write_graph(result.full_dag, "dag_full");
    write_graph(result.impact_dag_graph, "dag_impact");

    if (result.path_found)
        write_text_file(dir / "path.csv", path_csv(result.impact_dag_graph, result.path), hash);
    else
        write_text_file(dir / "path_status.txt", result.path_message + "\n", hash);
}

namespace {

std::string fmt(Scalar x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

void write_report_outputs(const fs::path& dir, const std::vector<EnsemblePair>& pairs,
                          const PipelineResult& result, const PipelineConfig& cfg) {
    fs::create_directories(dir);
    const std::string hash = config_hash(cfg);

    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& pair = pairs[k];
        const auto& pr = result.per_pair.at(k);
        const std::string stem = pair_stem(pair.variable, pair.region);
        const Index len = pair.length();

        std::ostringstream signal;
        signal << "date,forced_min,forced_mean,forced_max,cf_min,cf_mean,cf_max\n";
        std::ostringstream diff;
        diff << "date,mean_diff,interval_mean,ci_low,ci_high\n";
        std::size_t interval_at = 0;
        for (Index d = 0; d < len; ++d) {
            Scalar fmin = pair.forced[0][d], fmax = fmin, fsum = 0.0;
            Scalar cmin = pair.counterfactual[0][d], cmax = cmin, csum = 0.0;
            for (int e = 0; e < pair.ensemble_size(); ++e) {
                const Scalar f = pair.forced[static_cast<std::size_t>(e)][d];
                const Scalar c = pair.counterfactual[static_cast<std::size_t>(e)][d];
                fmin = std::min(fmin, f);
                fmax = std::max(fmax, f);
                fsum += f;
                cmin = std::min(cmin, c);
                cmax = std::max(cmax, c);
                csum += c;
            }
            const Scalar fmean = fsum / pair.ensemble_size();
            const Scalar cmean = csum / pair.ensemble_size();
            const std::string date = (pair.start_date + static_cast<std::int32_t>(d)).to_string();
            signal << date << "," << fmt(fmin) << "," << fmt(fmean) << "," << fmt(fmax) << ","
                   << fmt(cmin) << "," << fmt(cmean) << "," << fmt(cmax) << "\n";

            while (interval_at + 1 < pr.impacts.size() &&
                   d + 1 > pr.impacts[interval_at].interval.end_index)
                ++interval_at;
            const auto& rec = pr.impacts[interval_at];
            diff << date << "," << fmt(fmean - cmean) << "," << fmt(rec.mean_diff) << ","
                 << fmt(rec.ci_low) << "," << fmt(rec.ci_high) << "\n";
        }
        write_text_file(dir / (stem + ".signal.csv"), signal.str(), hash);
        write_text_file(dir / (stem + ".difference.csv"), diff.str(), hash);

        std::ostringstream entropy;
        entropy << "window,midpoint_date,entropy,is_changepoint\n";
        for (Index i = 0; i < pr.entropy.size(); ++i) {
            const bool cp = std::find(pr.changepoints.begin(), pr.changepoints.end(),
                                      static_cast<int>(i + 1)) != pr.changepoints.end();
            entropy << (i + 1) << ","
                    << (pair.start_date +
                        static_cast<std::int32_t>(
                            pr.entropy.window_midpoints[static_cast<std::size_t>(i)] - 1))
                           .to_string()
                    << "," << fmt(pr.entropy.values[i]) << "," << (cp ? 1 : 0) << "\n";
        }
        write_text_file(dir / (stem + ".entropy.csv"), entropy.str(), hash);
    }

    // Granularity comparison and stability histogram for the pair holding
    // the configured final impact (first pair when absent).
    std::size_t focus = 0;
    for (std::size_t k = 0; k < pairs.size(); ++k)
        if (pairs[k].variable == cfg.final_impact.variable &&
            pairs[k].region == cfg.final_impact.region)
            focus = k;
    const auto& pair = pairs.at(focus);

    std::ostringstream gran;
    gran << "mode,variable,region,start_date,end_date,mean_diff,ci_low,ci_high,score\n";
    for (const Granularity mode :
         {Granularity::Daily, Granularity::Monthly, Granularity::Entropy}) {
        for (const auto& r :
             granularity_compare(pair, mode, cfg.entropy, cfg.changepoint, cfg.ci_level))
            gran << to_string(mode) << "," << r.variable << "," << r.region << ","
                 << r.interval.start_date.to_string() << "," << r.interval.end_date.to_string()
                 << "," << fmt(r.mean_diff) << "," << fmt(r.ci_low) << "," << fmt(r.ci_high)
                 << "," << fmt(r.score) << "\n";
    }
    write_text_file(dir / "granularity.csv", gran.str(), hash);

    std::ostringstream stab;
    stab << "time_index,date,count\n";
    for (const auto& [t, count] : stability_histogram(pair, cfg.entropy, cfg.changepoint))
        stab << t << "," << (pair.start_date + static_cast<std::int32_t>(t - 1)).to_string()
             << "," << count << "\n";
    write_text_file(dir / "stability.csv", stab.str(), hash);
}

}  // namespace impactpath
