/*
Copyright 2026 The bbm Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "bbm/applic.hpp"
#include "bbm/backbone.hpp"
#include "bbm/error.hpp"
#include "bbm/io.hpp"
#include "bbm/netcore.hpp"
#include "bbm/oracle.hpp"
#include "bbm/transact.hpp"
#include "bbm/viz.hpp"
#include "common.hpp"

namespace bbm::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string fmt(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string dump(const ordered_json& j) {
    return j.dump(1) + "\n";
}

ordered_json neurons_json(const NeuronSet& set, const Layout& layout) {
    ordered_json arr = ordered_json::array();
    for (const auto& id : layout.ids(set))
        arr.push_back(to_string(id));
    return arr;
}

std::map<ConceptId, std::size_t> parse_caps(const std::vector<std::string>& items, const char* flag) {
    std::map<ConceptId, std::size_t> caps;
    for (const auto& item : items) {
        const auto eq = item.rfind('=');
        if (eq == std::string::npos)
            throw Error(ErrorCategory::usage, std::string(flag) + " expects concept=count, got '" + item + "'");
        const auto values = parse_size_list(item.substr(eq + 1));
        if (values.size() != 1)
            throw Error(ErrorCategory::usage, std::string(flag) + " expects a single count in '" + item + "'");
        caps[parse_concept(item.substr(0, eq))] = values[0];
    }
    return caps;
}

SimilarityMeasure parse_measure(const std::string& s) {
    return s == "jaccard" ? SimilarityMeasure::weighted_jaccard : SimilarityMeasure::containment;
}

IncorrectGate parse_gate(const std::string& s) {
    if (s == "net")
        return IncorrectGate::net_prediction;
    if (s == "any")
        return IncorrectGate::any_class;
    return IncorrectGate::backbone_prediction;
}

TableMap gather_tables(const std::string& dir, const std::vector<std::string>& files) {
    TableMap tables;
    if (!dir.empty())
        tables = load_table_dir(dir);
    for (const auto& f : files) {
        auto t = load_table(f);
        const auto id = t.concept_id;
        tables.insert_or_assign(id, std::move(t));
    }
    if (tables.empty())
        throw Error(ErrorCategory::usage, "give --tables DIR or at least one --table FILE");
    return tables;
}

// train ----------------------------------------------------------------------

struct TrainArgs {
    DataOptions data;
    std::string hidden = "64,32";
    TrainOptions train;
    std::string out;
};

void run_train(const TrainArgs& a) {
    const auto data = load_data(a.data);
    TrainOptions opt = a.train;
    opt.hidden_widths = parse_size_list(a.hidden);
    const auto net = train_mlp(data, opt);
    save_net(a.out, net);
    std::cout << "instances=" << data.size() << " train_accuracy=" << fmt(accuracy(net, data));
    if (a.data.folds > 0 && a.data.part == "train") {
        auto held_opts = a.data;
        held_opts.part = "test";
        const auto held = load_data(held_opts);
        if (!held.empty())
            std::cout << " test_accuracy=" << fmt(accuracy(net, held));
    }
    std::cout << " weights=" << a.out << '\n';
}

// extract --------------------------------------------------------------------

struct ExtractArgs {
    DataOptions data;
    std::string net;
    std::size_t r = kDefaultTopR;
    std::string influence = "outgoing";
    std::string out_dir;
};

void run_extract(const ExtractArgs& a, std::size_t threads) {
    require_file(a.net, "weights");
    const auto net = load_net(a.net);
    const auto data = load_data(a.data);
    if (data.empty())
        throw Error(ErrorCategory::usage, "no instances selected");
    const auto mode = a.influence == "incoming" ? InfluenceMode::incoming : InfluenceMode::outgoing;
    const auto tables = build_tables(net, data, a.r, threads, mode);
    fs::create_directories(a.out_dir);
    for (const auto& [id, t] : tables) {
        save_table(fs::path(a.out_dir) / (concept_stem(id) + ".csv"), t);
        std::cout << to_string(id) << " rows=" << t.size() << '\n';
    }
    ordered_json meta;
    meta["top_r"] = a.r;
    meta["influence"] = a.influence;
    meta["instances"] = data.size();
    write_text(fs::path(a.out_dir) / "meta.json", dump(meta));
}

// mine -----------------------------------------------------------------------

struct MineArgs {
    std::string net;
    std::string tables;
    std::vector<std::string> table_files;
    std::vector<std::string> concepts;
    std::size_t r = 0;
    FscoreOptions fscore;
    std::string out_dir;
};

std::size_t table_top_r(const std::string& dir) {
    const auto meta = fs::path(dir) / "meta.json";
    if (dir.empty() || !fs::exists(meta))
        return kDefaultTopR;
    std::ifstream in(meta);
    try {
        return ordered_json::parse(in).at("top_r").get<std::size_t>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCategory::format, meta.string() + ": " + e.what());
    }
}

void write_trace(const fs::path& path, const FscoreRun& run) {
    std::ostringstream out;
    out << "iteration,min_count,minsup,patterns,tp,fp,fn,f,coverage,returned\n";
    for (std::size_t i = 0; i < run.trace.size(); ++i) {
        const auto& t = run.trace[i];
        out << i << ',' << t.min_count << ',' << fmt(t.minsup, 9) << ',' << t.patterns << ','
            << fmt(t.incremental.tp, 12) << ',' << fmt(t.incremental.fp, 12) << ',' << fmt(t.incremental.fn, 12)
            << ',' << fmt(t.incremental.f, 9) << ',' << fmt(t.coverage, 9) << ','
            << (i == run.returned_iteration ? 1 : 0) << '\n';
    }
    write_text(path, out.str());
}

void run_mine(const MineArgs& a, std::size_t threads) {
    require_file(a.net, "weights");
    const auto net = load_net(a.net);
    auto tables = gather_tables(a.tables, a.table_files);
    if (!a.concepts.empty()) {
        TableMap keep;
        for (const auto& c : a.concepts) {
            const auto id = parse_concept(c);
            auto it = tables.find(id);
            if (it == tables.end())
                throw Error(ErrorCategory::missing_artifact, "no table for concept " + c);
            keep.emplace(id, it->second);
        }
        tables = std::move(keep);
    }
    const auto layout = net.layout();
    auto result = build_collective(tables, net, a.fscore, threads);
    result.collective.top_r = a.r > 0 ? a.r : table_top_r(a.tables);

    fs::create_directories(a.out_dir);
    ordered_json manifest;
    manifest["net"] = fs::absolute(a.net).string();
    manifest["top_r"] = result.collective.top_r;
    manifest["lambda"] = a.fscore.lambda;
    ordered_json tables_json = ordered_json::object();
    for (const auto& [id, t] : tables) {
        const auto stem = concept_stem(id);
        auto it = result.runs.find(id);
        if (it == result.runs.end()) {
            std::cerr << "warning: " << to_string(id) << ": " << result.errors.at(id) << '\n';
            continue;
        }
        const auto& run = it->second;
        save_backbone(fs::path(a.out_dir) / (stem + ".json"), run.backbone, layout);
        write_trace(fs::path(a.out_dir) / (stem + ".trace.csv"), run);
        const auto table_path = fs::path(a.out_dir) / "tables" / (stem + ".csv");
        fs::create_directories(table_path.parent_path());
        save_table(table_path, t);
        tables_json[to_string(id)] = "tables/" + stem + ".csv";
        std::cout << to_string(id) << " max_minsup=" << fmt(run.backbone.max_minsup)
                  << " patterns=" << run.backbone.patterns.size() << " neurons=" << run.backbone.neurons().count()
                  << " coverage=" << fmt(coverage(run.backbone, t))
                  << (run.coverage_shortfall ? " coverage_shortfall" : "") << '\n';
    }
    manifest["tables"] = std::move(tables_json);
    save_collective(fs::path(a.out_dir) / "collective.json", result.collective, layout);
    write_text(fs::path(a.out_dir) / "manifest.json", dump(manifest));

    std::ostringstream ov;
    ov << "concept";
    for (const auto& id : result.order)
        ov << ',' << to_string(id);
    ov << '\n';
    for (std::size_t i = 0; i < result.order.size(); ++i) {
        ov << to_string(result.order[i]);
        for (double v : result.overlap_matrix[i])
            ov << ',' << fmt(v, 9);
        ov << '\n';
    }
    write_text(fs::path(a.out_dir) / "overlap.csv", ov.str());

    if (result.collective.members.empty()) {
        const auto& [id, msg] = *result.errors.begin();
        throw Error(ErrorCategory::structural, "no backbone could be built; first failure " + to_string(id) + ": " + msg);
    }
}

// oracle ---------------------------------------------------------------------

struct OracleArgs {
    std::string net;
    std::string tables;
    std::vector<std::string> table_files;
    std::string cnf;
    std::size_t p1 = 0;
    std::size_t p2 = 0;
    std::vector<std::string> delta;
    std::vector<std::string> gamma;
    std::size_t max_universe = OracleLimits{}.max_universe;
    bool front = false;
    std::string out;
};

void emit(const std::string& out, const ordered_json& j) {
    if (out.empty())
        std::cout << dump(j);
    else
        write_text(out, dump(j));
}

void run_oracle_cnf(const OracleArgs& a) {
    require_file(a.cnf, "CNF file");
    std::ifstream in(a.cnf);
    const auto cnf = parse_dimacs(in);
    const auto inst = from_3sat(cnf);
    const auto sel = solve_strict(inst, OracleLimits{.max_universe = std::max<std::size_t>(a.max_universe, 24)});
    ordered_json j;
    j["variables"] = cnf.num_vars;
    j["clauses"] = cnf.clauses.size();
    j["feasible"] = sel.has_value();
    if (sel) {
        ordered_json assignment = ordered_json::array();
        for (std::size_t v = 1; v <= cnf.num_vars; ++v) {
            // a_v chosen for the clause side means x_v is true
            const auto& side = sel->tags[1];
            assignment.push_back(std::find(side.begin(), side.end(), v - 1) != side.end());
        }
        j["assignment"] = std::move(assignment);
        for (std::size_t c = 0; c < 2; ++c) {
            ordered_json names = ordered_json::array();
            for (auto t : sel->tags[c])
                names.push_back(inst.tags[t]);
            j[c == 0 ? "tags_variables" : "tags_clauses"] = std::move(names);
        }
    }
    emit(a.out, j);
    if (!sel)
        throw Error(ErrorCategory::infeasible, "formula is unsatisfiable; no tag selection exists");
}

void run_oracle(const OracleArgs& a) {
    if (!a.cnf.empty())
        return run_oracle_cnf(a);
    require_file(a.net, "weights");
    const auto net = load_net(a.net);
    const auto layout = net.layout();
    const auto tables = gather_tables(a.tables, a.table_files);
    const OracleLimits limits{.max_universe = a.max_universe};

    ordered_json j;
    if (a.front) {
        ordered_json fronts = ordered_json::object();
        for (const auto& [id, t] : tables) {
            ordered_json arr = ordered_json::array();
            for (const auto& e : pareto_front(t, net, limits)) {
                ordered_json pj;
                pj["size"] = e.point.size;
                pj["uncovered"] = e.point.coverage_slack;
                pj["trivial"] = e.trivial;
                pj["witness"] = neurons_json(e.witness, layout);
                arr.push_back(std::move(pj));
            }
            fronts[to_string(id)] = std::move(arr);
        }
        j["fronts"] = std::move(fronts);
        return emit(a.out, j);
    }

    RelaxationBudget budget;
    budget.p1 = a.p1;
    budget.p2 = a.p2;
    budget.delta = parse_caps(a.delta, "--delta");
    budget.gamma = parse_caps(a.gamma, "--gamma");
    const bool strict = budget.p1 == 0 && budget.p2 == 0 && budget.delta.empty() && budget.gamma.empty();
    const auto sol = strict ? solve_strict(tables, net, limits) : solve_relaxed(tables, net, budget, limits);
    j["mode"] = strict ? "strict" : "relaxed";
    j["feasible"] = sol.feasible;
    if (sol.feasible) {
        j["size"] = sol.point.size;
        j["forgotten"] = sol.point.coverage_slack;
        j["overlap"] = sol.point.overlap;
        ordered_json bj = ordered_json::object();
        for (const auto& [id, set] : sol.backbones) {
            ordered_json e;
            e["neurons"] = neurons_json(set, layout);
            e["forgotten"] = sol.forgotten.at(id);
            bj[to_string(id)] = std::move(e);
        }
        j["backbones"] = std::move(bj);
    }
    emit(a.out, j);
    if (!sol.feasible)
        throw Error(ErrorCategory::infeasible, std::string(strict ? "strict" : "relaxed") +
                                                   " formulation has no solution within the given budget");
}

// predict / eap ----------------------------------------------------------------

struct PredictArgs {
    DataOptions data;
    std::string net;
    std::string collective;
    std::string measure = "containment";
    std::string out;
};

void run_predict(const PredictArgs& a, std::size_t threads) {
    require_file(a.net, "weights");
    require_file(a.collective, "collective backbone");
    const auto net = load_net(a.net);
    const auto collective = load_collective(a.collective);
    const auto data = load_data(a.data);
    if (data.empty())
        throw Error(ErrorCategory::usage, "no instances selected");
    const auto records = extract_transactions(net, data, collective.top_r, threads);
    std::ostringstream out;
    out << "id,label,net_pred,backbone_pred,similarity,low_confidence\n";
    std::size_t net_ok = 0;
    std::size_t bb_ok = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto p = predict_by_backbone(records[i].transaction, collective, parse_measure(a.measure));
        net_ok += records[i].predicted == records[i].label;
        bb_ok += p.cls == records[i].label;
        out << i << ',' << records[i].label << ',' << records[i].predicted << ',' << p.cls << ','
            << fmt(p.similarity, 9) << ',' << (p.low_confidence ? 1 : 0) << '\n';
    }
    if (!a.out.empty())
        write_text(a.out, out.str());
    const auto n = static_cast<double>(records.size());
    std::cout << "instances=" << records.size() << " network_accuracy=" << fmt(static_cast<double>(net_ok) / n)
              << " backbone_accuracy=" << fmt(static_cast<double>(bb_ok) / n) << '\n';
}

struct EapArgs {
    DataOptions data;
    std::string net;
    std::string collective;
    std::string measure = "containment";
    std::string gate = "backbone";
    std::string out_dir;
};

void run_eap(const EapArgs& a, std::size_t threads) {
    require_file(a.net, "weights");
    require_file(a.collective, "collective backbone");
    const auto net = load_net(a.net);
    const auto collective = load_collective(a.collective);
    const auto data = load_data(a.data);
    FlagOptions flags;
    flags.measure = parse_measure(a.measure);
    flags.gate = parse_gate(a.gate);
    const auto report = eap_evaluate(net, data, collective, flags, threads);
    std::ostringstream summary;
    write_eap_summary(summary, report);
    std::ostringstream records;
    write_eap_csv(records, report);
    if (!a.out_dir.empty()) {
        write_text(fs::path(a.out_dir) / "eap_summary.json", summary.str());
        write_text(fs::path(a.out_dir) / "eap_records.csv", records.str());
    }
    std::cout << summary.str();
}

// viz ------------------------------------------------------------------------

struct VizArgs {
    DataOptions data;
    std::string net;
    std::string collective;
    std::string backbone;
    std::string concept_name;
    double fraction = 0.4;
    std::string shape;
    PsoConfig pso;
    bool per_pattern = false;
    std::string out_dir;
};

std::pair<std::size_t, std::size_t> image_shape(const std::string& text, std::size_t dim) {
    if (text.empty()) {
        const auto side = static_cast<std::size_t>(std::lround(std::sqrt(static_cast<double>(dim))));
        if (side * side != dim)
            throw Error(ErrorCategory::usage, "input dimension " + std::to_string(dim) + " is not square; give --shape");
        return {side, side};
    }
    const auto x = text.find('x');
    const auto h = parse_size_list(text.substr(0, x));
    const auto w = x == std::string::npos ? std::vector<std::size_t>{} : parse_size_list(text.substr(x + 1));
    if (h.size() != 1 || w.size() != 1)
        throw Error(ErrorCategory::usage, "--shape expects HxW, got '" + text + "'");
    if (h[0] * w[0] != dim)
        throw Error(ErrorCategory::shape, "--shape " + text + " does not hold " + std::to_string(dim) + " inputs");
    return {h[0], w[0]};
}

void run_viz(const VizArgs& a, std::size_t threads) {
    require_file(a.net, "weights");
    const auto net = load_net(a.net);
    Backbone backbone;
    if (!a.backbone.empty()) {
        require_file(a.backbone, "backbone");
        backbone = load_backbone(a.backbone);
    } else {
        require_file(a.collective, "collective backbone");
        if (a.concept_name.empty())
            throw Error(ErrorCategory::usage, "--concept is required with --collective");
        const auto c = load_collective(a.collective);
        const auto id = parse_concept(a.concept_name);
        auto it = c.members.find(id);
        if (it == c.members.end())
            throw Error(ErrorCategory::missing_artifact, "collective has no member " + a.concept_name);
        backbone = it->second;
    }
    const auto [h, w] = image_shape(a.shape, net.input_dim);
    Whitelist wl = full_whitelist(net.input_dim);
    if (!a.data.csv.empty() || !a.data.images.empty())
        wl = pixel_whitelist(load_data(a.data), backbone.concept_id.cls, a.fraction);

    fs::create_directories(a.out_dir);
    const auto stem = concept_stem(backbone.concept_id);
    std::ostringstream log;
    log << "image,patterns,distance\n";
    const auto result = pso_maximize(net, backbone, wl, a.pso, threads);
    const auto name = render_name(backbone.concept_id);
    render(result.x, h, w, fs::path(a.out_dir) / name);
    log << name << ",all," << fmt(result.distance, 9) << '\n';
    std::cout << name << " distance=" << fmt(result.distance) << '\n';

    std::ostringstream trace;
    trace << "iteration,best_distance\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i)
        trace << i << ',' << fmt(result.trace[i], 12) << '\n';
    write_text(fs::path(a.out_dir) / (stem + ".trace.csv"), trace.str());

    if (a.per_pattern) {
        for (std::size_t p = 0; p < backbone.patterns.size(); ++p) {
            Backbone single = backbone;
            single.patterns = {backbone.patterns[p]};
            single.patterns[0].weight = 1.0;
            const auto r = pso_maximize(net, single, wl, a.pso, threads);
            const auto pname = render_name(backbone.concept_id, p, backbone.patterns[p].support);
            render(r.x, h, w, fs::path(a.out_dir) / pname);
            log << pname << ',' << p << ',' << fmt(r.distance, 9) << '\n';
        }
    }
    write_text(fs::path(a.out_dir) / (stem + ".renders.csv"), log.str());
}

// report ---------------------------------------------------------------------

struct ReportArgs {
    std::vector<std::string> runs;
    std::string out_dir;
};

struct RunData {
    CollectiveBackbone collective;
    TableMap tables;
};

RunData load_run(const fs::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    require_file(manifest_path, "mine manifest");
    require_file(dir / "collective.json", "collective backbone");
    RunData run;
    run.collective = load_collective(dir / "collective.json");
    std::ifstream in(manifest_path);
    ordered_json manifest;
    try {
        manifest = ordered_json::parse(in);
        for (const auto& [key, value] : manifest.at("tables").items()) {
            const auto path = dir / value.get<std::string>();
            require_file(path, "table");
            run.tables.emplace(parse_concept(key), load_table(path));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCategory::format, manifest_path.string() + ": " + e.what());
    }
    return run;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const auto n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void run_report(const ReportArgs& a) {
    std::vector<RunData> runs;
    for (const auto& r : a.runs)
        runs.push_back(load_run(r));

    // (concept, step) -> values across runs
    std::map<std::pair<ConceptId, std::size_t>, std::vector<double>> cov_by_step;
    std::map<std::pair<ConceptId, std::size_t>, std::vector<double>> ov_by_step;
    std::ostringstream rows;
    rows << "run,concept,patterns_added,coverage,overlap\n";
    for (std::size_t ri = 0; ri < runs.size(); ++ri) {
        const auto& run = runs[ri];
        std::size_t steps = 0;
        for (const auto& [id, b] : run.collective.members)
            steps = std::max(steps, b.patterns.size());
        for (std::size_t k = 1; k <= steps; ++k) {
            std::vector<Backbone> prefix;
            for (const auto& [id, b] : run.collective.members) {
                Backbone p = b;
                p.patterns.resize(std::min(k, b.patterns.size()));
                prefix.push_back(std::move(p));
            }
            const double ov = prefix.size() > 1 ? overlap(prefix) : 0.0;
            for (const auto& p : prefix) {
                auto t = run.tables.find(p.concept_id);
                if (t == run.tables.end())
                    throw Error(ErrorCategory::missing_artifact, "run " + a.runs[ri] + " has no table for " +
                                                                     to_string(p.concept_id));
                const double cov = coverage(p, t->second);
                rows << ri << ',' << to_string(p.concept_id) << ',' << k << ',' << fmt(cov, 9) << ','
                     << fmt(ov, 9) << '\n';
                cov_by_step[{p.concept_id, k}].push_back(cov);
                ov_by_step[{p.concept_id, k}].push_back(ov);
            }
        }
    }
    std::ostringstream summary;
    summary << "concept,patterns_added,runs,coverage_min,coverage_median,coverage_max,overlap_min,overlap_median,"
               "overlap_max\n";
    for (const auto& [key, cov] : cov_by_step) {
        const auto& ov = ov_by_step.at(key);
        summary << to_string(key.first) << ',' << key.second << ',' << cov.size() << ','
                << fmt(*std::min_element(cov.begin(), cov.end()), 9) << ',' << fmt(median(cov), 9) << ','
                << fmt(*std::max_element(cov.begin(), cov.end()), 9) << ','
                << fmt(*std::min_element(ov.begin(), ov.end()), 9) << ',' << fmt(median(ov), 9) << ','
                << fmt(*std::max_element(ov.begin(), ov.end()), 9) << '\n';
    }
    write_text(fs::path(a.out_dir) / "report.csv", rows.str());
    write_text(fs::path(a.out_dir) / "summary.csv", summary.str());
    std::cout << "runs=" << runs.size() << " report=" << (fs::path(a.out_dir) / "report.csv").string() << '\n';
}

}  // namespace

void add_train(CLI::App& app, const GlobalOptions&) {
    auto a = std::make_shared<TrainArgs>();
    auto* cmd = app.add_subcommand("train", "train a rectifier MLP");
    add_data_options(*cmd, a->data, "train");
    cmd->add_option("--hidden", a->hidden, "hidden widths, e.g. 64,32 (at least two layers)")->capture_default_str();
    cmd->add_option("--epochs", a->train.epochs)->capture_default_str();
    cmd->add_option("--lr", a->train.learning_rate, "learning rate")->capture_default_str();
    cmd->add_option("--batch", a->train.batch_size)->capture_default_str();
    cmd->add_option("--seed", a->train.seed)->capture_default_str();
    cmd->add_option("--out", a->out, "weight file to write")->required();
    cmd->callback([a] { run_train(*a); });
}

void add_extract(CLI::App& app, const GlobalOptions& global) {
    auto a = std::make_shared<ExtractArgs>();
    auto* cmd = app.add_subcommand("extract", "build per-concept transaction tables");
    add_data_options(*cmd, a->data, "train");
    cmd->add_option("--net", a->net, "weight file")->required();
    cmd->add_option("-r,--top-r", a->r, "most influential neurons kept per layer")->capture_default_str();
    cmd->add_option("--influence", a->influence)
        ->check(CLI::IsMember({"outgoing", "incoming"}))
        ->capture_default_str();
    cmd->add_option("--out-dir", a->out_dir)->required();
    cmd->callback([a, &global] { run_extract(*a, resolve_threads(global.threads)); });
}

void add_mine(CLI::App& app, const GlobalOptions& global) {
    auto a = std::make_shared<MineArgs>();
    auto* cmd = app.add_subcommand("mine", "build concept backbones from tables");
    cmd->add_option("--net", a->net, "weight file")->required();
    cmd->add_option("--tables", a->tables, "directory written by extract");
    cmd->add_option("--table", a->table_files, "single table file (repeatable)");
    cmd->add_option("--concept", a->concepts, "restrict to these concepts (repeatable)");
    cmd->add_option("-r,--top-r", a->r, "recorded in the collective (default: tables/meta.json, else 5)");
    cmd->add_option("--lambda", a->fscore.lambda, "minimum coverage of each backbone")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--cap", a->fscore.candidate_cap, "search-node cap per mining call")->capture_default_str();
    cmd->add_option("--out-dir", a->out_dir)->required();
    cmd->callback([a, &global] { run_mine(*a, resolve_threads(global.threads)); });
}

void add_oracle(CLI::App& app, const GlobalOptions&) {
    auto a = std::make_shared<OracleArgs>();
    auto* cmd = app.add_subcommand("oracle", "exact backbone search for small networks, or a 3SAT instance");
    cmd->add_option("--net", a->net, "weight file");
    cmd->add_option("--tables", a->tables, "table directory");
    cmd->add_option("--table", a->table_files, "single table file (repeatable)");
    cmd->add_option("--cnf", a->cnf, "DIMACS 3-CNF file: decide the tag-selection instance instead");
    cmd->add_option("--p1", a->p1, "total rows that may be left uncovered")->capture_default_str();
    cmd->add_option("--p2", a->p2, "total pairwise shared neurons allowed")->capture_default_str();
    cmd->add_option("--delta", a->delta, "per-concept forgotten-row cap, concept=count (repeatable)");
    cmd->add_option("--gamma", a->gamma, "per-concept shared-neuron cap, concept=count (repeatable)");
    cmd->add_option("--max-universe", a->max_universe, "refuse larger hidden universes")->capture_default_str();
    cmd->add_flag("--front", a->front, "print the size/coverage Pareto front of each table instead");
    cmd->add_option("--out", a->out, "write the JSON result here instead of stdout");
    cmd->callback([a] {
        if (a->cnf.empty() && a->net.empty())
            throw Error(ErrorCategory::usage, "oracle needs --net with tables, or --cnf");
        run_oracle(*a);
    });
}

void add_predict(CLI::App& app, const GlobalOptions& global) {
    auto a = std::make_shared<PredictArgs>();
    auto* cmd = app.add_subcommand("predict", "classify instances by their closest class-correct backbone");
    add_data_options(*cmd, a->data, "test");
    cmd->add_option("--net", a->net)->required();
    cmd->add_option("--collective", a->collective, "collective.json written by mine")->required();
    cmd->add_option("--measure", a->measure)
        ->check(CLI::IsMember({"containment", "jaccard"}))
        ->capture_default_str();
    cmd->add_option("--out", a->out, "per-instance CSV");
    cmd->callback([a, &global] { run_predict(*a, resolve_threads(global.threads)); });
}

void add_eap(CLI::App& app, const GlobalOptions& global) {
    auto a = std::make_shared<EapArgs>();
    auto* cmd = app.add_subcommand("eap", "flag and correct likely mispredictions");
    add_data_options(*cmd, a->data, "test");
    cmd->add_option("--net", a->net)->required();
    cmd->add_option("--collective", a->collective)->required();
    cmd->add_option("--measure", a->measure)
        ->check(CLI::IsMember({"containment", "jaccard"}))
        ->capture_default_str();
    cmd->add_option("--gate", a->gate, "incorrect backbones consulted: backbone, net or any")
        ->check(CLI::IsMember({"backbone", "net", "any"}))
        ->capture_default_str();
    cmd->add_option("--out-dir", a->out_dir);
    cmd->callback([a, &global] { run_eap(*a, resolve_threads(global.threads)); });
}

void add_viz(CLI::App& app, const GlobalOptions& global) {
    auto a = std::make_shared<VizArgs>();
    auto* cmd = app.add_subcommand("viz", "render virtual inputs for a backbone");
    add_data_options(*cmd, a->data, "train");
    cmd->add_option("--net", a->net)->required();
    cmd->add_option("--collective", a->collective);
    cmd->add_option("--backbone", a->backbone, "single backbone file");
    cmd->add_option("--concept", a->concept_name, "member of --collective, e.g. correct:0");
    cmd->add_option("--fraction", a->fraction, "pixel whitelist fraction (needs data)")->capture_default_str();
    cmd->add_option("--shape", a->shape, "image HxW (default: square)");
    cmd->add_option("--swarm", a->pso.swarm_size)->capture_default_str();
    cmd->add_option("--iterations", a->pso.iterations)->capture_default_str();
    cmd->add_option("--inertia", a->pso.inertia)->capture_default_str();
    cmd->add_option("--cognitive", a->pso.cognitive)->capture_default_str();
    cmd->add_option("--social", a->pso.social)->capture_default_str();
    cmd->add_option("--seed", a->pso.seed)->capture_default_str();
    cmd->add_flag("--per-pattern", a->per_pattern, "also render one image per pattern");
    cmd->add_option("--out-dir", a->out_dir)->required();
    cmd->callback([a, &global] { run_viz(*a, resolve_threads(global.threads)); });
}

void add_report(CLI::App& app, const GlobalOptions&) {
    auto a = std::make_shared<ReportArgs>();
    auto* cmd = app.add_subcommand("report", "coverage and overlap per added pattern, across runs");
    cmd->add_option("--run", a->runs, "output directory of mine (repeat once per fold)")->required();
    cmd->add_option("--out-dir", a->out_dir)->required();
    cmd->callback([a] { run_report(*a); });
}

}  // namespace bbm::cli
