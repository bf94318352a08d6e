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

#include "bbm/io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bbm/error.hpp"

namespace bbm {

using nlohmann::ordered_json;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCategory::missing_artifact, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json parse(const std::string& text, const std::string& source) {
    try {
        return ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw Error(ErrorCategory::format, source + ": " + e.what());
    }
}

// Wraps nlohmann type errors so callers see a format error with the source.
template <typename Fn>
auto guarded(const std::string& source, Fn&& fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCategory::format, source + ": " + e.what());
    }
}

ordered_json set_to_json(const NeuronSet& set, const Layout& layout) {
    ordered_json arr = ordered_json::array();
    for (const auto& id : layout.ids(set))
        arr.push_back(to_string(id));
    return arr;
}

NeuronSet set_from_json(const ordered_json& arr, const Layout& layout, const std::string& source) {
    NeuronSet set = layout.empty_set();
    for (const auto& v : arr) {
        const auto id = parse_neuron(v.get<std::string>());
        if (!layout.contains(id))
            throw Error(ErrorCategory::shape, source + ": neuron " + to_string(id) + " outside layout " +
                                                  layout.describe(layout.empty_set()));
        set.set(layout.flat(id));
    }
    return set;
}

ordered_json backbone_to_json(const Backbone& b, const Layout& layout) {
    ordered_json j;
    j["concept"] = to_string(b.concept_id);
    j["layout"] = layout.widths();
    j["max_minsup"] = b.max_minsup;
    ordered_json pats = ordered_json::array();
    for (const auto& p : b.patterns) {
        ordered_json pj;
        pj["neurons"] = set_to_json(p.neurons, layout);
        pj["count"] = p.count;
        pj["support"] = p.support;
        pj["weight"] = p.weight;
        pats.push_back(std::move(pj));
    }
    j["patterns"] = std::move(pats);
    return j;
}

Backbone backbone_from_json(const ordered_json& j, Layout& layout, const std::string& source) {
    Backbone b;
    b.concept_id = parse_concept(j.at("concept").get<std::string>());
    layout = Layout(j.at("layout").get<std::vector<std::size_t>>());
    b.max_minsup = j.at("max_minsup").get<double>();
    for (const auto& pj : j.at("patterns")) {
        Pattern p;
        p.neurons = set_from_json(pj.at("neurons"), layout, source);
        p.count = pj.value("count", std::size_t{0});
        p.support = pj.at("support").get<double>();
        p.weight = pj.at("weight").get<double>();
        p.complete = true;
        b.patterns.push_back(std::move(p));
    }
    return b;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCategory::io, "cannot write " + path.string());
    out << text;
    if (!out)
        throw Error(ErrorCategory::io, "write failed: " + path.string());
}

std::string net_to_json(const LayeredNet& net) {
    ordered_json j;
    j["input_dim"] = net.input_dim;
    j["hidden_widths"] = net.hidden_widths;
    j["output_dim"] = net.output_dim;
    j["activation"] = "relu";
    ordered_json weights = ordered_json::array();
    for (const auto& w : net.weights) {
        ordered_json m = ordered_json::array();
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            ordered_json row = ordered_json::array();
            for (Eigen::Index c = 0; c < w.cols(); ++c)
                row.push_back(w(r, c));
            m.push_back(std::move(row));
        }
        weights.push_back(std::move(m));
    }
    j["weights"] = std::move(weights);
    ordered_json biases = ordered_json::array();
    for (const auto& b : net.biases)
        biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
    j["biases"] = std::move(biases);
    return j.dump(1) + "\n";
}

LayeredNet net_from_json(const std::string& text, const std::string& source) {
    const auto j = parse(text, source);
    auto net = guarded(source, [&] {
        LayeredNet n;
        n.input_dim = j.at("input_dim").get<std::size_t>();
        n.hidden_widths = j.at("hidden_widths").get<std::vector<std::size_t>>();
        n.output_dim = j.at("output_dim").get<std::size_t>();
        const auto act = j.value("activation", std::string("relu"));
        if (act != "relu")
            throw Error(ErrorCategory::format, source + ": unsupported activation '" + act + "'");
        std::size_t l = 0;
        for (const auto& m : j.at("weights")) {
            const auto rows = m.size();
            const auto cols = rows ? m.at(0).size() : 0;
            Eigen::MatrixXd w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            for (std::size_t r = 0; r < rows; ++r) {
                if (m[r].size() != cols)
                    throw Error(ErrorCategory::shape, source + ": weights[" + std::to_string(l) + "] row " +
                                                          std::to_string(r) + " is ragged");
                for (std::size_t c = 0; c < cols; ++c)
                    w(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m[r][c].get<double>();
            }
            n.weights.push_back(std::move(w));
            ++l;
        }
        for (const auto& b : j.at("biases")) {
            const auto v = b.get<std::vector<double>>();
            n.biases.emplace_back(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
        }
        return n;
    });
    validate(net);
    return net;
}

void save_net(const std::filesystem::path& path, const LayeredNet& net) {
    write_text(path, net_to_json(net));
}

LayeredNet load_net(const std::filesystem::path& path) {
    return net_from_json(slurp(path), path.string());
}

void save_backbone(const std::filesystem::path& path, const Backbone& b, const Layout& layout) {
    write_text(path, backbone_to_json(b, layout).dump(1) + "\n");
}

Backbone load_backbone(const std::filesystem::path& path, Layout* layout) {
    const auto j = parse(slurp(path), path.string());
    Layout local;
    auto b = guarded(path.string(), [&] { return backbone_from_json(j, local, path.string()); });
    if (layout)
        *layout = local;
    return b;
}

void save_collective(const std::filesystem::path& path, const CollectiveBackbone& c, const Layout& layout) {
    ordered_json j;
    j["top_r"] = c.top_r;
    j["layout"] = layout.widths();
    ordered_json members = ordered_json::array();
    for (const auto& [id, b] : c.members)
        members.push_back(backbone_to_json(b, layout));
    j["members"] = std::move(members);
    write_text(path, j.dump(1) + "\n");
}

CollectiveBackbone load_collective(const std::filesystem::path& path, Layout* layout) {
    const auto source = path.string();
    const auto j = parse(slurp(path), source);
    return guarded(source, [&] {
        CollectiveBackbone c;
        c.top_r = j.at("top_r").get<std::size_t>();
        const Layout expected(j.at("layout").get<std::vector<std::size_t>>());
        for (const auto& mj : j.at("members")) {
            Layout got;
            auto b = backbone_from_json(mj, got, source);
            if (!(got == expected))
                throw Error(ErrorCategory::shape, source + ": member " + to_string(b.concept_id) +
                                                      " has a different layout");
            const auto id = b.concept_id;
            if (!c.members.emplace(id, std::move(b)).second)
                throw Error(ErrorCategory::format, source + ": duplicate member " + to_string(id));
        }
        if (layout)
            *layout = expected;
        return c;
    });
}

void write_eap_summary(std::ostream& out, const EapReport& r) {
    ordered_json j;
    j["instances"] = r.instances;
    j["mispredictions"] = r.mispredictions;
    j["flagged_true"] = r.flagged_true;
    j["flagged_false"] = r.flagged_false;
    j["corrected"] = r.corrected;
    j["fallbacks"] = r.fallbacks;
    j["low_confidence"] = r.low_confidence;
    j["network_accuracy"] = r.network_accuracy;
    j["backbone_accuracy"] = r.backbone_accuracy;
    j["eap_accuracy"] = r.eap_accuracy;
    j["flag_precision"] = r.flag_precision;
    j["flag_recall"] = r.flag_recall;
    out << j.dump(1) << "\n";
}

void write_eap_csv(std::ostream& out, const EapReport& report) {
    out << "id,label,net_pred,backbone_pred,flagged,corrected_pred\n";
    for (const auto& r : report.records)
        out << r.id << ',' << r.label << ',' << r.net_pred << ',' << r.backbone_pred << ',' << (r.flagged ? 1 : 0)
            << ',' << r.corrected_pred << '\n';
}

}  // namespace bbm
