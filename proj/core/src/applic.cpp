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

#include "bbm/applic.hpp"

#include <algorithm>

#include "bbm/error.hpp"
#include "bbm/parallel.hpp"

namespace bbm {

namespace {

bool contains(const Transaction& t, const NeuronSet& pattern) {
    return pattern.size() == t.size() && pattern.is_subset_of(t);
}

double containment(const Transaction& t, const Backbone& b) {
    double hit = 0.0;
    double total = 0.0;
    for (const auto& p : b.patterns) {
        total += p.weight;
        if (contains(t, p.neurons))
            hit += p.weight;
    }
    return total > 0.0 ? hit / total : 0.0;
}

double weighted_jaccard(const Transaction& t, const Backbone& b) {
    std::vector<double> w(t.size(), 0.0);
    for (const auto& p : b.patterns)
        for (auto f : members(p.neurons))
            w.at(f) = std::max(w.at(f), std::clamp(p.weight, 0.0, 1.0));
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t f = 0; f < w.size(); ++f) {
        const double x = t.test(f) ? 1.0 : 0.0;
        lo += std::min(x, w[f]);
        hi += std::max(x, w[f]);
    }
    return hi > 0.0 ? lo / hi : 0.0;
}

std::size_t raw_overlap(const Transaction& t, const Backbone& b) {
    auto n = b.neurons();
    if (n.size() != t.size())
        return 0;
    n &= t;
    return n.count();
}

}  // namespace

double similarity(const Transaction& t, const Backbone& b, SimilarityMeasure measure) {
    if (b.patterns.empty())
        return 0.0;
    return measure == SimilarityMeasure::containment ? containment(t, b) : weighted_jaccard(t, b);
}

BackbonePrediction predict_by_backbone(const Transaction& t, const CollectiveBackbone& collective,
                                       SimilarityMeasure measure) {
    bool any = false;
    BackbonePrediction best;
    std::size_t best_overlap = 0;
    for (const auto& [id, b] : collective.members) {
        if (id.kind != ConceptId::Kind::correct)
            continue;
        const double s = similarity(t, b, measure);
        const std::size_t o = raw_overlap(t, b);
        // map order visits classes ascending, so strict comparisons keep the lower class
        if (!any || s > best.similarity || (s == best.similarity && o > best_overlap)) {
            best.cls = id.cls;
            best.similarity = s;
            best_overlap = o;
        }
        any = true;
    }
    if (!any)
        throw Error(ErrorCategory::missing_artifact, "collective has no class-correct backbone");
    best.low_confidence = best.similarity == 0.0;
    return best;
}

FlagDecision flag_misprediction(const Transaction& t, std::size_t net_pred, const CollectiveBackbone& collective,
                                const FlagOptions& options) {
    FlagDecision d;
    d.backbone = predict_by_backbone(t, collective, options.measure);
    d.best_correct = d.backbone.similarity;
    if (d.backbone.cls == net_pred)
        return d;
    for (const auto& [id, b] : collective.members) {
        if (id.kind != ConceptId::Kind::incorrect)
            continue;
        const bool consult = options.gate == IncorrectGate::any_class ||
                             (options.gate == IncorrectGate::net_prediction && id.cls == net_pred) ||
                             (options.gate == IncorrectGate::backbone_prediction && id.cls == d.backbone.cls);
        if (consult)
            d.best_incorrect = std::max(d.best_incorrect, similarity(t, b, options.measure));
    }
    d.flagged = d.best_incorrect > 0.0 && d.best_incorrect >= d.best_correct;
    return d;
}

Correction correct_prediction(const Transaction& t, std::size_t net_pred, std::size_t num_classes,
                              const CollectiveBackbone& collective, SimilarityMeasure measure) {
    if (num_classes == 2)
        return {1 - std::min<std::size_t>(net_pred, 1), false};
    bool any = false;
    double best = 0.0;
    Correction c;
    for (const auto& [id, b] : collective.members) {
        if (id.kind != ConceptId::Kind::confusion || id.predicted != net_pred)
            continue;
        const double s = similarity(t, b, measure);
        if (!any || s > best) {
            best = s;
            c.cls = id.cls;
        }
        any = true;
    }
    if (any)
        return c;
    return {predict_by_backbone(t, collective, measure).cls, true};
}

void summarise(EapReport& report) {
    const auto records = std::move(report.records);
    report = EapReport{};
    report.records = std::move(records);
    std::size_t net_ok = 0;
    std::size_t bb_ok = 0;
    std::size_t eap_ok = 0;
    for (const auto& r : report.records) {
        const bool wrong = r.net_pred != r.label;
        report.mispredictions += wrong;
        net_ok += !wrong;
        bb_ok += r.backbone_pred == r.label;
        report.low_confidence += r.low_confidence;
        eap_ok += r.corrected_pred == r.label;
        if (r.flagged) {
            (wrong ? report.flagged_true : report.flagged_false) += 1;
            report.corrected += r.corrected_pred == r.label;
            report.fallbacks += r.fallback;
        }
    }
    report.instances = report.records.size();
    if (report.instances == 0)
        return;
    const auto n = static_cast<double>(report.instances);
    report.network_accuracy = static_cast<double>(net_ok) / n;
    report.backbone_accuracy = static_cast<double>(bb_ok) / n;
    report.eap_accuracy = static_cast<double>(eap_ok) / n;
    const auto flagged = report.flagged_true + report.flagged_false;
    if (flagged > 0)
        report.flag_precision = static_cast<double>(report.flagged_true) / static_cast<double>(flagged);
    if (report.mispredictions > 0)
        report.flag_recall = static_cast<double>(report.flagged_true) / static_cast<double>(report.mispredictions);
}

EapReport eap_evaluate(const LayeredNet& net, const LabeledDataset& data, const CollectiveBackbone& collective,
                       const FlagOptions& options, std::size_t threads) {
    if (data.empty())
        throw Error(ErrorCategory::usage, "empty evaluation set");
    const auto tx = extract_transactions(net, data, collective.top_r, threads);
    EapReport report;
    report.records.resize(tx.size());
    parallel_for(tx.size(), threads, [&](std::size_t i) {
        auto& rec = report.records[i];
        rec.id = i;
        rec.label = tx[i].label;
        rec.net_pred = tx[i].predicted;
        const auto d = flag_misprediction(tx[i].transaction, rec.net_pred, collective, options);
        rec.backbone_pred = d.backbone.cls;
        rec.low_confidence = d.backbone.low_confidence;
        rec.flagged = d.flagged;
        rec.corrected_pred = rec.net_pred;
        if (d.flagged) {
            const auto c = correct_prediction(tx[i].transaction, rec.net_pred, net.output_dim, collective,
                                              options.measure);
            rec.corrected_pred = c.cls;
            rec.fallback = c.fallback;
        }
    });
    summarise(report);
    return report;
}

}  // namespace bbm
