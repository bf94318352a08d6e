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


#pragma once

#include <cstddef>
#include <vector>

#include "bbm/backbone.hpp"
#include "bbm/dataset.hpp"
#include "bbm/netcore.hpp"
#include "bbm/transact.hpp"

namespace bbm {

enum class SimilarityMeasure {
    containment,       // weight of contained patterns over total weight
    weighted_jaccard,  // neuron level, each neuron weighted by its best pattern
};

/// In [0, 1]; 1 iff every pattern of `b` lies inside `t` (containment).
double similarity(const Transaction& t, const Backbone& b,
                  SimilarityMeasure measure = SimilarityMeasure::containment);

struct BackbonePrediction {
    std::size_t cls = 0;
    double similarity = 0.0;
    bool low_confidence = false;  // every class-correct similarity was 0
};

/// Argmax similarity over the class-correct members; ties go to the larger
/// raw neuron overlap, then to the lower class. Throws Error(missing-artifact)
/// if there is no class-correct member.
BackbonePrediction predict_by_backbone(const Transaction& t, const CollectiveBackbone& collective,
                                       SimilarityMeasure measure = SimilarityMeasure::containment);

/// Which class-incorrect backbones the second flagging question consults.
/// Incorrect concepts are keyed by true label.
enum class IncorrectGate {
    net_prediction,       // incorrect(net_pred)
    backbone_prediction,  // incorrect(backbone prediction)
    any_class,            // best over all incorrect members
};

struct FlagOptions {
    SimilarityMeasure measure = SimilarityMeasure::containment;
    IncorrectGate gate = IncorrectGate::backbone_prediction;
};

struct FlagDecision {
    bool flagged = false;
    BackbonePrediction backbone;
    double best_correct = 0.0;
    double best_incorrect = 0.0;  // 0 when no incorrect member was consulted
};

/// Flags when the class-correct backbones disagree with the network and the
/// consulted incorrect backbone matches at least as well (and above zero).
FlagDecision flag_misprediction(const Transaction& t, std::size_t net_pred, const CollectiveBackbone& collective,
                                const FlagOptions& options = {});

struct Correction {
    std::size_t cls = 0;
    bool fallback = false;  // no confusion backbone decided it
};

/// Binary: swap. Multiclass: true class x of the most similar
/// confusion(x->net_pred) member, else the backbone predictor.
Correction correct_prediction(const Transaction& t, std::size_t net_pred, std::size_t num_classes,
                              const CollectiveBackbone& collective,
                              SimilarityMeasure measure = SimilarityMeasure::containment);

struct EapRecord {
    std::size_t id = 0;
    std::size_t label = 0;
    std::size_t net_pred = 0;
    std::size_t backbone_pred = 0;
    bool low_confidence = false;
    bool flagged = false;
    std::size_t corrected_pred = 0;  // final pipeline output
    bool fallback = false;
};

struct EapReport {
    std::size_t instances = 0;
    std::size_t mispredictions = 0;
    std::size_t flagged_true = 0;   // flagged and the network was wrong
    std::size_t flagged_false = 0;  // flagged although the network was right
    std::size_t corrected = 0;      // flagged and fixed
    std::size_t fallbacks = 0;
    std::size_t low_confidence = 0;
    double network_accuracy = 0.0;
    double backbone_accuracy = 0.0;
    double eap_accuracy = 0.0;
    double flag_precision = 0.0;  // 0 when nothing is flagged
    double flag_recall = 0.0;     // 0 when there are no mispredictions
    std::vector<EapRecord> records;
};

/// The whole flag-and-correct pipeline over `data`, which must not overlap
/// the data the collective was built from. Transactions use the collective's
/// top_r. Throws Error(usage) on an empty set.
EapReport eap_evaluate(const LayeredNet& net, const LabeledDataset& data, const CollectiveBackbone& collective,
                       const FlagOptions& options = {}, std::size_t threads = 1);

/// Recomputes the summary counts of `report` from its records.
void summarise(EapReport& report);

}  // namespace bbm
