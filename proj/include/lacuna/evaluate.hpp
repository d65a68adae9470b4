#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lacuna/dataset.hpp"
#include "lacuna/field.hpp"
#include "lacuna/neuralnet.hpp"

namespace lacuna {

enum class NodeLabel { Lacuna, NotLacuna };

/// Lacuna iff v <= 0. Throws std::invalid_argument on NaN or infinity.
NodeLabel classify(double v);

struct EvalReport {
  std::uint64_t correct_lacuna = 0;
  std::uint64_t correct_not = 0;
  /// Predicted lacuna where the reference is +1.
  std::uint64_t false_lacuna = 0;
  /// Predicted non-lacuna where the reference is -1.
  std::uint64_t missed_lacuna = 0;
  std::uint64_t nodes_total = 0;
  std::size_t samples = 0;
  /// Correct nodes over all nodes, pooled across samples.
  double accuracy = 0.0;
  /// Mean of the per-sample accuracies, for comparison with the pooled value.
  double per_sample_mean = 0.0;

  std::string to_text() const;
  /// Single line of key=value pairs.
  std::string to_record() const;
};

PsiPrediction to_prediction(const PsiField &psi);

EvalReport accuracy(std::span<const PsiPrediction> preds, std::span<const PsiField> refs);

/// Network output for every sample, reshaped onto the full grid. Samples are
/// processed in fixed chunks so the values do not depend on `threads`.
std::vector<PsiPrediction> predict(const NetworkParams &p, const GridSpec &grid,
                                   std::span<const Sample> samples, unsigned threads = 1);

EvalReport evaluate_model(const NetworkParams &p, const Dataset &d, unsigned threads = 1);

} // namespace lacuna
