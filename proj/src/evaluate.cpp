#include "lacuna/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace lacuna {

NodeLabel classify(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("classify: non-finite value");
  }
  return v <= 0.0 ? NodeLabel::Lacuna : NodeLabel::NotLacuna;
}

PsiPrediction to_prediction(const PsiField &psi) {
  const auto vs = psi.values();
  return PsiPrediction(psi.nx(), psi.nt(), std::vector<double>(vs.begin(), vs.end()));
}

EvalReport accuracy(std::span<const PsiPrediction> preds, std::span<const PsiField> refs) {
  if (preds.size() != refs.size()) {
    throw std::invalid_argument("accuracy: " + std::to_string(preds.size()) + " predictions for " +
                                std::to_string(refs.size()) + " references");
  }
  if (preds.empty()) {
    throw std::invalid_argument("accuracy: no samples");
  }
  EvalReport rep;
  rep.samples = preds.size();
  double per_sample_sum = 0.0;
  for (std::size_t m = 0; m < preds.size(); ++m) {
    const auto pv = preds[m].values();
    const auto rv = refs[m].values();
    if (preds[m].nx() != refs[m].nx() || preds[m].nt() != refs[m].nt()) {
      throw std::invalid_argument("accuracy: shape mismatch in sample " + std::to_string(m));
    }
    std::uint64_t correct = 0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
      const bool predicted_lacuna = classify(pv[i]) == NodeLabel::Lacuna;
      const bool is_lacuna = rv[i] == -1;
      if (predicted_lacuna && is_lacuna) {
        ++rep.correct_lacuna;
        ++correct;
      } else if (!predicted_lacuna && !is_lacuna) {
        ++rep.correct_not;
        ++correct;
      } else if (predicted_lacuna) {
        ++rep.false_lacuna;
      } else {
        ++rep.missed_lacuna;
      }
    }
    rep.nodes_total += pv.size();
    per_sample_sum += static_cast<double>(correct) / static_cast<double>(pv.size());
  }
  rep.accuracy = static_cast<double>(rep.correct_lacuna + rep.correct_not) /
                 static_cast<double>(rep.nodes_total);
  rep.per_sample_mean = per_sample_sum / static_cast<double>(rep.samples);
  return rep;
}

std::string EvalReport::to_text() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "samples:              %zu\n"
                "nodes:                %llu\n"
                "accuracy (pooled):    %.4f%%\n"
                "accuracy (per-sample mean): %.4f%%\n"
                "correct lacuna:       %llu\n"
                "correct non-lacuna:   %llu\n"
                "false lacuna:         %llu\n"
                "missed lacuna:        %llu\n",
                samples, static_cast<unsigned long long>(nodes_total), 100.0 * accuracy,
                100.0 * per_sample_mean, static_cast<unsigned long long>(correct_lacuna),
                static_cast<unsigned long long>(correct_not),
                static_cast<unsigned long long>(false_lacuna),
                static_cast<unsigned long long>(missed_lacuna));
  return buf;
}

std::string EvalReport::to_record() const {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "accuracy=%.17g per_sample_mean=%.17g samples=%zu nodes_total=%llu "
                "correct_lacuna=%llu correct_not=%llu false_lacuna=%llu missed_lacuna=%llu",
                accuracy, per_sample_mean, samples, static_cast<unsigned long long>(nodes_total),
                static_cast<unsigned long long>(correct_lacuna),
                static_cast<unsigned long long>(correct_not),
                static_cast<unsigned long long>(false_lacuna),
                static_cast<unsigned long long>(missed_lacuna));
  return buf;
}

std::vector<PsiPrediction> predict(const NetworkParams &p, const GridSpec &grid,
                                   std::span<const Sample> samples, unsigned threads) {
  if (p.input_width() != grid.sub_size() || p.output_width() != grid.full_size()) {
    throw std::invalid_argument("predict: network widths " + std::to_string(p.input_width()) +
                                "->" + std::to_string(p.output_width()) +
                                " do not match the grid (" + std::to_string(grid.sub_size()) +
                                "->" + std::to_string(grid.full_size()) + ")");
  }
  constexpr std::size_t kChunk = 64;
  const std::size_t n_chunks = (samples.size() + kChunk - 1) / kChunk;
  std::vector<PsiPrediction> out(samples.size());

  auto run_chunk = [&](std::size_t c) {
    const std::size_t first = c * kChunk;
    const std::size_t count = std::min(kChunk, samples.size() - first);
    Matrix inputs(p.input_width(), static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
      const auto phi = samples[first + i].phi.values();
      if (phi.size() != static_cast<std::size_t>(p.input_width())) {
        throw std::invalid_argument("predict: sample phi has the wrong size");
      }
      for (std::size_t r = 0; r < phi.size(); ++r) {
        inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = phi[r];
      }
    }
    const ForwardCache cache = forward(p, inputs);
    for (std::size_t i = 0; i < count; ++i) {
      const auto col = cache.output().col(static_cast<Eigen::Index>(i));
      out[first + i] = unflatten_psi(std::span<const double>(col.data(), col.size()), grid.nx(),
                                     grid.nt());
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n_chunks));
  if (workers == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      run_chunk(c);
    }
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t c = w; c < n_chunks; c += workers) {
          run_chunk(c);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &t : pool) {
    t.join();
  }
  for (const auto &e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

EvalReport evaluate_model(const NetworkParams &p, const Dataset &d, unsigned threads) {
  const std::vector<PsiPrediction> preds = predict(p, d.grid, d.samples, threads);
  std::vector<PsiField> refs;
  refs.reserve(d.samples.size());
  for (const Sample &s : d.samples) {
    refs.push_back(s.psi);
  }
  return accuracy(preds, refs);
}

} // namespace lacuna
