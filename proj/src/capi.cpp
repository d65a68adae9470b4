#include "lacuna/lacuna.h"

#include <algorithm>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include "lacuna/checkpoint.hpp"
#include "lacuna/dataset.hpp"
#include "lacuna/errors.hpp"
#include "lacuna/evaluate.hpp"
#include "lacuna/oracle.hpp"
#include "lacuna/render.hpp"
#include "lacuna/trainer.hpp"

struct lac_dataset {
  lacuna::Dataset data;
};

struct lac_model {
  lacuna::Checkpoint ckpt;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_report_buffer;

lac_status fail(lac_status status, const std::string &msg) {
  g_last_error = msg;
  return status;
}

template <class F> lac_status guarded(F &&body) {
  try {
    body();
    g_last_error.clear();
    return LAC_OK;
  } catch (const lacuna::FormatError &e) {
    return fail(LAC_ERR_FORMAT, e.what());
  } catch (const lacuna::IoError &e) {
    return fail(LAC_ERR_IO, e.what());
  } catch (const lacuna::NumericError &e) {
    return fail(LAC_ERR_NUMERIC, e.what());
  } catch (const std::invalid_argument &e) {
    return fail(LAC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range &e) {
    return fail(LAC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc &) {
    return fail(LAC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception &e) {
    return fail(LAC_ERR_INTERNAL, e.what());
  }
}

void require(const void *ptr, const char *name) {
  if (ptr == nullptr) {
    throw std::invalid_argument(std::string(name) + " must not be NULL");
  }
}

lacuna::DomainConfig to_cpp(const lac_domain_config &c) {
  lacuna::DomainConfig d;
  d.a = c.a;
  d.b = c.b;
  d.T = c.T;
  d.a1 = c.a1;
  d.b1 = c.b1;
  d.T0 = c.T0;
  d.T1 = c.T1;
  d.c = c.c;
  d.nx = static_cast<int>(std::min<std::uint32_t>(c.nx, std::numeric_limits<int>::max()));
  d.nt = static_cast<int>(std::min<std::uint32_t>(c.nt, std::numeric_limits<int>::max()));
  return d;
}

lac_domain_config to_c(const lacuna::DomainConfig &d) {
  return {d.a, d.b, d.T, d.a1, d.b1, d.T0, d.T1, d.c, static_cast<uint32_t>(d.nx),
          static_cast<uint32_t>(d.nt)};
}

lacuna::GenConfig to_cpp(const lac_gen_config &c) {
  lacuna::GenConfig g;
  g.min_disks = static_cast<int>(std::min<std::uint32_t>(c.min_disks, 1024));
  g.max_disks = static_cast<int>(std::min<std::uint32_t>(c.max_disks, 1024));
  g.max_radius = c.max_radius;
  g.seed = c.seed;
  return g;
}

lacuna::TrainConfig to_cpp(const lac_train_config &c) {
  lacuna::TrainConfig t;
  constexpr std::uint32_t kIntMax = std::numeric_limits<int>::max();
  t.epochs = static_cast<int>(std::min(c.epochs, kIntMax));
  t.batch_size = static_cast<int>(std::min(c.batch_size, kIntMax));
  t.learning_rate = c.learning_rate;
  t.hidden_layers = static_cast<int>(std::min(c.hidden_layers, kIntMax));
  t.hidden_width = static_cast<int>(std::min(c.hidden_width, kIntMax));
  t.seed = c.seed;
  t.split_ratio = c.split_ratio;
  t.record_wall_clock = c.record_wall_clock != 0;
  return t;
}

lac_eval_report to_c(const lacuna::EvalReport &r) {
  return {r.accuracy,     r.per_sample_mean, r.correct_lacuna, r.correct_not,
          r.false_lacuna, r.missed_lacuna,   r.nodes_total,    r.samples};
}

lacuna::EvalReport to_cpp(const lac_eval_report &r) {
  lacuna::EvalReport out;
  out.accuracy = r.accuracy;
  out.per_sample_mean = r.per_sample_mean;
  out.correct_lacuna = r.correct_lacuna;
  out.correct_not = r.correct_not;
  out.false_lacuna = r.false_lacuna;
  out.missed_lacuna = r.missed_lacuna;
  out.nodes_total = r.nodes_total;
  out.samples = static_cast<std::size_t>(r.samples);
  return out;
}

lacuna::SourceSupport make_support(const lacuna::GridSpec &grid, const lac_disk *disks,
                                   size_t n_disks) {
  if (n_disks == 0) {
    throw std::invalid_argument("support needs at least one disk");
  }
  require(disks, "disks");
  std::vector<lacuna::Disk> ds;
  for (size_t i = 0; i < n_disks; ++i) {
    ds.push_back({disks[i].cx, disks[i].ct, disks[i].r});
  }
  return lacuna::SourceSupport(std::move(ds), grid);
}

} // namespace

extern "C" {

const char *lac_version(void) { return "1.0.0"; }

const char *lac_last_error(void) { return g_last_error.c_str(); }

const char *lac_status_name(lac_status status) {
  switch (status) {
  case LAC_OK:
    return "ok";
  case LAC_ERR_INVALID_ARGUMENT:
    return "invalid argument";
  case LAC_ERR_IO:
    return "i/o error";
  case LAC_ERR_FORMAT:
    return "format error";
  case LAC_ERR_NUMERIC:
    return "numeric error";
  case LAC_ERR_INTERNAL:
    return "internal error";
  }
  return "unknown status";
}

void lac_domain_config_default(lac_domain_config *cfg) {
  if (cfg != nullptr) {
    *cfg = to_c(lacuna::DomainConfig{});
  }
}

void lac_gen_config_default(lac_gen_config *cfg) {
  if (cfg != nullptr) {
    const lacuna::GenConfig g;
    *cfg = {static_cast<uint32_t>(g.min_disks), static_cast<uint32_t>(g.max_disks), g.max_radius,
            g.seed};
  }
}

void lac_train_config_default(lac_train_config *cfg) {
  if (cfg != nullptr) {
    const lacuna::TrainConfig t;
    *cfg = {static_cast<uint32_t>(t.epochs),        static_cast<uint32_t>(t.batch_size),
            t.learning_rate,                         static_cast<uint32_t>(t.hidden_layers),
            static_cast<uint32_t>(t.hidden_width),  t.seed,
            t.split_ratio,                           t.record_wall_clock ? 1 : 0};
  }
}

lac_status lac_domain_sub_size(const lac_domain_config *cfg, uint32_t *nx_sub, uint32_t *nt_sub) {
  return guarded([&] {
    require(cfg, "cfg");
    require(nx_sub, "nx_sub");
    require(nt_sub, "nt_sub");
    const lacuna::GridSpec g = lacuna::build_grid(to_cpp(*cfg));
    *nx_sub = static_cast<uint32_t>(g.nx_sub());
    *nt_sub = static_cast<uint32_t>(g.nt_sub());
  });
}

lac_status lac_dataset_generate(const lac_domain_config *domain, const lac_gen_config *gen,
                                uint64_t samples, uint32_t threads, lac_dataset **out) {
  return guarded([&] {
    require(domain, "domain");
    require(gen, "gen");
    require(out, "out");
    *out = nullptr;
    const lacuna::GridSpec g = lacuna::build_grid(to_cpp(*domain));
    auto ds = std::make_unique<lac_dataset>(lac_dataset{
        lacuna::generate(g, static_cast<std::size_t>(samples), to_cpp(*gen), threads)});
    *out = ds.release();
  });
}

lac_status lac_dataset_load(const char *path, lac_dataset **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    auto ds = std::make_unique<lac_dataset>(lac_dataset{lacuna::load_dataset(path)});
    *out = ds.release();
  });
}

lac_status lac_dataset_save(const lac_dataset *ds, const char *path) {
  return guarded([&] {
    require(ds, "dataset");
    require(path, "path");
    lacuna::save_dataset(ds->data, path);
  });
}

void lac_dataset_free(lac_dataset *ds) { delete ds; }

uint64_t lac_dataset_size(const lac_dataset *ds) {
  return ds == nullptr ? 0 : static_cast<uint64_t>(ds->data.samples.size());
}

lac_status lac_dataset_config(const lac_dataset *ds, lac_domain_config *domain,
                              lac_gen_config *gen) {
  return guarded([&] {
    require(ds, "dataset");
    if (domain != nullptr) {
      *domain = to_c(ds->data.grid.config());
    }
    if (gen != nullptr) {
      const lacuna::GenConfig &g = ds->data.gen;
      *gen = {static_cast<uint32_t>(g.min_disks), static_cast<uint32_t>(g.max_disks),
              g.max_radius, g.seed};
    }
  });
}

lac_status lac_dataset_sample_disks(const lac_dataset *ds, uint64_t index, lac_disk *disks,
                                    size_t capacity, size_t *count) {
  return guarded([&] {
    require(ds, "dataset");
    require(count, "count");
    if (index >= ds->data.samples.size()) {
      throw std::out_of_range("sample index " + std::to_string(index) + " out of range (" +
                              std::to_string(ds->data.samples.size()) + " samples)");
    }
    const auto &src = ds->data.samples[index].support.disks();
    *count = src.size();
    if (capacity > 0) {
      require(disks, "disks");
    }
    for (size_t i = 0; i < src.size() && i < capacity; ++i) {
      disks[i] = {src[i].cx, src[i].ct, src[i].r};
    }
  });
}

lac_status lac_dataset_verify(const lac_dataset *ds, uint64_t *bad_index) {
  return guarded([&] {
    require(ds, "dataset");
    require(bad_index, "bad_index");
    const auto bad = lacuna::first_inconsistent_sample(ds->data);
    *bad_index = bad ? static_cast<uint64_t>(*bad) : UINT64_MAX;
  });
}

lac_status lac_train(const lac_dataset *ds, const lac_train_config *cfg, const char *metrics_csv,
                     lac_epoch_callback callback, void *user, lac_model **out) {
  return guarded([&] {
    require(ds, "dataset");
    require(cfg, "cfg");
    require(out, "out");
    *out = nullptr;
    std::optional<lacuna::MetricsCsv> csv;
    if (metrics_csv != nullptr) {
      csv.emplace(metrics_csv);
    }
    const lacuna::TrainResult result =
        lacuna::train(ds->data, to_cpp(*cfg), [&](const lacuna::EpochMetrics &m) {
          if (csv) {
            csv->append(m);
          }
          if (callback != nullptr) {
            const lac_epoch_metrics cm{static_cast<uint32_t>(m.epoch), m.train_loss, m.val_loss,
                                       m.seconds, m.best ? 1 : 0};
            callback(&cm, user);
          }
        });
    *out = std::make_unique<lac_model>(lac_model{result.checkpoint()}).release();
  });
}

lac_status lac_model_load(const char *path, lac_model **out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = nullptr;
    *out = std::make_unique<lac_model>(lac_model{lacuna::load_checkpoint(path)}).release();
  });
}

lac_status lac_model_save(const lac_model *model, const char *path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    lacuna::save_checkpoint(model->ckpt, path);
  });
}

void lac_model_free(lac_model *model) { delete model; }

uint32_t lac_model_best_epoch(const lac_model *model) {
  return model == nullptr ? 0 : model->ckpt.best_epoch;
}

double lac_model_best_val_loss(const lac_model *model) {
  return model == nullptr ? std::numeric_limits<double>::quiet_NaN() : model->ckpt.best_val_loss;
}

uint64_t lac_model_parameter_count(const lac_model *model) {
  return model == nullptr ? 0 : model->ckpt.params.parameter_count();
}

lac_status lac_model_forward(const lac_model *model, const double *input, size_t input_len,
                             double *output, size_t output_len) {
  return guarded([&] {
    require(model, "model");
    require(input, "input");
    require(output, "output");
    const lacuna::NetworkParams &p = model->ckpt.params;
    if (input_len != static_cast<size_t>(p.input_width()) ||
        output_len != static_cast<size_t>(p.output_width())) {
      throw std::invalid_argument("forward: buffer lengths do not match the network widths");
    }
    const lacuna::Vector y = lacuna::forward(p, std::span<const double>(input, input_len));
    std::memcpy(output, y.data(), output_len * sizeof(double));
  });
}

lac_status lac_evaluate(const lac_model *model, const lac_dataset *ds, uint32_t threads,
                        lac_eval_report *report) {
  return guarded([&] {
    require(model, "model");
    require(ds, "dataset");
    require(report, "report");
    *report = to_c(lacuna::evaluate_model(model->ckpt.params, ds->data, threads));
  });
}

const char *lac_eval_report_text(const lac_eval_report *report) {
  g_report_buffer = report == nullptr ? std::string() : to_cpp(*report).to_text();
  return g_report_buffer.c_str();
}

const char *lac_eval_report_record(const lac_eval_report *report) {
  g_report_buffer = report == nullptr ? std::string() : to_cpp(*report).to_record();
  return g_report_buffer.c_str();
}

lac_status lac_render_panel(const lac_model *model, const lac_domain_config *domain,
                            const lac_disk *disks, size_t n_disks, uint32_t scale,
                            const char *prefix) {
  return guarded([&] {
    require(model, "model");
    require(domain, "domain");
    require(prefix, "prefix");
    const lacuna::GridSpec g = lacuna::build_grid(to_cpp(*domain));
    const lacuna::Sample s = lacuna::make_sample(g, make_support(g, disks, n_disks));
    const auto preds = lacuna::predict(model->ckpt.params, g, std::span(&s, 1));
    lacuna::render_panel(s.phi, s.psi, preds.front(), prefix, static_cast<int>(scale));
  });
}

lac_status lac_render_oracle(const lac_domain_config *domain, const lac_disk *disks,
                             size_t n_disks, uint32_t scale, const char *prefix) {
  return guarded([&] {
    require(domain, "domain");
    require(prefix, "prefix");
    const lacuna::GridSpec g = lacuna::build_grid(to_cpp(*domain));
    const lacuna::Sample s = lacuna::make_sample(g, make_support(g, disks, n_disks));
    const std::string base(prefix);
    lacuna::render_field(s.phi, base + "_phi.ppm", static_cast<int>(scale));
    lacuna::render_field(s.psi, base + "_psi.ppm", static_cast<int>(scale));
    const auto phi_values = s.phi.values();
    if (std::find(phi_values.begin(), phi_values.end(), std::int8_t{1}) != phi_values.end()) {
      lacuna::render_field(lacuna::build_psi_secondary(g, s.phi), base + "_secondary.ppm",
                           static_cast<int>(scale));
    }
  });
}

} // extern "C"
