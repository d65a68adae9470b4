// lacuna: generate labelled lacuna data, train the network, evaluate and render.
//
// Every flag can also be set from the environment as
// LACUNA_<SUBCOMMAND>_<FLAG>, e.g. LACUNA_TRAIN_EPOCHS=40. Exit codes: 0 on
// success, 1 on I/O, format or numeric errors, 2 on invalid flags.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lacuna/lacuna.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string env_name(const std::string &sub, const std::string &flag) {
  std::string name = "LACUNA_" + sub + "_" + flag;
  for (char &ch : name) {
    ch = ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return name;
}

template <class T>
CLI::Option *flag(CLI::App *app, const std::string &name, T &value, const std::string &help) {
  return app->add_option("--" + name, value, help)
      ->envname(env_name(app->get_name(), name))
      ->capture_default_str();
}

void add_domain_flags(CLI::App *app, lac_domain_config &d) {
  flag(app, "x-min", d.a, "left end a of the space interval");
  flag(app, "x-max", d.b, "right end b of the space interval");
  flag(app, "t-max", d.T, "final time T");
  flag(app, "q-x-min", d.a1, "left end a1 of the source box");
  flag(app, "q-x-max", d.b1, "right end b1 of the source box");
  flag(app, "q-t-min", d.T0, "start time T0 of the source box");
  flag(app, "q-t-max", d.T1, "end time T1 of the source box");
  flag(app, "speed", d.c, "wave speed c");
  flag(app, "nx", d.nx, "number of space nodes")->check(CLI::Range(2u, 1u << 16));
  flag(app, "nt", d.nt, "number of time nodes")->check(CLI::Range(2u, 1u << 16));
}

void add_gen_flags(CLI::App *app, lac_gen_config &g) {
  flag(app, "min-disks", g.min_disks, "fewest disks per support")->check(CLI::Range(1u, 255u));
  flag(app, "max-disks", g.max_disks, "most disks per support")->check(CLI::Range(1u, 255u));
  flag(app, "max-radius", g.max_radius, "largest disk radius R");
}

bool parse_disk(const std::string &text, lac_disk &out) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  std::string rest;
  return static_cast<bool>(in >> out.cx >> out.ct >> out.r) && !(in >> rest) && out.r > 0.0;
}

bool parse_disks(const std::vector<std::string> &specs, std::vector<lac_disk> &out) {
  for (const std::string &spec : specs) {
    lac_disk d{};
    if (!parse_disk(spec, d)) {
      std::cerr << "error: --disk expects cx,ct,r with r > 0, got '" << spec << "'\n";
      return false;
    }
    out.push_back(d);
  }
  return true;
}

void print_resolved(const CLI::App *sub) {
  std::cout << "# lacuna " << lac_version() << " " << sub->get_name() << "\n";
  for (const CLI::Option *opt : sub->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") {
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      const auto &results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) {
        value += (i ? " " : "") + results[i];
      }
    } else if (opt->get_type_size() == 0) {
      value = "false";
    } else {
      value = opt->get_default_str();
    }
    std::cout << "#   --" << opt->get_lnames().front() << " = " << value << "\n";
  }
  std::cout.flush();
}

int report_failure(lac_status status) {
  std::cerr << "error: " << lac_status_name(status) << ": " << lac_last_error() << "\n";
  return kExitFailure;
}

void print_epoch(const lac_epoch_metrics *m, void *user) {
  const auto total = *static_cast<const std::uint32_t *>(user);
  std::printf("epoch %u/%u  train_loss %.6f  val_loss %.6f  %.1fs%s\n", m->epoch, total,
              m->train_loss, m->val_loss, m->seconds, m->best ? "  *" : "");
  std::fflush(stdout);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Lacuna detection with a fully connected network on a 1+1D space-time grid"};
  app.require_subcommand(1);

  // generate
  lac_domain_config gen_domain;
  lac_domain_config_default(&gen_domain);
  lac_gen_config gen_cfg;
  lac_gen_config_default(&gen_cfg);
  std::uint64_t gen_samples = 10000;
  std::uint32_t gen_threads = 1;
  std::string gen_out;
  CLI::App *generate = app.add_subcommand("generate", "draw random supports and write a LACD dataset");
  flag(generate, "samples", gen_samples, "number of samples M")->check(CLI::Range(1ull, 1ull << 32));
  add_gen_flags(generate, gen_cfg);
  flag(generate, "seed", gen_cfg.seed, "master seed");
  flag(generate, "threads", gen_threads, "worker threads (output does not depend on it)");
  add_domain_flags(generate, gen_domain);
  flag(generate, "out", gen_out, "output LACD path")->required();

  // train
  lac_train_config train_cfg;
  lac_train_config_default(&train_cfg);
  std::string train_data;
  std::string train_out;
  std::string train_metrics;
  bool train_no_clock = false;
  CLI::App *train = app.add_subcommand("train", "train on a LACD dataset and write a LACM checkpoint");
  flag(train, "data", train_data, "input LACD dataset")->required();
  flag(train, "epochs", train_cfg.epochs, "number of epochs")->check(CLI::Range(1u, 1u << 30));
  flag(train, "batch", train_cfg.batch_size, "batch size")->check(CLI::Range(1u, 1u << 30));
  flag(train, "lr", train_cfg.learning_rate, "Adam learning rate");
  flag(train, "layers", train_cfg.hidden_layers, "number of hidden layers K");
  flag(train, "width", train_cfg.hidden_width, "nodes per hidden layer");
  flag(train, "split", train_cfg.split_ratio, "training fraction of the dataset");
  flag(train, "seed", train_cfg.seed, "seed for the split, initialisation and shuffling");
  flag(train, "out", train_out, "output LACM checkpoint")->required();
  flag(train, "metrics", train_metrics, "per-epoch metrics CSV (optional)");
  train->add_flag("--no-wall-clock", train_no_clock,
                  "write 0 for the seconds column so the CSV is reproducible")
      ->envname(env_name("train", "no-wall-clock"));

  // eval
  std::string eval_model;
  std::string eval_data;
  lac_domain_config eval_domain;
  lac_domain_config_default(&eval_domain);
  lac_gen_config eval_gen;
  lac_gen_config_default(&eval_gen);
  eval_gen.seed = 99;
  std::uint64_t eval_samples = 1000;
  std::uint32_t eval_threads = 1;
  CLI::App *eval = app.add_subcommand("eval", "accuracy of a checkpoint on stored or fresh test data");
  flag(eval, "model", eval_model, "LACM checkpoint")->required();
  flag(eval, "data", eval_data, "stored LACD test set (otherwise a fresh one is generated)");
  flag(eval, "test-samples", eval_samples, "size of the fresh test set")
      ->check(CLI::Range(1ull, 1ull << 32));
  add_gen_flags(eval, eval_gen);
  flag(eval, "seed", eval_gen.seed, "seed of the fresh test set");
  flag(eval, "threads", eval_threads, "worker threads (output does not depend on it)");
  add_domain_flags(eval, eval_domain);

  // render
  std::string render_model;
  std::string render_data;
  std::uint64_t render_index = 0;
  std::vector<std::string> render_disks;
  lac_domain_config render_domain;
  lac_domain_config_default(&render_domain);
  std::uint32_t render_scale = 8;
  std::string render_out;
  CLI::App *render = app.add_subcommand("render", "reference, prediction, Q_f and difference images");
  flag(render, "model", render_model, "LACM checkpoint")->required();
  auto *render_disk_opt =
      flag(render, "disk", render_disks, "support disk cx,ct,r (repeatable)")->delimiter(';');
  auto *render_data_opt = flag(render, "data", render_data, "take the support from this LACD file");
  render_data_opt->excludes(render_disk_opt);
  flag(render, "index", render_index, "sample index within --data");
  add_domain_flags(render, render_domain);
  flag(render, "scale", render_scale, "pixels per node")->check(CLI::Range(1u, 64u));
  flag(render, "out", render_out, "output path prefix")->required();

  // oracle
  std::vector<std::string> oracle_disks;
  lac_domain_config oracle_domain;
  lac_domain_config_default(&oracle_domain);
  std::uint32_t oracle_scale = 8;
  std::string oracle_out;
  CLI::App *oracle = app.add_subcommand("oracle", "phi, psi and secondary-lacuna images from the ray oracle");
  flag(oracle, "disk", oracle_disks, "support disk cx,ct,r (repeatable)")->delimiter(';')->required();
  add_domain_flags(oracle, oracle_domain);
  flag(oracle, "scale", oracle_scale, "pixels per node")->check(CLI::Range(1u, 64u));
  flag(oracle, "out", oracle_out, "output path prefix")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  const CLI::App *chosen = app.get_subcommands().front();
  print_resolved(chosen);

  if (chosen == generate) {
    if (gen_cfg.min_disks > gen_cfg.max_disks) {
      std::cerr << "error: --min-disks exceeds --max-disks\n";
      return kExitUsage;
    }
    lac_dataset *ds = nullptr;
    lac_status st = lac_dataset_generate(&gen_domain, &gen_cfg, gen_samples, gen_threads, &ds);
    if (st == LAC_OK) {
      st = lac_dataset_save(ds, gen_out.c_str());
    }
    lac_dataset_free(ds);
    if (st != LAC_OK) {
      return report_failure(st);
    }
    std::cout << "wrote " << gen_samples << " samples to " << gen_out << "\n";
    return 0;
  }

  if (chosen == train) {
    lac_dataset *ds = nullptr;
    lac_status st = lac_dataset_load(train_data.c_str(), &ds);
    if (st != LAC_OK) {
      return report_failure(st);
    }
    train_cfg.record_wall_clock = train_no_clock ? 0 : 1;
    lac_model *model = nullptr;
    std::uint32_t total = train_cfg.epochs;
    st = lac_train(ds, &train_cfg, train_metrics.empty() ? nullptr : train_metrics.c_str(),
                   print_epoch, &total, &model);
    lac_dataset_free(ds);
    if (st == LAC_OK) {
      st = lac_model_save(model, train_out.c_str());
    }
    if (st != LAC_OK) {
      lac_model_free(model);
      return report_failure(st);
    }
    std::printf("best epoch %u, validation loss %.17g, wrote %s\n", lac_model_best_epoch(model),
                lac_model_best_val_loss(model), train_out.c_str());
    lac_model_free(model);
    return 0;
  }

  if (chosen == eval) {
    lac_model *model = nullptr;
    lac_status st = lac_model_load(eval_model.c_str(), &model);
    if (st != LAC_OK) {
      return report_failure(st);
    }
    lac_dataset *ds = nullptr;
    if (!eval_data.empty()) {
      st = lac_dataset_load(eval_data.c_str(), &ds);
    } else {
      if (eval_gen.min_disks > eval_gen.max_disks) {
        lac_model_free(model);
        std::cerr << "error: --min-disks exceeds --max-disks\n";
        return kExitUsage;
      }
      st = lac_dataset_generate(&eval_domain, &eval_gen, eval_samples, eval_threads, &ds);
    }
    lac_eval_report report{};
    if (st == LAC_OK) {
      st = lac_evaluate(model, ds, eval_threads, &report);
    }
    lac_dataset_free(ds);
    lac_model_free(model);
    if (st != LAC_OK) {
      return report_failure(st);
    }
    std::cout << lac_eval_report_text(&report);
    std::cout << lac_eval_report_record(&report) << "\n";
    return 0;
  }

  if (chosen == render) {
    std::vector<lac_disk> disks;
    lac_domain_config domain = render_domain;
    if (!render_data.empty()) {
      lac_dataset *ds = nullptr;
      lac_status st = lac_dataset_load(render_data.c_str(), &ds);
      std::size_t count = 0;
      if (st == LAC_OK) {
        st = lac_dataset_sample_disks(ds, render_index, nullptr, 0, &count);
      }
      if (st == LAC_OK) {
        disks.resize(count);
        st = lac_dataset_sample_disks(ds, render_index, disks.data(), disks.size(), &count);
      }
      if (st == LAC_OK) {
        st = lac_dataset_config(ds, &domain, nullptr);
      }
      lac_dataset_free(ds);
      if (st != LAC_OK) {
        return report_failure(st);
      }
    } else if (!parse_disks(render_disks, disks) || disks.empty()) {
      if (disks.empty()) {
        std::cerr << "error: render needs --disk or --data\n";
      }
      return kExitUsage;
    }
    lac_model *model = nullptr;
    lac_status st = lac_model_load(render_model.c_str(), &model);
    if (st == LAC_OK) {
      st = lac_render_panel(model, &domain, disks.data(), disks.size(), render_scale,
                            render_out.c_str());
    }
    lac_model_free(model);
    if (st != LAC_OK) {
      return report_failure(st);
    }
    std::cout << "wrote " << render_out << "_{ref,nn,qf,diff}.ppm\n";
    return 0;
  }

  // oracle
  std::vector<lac_disk> disks;
  if (!parse_disks(oracle_disks, disks)) {
    return kExitUsage;
  }
  const lac_status st = lac_render_oracle(&oracle_domain, disks.data(), disks.size(),
                                          oracle_scale, oracle_out.c_str());
  if (st != LAC_OK) {
    return report_failure(st);
  }
  std::cout << "wrote " << oracle_out << "_{phi,psi}.ppm\n";
  return 0;
}
