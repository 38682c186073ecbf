#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ncr/core.hpp"
#include "ncr/errors.hpp"
#include "ncr/eval.hpp"
#include "ncr/index.hpp"
#include "ncr/io.hpp"
#include "ncr/pairs.hpp"
#include "ncr/pca.hpp"
#include "ncr/projection.hpp"
#include "ncr/synth.hpp"

namespace ncr::cli {

namespace detail {

inline std::string default_ids_path(const std::string& ncd_path) {
  if (ncd_path.size() > 4 && ncd_path.ends_with(".ncd"))
    return ncd_path.substr(0, ncd_path.size() - 4) + ".ids";
  return ncd_path + ".ids";
}

inline unsigned resolve_threads(int flag_value) {
  if (flag_value > 0) return static_cast<unsigned>(flag_value);
  if (const char* env = std::getenv("NCR_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 0;  // library picks hardware concurrency
}

inline void with_output(const std::string& out,
                        const std::function<void(std::ostream&)>& fn) {
  if (out.empty()) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(out, std::ios::trunc);
  if (!f) fail(ErrCode::IoFailure, "cannot open " + out + " for writing");
  fn(f);
  if (!f.good()) fail(ErrCode::IoFailure, "write failed: " + out);
}

inline DescriptorSet load_set(const std::string& path, const std::string& ids) {
  return read_ncd(path, ids.empty() ? default_ids_path(path) : ids);
}

inline void store_set(const DescriptorSet& set, const std::string& path,
                      const std::string& ids) {
  write_ncd(set, path, ids.empty() ? default_ids_path(path) : ids);
}

inline void write_report(const EvalReport& report, const std::string& format,
                         const std::string& out) {
  with_output(out, [&](std::ostream& os) {
    if (format == "tsv")
      report.write_tsv(os);
    else
      report.write_text(os);
  });
}

// Merge a key\tvalue config file into the argument list. Config-derived
// tokens are inserted right after the subcommand words, so explicit flags
// (parsed last) take precedence.
inline std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i < args.size();) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      ++i;
    }
  }
  if (config_path.empty()) return args;
  auto kv = read_kv_tsv(config_path);
  std::size_t insert_at = 0;
  while (insert_at < args.size() && insert_at < 2 &&
         args[insert_at].rfind("-", 0) != 0)
    ++insert_at;
  std::vector<std::string> tokens;
  for (const auto& [k, v] : kv) tokens.push_back("--" + k + "=" + v);
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(insert_at),
              tokens.begin(), tokens.end());
  return args;
}

}  // namespace detail

int dispatch(const std::vector<std::string>& argv);

// Executes the subcommand lines of a pipeline file sequentially, stopping at
// the first failing step. Lines are whitespace-split (no quoting); blank
// lines and lines starting with '#' are skipped. Per-step timing goes to
// stderr.
inline int run_manifest(const std::string& path) {
  auto lines = ncr::detail::split_lines(ncr::detail::read_text_file(path));
  int step = 0;
  for (const auto& line : lines) {
    std::istringstream ss(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    if (tokens.empty() || tokens.front()[0] == '#') continue;
    ++step;
    auto t0 = std::chrono::steady_clock::now();
    int code = dispatch(tokens);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    std::cerr << "step " << step << " [" << line << "] " << ms << " ms"
              << (code == 0 ? "" : " FAILED") << "\n";
    if (code != 0) return code;
  }
  return 0;
}

// Parses and executes one command line (without the program name).
// Exit codes: 0 success, 1 usage error, 2 data/format error, 3 numeric
// failure. Diagnostics go to stderr, data to stdout or --out.
inline int dispatch(const std::vector<std::string>& argv) {
  CLI::App app{"compact-descriptor retrieval pipeline"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  struct {
    std::string in, ids, out, out_ids;
  } norm;
  struct {
    std::string in, ids, out, exclude_ids;
    int dim = 0;
    std::uint64_t seed = 42;
    std::size_t sample_cap = 100000;
    bool strict_rank = false;
  } pf;
  struct {
    std::string model, in, ids, out, out_ids, renormalize = "on";
    bool whiten = false;
  } pa;
  struct {
    std::string in, ids, pairs, out;
    TrainConfig cfg;
  } jf;
  struct {
    std::string model, in, ids, out, out_ids, renormalize = "on";
  } ja;
  struct {
    std::string graph, out;
  } pm;
  struct {
    std::string in, out;
    std::size_t budget = 100000;
  } ps;
  struct {
    std::string groups, out, positives;
    std::size_t count = 0;
    std::uint64_t seed = 42;
  } pn;
  struct {
    std::string db, db_ids, queries, query_ids, out, normalize = "on";
    std::size_t k = 10;
    bool exclude_self = false;
    int threads = 0;
  } iq;
  struct {
    std::string db, db_ids, queries, query_ids, gt, out;
    std::string ok_policy = "positive", ap_variant = "rectangular";
    std::string format = "text", normalize = "on";
    int threads = 0;
  } ev;
  struct {
    std::string out;
    int groups = 0, size = 0, dim = 0;
    double sigma = 0.0;
    int nuisance_dim = 0;
    double nuisance_amp = 0.0;
    int intrinsic_dim = 0;
    std::uint64_t seed = 42;
    bool emit_pairs = false;
  } sg;
  struct {
    std::string mode, in, out, ids, out_ids;
  } cv;
  struct {
    std::string manifest;
  } rn;

  int exit_code = 0;

  // normalize -------------------------------------------------------------
  auto* c_norm = app.add_subcommand("normalize", "L2-normalize a descriptor set");
  c_norm->add_option("--in", norm.in, "input NCD file")->required()->check(CLI::ExistingFile);
  c_norm->add_option("--ids", norm.ids, "input ids file (default: <in>.ids)");
  c_norm->add_option("--out", norm.out, "output NCD file")->required();
  c_norm->add_option("--out-ids", norm.out_ids, "output ids file");
  c_norm->callback([&] {
    auto set = detail::load_set(norm.in, norm.ids);
    detail::store_set(normalize_set(set), norm.out, norm.out_ids);
  });

  // pca ---------------------------------------------------------------------
  auto* c_pca = app.add_subcommand("pca", "PCA compression");
  c_pca->require_subcommand(1);
  auto* c_pca_fit = c_pca->add_subcommand("fit", "fit a PCA model");
  c_pca_fit->add_option("--in", pf.in, "training NCD file")->required()->check(CLI::ExistingFile);
  c_pca_fit->add_option("--ids", pf.ids, "ids file");
  c_pca_fit->add_option("--dim", pf.dim, "output dimensionality")->required()->check(CLI::PositiveNumber);
  c_pca_fit->add_option("--seed", pf.seed, "sampling seed");
  c_pca_fit->add_option("--sample-cap", pf.sample_cap, "max training rows (default 100000)");
  c_pca_fit->add_flag("--strict-rank", pf.strict_rank, "error instead of padding when rank < dim");
  c_pca_fit->add_option("--exclude-ids", pf.exclude_ids, "file of ids to drop from training")->check(CLI::ExistingFile);
  c_pca_fit->add_option("--out", pf.out, "output NCP1 model")->required();
  c_pca_fit->callback([&] {
    auto X = detail::load_set(pf.in, pf.ids);
    if (!pf.exclude_ids.empty()) {
      auto lines = ncr::detail::split_lines(ncr::detail::read_text_file(pf.exclude_ids));
      std::set<std::string> drop(lines.begin(), lines.end());
      std::vector<std::string> ids;
      std::vector<Eigen::Index> keep;
      for (std::size_t i = 0; i < X.size(); ++i)
        if (!drop.count(X.id(i))) {
          ids.push_back(X.id(i));
          keep.push_back(static_cast<Eigen::Index>(i));
        }
      if (ids.empty())
        fail(ErrCode::TooFewSamples, "--exclude-ids removed every row");
      RowMatrix data(static_cast<Eigen::Index>(keep.size()), X.dim());
      for (std::size_t i = 0; i < keep.size(); ++i)
        data.row(static_cast<Eigen::Index>(i)) = X.data().row(keep[i]);
      X = DescriptorSet(std::move(ids), std::move(data), X.layer_tag());
    }
    PcaOptions opts{pf.seed, pf.sample_cap, pf.strict_rank};
    write_ncp(fit_pca(X, pf.dim, opts), pf.out);
  });
  auto* c_pca_apply = c_pca->add_subcommand("apply", "project a set with a PCA model");
  c_pca_apply->add_option("--model", pa.model, "NCP1 model")->required()->check(CLI::ExistingFile);
  c_pca_apply->add_option("--in", pa.in, "input NCD file")->required()->check(CLI::ExistingFile);
  c_pca_apply->add_option("--ids", pa.ids, "ids file");
  c_pca_apply->add_option("--out", pa.out, "output NCD file")->required();
  c_pca_apply->add_option("--out-ids", pa.out_ids, "output ids file");
  c_pca_apply->add_option("--renormalize", pa.renormalize, "re-normalize rows after projection (on|off, default on)")
      ->check(CLI::IsMember({"on", "off"}));
  c_pca_apply->add_flag("--whiten", pa.whiten, "divide coordinates by sqrt(eigval)");
  c_pca_apply->callback([&] {
    auto model = read_ncp(pa.model);
    auto X = detail::load_set(pa.in, pa.ids);
    detail::store_set(apply_pca(model, X, pa.renormalize == "on", pa.whiten),
                      pa.out, pa.out_ids);
  });

  // proj ----------------------------------------------------------------
  auto* c_proj = app.add_subcommand("proj", "discriminative projection");
  c_proj->require_subcommand(1);
  auto* c_proj_fit = c_proj->add_subcommand("fit", "learn a projection from pairs");
  c_proj_fit->add_option("--in", jf.in, "training NCD file (L2-normalized)")->required()->check(CLI::ExistingFile);
  c_proj_fit->add_option("--ids", jf.ids, "ids file");
  c_proj_fit->add_option("--pairs", jf.pairs, "pairs TSV (pos and neg)")->required()->check(CLI::ExistingFile);
  c_proj_fit->add_option("--dim", jf.cfg.D, "output dimensionality")->required()->check(CLI::PositiveNumber);
  c_proj_fit->add_option("--tau-pos", jf.cfg.tau_pos, "positive squared-distance margin");
  c_proj_fit->add_option("--tau-neg", jf.cfg.tau_neg, "negative squared-distance margin");
  c_proj_fit->add_option("--eta0", jf.cfg.eta0, "initial step size");
  c_proj_fit->add_option("--decay", jf.cfg.decay, "step decay per epoch");
  c_proj_fit->add_option("--epochs", jf.cfg.epochs, "training epochs")->check(CLI::NonNegativeNumber);
  c_proj_fit->add_option("--batch", jf.cfg.batch, "mini-batch size")->check(CLI::PositiveNumber);
  c_proj_fit->add_option("--seed", jf.cfg.seed, "shuffle seed");
  c_proj_fit->add_option("--out", jf.out, "output NCW1 model")->required();
  c_proj_fit->callback([&] {
    auto X = detail::load_set(jf.in, jf.ids);
    auto pairs = read_pairs_tsv(jf.pairs);
    save_projection_model(fit_projection(X, pairs, jf.cfg), jf.out);
  });
  auto* c_proj_apply = c_proj->add_subcommand("apply", "project a set with a learned model");
  c_proj_apply->add_option("--model", ja.model, "NCW1 model")->required()->check(CLI::ExistingFile);
  c_proj_apply->add_option("--in", ja.in, "input NCD file")->required()->check(CLI::ExistingFile);
  c_proj_apply->add_option("--ids", ja.ids, "ids file");
  c_proj_apply->add_option("--out", ja.out, "output NCD file")->required();
  c_proj_apply->add_option("--out-ids", ja.out_ids, "output ids file");
  c_proj_apply->add_option("--renormalize", ja.renormalize, "on|off (default on)")
      ->check(CLI::IsMember({"on", "off"}));
  c_proj_apply->callback([&] {
    auto model = load_projection_model(ja.model);
    auto X = detail::load_set(ja.in, ja.ids);
    detail::store_set(apply_projection(model, X, ja.renormalize == "on"),
                      ja.out, ja.out_ids);
  });

  // pairs -----------------------------------------------------------------
  auto* c_pairs = app.add_subcommand("pairs", "training-pair mining");
  c_pairs->require_subcommand(1);
  auto* c_mine = c_pairs->add_subcommand("mine", "mine 2-hop candidate pairs from a match graph");
  c_mine->add_option("--graph", pm.graph, "edge-list TSV")->required()->check(CLI::ExistingFile);
  c_mine->add_option("--out", pm.out, "output pairs TSV")->required();
  c_mine->callback([&] {
    PairSet out;
    out.positives = mine_candidate_pairs(read_match_graph(pm.graph));
    write_pairs_tsv(out, pm.out);
  });
  auto* c_subset = c_pairs->add_subcommand("subset", "greedy unique-endpoint subset of positives");
  c_subset->add_option("--in", ps.in, "pairs TSV")->required()->check(CLI::ExistingFile);
  c_subset->add_option("--budget", ps.budget, "max pairs to keep (default 100000)")->check(CLI::PositiveNumber);
  c_subset->add_option("--out", ps.out, "output pairs TSV")->required();
  c_subset->callback([&] {
    PairSet in = read_pairs_tsv(ps.in);
    PairSet out;
    out.positives = greedy_unique_subset(in.positives, ps.budget);
    out.negatives = in.negatives;  // negatives pass through untouched
    write_pairs_tsv(out, ps.out);
  });
  auto* c_neg = c_pairs->add_subcommand("negatives", "sample seeded cross-class negatives");
  c_neg->add_option("--groups", pn.groups, "group-form ground-truth TSV")->required()->check(CLI::ExistingFile);
  c_neg->add_option("--count", pn.count, "number of negatives (default: match --positives)");
  c_neg->add_option("--positives", pn.positives, "pairs TSV whose positives are merged into the output")->check(CLI::ExistingFile);
  c_neg->add_option("--seed", pn.seed, "sampling seed");
  c_neg->add_option("--out", pn.out, "output pairs TSV")->required();
  c_neg->callback([&] {
    auto gt = read_ground_truth(pn.groups, GtForm::group);
    PairSet out;
    if (!pn.positives.empty()) out.positives = read_pairs_tsv(pn.positives).positives;
    std::size_t count = pn.count > 0 ? pn.count : out.positives.size();
    if (count == 0)
      fail(ErrCode::UsageError, "need --count or a non-empty --positives file");
    out.negatives = sample_negatives(gt.group_of, count, pn.seed);
    write_pairs_tsv(out, pn.out);
  });

  // index -----------------------------------------------------------------
  auto* c_index = app.add_subcommand("index", "exact nearest-neighbor search");
  c_index->require_subcommand(1);
  auto* c_query = c_index->add_subcommand("query", "rank database rows for each query");
  c_query->add_option("--db", iq.db, "database NCD file")->required()->check(CLI::ExistingFile);
  c_query->add_option("--db-ids", iq.db_ids, "database ids file");
  c_query->add_option("--queries", iq.queries, "query NCD file")->required()->check(CLI::ExistingFile);
  c_query->add_option("--query-ids", iq.query_ids, "query ids file");
  c_query->add_option("-k,--k", iq.k, "results per query (default 10)")->check(CLI::PositiveNumber);
  c_query->add_flag("--exclude-self", iq.exclude_self, "exclude each query's own id from its ranking");
  c_query->add_option("--normalize", iq.normalize, "normalize db and queries (on|off, default on)")
      ->check(CLI::IsMember({"on", "off"}));
  c_query->add_option("--threads", iq.threads, "worker threads (0 = NCR_THREADS or hardware)");
  c_query->add_option("--out", iq.out, "output TSV (default stdout)");
  c_query->callback([&] {
    bool norm_flag = iq.normalize == "on";
    auto idx = Index::build(detail::load_set(iq.db, iq.db_ids), norm_flag);
    auto Q = detail::load_set(iq.queries, iq.query_ids);
    if (norm_flag) Q = normalize_set(Q);
    std::vector<std::set<std::string>> excl;
    if (iq.exclude_self) {
      excl.reserve(Q.size());
      for (std::size_t i = 0; i < Q.size(); ++i) excl.push_back({Q.id(i)});
    }
    auto results = idx.batch_query(Q, iq.k, iq.exclude_self ? &excl : nullptr,
                                   detail::resolve_threads(iq.threads));
    detail::with_output(iq.out, [&](std::ostream& os) {
      for (std::size_t i = 0; i < results.size(); ++i)
        write_ranked_tsv(os, Q.id(i), results[i]);
    });
  });

  // eval ------------------------------------------------------------------
  auto* c_eval = app.add_subcommand("eval", "benchmark protocols");
  c_eval->require_subcommand(1);
  auto add_common_eval = [&](CLI::App* cmd, bool with_queries) {
    cmd->add_option("--db", ev.db, "database NCD file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--db-ids", ev.db_ids, "database ids file");
    if (with_queries) {
      cmd->add_option("--queries", ev.queries, "query NCD file")->required()->check(CLI::ExistingFile);
      cmd->add_option("--query-ids", ev.query_ids, "query ids file");
    }
    cmd->add_option("--gt", ev.gt, "ground-truth TSV")->required()->check(CLI::ExistingFile);
    cmd->add_option("--format", ev.format, "tsv|text (default text)")
        ->check(CLI::IsMember({"tsv", "text"}));
    cmd->add_option("--normalize", ev.normalize, "normalize descriptors (on|off, default on)")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--threads", ev.threads, "worker threads");
    cmd->add_option("--out", ev.out, "report file (default stdout)");
  };
  auto* c_oxford = c_eval->add_subcommand("oxford", "good/ok/junk mAP protocol");
  add_common_eval(c_oxford, true);
  c_oxford->add_option("--ok-policy", ev.ok_policy, "score 'ok' ids as positive|junk (default positive)")
      ->check(CLI::IsMember({"positive", "junk"}));
  c_oxford->add_option("--ap-variant", ev.ap_variant, "rectangular|trapezoidal (default rectangular)")
      ->check(CLI::IsMember({"rectangular", "trapezoidal"}));
  c_oxford->callback([&] {
    bool norm_flag = ev.normalize == "on";
    auto idx = Index::build(detail::load_set(ev.db, ev.db_ids), norm_flag);
    auto Q = detail::load_set(ev.queries, ev.query_ids);
    if (norm_flag) Q = normalize_set(Q);
    auto gt = read_ground_truth(ev.gt, GtForm::ranked);
    auto report = evaluate_oxford(
        idx, Q, gt,
        ev.ok_policy == "positive" ? OkPolicy::positive : OkPolicy::junk,
        ev.ap_variant == "rectangular" ? ApVariant::rectangular
                                       : ApVariant::trapezoidal,
        detail::resolve_threads(ev.threads));
    detail::write_report(report, ev.format, ev.out);
  });
  auto* c_holidays = c_eval->add_subcommand("holidays", "leave-query-out group mAP protocol");
  add_common_eval(c_holidays, false);
  c_holidays->callback([&] {
    auto idx = Index::build(detail::load_set(ev.db, ev.db_ids), ev.normalize == "on");
    auto gt = read_ground_truth(ev.gt, GtForm::group);
    auto report = evaluate_holidays(idx, gt, detail::resolve_threads(ev.threads));
    detail::write_report(report, ev.format, ev.out);
  });
  auto* c_ukb = c_eval->add_subcommand("ukb", "top-4 same-object protocol");
  add_common_eval(c_ukb, false);
  c_ukb->callback([&] {
    auto idx = Index::build(detail::load_set(ev.db, ev.db_ids), ev.normalize == "on");
    auto gt = read_ground_truth(ev.gt, GtForm::group);
    auto report = evaluate_ukb(idx, gt, detail::resolve_threads(ev.threads));
    detail::write_report(report, ev.format, ev.out);
  });

  // synth -----------------------------------------------------------------
  auto* c_synth = app.add_subcommand("synth", "synthetic benchmark data");
  c_synth->require_subcommand(1);
  auto* c_gen = c_synth->add_subcommand("gen", "generate a grouped descriptor set");
  c_gen->add_option("--groups", sg.groups, "number of groups")->required()->check(CLI::Range(2, 1 << 24));
  c_gen->add_option("--size", sg.size, "members per group")->required()->check(CLI::Range(2, 1 << 24));
  c_gen->add_option("--dim", sg.dim, "descriptor dimension")->required()->check(CLI::Range(2, 1 << 20));
  c_gen->add_option("--sigma", sg.sigma, "isotropic noise before normalization")->check(CLI::NonNegativeNumber);
  c_gen->add_option("--nuisance-dim", sg.nuisance_dim, "nuisance subspace dimension")->check(CLI::NonNegativeNumber);
  c_gen->add_option("--nuisance-amp", sg.nuisance_amp, "nuisance amplitude")->check(CLI::NonNegativeNumber);
  c_gen->add_option("--intrinsic-dim", sg.intrinsic_dim, "confine centers to the first k axes")->check(CLI::NonNegativeNumber);
  c_gen->add_option("--seed", sg.seed, "generator seed");
  c_gen->add_flag("--emit-pairs", sg.emit_pairs, "also write nuisance training pairs");
  c_gen->add_option("--out", sg.out, "output prefix (<out>.ncd/.ids/.groups.tsv)")->required();
  c_gen->callback([&] {
    SynthSpec spec;
    spec.groups = sg.groups;
    spec.group_size = sg.size;
    spec.dim = sg.dim;
    spec.sigma = sg.sigma;
    spec.intrinsic_dim = sg.intrinsic_dim;
    spec.seed = sg.seed;
    if ((sg.nuisance_dim > 0) != (sg.nuisance_amp > 0.0))
      fail(ErrCode::UsageError,
           "--nuisance-dim and --nuisance-amp must be given together");
    if (sg.nuisance_dim > 0)
      spec.nuisance = NuisanceConfig{sg.nuisance_dim, sg.nuisance_amp};
    auto data = generate(spec);
    write_ncd(data.set, sg.out + ".ncd", sg.out + ".ids");
    write_ground_truth(data.gt, sg.out + ".groups.tsv");
    if (sg.emit_pairs)
      write_pairs_tsv(generate_nuisance_pairs(spec, data.gt), sg.out + ".pairs.tsv");
  });

  // convert ---------------------------------------------------------------
  auto* c_conv = app.add_subcommand("convert", "CSV <-> NCD interchange");
  c_conv->add_option("--mode", cv.mode, "csv2ncd|ncd2csv")->required()
      ->check(CLI::IsMember({"csv2ncd", "ncd2csv"}));
  c_conv->add_option("--in", cv.in, "input file")->required()->check(CLI::ExistingFile);
  c_conv->add_option("--ids", cv.ids, "input ids file (ncd2csv)");
  c_conv->add_option("--out", cv.out, "output file")->required();
  c_conv->add_option("--out-ids", cv.out_ids, "output ids file (csv2ncd)");
  c_conv->callback([&] {
    if (cv.mode == "csv2ncd") {
      detail::store_set(read_csv(cv.in), cv.out, cv.out_ids);
    } else {
      write_csv(detail::load_set(cv.in, cv.ids), cv.out);
    }
  });

  // run -------------------------------------------------------------------
  auto* c_run = app.add_subcommand("run", "execute a pipeline manifest");
  c_run->add_option("--manifest", rn.manifest, "manifest file, one command line per line")
      ->required()->check(CLI::ExistingFile);
  c_run->callback([&] { exit_code = run_manifest(rn.manifest); });

  try {
    auto args = detail::merge_config(argv);
    std::vector<const char*> cargv;
    cargv.push_back("ncr");
    for (const auto& a : args) cargv.push_back(a.c_str());
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the parse diagnostic
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_class();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

}  // namespace ncr::cli
