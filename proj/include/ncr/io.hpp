#pragma once

// File formats
//
//   NCD1 descriptor container (binary, little-endian):
//     bytes 0..3   magic "NCD1"
//     bytes 4..7   u32 n   (rows)
//     bytes 8..11  u32 d   (columns)
//     bytes 12..   n*d IEEE-754 binary32 values, row-major
//   A companion UTF-8 ids file carries one id per line; line i belongs to
//   row i. Ids are unique, non-empty, and free of tabs and newlines.
//
//   NCP1 PCA model (binary, little-endian):
//     magic "NCP1", u32 d, u32 D, f32 mean[d], f32 eigvals[D],
//     f32 components[D*d] row-major. Eigenvalues are stored non-increasing.
//
//   NCW1 projection model (binary, little-endian):
//     magic "NCW1", u32 d_in, u32 D, f32 W[D*d_in] row-major.
//   An optional manifest (TSV: key\tvalue) written alongside records the
//   hyperparameters and the file name of the PCA pre-stage, if any.
//
//   Ground truth (TSV):
//     ranked form: "<query_id>\t<good|ok|junk>\t<item_id>" per line
//     group form:  "<item_id>\t<group_id>" per line
//
//   Match graph (TSV): one undirected edge "<id_a>\t<id_b>" per line.
//   Pair list (TSV): "<id_a>\t<id_b>\t<pos|neg>" per line.
//
// All readers validate sizes and invariants before constructing objects and
// report malformed input as typed errors.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ncr/core.hpp"
#include "ncr/errors.hpp"
#include "ncr/pairs.hpp"
#include "ncr/pca.hpp"
#include "ncr/projection.hpp"

namespace ncr {

enum class GtForm { ranked, group };

struct QueryRelevance {
  std::set<std::string> good, ok, junk;
};

// Per-query relevance tiers (ranked form) or flat group labels (group form).
struct GroundTruth {
  GtForm form = GtForm::group;
  std::map<std::string, QueryRelevance> ranked;   // query id -> tiers
  std::map<std::string, std::string> group_of;    // item id -> group id

  // Group id -> sorted member ids (group form only).
  std::map<std::string, std::vector<std::string>> groups() const {
    std::map<std::string, std::vector<std::string>> g;
    for (const auto& [item, grp] : group_of) g[grp].push_back(item);
    return g;  // members sorted because group_of iterates in id order
  }
};

namespace detail {

inline std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrCode::IoFailure, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  if (f.bad()) fail(ErrCode::IoFailure, "read failed: " + path);
  return bytes;
}

inline void write_file_bytes(const std::string& path,
                             const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) fail(ErrCode::IoFailure, "cannot open " + path + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f.good()) fail(ErrCode::IoFailure, "write failed: " + path);
}

inline void put_u32le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xFF));
}

inline std::uint32_t get_u32le(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) |
         (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void put_f32le(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32le(out, bits);
}

inline float get_f32le(const std::uint8_t* p) {
  std::uint32_t bits = get_u32le(p);
  float v;
  std::memcpy(&v, &bits, 4);
  return v;
}

inline float to_f32_checked(double v, const std::string& what) {
  auto f = static_cast<float>(v);
  if (!std::isfinite(f))
    fail(ErrCode::ValidationError,
         what + " value " + std::to_string(v) + " not representable as f32");
  return f;
}

// Split into lines, tolerating a trailing newline and CRLF endings.
inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

inline std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  for (;;) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

inline std::string read_text_file(const std::string& path) {
  auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

inline double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    fail(ErrCode::ParseError, where + ": not a number: '" + s + "'");
  return v;
}

inline std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// NCD descriptor container

inline void write_ncd(const DescriptorSet& set, const std::string& path,
                      const std::string& ids_path) {
  const auto n = static_cast<std::uint32_t>(set.size());
  const auto d = static_cast<std::uint32_t>(set.dim());
  std::vector<std::uint8_t> out;
  out.reserve(12 + 4ull * n * d);
  out.insert(out.end(), {'N', 'C', 'D', '1'});
  detail::put_u32le(out, n);
  detail::put_u32le(out, d);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < d; ++j)
      detail::put_f32le(out, detail::to_f32_checked(
                                 set.data()(i, j), "descriptor " + set.id(i)));
  detail::write_file_bytes(path, out);

  std::string ids;
  for (std::uint32_t i = 0; i < n; ++i) {
    ids += set.id(i);
    ids += '\n';
  }
  detail::write_file_bytes(ids_path,
                           std::vector<std::uint8_t>(ids.begin(), ids.end()));
}

inline DescriptorSet read_ncd(const std::string& path,
                              const std::string& ids_path) {
  auto bytes = detail::read_file_bytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "NCD1", 4) != 0)
    fail(ErrCode::BadMagic, path + ": not an NCD1 file");
  const std::uint64_t n = detail::get_u32le(bytes.data() + 4);
  const std::uint64_t d = detail::get_u32le(bytes.data() + 8);
  if (n < 1 || d < 1)
    fail(ErrCode::ValidationError, path + ": header requires n>=1 and d>=1");
  const std::uint64_t payload = bytes.size() - 12;
  if (payload % 4 != 0 || payload / 4 != n * d)
    fail(ErrCode::SizeMismatch,
         path + ": expected " + std::to_string(12 + 4 * n * d) +
             " bytes, file has " + std::to_string(bytes.size()));

  auto id_lines = detail::split_lines(detail::read_text_file(ids_path));
  if (id_lines.size() != n)
    fail(ErrCode::IdCountMismatch,
         ids_path + ": header n=" + std::to_string(n) + " but " +
             std::to_string(id_lines.size()) + " id lines");
  for (std::size_t i = 0; i < id_lines.size(); ++i)
    if (id_lines[i].empty())
      fail(ErrCode::ParseError,
           ids_path + ":" + std::to_string(i + 1) + ": empty id line");

  RowMatrix data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  const std::uint8_t* p = bytes.data() + 12;
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < d; ++j, p += 4)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(detail::get_f32le(p));
  // DescriptorSet construction enforces uniqueness and finiteness.
  return DescriptorSet(std::move(id_lines), std::move(data));
}

// ---------------------------------------------------------------------------
// NCP1 PCA model

inline void write_ncp(const PcaModel& model, const std::string& path) {
  const auto d = static_cast<std::uint32_t>(model.dim_in());
  const auto D = static_cast<std::uint32_t>(model.dim_out());
  std::vector<std::uint8_t> out;
  out.reserve(12 + 4ull * (d + D + static_cast<std::uint64_t>(D) * d));
  out.insert(out.end(), {'N', 'C', 'P', '1'});
  detail::put_u32le(out, d);
  detail::put_u32le(out, D);
  for (std::uint32_t j = 0; j < d; ++j)
    detail::put_f32le(out, detail::to_f32_checked(model.mean[j], "mean"));
  for (std::uint32_t k = 0; k < D; ++k)
    detail::put_f32le(out, detail::to_f32_checked(model.eigvals[k], "eigval"));
  for (std::uint32_t k = 0; k < D; ++k)
    for (std::uint32_t j = 0; j < d; ++j)
      detail::put_f32le(out,
                        detail::to_f32_checked(model.components(k, j), "component"));
  detail::write_file_bytes(path, out);
}

inline PcaModel read_ncp(const std::string& path) {
  auto bytes = detail::read_file_bytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "NCP1", 4) != 0)
    fail(ErrCode::BadMagic, path + ": not an NCP1 file");
  const std::uint64_t d = detail::get_u32le(bytes.data() + 4);
  const std::uint64_t D = detail::get_u32le(bytes.data() + 8);
  if (d < 1 || D < 1 || D > d)
    fail(ErrCode::ValidationError,
         path + ": header requires 1 <= D <= d");
  const std::uint64_t payload = bytes.size() - 12;
  if (payload % 4 != 0 || payload / 4 != d + D + D * d)
    fail(ErrCode::SizeMismatch, path + ": file size does not match header");

  PcaModel model;
  model.mean.resize(static_cast<Eigen::Index>(d));
  model.eigvals.resize(static_cast<Eigen::Index>(D));
  model.components.resize(static_cast<Eigen::Index>(D),
                          static_cast<Eigen::Index>(d));
  const std::uint8_t* p = bytes.data() + 12;
  for (std::uint64_t j = 0; j < d; ++j, p += 4)
    model.mean[static_cast<Eigen::Index>(j)] = detail::get_f32le(p);
  for (std::uint64_t k = 0; k < D; ++k, p += 4)
    model.eigvals[static_cast<Eigen::Index>(k)] = detail::get_f32le(p);
  for (std::uint64_t k = 0; k < D; ++k)
    for (std::uint64_t j = 0; j < d; ++j, p += 4)
      model.components(static_cast<Eigen::Index>(k),
                       static_cast<Eigen::Index>(j)) = detail::get_f32le(p);

  if (!model.mean.allFinite() || !model.eigvals.allFinite() ||
      !model.components.allFinite())
    fail(ErrCode::ValidationError, path + ": model contains NaN or Inf");
  for (Eigen::Index k = 0; k < model.eigvals.size(); ++k) {
    if (k > 0 && model.eigvals[k] > model.eigvals[k - 1])
      fail(ErrCode::ValidationError,
           path + ": eigenvalues not in non-increasing order");
    if (model.eigvals[k] < -1e-10)
      fail(ErrCode::ValidationError, path + ": negative eigenvalue");
    model.eigvals[k] = std::max(model.eigvals[k], 0.0);
  }
  // Orthonormality survives f32 rounding only approximately; this tolerance
  // rejects garbage without rejecting round-tripped models.
  Eigen::MatrixXd gram = model.components * model.components.transpose();
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > 1e-3)
    fail(ErrCode::ValidationError, path + ": components are not orthonormal");
  return model;
}

// ---------------------------------------------------------------------------
// NCW1 projection model + manifest

inline void write_ncw(const RowMatrix& W, const std::string& path) {
  const auto d_in = static_cast<std::uint32_t>(W.cols());
  const auto D = static_cast<std::uint32_t>(W.rows());
  std::vector<std::uint8_t> out;
  out.reserve(12 + 4ull * D * d_in);
  out.insert(out.end(), {'N', 'C', 'W', '1'});
  detail::put_u32le(out, d_in);
  detail::put_u32le(out, D);
  for (std::uint32_t k = 0; k < D; ++k)
    for (std::uint32_t j = 0; j < d_in; ++j)
      detail::put_f32le(out, detail::to_f32_checked(W(k, j), "W"));
  detail::write_file_bytes(path, out);
}

inline RowMatrix read_ncw(const std::string& path) {
  auto bytes = detail::read_file_bytes(path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "NCW1", 4) != 0)
    fail(ErrCode::BadMagic, path + ": not an NCW1 file");
  const std::uint64_t d_in = detail::get_u32le(bytes.data() + 4);
  const std::uint64_t D = detail::get_u32le(bytes.data() + 8);
  if (d_in < 1 || D < 1 || D > d_in)
    fail(ErrCode::ValidationError, path + ": header requires 1 <= D <= d_in");
  const std::uint64_t payload = bytes.size() - 12;
  if (payload % 4 != 0 || payload / 4 != D * d_in)
    fail(ErrCode::SizeMismatch, path + ": file size does not match header");
  RowMatrix W(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(d_in));
  const std::uint8_t* p = bytes.data() + 12;
  for (std::uint64_t k = 0; k < D; ++k)
    for (std::uint64_t j = 0; j < d_in; ++j, p += 4)
      W(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) =
          detail::get_f32le(p);
  if (!W.allFinite())
    fail(ErrCode::ValidationError, path + ": W contains NaN or Inf");
  return W;
}

// ---------------------------------------------------------------------------
// key\tvalue TSV

inline void write_kv_tsv(const std::vector<std::pair<std::string, std::string>>& kv,
                         const std::string& path) {
  std::string text;
  for (const auto& [k, v] : kv) text += k + "\t" + v + "\n";
  detail::write_file_bytes(path,
                           std::vector<std::uint8_t>(text.begin(), text.end()));
}

inline std::map<std::string, std::string> read_kv_tsv(const std::string& path) {
  std::map<std::string, std::string> kv;
  auto lines = detail::split_lines(detail::read_text_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = detail::split_tabs(lines[i]);
    if (fields.size() != 2 || fields[0].empty())
      fail(ErrCode::ParseError,
           path + ":" + std::to_string(i + 1) + ": expected key\\tvalue");
    if (!kv.emplace(fields[0], fields[1]).second)
      fail(ErrCode::ParseError,
           path + ":" + std::to_string(i + 1) + ": duplicate key " + fields[0]);
  }
  return kv;
}

// Writes model.ncw plus <path>.manifest.tsv; a PCA pre-stage goes to
// <path>.pre.ncp and is referenced from the manifest by file name.
inline void save_projection_model(const ProjectionModel& model,
                                  const std::string& path) {
  write_ncw(model.W, path);
  std::string pre_name = "-";
  if (model.pre_pca) {
    pre_name = std::filesystem::path(path + ".pre.ncp").filename().string();
    write_ncp(*model.pre_pca, path + ".pre.ncp");
  }
  char buf[64];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::vector<std::pair<std::string, std::string>> kv = {
      {"format", "ncw1"},
      {"d_in", std::to_string(model.dim_in())},
      {"dim_out", std::to_string(model.dim_out())},
      {"pre_pca", pre_name},
      {"tau_pos", fmt(model.hyper.tau_pos)},
      {"tau_neg", fmt(model.hyper.tau_neg)},
      {"eta0", fmt(model.hyper.eta0)},
      {"decay", fmt(model.hyper.decay)},
      {"epochs", std::to_string(model.hyper.epochs)},
      {"batch", std::to_string(model.hyper.batch)},
      {"seed", std::to_string(model.hyper.seed)},
  };
  write_kv_tsv(kv, path + ".manifest.tsv");
}

inline ProjectionModel load_projection_model(const std::string& path) {
  ProjectionModel model;
  model.W = read_ncw(path);
  model.hyper.D = model.W.rows();
  const std::string manifest = path + ".manifest.tsv";
  if (std::filesystem::exists(manifest)) {
    auto kv = read_kv_tsv(manifest);
    auto it = kv.find("pre_pca");
    if (it != kv.end() && it->second != "-") {
      std::filesystem::path pre(it->second);
      if (pre.is_relative())
        pre = std::filesystem::path(path).parent_path() / pre;
      model.pre_pca = read_ncp(pre.string());
      if (model.pre_pca->dim_out() != model.W.cols())
        fail(ErrCode::DimensionMismatch,
             manifest + ": pre-stage output dim " +
                 std::to_string(model.pre_pca->dim_out()) +
                 " does not match W columns " + std::to_string(model.W.cols()));
    }
    auto num = [&kv](const char* key, double& dst) {
      auto jt = kv.find(key);
      if (jt != kv.end()) dst = detail::parse_double(jt->second, key);
    };
    num("tau_pos", model.hyper.tau_pos);
    num("tau_neg", model.hyper.tau_neg);
    num("eta0", model.hyper.eta0);
    num("decay", model.hyper.decay);
    if (auto jt = kv.find("epochs"); jt != kv.end())
      model.hyper.epochs = static_cast<int>(
          detail::parse_double(jt->second, "epochs"));
    if (auto jt = kv.find("batch"); jt != kv.end())
      model.hyper.batch = static_cast<std::size_t>(
          detail::parse_double(jt->second, "batch"));
    if (auto jt = kv.find("seed"); jt != kv.end())
      model.hyper.seed = static_cast<std::uint64_t>(
          detail::parse_double(jt->second, "seed"));
  }
  return model;
}

// ---------------------------------------------------------------------------
// Ground truth

inline GroundTruth read_ground_truth(const std::string& path, GtForm form) {
  GroundTruth gt;
  gt.form = form;
  auto lines = detail::split_lines(detail::read_text_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = detail::split_tabs(lines[i]);
    const std::string where = path + ":" + std::to_string(i + 1);
    if (form == GtForm::ranked) {
      if (fields.size() != 3 || fields[0].empty() || fields[2].empty())
        fail(ErrCode::ParseError,
             where + ": expected query\\t(good|ok|junk)\\titem");
      QueryRelevance& q = gt.ranked[fields[0]];
      const std::string& id = fields[2];
      bool in_good = q.good.count(id), in_ok = q.ok.count(id),
           in_junk = q.junk.count(id);
      std::set<std::string>* dst = nullptr;
      if (fields[1] == "good") dst = &q.good;
      else if (fields[1] == "ok") dst = &q.ok;
      else if (fields[1] == "junk") dst = &q.junk;
      else
        fail(ErrCode::ParseError, where + ": unknown tier '" + fields[1] + "'");
      bool already_here = dst->count(id) != 0;
      if ((in_good || in_ok || in_junk) && !already_here)
        fail(ErrCode::OverlapError,
             "query " + fields[0] + ": id " + id + " in multiple tiers");
      dst->insert(id);
    } else {
      if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
        fail(ErrCode::ParseError, where + ": expected item\\tgroup");
      auto [it, fresh] = gt.group_of.emplace(fields[0], fields[1]);
      if (!fresh && it->second != fields[1])
        fail(ErrCode::ParseError,
             where + ": item " + fields[0] + " listed with two groups");
    }
  }
  return gt;
}

inline void write_ground_truth(const GroundTruth& gt, const std::string& path) {
  std::string text;
  if (gt.form == GtForm::ranked) {
    for (const auto& [query, rel] : gt.ranked) {
      for (const auto& id : rel.good) text += query + "\tgood\t" + id + "\n";
      for (const auto& id : rel.ok) text += query + "\tok\t" + id + "\n";
      for (const auto& id : rel.junk) text += query + "\tjunk\t" + id + "\n";
    }
  } else {
    for (const auto& [item, grp] : gt.group_of)
      text += item + "\t" + grp + "\n";
  }
  detail::write_file_bytes(path,
                           std::vector<std::uint8_t>(text.begin(), text.end()));
}

// ---------------------------------------------------------------------------
// Match graph and pair lists

inline MatchGraph read_match_graph(const std::string& path) {
  MatchGraph g;
  auto lines = detail::split_lines(detail::read_text_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = detail::split_tabs(lines[i]);
    const std::string where = path + ":" + std::to_string(i + 1);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      fail(ErrCode::ParseError, where + ": expected id_a\\tid_b");
    if (fields[0] == fields[1])
      fail(ErrCode::SelfLoop, where + ": self loop on " + fields[0]);
    g.add_edge(fields[0], fields[1]);  // duplicate edges collapse
  }
  return g;
}

inline void write_pairs_tsv(const PairSet& pairs, const std::string& path) {
  std::string text;
  for (const auto& [a, b] : pairs.positives)
    text += a + "\t" + b + "\tpos\n";
  for (const auto& [a, b] : pairs.negatives)
    text += a + "\t" + b + "\tneg\n";
  detail::write_file_bytes(path,
                           std::vector<std::uint8_t>(text.begin(), text.end()));
}

inline PairSet read_pairs_tsv(const std::string& path) {
  PairSet out;
  auto lines = detail::split_lines(detail::read_text_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = detail::split_tabs(lines[i]);
    const std::string where = path + ":" + std::to_string(i + 1);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty())
      fail(ErrCode::ParseError, where + ": expected id_a\\tid_b\\t(pos|neg)");
    if (fields[2] == "pos")
      out.positives.emplace_back(fields[0], fields[1]);
    else if (fields[2] == "neg")
      out.negatives.emplace_back(fields[0], fields[1]);
    else
      fail(ErrCode::ParseError, where + ": unknown label '" + fields[2] + "'");
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// CSV interchange: "id,v1,...,vd" per line

inline DescriptorSet read_csv(const std::string& path) {
  auto lines = detail::split_lines(detail::read_text_file(path));
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const std::string where = path + ":" + std::to_string(i + 1);
    std::vector<std::string> fields;
    std::stringstream ss(lines[i]);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() < 2 || fields[0].empty())
      fail(ErrCode::ParseError, where + ": expected id,v1,...");
    ids.push_back(fields[0]);
    std::vector<double> row;
    row.reserve(fields.size() - 1);
    for (std::size_t j = 1; j < fields.size(); ++j)
      row.push_back(detail::parse_double(fields[j], where));
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrCode::ParseError, where + ": inconsistent column count");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrCode::ValidationError, path + ": no data rows");
  RowMatrix data(static_cast<Eigen::Index>(rows.size()),
                 static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
  return DescriptorSet(std::move(ids), std::move(data));
}

inline void write_csv(const DescriptorSet& set, const std::string& path) {
  std::string text;
  char buf[64];
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.id(i).find(',') != std::string::npos)
      fail(ErrCode::ValidationError,
           "id contains a comma, not expressible in CSV: " + set.id(i));
    text += set.id(i);
    for (Eigen::Index j = 0; j < set.dim(); ++j) {
      // %.17g keeps the exact double, so csv -> ncd -> csv round trips
      std::snprintf(buf, sizeof buf, "%.17g",
                    set.data()(static_cast<Eigen::Index>(i), j));
      text += ',';
      text += buf;
    }
    text += '\n';
  }
  detail::write_file_bytes(path,
                           std::vector<std::uint8_t>(text.begin(), text.end()));
}

}  // namespace ncr
