#include "lrvs/ensemble_io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "lrvs/error.hpp"

namespace lrvs {

namespace {

constexpr const char* kFixedColumns[] = {"step", "hash", "cut_edges", "outcome"};

double outcome_code(StepOutcome o) {
  switch (o) {
    case StepOutcome::Start: return 0;
    case StepOutcome::Accepted: return 1;
    case StepOutcome::Rejected: return 2;
    case StepOutcome::Failed: return 3;
  }
  return -1;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, 16);
  std::string s(buf, ptr);
  return std::string(16 - s.size(), '0') + s;
}

std::vector<std::string> ensemble_header(const std::vector<std::string>& elections, std::uint32_t k) {
  std::vector<std::string> cols(std::begin(kFixedColumns), std::end(kFixedColumns));
  for (const auto& e : elections) {
    for (std::uint32_t d = 1; d <= k; ++d) cols.push_back(e + ".share_" + std::to_string(d));
    for (const auto& m : scalar_metric_names()) cols.push_back(e + "." + m);
  }
  return cols;
}

EnsembleTable::EnsembleTable(std::vector<std::string> elections, std::uint32_t k)
    : elections_(std::move(elections)), k_(k) {
  for (const auto& c : ensemble_header(elections_, k_))
    if (c != "hash") {
      index_.emplace(c, names_.size());
      names_.push_back(c);
    }
  data_.assign(names_.size(), {});
}

const std::vector<double>& EnsembleTable::column(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw std::out_of_range("no ensemble column '" + name + "'");
  return data_[it->second];
}

std::vector<double> EnsembleTable::sorted_shares(std::size_t row, const std::string& election) const {
  std::vector<double> out;
  out.reserve(k_);
  for (std::uint32_t d = 1; d <= k_; ++d) out.push_back(column(election + ".share_" + std::to_string(d))[row]);
  return out;
}

void EnsembleTable::append_row(std::uint64_t hash, std::vector<double> values) {
  if (values.size() != names_.size()) throw std::invalid_argument("ensemble row has wrong width");
  hashes_.push_back(hash);
  for (std::size_t c = 0; c < values.size(); ++c) data_[c].push_back(values[c]);
}

namespace {

std::vector<double> record_values(const EnsembleRecord& r) {
  std::vector<double> values{static_cast<double>(r.step), static_cast<double>(r.cut_edges), outcome_code(r.outcome)};
  for (const auto& m : r.metrics) {
    values.insert(values.end(), m.sorted_shares.begin(), m.sorted_shares.end());
    for (double v : scalar_metric_values(m)) values.push_back(v);
  }
  return values;
}

}  // namespace

void EnsembleTable::append(const EnsembleRecord& record) {
  if (record.metrics.size() != elections_.size())
    throw std::invalid_argument("record has wrong number of elections");
  append_row(record.hash, record_values(record));
}

std::string format_record(const EnsembleRecord& record) {
  const auto values = record_values(record);
  std::string line = std::to_string(record.step);
  line += ',';
  line += hex64(record.hash);
  for (std::size_t i = 1; i < values.size(); ++i) {
    line += ',';
    line += format_double(values[i]);
  }
  line += '\n';
  return line;
}

EnsembleWriter::EnsembleWriter(const std::filesystem::path& path, const std::vector<std::string>& elections,
                               std::uint32_t k,
                               const std::vector<std::pair<std::string, std::string>>& manifest,
                               std::size_t flush_every)
    : out_(path, std::ios::binary | std::ios::trunc), flush_every_(flush_every == 0 ? 1 : flush_every) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [key, value] : manifest) out_ << "# " << key << '=' << value << '\n';
  const auto header = ensemble_header(elections, k);
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
  out_.flush();
}

void EnsembleWriter::write(const EnsembleRecord& record) {
  out_ << format_record(record);
  if (++pending_ >= flush_every_) {
    out_.flush();
    pending_ = 0;
  }
}

void EnsembleWriter::close() {
  if (out_.is_open()) {
    out_.flush();
    out_.close();
  }
}

EnsembleTable read_ensemble(const std::filesystem::path& path, std::map<std::string, std::string>* manifest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(ErrorKind::Parse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  // An interrupted writer can leave a partial last line.
  if (!text.empty() && text.back() != '\n') text.erase(text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1);

  std::istringstream lines(text);
  std::string line;
  std::vector<std::string> header;
  std::vector<std::string> elections;
  std::uint32_t k = 0;
  EnsembleTable table;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (manifest) {
        auto body = line.substr(line.find_first_not_of("# "));
        auto eq = body.find('=');
        if (eq != std::string::npos) (*manifest)[body.substr(0, eq)] = body.substr(eq + 1);
      }
      continue;
    }
    auto fields = split(line, ',');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (header.empty()) {
      header = fields;
      if (header.size() < 4 || !std::equal(std::begin(kFixedColumns), std::end(kFixedColumns), header.begin()))
        throw DataError(ErrorKind::Schema, where + ": not an ensemble header");
      for (std::size_t c = 4; c < header.size(); ++c) {
        const auto dot = header[c].rfind('.');
        if (dot == std::string::npos) throw DataError(ErrorKind::Schema, where + ": bad column '" + header[c] + "'");
        const auto election = header[c].substr(0, dot);
        if (elections.empty() || elections.back() != election) elections.push_back(election);
        if (elections.size() == 1 && header[c].compare(dot + 1, 6, "share_") == 0) ++k;
      }
      if (header != ensemble_header(elections, k))
        throw DataError(ErrorKind::Schema, where + ": column layout does not match the ensemble contract");
      table = EnsembleTable(elections, k);
      continue;
    }
    if (fields.size() != header.size())
      throw DataError(ErrorKind::Parse, where + ": expected " + std::to_string(header.size()) + " fields");
    std::uint64_t hash = 0;
    {
      const auto& h = fields[1];
      auto [ptr, ec] = std::from_chars(h.data(), h.data() + h.size(), hash, 16);
      if (ec != std::errc() || ptr != h.data() + h.size())
        throw DataError(ErrorKind::Parse, where + ": bad hash '" + h + "'");
    }
    std::vector<double> values;
    values.reserve(fields.size() - 1);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == 1) continue;
      double v = 0.0;
      const auto& f = fields[c];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw DataError(ErrorKind::Parse, where + ": bad number '" + f + "'");
      values.push_back(v);
    }
    table.append_row(hash, std::move(values));
  }
  if (header.empty()) throw DataError(ErrorKind::Schema, path.string() + ": missing ensemble header");
  if (manifest && manifest->count("config_digest")) table.provenance = manifest->at("config_digest");
  return table;
}

EnsembleRecord make_record(const DualGraph& graph, std::uint64_t step, const ChainState& state,
                           StepOutcome outcome, const std::vector<std::size_t>& elections,
                           const DislocationModel* dislocation, const MetricOptions& options) {
  EnsembleRecord r;
  r.step = step;
  r.hash = canonical_hash(state.plan());
  r.cut_edges = state.cut_edge_count();
  r.outcome = outcome;
  const auto tallies = tally(graph, state.plan());
  r.metrics.reserve(elections.size());
  for (std::size_t e : elections) r.metrics.push_back(compute_metrics(state.plan(), tallies, e, dislocation, options));
  return r;
}

}  // namespace lrvs
