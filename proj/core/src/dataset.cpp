#include "tapscope/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "tapscope/errors.hpp"

namespace tapscope {

std::vector<std::string> canonical_feature_names(int n_spans) {
  std::vector<std::string> names = {"osnr_db", "ber", "p_rx_dbm", "p_tx_dbm",
                                    "p_link_dbm"};
  for (int i = 1; i <= n_spans; ++i)
    names.push_back("p_span" + std::to_string(i) + "_dbm");
  return names;
}

std::vector<CaseSpec> default_case_set(const LinkConfig& cfg, double loss_db) {
  std::vector<CaseSpec> cases = {
      {"normal", TapEvent::none()},
      {"tx", TapEvent::transmitter(loss_db)},
      {"prebooster", TapEvent::pre_booster(loss_db)},
  };
  for (int i = 1; i <= cfg.n_spans; ++i)
    cases.push_back({"span" + std::to_string(i), TapEvent::span(i, loss_db)});
  return cases;
}

std::vector<CaseSpec> severity_pair(double loss_db) {
  return {{"normal", TapEvent::none()},
          {"prebooster", TapEvent::pre_booster(loss_db)}};
}

namespace {

void check_cases(const LinkConfig& cfg, const std::vector<CaseSpec>& cases,
                 int n_per_case) {
  if (cases.empty()) throw std::invalid_argument("no cases given");
  if (n_per_case < 1) throw std::invalid_argument("n_per_case must be >= 1");
  std::set<std::string> seen;
  for (const auto& c : cases) {
    if (!seen.insert(c.label).second)
      throw std::invalid_argument("duplicate case label: " + c.label);
    c.event.validate(cfg);
  }
}

}  // namespace

Dataset generate_dataset(const LinkConfig& cfg, const std::vector<CaseSpec>& cases,
                         int n_per_case, std::uint64_t seed) {
  cfg.validate();
  check_cases(cfg, cases, n_per_case);

  Dataset ds;
  ds.feature_names = canonical_feature_names(cfg.n_spans);
  ds.samples.reserve(cases.size() * n_per_case);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    RandomStream rng = RandomStream::substream(seed, i);
    for (int j = 0; j < n_per_case; ++j) {
      ds.samples.push_back(sample_opm(cfg, cases[i].event, rng));
      ds.labels.push_back(cases[i].label);
      ds.events.push_back(cases[i].event);
    }
  }
  return ds;
}

Dataset make_noiseless_dataset(const LinkConfig& cfg,
                               const std::vector<CaseSpec>& cases, int n_per_case) {
  cfg.validate();
  check_cases(cfg, cases, n_per_case);

  Dataset ds;
  ds.feature_names = canonical_feature_names(cfg.n_spans);
  ds.samples.reserve(cases.size() * n_per_case);
  for (const auto& c : cases) {
    const OpmSample s = propagate(cfg, c.event);
    for (int j = 0; j < n_per_case; ++j) {
      ds.samples.push_back(s);
      ds.labels.push_back(c.label);
      ds.events.push_back(c.event);
    }
  }
  return ds;
}

namespace {

double feature_value(const OpmSample& s, const std::string& name,
                     const FeatureOptions& opts) {
  if (name == "osnr_db") return s.osnr_db;
  if (name == "ber") return opts.log_ber ? std::log10(s.ber + 1e-12) : s.ber;
  if (name == "p_rx_dbm") return s.p_rx_dbm;
  if (name == "p_tx_dbm") return s.p_tx_dbm;
  if (name == "p_link_dbm") return s.p_link_dbm;
  if (name.rfind("p_span", 0) == 0 && name.size() > 10 &&
      name.compare(name.size() - 4, 4, "_dbm") == 0) {
    const std::string idx = name.substr(6, name.size() - 10);
    int i = 0;
    auto [p, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), i);
    if (ec == std::errc{} && p == idx.data() + idx.size() && i >= 1 &&
        static_cast<std::size_t>(i) <= s.p_span_dbm.size())
      return s.p_span_dbm[i - 1];
  }
  throw std::invalid_argument("unknown feature: " + name);
}

}  // namespace

FeatureMatrix select_features(const Dataset& ds, const std::vector<std::string>& subset,
                              const FeatureOptions& opts) {
  if (subset.empty()) throw std::invalid_argument("empty feature subset");
  if (ds.samples.empty()) throw std::invalid_argument("empty dataset");

  FeatureMatrix m;
  m.n_rows = ds.samples.size();
  m.n_cols = subset.size();
  m.feature_subset = subset;
  m.values.reserve(m.n_rows * m.n_cols);
  for (const auto& s : ds.samples)
    for (const auto& name : subset) m.values.push_back(feature_value(s, name, opts));
  return m;
}

FeatureMatrix standardize(const FeatureMatrix& m) {
  if (m.n_rows < 2) throw std::invalid_argument("standardize needs >= 2 rows");

  FeatureMatrix out = m;
  out.means.assign(m.n_cols, 0.0);
  out.stds.assign(m.n_cols, 0.0);
  out.constant_columns.assign(m.n_cols, 0);

  const double n = static_cast<double>(m.n_rows);
  for (std::size_t c = 0; c < m.n_cols; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < m.n_rows; ++r) mean += m.at(r, c);
    mean /= n;
    double var = 0.0;
    for (std::size_t r = 0; r < m.n_rows; ++r) {
      const double d = m.at(r, c) - mean;
      var += d * d;
    }
    const double std_dev = std::sqrt(var / n);
    out.means[c] = mean;
    out.stds[c] = std_dev;
    // Relative threshold: a column of exactly repeated readings still shows
    // a last-ulp nonzero variance.
    if (std_dev <= 1e-12 * std::max(1.0, std::fabs(mean))) {
      out.constant_columns[c] = 1;
      for (std::size_t r = 0; r < m.n_rows; ++r) out.at(r, c) = 0.0;
    } else {
      for (std::size_t r = 0; r < m.n_rows; ++r)
        out.at(r, c) = (m.at(r, c) - mean) / std_dev;
    }
  }
  out.standardized = true;
  return out;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                               std::chars_format::general, 17);
  return std::string(buf, p);
}

namespace {

std::string location_token(const TapEvent& e) {
  switch (e.location) {
    case TapLocation::None: return "none";
    case TapLocation::Transmitter: return "tx";
    case TapLocation::PreBooster: return "prebooster";
    case TapLocation::Span: return "span" + std::to_string(e.span_index);
  }
  throw std::invalid_argument("bad tap location");
}

TapEvent event_from_token(const std::string& token, double loss_db, int n_spans,
                          std::size_t line_no) {
  const auto fail = [&](const std::string& why) {
    throw CsvFormatError("line " + std::to_string(line_no) + ": " + why);
  };
  if (token == "none") {
    if (loss_db != 0.0) fail("location 'none' with nonzero loss_db");
    return TapEvent::none();
  }
  if (loss_db <= 0.0) fail("tap location with non-positive loss_db");
  if (token == "tx") return TapEvent::transmitter(loss_db);
  if (token == "prebooster") return TapEvent::pre_booster(loss_db);
  if (token.rfind("span", 0) == 0) {
    int i = 0;
    const char* b = token.data() + 4;
    const char* e = token.data() + token.size();
    auto [p, ec] = std::from_chars(b, e, i);
    if (ec == std::errc{} && p == e && i >= 1 && i <= n_spans)
      return TapEvent::span(i, loss_db);
  }
  fail("unknown location token '" + token + "'");
  return {};
}

double parse_double(const std::string& field, std::size_t line_no) {
  double v = 0.0;
  const char* b = field.data();
  const char* e = field.data() + field.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw CsvFormatError("line " + std::to_string(line_no) +
                         ": bad numeric field '" + field + "'");
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void to_csv(const Dataset& ds, std::ostream& out) {
  if (ds.samples.size() != ds.labels.size() || ds.samples.size() != ds.events.size())
    throw std::invalid_argument("dataset rows out of sync");
  const int n_spans =
      ds.samples.empty() ? static_cast<int>(ds.feature_names.size()) - 5
                         : static_cast<int>(ds.samples.front().p_span_dbm.size());

  out << "case_label,location,loss_db";
  for (const auto& name : canonical_feature_names(n_spans)) out << ',' << name;
  out << '\n';

  for (std::size_t r = 0; r < ds.samples.size(); ++r) {
    const auto& label = ds.labels[r];
    if (label.empty() || label.find_first_of(",\n\r") != std::string::npos)
      throw std::invalid_argument("case label not CSV-safe: '" + label + "'");
    const auto& s = ds.samples[r];
    if (static_cast<int>(s.p_span_dbm.size()) != n_spans)
      throw std::invalid_argument("inconsistent span counts across rows");
    out << label << ',' << location_token(ds.events[r]) << ','
        << format_double(ds.events[r].loss_db) << ',' << format_double(s.osnr_db)
        << ',' << format_double(s.ber) << ',' << format_double(s.p_rx_dbm) << ','
        << format_double(s.p_tx_dbm) << ',' << format_double(s.p_link_dbm);
    for (double p : s.p_span_dbm) out << ',' << format_double(p);
    out << '\n';
  }
}

void to_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  to_csv(ds, out);
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

Dataset from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvFormatError("empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_csv_line(line);
  if (header.size() < 9 || header[0] != "case_label" || header[1] != "location" ||
      header[2] != "loss_db")
    throw CsvFormatError("bad header: expected case_label,location,loss_db,...");
  const int n_spans = static_cast<int>(header.size()) - 8;
  const auto expected = canonical_feature_names(n_spans);
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (header[i + 3] != expected[i])
      throw CsvFormatError("bad header: expected feature column '" + expected[i] +
                           "', got '" + header[i + 3] + "'");

  Dataset ds;
  ds.feature_names = expected;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw CsvFormatError("line " + std::to_string(line_no) + ": expected " +
                           std::to_string(header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    if (fields[0].empty())
      throw CsvFormatError("line " + std::to_string(line_no) + ": empty case label");

    const double loss_db = parse_double(fields[2], line_no);
    OpmSample s;
    s.osnr_db = parse_double(fields[3], line_no);
    s.ber = parse_double(fields[4], line_no);
    s.p_rx_dbm = parse_double(fields[5], line_no);
    s.p_tx_dbm = parse_double(fields[6], line_no);
    s.p_link_dbm = parse_double(fields[7], line_no);
    s.p_span_dbm.resize(n_spans);
    for (int i = 0; i < n_spans; ++i) s.p_span_dbm[i] = parse_double(fields[8 + i], line_no);

    ds.labels.push_back(fields[0]);
    ds.events.push_back(event_from_token(fields[1], loss_db, n_spans, line_no));
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

Dataset from_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  return from_csv(in);
}

}  // namespace tapscope
