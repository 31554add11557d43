#include "tapscope/config_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "tapscope/dataset.hpp"
#include "tapscope/errors.hpp"

namespace tapscope {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_num(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* b = text.data();
  const char* e = text.data() + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw ConfigError("bad numeric value for " + key + ": '" + text + "'");
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  std::int64_t v = 0;
  const char* b = text.data();
  const char* e = text.data() + text.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc{} || p != e)
    throw ConfigError("bad integer value for " + key + ": '" + text + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(',', start);
    const std::string item =
        trim(pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start));
    if (item.empty()) throw ConfigError("empty entry in list for " + key);
    out.push_back(parse_num(key, item));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

LinkConfig load_link_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    if (!kv.emplace(key, value).second)
      throw ConfigError("duplicate key: " + key);
  }

  LinkConfig cfg;
  bool have_n_spans = false;
  bool have_losses = false;
  std::vector<double> losses;

  for (const auto& [key, value] : kv) {
    if (key == "n_spans") {
      cfg.n_spans = static_cast<int>(parse_int(key, value));
      have_n_spans = true;
    } else if (key == "span_loss_db") {
      losses = parse_list(key, value);
      have_losses = true;
    } else if (key == "launch_power_dbm") {
      cfg.launch_power_dbm = parse_num(key, value);
    } else if (key == "booster_target_dbm") {
      cfg.booster_target_dbm = parse_num(key, value);
    } else if (key == "pre_booster_loss_db") {
      cfg.pre_booster_loss_db = parse_num(key, value);
    } else if (key == "noise_figure_db") {
      cfg.noise_figure_db = parse_num(key, value);
    } else if (key == "center_frequency_thz") {
      cfg.center_frequency_thz = parse_num(key, value);
    } else if (key == "ref_bandwidth_ghz") {
      cfg.ref_bandwidth_ghz = parse_num(key, value);
    } else if (key == "symbol_rate_gbaud") {
      cfg.symbol_rate_gbaud = parse_num(key, value);
    } else if (key == "power_noise_sigma_db") {
      cfg.power_noise_sigma_db = parse_num(key, value);
    } else if (key == "osnr_noise_sigma_db") {
      cfg.osnr_noise_sigma_db = parse_num(key, value);
    } else if (key == "n_bits_per_ber") {
      cfg.n_bits_per_ber = parse_int(key, value);
    } else {
      throw ConfigError("unknown key: " + key);
    }
  }

  if (have_n_spans && cfg.n_spans < 1) throw ConfigError("n_spans must be >= 1");
  if (have_losses) {
    if (losses.size() == 1 && (have_n_spans || cfg.n_spans >= 1)) {
      cfg.span_loss_db.assign(cfg.n_spans, losses[0]);
    } else {
      if (have_n_spans && losses.size() != static_cast<std::size_t>(cfg.n_spans))
        throw ConfigError("span_loss_db has " + std::to_string(losses.size()) +
                          " entries but n_spans = " + std::to_string(cfg.n_spans));
      cfg.span_loss_db = losses;
      cfg.n_spans = static_cast<int>(losses.size());
    }
  } else if (have_n_spans) {
    cfg.span_loss_db.assign(cfg.n_spans, 10.0);
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

LinkConfig load_link_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  return load_link_config(in);
}

void write_link_config(const LinkConfig& cfg, std::ostream& out) {
  out << "n_spans = " << cfg.n_spans << '\n';
  out << "span_loss_db = ";
  for (std::size_t i = 0; i < cfg.span_loss_db.size(); ++i)
    out << (i ? "," : "") << format_double(cfg.span_loss_db[i]);
  out << '\n';
  out << "launch_power_dbm = " << format_double(cfg.launch_power_dbm) << '\n';
  out << "booster_target_dbm = " << format_double(cfg.booster_target_dbm) << '\n';
  out << "pre_booster_loss_db = " << format_double(cfg.pre_booster_loss_db) << '\n';
  out << "noise_figure_db = " << format_double(cfg.noise_figure_db) << '\n';
  out << "center_frequency_thz = " << format_double(cfg.center_frequency_thz) << '\n';
  out << "ref_bandwidth_ghz = " << format_double(cfg.ref_bandwidth_ghz) << '\n';
  out << "symbol_rate_gbaud = " << format_double(cfg.symbol_rate_gbaud) << '\n';
  out << "power_noise_sigma_db = " << format_double(cfg.power_noise_sigma_db) << '\n';
  out << "osnr_noise_sigma_db = " << format_double(cfg.osnr_noise_sigma_db) << '\n';
  out << "n_bits_per_ber = " << cfg.n_bits_per_ber << '\n';
}

}  // namespace tapscope
