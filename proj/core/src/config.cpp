#include "holodet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include "holodet/error.hpp"
#include "holodet/formats.hpp"

namespace holodet {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Value conversions throw std::invalid_argument; the parser attaches position.
template <typename T>
T parse_scalar(std::string_view s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw std::invalid_argument("cannot parse '" + std::string(s) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw std::invalid_argument("value must be finite");
  }
  return v;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  throw std::invalid_argument("expected true/false, got '" + std::string(s) + "'");
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_number(values[i]);
  return out;
}

struct Field {
  std::string key;
  std::function<void(PipelineConfig&, std::string_view)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
Field scalar(std::string key, T PipelineConfig::*member) {
  return {std::move(key),
          [member](PipelineConfig& c, std::string_view v) { c.*member = parse_scalar<T>(v); },
          [member](const PipelineConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_number(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(scalar("schema_version", &PipelineConfig::schema_version));
    f.push_back(scalar("sigma", &PipelineConfig::sigma));
    f.push_back(scalar("window_width", &PipelineConfig::window_width));
    f.push_back(scalar("window_height", &PipelineConfig::window_height));
    f.push_back(scalar("overlap", &PipelineConfig::overlap));
    f.push_back(scalar("min_base", &PipelineConfig::min_base));
    f.push_back(scalar("max_length", &PipelineConfig::max_length));
    f.push_back(scalar("nms_threshold", &PipelineConfig::nms_threshold));
    f.push_back({"merge_mode",
                 [](PipelineConfig& c, std::string_view v) {
                   try {
                     c.merge_mode = parse_merge_mode(v);
                   } catch (const ConfigError& e) {
                     throw std::invalid_argument(e.what());
                   }
                 },
                 [](const PipelineConfig& c) { return std::string(to_string(c.merge_mode)); }});
    f.push_back({"scale_filter", [](PipelineConfig& c, std::string_view v) { c.scale_filter = parse_bool(v); },
                 [](const PipelineConfig& c) { return std::string(c.scale_filter ? "true" : "false"); }});
    f.push_back(scalar("mu", &PipelineConfig::mu));
    f.push_back(scalar("focal_alpha", &PipelineConfig::focal_alpha));
    f.push_back(scalar("focal_gamma", &PipelineConfig::focal_gamma));
    f.push_back({"iou_sweep",
                 [](PipelineConfig& c, std::string_view v) {
                   const auto parts = split(v, ':');
                   if (parts.size() != 3) throw std::invalid_argument("expected start:stop:step");
                   c.iou_sweep = {parse_scalar<double>(parts[0]), parse_scalar<double>(parts[1]),
                                  parse_scalar<double>(parts[2])};
                 },
                 [](const PipelineConfig& c) {
                   return format_number(c.iou_sweep.start) + ":" + format_number(c.iou_sweep.stop) + ":" +
                          format_number(c.iou_sweep.step);
                 }});
    f.push_back({"bin_edges",
                 [](PipelineConfig& c, std::string_view v) {
                   std::vector<double> edges;
                   for (auto part : split(v, ',')) edges.push_back(parse_scalar<double>(part));
                   std::vector<std::string> names;
                   for (const LengthBin& b : c.bins.bins) names.push_back(b.name);
                   names.resize(edges.empty() ? 0 : edges.size() - 1);
                   for (std::size_t i = 0; i < names.size(); ++i) {
                     if (names[i].empty()) names[i] = "bin" + std::to_string(i + 1);
                   }
                   try {
                     c.bins = LengthBins::from_edges(edges, names);
                   } catch (const ConfigError& e) {
                     throw std::invalid_argument(e.what());
                   }
                 },
                 [](const PipelineConfig& c) { return join_numbers(c.bins.edges()); }});
    f.push_back({"bin_names",
                 [](PipelineConfig& c, std::string_view v) {
                   const auto parts = split(v, ',');
                   if (parts.size() != c.bins.bins.size()) {
                     throw std::invalid_argument("bin_names must list one name per bin (set bin_edges first)");
                   }
                   for (std::size_t i = 0; i < parts.size(); ++i) c.bins.bins[i].name = std::string(parts[i]);
                 },
                 [](const PipelineConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.bins.bins.size(); ++i) out += (i ? "," : "") + c.bins.bins[i].name;
                   return out;
                 }});
    f.push_back(scalar("seed", &PipelineConfig::seed));
    f.push_back(scalar("workers", &PipelineConfig::workers));
    f.push_back(scalar("scene_height", &PipelineConfig::scene_height));
    f.push_back(scalar("scene_width", &PipelineConfig::scene_width));
    f.push_back({"scene_per_bin",
                 [](PipelineConfig& c, std::string_view v) {
                   c.scene_per_bin.clear();
                   for (auto part : split(v, ',')) c.scene_per_bin.push_back(parse_scalar<int>(part));
                 },
                 [](const PipelineConfig& c) {
                   std::string out;
                   for (std::size_t i = 0; i < c.scene_per_bin.size(); ++i) {
                     out += (i ? "," : "") + std::to_string(c.scene_per_bin[i]);
                   }
                   return out;
                 }});
    f.push_back(scalar("scene_min_length", &PipelineConfig::scene_min_length));
    f.push_back(scalar("scene_aspect_min", &PipelineConfig::scene_aspect_min));
    f.push_back(scalar("scene_aspect_max", &PipelineConfig::scene_aspect_max));
    f.push_back(scalar("scene_min_short_side", &PipelineConfig::scene_min_short_side));
    f.push_back(scalar("scene_max_iou", &PipelineConfig::scene_max_iou));
    f.push_back(scalar("jitter_center", &PipelineConfig::jitter_center));
    f.push_back(scalar("jitter_size", &PipelineConfig::jitter_size));
    f.push_back(scalar("jitter_angle", &PipelineConfig::jitter_angle));
    f.push_back(scalar("miss_rate", &PipelineConfig::miss_rate));
    f.push_back(scalar("fp_rate", &PipelineConfig::fp_rate));
    return f;
  }();
  return table;
}

}  // namespace

SceneSpec PipelineConfig::scene_spec() const {
  SceneSpec s;
  s.height = scene_height;
  s.width = scene_width;
  s.bins = bins;
  s.per_bin = scene_per_bin;
  s.min_length = scene_min_length;
  s.aspect_min = scene_aspect_min;
  s.aspect_max = scene_aspect_max;
  s.min_short_side = scene_min_short_side;
  s.max_pairwise_iou = scene_max_iou;
  s.seed = mix_seed(seed, 0);
  return s;
}

PerturbSpec PipelineConfig::perturb_spec() const {
  return {jitter_center, jitter_size, jitter_angle, miss_rate, fp_rate, mix_seed(seed, 1)};
}

void PipelineConfig::validate() const {
  if (schema_version != kConfigSchemaVersion) {
    throw ConfigError("unsupported config schema_version " + std::to_string(schema_version));
  }
  if (!(sigma > 1.0)) throw ConfigError("sigma must be > 1");
  if (window_width < 1 || window_height < 1) throw ConfigError("window must be at least 1x1");
  if (overlap < 0 || overlap >= std::min(window_width, window_height)) {
    throw ConfigError("overlap must satisfy 0 <= overlap < window size");
  }
  if (!(min_base > 0.0) || !(max_length > min_base)) throw ConfigError("need 0 < min_base < max_length");
  if (!(nms_threshold >= 0.0 && nms_threshold <= 1.0)) throw ConfigError("nms_threshold must lie in [0, 1]");
  if (!(mu > 0.0)) throw ConfigError("mu must be positive");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (scene_per_bin.size() != bins.bins.size()) {
    throw ConfigError("scene_per_bin needs one count per length bin");
  }
  iou_sweep.thresholds();
}

PipelineConfig parse_config(std::istream& in, const std::string& source) {
  PipelineConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    if (trim(view).empty()) continue;
    const auto eq = view.find('=');
    const std::size_t key_col = view.find_first_not_of(" \t") + 1;
    if (eq == std::string_view::npos) throw ParseError(source, line_no, key_col, "expected 'key = value'");
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    const std::size_t value_col = value.empty() ? eq + 2 : static_cast<std::size_t>(value.data() - line.data()) + 1;

    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
    if (it == table.end()) throw ParseError(source, line_no, key_col, "unknown key '" + std::string(key) + "'");
    try {
      it->set(config, value);
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, value_col, std::string(key) + ": " + e.what());
    }
  }
  try {
    config.validate();
  } catch (const ConfigError& e) {
    throw ParseError(source, 0, 0, e.what());
  }
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  return parse_config(in, path);
}

std::string serialize_config(const PipelineConfig& config) {
  std::string out = "# holodet pipeline configuration\n";
  for (const Field& f : fields()) out += f.key + " = " + f.get(config) + "\n";
  return out;
}

}  // namespace holodet
