#include "hybridloc/config.hpp"

#include "hybridloc/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hybridloc {
namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed so that
// leftovers can be reported.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ParseError(where() + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) throw ParseError(where(key) + ": expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_integer()) throw ParseError(where(key) + ": expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number_unsigned())
      throw ParseError(where(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_boolean()) throw ParseError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_string()) throw ParseError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  const json& array(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ParseError(where(key) + ": expected an array");
    return v;
  }

  std::string where(const std::string& key = {}) const {
    if (key.empty()) return path_.empty() ? "config" : "key '" + path_ + "'";
    return "key '" + (path_.empty() ? key : path_ + "." + key) + "'";
  }

  void reject_unknown() const {
    for (const auto& [key, _] : node_.items()) {
      if (!seen_.contains(key)) throw ParseError("unknown " + where(key));
    }
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

AnchorLayout parse_layout(const json& node) {
  Section s(node, "layout");
  const AnchorId reference = s.string("reference", "");
  std::vector<Anchor> anchors;
  const json& list = s.array("anchors");
  for (std::size_t i = 0; i < list.size(); ++i) {
    Section a(list[i], "layout.anchors[" + std::to_string(i) + "]");
    Anchor anchor;
    anchor.id = a.string("id", "");
    anchor.position = {a.number("x", NAN), a.number("y", NAN)};
    anchor.caps.ble = a.boolean("ble", true);
    anchor.caps.uwb = a.boolean("uwb", true);
    if (a.has("p0")) anchor.p0 = a.number("p0", 0.0);
    a.reject_unknown();
    anchors.push_back(std::move(anchor));
  }
  s.reject_unknown();
  return AnchorLayout(std::move(anchors), reference);
}

ReferencePath parse_path(const json& node) {
  Section s(node, "path");
  const double speed = s.number("speed", 1.0);
  std::vector<Point2> waypoints;
  const json& list = s.array("waypoints");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& p = list[i];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ParseError("key 'path.waypoints[" + std::to_string(i) + "]': expected [x, y]");
    waypoints.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  s.reject_unknown();
  return ReferencePath(std::move(waypoints), speed);
}

void check_config(const ExperimentConfig& cfg) {
  validate(cfg.path_loss);
  validate(cfg.noise);
  validate(cfg.schedule);
  try {
    validate(cfg.ukf);
    validate(MotionModel{1.0, cfg.sigma_ax2});
  } catch (const InvalidArgument& e) {
    throw ValidationError(e.what());
  }
  if (cfg.filters.empty()) throw ValidationError("filters must not be empty");
  std::set<FilterKind> unique(cfg.filters.begin(), cfg.filters.end());
  if (unique.size() != cfg.filters.size()) throw ValidationError("filters has duplicates");
  if (cfg.runs < 1) throw ValidationError("runs must be >= 1");
  if (!(cfg.init.sigma_p > 0.0) || !(cfg.init.sigma_v > 0.0))
    throw ValidationError("init sigmas must be > 0");
  if (cfg.init_frames < 1) throw ValidationError("init.frames must be >= 1");
  for (double t : cfg.thresholds) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("thresholds must be > 0");
  }
  if (cfg.thresholds.empty()) throw ValidationError("thresholds must not be empty");
  if (cfg.output_dir.empty()) throw ValidationError("output_dir must not be empty");
}

const char* form_name(CovarianceForm f) {
  return f == CovarianceForm::kJoseph ? "joseph" : "standard";
}

}  // namespace

TrackerModels ExperimentConfig::tracker_models() const {
  TrackerModels m;
  m.sigma_ax2 = sigma_ax2;
  m.path_loss = path_loss;
  m.ukf = ukf;
  m.ekf = ekf;
  return m;
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig cfg;
  cfg.preset = std::string(name);
  if (name == "default") return cfg;
  if (name == "paper-highrate") {
    cfg.schedule.uwb_rate = 3.0;
    cfg.schedule.decimation = 1;
    cfg.runs = 100;
    return cfg;
  }
  if (name == "paper-lowrate") {
    cfg.schedule.uwb_rate = 3.0;
    cfg.schedule.decimation = 6;
    cfg.noise.rss_sigma = 6.0;
    cfg.noise.toa_sigma = 2e-9;
    cfg.runs = 100;
    return cfg;
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }

  Section root(doc, "");
  ExperimentConfig cfg = preset_config(root.string("preset", "default"));

  if (root.has("layout")) cfg.layout = parse_layout(root.raw("layout"));
  if (root.has("path")) cfg.path = parse_path(root.raw("path"));

  if (root.has("path_loss")) {
    Section s(root.raw("path_loss"), "path_loss");
    cfg.path_loss.p0 = s.number("p0", cfg.path_loss.p0);
    cfg.path_loss.gamma = s.number("gamma", cfg.path_loss.gamma);
    cfg.path_loss.d0 = s.number("d0", cfg.path_loss.d0);
    s.reject_unknown();
  }
  if (root.has("motion")) {
    Section s(root.raw("motion"), "motion");
    cfg.sigma_ax2 = s.number("sigma_ax2", cfg.sigma_ax2);
    s.reject_unknown();
  }
  if (root.has("noise")) {
    Section s(root.raw("noise"), "noise");
    cfg.noise.rss_sigma = s.number("rss_sigma", cfg.noise.rss_sigma);
    cfg.noise.toa_sigma = s.number("toa_sigma", cfg.noise.toa_sigma);
    s.reject_unknown();
  }
  if (root.has("schedule")) {
    Section s(root.raw("schedule"), "schedule");
    cfg.schedule.ble_rate = s.number("ble_rate", cfg.schedule.ble_rate);
    const bool has_rate = s.has("uwb_rate");
    const bool has_period = s.has("uwb_period");
    if (has_rate && has_period)
      throw ValidationError("schedule: give uwb_rate or uwb_period, not both");
    cfg.schedule.uwb_rate = s.number("uwb_rate", cfg.schedule.uwb_rate);
    if (has_period) {
      const double period = s.number("uwb_period", 0.0);
      if (!(period > 0.0)) throw ValidationError("schedule.uwb_period must be > 0");
      cfg.schedule.uwb_rate = 1.0 / period;
    }
    cfg.schedule.decimation =
        static_cast<int>(s.integer("decimation", cfg.schedule.decimation));
    cfg.schedule.epoch_origin = s.number("epoch_origin", cfg.schedule.epoch_origin);
    s.reject_unknown();
  }
  if (root.has("ukf")) {
    Section s(root.raw("ukf"), "ukf");
    cfg.ukf.alpha = s.number("alpha", cfg.ukf.alpha);
    cfg.ukf.kappa = s.number("kappa", cfg.ukf.kappa);
    cfg.ukf.beta = s.number("beta", cfg.ukf.beta);
    s.reject_unknown();
  }
  if (root.has("ekf")) {
    Section s(root.raw("ekf"), "ekf");
    const std::string form = s.string("covariance_form", form_name(cfg.ekf.form));
    if (form == "joseph") {
      cfg.ekf.form = CovarianceForm::kJoseph;
    } else if (form == "standard") {
      cfg.ekf.form = CovarianceForm::kStandard;
    } else {
      throw ValidationError("ekf.covariance_form must be 'joseph' or 'standard'");
    }
    s.reject_unknown();
  }
  if (root.has("init")) {
    Section s(root.raw("init"), "init");
    cfg.init.sigma_p = s.number("sigma_p", cfg.init.sigma_p);
    cfg.init.sigma_v = s.number("sigma_v", cfg.init.sigma_v);
    cfg.init_frames = static_cast<int>(s.integer("frames", cfg.init_frames));
    s.reject_unknown();
  }
  if (root.has("filters")) {
    cfg.filters.clear();
    for (const json& f : root.array("filters")) {
      if (!f.is_string()) throw ParseError("key 'filters': expected strings");
      try {
        cfg.filters.push_back(parse_filter_kind(f.get<std::string>()));
      } catch (const InvalidArgument& e) {
        throw ValidationError(e.what());
      }
    }
  }
  if (root.has("thresholds")) {
    cfg.thresholds.clear();
    for (const json& t : root.array("thresholds")) {
      if (!t.is_number()) throw ParseError("key 'thresholds': expected numbers");
      cfg.thresholds.push_back(t.get<double>());
    }
  }
  cfg.runs = static_cast<int>(root.integer("runs", cfg.runs));
  cfg.seed = root.unsigned_integer("seed", cfg.seed);
  cfg.output_dir = root.string("output_dir", cfg.output_dir);
  root.reject_unknown();

  check_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open config " + file.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  using ojson = nlohmann::ordered_json;
  ojson anchors = ojson::array();
  for (const Anchor& a : cfg.layout.anchors()) {
    ojson j = {{"id", a.id}, {"x", a.position.x()}, {"y", a.position.y()},
              {"ble", a.caps.ble}, {"uwb", a.caps.uwb}};
    if (a.p0) j["p0"] = *a.p0;
    anchors.push_back(std::move(j));
  }
  ojson waypoints = ojson::array();
  for (const Point2& p : cfg.path.waypoints()) waypoints.push_back({p.x(), p.y()});
  ojson filters = ojson::array();
  for (FilterKind k : cfg.filters) filters.push_back(std::string(to_string(k)));

  // Insertion order keeps the echo stable and readable.
  ojson doc;
  doc["preset"] = cfg.preset;
  doc["layout"] = {{"reference", cfg.layout.reference_id()}, {"anchors", anchors}};
  doc["path"] = {{"speed", cfg.path.speed()}, {"waypoints", waypoints}};
  doc["path_loss"] = {{"p0", cfg.path_loss.p0}, {"gamma", cfg.path_loss.gamma},
                      {"d0", cfg.path_loss.d0}};
  doc["motion"] = {{"sigma_ax2", cfg.sigma_ax2}};
  doc["noise"] = {{"rss_sigma", cfg.noise.rss_sigma}, {"toa_sigma", cfg.noise.toa_sigma}};
  doc["schedule"] = {{"ble_rate", cfg.schedule.ble_rate},
                     {"uwb_rate", cfg.schedule.uwb_rate},
                     {"decimation", cfg.schedule.decimation},
                     {"epoch_origin", cfg.schedule.epoch_origin}};
  doc["ukf"] = {{"alpha", cfg.ukf.alpha}, {"kappa", cfg.ukf.kappa}, {"beta", cfg.ukf.beta}};
  doc["ekf"] = {{"covariance_form", form_name(cfg.ekf.form)}};
  doc["init"] = {{"sigma_p", cfg.init.sigma_p}, {"sigma_v", cfg.init.sigma_v},
                 {"frames", cfg.init_frames}};
  doc["filters"] = filters;
  doc["thresholds"] = cfg.thresholds;
  doc["runs"] = cfg.runs;
  doc["seed"] = cfg.seed;
  doc["output_dir"] = cfg.output_dir;
  return doc.dump(2);
}

}  // namespace hybridloc
