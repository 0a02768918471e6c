// Copyright 2026 The nomasched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nomasched/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace nomasched {

namespace {

using nlohmann::json;

std::string type_name(const json& v) {
  if (v.is_number_integer()) return "integer";
  if (v.is_number_float()) return "number";
  return v.type_name();
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) {
    throw ConfigError(path, "expected number, got " + type_name(v));
  }
  return v.get<double>();
}

long long get_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) {
    throw ConfigError(path, "expected integer, got " + type_name(v));
  }
  return v.get<long long>();
}

int get_int(const json& v, const std::string& path) {
  const long long x = get_integer(v, path);
  if (x < std::numeric_limits<int>::min() ||
      x > std::numeric_limits<int>::max()) {
    throw ConfigError(path, "integer out of range");
  }
  return static_cast<int>(x);
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) {
    throw ConfigError(path, "expected boolean, got " + type_name(v));
  }
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) {
    throw ConfigError(path, "expected string, got " + type_name(v));
  }
  return v.get<std::string>();
}

SchedulerKind get_kind(const json& v, const std::string& path) {
  const std::string name = get_string(v, path);
  const auto kind = parse_scheduler_kind(name);
  if (!kind) throw ConfigError(path, "unknown scheduler '" + name + "'");
  return *kind;
}

template <typename Enum>
Enum get_enum(const json& v, const std::string& path,
              const std::map<std::string, Enum>& names) {
  const std::string name = get_string(v, path);
  const auto it = names.find(name);
  if (it == names.end())
    throw ConfigError(path, "unknown value '" + name + "'");
  return it->second;
}

template <typename Enum>
std::string enum_name(Enum e, const std::map<std::string, Enum>& names) {
  for (const auto& [k, v] : names) {
    if (v == e) return k;
  }
  return "";
}

const std::map<std::string, FirstSlotRule> kFirstSlotRules = {
    {"weighted", FirstSlotRule::kWeightedKinds},
    {"all", FirstSlotRule::kAllKinds},
    {"none", FirstSlotRule::kNone}};
const std::map<std::string, SubbandOrder> kSubbandOrders = {
    {"ascending", SubbandOrder::kAscending}, {"random", SubbandOrder::kRandom}};
const std::map<std::string, FadingModel> kFadingModels = {
    {"ar1", FadingModel::kAutoregressive},
    {"sum_of_sinusoids", FadingModel::kSumOfSinusoids}};

std::vector<ServiceClass> parse_services(const json& v) {
  if (!v.is_array()) {
    throw ConfigError("services", "expected array, got " + type_name(v));
  }
  std::vector<ServiceClass> out;
  UserId next_user = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string path = "services[" + std::to_string(i) + "]";
    const json& item = v[i];
    if (!item.is_object()) {
      throw ConfigError(path, "expected object, got " + type_name(item));
    }
    ServiceClass svc;
    bool has_target = false;
    bool has_members = false;
    for (const auto& [key, val] : item.items()) {
      const std::string kp = path + "." + key;
      if (key == "name") {
        svc.name = get_string(val, kp);
      } else if (key == "target_rate_bps") {
        svc.target_rate_bps = get_number(val, kp);
        has_target = true;
      } else if (key == "users") {
        if (!val.is_array()) {
          throw ConfigError(kp, "expected array, got " + type_name(val));
        }
        for (std::size_t j = 0; j < val.size(); ++j) {
          const long long id =
              get_integer(val[j], kp + "[" + std::to_string(j) + "]");
          if (id < 0) throw ConfigError(kp, "user ids must be >= 0");
          svc.users.push_back(static_cast<UserId>(id));
        }
        has_members = true;
      } else if (key == "count") {
        const int count = get_int(val, kp);
        if (count < 1) throw ConfigError(kp, "must be >= 1");
        for (int j = 0; j < count; ++j) svc.users.push_back(next_user++);
        has_members = true;
      } else {
        throw ConfigError(kp, "unknown key");
      }
    }
    if (item.contains("users") && item.contains("count")) {
      throw ConfigError(path, "give either users or count, not both");
    }
    if (!has_target) throw ConfigError(path + ".target_rate_bps", "required");
    if (!has_members) throw ConfigError(path + ".users", "required");
    if (svc.name.empty()) svc.name = "class" + std::to_string(i);
    out.push_back(std::move(svc));
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c;
  if (doc.is_null()) {
    c.validate();
    return c;
  }
  if (!doc.is_object()) {
    throw ConfigError("<root>", "expected object, got " + type_name(doc));
  }
  for (const auto& [key, v] : doc.items()) {
    if (key == "bandwidth_hz") {
      c.geometry.bandwidth_hz = get_number(v, key);
    } else if (key == "num_subbands") {
      c.geometry.num_subbands = get_int(v, key);
    } else if (key == "pmax_dbm") {
      c.geometry.bs_power_dbm = get_number(v, key);
    } else if (key == "noise_psd_mw_per_hz") {
      c.geometry.noise_psd_mw_per_hz = get_number(v, key);
    } else if (key == "cell_radius_m") {
      c.geometry.radius_m = get_number(v, key);
    } else if (key == "min_distance_m") {
      c.geometry.min_distance_m = get_number(v, key);
    } else if (key == "carrier_hz") {
      c.geometry.carrier_hz = get_number(v, key);
    } else if (key == "shadowing_std_db") {
      c.geometry.shadowing_std_db = get_number(v, key);
    } else if (key == "num_users") {
      c.num_users = get_int(v, key);
    } else if (key == "max_users_per_subband") {
      c.max_users_per_subband = get_int(v, key);
    } else if (key == "min_users_per_subband") {
      c.min_users_per_subband = get_int(v, key);
    } else if (key == "scheduler") {
      c.schedulers.clear();
      if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          c.schedulers.push_back(
              get_kind(v[i], key + "[" + std::to_string(i) + "]"));
        }
      } else {
        c.schedulers.push_back(get_kind(v, key));
      }
    } else if (key == "t_c") {
      c.t_c = get_number(v, key);
    } else if (key == "b_factor") {
      c.b = get_number(v, key);
    } else if (key == "ftpa_alpha") {
      c.ftpa_alpha = get_number(v, key);
    } else if (key == "num_slots") {
      c.num_slots = get_int(v, key);
    } else if (key == "num_drops") {
      c.num_drops = get_int(v, key);
    } else if (key == "seed") {
      if (!v.is_number_unsigned() &&
          !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw ConfigError(key,
                          "expected nonnegative integer, got " + type_name(v));
      }
      c.seed = v.get<std::uint64_t>();
    } else if (key == "velocity_kmh") {
      c.velocity_kmh = get_number(v, key);
    } else if (key == "services") {
      c.services = parse_services(v);
    } else if (key == "epsilon_rate") {
      c.epsilon_rate = get_number(v, key);
    } else if (key == "weight_floor") {
      c.weight_floor = get_number(v, key);
    } else if (key == "clamp_weights") {
      c.clamp_weights = get_bool(v, key);
    } else if (key == "first_slot_rule") {
      c.first_slot_rule = get_enum(v, key, kFirstSlotRules);
    } else if (key == "subband_order") {
      c.subband_order = get_enum(v, key, kSubbandOrders);
    } else if (key == "cell_edge_percentile") {
      c.cell_edge_percentile = get_number(v, key);
    } else if (key == "fading_model") {
      c.fading_model = get_enum(v, key, kFadingModels);
    } else if (key == "num_sinusoids") {
      c.num_sinusoids = get_int(v, key);
    } else if (key == "threads") {
      c.threads = get_int(v, key);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config_string(const std::string& text) {
  // Blank input means "all defaults".
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return parse_config(json());
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["bandwidth_hz"] = c.geometry.bandwidth_hz;
  j["num_subbands"] = c.geometry.num_subbands;
  j["pmax_dbm"] = c.geometry.bs_power_dbm;
  j["noise_psd_mw_per_hz"] = c.geometry.noise_psd_mw_per_hz;
  j["cell_radius_m"] = c.geometry.radius_m;
  j["min_distance_m"] = c.geometry.min_distance_m;
  j["carrier_hz"] = c.geometry.carrier_hz;
  j["shadowing_std_db"] = c.geometry.shadowing_std_db;
  j["num_users"] = c.num_users;
  j["max_users_per_subband"] = c.max_users_per_subband;
  j["min_users_per_subband"] = c.min_users_per_subband;
  json kinds = json::array();
  for (SchedulerKind k : c.schedulers)
    kinds.push_back(std::string(to_string(k)));
  j["scheduler"] = kinds;
  j["t_c"] = c.t_c;
  j["b_factor"] = c.b;
  j["ftpa_alpha"] = c.ftpa_alpha;
  j["num_slots"] = c.num_slots;
  j["num_drops"] = c.num_drops;
  j["seed"] = c.seed;
  j["velocity_kmh"] = c.velocity_kmh;
  json services = json::array();
  for (const auto& s : c.services) {
    services.push_back({{"name", s.name},
                        {"target_rate_bps", s.target_rate_bps},
                        {"users", s.users}});
  }
  j["services"] = services;
  j["epsilon_rate"] = c.epsilon_rate;
  j["weight_floor"] = c.weight_floor;
  j["clamp_weights"] = c.clamp_weights;
  j["first_slot_rule"] = enum_name(c.first_slot_rule, kFirstSlotRules);
  j["subband_order"] = enum_name(c.subband_order, kSubbandOrders);
  j["cell_edge_percentile"] = c.cell_edge_percentile;
  j["fading_model"] = enum_name(c.fading_model, kFadingModels);
  j["num_sinusoids"] = c.num_sinusoids;
  j["threads"] = c.threads;
  return j;
}

std::vector<OutputRow> metric_rows(const std::string& experiment_id,
                                   const ExperimentConfig& config,
                                   const ExperimentResult& result) {
  const auto& a = result.aggregate;
  OutputRow base;
  base.experiment_id = experiment_id;
  base.scheduler = std::string(to_string(result.kind));
  base.num_users = config.num_users;
  base.num_subbands = config.geometry.num_subbands;
  base.num_drops = static_cast<int>(result.drops.size());

  std::vector<OutputRow> rows;
  auto add = [&](std::string metric, double value, std::string unit) {
    OutputRow r = base;
    r.metric = std::move(metric);
    r.value = value;
    r.unit = std::move(unit);
    rows.push_back(std::move(r));
  };
  add("system_throughput", a.system_throughput_bps, "bps");
  add("system_throughput_se", a.system_throughput_se_bps, "bps");
  add("gini_long", a.gini_long, "1");
  add("cell_edge_throughput", a.cell_edge_bps, "bps");
  add("service_utility", a.service_utility, "log(bps)");
  if (!a.gini_short.empty()) add("gini_short_final", a.gini_short.back(), "1");
  for (const auto& g : a.groups) {
    add("group_rate[" + g.name + "]", g.mean_group_rate_bps, "bps");
    add("group_gini[" + g.name + "]", g.mean_gini, "1");
    add("group_success[" + g.name + "]", g.success_fraction, "fraction");
  }
  return rows;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string rows_to_csv(const std::vector<OutputRow>& rows) {
  std::string out =
      "experiment_id,scheduler,num_users,num_subbands,num_drops,metric,value,"
      "unit\r\n";
  for (const auto& r : rows) {
    out += csv_escape(r.experiment_id) + ',' + csv_escape(r.scheduler) + ',' +
           std::to_string(r.num_users) + ',' + std::to_string(r.num_subbands) +
           ',' + std::to_string(r.num_drops) + ',' + csv_escape(r.metric) +
           ',' + format_double(r.value) + ',' + csv_escape(r.unit) + "\r\n";
  }
  return out;
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json finite_or_null(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(finite_or_null(x));
  return a;
}

}  // namespace

json report_to_json(const MetricsReport& r) {
  json j;
  j["system_throughput_bps"] = finite_or_null(r.system_throughput_bps);
  j["gini_long"] = finite_or_null(r.gini_long);
  j["gini_short"] = finite_or_null(r.gini_short);
  j["cell_edge_bps"] = finite_or_null(r.cell_edge_bps);
  json latency = json::array();
  for (const auto& l : r.rate_latency) {
    latency.push_back(l ? json(*l) : json());
  }
  j["rate_latency_slots"] = latency;
  j["service_utility"] = finite_or_null(r.service_utility);
  j["long_term_rates_bps"] = finite_or_null(r.long_rates);
  json groups = json::array();
  for (const auto& g : r.groups) {
    groups.push_back(
        {{"name", g.name},
         {"target_rate_bps", finite_or_null(g.target_rate_bps)},
         {"group_rate_bps", finite_or_null(g.group_rate_bps)},
         {"min_member_rate_bps", finite_or_null(g.min_member_rate_bps)},
         {"gini", finite_or_null(g.gini)},
         {"success", g.success}});
  }
  j["groups"] = groups;
  return j;
}

json aggregate_to_json(const AggregateReport& a) {
  json j;
  j["system_throughput_bps"] = finite_or_null(a.system_throughput_bps);
  j["system_throughput_se_bps"] = finite_or_null(a.system_throughput_se_bps);
  j["gini_long"] = finite_or_null(a.gini_long);
  j["cell_edge_bps"] = finite_or_null(a.cell_edge_bps);
  j["gini_short"] = finite_or_null(a.gini_short);
  j["service_utility"] = finite_or_null(a.service_utility);
  json groups = json::array();
  for (const auto& g : a.groups) {
    groups.push_back(
        {{"name", g.name},
         {"target_rate_bps", finite_or_null(g.target_rate_bps)},
         {"mean_group_rate_bps", finite_or_null(g.mean_group_rate_bps)},
         {"mean_gini", finite_or_null(g.mean_gini)},
         {"success_fraction", finite_or_null(g.success_fraction)}});
  }
  j["groups"] = groups;
  return j;
}

json experiment_to_json(const ExperimentResult& result) {
  json j;
  j["scheduler"] = std::string(to_string(result.kind));
  j["aggregate"] = aggregate_to_json(result.aggregate);
  json drops = json::array();
  for (const auto& d : result.drops) {
    json dj = report_to_json(d.report);
    dj["drop_index"] = d.drop_index;
    dj["seed"] = d.seed;
    dj["channel_hash"] = d.channel_hash;
    json dist = json::array();
    for (const auto& p : d.placements) dist.push_back(p.distance_m);
    dj["user_distance_m"] = dist;
    drops.push_back(std::move(dj));
  }
  j["drops"] = drops;
  return j;
}

json ratios_to_json(const PropositionRatios& r) {
  json j;
  j["ratio1"] = finite_or_null(r.ratio1);
  j["ratio2"] = finite_or_null(r.ratio2);
  j["log10_ratio2_raw_share"] = finite_or_null(r.log10_ratio2_raw_share);
  json per_user = json::array();
  for (double v : r.per_user_ratio1) per_user.push_back(finite_or_null(v));
  j["per_user_ratio1"] = per_user;
  j["excluded_users"] = r.excluded;
  return j;
}

std::string user_series_csv(const ExperimentResult& result) {
  std::string out = "scheduler,drop,user,slot,rate_bps,historical_rate_bps\r\n";
  const std::string name(to_string(result.kind));
  for (const auto& d : result.drops) {
    const std::size_t K = d.placements.size();
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t t = 0; t < d.user_rate.size(); ++t) {
        out += name + ',' + std::to_string(d.drop_index) + ',' +
               std::to_string(k) + ',' + std::to_string(t + 1) + ',' +
               format_double(d.user_rate[t][k]) + ',' +
               format_double(d.historical_rate[t][k]) + "\r\n";
      }
    }
  }
  return out;
}

std::string gini_short_csv(const std::vector<ExperimentResult>& results) {
  std::string out = "slot,scheduler,gini\r\n";
  for (const auto& r : results) {
    const std::string name(to_string(r.kind));
    for (std::size_t t = 0; t < r.aggregate.gini_short.size(); ++t) {
      out += std::to_string(t + 1) + ',' + name + ',' +
             format_double(r.aggregate.gini_short[t]) + "\r\n";
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path,
                const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace nomasched
