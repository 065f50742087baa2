#include "seqmd/datasets/generator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "seqmd/error.h"
#include "seqmd/random.h"

namespace seqmd {
namespace {

double Logit(double p) { return std::log(p / (1.0 - p)); }

double Sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

struct FeatureShift {
  std::vector<std::vector<double>> offset;  // [region][feature]
  std::vector<std::vector<double>> scale;
};

// Region-independent and region-specific parameters of the label model.
// A pure function of (seed, dimensions).
struct World {
  FeatureShift user_shift;
  FeatureShift listing_shift;
  std::vector<double> click_region_bias;
  // [task][feature] over the user block and the listing block (index 0 of
  // the listing block, the domestic indicator, carries no weight).
  std::vector<std::vector<double>> user_weight;
  std::vector<std::vector<double>> listing_weight;
  // [region][listing feature] importance of shifted listing features.
  std::vector<std::vector<double>> listing_importance;
  std::vector<std::vector<double>> user_importance;
};

bool Contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

FeatureShift MakeShift(Rng& rng, const GeneratorConfig& c, int n,
                       const std::vector<int>& shifted) {
  FeatureShift s;
  s.offset.assign(c.regions, std::vector<double>(n, 0.0));
  s.scale.assign(c.regions, std::vector<double>(n, 1.0));
  for (int r = 0; r < c.regions; ++r) {
    for (int f = 0; f < n; ++f) {
      const double a = rng.Uniform(-1.0, 1.0);
      const double b = rng.Uniform(-1.0, 1.0);
      if (!Contains(shifted, f)) continue;
      s.offset[r][f] = c.shift_strength[r] * a;
      s.scale[r][f] = std::exp(0.3 * c.shift_strength[r] * b);
    }
  }
  return s;
}

// Weights for click, cart and purchase; later tasks are correlated with
// earlier ones so that funnel stages share structure.
std::vector<std::vector<double>> MakeTaskWeights(Rng& rng, int n, double gain) {
  std::vector<std::vector<double>> w(3, std::vector<double>(n, 0.0));
  const double scale = gain / std::sqrt(std::max(1, n));
  for (int f = 0; f < n; ++f) {
    w[0][f] = scale * rng.Normal();
    w[1][f] = 0.7 * w[0][f] + 0.7 * scale * rng.Normal();
    w[2][f] = 0.7 * w[1][f] + 0.7 * scale * rng.Normal();
  }
  return w;
}

World MakeWorld(const GeneratorConfig& c) {
  Rng rng(DeriveSeed(c.seed, "world"));
  World w;
  w.user_shift = MakeShift(rng, c, c.user_features, c.shifted_user_features);
  w.listing_shift = MakeShift(rng, c, c.listing_features, c.shifted_listing_features);
  for (int r = 0; r < c.regions; ++r) w.click_region_bias.push_back(0.5 * rng.Normal());
  w.user_weight = MakeTaskWeights(rng, c.user_features, 0.8);
  w.listing_weight = MakeTaskWeights(rng, c.listing_features, 2.0);
  for (auto& task : w.listing_weight) task[0] = 0.0;
  w.listing_importance.assign(c.regions, std::vector<double>(c.listing_features, 1.0));
  w.user_importance.assign(c.regions, std::vector<double>(c.user_features, 1.0));
  for (int r = 0; r < c.regions; ++r) {
    for (int f = 0; f < c.listing_features; ++f) {
      const double g = rng.Uniform(-1.0, 2.0);
      if (Contains(c.shifted_listing_features, f)) w.listing_importance[r][f] = g;
    }
    for (int f = 0; f < c.user_features; ++f) {
      const double g = rng.Uniform(0.0, 2.0);
      if (Contains(c.shifted_user_features, f)) w.user_importance[r][f] = g;
    }
  }
  return w;
}

void RequireRegionVector(const std::vector<double>& v, int regions, const char* name) {
  if (static_cast<int>(v.size()) != regions) {
    throw ConfigError(std::string(name) + " must have one entry per region (" +
                      std::to_string(regions) + "), got " + std::to_string(v.size()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw ConfigError(std::string(name) + " must be finite");
  }
}

void RequireProbability(double p, const char* name) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ConfigError(std::string(name) + " must lie in (0, 1), got " + std::to_string(p));
  }
}

}  // namespace

void GeneratorConfig::Validate() const {
  if (regions < 1) throw ConfigError("regions must be >= 1");
  if (candidates < 2) throw ConfigError("candidates per query must be >= 2");
  if (queries < 1) throw ConfigError("queries must be >= 1");
  if (user_features < 0) throw ConfigError("user_features must be >= 0");
  if (listing_features < 1) throw ConfigError("listing_features must be >= 1");
  RequireRegionVector(region_weights, regions, "region_weights");
  RequireRegionVector(shift_strength, regions, "shift_strength");
  RequireRegionVector(domestic_preference, regions, "domestic_preference");
  RequireRegionVector(domestic_share, regions, "domestic_share");
  double total = 0.0;
  for (double w : region_weights) {
    if (w < 0.0) throw ConfigError("region_weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", total);
    throw ConfigError(std::string("region_weights must sum to 1, got ") + buf);
  }
  for (double s : domestic_share) {
    if (s < 0.0 || s > 1.0) throw ConfigError("domestic_share entries must lie in [0, 1]");
  }
  for (double s : shift_strength) {
    if (s < 0.0) throw ConfigError("shift_strength entries must be >= 0");
  }
  RequireProbability(p_click, "p_click");
  RequireProbability(p_cart_given_click, "p_cart_given_click");
  RequireProbability(p_purchase_given_cart, "p_purchase_given_cart");
  if (app_share < 0.0 || app_share > 1.0) throw ConfigError("app_share must lie in [0, 1]");
  if (signal_strength < 0.0 || !std::isfinite(signal_strength)) {
    throw ConfigError("signal_strength must be a finite non-negative number");
  }
  std::set<int> seen;
  for (int f : shifted_user_features) {
    if (f < 0 || f >= user_features || !seen.insert(f).second) {
      throw ConfigError("shifted_user_features entry out of range or repeated: " +
                        std::to_string(f));
    }
  }
  seen.clear();
  for (int f : shifted_listing_features) {
    if (f < 1 || f >= listing_features || !seen.insert(f).second) {
      throw ConfigError("shifted_listing_features entry out of range or repeated "
                        "(index 0 is the domestic indicator): " + std::to_string(f));
    }
  }
}

void to_json(Json& j, const GeneratorConfig& c) {
  j = Json{{"seed", c.seed},
           {"regions", c.regions},
           {"region_weights", c.region_weights},
           {"user_features", c.user_features},
           {"listing_features", c.listing_features},
           {"queries", c.queries},
           {"candidates", c.candidates},
           {"shift_strength", c.shift_strength},
           {"shifted_user_features", c.shifted_user_features},
           {"shifted_listing_features", c.shifted_listing_features},
           {"p_click", c.p_click},
           {"p_cart_given_click", c.p_cart_given_click},
           {"p_purchase_given_cart", c.p_purchase_given_cart},
           {"domestic_preference", c.domestic_preference},
           {"domestic_share", c.domestic_share},
           {"signal_strength", c.signal_strength},
           {"app_share", c.app_share}};
}

void from_json(const Json& j, GeneratorConfig& c) {
  RejectUnknownKeys(j,
                    {"seed", "regions", "region_weights", "user_features",
                     "listing_features", "queries", "candidates", "shift_strength",
                     "shifted_user_features", "shifted_listing_features", "p_click",
                     "p_cart_given_click", "p_purchase_given_cart", "domestic_preference",
                     "domestic_share", "signal_strength", "app_share"},
                    "generator config");
  ReadOptional(j, "seed", c.seed);
  ReadOptional(j, "regions", c.regions);
  ReadOptional(j, "region_weights", c.region_weights);
  ReadOptional(j, "user_features", c.user_features);
  ReadOptional(j, "listing_features", c.listing_features);
  ReadOptional(j, "queries", c.queries);
  ReadOptional(j, "candidates", c.candidates);
  ReadOptional(j, "shift_strength", c.shift_strength);
  ReadOptional(j, "shifted_user_features", c.shifted_user_features);
  ReadOptional(j, "shifted_listing_features", c.shifted_listing_features);
  ReadOptional(j, "p_click", c.p_click);
  ReadOptional(j, "p_cart_given_click", c.p_cart_given_click);
  ReadOptional(j, "p_purchase_given_cart", c.p_purchase_given_cart);
  ReadOptional(j, "domestic_preference", c.domestic_preference);
  ReadOptional(j, "domestic_share", c.domestic_share);
  ReadOptional(j, "signal_strength", c.signal_strength);
  ReadOptional(j, "app_share", c.app_share);
}

namespace {

QueryGroup GenerateGroupWithWorld(const GeneratorConfig& c, const World& w,
                                  int query_index) {
  Rng rng(DeriveSeed(c.seed, static_cast<std::uint64_t>(query_index)));
  QueryGroup g;
  char id[32];
  std::snprintf(id, sizeof id, "q%07d", query_index);
  g.query_id = id;
  g.region = static_cast<int>(rng.Categorical(c.region_weights));
  g.platform = rng.Bernoulli(c.app_share) ? Platform::kApp : Platform::kWeb;
  const int r = g.region;
  const double s = c.signal_strength;

  std::vector<double> x_user(c.user_dim(), 0.0);
  double user_term[3] = {0.0, 0.0, 0.0};
  for (int f = 0; f < c.user_features; ++f) {
    const double z = rng.Normal();
    x_user[f] = w.user_shift.scale[r][f] * z + w.user_shift.offset[r][f];
    for (int t = 0; t < 3; ++t) user_term[t] += w.user_weight[t][f] * w.user_importance[r][f] * z;
  }
  x_user[c.user_features + r] = 1.0;

  const double click_base = Logit(c.p_click) +
                            s * (w.click_region_bias[r] + user_term[0] +
                                 (g.platform == Platform::kApp ? 0.3 : 0.0));
  const double cart_base = Logit(c.p_cart_given_click) + s * user_term[1];
  const double buy_base = Logit(c.p_purchase_given_cart) + s * user_term[2];

  for (int i = 0; i < c.candidates; ++i) {
    InteractionRecord rec;
    rec.query_id = g.query_id;
    rec.region = r;
    rec.platform = g.platform;
    const bool domestic = c.regions == 1 || rng.Bernoulli(c.domestic_share[r]);
    if (domestic) {
      rec.listing_region = r;
    } else {
      const int other = static_cast<int>(rng.UniformInt(c.regions - 1));
      rec.listing_region = other >= r ? other + 1 : other;
    }
    rec.x_user = x_user;
    rec.x_listing.assign(c.listing_features, 0.0);
    rec.x_listing[0] = domestic ? 1.0 : 0.0;
    double term[3] = {0.0, 0.0, 0.0};
    for (int f = 1; f < c.listing_features; ++f) {
      const double z = rng.Normal();
      rec.x_listing[f] = w.listing_shift.scale[r][f] * z + w.listing_shift.offset[r][f];
      for (int t = 0; t < 3; ++t) {
        term[t] += w.listing_weight[t][f] * w.listing_importance[r][f] * z;
      }
    }
    const double dom = domestic ? c.domestic_preference[r] : 0.0;
    const double u_click = rng.Uniform01();
    const double u_cart = rng.Uniform01();
    const double u_buy = rng.Uniform01();
    rec.labels.click = u_click < Sigmoid(click_base + s * term[0]) ? 1 : 0;
    rec.labels.cart =
        rec.labels.click && u_cart < Sigmoid(cart_base + s * term[1]) ? 1 : 0;
    rec.labels.purchase =
        rec.labels.cart && u_buy < Sigmoid(buy_base + s * term[2] + dom) ? 1 : 0;
    g.records.push_back(std::move(rec));
  }
  return g;
}

}  // namespace

QueryGroup GenerateGroup(const GeneratorConfig& config, int query_index) {
  config.Validate();
  return GenerateGroupWithWorld(config, MakeWorld(config), query_index);
}

std::vector<QueryGroup> Generate(const GeneratorConfig& config) {
  return GenerateRange(config, 0, config.queries);
}

std::vector<QueryGroup> GenerateRange(const GeneratorConfig& config, int first, int count) {
  config.Validate();
  if (first < 0 || count < 0) throw ConfigError("query range must be non-negative");
  const World world = MakeWorld(config);
  std::vector<QueryGroup> groups;
  groups.reserve(count);
  for (int q = first; q < first + count; ++q) {
    groups.push_back(GenerateGroupWithWorld(config, world, q));
  }
  return groups;
}

std::vector<int> CountryFeatureIndices(int user_features, int regions) {
  std::vector<int> idx;
  for (int r = 0; r < regions; ++r) idx.push_back(user_features + r);
  return idx;
}

std::vector<int> CountryFeatureIndices(const GeneratorConfig& config) {
  return CountryFeatureIndices(config.user_features, config.regions);
}

std::vector<int> PlantedDependentFeatures(const GeneratorConfig& c) {
  std::vector<int> out;
  const bool any_shift = std::any_of(c.shift_strength.begin(), c.shift_strength.end(),
                                     [](double s) { return s > 0.0; });
  if (any_shift) {
    for (int f : c.shifted_user_features) out.push_back(f);
  }
  const bool shares_differ =
      c.regions > 1 &&
      std::any_of(c.domestic_share.begin(), c.domestic_share.end(),
                  [&](double s) { return s != c.domestic_share.front(); });
  if (shares_differ) out.push_back(c.user_dim());
  if (any_shift) {
    for (int f : c.shifted_listing_features) out.push_back(c.user_dim() + f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace seqmd
