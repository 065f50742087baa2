#include "seqmd/datasets/record.h"

#include <cmath>
#include <sstream>

#include "seqmd/error.h"

namespace seqmd {

const char* TaskName(Task task) {
  switch (task) {
    case Task::kClick: return "click";
    case Task::kAddToCart: return "add_to_cart";
    case Task::kPurchase: return "purchase";
  }
  return "click";
}

Task ParseTask(const std::string& name) {
  if (name == "click") return Task::kClick;
  if (name == "add_to_cart" || name == "cart") return Task::kAddToCart;
  if (name == "purchase") return Task::kPurchase;
  throw ConfigError("unknown task: " + name + " (valid: click, add_to_cart, purchase)");
}

std::vector<Task> DefaultTasks(int k) {
  if (k == 2) return {Task::kClick, Task::kPurchase};
  if (k == 3) return {Task::kClick, Task::kAddToCart, Task::kPurchase};
  throw ConfigError("task count must be 2 or 3, got " + std::to_string(k));
}

std::vector<Task> ParseTaskList(const std::string& text) {
  if (text == "2" || text == "3") return DefaultTasks(text[0] - '0');
  std::vector<Task> tasks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) tasks.push_back(ParseTask(item));
  if (tasks.size() < 2) throw ConfigError("at least two tasks are required: " + text);
  for (std::size_t i = 1; i < tasks.size(); ++i) {
    if (static_cast<int>(tasks[i]) <= static_cast<int>(tasks[i - 1])) {
      throw ConfigError("tasks must be distinct and in funnel order: " + text);
    }
  }
  return tasks;
}

const char* PlatformName(Platform p) { return p == Platform::kWeb ? "web" : "app"; }

Platform ParsePlatform(const std::string& name) {
  if (name == "web") return Platform::kWeb;
  if (name == "app") return Platform::kApp;
  throw FormatError("unknown platform: " + name);
}

bool FunnelLabels::Valid() const {
  auto binary = [](int v) { return v == 0 || v == 1; };
  return binary(click) && binary(cart) && binary(purchase) && purchase <= cart &&
         cart <= click;
}

int FunnelLabels::Get(Task task) const {
  switch (task) {
    case Task::kClick: return click;
    case Task::kAddToCart: return cart;
    case Task::kPurchase: return purchase;
  }
  return 0;
}

void ValidateGroup(const QueryGroup& group, std::size_t m, std::size_t p) {
  const std::string where = "group " + group.query_id + ": ";
  if (group.records.size() < 2) throw FormatError(where + "needs at least 2 candidates");
  for (const InteractionRecord& r : group.records) {
    if (r.query_id != group.query_id || r.region != group.region ||
        r.platform != group.platform) {
      throw FormatError(where + "record does not share query_id/region/platform");
    }
    if (!r.labels.Valid()) {
      throw FormatError(where + "funnel violation (click=" + std::to_string(r.labels.click) +
                        ", cart=" + std::to_string(r.labels.cart) +
                        ", purchase=" + std::to_string(r.labels.purchase) + ")");
    }
    if (r.x_user.size() != m || r.x_listing.size() != p) {
      throw FormatError(where + "feature dimensions differ from header");
    }
    for (double v : r.x_user)
      if (!std::isfinite(v)) throw FormatError(where + "non-finite user feature");
    for (double v : r.x_listing)
      if (!std::isfinite(v)) throw FormatError(where + "non-finite listing feature");
  }
}

std::size_t RecordCount(std::span<const QueryGroup> groups) {
  std::size_t n = 0;
  for (const QueryGroup& g : groups) n += g.records.size();
  return n;
}

}  // namespace seqmd
